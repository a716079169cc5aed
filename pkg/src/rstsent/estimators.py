"""scikit-learn compatible estimators over discourse-parsed documents.

``X`` is a sequence of :class:`~rstsent.corpus.Document` (or bare
:class:`~rstsent.rst_tree.RstTree` objects); ``y`` holds labels in {-1, +1}.

* :class:`DiscourseVectorizer` -- (depth-weighted) bag-of-words features.
* :class:`LexiconClassifier` -- lexicon scores, flat or depth-weighted.
* :class:`DiscourseLogisticRegression` -- logistic regression, flat or depth-weighted.
* :class:`R2N2Classifier` -- recursive composition over the discourse tree.
"""

from __future__ import annotations

import os
from collections.abc import Mapping

import numpy as np
import scipy.sparse as sp
from sklearn.base import BaseEstimator, ClassifierMixin, TransformerMixin
from sklearn.utils.validation import check_is_fitted

from .depdt import to_depdt
from .exceptions import ConfigError
from .features import Vocabulary, build_vocab, lexicon_weights, read_lexicon, vectorize
from .logreg import DEFAULT_REG_GRID, train_logreg
from .r2n2 import R2n2Config, compile_tree, forward, init_params, train_r2n2
from .scoring import depth_weight, score_depth_weighted, score_flat
from .validation import check_documents, check_labels, document_labels

__all__ = [
    "DiscourseVectorizer",
    "LexiconClassifier",
    "DiscourseLogisticRegression",
    "R2N2Classifier",
]

WEIGHTINGS = ("flat", "depth")


def _check_weighting(weighting):
    if weighting not in WEIGHTINGS:
        raise ConfigError(f"weighting must be one of {WEIGHTINGS}, got {weighting!r}")


def _fit_labels(docs, y):
    if y is None:
        return document_labels(docs)
    return check_labels(y, len(docs))


def edu_vectors(doc, vocab):
    return [vectorize(tokens, vocab) for tokens in doc.edu_tokens]


def edu_weights(doc, weighting):
    if weighting == "flat":
        return [1.0] * len(doc.edu_texts)
    depth = to_depdt(doc.tree).depth
    return [depth_weight(depth[i]) for i in range(1, len(doc.edu_texts) + 1)]


def _load_polarity(lexicon):
    if isinstance(lexicon, Mapping):
        return {str(k).lower(): int(v) for k, v in lexicon.items()}
    if isinstance(lexicon, (str, os.PathLike)):
        with open(lexicon, "rb") as fh:
            return read_lexicon(fh)
    raise ConfigError("lexicon must be a path or a word -> polarity mapping")


class DiscourseVectorizer(TransformerMixin, BaseEstimator):
    """Rows are ``sum_i weight_i * w_i`` over the EDUs of each document."""

    def __init__(self, min_count=1, weighting="flat"):
        self.min_count = min_count
        self.weighting = weighting

    def fit(self, X, y=None):
        _check_weighting(self.weighting)
        docs = check_documents(X)
        self.vocabulary_ = build_vocab((doc.tokens for doc in docs), self.min_count)
        return self

    def transform(self, X, weighting=None):
        check_is_fitted(self, "vocabulary_")
        weighting = weighting or self.weighting
        _check_weighting(weighting)
        docs = check_documents(X, require_trees=weighting == "depth")
        rows, cols, vals = [], [], []
        for r, doc in enumerate(docs):
            acc = {}
            for bow, lam in zip(edu_vectors(doc, self.vocabulary_), edu_weights(doc, weighting)):
                for j, c in bow.items():
                    acc[j] = acc.get(j, 0.0) + lam * c
            for j in sorted(acc):
                rows.append(r)
                cols.append(j)
                vals.append(acc[j])
        return sp.csr_matrix((vals, (rows, cols)), shape=(len(docs), len(self.vocabulary_)))

    def get_feature_names_out(self, input_features=None):
        check_is_fitted(self, "vocabulary_")
        return np.asarray(self.vocabulary_.tokens, dtype=object)


class _SignClassifier(ClassifierMixin, BaseEstimator):
    def predict(self, X):
        return np.where(self.decision_function(X) >= 0, 1, -1)

    def _set_classes(self):
        self.classes_ = np.array([-1, 1])


class LexiconClassifier(_SignClassifier):
    """Lexicon scorer: theta_j = +1/-1 for positive/negative words.

    ``fit`` only builds the vocabulary (corpus tokens plus lexicon words); labels
    are not used.
    """

    def __init__(self, lexicon=None, weighting="depth", min_count=1):
        self.lexicon = lexicon
        self.weighting = weighting
        self.min_count = min_count

    def fit(self, X=None, y=None):
        _check_weighting(self.weighting)
        polarity = _load_polarity(self.lexicon)
        tokens = []
        if X is not None:
            docs = check_documents(X)
            tokens = build_vocab((doc.tokens for doc in docs), self.min_count).tokens
        vocab = Vocabulary(tokens)
        for word in sorted(polarity):
            vocab.add(word)
        self.vocabulary_ = vocab.freeze()
        self.theta_, _ = lexicon_weights(polarity, self.vocabulary_)
        self._set_classes()
        return self

    def score_documents(self, X):
        check_is_fitted(self, "theta_")
        docs = check_documents(X, require_trees=self.weighting == "depth")
        scores = []
        for doc in docs:
            vecs = edu_vectors(doc, self.vocabulary_)
            if self.weighting == "flat":
                scores.append(score_flat(vecs, self.theta_))
            else:
                scores.append(score_depth_weighted(vecs, to_depdt(doc.tree).depth, self.theta_))
        return scores

    def decision_function(self, X):
        return np.array([s.psi for s in self.score_documents(X)])


class DiscourseLogisticRegression(_SignClassifier):
    """Logistic regression on (optionally depth-weighted) bags of words.

    With ``weighting="depth"``, features are depth-weighted at inference; they
    are also weighted during training unless ``weight_train`` is False.
    """

    def __init__(self, weighting="flat", weight_train=True, reg_grid=DEFAULT_REG_GRID,
                 heldout_fraction=0.1, min_count=2, seed=0):
        self.weighting = weighting
        self.weight_train = weight_train
        self.reg_grid = reg_grid
        self.heldout_fraction = heldout_fraction
        self.min_count = min_count
        self.seed = seed

    def fit(self, X, y=None):
        _check_weighting(self.weighting)
        docs = check_documents(X, require_trees=self.weighting == "depth")
        y = _fit_labels(docs, y)
        self.vectorizer_ = DiscourseVectorizer(self.min_count, self.weighting).fit(docs)
        train_weighting = self.weighting if self.weight_train else "flat"
        features = self.vectorizer_.transform(docs, weighting=train_weighting)
        self.model_ = train_logreg(features, y, self.reg_grid, self.heldout_fraction, self.seed)
        self._set_classes()
        return self

    @property
    def vocabulary_(self):
        return self.vectorizer_.vocabulary_

    @property
    def coef_(self):
        return self.model_.theta

    @property
    def intercept_(self):
        return self.model_.bias

    def decision_function(self, X):
        check_is_fitted(self, "model_")
        return self.model_.decision_function(self.vectorizer_.transform(X))


class R2N2Classifier(_SignClassifier):
    """Recursive sentiment composition over RST trees, trained with hinge loss.

    ``init`` chooses the starting word weights: ``"logreg"`` (a logistic
    regression fitted on the training fold), ``"lexicon"`` (needs ``lexicon``)
    or ``"random"``.
    """

    def __init__(self, relations=True, lr=0.01, epochs=30, patience=5, heldout_fraction=0.1,
                 seed=0, init="logreg", lexicon=None, train_theta=True, min_count=2,
                 reg_grid=DEFAULT_REG_GRID):
        self.relations = relations
        self.lr = lr
        self.epochs = epochs
        self.patience = patience
        self.heldout_fraction = heldout_fraction
        self.seed = seed
        self.init = init
        self.lexicon = lexicon
        self.train_theta = train_theta
        self.min_count = min_count
        self.reg_grid = reg_grid

    def _initial_theta(self, docs, y):
        if self.init == "random":
            return None
        if self.init == "lexicon":
            if self.lexicon is None:
                raise ConfigError("init='lexicon' needs a lexicon")
            theta, _ = lexicon_weights(_load_polarity(self.lexicon), self.vocabulary_)
            return theta
        if self.init == "logreg":
            vec = DiscourseVectorizer(self.min_count)
            vec.vocabulary_ = self.vocabulary_
            held = self.heldout_fraction if 0 < self.heldout_fraction <= 0.5 else 0.1
            model = train_logreg(vec.transform(docs), y, self.reg_grid, held, self.seed)
            self.init_model_ = model
            return model.theta
        raise ConfigError(f"init must be 'logreg', 'lexicon' or 'random', got {self.init!r}")

    def fit(self, X, y=None):
        docs = check_documents(X, require_trees=True)
        y = _fit_labels(docs, y)
        self.vocabulary_ = build_vocab((doc.tokens for doc in docs), self.min_count)
        theta = self._initial_theta(docs, y)
        params = init_params(len(self.vocabulary_), self.relations, theta, self.seed)
        config = R2n2Config(self.lr, self.epochs, self.patience, self.heldout_fraction,
                            self.seed, self.train_theta)
        compiled = [self._compile(doc) for doc in docs]
        self.params_, self.history_ = train_r2n2(compiled, y, params, config)
        self._set_classes()
        return self

    def _compile(self, doc):
        return compile_tree(doc.tree, edu_vectors(doc, self.vocabulary_))

    def decision_function(self, X):
        check_is_fitted(self, "params_")
        docs = check_documents(X, require_trees=True)
        return np.array([forward(self._compile(doc), self.params_).psi_doc for doc in docs])
