"""Document-level sentiment analysis over RST discourse trees.

Two ways of composing EDU-level evidence: depth-based reweighting over the
dependency form of the discourse tree, and a scalar recursive network (R2N2)
trained with backpropagation through structure.
"""

from importlib import resources

from .corpus import Document, binarize_score, evaluate, load_corpus, make_folds
from .depdt import DepDt, depths, to_depdt
from .estimators import (
    DiscourseLogisticRegression,
    DiscourseVectorizer,
    LexiconClassifier,
    R2N2Classifier,
)
from .features import Vocabulary, build_vocab, load_lexicon, read_lexicon, tokenize, vectorize
from .model_io import load_model, save_model
from .r2n2 import R2n2Params, backward, classify_relation, forward, init_params, train_r2n2
from .rst_tree import (
    Edu,
    Leaf,
    Multi,
    NucSat,
    RstTree,
    parse_rst,
    read_rst_file,
    serialize_rst,
    validate,
)
from .scoring import depth_weight, score_depth_weighted, score_flat

__version__ = "0.1.0"

__all__ = [
    "Document", "binarize_score", "evaluate", "load_corpus", "make_folds",
    "DepDt", "depths", "to_depdt",
    "DiscourseLogisticRegression", "DiscourseVectorizer", "LexiconClassifier", "R2N2Classifier",
    "Vocabulary", "build_vocab", "load_lexicon", "read_lexicon", "tokenize", "vectorize",
    "load_model", "save_model",
    "R2n2Params", "backward", "classify_relation", "forward", "init_params", "train_r2n2",
    "Edu", "Leaf", "Multi", "NucSat", "RstTree", "parse_rst", "read_rst_file", "serialize_rst",
    "validate",
    "depth_weight", "score_depth_weighted", "score_flat",
    "example_path",
]


def example_path(name="samurai_review.rst.sexp"):
    """Path to a bundled example file (``samurai_review.rst.sexp`` or
    ``samurai_lexicon.tsv``)."""
    return str(resources.files(__name__).joinpath("data", name))
