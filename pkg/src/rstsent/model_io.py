"""Versioned JSON model files for the fitted estimators.

Layout (keys in this order)::

    format, version, kind, params, vocabulary {size, sha256, tokens},
    theta, then kind-specific sections: bias/reg (logreg) or
    relations/k_n/k_s/gamma (r2n2)

Floats are written with ``repr`` precision so a load/save round trip is exact.
"""

from __future__ import annotations

import json
import os

import numpy as np

from .estimators import (
    DiscourseLogisticRegression,
    DiscourseVectorizer,
    LexiconClassifier,
    R2N2Classifier,
)
from .exceptions import DataError
from .features import Vocabulary
from .logreg import LogRegModel
from .r2n2 import R2n2Params, RelationClass

__all__ = ["FORMAT", "VERSION", "model_to_dict", "model_from_dict", "save_model", "load_model"]

FORMAT = "rstsent-model"
VERSION = 1

_KINDS = {
    LexiconClassifier: "lexicon",
    DiscourseLogisticRegression: "logreg",
    R2N2Classifier: "r2n2",
}


def _jsonable(value):
    if isinstance(value, (tuple, list)):
        return [_jsonable(v) for v in value]
    if isinstance(value, os.PathLike):
        return os.fspath(value)
    if isinstance(value, dict):
        return None  # in-memory lexicons are captured by theta
    if isinstance(value, np.generic):
        return value.item()
    return value


def model_to_dict(estimator):
    kind = _KINDS.get(type(estimator))
    if kind is None:
        raise TypeError(f"cannot serialize {type(estimator).__name__}")
    vocab = estimator.vocabulary_
    out = {
        "format": FORMAT,
        "version": VERSION,
        "kind": kind,
        "params": {k: _jsonable(v) for k, v in sorted(estimator.get_params().items())},
        "vocabulary": {"size": len(vocab), "sha256": vocab.digest(), "tokens": vocab.tokens},
    }
    if kind == "lexicon":
        out["theta"] = [float(v) for v in estimator.theta_]
    elif kind == "logreg":
        out["theta"] = [float(v) for v in estimator.model_.theta]
        out["bias"] = float(estimator.model_.bias)
        out["reg"] = float(estimator.model_.reg)
    else:
        p = estimator.params_
        out["theta"] = [float(v) for v in p.theta]
        out["relations"] = bool(p.relations)
        out["k_n"] = {c.value: float(p.k_n[c]) for c in p.classes}
        out["k_s"] = {c.value: float(p.k_s[c]) for c in p.classes}
        out["gamma"] = float(p.gamma)
    return out


def model_from_dict(data):
    if data.get("format") != FORMAT:
        raise DataError("not an rstsent model file")
    if data.get("version") != VERSION:
        raise DataError(f"unsupported model version {data.get('version')!r}")
    try:
        kind = data["kind"]
        vocab = Vocabulary(data["vocabulary"]["tokens"]).freeze()
        if vocab.digest() != data["vocabulary"]["sha256"]:
            raise DataError("vocabulary hash mismatch")
        theta = np.asarray(data["theta"], dtype=float)
        if theta.shape != (len(vocab),):
            raise DataError("theta length does not match vocabulary size")
        params = dict(data["params"])
        if "reg_grid" in params:
            params["reg_grid"] = tuple(params["reg_grid"])
        if kind == "lexicon":
            est = LexiconClassifier(**params)
            est.vocabulary_, est.theta_ = vocab, theta
        elif kind == "logreg":
            est = DiscourseLogisticRegression(**params)
            est.vectorizer_ = DiscourseVectorizer(est.min_count, est.weighting)
            est.vectorizer_.vocabulary_ = vocab
            est.model_ = LogRegModel(theta, float(data["bias"]), float(data["reg"]))
        elif kind == "r2n2":
            est = R2N2Classifier(**params)
            est.vocabulary_ = vocab
            k_n = {RelationClass(k): float(v) for k, v in data["k_n"].items()}
            k_s = {RelationClass(k): float(v) for k, v in data["k_s"].items()}
            est.params_ = R2n2Params(k_n, k_s, float(data["gamma"]), theta, bool(data["relations"]))
            if set(k_n) != set(est.params_.classes) or set(k_s) != set(est.params_.classes):
                raise DataError("composition weights do not match relation mode")
            est.history_ = []
        else:
            raise DataError(f"unknown model kind {kind!r}")
    except (KeyError, TypeError, ValueError) as exc:
        raise DataError(f"malformed model file: {exc}") from None
    est._set_classes()
    return est


def save_model(estimator, path):
    text = json.dumps(model_to_dict(estimator), indent=1, ensure_ascii=False) + "\n"
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)


def load_model(path):
    with open(path, encoding="utf-8") as fh:
        try:
            data = json.load(fh)
        except json.JSONDecodeError as exc:
            raise DataError(f"{path}: invalid model file: {exc}") from None
    return model_from_dict(data)
