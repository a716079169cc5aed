"""Flat and discourse-depth-weighted linear document scores."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

__all__ = [
    "EduScore",
    "DocScore",
    "depth_weight",
    "edu_psi",
    "score_flat",
    "score_depth_weighted",
    "weighted_bow",
    "sign_label",
]

MIN_WEIGHT = 0.5
DEPTH_SCALE = 6


@dataclass(frozen=True)
class EduScore:
    edu_id: int
    psi: float
    weight: float


@dataclass(frozen=True)
class DocScore:
    psi: float
    label: int
    edus: list = field(default_factory=list)


def sign_label(psi):
    """+1 for psi >= 0 (ties go positive), else -1."""
    return 1 if psi >= 0 else -1


def depth_weight(d):
    if d < 0:
        raise ValueError(f"depth must be non-negative, got {d}")
    return max(MIN_WEIGHT, 1.0 - d / DEPTH_SCALE)


def edu_psi(bow, theta):
    return float(sum(theta[j] * c for j, c in bow.items()))


def score_flat(edu_vectors, theta, edu_ids=None):
    if edu_ids is None:
        edu_ids = range(1, len(edu_vectors) + 1)
    total = {}
    for bow in edu_vectors:
        for j, c in bow.items():
            total[j] = total.get(j, 0) + c
    psi = edu_psi(total, theta)
    edus = [EduScore(i, edu_psi(bow, theta), 1.0) for i, bow in zip(edu_ids, edu_vectors)]
    return DocScore(psi, sign_label(psi), edus)


def score_depth_weighted(edu_vectors, depths, theta, edu_ids=None):
    """``sum_i weight(d_i) * theta . w_i``; ``depths`` maps EDU id -> depth."""
    if edu_ids is None:
        edu_ids = range(1, len(edu_vectors) + 1)
    edus = []
    for i, bow in zip(edu_ids, edu_vectors):
        if i not in depths:
            raise KeyError(f"no depth for EDU {i}")
        edus.append(EduScore(i, edu_psi(bow, theta), depth_weight(depths[i])))
    psi = float(sum(e.weight * e.psi for e in edus))
    return DocScore(psi, sign_label(psi), edus)


def weighted_bow(edu_vectors, weights, n_features):
    """Dense ``sum_i weights[i] * w_i`` (the feature-space side of the score)."""
    out = np.zeros(n_features)
    for bow, lam in zip(edu_vectors, weights):
        for j, c in bow.items():
            out[j] += lam * c
    return out
