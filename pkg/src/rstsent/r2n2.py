"""Rhetorical recursive neural network (R2N2) with scalar composition.

Every node carries one real score. Leaves score their bag of words with the
shared word weights ``theta``; a mononuclear node computes
``tanh(k_n[r] * nucleus + k_s[r] * satellite)``, a multinuclear node
``tanh(k_n[r] * sum(nuclei))``, where ``r`` is the relation class of the node.
The document score adds a bag-of-words term for the whole text::

    psi_doc = gamma * theta . sum_i w_i + psi_root

Training minimizes the hinge loss ``max(0, 1 - y * psi_doc)`` with per-document
SGD; gradients are obtained by backpropagation through the tree.
"""

from __future__ import annotations

import enum
import logging
import math
from dataclasses import dataclass, field

import numpy as np

from .exceptions import NumericalError
from .logreg import holdout_split
from .rst_tree import Leaf, Multi, NucSat, RstTree

__all__ = [
    "RelationClass",
    "CONTRASTIVE_RELATIONS",
    "classify_relation",
    "relation_classes",
    "R2n2Params",
    "R2n2Gradient",
    "R2n2Config",
    "CompiledTree",
    "ForwardResult",
    "compile_tree",
    "init_params",
    "forward",
    "backward",
    "hinge_loss",
    "sgd_step",
    "train_r2n2",
]

logger = logging.getLogger(__name__)

CONTRASTIVE_RELATIONS = frozenset(
    {
        "contrast",
        "comparison",
        "antithesis",
        "antithesis-e",
        "consequence-s",
        "concession",
        "problem-solution",
    }
)

LEAF, NUCSAT, MULTI = 0, 1, 2


class RelationClass(enum.Enum):
    SINGLE = "single"
    NON_CONTRASTIVE = "non-contrastive"
    CONTRASTIVE = "contrastive"


def relation_classes(relations=True):
    if relations:
        return (RelationClass.NON_CONTRASTIVE, RelationClass.CONTRASTIVE)
    return (RelationClass.SINGLE,)


def classify_relation(label, relations=True):
    if not relations:
        return RelationClass.SINGLE
    if label.lower() in CONTRASTIVE_RELATIONS:
        return RelationClass.CONTRASTIVE
    return RelationClass.NON_CONTRASTIVE


@dataclass
class R2n2Params:
    k_n: dict
    k_s: dict
    gamma: float
    theta: np.ndarray
    relations: bool = True

    @property
    def classes(self):
        return relation_classes(self.relations)

    def copy(self):
        return R2n2Params(dict(self.k_n), dict(self.k_s), float(self.gamma),
                          self.theta.copy(), self.relations)

    def to_vector(self):
        """Flatten as ``[k_n..., k_s..., gamma, theta...]`` in class order."""
        cls = self.classes
        head = [self.k_n[c] for c in cls] + [self.k_s[c] for c in cls] + [self.gamma]
        return np.concatenate([np.asarray(head, dtype=float), self.theta])

    def with_vector(self, vec):
        cls = self.classes
        m = len(cls)
        vec = np.asarray(vec, dtype=float)
        return R2n2Params(
            {c: float(vec[i]) for i, c in enumerate(cls)},
            {c: float(vec[m + i]) for i, c in enumerate(cls)},
            float(vec[2 * m]),
            vec[2 * m + 1:].copy(),
            self.relations,
        )

    def is_finite(self):
        return bool(np.all(np.isfinite(self.to_vector())))


@dataclass
class R2n2Gradient:
    k_n: dict
    k_s: dict
    gamma: float
    theta: np.ndarray
    loss: float = 0.0

    def to_vector(self, relations=True):
        cls = relation_classes(relations)
        head = [self.k_n[c] for c in cls] + [self.k_s[c] for c in cls] + [self.gamma]
        return np.concatenate([np.asarray(head, dtype=float), self.theta])


@dataclass
class R2n2Config:
    lr: float = 0.01
    epochs: int = 30
    patience: int = 5
    heldout_fraction: float = 0.1
    seed: int = 0
    train_theta: bool = True


def init_params(n_features, relations=True, init_theta=None, seed=0):
    cls = relation_classes(relations)
    if init_theta is not None:
        theta = np.array(init_theta, dtype=float, copy=True)
        if theta.shape != (n_features,):
            raise ValueError(f"init_theta has shape {theta.shape}, expected ({n_features},)")
    else:
        theta = np.random.default_rng(seed).uniform(-0.01, 0.01, size=n_features)
    return R2n2Params({c: 1.0 for c in cls}, {c: 0.5 for c in cls}, 0.5, theta, relations)


# -- compiled trees ------------------------------------------------------


class CompiledTree:
    """Post-order flattening of a tree with sparse EDU vectors attached.

    Node ``i`` only references children with smaller indices; the root is last.
    """

    __slots__ = ("kind", "children", "contrastive", "leaf_idx", "leaf_cnt",
                 "leaf_edu", "bag_idx", "bag_cnt", "nodes")

    def __len__(self):
        return len(self.kind)


def _sparse(bow):
    keys = sorted(bow)
    return (np.fromiter(keys, dtype=np.intp, count=len(keys)),
            np.fromiter((bow[k] for k in keys), dtype=float, count=len(keys)))


def compile_tree(tree, edu_vectors):
    """``edu_vectors[k]`` is the sparse bag of words of EDU ``k + 1``."""
    root = tree.root if isinstance(tree, RstTree) else tree
    ct = CompiledTree()
    ct.kind, ct.children, ct.contrastive = [], [], []
    ct.leaf_idx, ct.leaf_cnt, ct.leaf_edu, ct.nodes = [], [], [], []
    bag = {}
    index = {}
    stack = [(root, False)]
    while stack:
        node, expanded = stack.pop()
        if isinstance(node, Leaf):
            idx, cnt = _sparse(edu_vectors[node.edu.id - 1])
            for j, c in edu_vectors[node.edu.id - 1].items():
                bag[j] = bag.get(j, 0) + c
            kids, kind, contr = (), LEAF, False
            ct.leaf_idx.append(idx)
            ct.leaf_cnt.append(cnt)
            ct.leaf_edu.append(node.edu.id)
        elif not expanded:
            stack.append((node, True))
            if isinstance(node, NucSat):
                stack.append((node.satellite, False))
                stack.append((node.nucleus, False))
            else:
                stack.extend((child, False) for child in reversed(node.nuclei))
            continue
        else:
            if isinstance(node, NucSat):
                kind = NUCSAT
                kids = (index[id(node.nucleus)], index[id(node.satellite)])
            elif isinstance(node, Multi):
                kind = MULTI
                kids = tuple(index[id(child)] for child in node.nuclei)
            else:
                raise TypeError(f"unexpected node {node!r}")
            contr = node.relation.lower() in CONTRASTIVE_RELATIONS
            ct.leaf_idx.append(None)
            ct.leaf_cnt.append(None)
            ct.leaf_edu.append(None)
        index[id(node)] = len(ct.kind)
        ct.kind.append(kind)
        ct.children.append(kids)
        ct.contrastive.append(contr)
        ct.nodes.append(node)
    ct.bag_idx, ct.bag_cnt = _sparse(bag)
    return ct


# -- forward / backward --------------------------------------------------


@dataclass
class ForwardResult:
    psi_doc: float
    psi_root: float
    bag_score: float
    node_psi: list = field(repr=False)
    nodes: list = field(repr=False)

    @property
    def label(self):
        return 1 if self.psi_doc >= 0 else -1


def _arrays(params):
    cls = params.classes
    return [params.k_n[c] for c in cls], [params.k_s[c] for c in cls]


def _forward(ct, kn, ks, gamma, theta, relations):
    psi = [0.0] * len(ct.kind)
    for i, kind in enumerate(ct.kind):
        if kind == LEAF:
            psi[i] = float(theta[ct.leaf_idx[i]] @ ct.leaf_cnt[i])
            continue
        c = 1 if (relations and ct.contrastive[i]) else 0
        kids = ct.children[i]
        if kind == NUCSAT:
            psi[i] = math.tanh(kn[c] * psi[kids[0]] + ks[c] * psi[kids[1]])
        else:
            psi[i] = math.tanh(kn[c] * sum(psi[j] for j in kids))
    bag = float(theta[ct.bag_idx] @ ct.bag_cnt)
    return psi, bag, gamma * bag + psi[-1]


def _backward(ct, kn, ks, gamma, relations, psi, bag, doc, y):
    """Returns ``(loss, d_kn, d_ks, d_gamma, theta_idx, theta_val)`` with the
    theta gradient as unreduced sparse pieces."""
    m = len(kn)
    d_kn, d_ks = [0.0] * m, [0.0] * m
    loss = hinge_loss(doc, y)
    if y * doc >= 1.0 or loss != loss:
        return loss, d_kn, d_ks, 0.0, [], []
    g = -float(y)
    d_gamma = g * bag
    t_idx = [ct.bag_idx]
    t_val = [g * gamma * ct.bag_cnt]
    gpsi = [0.0] * len(psi)
    gpsi[-1] = g
    for i in range(len(psi) - 1, -1, -1):
        gi = gpsi[i]
        kind = ct.kind[i]
        if kind == LEAF:
            if gi != 0.0:
                t_idx.append(ct.leaf_idx[i])
                t_val.append(gi * ct.leaf_cnt[i])
            continue
        c = 1 if (relations and ct.contrastive[i]) else 0
        da = gi * (1.0 - psi[i] * psi[i])
        kids = ct.children[i]
        if kind == NUCSAT:
            a, b = kids
            d_kn[c] += da * psi[a]
            d_ks[c] += da * psi[b]
            gpsi[a] += da * kn[c]
            gpsi[b] += da * ks[c]
        else:
            d_kn[c] += da * sum(psi[j] for j in kids)
            for j in kids:
                gpsi[j] += da * kn[c]
    return loss, d_kn, d_ks, d_gamma, t_idx, t_val


def _ensure_compiled(tree, edu_vectors):
    if isinstance(tree, CompiledTree):
        return tree
    return compile_tree(tree, edu_vectors)


def forward(tree, params, edu_vectors=None):
    """Score one document. ``tree`` may be an :class:`RstTree` (then
    ``edu_vectors`` is required) or a :class:`CompiledTree`."""
    ct = _ensure_compiled(tree, edu_vectors)
    kn, ks = _arrays(params)
    psi, bag, doc = _forward(ct, kn, ks, params.gamma, params.theta, params.relations)
    return ForwardResult(doc, psi[-1], bag, psi, ct.nodes)


def hinge_loss(psi_doc, y):
    margin = 1.0 - y * psi_doc
    return 0.0 if margin <= 0.0 else margin  # NaN propagates


def backward(tree, params, edu_vectors, y):
    """Exact (sub)gradient of the hinge loss for one document."""
    ct = _ensure_compiled(tree, edu_vectors)
    kn, ks = _arrays(params)
    psi, bag, doc = _forward(ct, kn, ks, params.gamma, params.theta, params.relations)
    loss, d_kn, d_ks, d_gamma, t_idx, t_val = _backward(
        ct, kn, ks, params.gamma, params.relations, psi, bag, doc, y)
    d_theta = np.zeros_like(params.theta, dtype=float)
    for idx, val in zip(t_idx, t_val):
        np.add.at(d_theta, idx, val)
    cls = params.classes
    return R2n2Gradient(dict(zip(cls, d_kn)), dict(zip(cls, d_ks)), d_gamma, d_theta, loss)


# -- training ------------------------------------------------------------


def sgd_step(ct, params, y, lr, train_theta=True):
    """One in-place SGD update on a single document; returns its pre-update loss."""
    kn, ks = _arrays(params)
    psi, bag, doc = _forward(ct, kn, ks, params.gamma, params.theta, params.relations)
    loss, d_kn, d_ks, d_gamma, t_idx, t_val = _backward(
        ct, kn, ks, params.gamma, params.relations, psi, bag, doc, y)
    if not math.isfinite(loss):
        raise NumericalError(f"non-finite loss {loss}")
    if loss == 0.0 or lr == 0.0:
        return loss
    for c, dn, ds in zip(params.classes, d_kn, d_ks):
        params.k_n[c] -= lr * dn
        params.k_s[c] -= lr * ds
    params.gamma -= lr * d_gamma
    if train_theta:
        for idx, val in zip(t_idx, t_val):
            np.subtract.at(params.theta, idx, lr * val)
    return loss


def _accuracy(cts, labels, params):
    kn, ks = _arrays(params)
    hits = 0
    for ct, y in zip(cts, labels):
        doc = _forward(ct, kn, ks, params.gamma, params.theta, params.relations)[2]
        hits += (1 if doc >= 0 else -1) == y
    return hits / len(cts)


def train_r2n2(docs, labels, params, config=None):
    """Per-document SGD over seeded shuffles with held-out early stopping.

    ``docs`` are :class:`CompiledTree` instances. Returns ``(best_params, history)``
    where ``history`` holds one dict per epoch. ``params`` is not modified.
    """
    config = config or R2n2Config()
    labels = [int(v) for v in labels]
    if not docs:
        raise ValueError("empty training corpus")
    if len(docs) != len(labels):
        raise ValueError("docs and labels differ in length")
    if set(labels) != {-1, 1}:
        raise ValueError("training corpus needs both labels (-1 and +1)")

    n = len(docs)
    if config.heldout_fraction > 0 and n >= 2:
        train_idx, held_idx = holdout_split(n, config.heldout_fraction, config.seed)
    else:
        train_idx, held_idx = np.arange(n), np.arange(0)
    held_docs = [docs[i] for i in held_idx]
    held_labels = [labels[i] for i in held_idx]

    rng = np.random.default_rng(config.seed)
    current = params.copy()
    best, best_acc, stale = current.copy(), -1.0, 0
    history = []
    for epoch in range(1, config.epochs + 1):
        total = 0.0
        for i in rng.permutation(train_idx):
            total += sgd_step(docs[i], current, labels[i], config.lr, config.train_theta)
        if not current.is_finite():
            raise NumericalError(f"parameters became non-finite in epoch {epoch}")
        record = {"epoch": epoch, "train_loss": total / len(train_idx)}
        if held_docs:
            acc = _accuracy(held_docs, held_labels, current)
            record["heldout_accuracy"] = acc
            if acc > best_acc:
                best, best_acc, stale = current.copy(), acc, 0
            else:
                stale += 1
        else:
            best = current.copy()
        history.append(record)
        logger.info("epoch %d %s", epoch, record)
        if held_docs and stale >= config.patience:
            break
    return best, history
