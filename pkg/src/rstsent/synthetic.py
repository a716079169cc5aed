"""Random RST trees and synthetic nucleus-dominant review corpora.

Used by the test-suite and handy for smoke-testing the CLI without real data.
"""

from __future__ import annotations

import os

import numpy as np

from .corpus import Document
from .r2n2 import CONTRASTIVE_RELATIONS
from .rst_tree import Edu, Leaf, Multi, NucSat, RstTree, serialize_rst

__all__ = [
    "RELATIONS",
    "POSITIVE_WORDS",
    "NEGATIVE_WORDS",
    "FILLER_WORDS",
    "random_tree",
    "chain_tree",
    "spine_edus",
    "make_nucleus_corpus",
    "write_corpus",
]

RELATIONS = tuple(sorted(CONTRASTIVE_RELATIONS)) + (
    "elaboration", "justify", "background", "conjunction", "list", "cause", "evaluation",
)

POSITIVE_WORDS = (
    "good", "great", "excellent", "superb", "wonderful", "brilliant", "charming",
    "moving", "delightful", "fun", "best", "beautiful", "liked", "enjoyable", "clever",
)
NEGATIVE_WORDS = (
    "bad", "awful", "terrible", "boring", "dull", "weak", "poor", "worst", "hated",
    "stupid", "mess", "tedious", "annoying", "bland", "waste",
)
FILLER_WORDS = (
    "the", "movie", "film", "plot", "actor", "scene", "story", "director", "and", "but",
    "was", "is", "a", "of", "it", "this", "ending", "music", "cast", "script",
)


def _texts(rng, n):
    return [" ".join(rng.choice(FILLER_WORDS, size=rng.integers(1, 6))) for _ in range(n)]


def random_tree(rng, n_edus, multi_prob=0.3, max_arity=5, skew=0.0, texts=None):
    """Random valid tree over ``n_edus`` EDUs.

    ``skew`` is the probability of peeling a single EDU off one end at each
    split, which makes deep (chain-like) trees more likely.
    """
    if texts is None:
        texts = _texts(rng, n_edus)

    def build(lo, hi):
        n = hi - lo
        if n == 1:
            return Leaf(Edu(lo + 1, texts[lo]))
        relation = RELATIONS[rng.integers(len(RELATIONS))]
        if n >= 2 and rng.random() < multi_prob:
            arity = int(rng.integers(2, min(max_arity, n) + 1))
            cuts = np.sort(rng.choice(np.arange(lo + 1, hi), size=arity - 1, replace=False))
            bounds = [lo, *cuts.tolist(), hi]
            return Multi(relation, tuple(build(a, b) for a, b in zip(bounds, bounds[1:])))
        if rng.random() < skew:
            cut = lo + 1 if rng.random() < 0.5 else hi - 1
        else:
            cut = int(rng.integers(lo + 1, hi))
        left, right = build(lo, cut), build(cut, hi)
        if rng.random() < 0.5:
            return NucSat(relation, left, right, nucleus_first=True)
        return NucSat(relation, right, left, nucleus_first=False)

    return RstTree(build(0, n_edus))


def chain_tree(k, relation="elaboration", texts=None):
    """EDU 1 is the nucleus; EDU j+1 is the satellite of a span headed by EDU j."""
    texts = texts or [f"unit {i}" for i in range(1, k + 2)]
    node = Leaf(Edu(k + 1, texts[k]))
    for i in range(k, 0, -1):
        node = NucSat(relation, Leaf(Edu(i, texts[i - 1])), node)
    return RstTree(node)


def spine_edus(tree):
    """EDU ids reachable from the root without entering a satellite."""
    out, stack = [], [tree.root]
    while stack:
        node = stack.pop()
        if isinstance(node, Leaf):
            out.append(node.edu.id)
        elif isinstance(node, NucSat):
            stack.append(node.nucleus)
        else:
            stack.extend(node.nuclei)
    return sorted(out)


def make_nucleus_corpus(n_docs, seed=0, min_edus=3, max_edus=10, adversarial=0.3,
                        supporting=0.15, spine_noise=0.1, lexicon_coverage=0.8):
    """Documents whose label is carried by the nuclear spine.

    Spine EDUs hold one or two words of the document's polarity (plus, with
    probability ``spine_noise``, one word of the opposite polarity). Each
    satellite EDU holds one or two words of the opposite polarity with
    probability ``adversarial``, of the same polarity with probability
    ``supporting``, and no sentiment words otherwise. Returns
    ``(documents, lexicon)`` where the lexicon marks a ``lexicon_coverage``
    fraction of the sentiment words.
    """
    rng = np.random.default_rng(seed)
    docs = []
    for t in range(n_docs):
        n = int(rng.integers(min_edus, max_edus + 1))
        label = 1 if rng.random() < 0.5 else -1
        shape = random_tree(rng, n, multi_prob=0.2, texts=[""] * n)
        spine = set(spine_edus(shape))
        texts = []
        for edu in range(1, n + 1):
            words = list(rng.choice(FILLER_WORDS, size=rng.integers(2, 6)))
            draws = []
            if edu in spine:
                draws.append((label, int(rng.integers(1, 3))))
                if rng.random() < spine_noise:
                    draws.append((-label, 1))
            else:
                r = rng.random()
                if r < adversarial:
                    draws.append((-label, int(rng.integers(1, 3))))
                elif r < adversarial + supporting:
                    draws.append((label, int(rng.integers(1, 3))))
            for polarity, count in draws:
                pool = POSITIVE_WORDS if polarity > 0 else NEGATIVE_WORDS
                words += list(rng.choice(pool, size=count))
            rng.shuffle(words)
            texts.append(" ".join(words))
        tree = _retext(shape, texts)
        docs.append(Document(f"syn{t:05d}", label, tree))
    lex_rng = np.random.default_rng(seed + 1)
    lexicon = {}
    for pool, value in ((POSITIVE_WORDS, 1), (NEGATIVE_WORDS, -1)):
        for word in pool:
            if lex_rng.random() < lexicon_coverage:
                lexicon[word] = value
    return docs, lexicon


def _retext(tree, texts):
    def walk(node):
        if isinstance(node, Leaf):
            return Leaf(Edu(node.edu.id, texts[node.edu.id - 1]))
        if isinstance(node, NucSat):
            return NucSat(node.relation, walk(node.nucleus), walk(node.satellite), node.nucleus_first)
        return Multi(node.relation, tuple(walk(c) for c in node.nuclei))

    return RstTree(walk(tree.root))


def write_corpus(docs, directory, manifest="manifest.tsv", lexicon=None):
    """Write ``docs`` as tree files plus a manifest under ``directory``.

    Labels are written as ``label:+1``/``label:-1``. If ``lexicon`` is a
    ``{word: +1|-1}`` mapping it is written to ``lexicon.tsv`` as well.
    Returns the manifest path.
    """
    os.makedirs(directory, exist_ok=True)
    lines = []
    for doc in docs:
        name = f"{doc.id}.rst.sexp"
        with open(os.path.join(directory, name), "wb") as fh:
            fh.write(serialize_rst(doc.tree) + b"\n")
        lines.append(f"{doc.id}\tlabel:{doc.label:+d}\t{name}\t-\n")
    path = os.path.join(directory, manifest)
    with open(path, "w", encoding="utf-8") as fh:
        fh.writelines(lines)
    if lexicon is not None:
        with open(os.path.join(directory, "lexicon.tsv"), "w", encoding="utf-8") as fh:
            for word in sorted(lexicon):
                fh.write(f"{word}\t{'positive' if lexicon[word] > 0 else 'negative'}\n")
    return path
