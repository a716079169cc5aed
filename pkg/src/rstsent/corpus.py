"""Documents, manifests, label binarization, folds and accuracy."""

from __future__ import annotations

import io
import logging
import os
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from .exceptions import CorpusError, DataError
from .features import tokenize
from .rst_tree import read_rst_file

__all__ = [
    "Document",
    "LoadReport",
    "FoldPlan",
    "binarize_score",
    "load_corpus",
    "make_folds",
    "evaluate",
]

logger = logging.getLogger(__name__)


@dataclass(eq=False)
class Document:
    """One labeled document.

    ``edu_texts`` holds the text of EDU ``k + 1`` at position ``k``. ``tree``
    may be None for documents that only support flat scoring, and ``label``
    is None for unlabeled input.
    """

    id: str
    label: int | None = None
    tree: object = None
    edu_texts: list = field(default_factory=list)

    def __post_init__(self):
        if self.label not in (-1, 1, None):
            raise ValueError(f"document {self.id}: label must be -1, +1 or None, got {self.label!r}")
        if self.tree is not None and not self.edu_texts:
            self.edu_texts = [edu.text for edu in self.tree.edus]

    @cached_property
    def edu_tokens(self):
        return [tokenize(text) for text in self.edu_texts]

    @property
    def tokens(self):
        return [tok for toks in self.edu_tokens for tok in toks]


@dataclass
class LoadReport:
    records: int = 0
    neutral: int = 0
    bad: int = 0
    bad_paths: list = field(default_factory=list)


def binarize_score(score):
    """Map a 1..10 review score to -1 (<= 4), +1 (>= 7) or None (5, 6)."""
    if isinstance(score, bool) or not isinstance(score, (int, np.integer)) or not 1 <= score <= 10:
        raise ValueError(f"score must be an integer in 1..10, got {score!r}")
    if score <= 4:
        return -1
    if score >= 7:
        return 1
    return None


def _parse_label_field(text, lineno):
    kind, _, value = text.partition(":")
    try:
        number = int(value)
    except ValueError:
        raise CorpusError(f"manifest line {lineno}: bad label field {text!r}") from None
    if kind == "score":
        try:
            return binarize_score(number)
        except ValueError as exc:
            raise CorpusError(f"manifest line {lineno}: {exc}") from None
    if kind == "label":
        if number not in (-1, 1):
            raise CorpusError(f"manifest line {lineno}: label must be -1 or 1, got {number}")
        return number
    raise CorpusError(f"manifest line {lineno}: label field must start with 'score:' or 'label:'")


def _read_text_file(path):
    with open(path, encoding="utf-8") as fh:
        return [line.rstrip("\r\n") for line in fh if line.strip()]


def load_corpus(manifest, tree_root=".", skip_bad=False, require_trees=True):
    """Read a manifest of ``id<TAB>score:N|label:L<TAB>tree<TAB>text|-`` lines.

    Returns ``(documents, report)``. A text file, when given, holds one EDU per
    non-blank line and overrides the leaf texts of the tree. With
    ``require_trees=False`` a missing tree is tolerated as long as a text file
    is given.
    """
    if isinstance(manifest, (bytes, bytearray)):
        manifest = io.BytesIO(manifest)
    docs, report = [], LoadReport()
    seen = set()
    for lineno, raw in enumerate(manifest, 1):
        line = raw.decode("utf-8") if isinstance(raw, bytes) else raw
        line = line.rstrip("\r\n")
        if not line.strip() or line.startswith("#"):
            continue
        fields = line.split("\t")
        if len(fields) != 4 or not fields[0]:
            raise CorpusError(f"manifest line {lineno}: expected 4 tab-separated fields")
        doc_id, label_field, tree_rel, text_rel = fields
        if doc_id in seen:
            raise CorpusError(f"manifest line {lineno}: duplicate document id {doc_id!r}")
        seen.add(doc_id)
        report.records += 1
        label = _parse_label_field(label_field, lineno)
        if label is None:
            report.neutral += 1
            continue
        tree_path = os.path.join(tree_root, tree_rel)
        text_path = None if text_rel == "-" else os.path.join(tree_root, text_rel)
        try:
            tree = None
            if require_trees or text_path is None or os.path.exists(tree_path):
                tree = read_rst_file(tree_path)
            texts = _read_text_file(text_path) if text_path else None
            if tree is not None and texts is not None and len(texts) != tree.edu_count:
                raise CorpusError(
                    f"{text_path}: {len(texts)} EDU lines but tree has {tree.edu_count} EDUs")
            docs.append(Document(doc_id, label, tree, texts or []))
        except (OSError, DataError) as exc:
            if not skip_bad:
                if isinstance(exc, OSError):
                    raise DataError(f"cannot read {exc.filename or tree_path}: {exc.strerror}") from exc
                raise
            report.bad += 1
            report.bad_paths.append(tree_path)
            logger.warning("skipping %s: %s", doc_id, exc)
    if report.neutral or report.bad:
        logger.info("loaded %d documents (%d neutral, %d bad skipped)",
                    len(docs), report.neutral, report.bad)
    return docs, report


@dataclass(frozen=True)
class FoldPlan:
    k: int
    assignment: dict
    seed: int

    def fold(self, i):
        return [doc for doc, f in self.assignment.items() if f == i]

    def folds(self):
        return [self.fold(i) for i in range(self.k)]


def make_folds(doc_ids, k, seed=0):
    """Seeded shuffle, then round-robin assignment to ``k`` folds."""
    doc_ids = list(doc_ids)
    if len(set(doc_ids)) != len(doc_ids):
        raise ValueError("duplicate document ids")
    if k < 2:
        raise ValueError("k must be >= 2")
    if k > len(doc_ids):
        raise ValueError(f"k={k} exceeds number of documents ({len(doc_ids)})")
    order = np.random.default_rng(seed).permutation(len(doc_ids))
    assignment = {doc_ids[j]: pos % k for pos, j in enumerate(order)}
    return FoldPlan(k, {d: assignment[d] for d in doc_ids}, seed)


def evaluate(predictions, gold):
    """Accuracy of ``(doc_id, label)`` predictions against gold pairs."""
    pred, ref = dict(predictions), dict(gold)
    if set(pred) != set(ref):
        raise ValueError("prediction and gold document ids differ")
    if not ref:
        raise ValueError("nothing to evaluate")
    return sum(pred[d] == ref[d] for d in ref) / len(ref)
