"""Input checks shared by the estimators."""

from __future__ import annotations

import numpy as np

from .corpus import Document
from .exceptions import DataError
from .rst_tree import RstTree

__all__ = ["check_documents", "check_labels", "document_labels"]


def check_documents(X, require_trees=False):
    """Coerce ``X`` to a list of :class:`Document`.

    Accepts documents, bare :class:`RstTree` objects (EDU text from the
    leaves) or plain strings (a single-EDU document without a tree).
    """
    if isinstance(X, (str, bytes, Document, RstTree)):
        raise TypeError("expected a sequence of documents, got a single item")
    docs = []
    for i, item in enumerate(X):
        if isinstance(item, Document):
            doc = item
        elif isinstance(item, RstTree):
            doc = Document(str(i), None, item)
        elif isinstance(item, str):
            doc = Document(str(i), None, None, [item])
        else:
            raise TypeError(f"item {i}: cannot interpret {type(item).__name__} as a document")
        if require_trees and doc.tree is None:
            raise DataError(f"document {doc.id}: discourse tree required but missing")
        docs.append(doc)
    if not docs:
        raise ValueError("no documents")
    return docs


def check_labels(y, n=None):
    y = np.asarray(y)
    if y.ndim != 1:
        raise ValueError(f"labels must be 1-d, got shape {y.shape}")
    if n is not None and len(y) != n:
        raise ValueError(f"got {len(y)} labels for {n} documents")
    if not np.all(np.isin(y, (-1, 1))):
        raise ValueError("labels must be -1 or +1")
    return y.astype(int)


def document_labels(docs):
    labels = [doc.label for doc in docs]
    if any(label is None for label in labels):
        raise ValueError("unlabeled documents and no y given")
    return np.asarray(labels, dtype=int)
