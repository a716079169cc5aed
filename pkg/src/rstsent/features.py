"""Tokenization, vocabularies, sparse bag-of-words vectors and lexicon weights."""

from __future__ import annotations

import hashlib
import io
import logging
import re
from collections import Counter

import numpy as np

from .exceptions import LexiconError

__all__ = [
    "tokenize",
    "Vocabulary",
    "build_vocab",
    "vectorize",
    "read_lexicon",
    "load_lexicon",
    "lexicon_weights",
]

logger = logging.getLogger(__name__)

_EDGE_PUNCT = re.compile(r"^[\W_]+|[\W_]+$")


def tokenize(text):
    """Lowercase, split on whitespace, strip non-alphanumeric edges.

    >>> tokenize("It could have been a GREAT movie.")
    ['it', 'could', 'have', 'been', 'a', 'great', 'movie']
    """
    tokens = []
    for raw in text.lower().split():
        tok = _EDGE_PUNCT.sub("", raw)
        if tok:
            tokens.append(tok)
    return tokens


class Vocabulary:
    """Token <-> index bijection. Frozen vocabularies reject new tokens."""

    def __init__(self, tokens=()):
        self._index = {}
        self._tokens = []
        self.frozen = False
        for tok in tokens:
            self.add(tok)

    def add(self, token):
        if self.frozen:
            raise RuntimeError("vocabulary is frozen")
        if token not in self._index:
            self._index[token] = len(self._tokens)
            self._tokens.append(token)
        return self._index[token]

    def freeze(self):
        self.frozen = True
        return self

    def get(self, token, default=None):
        return self._index.get(token, default)

    def __getitem__(self, token):
        return self._index[token]

    def __contains__(self, token):
        return token in self._index

    def __len__(self):
        return len(self._tokens)

    def __iter__(self):
        return iter(self._tokens)

    def __eq__(self, other):
        return isinstance(other, Vocabulary) and self._tokens == other._tokens

    @property
    def tokens(self):
        return list(self._tokens)

    def as_dict(self):
        return dict(self._index)

    def digest(self):
        """SHA-256 over the ordered token list, for model/vocab consistency checks."""
        h = hashlib.sha256()
        for tok in self._tokens:
            h.update(tok.encode("utf-8"))
            h.update(b"\n")
        return h.hexdigest()

    def __repr__(self):
        return f"Vocabulary(size={len(self)}, frozen={self.frozen})"


def build_vocab(token_lists, min_count=1):
    """Index tokens with corpus frequency >= ``min_count`` in first-occurrence order."""
    if min_count < 1:
        raise ValueError("min_count must be >= 1")
    counts = Counter()
    order = []
    for tokens in token_lists:
        for tok in tokens:
            if tok not in counts:
                order.append(tok)
            counts[tok] += 1
    vocab = Vocabulary(tok for tok in order if counts[tok] >= min_count)
    if not len(vocab):
        raise ValueError(f"empty vocabulary (no token occurs >= {min_count} times)")
    return vocab.freeze()


def vectorize(tokens, vocab):
    """Sparse count vector ``{index: count}``; out-of-vocabulary tokens are dropped."""
    bow = {}
    for tok in tokens:
        j = vocab.get(tok)
        if j is not None:
            bow[j] = bow.get(j, 0) + 1
    return bow


def read_lexicon(stream):
    """Parse ``word<TAB>positive|negative`` lines into ``{word: +1|-1}``."""
    if isinstance(stream, (bytes, bytearray)):
        stream = io.BytesIO(stream)
    polarity = {}
    for lineno, raw in enumerate(stream, 1):
        line = raw.decode("utf-8") if isinstance(raw, bytes) else raw
        line = line.rstrip("\r\n")
        if not line.strip() or line.lstrip().startswith("#"):
            continue
        fields = line.split("\t")
        if len(fields) != 2 or not fields[0].strip():
            raise LexiconError(f"line {lineno}: expected 'word<TAB>positive|negative', got {line!r}")
        word, tag = fields[0].strip().lower(), fields[1].strip().lower()
        if tag == "positive":
            value = 1
        elif tag == "negative":
            value = -1
        else:
            raise LexiconError(f"line {lineno}: unknown polarity {fields[1]!r}")
        if polarity.get(word, value) != value:
            raise LexiconError(f"line {lineno}: conflicting polarity for {word!r}")
        polarity[word] = value
    return polarity


def lexicon_weights(polarity, vocab):
    """Dense weight vector from a word->polarity map; returns ``(theta, n_missing)``."""
    theta = np.zeros(len(vocab))
    missing = 0
    for word, value in polarity.items():
        j = vocab.get(word)
        if j is None:
            missing += 1
        else:
            theta[j] = value
    return theta, missing


def load_lexicon(stream, vocab):
    theta, missing = lexicon_weights(read_lexicon(stream), vocab)
    if missing:
        logger.info("%d lexicon entries not in vocabulary (ignored)", missing)
    return theta
