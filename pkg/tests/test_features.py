from collections import Counter

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from rstsent.exceptions import LexiconError
from rstsent.features import (
    Vocabulary,
    build_vocab,
    load_lexicon,
    read_lexicon,
    tokenize,
    vectorize,
)

from .oracles import tokenize_oracle


def test_tokenize_sentence():
    assert tokenize("It could have been a GREAT movie.") == [
        "it", "could", "have", "been", "a", "great", "movie"]


def test_tokenize_empty():
    assert tokenize("") == []
    assert tokenize("  ... !! ") == []


def test_tokenize_keeps_inner_hyphen():
    assert tokenize("well-done!!") == tokenize_oracle("well-done!!") == ["well-done"]
    assert tokenize("hidden rip-offs.") == ["hidden", "rip-offs"]


def test_tokenize_unicode_whitespace():
    assert tokenize("Café naïve\n\"quoted\"") == ["café", "naïve", "quoted"]


@given(st.text(max_size=80))
def test_tokenize_matches_oracle(text):
    assert tokenize(text) == tokenize_oracle(text)


@given(st.text(max_size=80))
def test_tokenize_idempotent(text):
    toks = tokenize(text)
    assert tokenize(" ".join(toks)) == toks
    for tok in toks:
        assert tokenize(tok) == [tok]


def test_build_vocab_min_count():
    assert build_vocab([["a", "b"], ["b"]], 1).as_dict() == {"a": 0, "b": 1}
    assert build_vocab([["a", "b"], ["b"]], 2).as_dict() == {"b": 0}


def test_build_vocab_empty():
    with pytest.raises(ValueError):
        build_vocab([["a"]], 2)
    with pytest.raises(ValueError):
        build_vocab([], 1)


def test_build_vocab_recount(rng):
    words = [f"w{i}" for i in range(300)]
    docs = [list(rng.choice(words, size=rng.integers(0, 30))) for _ in range(1000)]
    for min_count in (1, 3, 50):
        vocab = build_vocab(docs, min_count)
        freq = Counter(tok for doc in docs for tok in doc)
        assert set(vocab) == {w for w, c in freq.items() if c >= min_count}
        assert sorted(vocab.as_dict().values()) == list(range(len(vocab)))
        first_seen = {}
        for doc in docs:
            for tok in doc:
                first_seen.setdefault(tok, len(first_seen))
        assert vocab.tokens == sorted(vocab.tokens, key=first_seen.__getitem__)


def test_vocab_frozen():
    vocab = build_vocab([["a"]])
    with pytest.raises(RuntimeError):
        vocab.add("b")


def test_vocab_digest_depends_on_order():
    assert Vocabulary(["a", "b"]).digest() != Vocabulary(["b", "a"]).digest()


def test_vectorize():
    vocab = Vocabulary(["great", "movie"]).freeze()
    assert vectorize(["great", "great", "movie"], vocab) == {0: 2, 1: 1}
    assert vectorize(["awful", "plot"], vocab) == {}


def test_vectorize_l1_and_additivity(rng):
    words = [f"w{i}" for i in range(50)]
    vocab = Vocabulary(words[:30]).freeze()
    for _ in range(200):
        t1 = list(rng.choice(words, size=rng.integers(0, 20)))
        t2 = list(rng.choice(words, size=rng.integers(0, 20)))
        v1, v2, v12 = vectorize(t1, vocab), vectorize(t2, vocab), vectorize(t1 + t2, vocab)
        assert sum(v1.values()) == sum(1 for t in t1 if t in vocab)
        assert all(c >= 1 and j < len(vocab) for j, c in v1.items())
        assert v12 == dict(Counter(v1) + Counter(v2))


def test_lexicon_weights():
    vocab = Vocabulary(["great", "hated", "the"]).freeze()
    theta = load_lexicon(b"great\tpositive\nhated\tnegative\n", vocab)
    np.testing.assert_array_equal(theta, [1.0, -1.0, 0.0])


def test_lexicon_empty_and_comments():
    vocab = Vocabulary(["x", "y"]).freeze()
    theta = load_lexicon(b"# nothing here\n\n", vocab)
    np.testing.assert_array_equal(theta, [0.0, 0.0])


def test_lexicon_oov_ignored(caplog):
    vocab = Vocabulary(["good"]).freeze()
    with caplog.at_level("INFO"):
        theta = load_lexicon(b"good\tpositive\nsuperb\tpositive\nawful\tnegative\n", vocab)
    np.testing.assert_array_equal(theta, [1.0])
    assert "2 lexicon entries" in caplog.text


def test_lexicon_conflict():
    with pytest.raises(LexiconError, match="conflicting"):
        read_lexicon(b"fine\tpositive\nfine\tnegative\n")


def test_lexicon_duplicate_same_polarity_ok():
    assert read_lexicon(b"fine\tpositive\nfine\tpositive\n") == {"fine": 1}


@pytest.mark.parametrize("line", [b"great positive\n", b"great\tgood\n", b"\tpositive\n",
                                  b"a\tpositive\textra\n"])
def test_lexicon_malformed(line):
    with pytest.raises(LexiconError, match="line 2"):
        read_lexicon(b"ok\tnegative\n" + line)


@given(st.dictionaries(st.sampled_from([f"w{i}" for i in range(20)]), st.sampled_from([1, -1])))
def test_lexicon_entries_ternary(polarity):
    text = "".join(f"{w}\t{'positive' if v > 0 else 'negative'}\n" for w, v in polarity.items())
    vocab = Vocabulary([f"w{i}" for i in range(0, 20, 2)]).freeze()
    theta = load_lexicon(text.encode(), vocab)
    assert set(np.unique(theta)) <= {-1.0, 0.0, 1.0}
    for w in vocab:
        assert theta[vocab[w]] == polarity.get(w, 0)
