from collections import Counter

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from rstsent.corpus import Document, binarize_score, evaluate, load_corpus, make_folds
from rstsent.exceptions import CorpusError, DataError

TREE = '(ns elaboration (n (edu 1 "good film")) (s (edu 2 "bad popcorn")))'


@pytest.mark.parametrize("score, label", [(1, -1), (4, -1), (5, None), (6, None), (7, 1), (10, 1)])
def test_binarize(score, label):
    assert binarize_score(score) == label


@pytest.mark.parametrize("score", [0, 11, -3, 4.5, True])
def test_binarize_out_of_range(score):
    with pytest.raises(ValueError):
        binarize_score(score)


def test_binarize_monotone():
    order = {-1: 0, None: 1, 1: 2}
    labels = [order[binarize_score(s)] for s in range(1, 11)]
    assert labels == sorted(labels)


def write_tree(dirpath, name, text=TREE):
    (dirpath / name).write_text(text, encoding="utf-8")


def test_load_three_lines(tmp_path):
    for name in ("a", "b", "c"):
        write_tree(tmp_path, f"{name}.rst.sexp")
    manifest = "a\tscore:2\ta.rst.sexp\t-\nb\tscore:5\tb.rst.sexp\t-\nc\tscore:9\tc.rst.sexp\t-\n"
    docs, report = load_corpus(manifest.encode(), tmp_path)
    assert [d.id for d in docs] == ["a", "c"]
    assert [d.label for d in docs] == [-1, 1]
    assert report.neutral == 1 and report.records == 3
    assert docs[0].edu_texts == ["good film", "bad popcorn"]
    assert docs[0].edu_tokens == [["good", "film"], ["bad", "popcorn"]]


def test_load_label_field_and_text_file(tmp_path):
    write_tree(tmp_path, "a.rst.sexp")
    (tmp_path / "a.txt").write_text("Great film!\n\nterrible snacks\n", encoding="utf-8")
    docs, _ = load_corpus(b"a\tlabel:-1\ta.rst.sexp\ta.txt\n", tmp_path)
    assert docs[0].label == -1
    assert docs[0].edu_texts == ["Great film!", "terrible snacks"]


def test_text_file_edu_count_mismatch(tmp_path):
    write_tree(tmp_path, "a.rst.sexp")
    (tmp_path / "a.txt").write_text("only one line\n", encoding="utf-8")
    with pytest.raises(CorpusError, match="EDU lines"):
        load_corpus(b"a\tlabel:1\ta.rst.sexp\ta.txt\n", tmp_path)


def test_missing_tree_aborts_naming_path(tmp_path):
    with pytest.raises(DataError, match="missing.rst.sexp"):
        load_corpus(b"a\tscore:9\tmissing.rst.sexp\t-\n", tmp_path)


def test_missing_tree_skipped(tmp_path):
    write_tree(tmp_path, "ok.rst.sexp")
    write_tree(tmp_path, "broken.rst.sexp", "(ns oops")
    manifest = b"a\tscore:9\tmissing.rst.sexp\t-\nb\tscore:1\tok.rst.sexp\t-\nc\tscore:8\tbroken.rst.sexp\t-\n"
    docs, report = load_corpus(manifest, tmp_path, skip_bad=True)
    assert [d.id for d in docs] == ["b"]
    assert report.bad == 2


def test_flat_only_without_tree(tmp_path):
    (tmp_path / "a.txt").write_text("nice\n", encoding="utf-8")
    docs, _ = load_corpus(b"a\tscore:8\tnone.rst.sexp\ta.txt\n", tmp_path, require_trees=False)
    assert docs[0].tree is None and docs[0].edu_texts == ["nice"]


@pytest.mark.parametrize("line", [
    "a\tscore:9\ta.rst.sexp",
    "a\tstars:9\ta.rst.sexp\t-",
    "a\tscore:x\ta.rst.sexp\t-",
    "a\tscore:12\ta.rst.sexp\t-",
    "a\tlabel:0\ta.rst.sexp\t-",
])
def test_malformed_manifest_line_number(tmp_path, line):
    write_tree(tmp_path, "ok.rst.sexp")
    manifest = f"ok\tscore:9\tok.rst.sexp\t-\n{line}\n"
    with pytest.raises(CorpusError, match="line 2"):
        load_corpus(manifest.encode(), tmp_path)


def test_duplicate_ids(tmp_path):
    write_tree(tmp_path, "ok.rst.sexp")
    with pytest.raises(CorpusError, match="duplicate"):
        load_corpus(b"a\tscore:9\tok.rst.sexp\t-\na\tscore:1\tok.rst.sexp\t-\n", tmp_path)


def test_hundred_doc_recount(tmp_path, rng):
    write_tree(tmp_path, "t.rst.sexp")
    scores = rng.integers(1, 11, size=100)
    lines = [f"d{i}\tscore:{s}\tt.rst.sexp\t-" for i, s in enumerate(scores)]
    docs, report = load_corpus(("\n".join(lines) + "\n").encode(), tmp_path)
    assert len(docs) == sum(1 for s in scores if s <= 4 or s >= 7)
    assert report.neutral == sum(1 for s in scores if s in (5, 6))
    assert {d.label for d in docs} <= {-1, 1}


def test_document_label_validation():
    with pytest.raises(ValueError):
        Document("x", 0)


def test_folds_one_per_fold():
    plan = make_folds([f"d{i}" for i in range(10)], 10, seed=0)
    assert sorted(Counter(plan.assignment.values()).values()) == [1] * 10


def test_folds_sizes_23():
    plan = make_folds([f"d{i}" for i in range(23)], 10, seed=4)
    assert sorted(len(f) for f in plan.folds()) == [2] * 7 + [3] * 3


def test_folds_deterministic():
    ids = [f"d{i}" for i in range(50)]
    assert make_folds(ids, 5, 3).assignment == make_folds(ids, 5, 3).assignment
    assert make_folds(ids, 5, 3).assignment != make_folds(ids, 5, 4).assignment


def test_folds_errors():
    with pytest.raises(ValueError):
        make_folds(["a", "b"], 3)
    with pytest.raises(ValueError):
        make_folds(["a", "a", "b"], 2)


@settings(max_examples=200, deadline=None)
@given(st.integers(2, 300), st.integers(2, 20), st.integers(0, 2**31))
def test_fold_partition(n, k, seed):
    k = min(k, n)
    ids = [f"d{i}" for i in range(n)]
    plan = make_folds(ids, k, seed)
    folds = plan.folds()
    assert sorted(d for f in folds for d in f) == sorted(ids)
    sizes = [len(f) for f in folds]
    assert max(sizes) - min(sizes) <= 1


def test_evaluate():
    gold = [("a", 1), ("b", -1), ("c", 1)]
    assert evaluate(gold, gold) == 1.0
    assert evaluate([(d, -y) for d, y in gold], gold) == 0.0
    with pytest.raises(ValueError):
        evaluate([("a", 1)], gold)


def test_evaluate_counting_oracle(rng):
    ids = [f"d{i}" for i in range(1000)]
    gold = rng.choice([-1, 1], size=1000)
    pred = rng.choice([-1, 1], size=1000)
    hits = 0
    for g, p in zip(gold, pred):
        if g == p:
            hits += 1
    order = rng.permutation(1000)
    acc = evaluate([(ids[i], int(pred[i])) for i in order], list(zip(ids, gold.tolist())))
    assert acc == hits / 1000
