"""Command-line interface: ``rstsent {score,train,eval,depdt}``.

TSV results go to stdout, logs to stderr. Exit codes: 0 success, 2 usage or
configuration error, 3 data/IO error, 4 numerical failure.
"""

from __future__ import annotations

import argparse
import logging
import os
import sys

import numpy as np

from .corpus import evaluate, load_corpus, make_folds
from .depdt import dump_tsv, to_depdt
from .estimators import DiscourseLogisticRegression, LexiconClassifier, R2N2Classifier
from .exceptions import ConfigError, DataError, NumericalError
from .logreg import DEFAULT_REG_GRID
from .model_io import load_model, save_model
from .rst_tree import read_rst_file

logger = logging.getLogger("rstsent")

EXIT_OK, EXIT_CONFIG, EXIT_DATA, EXIT_NUMERIC = 0, 2, 3, 4


def _reg_grid(text):
    try:
        values = tuple(float(v) for v in text.split(",") if v.strip())
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad --reg-grid {text!r}") from None
    if not values or any(v <= 0 for v in values):
        raise argparse.ArgumentTypeError("--reg-grid needs positive values")
    return values


def _on_off(text):
    if text not in ("on", "off"):
        raise argparse.ArgumentTypeError("expected 'on' or 'off'")
    return text == "on"


def _add_data_flags(p):
    p.add_argument("--manifest", help="TSV manifest: id, score:N|label:L, tree path, text path|-")
    p.add_argument("--trees", default=None,
                   help="directory that manifest paths are relative to (default: manifest's directory)")
    p.add_argument("--skip-bad", action="store_true", help="skip unreadable documents instead of aborting")


def _add_model_flags(p):
    p.add_argument("--lexicon", help="lexicon TSV (word<TAB>positive|negative)")
    p.add_argument("--mode", choices=("flat", "depth", "r2n2"), default="depth")
    p.add_argument("--relations", type=_on_off, default=True, help="on|off (r2n2 only)")
    p.add_argument("--weight-train", type=_on_off, default=True,
                   help="on|off: depth-weight classifier features during training too")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--lr", type=float, default=0.01)
    p.add_argument("--epochs", type=int, default=30)
    p.add_argument("--patience", type=int, default=5)
    p.add_argument("--reg-grid", type=_reg_grid, default=DEFAULT_REG_GRID)
    p.add_argument("--min-count", type=int, default=None,
                   help="vocabulary frequency cutoff (default 1 with a lexicon, else 2)")


def build_parser():
    parser = argparse.ArgumentParser(prog="rstsent", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="count", default=0)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("score", help="print doc_id, psi, label for each document")
    _add_data_flags(p)
    _add_model_flags(p)
    p.add_argument("--model-in", help="fitted model file (otherwise --lexicon is used)")

    p = sub.add_parser("train", help="fit a model and write it to --model-out")
    _add_data_flags(p)
    _add_model_flags(p)
    p.add_argument("--model-out", required=True)

    p = sub.add_parser("eval", help="accuracy of --model-in, or --cv K cross-validation")
    _add_data_flags(p)
    _add_model_flags(p)
    p.add_argument("--model-in")
    p.add_argument("--cv", type=int, metavar="K")

    p = sub.add_parser("depdt", help="dump the dependency discourse tree of one tree file")
    p.add_argument("tree", help="tree file (.rst.sexp)")
    return parser


def build_estimator(args):
    min_count = args.min_count
    if min_count is not None and min_count < 1:
        raise ConfigError("--min-count must be >= 1")
    if args.lr < 0 or args.epochs < 0 or args.patience < 1:
        raise ConfigError("--lr and --epochs must be non-negative, --patience positive")
    if args.mode == "r2n2":
        return R2N2Classifier(
            relations=args.relations, lr=args.lr, epochs=args.epochs, patience=args.patience,
            seed=args.seed, init="lexicon" if args.lexicon else "logreg",
            lexicon=args.lexicon, min_count=min_count or 2, reg_grid=args.reg_grid)
    if args.lexicon:
        return LexiconClassifier(args.lexicon, weighting=args.mode, min_count=min_count or 1)
    return DiscourseLogisticRegression(
        weighting=args.mode, weight_train=args.weight_train, reg_grid=args.reg_grid,
        min_count=min_count or 2, seed=args.seed)


def _needs_trees(est):
    return isinstance(est, R2N2Classifier) or getattr(est, "weighting", "depth") == "depth"


def _load_docs(args, require_trees):
    if not args.manifest:
        raise ConfigError("--manifest is required")
    root = args.trees if args.trees is not None else os.path.dirname(os.path.abspath(args.manifest))
    try:
        with open(args.manifest, "rb") as fh:
            docs, report = load_corpus(fh, root, skip_bad=args.skip_bad, require_trees=require_trees)
    except OSError as exc:
        raise DataError(f"cannot read manifest {args.manifest}: {exc.strerror}") from None
    if report.neutral:
        logger.info("skipped %d neutral documents", report.neutral)
    if report.bad:
        logger.warning("skipped %d unreadable documents", report.bad)
    if not docs:
        raise DataError("manifest yielded no documents")
    if require_trees:
        missing = [d.id for d in docs if d.tree is None]
        if missing:
            raise DataError(f"discourse trees required but missing for: {', '.join(missing[:5])}")
    return docs


def _fit(est, docs):
    try:
        return est.fit(docs)
    except ConfigError:
        raise
    except NumericalError:
        raise
    except ValueError as exc:
        raise DataError(str(exc)) from None


def _labels(docs):
    return np.array([d.label for d in docs])


def cmd_score(args, out):
    if args.model_in:
        est = load_model(args.model_in)
    elif args.lexicon:
        if args.mode == "r2n2":
            raise ConfigError("r2n2 scoring needs --model-in")
        est = build_estimator(args)
    else:
        raise ConfigError("score needs --model-in or --lexicon")
    docs = _load_docs(args, _needs_trees(est))
    if isinstance(est, LexiconClassifier) and not args.model_in:
        est.fit(docs)
    for doc, psi in zip(docs, est.decision_function(docs)):
        out.write(f"{doc.id}\t{float(psi)!r}\t{1 if psi >= 0 else -1}\n")
    return EXIT_OK


def cmd_train(args, out):
    est = build_estimator(args)
    docs = _load_docs(args, _needs_trees(est))
    _fit(est, docs)
    save_model(est, args.model_out)
    acc = float(np.mean(est.predict(docs) == _labels(docs)))
    summary = [f"kind={type(est).__name__}", f"train_accuracy={acc:.4f}"]
    if isinstance(est, R2N2Classifier):
        held = [h["heldout_accuracy"] for h in est.history_ if "heldout_accuracy" in h]
        if held:
            summary.append(f"heldout_accuracy={max(held):.4f}")
        summary.append(f"epochs={len(est.history_)}")
    elif isinstance(est, DiscourseLogisticRegression):
        summary.append(f"heldout_accuracy={est.model_.heldout_accuracy:.4f}")
        summary.append(f"reg={est.model_.reg:g}")
    print("trained " + " ".join(summary), file=sys.stderr)
    return EXIT_OK


def cmd_eval(args, out):
    if args.cv is None and not args.model_in:
        raise ConfigError("eval needs --model-in or --cv K")
    if args.cv is not None and args.model_in:
        raise ConfigError("--cv and --model-in are mutually exclusive")
    if args.model_in:
        est = load_model(args.model_in)
        docs = _load_docs(args, _needs_trees(est))
        pred = est.predict(docs)
        acc = evaluate(zip([d.id for d in docs], pred.tolist()), [(d.id, d.label) for d in docs])
        out.write(f"accuracy\t{acc!r}\n")
        return EXIT_OK

    if args.cv < 2:
        raise ConfigError("--cv needs K >= 2")
    template = build_estimator(args)
    docs = _load_docs(args, _needs_trees(template))
    try:
        plan = make_folds([d.id for d in docs], args.cv, args.seed)
    except ValueError as exc:
        raise DataError(str(exc)) from None
    accs = []
    for k in range(args.cv):
        test = [d for d in docs if plan.assignment[d.id] == k]
        train = [d for d in docs if plan.assignment[d.id] != k]
        est = _fit(template.__class__(**template.get_params()), train)
        pred = est.predict(test)
        acc = evaluate(zip([d.id for d in test], pred.tolist()), [(d.id, d.label) for d in test])
        accs.append(acc)
        out.write(f"fold\t{k}\t{acc!r}\n")
    out.write(f"mean\t{float(np.mean(accs))!r}\n")
    return EXIT_OK


def cmd_depdt(args, out):
    out.write(dump_tsv(to_depdt(read_rst_file(args.tree))))
    return EXIT_OK


COMMANDS = {"score": cmd_score, "train": cmd_train, "eval": cmd_eval, "depdt": cmd_depdt}


def main(argv=None, out=None):
    out = out or sys.stdout
    args = build_parser().parse_args(argv)
    logging.basicConfig(
        level=logging.WARNING - 10 * min(args.verbose, 2),
        format="%(levelname)s %(name)s: %(message)s",
        stream=sys.stderr,
    )
    try:
        return COMMANDS[args.command](args, out)
    except ConfigError as exc:
        print(f"rstsent: config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (DataError, OSError) as exc:
        print(f"rstsent: data error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except NumericalError as exc:
        print(f"rstsent: numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())
