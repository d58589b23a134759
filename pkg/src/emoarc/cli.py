"""Command-line front end.

Subcommands: ``gold``, ``lexo``, ``eval``, ``sweep``, ``oracle``, ``synth``.
A JSON file given with ``--config`` supplies defaults for any flag (keys are
the long flag names with dashes replaced by underscores); flags on the
command line win.  Lexicons with differing formats can be listed in the
config file under ``lexicons`` as objects with ``path``, ``format``,
``emotion``, ``granularity``, ``score_range`` and ``labels``.

Exit codes: 0 success, 2 usage/config, 3 IO, 4 format, 5 degenerate arc,
6 empty window, 7 sweep finished but some cells failed.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from typing import Optional, Sequence

from . import __version__
from .arcgen import ArcConfig, gold_arc, predicted_arc, read_arc, standardize, write_arc
from .errors import DegenerateArcError, EmptyWindowError, FormatError
from .evaluate import (
    STANDARD_BINS,
    EvalReport,
    OracleMethod,
    SweepGrid,
    evaluate_pair,
    sweep,
    write_reports,
)
from .ingest import ColumnMapping, LabelScheme, OrderPolicy, load_corpus
from .lexstore import ThresholdSpec, load_lexicon
from .synthgen import SynthSpec, write_synthetic

log = logging.getLogger("emoarc")

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_IO = 3
EXIT_FORMAT = 4
EXIT_DEGENERATE = 5
EXIT_EMPTY = 6
EXIT_CELLS = 7


def _floats(text: str) -> list[float]:
    return [float(v) for v in str(text).split(",") if v.strip()]


def _ints(text: str) -> list[int]:
    return [int(v) for v in str(text).split(",") if v.strip()]


def _add_corpus_args(p):
    g = p.add_argument_group("corpus")
    g.add_argument("--corpus", nargs="+", help="corpus file(s); several are concatenated")
    g.add_argument("--text-col", default="text")
    g.add_argument("--label-col", default="label")
    g.add_argument("--id-col")
    g.add_argument("--time-col")
    g.add_argument("--scheme", default="continuous:0,1",
                   help="categorical:-3..3, categorical:0,1 or continuous:LO,HI")
    g.add_argument("--order", default="as_given", help="as_given, by_timestamp or shuffle:SEED")
    g.add_argument("--emotion-name")


def _add_lexicon_args(p, multiple: bool):
    g = p.add_argument_group("lexicon")
    if multiple:
        g.add_argument("--lexicon", action="append", help="lexicon file (repeatable)")
    else:
        g.add_argument("--lexicon", help="lexicon file")
    g.add_argument("--lexicon-format", default="two_column",
                   choices=("two_column", "nrc_emolex", "nrc_vad_column"))
    g.add_argument("--emotion", help="emotion or dimension to select from the lexicon file")
    g.add_argument("--lexicon-granularity", choices=("categorical", "continuous"))
    g.add_argument("--lexicon-range", help="LO,HI score range")
    g.add_argument("--lexicon-labels", help="comma-separated labels of a categorical lexicon")


def _add_arc_args(p):
    g = p.add_argument_group("arc")
    g.add_argument("--bin", type=int, default=100)
    g.add_argument("--stride", type=int, default=1)
    g.add_argument("--oov", default="zero", choices=("drop_na", "zero"))
    g.add_argument("--granularity", default="instance_mean",
                   choices=("instance_mean", "window_word_pool"))
    g.add_argument("--threshold", type=float, help="lexicon threshold tau")
    g.add_argument("--threshold-mode", choices=("magnitude", "signed"))
    g.add_argument("--standardize", action="store_true", help="z-score the emitted arc")


def build_parser() -> tuple[argparse.ArgumentParser, dict]:
    parser = argparse.ArgumentParser(prog="emoarc", description=__doc__.split("\n\n")[0])
    parser.add_argument("--version", action="version", version=__version__)
    parser.add_argument("--config", help="JSON file of flag defaults")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)
    subs = {}

    p = subs["gold"] = sub.add_parser("gold", help="gold arc from human labels")
    _add_corpus_args(p)
    _add_arc_args(p)
    p.add_argument("--out", help="arc CSV (stdout if omitted)")

    p = subs["lexo"] = sub.add_parser("lexo", help="lexicon-only predicted arc")
    _add_corpus_args(p)
    _add_lexicon_args(p, multiple=False)
    _add_arc_args(p)
    p.add_argument("--eval", action="store_true", help="also print rho against the gold arc")
    p.add_argument("--out", help="arc CSV (stdout if omitted)")

    p = subs["eval"] = sub.add_parser("eval", help="Spearman rho between two arc CSVs")
    p.add_argument("--gold", required=False)
    p.add_argument("--pred", required=False)
    p.add_argument("--out", help="one-row report CSV")

    p = subs["sweep"] = sub.add_parser("sweep", help="lexicon experiment grid")
    _add_corpus_args(p)
    _add_lexicon_args(p, multiple=True)
    p.add_argument("--preset", choices=("paper",),
                   help="paper: bins 1,10,50,100,200,300, stride 1, both OOV policies")
    p.add_argument("--bins", default=",".join(map(str, STANDARD_BINS)))
    p.add_argument("--stride", type=int, default=1)
    p.add_argument("--oov", default="drop_na,zero")
    p.add_argument("--thresholds", help="comma-separated tau values")
    p.add_argument("--threshold-mode", choices=("magnitude", "signed"))
    p.add_argument("--granularities", default="instance_mean")
    p.add_argument("--standardize", action="store_true", help="z-score arcs before correlating")
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--out", help="report CSV (stdout if omitted)")

    p = subs["oracle"] = sub.add_parser("oracle", help="simulated-classifier accuracy curve")
    _add_corpus_args(p)
    p.add_argument("--accuracy", default="0.05,0.143,0.2,0.3,0.4,0.5,0.6,0.7,0.8,0.9,1.0")
    p.add_argument("--bins", default=",".join(map(str, STANDARD_BINS)))
    p.add_argument("--stride", type=int, default=1)
    p.add_argument("--trials", type=int, default=20)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--confusion", default="uniform", choices=("uniform", "distance"))
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--out", help="report CSV (stdout if omitted)")

    p = subs["synth"] = sub.add_parser("synth", help="write a synthetic corpus and lexicon")
    p.add_argument("--n", type=int, default=5000)
    p.add_argument("--scheme", default="categorical:-3..3")
    p.add_argument("--vocab-size", type=int, default=700)
    p.add_argument("--tokens", type=int, default=6)
    p.add_argument("--signal", type=float, default=0.3)
    p.add_argument("--filler", type=int, default=300)
    p.add_argument("--seed", type=int, default=42)
    p.add_argument("--corpus-out", required=False)
    p.add_argument("--lexicon-out", required=False)
    return parser, subs


def _require(args, *names):
    missing = [n for n in names if getattr(args, n, None) in (None, [], "")]
    if missing:
        raise UsageError("missing required option(s): " + ", ".join(
            "--" + n.replace("_", "-") for n in missing))


class UsageError(Exception):
    pass


def _corpus(args):
    _require(args, "corpus")
    mapping = ColumnMapping(args.text_col, args.label_col, args.id_col, args.time_col)
    return load_corpus(args.corpus, mapping, LabelScheme.parse(args.scheme),
                       OrderPolicy.parse(args.order), emotion_name=args.emotion_name)


def _lexicon_kwargs(d: dict) -> dict:
    rng = d.get("score_range")
    if isinstance(rng, str):
        rng = _floats(rng)
    labels = d.get("labels")
    if isinstance(labels, str):
        labels = _floats(labels)
    return {
        "format": d.get("format") or "two_column",
        "emotion": d.get("emotion"),
        "granularity": d.get("granularity"),
        "score_range": tuple(rng) if rng else None,
        "labels": labels,
    }


def _lexicons(args) -> list:
    paths = args.lexicon
    if paths is None and getattr(args, "lexicons", None):
        return [load_lexicon(d["path"], **_lexicon_kwargs(d)) for d in args.lexicons]
    if isinstance(paths, str):
        paths = [paths]
    if not paths:
        raise UsageError("missing required option: --lexicon")
    shared = {
        "format": args.lexicon_format,
        "emotion": args.emotion,
        "granularity": args.lexicon_granularity,
        "score_range": args.lexicon_range,
        "labels": args.lexicon_labels,
    }
    return [load_lexicon(p, **_lexicon_kwargs(shared)) for p in paths]


def _arc_config(args) -> ArcConfig:
    thr = None
    if getattr(args, "threshold", None) is not None:
        thr = ThresholdSpec(args.threshold, args.threshold_mode)
    return ArcConfig(args.bin, args.stride, args.oov, args.granularity, thr)


def _resolved(args) -> dict:
    out = {k: v for k, v in vars(args).items() if k not in ("func", "verbose")}
    out["emoarc_version"] = __version__
    return json.loads(json.dumps(out, default=str))


def _emit_arc(arc, args):
    arc.provenance["run_config"] = _resolved(args)
    if args.out:
        write_arc(arc, args.out)
        print(f"windows {len(arc)}")
    else:
        sys.stdout.write("window_start,score\n")
        for s, v in zip(arc.window_starts, arc.values):
            sys.stdout.write(f"{int(s)},{float(v)!r}\n")
        print(f"windows {len(arc)}", file=sys.stderr)


def cmd_gold(args) -> int:
    corpus = _corpus(args)
    arc = gold_arc(corpus, _arc_config(args))
    if args.standardize:
        arc = standardize(arc)
    _emit_arc(arc, args)
    return EXIT_OK


def cmd_lexo(args) -> int:
    corpus = _corpus(args)
    lex = _lexicons(args)[0]
    config = _arc_config(args)
    arc = predicted_arc(corpus, lex, config)
    if args.standardize:
        arc = standardize(arc)
    _emit_arc(arc, args)
    if args.eval:
        report = evaluate_pair(gold_arc(corpus, config), arc)
        print(f"rho {report.rho:.6f}", file=sys.stdout if args.out else sys.stderr)
    return EXIT_OK


def cmd_eval(args) -> int:
    _require(args, "gold", "pred")
    report = evaluate_pair(read_arc(args.gold), read_arc(args.pred), method="pair")
    print(f"rho {report.rho:.6f}")
    if args.out:
        write_reports([report], args.out, _resolved(args))
    return EXIT_OK


def _write_or_print(reports: Sequence[EvalReport], args) -> int:
    provenance = _resolved(args)
    if args.out:
        write_reports(reports, args.out, provenance)
    else:
        import csv

        from .evaluate import REPORT_COLUMNS

        writer = csv.DictWriter(sys.stdout, fieldnames=REPORT_COLUMNS, lineterminator="\n")
        writer.writeheader()
        for r in reports:
            writer.writerow(r.row())
    failed = [r for r in reports if not r.ok]
    for r in failed:
        log.warning("cell %s/%s failed: %s", r.config.bin_size if r.config else "?",
                    r.lexicon or r.accuracy, r.message)
    print(f"cells {len(reports)} failed {len(failed)}", file=sys.stderr)
    return EXIT_CELLS if failed else EXIT_OK


def cmd_sweep(args) -> int:
    corpus = _corpus(args)
    lexicons = _lexicons(args)
    bins = STANDARD_BINS if args.preset == "paper" else _ints(args.bins)
    oov = ("drop_na", "zero") if args.preset == "paper" else tuple(args.oov.split(","))
    stride = 1 if args.preset == "paper" else args.stride
    thresholds = (None,)
    if args.thresholds:
        thresholds = tuple(ThresholdSpec(t, args.threshold_mode) for t in _floats(args.thresholds))
    grid = SweepGrid(bins, oov, thresholds, lexicons, tuple(args.granularities.split(",")), stride)
    reports = sweep(corpus, grid, n_jobs=args.jobs, standardize_arcs=args.standardize)
    return _write_or_print(reports, args)


def cmd_oracle(args) -> int:
    corpus = _corpus(args)
    method = OracleMethod(tuple(_floats(args.accuracy)), args.trials, args.seed, args.confusion)
    grid = SweepGrid(_ints(args.bins), stride=args.stride)
    reports = sweep(corpus, grid, method, n_jobs=args.jobs)
    return _write_or_print(reports, args)


def cmd_synth(args) -> int:
    _require(args, "corpus_out", "lexicon_out")
    spec = SynthSpec(
        n_instances=args.n, scheme=LabelScheme.parse(args.scheme), vocab_size=args.vocab_size,
        tokens_per_instance=args.tokens, label_signal=args.signal, seed=args.seed,
        filler_size=args.filler,
    )
    write_synthetic(spec, args.corpus_out, args.lexicon_out)
    print(f"wrote {args.corpus_out} and {args.lexicon_out}")
    return EXIT_OK


COMMANDS = {
    "gold": cmd_gold, "lexo": cmd_lexo, "eval": cmd_eval,
    "sweep": cmd_sweep, "oracle": cmd_oracle, "synth": cmd_synth,
}


def parse_args(argv: Optional[Sequence[str]] = None) -> argparse.Namespace:
    parser, subs = build_parser()
    args = parser.parse_args(argv)
    if args.config:
        with open(args.config, encoding="utf-8") as fh:
            defaults = json.load(fh)
        if not isinstance(defaults, dict):
            raise UsageError(f"{args.config}: config must be a JSON object")
        subs[args.command].set_defaults(**defaults)
        args = parser.parse_args(argv)
    return args


def main(argv: Optional[Sequence[str]] = None) -> int:
    try:
        args = parse_args(argv)
    except (UsageError, json.JSONDecodeError) as exc:
        print(f"emoarc: usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"emoarc: IO error: {exc}", file=sys.stderr)
        return EXIT_IO
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return COMMANDS[args.command](args)
    except UsageError as exc:
        print(f"emoarc: usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"emoarc: IO error: {exc}", file=sys.stderr)
        return EXIT_IO
    except FormatError as exc:
        print(f"emoarc: format error: {exc}", file=sys.stderr)
        return EXIT_FORMAT
    except DegenerateArcError as exc:
        print(f"emoarc: degenerate arc: {exc}", file=sys.stderr)
        return EXIT_DEGENERATE
    except EmptyWindowError as exc:
        print(f"emoarc: empty window: {exc}", file=sys.stderr)
        return EXIT_EMPTY
    except ValueError as exc:
        print(f"emoarc: invalid input: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
