"""Command-line entry point: ``lightlike analyze FILE`` and ``lightlike self-test``."""
from __future__ import annotations

import argparse
import sys
import time
from pathlib import Path

from . import __version__
from .acceptance import run_suite
from .gfh import RouteDisagreement
from .hypersurface import ImplicationViolation, OracleMismatch
from .report import InputError, analyze, dumps, load_model_file, text_summary

EXIT_OK = 0
EXIT_INPUT = 1
EXIT_ROUTE = 2
EXIT_ACCEPTANCE = 3

EXAMPLES = ("gfh_p2.json", "umbilical.json")


def _positive(text: str) -> int:
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError("must be >= 1")
    return v


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--samples", type=_positive, default=None,
                        help="sampled directions per causal sign")
    common.add_argument("--seed", type=int, default=None, help="sampling seed")
    common.add_argument("--mode", choices=("exact", "float"), default=None,
                        help="arithmetic for the Osserman test")
    common.add_argument("--out", type=Path, default=None, help="write the report here")
    common.add_argument("--format", choices=("json", "text"), default="json",
                        help="machine report (json) or human summary (text)")

    parser = argparse.ArgumentParser(prog="lightlike",
                                     description="Exact curvature checks for degenerate metrics.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)
    a = sub.add_parser("analyze", parents=[common], help="analyze a model file")
    a.add_argument("file", help="JSON model file")
    sub.add_parser("self-test", parents=[common], help="run the bundled acceptance suite")
    return parser


def _example_paths() -> list[Path]:
    from importlib import resources
    root = resources.files("lightlike").joinpath("examples")
    return [Path(str(root.joinpath(name))) for name in EXAMPLES]


def determinism_probe(seed: int) -> bool:
    """Analyze each bundled example twice; the serialized reports must match byte for byte."""
    for path in _example_paths():
        doc = load_model_file(str(path))
        if dumps(analyze(doc, seed=seed)) != dumps(analyze(doc, seed=seed)):
            return False
    return True


def self_test(seed: int, samples: int | None) -> tuple[dict, dict]:
    results, timings = run_suite(seed, samples, probe=lambda: determinism_probe(seed))
    report = {"toolkit": "lightlike", "version": __version__, "command": "self-test",
              "seed": seed, "criteria": [r.to_dict() for r in results],
              "passed": all(r.passed for r in results)}
    return report, timings


def _emit(text: str, out: Path | None) -> None:
    if out is None:
        sys.stdout.write(text)
    else:
        out.write_text(text, encoding="utf-8")


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    t0 = time.perf_counter()
    try:
        if args.command == "analyze":
            report = analyze(load_model_file(args.file), args.samples, args.seed, args.mode)
            code = EXIT_OK
        else:
            report, timings = self_test(args.seed if args.seed is not None else 0, args.samples)
            for label, secs in timings.items():
                print(f"criterion {label}: {secs:.2f}s", file=sys.stderr)
            code = EXIT_OK if report["passed"] else EXIT_ACCEPTANCE
    except InputError as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (RouteDisagreement, OracleMismatch, ImplicationViolation) as exc:
        print(f"internal consistency failure: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_ROUTE
    _emit(text_summary(report) if args.format == "text" else dumps(report), args.out)
    # runtime stays off stdout so reports are byte-identical across runs
    print(f"runtime: {time.perf_counter() - t0:.2f}s", file=sys.stderr)
    return code


if __name__ == "__main__":
    sys.exit(main())
