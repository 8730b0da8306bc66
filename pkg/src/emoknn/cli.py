"""Command-line interface: sweep, predict, explain, validate."""

from __future__ import annotations

import argparse
import sys

from .errors import EmoknnError
from .runner import load_config, run_explain, run_predict, run_sweep, validate_artifacts


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="emoknn",
        description="Explainable weighted-kNN ensembles for emotion-intensity labeling",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p: argparse.ArgumentParser, with_jobs: bool = True):
        p.add_argument("--config", required=True, help="experiment config file (YAML)")
        p.add_argument("--emotion", default="all", help="emotion name or `all`")
        p.add_argument("--out", default=None, help="output directory (overrides config)")
        p.add_argument("--seed", type=int, default=None, help="CV seed (overrides config)")
        if with_jobs:
            p.add_argument("--jobs", type=int, default=1, help="parallel grid workers")

    sweep = sub.add_parser("sweep", help="evaluate the configured grid by 5-fold CV")
    common(sweep)

    predict = sub.add_parser("predict", help="fit the ensemble and label the test data")
    common(predict)

    explain = sub.add_parser("explain", help="emit explanation reports for test ids")
    common(explain, with_jobs=False)
    explain.add_argument("--ids", required=True, help="comma-separated instance ids")

    validate = sub.add_parser("validate", help="check configured artifacts")
    validate.add_argument("--config", required=True)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        config = load_config(args.config)
        if args.command == "sweep":
            result = run_sweep(
                config, emotion=args.emotion, out=args.out, seed=args.seed, jobs=args.jobs
            )
            for emotion, best in result.best.items():
                if best is not None:
                    print(
                        f"{emotion.value}: best mean PCC {best.mean_pcc!r} "
                        f"(cleaning={best.cleaning}, lexicon={best.lexicon}, k={best.k})"
                    )
                else:
                    print(f"{emotion.value}: no grid point succeeded")
            print(f"tables written to {result.out_dir}")
        elif args.command == "predict":
            result = run_predict(config, emotion=args.emotion, out=args.out)
            for emotion, path in result.submission_paths.items():
                print(f"{emotion.value}: wrote {path}")
            for iid, path in result.explanation_paths.items():
                print(f"explained {iid}: {path}")
        elif args.command == "explain":
            ids = [i for i in args.ids.split(",") if i]
            result = run_explain(config, ids, emotion=args.emotion, out=args.out)
            for iid, path in result.explanation_paths.items():
                print(f"explained {iid}: {path}")
        elif args.command == "validate":
            report = validate_artifacts(config)
            sys.stdout.write(report.to_text())
            return 0 if report.ok else 1
    except (EmoknnError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
