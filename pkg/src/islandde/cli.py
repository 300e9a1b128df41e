"""Command-line experiment runner.

::

    islandde run exp.yaml --seeds 1,2,3 --out results/exp --workers 4
    islandde summarize results/
    islandde plotdata results/exp

``run`` writes ``config.yaml``, one ``history_seed{s}.csv`` per seed and
``summary.csv`` into the output directory. ``summarize`` recomputes the
summary of one run directory or of every run directory below it.
``plotdata`` writes the min/mean aggregate of all histories in a directory.
"""
from __future__ import annotations

import argparse
import csv
import io
import logging
import re
import sys
import warnings
from dataclasses import replace
from pathlib import Path

import numpy as np

from .config import ExperimentConfig, parse_config
from .errors import ConfigurationError
from .history import RunHistory

log = logging.getLogger("islandde")

SUMMARY_COLUMNS = ("config-id", "N_i", "N_p", "N_G", "mean", "std", "best")
PLOT_COLUMNS = ("generation", "min_best_f", "mean_best_f")
_HISTORY_RE = re.compile(r"history_seed(-?\d+)\.csv$")


def history_path(out: Path, seed: int) -> Path:
    return out / f"history_seed{seed}.csv"


def _histories(run_dir: Path) -> list[tuple[int, Path]]:
    found = []
    for p in run_dir.iterdir():
        m = _HISTORY_RE.match(p.name)
        if m:
            found.append((int(m.group(1)), p))
    return sorted(found)


def run_experiment(config: ExperimentConfig, out=None, workers: int | None = None) -> int:
    """Run every seed of ``config``; returns a process exit code.

    I/O failures are reported per file and turn the exit code to 1 without
    stopping the remaining seeds.
    """
    out = Path(out or config.output)
    try:
        out.mkdir(parents=True, exist_ok=True)
        config.dump(out / "config.yaml")
    except OSError as exc:
        log.error("cannot write %s: %s", out / "config.yaml", exc)
        return 1
    status = 0
    for seed in config.seeds:
        result = config.driver(seed, workers=workers).run()
        path = history_path(out, seed)
        try:
            result.history.to_csv(path)
        except OSError as exc:
            log.error("cannot write %s: %s", path, exc)
            status = 1
            continue
        final = result.history.final
        log.info("seed %d: best_f=%r psi=%r fes=%d", seed, final.best_f, final.best_psi_max,
                 final.fes)
    try:
        write_summary(out)
    except (OSError, ValueError) as exc:
        log.error("cannot summarise %s: %s", out, exc)
        status = 1
    return status


def summary_row(run_dir) -> dict:
    """Summary statistics recomputed from the CSVs of one run directory.

    Only the seeds listed in the directory's ``config.yaml`` are read.
    ``std`` is the sample standard deviation (0 for a single seed).
    """
    run_dir = Path(run_dir)
    config = parse_config(run_dir / "config.yaml")
    missing = [s for s in config.seeds if not history_path(run_dir, s).exists()]
    if missing:
        raise ValueError(f"{run_dir}: no history for seeds {missing}")
    hists = [RunHistory.from_csv(history_path(run_dir, s)) for s in config.seeds]
    finals = np.array([h.final.best_f for h in hists])
    return {
        "config-id": config.name,
        "N_i": hists[0].n_islands,
        "N_p": config.islands.population_size,
        "N_G": max(h.final.generation for h in hists),
        "mean": float(np.mean(finals)),
        "std": float(np.std(finals, ddof=1)) if len(finals) > 1 else 0.0,
        "best": float(np.min(finals)),
    }


def format_summary(rows) -> str:
    buf = io.StringIO()
    w = csv.DictWriter(buf, SUMMARY_COLUMNS, lineterminator="\n")
    w.writeheader()
    for row in rows:
        w.writerow({k: repr(v) if isinstance(v, float) else v for k, v in row.items()})
    return buf.getvalue()


def write_summary(run_dir) -> str:
    text = format_summary([summary_row(run_dir)])
    (Path(run_dir) / "summary.csv").write_text(text)
    return text


def _run_dirs(root: Path) -> list[Path]:
    if (root / "config.yaml").exists():
        return [root]
    return sorted(p for p in root.iterdir() if p.is_dir() and (p / "config.yaml").exists())


def summarize(root) -> str:
    root = Path(root)
    dirs = _run_dirs(root)
    if not dirs:
        raise ValueError(f"{root}: no run directories (config.yaml) found")
    text = format_summary([summary_row(d) for d in dirs])
    (root / "summary.csv").write_text(text)
    return text


def emit_plotdata(histories) -> str:
    """Per-generation min and mean of ``best_f`` across runs, as CSV text.

    Histories of unequal length are cut to the shortest, with a warning.
    """
    histories = list(histories)
    if not histories:
        raise ValueError("at least one history is required")
    n = min(len(h) for h in histories)
    if any(len(h) != n for h in histories):
        warnings.warn(f"histories differ in length; keeping the first {n} records",
                      RuntimeWarning, stacklevel=2)
    gens = histories[0].column("generation")[:n]
    for h in histories[1:]:
        if not np.array_equal(h.column("generation")[:n], gens):
            raise ValueError("histories record different generations")
    best = np.array([h.column("best_f")[:n] for h in histories])
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(PLOT_COLUMNS)
    for g, lo, mu in zip(gens, best.min(axis=0), best.mean(axis=0)):
        w.writerow([int(g), repr(float(lo)), repr(float(mu))])
    return buf.getvalue()


def plotdata(run_dir) -> str:
    run_dir = Path(run_dir)
    files = _histories(run_dir)
    if not files:
        raise ValueError(f"{run_dir}: no history files")
    text = emit_plotdata(RunHistory.from_csv(p) for _, p in files)
    (run_dir / "plotdata.csv").write_text(text)
    return text


def _seed_list(text: str) -> list[int]:
    try:
        seeds = [int(s) for s in text.split(",") if s.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"seeds must be comma-separated integers: {text!r}")
    if not seeds:
        raise argparse.ArgumentTypeError("empty seed list")
    return seeds


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("-v", "--verbose", action="store_true", help="log progress per seed")
    parser = argparse.ArgumentParser(prog="islandde", description=__doc__.split("\n")[0])
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", parents=[common], help="run an experiment config")
    run.add_argument("config", type=Path)
    run.add_argument("--seeds", type=_seed_list, help="comma-separated, overrides the config")
    run.add_argument("--out", type=Path, help="output directory (default: config output)")
    run.add_argument("--workers", type=int, help="island threads per run")

    summ = sub.add_parser("summarize", parents=[common],
                          help="summary.csv of one or many run directories")
    summ.add_argument("dir", type=Path)

    plot = sub.add_parser("plotdata", parents=[common],
                          help="min/mean best_f per generation across seeds")
    plot.add_argument("dir", type=Path)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        if args.command == "run":
            config = parse_config(args.config)
            if args.seeds:
                config = replace(config, seeds=tuple(args.seeds))
            if args.workers is not None and args.workers < 1:
                raise ConfigurationError("must be positive", "--workers")
            return run_experiment(config, args.out, args.workers)
        if args.command == "summarize":
            sys.stdout.write(summarize(args.dir))
        else:
            sys.stdout.write(plotdata(args.dir))
        return 0
    except (ConfigurationError, ValueError, OSError) as exc:
        print(f"islandde: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
