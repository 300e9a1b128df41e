"""Time the compiled kernels against the numpy fallback.

    python benchmarks/bench_backends.py [--dim 30] [--pop 64] [--gens 2000]

Both backends run the same seeded Rastrigin problem and must end on the
same best value; the script exits non-zero if they disagree.
"""
import argparse
import sys
import time

from islandde import _backend
from islandde.archipelago import IslandSpec
from islandde.engine import TerminationCriteria, run
from islandde.problems import make_problem


def timed(kernels, args):
    problem = make_problem("rastrigin", args.dim)
    spec = IslandSpec("adaptive", args.pop)
    term = TerminationCriteria(max_generations=args.gens)
    t0 = time.perf_counter()
    result = run(problem, spec, term, seed=args.seed, kernels=kernels)
    return time.perf_counter() - t0, result.history.final.best_f


def main(argv=None):
    parser = argparse.ArgumentParser(description=__doc__.split("\n")[0])
    parser.add_argument("--dim", type=int, default=30)
    parser.add_argument("--pop", type=int, default=64)
    parser.add_argument("--gens", type=int, default=2000)
    parser.add_argument("--seed", type=int, default=1)
    parser.add_argument("--repeat", type=int, default=3)
    args = parser.parse_args(argv)

    backends = [_backend.python_kernels]
    if _backend.compiled_kernels is not None:
        backends.insert(0, _backend.compiled_kernels)
    else:
        print("compiled backend not built; timing the fallback only")
    finals = {}
    print(f"rastrigin D={args.dim} N_p={args.pop} N_G={args.gens}")
    for k in backends:
        times = []
        for _ in range(args.repeat):
            dt, best = timed(k, args)
            times.append(dt)
        finals[k.NAME] = best
        fes = args.pop * (args.gens + 1)
        print(f"{k.NAME:>9}: best of {args.repeat} {min(times):.3f} s "
              f"({fes / min(times) / 1e6:.2f} M FES/s), final best_f {best!r}")
    if len(set(finals.values())) > 1:
        print("backends disagree", finals)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
