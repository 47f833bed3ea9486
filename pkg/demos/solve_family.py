"""Short search on a generated instance, e.g. ``python solve_family.py CIRC20-8 60``."""
from __future__ import annotations

import sys

from irrsched.alahc import SearchConfig, run
from irrsched.io import generate_family, parse_family_name


def main(name="CON20-8", seconds=30.0):
    inst = generate_family(*parse_family_name(name))
    for suite in ("Base", "All"):
        res = run(inst, "ittp", SearchConfig(suite=suite, time_limit=seconds, seed=0))
        print(f"{name} {suite:>4}: {res.initial_cost} -> {res.evaluation.total} "
              f"({res.iterations} iterations, {res.elapsed:.1f}s)")
        for row in res.trace[-3:]:
            print(f"    it={row.iteration} best={row.best_cost} l_h={row.l_h} rho={row.rho:.3f}")


if __name__ == "__main__":
    args = sys.argv[1:]
    main(args[0] if args else "CON20-8", float(args[1]) if len(args) > 1 else 30.0)
