"""Birkhoff decomposition of random characters with every counterterm route.

Usage: python scripts/renorm_demo.py [SEED]
"""

import random
import sys
import time

from rbspitzer.renorm import (
    bogoliubov,
    closed_counterterm,
    exp_counterterm,
    random_character,
    uniqueness_check,
)


def main(seed: int = 0) -> int:
    ok = True
    for hopf, degree in (("ladder", 6), ("trees", 5), ("ladder", 8)):
        gamma = random_character(hopf, degree, random.Random(seed))
        start = time.perf_counter()
        pair = bogoliubov(gamma)
        row = {
            "closed": closed_counterterm(gamma) == pair.gamma_minus,
            "exp/combinatorial": exp_counterterm(gamma, route="combinatorial") == pair.gamma_minus,
            "exp/strichartz": exp_counterterm(gamma, route="strichartz") == pair.gamma_minus,
            "uniqueness": uniqueness_check(gamma, pair),
        }
        elapsed = time.perf_counter() - start
        ok &= all(row.values())
        print(f"{hopf:<7} degree {degree}: {row} ({elapsed:.1f}s)")
    return 0 if ok else 1


if __name__ == "__main__":
    sys.exit(main(int(sys.argv[1]) if len(sys.argv) > 1 else 0))
