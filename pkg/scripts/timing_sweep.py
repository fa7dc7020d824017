"""Wall-clock cost of the identity checks as the number of arguments grows.

Usage: python scripts/timing_sweep.py [MAX_N]
"""

import random
import sys
import time

from rbspitzer.identities import check_key_identity, check_ncbs, check_new_identity, distinct_arguments
from rbspitzer.rbmodels import MatrixPoly, SequenceModel


def timed(fn):
    start = time.perf_counter()
    ok = fn().residual_zero
    return ok, time.perf_counter() - start


def main(max_n: int = 5) -> int:
    ok_all = True
    print(f"{'n':>2} {'model':<8} {'key':>8} {'ncbs':>8} {'tu-left':>8}")
    for alg in (SequenceModel(length=max_n + 2), MatrixPoly()):
        for n in range(1, max_n + 1):
            xs = distinct_arguments(alg, n, random.Random(n))
            a = None if isinstance(alg, SequenceModel) else xs[0]
            cells = [
                timed(lambda: check_key_identity(n, alg, a)),
                timed(lambda: check_ncbs(xs)),
                timed(lambda: check_new_identity(xs, "left")),
            ]
            ok_all &= all(ok for ok, _ in cells)
            print(f"{n:>2} {alg.name:<8} " + " ".join(f"{t:8.3f}" for _, t in cells))
    return 0 if ok_all else 1


if __name__ == "__main__":
    sys.exit(main(int(sys.argv[1]) if len(sys.argv) > 1 else 5))
