"""Print the Strichartz coefficient table and check the three Magnus routes.

Usage: python scripts/magnus_table.py [ORDER]
"""

import random
import sys

from rbspitzer.foundations import enumerate_compositions
from rbspitzer.rbmodels import MatrixPoly
from rbspitzer.series import (
    atkinson_F,
    magnus_omega_from_log,
    magnus_omega_recursive,
    magnus_omega_strichartz,
    series_exp,
    strichartz_coefficient,
)


def main(order: int = 5) -> int:
    for n in range(1, order + 1):
        for comp in enumerate_compositions(n):
            print(f"{str(comp):<20} {strichartz_coefficient(comp)}")
    alg = MatrixPoly()
    a = alg.random_element(random.Random(0))
    ref = magnus_omega_from_log(a, order)
    routes = {
        "recursive": magnus_omega_recursive(a, order) == ref,
        "strichartz": magnus_omega_strichartz(a, order) == ref,
        "exp(omega) = F": series_exp(ref) == atkinson_F(a, order),
    }
    for name, ok in routes.items():
        print(f"{name:<16} {'agree' if ok else 'DISAGREE'}")
    return 0 if all(routes.values()) else 1


if __name__ == "__main__":
    sys.exit(main(int(sys.argv[1]) if len(sys.argv) > 1 else 5))
