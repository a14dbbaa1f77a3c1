"""Density tables trending toward the asymptotic constants.

For fixed (k, l) the covering density a/n^(k-1) approaches its asymptotic
constant from above and the packing density b/n^(k-1) approaches k/l from
below.  Full-arity square instances sit exactly on both limits, so the
interesting series is the 1-rook packing of the square, whose density
climbs toward k/l = 2.
"""

from fractions import Fraction

from rookpack.core import GridParams
from rookpack.bounds import improved_covering_lower_bound
from rookpack.solve import SolverBudget, exact_min_covering, exact_max_packing


def main():
    budget = SolverBudget(max_seconds=5.0)

    print("full-arity square (k = l = 2): both densities pinned at the limits")
    print(f"  covering limit {improved_covering_lower_bound(2, 2):.4f}, "
          f"packing limit {Fraction(2, 2)}")
    for n in range(2, 7):
        g = GridParams(n, 2, 2)
        a = exact_min_covering(g, budget)
        b = exact_max_packing(g, budget)
        print(f"  n={n}: a={a.optimum} (density {a.optimum / n:.3f}), "
              f"b={b.optimum} (density {b.optimum / n:.3f})")

    print("\n1-rook packings of the square (k = 2, l = 1): density -> k/l = 2")
    print(f"{'n':>3} {'b':>5} {'density':>8}")
    prev = 0.0
    for n in range(2, 11):
        g = GridParams(n, 2, 1)
        b = exact_max_packing(g, budget)
        val = b.optimum if b.exact else b.lower_bound
        txt = str(val) if b.exact else f">={val}"
        dens = val / n
        marker = "" if dens >= prev - 1e-9 else "  (!)"
        print(f"{n:>3} {txt:>5} {dens:>8.3f}{marker}")
        prev = dens


if __name__ == "__main__":
    main()
