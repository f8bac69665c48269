"""Frozen reference data for the verification suite.

The dihedral torus table lists the seven displayed orbits of the worked
example: each entry is (point numerator pair over denominator 30, stabilizer
(n, k) meaning the subgroup generated by a^n and a^k b). The final-column
points (stabilizers (6,0), (3,0), (2,0), (1,0)) are the twelve displayed
fixed points of the index-6 subgroup with k = 0.
"""

from __future__ import annotations

from fractions import Fraction

from .groups import Subgroup

DINF_TORUS_DENOMINATOR = 30

DINF_TORUS_TABLE: tuple[tuple[tuple[tuple[int, int], tuple[int, int]], ...], ...] = (
    # Y1
    (((0, 0), (1, 0)),),
    # Y2
    (((0, 15), (2, 0)), ((15, 0), (2, 0))),
    # Y3
    (((20, 20), (3, 1)), ((20, 0), (3, 2)), ((20, 10), (3, 0))),
    # Y4
    (
        ((8, 26), (6, 4)),
        ((2, 14), (6, 4)),
        ((26, 0), (6, 2)),
        ((14, 0), (6, 2)),
        ((8, 4), (6, 0)),
        ((2, 16), (6, 0)),
    ),
    # Y5
    (
        ((6, 27), (6, 4)),
        ((9, 18), (6, 4)),
        ((27, 0), (6, 2)),
        ((18, 15), (6, 2)),
        ((6, 3), (6, 0)),
        ((9, 12), (6, 0)),
    ),
    # Y6
    (
        ((4, 28), (6, 4)),
        ((16, 22), (6, 4)),
        ((28, 0), (6, 2)),
        ((22, 0), (6, 2)),
        ((4, 2), (6, 0)),
        ((16, 8), (6, 0)),
    ),
    # Y7
    (
        ((2, 29), (6, 4)),
        ((23, 26), (6, 4)),
        ((29, 0), (6, 2)),
        ((26, 15), (6, 2)),
        ((2, 1), (6, 0)),
        ((23, 4), (6, 0)),
    ),
)


def dinf_table_orbit_points() -> list[set[tuple[int, int]]]:
    return [{pt for pt, _ in orbit} for orbit in DINF_TORUS_TABLE]


def dinf_table_stabilizers() -> dict[tuple[int, int], Subgroup]:
    out = {}
    for orbit in DINF_TORUS_TABLE:
        for pt, (n, k) in orbit:
            out[pt] = Subgroup("dinf", "dihedral", (n, k))
    return out


def dinf_table_fix_points() -> set[tuple[int, int]]:
    """The twelve displayed points with k = 0 stabilizer column membership."""
    out = set()
    for orbit in DINF_TORUS_TABLE:
        for pt, (n, k) in orbit:
            if k == 0:
                out.add(pt)
    return out


#: power series of the trivial dihedral-group action on a point, through z^7
DINF_TRIVIAL_SERIES = ("1", "1", "2", "8/3", "25/6", "169/30", "361/45", "3364/315")


def rational_zeta_factors(group_name: str, alphabet: int) -> list[tuple[int, int, int]]:
    """Expected binomial factor lists (c, m, e) for the rational full shifts."""
    A = alphabet
    if group_name.startswith("z_x_cyclic:"):
        p = int(group_name.split(":")[1])
        return [(A, 1, -1), (A**p, p, -1)]
    if group_name == "z_x_d8":
        return [(A, 1, -1), (A**2, 2, -3), (A**4, 4, -3), (A**8, 8, -1)]
    if group_name == "z_x_ut33":
        # the degree-27 factor sits beyond truncation order 24
        return [(A, 1, -1), (A**3, 3, -4), (A**9, 9, -5)]
    raise ValueError(group_name)


def heisenberg_delta_reference(bound: int) -> list[Fraction]:
    """Independent multiplicative expansion of the Heisenberg exponent data.

    At a prime p the generating polynomial of b(p^k) in x = p^(-z) is
    (1 - x^3) / ((1 - x)(1 - x^2)(1 - p x^2)); values at composite n multiply.
    """

    def local(p: int, k: int) -> int:
        # expand the rational function to degree k by polynomial division
        num = [1, 0, 0, -1] + [0] * k
        den = [1]
        for poly in ([1, -1], [1, 0, -1], [1, 0, -p]):
            out = [0] * (len(den) + len(poly) - 1)
            for i, a in enumerate(den):
                for j, b in enumerate(poly):
                    out[i + j] += a * b
            den = out
        q = [0] * (k + 1)
        rem = num[:]
        for i in range(k + 1):
            q[i] = rem[i] // den[0]
            for j, b in enumerate(den):
                if i + j < len(rem):
                    rem[i + j] -= q[i] * b
        return q[k]

    def factorize(n: int) -> list[tuple[int, int]]:
        out = []
        d = 2
        while d * d <= n:
            if n % d == 0:
                e = 0
                while n % d == 0:
                    n //= d
                    e += 1
                out.append((d, e))
            d += 1
        if n > 1:
            out.append((n, 1))
        return out

    vals = []
    for n in range(1, bound + 1):
        v = 1
        for p, k in factorize(n):
            v *= local(p, k)
        vals.append(Fraction(v))
    return vals


def delta_reference(group_name: str, bound: int) -> list[Fraction]:
    """Hand-expanded closed forms used to cross-check the Dirichlet pipeline."""
    ns = range(1, bound + 1)
    if group_name == "z":
        return [Fraction(1 if n == 1 else 0) for n in ns]
    if group_name == "z_d:2":
        return [Fraction(1) for _ in ns]
    if group_name == "z_d:3":
        return [Fraction(sum(d for d in range(1, n + 1) if n % d == 0)) for n in ns]
    if group_name == "pg":
        return [Fraction(1) for _ in ns]
    if group_name == "pm":
        return [Fraction(3 if n % 2 == 0 else 1) for n in ns]
    if group_name == "cm":
        return [Fraction(2 if n % 4 == 0 else 1) for n in ns]
    if group_name == "heisenberg":
        return heisenberg_delta_reference(bound)
    raise ValueError(group_name)
