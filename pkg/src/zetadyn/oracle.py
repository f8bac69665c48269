"""Independent brute-force ground truth for tests.

Torus orbits are found by enumerating rational points of a fixed denominator
and walking the generated group action pointwise; stabilizers come from
scanning generator words, not from Smith forms. Necklace counts use the
classical arithmetic Moebius function, not the subgroup lattice. Sublattice
enumeration goes through subgroups of the finite quotient, not through
divisor loops.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from . import intmat
from .actions import ActionModel, TORAL
from .groups import Subgroup

MAX_DENOMINATOR = 60
MAX_LATTICE_INDEX = 30

Point = tuple[int, ...]


def classical_moebius(n: int) -> int:
    out = 1
    d = 2
    while d * d <= n:
        if n % d == 0:
            n //= d
            if n % d == 0:
                return 0
            out = -out
        d += 1
    if n > 1:
        out = -out
    return out


def necklace_orbit_count(alphabet: int, n: int) -> int:
    """Orbits of size exactly n of the one-generator full shift."""
    if n < 1:
        raise ValueError("period must be >= 1")
    total = 0
    d = 1
    while d * d <= n:
        if n % d == 0:
            total += classical_moebius(d) * alphabet ** (n // d)
            if d != n // d:
                total += classical_moebius(n // d) * alphabet ** d
        d += 1
    assert total % n == 0
    return total // n


# ---------------------------------------------------------------------------
# torus point enumeration


@dataclass(frozen=True)
class TorusOrbit:
    denominator: int
    points: tuple[Point, ...]
    stabilizers: tuple[tuple[Point, Subgroup], ...]

    @property
    def size(self) -> int:
        return len(self.points)

    def stabilizer_of(self, p: Point) -> Subgroup:
        for q, s in self.stabilizers:
            if q == p:
                return s
        raise KeyError(p)

    @property
    def blocks(self) -> dict[Subgroup, tuple[Point, ...]]:
        out: dict[Subgroup, list[Point]] = {}
        for p, s in self.stabilizers:
            out.setdefault(s, []).append(p)
        return {s: tuple(sorted(ps)) for s, ps in out.items()}

    def reduced_key(self) -> tuple:
        """Denominator-independent canonical identity of the orbit."""
        pts = frozenset(
            tuple(Fraction(x, self.denominator) for x in p) for p in self.points
        )
        return tuple(sorted(pts))


def _mat_mod(m: intmat.Matrix, x: Point, D: int) -> Point:
    return tuple(sum(row[j] * x[j] for j in range(len(x))) % D for row in m)


def _matrix_order_mod(m: intmat.Matrix, D: int, cap: int = 10000) -> int:
    eye = tuple(tuple(v % D for v in row) for row in intmat.identity(len(m)))
    power = eye
    reduced = tuple(tuple(v % D for v in row) for row in m)
    for k in range(1, cap + 1):
        power = tuple(
            tuple(sum(power[i][t] * reduced[t][j] for t in range(len(m))) % D
                  for j in range(len(m)))
            for i in range(len(m))
        )
        if power == eye:
            return k
    raise RuntimeError("matrix order exceeds cap")


def _stabilizer_handle(action: ActionModel, x: Point, D: int) -> Subgroup:
    f = action.group.family
    A = action.matrix("a")
    ord_a = _matrix_order_mod(A, D)
    # rotation period: least n >= 1 with A^n x = x
    y = x
    n0 = None
    for n in range(1, ord_a + 1):
        y = _mat_mod(A, y, D)
        if y == x:
            n0 = n
            break
    assert n0 is not None
    if f == "z":
        return Subgroup("z", "cyclic", (n0,))
    B = action.matrix("b")
    if f == "dinf":
        y = _mat_mod(B, x, D)
        for k in range(n0):
            if y == x:
                return Subgroup("dinf", "dihedral", (n0, k))
            y = _mat_mod(A, y, D)
        return Subgroup("dinf", "cyclic", (n0,))
    if f == "z_x_cyclic":
        p = action.group.param
        y = _mat_mod(B, x, D)
        for t in range(n0):
            if y == x:
                if t == 0:
                    return Subgroup(action.group.name, "L", (n0, 0))
                k = p * t
                assert k % n0 == 0
                return Subgroup(action.group.name, "L", (n0, k // n0))
            y = _mat_mod(A, y, D)
        return Subgroup(action.group.name, "kernel", (p * n0,))
    raise ValueError(f"stabilizer classification not implemented for {f}")


def brute_toral_orbits(action: ActionModel, D: int) -> list[TorusOrbit]:
    """All orbits on the (1/D)-lattice of the torus, with point stabilizers."""
    if action.kind != TORAL:
        raise ValueError("toral action required")
    if D > MAX_DENOMINATOR:
        raise ValueError(f"denominator {D} exceeds oracle cap {MAX_DENOMINATOR}")
    d = action.dimension
    gens = []
    for _, m in action.matrices:
        gens.append(m)
        gens.append(intmat.mat_inverse_unimodular(m))
    seen: set[Point] = set()
    orbits: list[TorusOrbit] = []
    for start in itertools.product(range(D), repeat=d):
        if start in seen:
            continue
        orbit = {start}
        frontier = [start]
        while frontier:
            nxt = []
            for pt in frontier:
                for g in gens:
                    q = _mat_mod(g, pt, D)
                    if q not in orbit:
                        orbit.add(q)
                        nxt.append(q)
            frontier = nxt
        seen.update(orbit)
        pts = tuple(sorted(orbit))
        stab = tuple((p, _stabilizer_handle(action, p, D)) for p in pts)
        orbits.append(TorusOrbit(D, pts, stab))
    return orbits


def brute_fix_points(action: ActionModel, D: int, L: Subgroup) -> list[Point]:
    """Lattice points fixed by every generator word of L (matrix scan)."""
    from .groups import generator_words

    mats = []
    for word in generator_words(action.group, L):
        m = intmat.identity(action.dimension)
        for sym, power in word:
            m = intmat.mat_mul(m, intmat.mat_pow(action.matrix(sym), power))
        mats.append(m)
    out = []
    for pt in itertools.product(range(D), repeat=action.dimension):
        if all(_mat_mod(m, pt, D) == pt for m in mats):
            out.append(pt)
    return out


def brute_orbit_count_up_to(
    action: ActionModel, max_size: int, denominators: list[int]
) -> int:
    """Orbits of size <= max_size, unioned over lattice denominators.

    The caller must supply denominators covering every periodic point of the
    relevant sizes; orbits found at several denominators are deduplicated by
    their reduced coordinates.
    """
    seen: set[tuple] = set()
    for D in denominators:
        for orb in brute_toral_orbits(action, D):
            if orb.size <= max_size:
                seen.add(orb.reduced_key())
    return len(seen)


def fix_denominators(action: ActionModel, bound: int) -> list[int]:
    """Denominators sufficient to see every point of orbit size <= bound.

    Uses the largest invariant factor of the stacked kernel conditions of
    each slice subgroup (the exponent of its fixed-point group).
    """
    from .actions import _word_matrix
    from .groups import generator_words, subgroups_of_index

    eye = intmat.identity(action.dimension)
    out = set()
    for n in range(1, bound + 1):
        for L in subgroups_of_index(action.group, n):
            blocks = [
                intmat.mat_sub(_word_matrix(action, w), eye)
                for w in generator_words(action.group, L)
            ]
            factors = intmat.smith_invariant_factors(intmat.stack(*blocks))
            if any(f == 0 for f in factors):
                raise ValueError(f"infinite fixed-point set at {L}")
            out.add(max(factors))
    return sorted(out)


# ---------------------------------------------------------------------------
# sublattice enumeration through the finite quotient


def _cyclic_closure(v: Point, n: int) -> frozenset[Point]:
    d = len(v)
    out = {(0,) * d}
    cur = v
    while cur not in out:
        out.add(cur)
        cur = tuple((a + b) % n for a, b in zip(cur, v))
    return frozenset(out)


def _sum_sets(a: frozenset[Point], b: frozenset[Point], n: int, cap: int) -> frozenset[Point] | None:
    if len(a) * len(b) // max(1, len(a & b)) > cap:
        return None
    out = set()
    for x in a:
        for y in b:
            out.add(tuple((p + q) % n for p, q in zip(x, y)))
            if len(out) > cap:
                return None
    return frozenset(out)


@lru_cache(maxsize=None)
def _order_n_subgroups(n: int, d: int) -> tuple[frozenset[Point], ...]:
    """All subgroups of (Z/n)^d of order exactly n."""
    cyclics = set()
    for v in itertools.product(range(n), repeat=d):
        c = _cyclic_closure(v, n)
        if len(c) <= n:
            cyclics.add(c)
    level: set[frozenset[Point]] = {c for c in cyclics}
    result = {c for c in level if len(c) == n}
    for _ in range(d - 1):
        new_level: set[frozenset[Point]] = set()
        for h in level:
            for c in cyclics:
                if c <= h:
                    continue
                s = _sum_sets(h, c, n, n)
                if s is not None and s not in new_level:
                    new_level.add(s)
        result.update(s for s in new_level if len(s) == n)
        level = new_level
    return tuple(result)


def hnf_sublattices(d: int, n: int) -> list[intmat.Matrix]:
    """Exhaustive enumeration of the index-n sublattices of Z^d, as HNF bases.

    Works through annihilator subgroups of the quotient (Z/n)^d; the scale
    cap keeps runtime at test size.
    """
    if d not in (1, 2, 3):
        raise ValueError("oracle scale exceeded")
    if n > MAX_LATTICE_INDEX:
        raise ValueError("oracle scale exceeded")
    if d == 1:
        return [((n,),)]
    out = []
    for w_group in _order_n_subgroups(n, d):
        rows = sorted(w_group)
        sols = [
            pt
            for pt in itertools.product(range(n), repeat=d)
            if all(sum(a * b for a, b in zip(w, pt)) % n == 0 for w in rows)
        ]
        gens = [tuple(s) for s in sols]
        for i in range(d):
            gens.append(tuple(n if j == i else 0 for j in range(d)))
        h = intmat.hnf_columns(gens, d)
        assert h is not None
        out.append(h)
    uniq = sorted(set(out))
    return uniq


# ---------------------------------------------------------------------------
# planar-group sampler


def pm_quotient_sample(handle: Subgroup, alphabet: int, depth: int = 64) -> int:
    """Count configurations of the planar projected shift fixed by the handle.

    Enumerates the translation-lattice cosets explicitly and counts orbits of
    the induced reflection involution; the count is alphabet^orbits. Serves
    as an independent check of the closed-form fix values.
    """
    from .groups import _pm_reflection, _pm_translation

    if handle.group != "pm":
        raise ValueError("pm handle required")
    if handle.index > depth:
        raise ValueError("increase depth")
    d1, e, d2 = _pm_translation(handle)

    def canon(x: int, y: int) -> tuple[int, int]:
        q = y // d2
        x -= q * e
        y -= q * d2
        return (x % d1, y % d2)

    refl = _pm_reflection(handle)
    cells = [(x, y) for x in range(d1) for y in range(d2)]
    if refl is None:
        orbits = len(cells)
    else:
        u, v = refl
        seen = set()
        orbits = 0
        for cell in cells:
            if cell in seen:
                continue
            image = canon(cell[0] + u, v - cell[1])
            seen.add(cell)
            seen.add(image)
            orbits += 1
    return alphabet**orbits
