"""Catalog of finitely generated groups with enumerable finite-index subgroups.

Each catalog group knows how to enumerate canonical subgroup handles (when
enumeration is implemented), decide containment, walk conjugacy classes, tag
isomorphism classes, and produce the Dirichlet coefficients b(n) that drive
the product formulae. For enumerable groups the coefficients are computed
both from a closed form and from the enumerated subgroup counts, and the two
must agree.
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from . import intmat
from .series import (
    DirichletSeries,
    counts_from_delta,
    delta_coefficients,
    divisors,
)

DEFAULT_MAX_TERMS = 200

CATALOG = (
    "z",
    "z_d:<d>",
    "dinf",
    "z_x_cyclic:<p>",
    "pm",
    "pg",
    "cm",
    "heisenberg",
    "z_x_d8",
    "z_x_ut33",
    "p2",
)

_HIRSCH = {
    "z": 1,
    "dinf": 1,
    "z_x_cyclic": 1,
    "pm": 2,
    "pg": 2,
    "cm": 2,
    "heisenberg": 3,
    "z_x_d8": 1,
    "z_x_ut33": 1,
    "p2": 2,
}

_PM_FAMILIES = ("pm1", "pm2", "pm3", "pg1", "pg2", "pg3", "cm1", "cm2", "p1")


def max_terms_cap() -> int:
    return int(os.environ.get("ZETADYN_MAX_TERMS", DEFAULT_MAX_TERMS))


def _is_prime(p: int) -> bool:
    if p < 2:
        return False
    d = 2
    while d * d <= p:
        if p % d == 0:
            return False
        d += 1
    return True


@dataclass(frozen=True)
class GroupModel:
    family: str
    param: int | None = None

    def __post_init__(self):
        if self.family == "z_d":
            if self.param is None or self.param < 2:
                raise ValueError("z_d needs a rank parameter >= 2")
        elif self.family == "z_x_cyclic":
            if self.param is None or not _is_prime(self.param):
                raise ValueError(
                    "z_x_cyclic is implemented for prime torsion only; "
                    f"got {self.param}"
                )
        elif self.family not in _HIRSCH:
            raise ValueError(f"unknown group family {self.family!r}")
        elif self.param is not None:
            raise ValueError(f"{self.family} takes no parameter")

    @property
    def name(self) -> str:
        if self.param is None:
            return self.family
        return f"{self.family}:{self.param}"

    @property
    def hirsch_length(self) -> int:
        if self.family == "z_d":
            return self.param
        return _HIRSCH[self.family]

    @property
    def enumerable(self) -> bool:
        if self.family in ("z", "dinf", "z_x_cyclic", "pm"):
            return True
        return self.family == "z_d" and self.param <= 3

    def __str__(self):
        return self.name


def group_model(name: str) -> GroupModel:
    """Parse a catalog name like "z", "z_d:3" or "z_x_cyclic:5"."""
    name = name.strip()
    if ":" in name:
        family, _, param = name.partition(":")
        return GroupModel(family, int(param))
    if name in _HIRSCH or name == "z":
        return GroupModel(name)
    raise ValueError(f"unknown group {name!r}")


@dataclass(frozen=True, order=True)
class Subgroup:
    """Canonical handle for one finite-index subgroup of a catalog group."""

    group: str
    kind: str
    params: tuple[int, ...]

    @property
    def index(self) -> int:
        f, _, p = self.group.partition(":")
        if f == "z":
            return self.params[0]
        if f == "z_d":
            d = int(p)
            m = self.hnf()
            out = 1
            for i in range(d):
                out *= m[i][i]
            return out
        if f == "dinf":
            if self.kind == "dihedral":
                return self.params[0]
            return 2 * self.params[0]
        if f == "z_x_cyclic":
            return self.params[0]
        if f == "pm":
            k, m = self.params[0], self.params[1]
            if self.kind in ("pm1", "pm2", "cm1", "cm2", "p1"):
                return 2 * k * m
            if self.kind == "pm3":
                return k * (2 * m - 1)
            if self.kind in ("pg1", "pg2"):
                return 4 * k * m
            if self.kind == "pg3":
                return 2 * k * (2 * m - 1)
        raise ValueError(f"cannot compute index for {self}")

    def hnf(self) -> intmat.Matrix:
        """Row-major HNF matrix for lattice handles (z_d only)."""
        if self.kind != "lattice":
            raise ValueError("not a lattice handle")
        n = len(self.params)
        d = int(round(n**0.5))
        assert d * d == n
        return tuple(tuple(self.params[i * d + j] for j in range(d)) for i in range(d))

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)

    def to_dict(self) -> dict:
        f = self.group.partition(":")[0]
        if f == "z":
            return {"group": self.group, "type": "cyclic", "n": self.params[0]}
        if f == "z_d":
            return {
                "group": self.group,
                "type": "lattice",
                "hnf": [list(r) for r in self.hnf()],
            }
        if f == "dinf":
            if self.kind == "dihedral":
                return {"group": "dinf", "type": "dihedral", "n": self.params[0], "k": self.params[1]}
            return {"group": "dinf", "type": "cyclic", "m": self.params[0]}
        if f == "z_x_cyclic":
            if self.kind == "L":
                return {"group": self.group, "type": "L", "n": self.params[0], "k": self.params[1]}
            return {"group": self.group, "type": "kernel", "n": self.params[0]}
        if f == "pm":
            d = {"group": "pm", "type": self.kind, "k": self.params[0], "m": self.params[1]}
            d["j" if self.kind == "p1" else "t"] = self.params[2]
            return d
        raise ValueError(f"unknown handle {self}")


def subgroup_from_dict(d: dict) -> Subgroup:
    f = d["group"].partition(":")[0]
    if f == "z":
        return Subgroup(d["group"], "cyclic", (d["n"],))
    if f == "z_d":
        flat = tuple(x for row in d["hnf"] for x in row)
        return Subgroup(d["group"], "lattice", flat)
    if f == "dinf":
        if d["type"] == "dihedral":
            return Subgroup("dinf", "dihedral", (d["n"], d["k"]))
        return Subgroup("dinf", "cyclic", (d["m"],))
    if f == "z_x_cyclic":
        if d["type"] == "L":
            return Subgroup(d["group"], "L", (d["n"], d["k"]))
        return Subgroup(d["group"], "kernel", (d["n"],))
    if f == "pm":
        key = "j" if d["type"] == "p1" else "t"
        return Subgroup("pm", d["type"], (d["k"], d["m"], d[key]))
    raise ValueError(f"unknown handle data {d}")


# ---------------------------------------------------------------------------
# enumeration


def _hnf_matrices(d: int, n: int):
    """All upper-triangular HNF matrices of determinant n (row-reduced)."""

    def rec(diag_left: int, k: int):
        if k == d:
            if diag_left == 1:
                yield []
            return
        for dk in divisors(diag_left):
            for rest in rec(diag_left // dk, k + 1):
                yield [dk] + rest

    for diag in rec(n, 0):
        # off-diagonal h[i][j], j > i, ranges over [0, diag[i])
        def fill(i: int, rows: list[list[int]]):
            if i == d:
                yield [row[:] for row in rows]
                return
            positions = list(range(i + 1, d))

            def fill_row(pi: int):
                if pi == len(positions):
                    yield from fill(i + 1, rows)
                    return
                j = positions[pi]
                for v in range(diag[i]):
                    rows[i][j] = v
                    yield from fill_row(pi + 1)
                rows[i][j] = 0

            yield from fill_row(0)

        base = [[diag[i] if i == j else 0 for j in range(d)] for i in range(d)]
        yield from fill(0, base)


@lru_cache(maxsize=None)
def _subgroups_of_index(group_name: str, n: int) -> tuple[Subgroup, ...]:
    g = group_model(group_name)
    f = g.family
    out: list[Subgroup] = []
    if f == "z":
        out.append(Subgroup("z", "cyclic", (n,)))
    elif f == "z_d":
        for m in _hnf_matrices(g.param, n):
            flat = tuple(x for row in m for x in row)
            out.append(Subgroup(g.name, "lattice", flat))
    elif f == "dinf":
        for k in range(n):
            out.append(Subgroup("dinf", "dihedral", (n, k)))
        if n % 2 == 0:
            out.append(Subgroup("dinf", "cyclic", (n // 2,)))
    elif f == "z_x_cyclic":
        p = g.param
        out.append(Subgroup(g.name, "L", (n, 0)))
        if n % p == 0:
            for k in range(1, p):
                out.append(Subgroup(g.name, "L", (n, k)))
            out.append(Subgroup(g.name, "kernel", (n,)))
    elif f == "pm":
        if n % 2 == 0:
            half = n // 2
            for k in divisors(half):
                m = half // k
                for t in range(m):
                    out.append(Subgroup("pm", "pm1", (k, m, t)))
                    out.append(Subgroup("pm", "pm2", (k, m, t)))
                    out.append(Subgroup("pm", "cm1", (k, m, t)))
                    out.append(Subgroup("pm", "cm2", (k, m, t)))
                for j in range(k):
                    out.append(Subgroup("pm", "p1", (k, m, j)))
        for q in divisors(n):
            if q % 2 == 1:  # q = 2m-1
                m = (q + 1) // 2
                k = n // q
                for t in range(q):
                    out.append(Subgroup("pm", "pm3", (k, m, t)))
        if n % 4 == 0:
            quarter = n // 4
            for k in divisors(quarter):
                m = quarter // k
                for t in range(m):
                    out.append(Subgroup("pm", "pg1", (k, m, t)))
                    out.append(Subgroup("pm", "pg2", (k, m, t)))
        if n % 2 == 0:
            for q in divisors(n // 2):
                if q % 2 == 1:
                    m = (q + 1) // 2
                    k = (n // 2) // q
                    for t in range(q):
                        out.append(Subgroup("pm", "pg3", (k, m, t)))
    else:
        raise ValueError(f"enumeration unavailable for {g.name}; use delta_closed_form")
    assert len(set(out)) == len(out)
    return tuple(sorted(out))


def subgroups_of_index(g: GroupModel, n: int) -> list[Subgroup]:
    """All index-n subgroups in canonical form; requires an enumerable group."""
    if n < 1:
        raise ValueError("index must be positive")
    if not g.enumerable:
        raise ValueError(f"enumeration unavailable for {g.name}; use delta_closed_form")
    return list(_subgroups_of_index(g.name, n))


def subgroup_count(g: GroupModel, n: int) -> int:
    if g.enumerable:
        return len(_subgroups_of_index(g.name, n))
    cap = max_terms_cap()
    if n > cap:
        raise ValueError(f"index {n} exceeds the configured Dirichlet bound {cap}")
    a = counts_from_delta(_delta_closed_form(g.name, n))
    val = a[n]
    assert val.denominator == 1
    return int(val)


def zeta_counts(g: GroupModel, bound: int) -> DirichletSeries:
    """The subgroup-count coefficients a_G(1..bound)."""
    if g.enumerable:
        return DirichletSeries([subgroup_count(g, n) for n in range(1, bound + 1)])
    return counts_from_delta(_delta_closed_form(g.name, bound))


# ---------------------------------------------------------------------------
# Dirichlet data


@lru_cache(maxsize=None)
def _delta_closed_form(group_name: str, bound: int) -> DirichletSeries:
    g = group_model(group_name)
    f = g.family
    N = bound
    zeta = DirichletSeries.zeta(N)
    if f == "z":
        return DirichletSeries.unit(N)
    if f == "z_d":
        out = DirichletSeries.unit(N)
        for k in range(g.param - 1):
            out = out * DirichletSeries.n_powers(N, k)
        return out
    if f == "dinf":
        return zeta / zeta.shift_plus_one() + DirichletSeries.single_term(
            N, 2, Fraction(1, 2)
        )
    if f == "z_x_cyclic":
        return DirichletSeries.unit(N) + DirichletSeries.single_term(N, g.param, 1)
    if f == "pm":
        return zeta + DirichletSeries.single_term(N, 2, 2) * zeta
    if f == "pg":
        return zeta
    if f == "cm":
        return zeta + DirichletSeries.single_term(N, 4, 1) * zeta
    if f == "heisenberg":
        num = zeta * DirichletSeries.zeta_arg_scaled(N, 2, 0)
        num = num * DirichletSeries.zeta_arg_scaled(N, 2, 1)
        return num / DirichletSeries.zeta_arg_scaled(N, 3, 0)
    if f == "z_x_d8":
        return (
            DirichletSeries.unit(N)
            + DirichletSeries.single_term(N, 2, 3)
            + DirichletSeries.single_term(N, 4, 3)
            + DirichletSeries.single_term(N, 8, 1)
        )
    if f == "z_x_ut33":
        return (
            DirichletSeries.unit(N)
            + DirichletSeries.single_term(N, 3, 4)
            + DirichletSeries.single_term(N, 9, 5)
            + DirichletSeries.single_term(N, 27, 1)
        )
    if f == "p2":
        main = (zeta * DirichletSeries.n_powers(N, 1)) / zeta.shift_plus_one()
        return main + DirichletSeries.single_term(N, 2, Fraction(1, 2)) * zeta
    raise ValueError(f"no delta data for {group_name}")


@lru_cache(maxsize=None)
def _delta_series_checked(group_name: str, bound: int) -> DirichletSeries:
    g = group_model(group_name)
    closed = _delta_closed_form(group_name, bound)
    if g.enumerable:
        counts = DirichletSeries(
            [len(_subgroups_of_index(group_name, n)) for n in range(1, bound + 1)]
        )
        from_enum = delta_coefficients(counts)
        if from_enum != closed:
            raise AssertionError(
                f"enumeration and closed form disagree for {group_name}"
            )
    return closed


def delta_series(g: GroupModel, bound: int) -> DirichletSeries:
    """Exponent coefficients b_G(1..bound) of the group's Dirichlet data."""
    if bound < 1:
        raise ValueError("bound must be >= 1")
    return _delta_series_checked(g.name, bound)


def iso_delta(g: GroupModel, tag: str, bound: int) -> DirichletSeries:
    """Delta coefficients of the isomorphism class named by an iso tag."""
    if tag == "z":
        return DirichletSeries.unit(bound)
    if tag == "p1":
        return delta_series(GroupModel("z_d", 2), bound)
    return delta_series(group_model(tag), bound)


# ---------------------------------------------------------------------------
# structure: containment, conjugacy, isomorphism tags


def _pm_translation(h: Subgroup) -> tuple[int, int, int]:
    """Translation lattice of a pm handle as HNF data (d1, e, d2).

    The lattice is spanned by the columns (d1, 0) and (e, d2) in the (a, b)
    coordinates of the translation subgroup.
    """
    k, m = h.params[0], h.params[1]
    if h.kind in ("pm1", "pm2"):
        return (k, 0, 2 * m)
    if h.kind == "pm3":
        return (k, 0, 2 * m - 1)
    if h.kind in ("pg1", "pg2"):
        return (2 * k, 0, 2 * m)
    if h.kind == "pg3":
        return (2 * k, 0, 2 * m - 1)
    if h.kind in ("cm1", "cm2"):
        return (2 * k, k, m)
    if h.kind == "p1":
        return (k, h.params[2], m)
    raise ValueError(h.kind)


def _pm_reflection(h: Subgroup) -> tuple[int, int] | None:
    """Reflection coset representative (u, v), or None for lattice handles."""
    k, m, t = h.params
    if h.kind == "p1":
        return None
    if h.kind in ("pm1", "cm1"):
        return (0, 2 * t)
    if h.kind in ("pm2", "cm2"):
        return (0, 2 * t + 1)
    if h.kind == "pm3":
        return (0, t)
    if h.kind == "pg1":
        return (k, 2 * t)
    if h.kind == "pg2":
        return (k, 2 * t + 1)
    if h.kind == "pg3":
        return (k, t)
    raise ValueError(h.kind)


def _lattice_member(T: tuple[int, int, int], x: int, y: int) -> bool:
    d1, e, d2 = T
    if y % d2 != 0:
        return False
    return (x - (y // d2) * e) % d1 == 0


def _pm_contains(L: Subgroup, K: Subgroup) -> bool:
    TL, TK = _pm_translation(L), _pm_translation(K)
    d1, e, d2 = TL
    if not (_lattice_member(TK, d1, 0) and _lattice_member(TK, e, d2)):
        return False
    rL, rK = _pm_reflection(L), _pm_reflection(K)
    if rL is None:
        return True
    if rK is None:
        return False
    return _lattice_member(TK, rL[0] - rK[0], rL[1] - rK[1])


def contains(g: GroupModel, L: Subgroup, K: Subgroup) -> bool:
    """Whether L <= K as subgroups (decided on canonical parameters)."""
    if L.group != K.group:
        raise ValueError("handles belong to different groups")
    f = g.family
    if f == "z":
        return L.params[0] % K.params[0] == 0
    if f == "z_d":
        hk = K.hnf()
        return all(
            intmat.lattice_contains(hk, col)
            for col in zip(*L.hnf())
        )
    if f == "dinf":
        if L.kind == "cyclic" and K.kind == "cyclic":
            return L.params[0] % K.params[0] == 0
        if L.kind == "cyclic" and K.kind == "dihedral":
            return L.params[0] % K.params[0] == 0
        if L.kind == "dihedral" and K.kind == "cyclic":
            return False
        n1, k1 = L.params
        n0, k0 = K.params
        return n1 % n0 == 0 and (k1 - k0) % n0 == 0
    if f == "z_x_cyclic":
        p = g.param
        return all(_zxc_member(p, K, u, v) for u, v in _zxc_generators(p, L))
    if f == "pm":
        return _pm_contains(L, K)
    raise ValueError(f"containment not implemented for {g.name}")


def _zxc_generators(p: int, h: Subgroup) -> list[tuple[int, int]]:
    if h.kind == "L":
        n, k = h.params
        if k == 0:
            return [(n, 0), (0, 1)]
        return [(n, 0), (k * n // p, 1)]
    n = h.params[0]
    return [(n // p, 0)]


def _zxc_member(p: int, h: Subgroup, u: int, v: int) -> bool:
    """Is (u, v mod p) in the subgroup named by handle h of Z x Z/pZ."""
    if h.kind == "L":
        n, k = h.params
        if k == 0:
            return u % n == 0
        return (u - v * (k * n // p)) % n == 0
    n = h.params[0]
    return v % p == 0 and u % (n // p) == 0


def conjugacy_class(g: GroupModel, L: Subgroup) -> list[Subgroup]:
    """The orbit of L under conjugation, in canonical form."""
    if not g.enumerable:
        raise ValueError(f"enumeration unavailable for {g.name}")
    f = g.family
    if f in ("z", "z_d", "z_x_cyclic"):
        return [L]
    if f == "dinf":
        if L.kind == "cyclic":
            return [L]
        n, k = L.params
        if n % 2 == 1:
            ks = range(n)
        else:
            ks = range(k % 2, n, 2)
        return [Subgroup("dinf", "dihedral", (n, j)) for j in ks]
    if f == "pm":
        k, m, t = L.params
        if L.kind == "p1":
            other = (k - t) % k
            js = sorted({t, other})
            return [Subgroup("pm", "p1", (k, m, j)) for j in js]
        if L.kind in ("pm3", "pg3"):
            return [Subgroup("pm", L.kind, (k, m, s)) for s in range(2 * m - 1)]
        return [Subgroup("pm", L.kind, (k, m, s)) for s in range(m)]
    raise ValueError(f"conjugacy not implemented for {g.name}")


def normalizer_index(g: GroupModel, L: Subgroup) -> int:
    """[G : N_G(L)], which equals the size of the conjugacy class of L."""
    if not g.enumerable:
        raise ValueError(f"enumeration unavailable for {g.name}")
    f = g.family
    if f in ("z", "z_d", "z_x_cyclic"):
        return 1
    if f == "dinf":
        if L.kind == "cyclic":
            return 1
        n = L.params[0]
        return n if n % 2 == 1 else n // 2
    if f == "pm":
        k, m, t = L.params
        if L.kind == "p1":
            return 1 if (2 * t) % k == 0 else 2
        if L.kind in ("pm3", "pg3"):
            return 2 * m - 1
        return m
    raise ValueError(f"normalizer not implemented for {g.name}")


def iso_class(g: GroupModel, L: Subgroup) -> str:
    """Isomorphism-type tag of the subgroup (constant on conjugacy classes)."""
    if not g.enumerable:
        raise ValueError(f"enumeration unavailable for {g.name}")
    f = g.family
    if f == "z":
        return "z"
    if f == "z_d":
        return g.name
    if f == "dinf":
        return "dinf" if L.kind == "dihedral" else "z"
    if f == "z_x_cyclic":
        # L(n,0) contains the torsion part; the other handles are free of rank 1
        if L.kind == "L" and L.params[1] == 0:
            return g.name
        return "z"
    if f == "pm":
        if L.kind == "p1":
            return "p1"
        return L.kind[:2]
    raise ValueError(f"iso classes not implemented for {g.name}")


def generator_words(g: GroupModel, L: Subgroup) -> list[tuple[tuple[str, int], ...]]:
    """Generators of L as words in the group generators: ((sym, power), ...)."""
    f = g.family
    if f == "z":
        return [(("a", L.params[0]),)]
    if f == "z_d":
        h = L.hnf()
        d = len(h)
        syms = [f"a{i + 1}" for i in range(d)]
        words = []
        for j in range(d):
            word = tuple((syms[i], h[i][j]) for i in range(d) if h[i][j])
            words.append(word if word else (("a1", 0),))
        return words
    if f == "dinf":
        if L.kind == "cyclic":
            return [(("a", L.params[0]),)]
        n, k = L.params
        return [(("a", n),), (("a", k), ("b", 1))]
    if f == "z_x_cyclic":
        p = g.param
        words = []
        for u, v in _zxc_generators(p, L):
            word = []
            if u:
                word.append(("a", u))
            if v:
                word.append(("b", v))
            words.append(tuple(word) if word else (("a", 0),))
        return words
    raise ValueError(f"generator words not available for {g.name}")
