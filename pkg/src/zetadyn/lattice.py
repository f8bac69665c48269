"""Subgroup-lattice slices, interval Moebius function, and orbit counting.

A slice holds every subgroup of index <= N of an enumerable catalog group,
so every supergroup of a node is itself a node (upward closure). On top of
that we invert fixed-point counts into orbit counts and back, and count
orbits of bounded size.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Mapping

from .groups import (
    GroupModel,
    Subgroup,
    contains,
    normalizer_index,
    subgroups_of_index,
)
from .series import format_rational


class LatticeSlice:
    """All subgroups of index <= bound, with strict-supergroup edges."""

    def __init__(self, group: GroupModel, bound: int):
        if not group.enumerable:
            raise ValueError(f"enumeration unavailable for {group.name}")
        if bound < 1:
            raise ValueError("bound must be >= 1")
        self.group = group
        self.bound = bound
        self.nodes: list[Subgroup] = []
        for n in range(1, bound + 1):
            self.nodes.extend(subgroups_of_index(group, n))
        self._node_set = frozenset(self.nodes)
        self.up: dict[Subgroup, tuple[Subgroup, ...]] = {}
        by_index: dict[int, list[Subgroup]] = {}
        for h in self.nodes:
            by_index.setdefault(h.index, []).append(h)
        for h in self.nodes:
            ups = []
            for m in range(1, h.index):
                if h.index % m == 0:
                    for k in by_index.get(m, ()):
                        if contains(group, h, k):
                            ups.append(k)
            self.up[h] = tuple(ups)
        self._up_sets = {h: frozenset(v) for h, v in self.up.items()}
        self._mu: dict[tuple[Subgroup, Subgroup], int] = {}

    def __contains__(self, h: Subgroup) -> bool:
        return h in self._node_set

    def supergroups(self, L: Subgroup, strict: bool = True):
        return self.up[L] if strict else (L,) + self.up[L]

    def leq(self, L: Subgroup, K: Subgroup) -> bool:
        return L == K or K in self._up_sets[L]

    def interval(self, L: Subgroup, K: Subgroup) -> list[Subgroup]:
        """All M with L <= M <= K."""
        return [M for M in self.supergroups(L, strict=False) if self.leq(M, K)]

    def moebius(self, L: Subgroup, K: Subgroup) -> int:
        """Interval Moebius value mu(L, K); L <= K required."""
        if L == K:
            return 1
        key = (L, K)
        cached = self._mu.get(key)
        if cached is not None:
            return cached
        if K not in self.up[L]:
            raise ValueError("incomparable pair")
        total = 0
        for M in self.interval(L, K):
            if M != K:
                total += self.moebius(L, M)
        self._mu[key] = -total
        return -total

    def moebius_dual(self, L: Subgroup, K: Subgroup) -> int:
        """Same value computed by the recursion from above (cross-check)."""
        if L == K:
            return 1
        if K not in self.up[L]:
            raise ValueError("incomparable pair")
        total = 0
        for M in self.interval(L, K):
            if M != L:
                total += self.moebius_dual(M, K)
        return -total


@lru_cache(maxsize=None)
def _slice_cache(group_name: str, param, bound: int) -> LatticeSlice:
    return LatticeSlice(GroupModel(group_name, param), bound)


def build_slice(group: GroupModel, bound: int) -> LatticeSlice:
    return _slice_cache(group.family, group.param, bound)


def orbit_counts_from_fix(
    sl: LatticeSlice, fix: Mapping[Subgroup, int]
) -> dict[Subgroup, int]:
    """Number of orbits whose points have stabilizer exactly L, for each L.

    Moebius inversion of the fixed-point counts; the result must consist of
    non-negative integers when the data comes from a genuine action.
    """
    out: dict[Subgroup, int] = {}
    for L in sl.nodes:
        total = Fraction(0)
        for K in sl.supergroups(L, strict=False):
            total += sl.moebius(L, K) * fix[K]
        val = Fraction(normalizer_index(sl.group, L), L.index) * total
        if val.denominator != 1 or val < 0:
            raise ValueError(
                f"inconsistent fixed-point data at {L}: orbit count {val}"
            )
        out[L] = int(val)
    return out


def fix_from_orbits(
    sl: LatticeSlice, orbits: Mapping[Subgroup, int]
) -> dict[Subgroup, int]:
    """Fixed-point counts from exact-stabilizer orbit counts (inverse map)."""
    out: dict[Subgroup, int] = {}
    for L in sl.nodes:
        total = 0
        for K in sl.supergroups(L, strict=False):
            o = orbits.get(K, 0)
            if o:
                blk = Fraction(K.index, normalizer_index(sl.group, K))
                assert blk.denominator == 1
                total += int(blk) * o
        out[L] = total
    return out


def pi_alpha(sl: LatticeSlice, fix: Mapping[Subgroup, int]) -> int:
    """Number of orbits of cardinality at most the slice bound."""
    total = Fraction(0)
    for L in sl.nodes:
        inner = Fraction(0)
        for K in sl.supergroups(L, strict=False):
            inner += sl.moebius(L, K) * fix[K]
        total += inner / L.index
    if total.denominator != 1 or total < 0:
        raise ValueError(f"inconsistent data: pi = {total}")
    return int(total)


def orbit_counts_by_size(
    sl: LatticeSlice, fix: Mapping[Subgroup, int]
) -> dict[int, int]:
    """Orbit counts grouped by orbit cardinality (= stabilizer index)."""
    counts = orbit_counts_from_fix(sl, fix)
    sizes: dict[int, Fraction] = {}
    for L, o in counts.items():
        if o:
            sizes[L.index] = sizes.get(L.index, Fraction(0)) + Fraction(
                o, normalizer_index(sl.group, L)
            )
    out = {}
    for n, v in sorted(sizes.items()):
        assert v.denominator == 1
        out[n] = int(v)
    return out


@dataclass(frozen=True)
class MainTermReport:
    bound: int
    pi: int
    main_term: Fraction
    error_term: Fraction
    ratio: str
    f_full: int
    f_half: int
    s_total: int
    mu_over_index_sup: Fraction

    def to_dict(self) -> dict:
        return {
            "bound": self.bound,
            "pi": self.pi,
            "main_term": format_rational(self.main_term),
            "error_term": format_rational(self.error_term),
            "ratio": self.ratio,
            "f_full": self.f_full,
            "f_half": self.f_half,
            "s_total": self.s_total,
            "mu_over_index_sup": format_rational(self.mu_over_index_sup),
        }


def main_term_diagnostic(sl: LatticeSlice, fix: Mapping[Subgroup, int]) -> MainTermReport:
    """Split pi into main term sum F(L)/[L] plus Moebius error term.

    Also reports the growth quantities entering the ratio bound: the max of
    F over the slice and over the half slice, the node count, and the sup of
    |mu(L, K)|/[L] over strict supergroup pairs.
    """
    N = sl.bound
    main = Fraction(0)
    error = Fraction(0)
    msup = Fraction(0)
    for L in sl.nodes:
        main += Fraction(fix[L], L.index)
        for K in sl.supergroups(L):
            error += Fraction(sl.moebius(L, K) * fix[K], L.index)
            m = Fraction(abs(sl.moebius(L, K)), L.index)
            if m > msup:
                msup = m
    pi = main + error
    assert pi.denominator == 1
    ratio = "0" if main == 0 else f"{abs(float(error / main)):.12g}"
    f_full = max(fix[L] for L in sl.nodes)
    f_half = max((fix[L] for L in sl.nodes if L.index <= N // 2), default=0)
    return MainTermReport(
        bound=N,
        pi=int(pi),
        main_term=main,
        error_term=error,
        ratio=ratio,
        f_full=f_full,
        f_half=f_half,
        s_total=len(sl.nodes),
        mu_over_index_sup=msup,
    )
