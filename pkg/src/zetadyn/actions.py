"""Periodic-point evaluators for the action families.

Supported kinds: full shifts (count A^[L]), projected shifts along the free
coordinate of Z x Z/pZ, toral actions given by integer matrices (counted via
Smith normal form of stacked kernel conditions), and the planar-group
projected shift with its per-family closed forms.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from . import intmat
from .groups import GroupModel, Subgroup, generator_words, group_model, subgroups_of_index

FULL_SHIFT = "full_shift"
PROJECTED_SHIFT = "projected_shift"
TORAL = "toral"
PM_PROJECTED = "pm_projected"


@dataclass(frozen=True)
class ActionModel:
    kind: str
    group: GroupModel
    alphabet: int = 1
    matrices: tuple[tuple[str, intmat.Matrix], ...] = ()
    declared_entropy: Fraction | None = None  # multiple of log(alphabet)

    def matrix(self, sym: str) -> intmat.Matrix:
        for s, m in self.matrices:
            if s == sym:
                return m
        raise KeyError(sym)

    @property
    def dimension(self) -> int:
        return len(self.matrices[0][1])

    def fix(self, L: Subgroup) -> int:
        return fix_count(self, L)


def full_shift(group: GroupModel, alphabet: int) -> ActionModel:
    if alphabet < 1:
        raise ValueError("alphabet size must be >= 1")
    return ActionModel(FULL_SHIFT, group, alphabet, declared_entropy=Fraction(1))


def projected_shift(group: GroupModel, alphabet: int) -> ActionModel:
    """Shift on configurations indexed by the free quotient of Z x Z/pZ."""
    if group.family != "z_x_cyclic":
        raise ValueError(
            f"projected shift quotient not implemented for {group.name}"
        )
    if alphabet < 1:
        raise ValueError("alphabet size must be >= 1")
    return ActionModel(
        PROJECTED_SHIFT, group, alphabet, declared_entropy=Fraction(1, group.param)
    )


def pm_projected(alphabet: int) -> ActionModel:
    if alphabet < 1:
        raise ValueError("alphabet size must be >= 1")
    return ActionModel(PM_PROJECTED, group_model("pm"), alphabet)


def toral_action(group: GroupModel, matrices: dict) -> ActionModel:
    """Toral automorphism action; validates the defining relations exactly."""
    mats = {s: intmat.mat(m) for s, m in matrices.items()}
    d = len(next(iter(mats.values())))
    for s, m in mats.items():
        if len(m) != d or any(len(r) != d for r in m):
            raise ValueError("matrices must be square and of equal size")
        if intmat.det(m) not in (1, -1):
            raise ValueError(f"generator {s!r} is not a torus automorphism")
    _validate_relations(group, mats)
    order = tuple(sorted(mats.items()))
    return ActionModel(TORAL, group, 1, matrices=order)


def _validate_relations(group: GroupModel, mats: dict[str, intmat.Matrix]):
    f = group.family
    eye = intmat.identity(len(next(iter(mats.values()))))
    if f == "z":
        if set(mats) != {"a"}:
            raise ValueError("z action needs a single generator 'a'")
        return
    if f == "z_d":
        expect = {f"a{i + 1}" for i in range(group.param)}
        if set(mats) != expect:
            raise ValueError(f"z_d:{group.param} action needs generators {sorted(expect)}")
        syms = sorted(mats)
        for i, s in enumerate(syms):
            for t in syms[i + 1:]:
                if intmat.mat_mul(mats[s], mats[t]) != intmat.mat_mul(mats[t], mats[s]):
                    raise ValueError(f"generators {s!r}, {t!r} do not commute")
        return
    if f == "dinf":
        if set(mats) != {"a", "b"}:
            raise ValueError("dinf action needs generators 'a' and 'b'")
        a, b = mats["a"], mats["b"]
        if intmat.mat_mul(b, b) != eye:
            raise ValueError("relation b^2 = 1 fails")
        if intmat.mat_mul(a, b) != intmat.mat_mul(b, intmat.mat_inverse_unimodular(a)):
            raise ValueError("relation ab = ba^-1 fails")
        return
    if f == "z_x_cyclic":
        if set(mats) != {"a", "b"}:
            raise ValueError("z_x_cyclic action needs generators 'a' and 'b'")
        a, b = mats["a"], mats["b"]
        if intmat.mat_mul(a, b) != intmat.mat_mul(b, a):
            raise ValueError("relation ab = ba fails")
        if intmat.mat_pow(b, group.param) != eye:
            raise ValueError(f"relation b^{group.param} = 1 fails")
        return
    raise ValueError(f"toral actions not implemented for {group.name}")


def _word_matrix(action: ActionModel, word) -> intmat.Matrix:
    m = intmat.identity(action.dimension)
    for sym, power in word:
        m = intmat.mat_mul(m, intmat.mat_pow(action.matrix(sym), power))
    return m


def full_shift_fix(action: ActionModel, L: Subgroup) -> int:
    assert action.kind == FULL_SHIFT
    return action.alphabet ** L.index


def projected_shift_fix(action: ActionModel, L: Subgroup) -> int:
    """A^[Z : phi(L)] for the coordinate projection phi of Z x Z/pZ."""
    assert action.kind == PROJECTED_SHIFT
    p = action.group.param
    if L.kind == "L":
        n, k = L.params
        image = n if k == 0 else n // p
    else:
        image = L.params[0] // p
    return action.alphabet ** image


def toral_fix(action: ActionModel, L: Subgroup) -> int | None:
    """Points fixed by every generator of L, or None when infinite.

    Stacks (rho(g) - I) over the generators g of L and multiplies the
    invariant factors of the stack.
    """
    assert action.kind == TORAL
    eye = intmat.identity(action.dimension)
    blocks = []
    for word in generator_words(action.group, L):
        blocks.append(intmat.mat_sub(_word_matrix(action, word), eye))
    return intmat.torus_kernel_size(intmat.stack(*blocks))


_PM_EXPONENT = {
    "pm1": lambda k, m: k * (m + 1),
    "pm2": lambda k, m: k * m,
    "pm3": lambda k, m: k * m,
    "pg1": lambda k, m: 2 * k * m,
    "pg2": lambda k, m: 2 * k * m,
    "pg3": lambda k, m: k * (2 * m - 1),
    "cm1": lambda k, m: k * (m + 1),
    "cm2": lambda k, m: k * m,
    "p1": lambda k, m: k * m,
}


def pm_projected_fix(action: ActionModel, L: Subgroup) -> int:
    assert action.kind == PM_PROJECTED
    k, m = L.params[0], L.params[1]
    return action.alphabet ** _PM_EXPONENT[L.kind](k, m)


def fix_count(action: ActionModel, L: Subgroup) -> int:
    if action.kind == FULL_SHIFT:
        return full_shift_fix(action, L)
    if action.kind == PROJECTED_SHIFT:
        return projected_shift_fix(action, L)
    if action.kind == PM_PROJECTED:
        return pm_projected_fix(action, L)
    if action.kind == TORAL:
        value = toral_fix(action, L)
        if value is None:
            raise ValueError(f"infinite fixed-point set at {L}")
        return value
    raise ValueError(f"unknown action kind {action.kind!r}")


def fix_table(action: ActionModel, bound: int, jobs: int = 1) -> dict[Subgroup, int]:
    """F for every subgroup of index <= bound; raises if any count is infinite.

    Evaluations are pure, so jobs > 1 fans them out over a thread pool.
    """
    if not action.group.enumerable:
        raise ValueError(f"enumeration unavailable for {action.group.name}")
    handles = [
        L
        for n in range(1, bound + 1)
        for L in subgroups_of_index(action.group, n)
    ]

    def evaluate(L: Subgroup) -> int | None:
        if action.kind == TORAL:
            return toral_fix(action, L)
        return fix_count(action, L)

    if jobs > 1:
        from concurrent.futures import ThreadPoolExecutor

        with ThreadPoolExecutor(max_workers=jobs) as pool:
            values = list(pool.map(evaluate, handles))
    else:
        values = [evaluate(L) for L in handles]
    bad = [L for L, v in zip(handles, values) if v is None]
    if bad:
        raise ValueError(f"action not F-finite on slice: {bad}")
    return dict(zip(handles, values))


# the worked dihedral-group torus example and the order-3 extension example
DINF_TORUS_MATRICES = {
    "a": ((-2, 3), (1, -2)),
    "b": ((7, -12), (4, -7)),
}

ZX3_TORUS_MATRICES = {
    "a": (
        (1, 2, 1, 0),
        (-2, 3, 0, 1),
        (1, 0, 0, 0),
        (0, 1, 0, 0),
    ),
    "b": (
        (0, -1, 0, 0),
        (1, -1, 0, 0),
        (0, 0, 0, -1),
        (0, 0, 1, -1),
    ),
}


def dinf_torus_action() -> ActionModel:
    return toral_action(group_model("dinf"), DINF_TORUS_MATRICES)


def zx3_torus_action() -> ActionModel:
    return toral_action(group_model("z_x_cyclic:3"), ZX3_TORUS_MATRICES)
