"""Exact truncated power series and truncated Dirichlet series.

All coefficients are `fractions.Fraction`; nothing here ever touches a float.
A PowerSeries of order N stores the coefficients of z^0..z^N inclusive, and
every binary operation truncates to the smaller order of its operands.
A DirichletSeries of bound N stores the coefficients a(1)..a(N).
"""

from __future__ import annotations

import json
from fractions import Fraction
from typing import Iterable, Sequence, Union

Rat = Union[int, Fraction]

#: monomial c * z^k as a (scalar, exponent) pair; exponents may be negative
Monomial = tuple[Rat, int]


def format_rational(x: Fraction) -> str:
    x = Fraction(x)
    if x.denominator == 1:
        return str(x.numerator)
    return f"{x.numerator}/{x.denominator}"


def parse_rational(s: str) -> Fraction:
    return Fraction(s)


def _as_monomial(c) -> tuple[Fraction, int]:
    if isinstance(c, tuple):
        scalar, exp = c
        return Fraction(scalar), int(exp)
    return Fraction(c), 0


class PowerSeries:
    """Truncated formal power series over the rationals."""

    __slots__ = ("order", "coeffs")

    def __init__(self, coeffs: Sequence[Rat], order: int | None = None):
        if order is None:
            order = len(coeffs) - 1
        if order < 0:
            raise ValueError("order must be >= 0")
        cs = [Fraction(c) for c in coeffs[: order + 1]]
        cs.extend([Fraction(0)] * (order + 1 - len(cs)))
        object.__setattr__(self, "order", order)
        object.__setattr__(self, "coeffs", tuple(cs))

    def __setattr__(self, *a):
        raise AttributeError("PowerSeries is immutable")

    @classmethod
    def zero(cls, order: int) -> "PowerSeries":
        return cls([0], order)

    @classmethod
    def one(cls, order: int) -> "PowerSeries":
        return cls([1], order)

    @classmethod
    def from_terms(cls, terms: dict[int, Rat], order: int) -> "PowerSeries":
        cs = [Fraction(0)] * (order + 1)
        for k, v in terms.items():
            if 0 <= k <= order:
                cs[k] += Fraction(v)
        return cls(cs, order)

    def __repr__(self):
        return f"PowerSeries({[format_rational(c) for c in self.coeffs]})"

    def __eq__(self, other):
        return (
            isinstance(other, PowerSeries)
            and self.order == other.order
            and self.coeffs == other.coeffs
        )

    def __hash__(self):
        return hash((self.order, self.coeffs))

    def __getitem__(self, k: int) -> Fraction:
        return self.coeffs[k]

    def truncate(self, order: int) -> "PowerSeries":
        return PowerSeries(self.coeffs, min(order, self.order))

    def __add__(self, other: "PowerSeries") -> "PowerSeries":
        n = min(self.order, other.order)
        return PowerSeries([self.coeffs[k] + other.coeffs[k] for k in range(n + 1)], n)

    def __sub__(self, other: "PowerSeries") -> "PowerSeries":
        n = min(self.order, other.order)
        return PowerSeries([self.coeffs[k] - other.coeffs[k] for k in range(n + 1)], n)

    def __mul__(self, other: "PowerSeries") -> "PowerSeries":
        n = min(self.order, other.order)
        a, b = self.coeffs, other.coeffs
        out = [Fraction(0)] * (n + 1)
        for i in range(n + 1):
            ai = a[i]
            if ai:
                for j in range(n + 1 - i):
                    if b[j]:
                        out[i + j] += ai * b[j]
        return PowerSeries(out, n)

    def __truediv__(self, other: "PowerSeries") -> "PowerSeries":
        if other.coeffs[0] == 0:
            raise ZeroDivisionError("non-unit divisor")
        n = min(self.order, other.order)
        a, b = self.coeffs, other.coeffs
        q = [Fraction(0)] * (n + 1)
        inv0 = 1 / b[0]
        for k in range(n + 1):
            s = a[k]
            for j in range(1, k + 1):
                if b[j] and q[k - j]:
                    s -= b[j] * q[k - j]
            q[k] = s * inv0
        return PowerSeries(q, n)

    def scale(self, c: Rat) -> "PowerSeries":
        c = Fraction(c)
        return PowerSeries([x * c for x in self.coeffs], self.order)

    def scale_argument(self, a: Rat) -> "PowerSeries":
        """Substitute z -> a*z."""
        a = Fraction(a)
        p = Fraction(1)
        out = []
        for c in self.coeffs:
            out.append(c * p)
            p *= a
        return PowerSeries(out, self.order)

    def compose_power(self, k: int) -> "PowerSeries":
        """Substitute z -> z^k, truncated to the same order."""
        if k < 1:
            raise ValueError("power substitution needs k >= 1")
        out = [Fraction(0)] * (self.order + 1)
        for i, c in enumerate(self.coeffs):
            if i * k > self.order:
                break
            out[i * k] = c
        return PowerSeries(out, self.order)

    def exp(self) -> "PowerSeries":
        if self.coeffs[0] != 0:
            raise ValueError("exp requires zero constant term")
        n = self.order
        f = self.coeffs
        g = [Fraction(0)] * (n + 1)
        g[0] = Fraction(1)
        for m in range(1, n + 1):
            s = Fraction(0)
            for k in range(1, m + 1):
                if f[k]:
                    s += k * f[k] * g[m - k]
            g[m] = s / m
        return PowerSeries(g, n)

    def log(self) -> "PowerSeries":
        if self.coeffs[0] != 1:
            raise ValueError("log requires constant term 1")
        n = self.order
        f = self.coeffs
        h = [Fraction(0)] * (n + 1)
        for m in range(1, n + 1):
            s = m * f[m]
            for k in range(1, m):
                if h[k] and f[m - k]:
                    s -= k * h[k] * f[m - k]
            h[m] = s / m
        return PowerSeries(h, n)

    def pow_fraction(self, e: Rat) -> "PowerSeries":
        """f^e for rational e, via exp(e*log f); needs constant term 1."""
        return self.log().scale(Fraction(e)).exp()

    def pow_int(self, k: int) -> "PowerSeries":
        if k == 0:
            return PowerSeries.one(self.order)
        if k < 0:
            return PowerSeries.one(self.order).__truediv__(self).pow_int(-k)
        result = PowerSeries.one(self.order)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def z_derivative(self) -> "PowerSeries":
        """z * d/dz, same order."""
        return PowerSeries([k * c for k, c in enumerate(self.coeffs)], self.order)

    def is_one(self) -> bool:
        return self.coeffs[0] == 1 and all(c == 0 for c in self.coeffs[1:])

    def lowest_nonzero(self, start: int = 1) -> int | None:
        for k in range(start, self.order + 1):
            if self.coeffs[k]:
                return k
        return None

    def to_json(self) -> str:
        return json.dumps(
            {"order": self.order, "coeffs": [format_rational(c) for c in self.coeffs]},
            sort_keys=True,
        )

    @classmethod
    def from_json(cls, s: str) -> "PowerSeries":
        d = json.loads(s)
        return cls([parse_rational(c) for c in d["coeffs"]], d["order"])


class DirichletSeries:
    """Coefficients a(1)..a(N) of a truncated Dirichlet series."""

    __slots__ = ("bound", "coeffs")

    def __init__(self, coeffs: Sequence[Rat], bound: int | None = None):
        if bound is None:
            bound = len(coeffs)
        if bound < 1:
            raise ValueError("bound must be >= 1")
        if len(coeffs) != bound:
            raise ValueError("coefficient count must equal the bound")
        object.__setattr__(self, "bound", bound)
        object.__setattr__(self, "coeffs", tuple(Fraction(c) for c in coeffs))

    def __setattr__(self, *a):
        raise AttributeError("DirichletSeries is immutable")

    @classmethod
    def zeta(cls, bound: int) -> "DirichletSeries":
        return cls([1] * bound)

    @classmethod
    def unit(cls, bound: int) -> "DirichletSeries":
        """The convolution identity delta_{n,1}."""
        return cls([1] + [0] * (bound - 1))

    @classmethod
    def n_powers(cls, bound: int, k: int) -> "DirichletSeries":
        """Coefficients n^k, i.e. the series for zeta(z-k)."""
        return cls([Fraction(n) ** k for n in range(1, bound + 1)])

    @classmethod
    def zeta_arg_scaled(cls, bound: int, s: int, weight_power: int = 0) -> "DirichletSeries":
        """zeta(s*z - weight_power scaled): coefficient m^weight_power at n = m^s."""
        cs = [Fraction(0)] * bound
        m = 1
        while m**s <= bound:
            cs[m**s - 1] = Fraction(m) ** weight_power
            m += 1
        return cls(cs)

    @classmethod
    def single_term(cls, bound: int, n: int, value: Rat) -> "DirichletSeries":
        cs = [Fraction(0)] * bound
        if 1 <= n <= bound:
            cs[n - 1] = Fraction(value)
        return cls(cs)

    def __repr__(self):
        return f"DirichletSeries({[format_rational(c) for c in self.coeffs]})"

    def __eq__(self, other):
        return (
            isinstance(other, DirichletSeries)
            and self.bound == other.bound
            and self.coeffs == other.coeffs
        )

    def __hash__(self):
        return hash((self.bound, self.coeffs))

    def __getitem__(self, n: int) -> Fraction:
        """1-based coefficient access: a(n)."""
        if not 1 <= n <= self.bound:
            raise IndexError(n)
        return self.coeffs[n - 1]

    def __add__(self, other: "DirichletSeries") -> "DirichletSeries":
        self._check_bound(other)
        return DirichletSeries([a + b for a, b in zip(self.coeffs, other.coeffs)])

    def _check_bound(self, other: "DirichletSeries"):
        if self.bound != other.bound:
            raise ValueError("mismatched Dirichlet bounds")

    def __mul__(self, other: "DirichletSeries") -> "DirichletSeries":
        """Dirichlet convolution c(n) = sum_{d|n} a(d) b(n/d)."""
        self._check_bound(other)
        n = self.bound
        out = [Fraction(0)] * n
        for d in range(1, n + 1):
            ad = self[d]
            if ad:
                for m in range(d, n + 1, d):
                    out[m - 1] += ad * other[m // d]
        return DirichletSeries(out)

    def __truediv__(self, other: "DirichletSeries") -> "DirichletSeries":
        """Convolution inverse: q with q * other == self."""
        self._check_bound(other)
        if other[1] == 0:
            raise ZeroDivisionError("non-invertible Dirichlet series")
        n = self.bound
        q = [Fraction(0)] * n
        inv1 = 1 / other[1]
        for m in range(1, n + 1):
            s = self[m]
            for d in divisors(m):
                if d > 1:
                    s -= other[d] * q[m // d - 1]
            q[m - 1] = s * inv1
        return DirichletSeries(q)

    def shift_plus_one(self) -> "DirichletSeries":
        """Substitute z -> z+1: coefficient a(n) becomes a(n)/n."""
        return DirichletSeries([c / n for n, c in enumerate(self.coeffs, start=1)])

    def scale(self, c: Rat) -> "DirichletSeries":
        c = Fraction(c)
        return DirichletSeries([x * c for x in self.coeffs])

    def to_json(self) -> str:
        return json.dumps(
            {"bound": self.bound, "coeffs": [format_rational(c) for c in self.coeffs]},
            sort_keys=True,
        )

    @classmethod
    def from_json(cls, s: str) -> "DirichletSeries":
        d = json.loads(s)
        return cls([parse_rational(c) for c in d["coeffs"]], d["bound"])


def divisors(n: int) -> list[int]:
    small, big = [], []
    d = 1
    while d * d <= n:
        if n % d == 0:
            small.append(d)
            if d != n // d:
                big.append(n // d)
        d += 1
    return small + big[::-1]


def binomial_factor(c: Rat, m: int, e: Rat, order: int) -> PowerSeries:
    """(1 - c*z^m)^e expanded by the generalized binomial theorem."""
    if m < 1:
        raise ValueError("monomial degree must be >= 1")
    if order < 0:
        raise ValueError("order must be >= 0")
    c = Fraction(c)
    e = Fraction(e)
    out = [Fraction(0)] * (order + 1)
    out[0] = Fraction(1)
    term = Fraction(1)
    k = 0
    while (k + 1) * m <= order:
        term = term * (e - k) / (k + 1) * (-c)
        k += 1
        out[k * m] = term
    return PowerSeries(out, order)


def euler_product(factors: Iterable[tuple], order: int) -> PowerSeries:
    """Product of (1 - c*z^m)^(-b) over the factor list (c, m, b).

    c may be a rational scalar or a monomial (scalar, z-exponent) pair; the
    effective degree of a factor is m plus the monomial exponent and must be
    positive. Factors of degree beyond the truncation order are dropped.
    Computed as exp of the summed logarithms, exactly.
    """
    logsum = [Fraction(0)] * (order + 1)
    for c, m, b in factors:
        scalar, shift = _as_monomial(c)
        if m < 1:
            raise ValueError("non-positive degree factor")
        deg = m + shift
        if deg < 1:
            raise ValueError("non-positive degree factor")
        b = Fraction(b)
        if b == 0 or deg > order:
            continue
        p = Fraction(1)
        for j in range(1, order // deg + 1):
            p *= scalar
            logsum[j * deg] += b * p / j
    return PowerSeries(logsum, order).exp()


def q_series(w: Rat | Monomial, arg: Monomial, order: int) -> PowerSeries:
    """Reciprocal shifted-factorial product: prod_{n>=1} (1 - w*arg^n)^(-1).

    `arg` is a monomial (scalar, exponent) in z with positive exponent; the
    weight w may carry a negative z-exponent as long as every factor keeps a
    strictly positive degree.
    """
    ws, wk = _as_monomial(w)
    ascale, aexp = _as_monomial(arg)
    if aexp < 1:
        raise ValueError("argument monomial must have positive degree")
    if wk + aexp < 1:
        raise ValueError("non-positive degree factor")
    # factor n is (1 - ws*ascale^n * z^(wk + n*aexp))^(-1)
    factors = []
    n = 1
    while wk + n * aexp <= order:
        factors.append((ws * ascale**n, wk + n * aexp, 1))
        n += 1
    return euler_product(factors, order)


def p_series(order: int, arg: Rat | Monomial = (1, 1)) -> PowerSeries:
    """Additive partition generating function prod (1 - arg^n)^(-1)."""
    ascale, aexp = _as_monomial(arg)
    if aexp < 1:
        raise ValueError("argument monomial must have positive degree")
    return q_series((1, 0), (ascale, aexp), order)


def partition_series(kind: str, w, arg, order: int) -> PowerSeries:
    """Uniform surface for the P and Q partition-type products."""
    if kind == "P":
        return p_series(order, arg)
    if kind == "Q":
        return q_series(w, arg, order)
    raise ValueError(f"unknown kind {kind!r}")


def delta_coefficients(a: DirichletSeries) -> DirichletSeries:
    """Solve a(n) = sum_{d|n} d*b(d) for b, the z+1-shifted quotient by zeta.

    Requires a(1) = 1 (index-one subgroup is unique).
    """
    if a[1] != 1:
        raise ValueError("leading coefficient must be 1")
    n = a.bound
    b = [Fraction(0)] * n
    for m in range(1, n + 1):
        s = a[m]
        for d in divisors(m):
            if d < m:
                s -= d * b[d - 1]
        b[m - 1] = s / m
    return DirichletSeries(b)


def counts_from_delta(b: DirichletSeries) -> DirichletSeries:
    """Forward sum a(n) = sum_{d|n} d*b(d); inverse of delta_coefficients."""
    n = b.bound
    a = [Fraction(0)] * n
    for d in range(1, n + 1):
        bd = b[d]
        if bd:
            for m in range(d, n + 1, d):
                a[m - 1] += d * bd
    return DirichletSeries(a)


def is_integer_series(s: PowerSeries | DirichletSeries) -> tuple[bool, int | None]:
    """Whether all stored coefficients are integers, else the first bad index.

    For a PowerSeries the index is the z-exponent; for a DirichletSeries it
    is n (1-based).
    """
    if isinstance(s, PowerSeries):
        for k, c in enumerate(s.coeffs):
            if c.denominator != 1:
                return False, k
        return True, None
    for n, c in enumerate(s.coeffs, start=1):
        if c.denominator != 1:
            return False, n
    return True, None
