"""Exact arithmetic in Z[q,q^-1,pi]/(pi^2-1) and Q(q)[pi]/(pi^2-1).

An element of the pi-ring is stored as its pair of evaluations at pi=+1 and
pi=-1; since pi^2 = 1 splits the ring into two copies of Q(q), this makes
equality and invertibility decidable by ordinary rational-function
arithmetic.  Each component is a reduced fraction of polynomials in q with
Fraction coefficients, the denominator scaled so its lowest-exponent
coefficient is 1.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping


# ---------------------------------------------------------------------------
# Polynomials in q (exponents >= 0, Fraction coefficients), sparse dicts.


def _poly_trim(c: dict) -> dict:
    return {e: v for e, v in c.items() if v != 0}


def _poly_add(a: Mapping[int, Fraction], b: Mapping[int, Fraction]) -> dict:
    out = dict(a)
    for e, v in b.items():
        w = out.get(e, 0) + v
        if w == 0:
            out.pop(e, None)
        else:
            out[e] = w
    return out


def _poly_neg(a: Mapping[int, Fraction]) -> dict:
    return {e: -v for e, v in a.items()}


def _poly_mul(a: Mapping[int, Fraction], b: Mapping[int, Fraction]) -> dict:
    out: dict = {}
    for e1, v1 in a.items():
        for e2, v2 in b.items():
            e = e1 + e2
            w = out.get(e, 0) + v1 * v2
            if w == 0:
                out.pop(e, None)
            else:
                out[e] = w
    return out


def _poly_scale(a: Mapping[int, Fraction], c: Fraction) -> dict:
    if c == 0:
        return {}
    return {e: v * c for e, v in a.items()}


def _poly_divmod(a: Mapping[int, Fraction], b: Mapping[int, Fraction]) -> tuple[dict, dict]:
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    rem = dict(a)
    quo: dict = {}
    db = max(b)
    lb = b[db]
    while rem and max(rem) >= db:
        dr = max(rem)
        c = rem[dr] / lb
        quo[dr - db] = c
        for e, v in b.items():
            w = rem.get(e + dr - db, 0) - c * v
            if w == 0:
                rem.pop(e + dr - db, None)
            else:
                rem[e + dr - db] = w
    return quo, rem


def _poly_gcd(a: Mapping[int, Fraction], b: Mapping[int, Fraction]) -> dict:
    x, y = dict(a), dict(b)
    while y:
        _, r = _poly_divmod(x, y)
        x, y = y, r
    if not x:
        return {}
    lead = x[max(x)]
    return {e: v / lead for e, v in x.items()}


def _poly_render(c: Mapping[int, Fraction]) -> str:
    """Lowest exponent first, coefficients explicit: ``1-1q^2``."""
    if not c:
        return "0"
    parts = []
    for e in sorted(c):
        v = c[e]
        sign = "-" if v < 0 else "+"
        mag = -v if v < 0 else v
        coeff = str(mag.numerator) if mag.denominator == 1 else f"{mag.numerator}/{mag.denominator}"
        term = coeff if e == 0 else f"{coeff}q^{e}"
        parts.append((sign, term))
    first_sign, first_term = parts[0]
    text = ("-" if first_sign == "-" else "") + first_term
    for sign, term in parts[1:]:
        text += sign + term
    return text


# ---------------------------------------------------------------------------
# Rational functions in q.


@dataclass(frozen=True)
class RationalFunction:
    """Reduced fraction num/den of polynomials in q.

    Invariants: den != 0, gcd(num, den) = 1, and den's lowest-exponent
    coefficient equals 1, so equal values have equal representations.
    """

    num: tuple[tuple[int, Fraction], ...]
    den: tuple[tuple[int, Fraction], ...]

    @staticmethod
    def make(num: Mapping[int, Fraction], den: Mapping[int, Fraction]) -> "RationalFunction":
        num = _poly_trim(dict(num))
        den = _poly_trim(dict(den))
        if not den:
            raise ZeroDivisionError("zero denominator")
        if not num:
            return RationalFunction((), ((0, Fraction(1)),))
        g = _poly_gcd(num, den)
        if g and g != {0: Fraction(1)}:
            num, _ = _poly_divmod(num, g)
            den, _ = _poly_divmod(den, g)
        low = den[min(den)]
        num = _poly_scale(num, 1 / low)
        den = _poly_scale(den, 1 / low)
        return RationalFunction(
            tuple(sorted((e, v) for e, v in num.items())),
            tuple(sorted((e, v) for e, v in den.items())),
        )

    @staticmethod
    def from_laurent(terms: Mapping[int, Fraction]) -> "RationalFunction":
        terms = _poly_trim(dict(terms))
        if not terms:
            return RF_ZERO
        m = min(terms)
        shift = -m if m < 0 else 0
        num = {e + shift: v for e, v in terms.items()}
        den = {shift: Fraction(1)}
        return RationalFunction.make(num, den)

    @staticmethod
    def constant(c) -> "RationalFunction":
        return RationalFunction.from_laurent({0: Fraction(c)})

    def _n(self) -> dict:
        return dict(self.num)

    def _d(self) -> dict:
        return dict(self.den)

    def is_zero(self) -> bool:
        return not self.num

    def __add__(self, other: "RationalFunction") -> "RationalFunction":
        return RationalFunction.make(
            _poly_add(_poly_mul(self._n(), other._d()), _poly_mul(other._n(), self._d())),
            _poly_mul(self._d(), other._d()),
        )

    def __sub__(self, other: "RationalFunction") -> "RationalFunction":
        return self + (-other)

    def __neg__(self) -> "RationalFunction":
        return RationalFunction(tuple((e, -v) for e, v in self.num), self.den)

    def __mul__(self, other: "RationalFunction") -> "RationalFunction":
        return RationalFunction.make(
            _poly_mul(self._n(), other._n()), _poly_mul(self._d(), other._d())
        )

    def __truediv__(self, other: "RationalFunction") -> "RationalFunction":
        if other.is_zero():
            raise ZeroDivisionError("division by zero rational function")
        return RationalFunction.make(
            _poly_mul(self._n(), other._d()), _poly_mul(self._d(), other._n())
        )

    def subst_q_power(self, k: int) -> "RationalFunction":
        """q |-> q^k for k >= 1."""
        if k < 1:
            raise ValueError("power must be >= 1")
        return RationalFunction.make(
            {e * k: v for e, v in self.num}, {e * k: v for e, v in self.den}
        )

    def bar(self) -> "RationalFunction":
        """q |-> q^-1."""
        dn = max((e for e, _ in self.num), default=0)
        dd = max(e for e, _ in self.den)
        m = max(dn, dd)
        return RationalFunction.make(
            {m - e: v for e, v in self.num}, {m - e: v for e, v in self.den}
        )

    def series(self, lo: int, hi: int) -> "LaurentSeries":
        """Laurent expansion around q = 0, exact on [lo, hi]."""
        if hi < lo:
            raise ValueError("empty window")
        if self.is_zero():
            return LaurentSeries(lo, hi, (Fraction(0),) * (hi - lo + 1))
        num, den = self._n(), self._d()
        vd = min(den)
        den = {e - vd: v for e, v in den.items()}
        vn = min(num)
        num = {e - vn: v for e, v in num.items()}
        v0 = vn - vd
        order = hi - v0
        coeffs: list[Fraction] = []
        if order >= 0:
            d0 = den[0]
            for k in range(order + 1):
                acc = Fraction(num.get(k, 0))
                for j in range(1, k + 1):
                    dj = den.get(j)
                    if dj:
                        acc -= dj * coeffs[k - j]
                coeffs.append(acc / d0)
        window = []
        for e in range(lo, hi + 1):
            k = e - v0
            window.append(coeffs[k] if 0 <= k < len(coeffs) else Fraction(0))
        return LaurentSeries(lo, hi, tuple(window))

    def render(self) -> str:
        return f"{_poly_render(dict(self.num))}/{_poly_render(dict(self.den))}"


RF_ZERO = RationalFunction((), ((0, Fraction(1)),))
RF_ONE = RationalFunction(((0, Fraction(1)),), ((0, Fraction(1)),))


# ---------------------------------------------------------------------------
# Laurent series with an explicit validity window.


@dataclass(frozen=True)
class LaurentSeries:
    """Coefficients on [lo, hi]; outside the window nothing is asserted."""

    lo: int
    hi: int
    coeffs: tuple[Fraction, ...]

    def __post_init__(self):
        if len(self.coeffs) != self.hi - self.lo + 1:
            raise ValueError("coefficient count does not match window")

    def coeff(self, e: int) -> Fraction:
        if not (self.lo <= e <= self.hi):
            raise KeyError(f"exponent {e} outside window [{self.lo},{self.hi}]")
        return self.coeffs[e - self.lo]

    def restrict(self, lo: int, hi: int) -> "LaurentSeries":
        if lo < self.lo or hi > self.hi:
            raise ValueError("cannot widen a series window")
        return LaurentSeries(lo, hi, self.coeffs[lo - self.lo : hi - self.lo + 1])

    def __add__(self, other: "LaurentSeries") -> "LaurentSeries":
        lo, hi = max(self.lo, other.lo), min(self.hi, other.hi)
        return LaurentSeries(
            lo, hi, tuple(self.coeff(e) + other.coeff(e) for e in range(lo, hi + 1))
        )

    def __sub__(self, other: "LaurentSeries") -> "LaurentSeries":
        lo, hi = max(self.lo, other.lo), min(self.hi, other.hi)
        return LaurentSeries(
            lo, hi, tuple(self.coeff(e) - other.coeff(e) for e in range(lo, hi + 1))
        )

    def __mul__(self, other: "LaurentSeries") -> "LaurentSeries":
        # Valid window of a product of windows with unknown tails:
        # a coefficient of q^e is exact iff every split e = x + y with
        # x, y in range hits known coefficients; for series known on
        # [lo1,hi1], [lo2,hi2] and unknown below lo only above hi, the
        # product is exact on [lo1+lo2, min(hi1+lo2, hi2+lo1)].
        lo = self.lo + other.lo
        hi = min(self.hi + other.lo, other.hi + self.lo)
        if hi < lo:
            raise ValueError("empty product window")
        out = []
        for e in range(lo, hi + 1):
            acc = Fraction(0)
            for x in range(max(self.lo, e - other.hi), min(self.hi, e - other.lo) + 1):
                acc += self.coeffs[x - self.lo] * other.coeffs[e - x - other.lo]
            out.append(acc)
        return LaurentSeries(lo, hi, tuple(out))

    def is_zero(self) -> bool:
        return all(c == 0 for c in self.coeffs)

    def render(self) -> str:
        return _poly_render({e: self.coeff(e) for e in range(self.lo, self.hi + 1) if self.coeff(e)})


@dataclass(frozen=True)
class SeriesPair:
    """Laurent expansions of the pi=+1 and pi=-1 components."""

    plus: LaurentSeries
    minus: LaurentSeries

    def __add__(self, other: "SeriesPair") -> "SeriesPair":
        return SeriesPair(self.plus + other.plus, self.minus + other.minus)

    def __sub__(self, other: "SeriesPair") -> "SeriesPair":
        return SeriesPair(self.plus - other.plus, self.minus - other.minus)

    def __mul__(self, other: "SeriesPair") -> "SeriesPair":
        return SeriesPair(self.plus * other.plus, self.minus * other.minus)

    def restrict(self, lo: int, hi: int) -> "SeriesPair":
        return SeriesPair(self.plus.restrict(lo, hi), self.minus.restrict(lo, hi))

    def is_zero(self) -> bool:
        return self.plus.is_zero() and self.minus.is_zero()

    def render(self) -> str:
        return f"plus={self.plus.render()}; minus={self.minus.render()}"


def series_from_terms(terms: Mapping[tuple[int, int], Fraction], lo: int, hi: int) -> SeriesPair:
    """Build a SeriesPair from {(q-exponent, parity): coefficient}."""
    plus = {}
    minus = {}
    for (e, p), v in terms.items():
        plus[e] = plus.get(e, 0) + v
        minus[e] = minus.get(e, 0) + (v if p % 2 == 0 else -v)
    return SeriesPair(
        LaurentSeries(lo, hi, tuple(Fraction(plus.get(e, 0)) for e in range(lo, hi + 1))),
        LaurentSeries(lo, hi, tuple(Fraction(minus.get(e, 0)) for e in range(lo, hi + 1))),
    )


# ---------------------------------------------------------------------------
# The pi-ring.


@dataclass(frozen=True)
class PiScalar:
    """Element of Q(q)[pi]/(pi^2-1) as (value at pi=+1, value at pi=-1)."""

    plus: RationalFunction
    minus: RationalFunction

    @staticmethod
    def from_laurent(terms: Mapping[tuple[int, int], Fraction | int]) -> "PiScalar":
        """Build from {(q-exponent, pi-exponent): coefficient}."""
        plus: dict = {}
        minus: dict = {}
        for (e, p), v in terms.items():
            v = Fraction(v)
            plus[e] = plus.get(e, 0) + v
            minus[e] = minus.get(e, 0) + (v if p % 2 == 0 else -v)
        return PiScalar(RationalFunction.from_laurent(plus), RationalFunction.from_laurent(minus))

    @staticmethod
    def constant(c) -> "PiScalar":
        rf = RationalFunction.constant(c)
        return PiScalar(rf, rf)

    def is_zero(self) -> bool:
        return self.plus.is_zero() and self.minus.is_zero()

    def is_invertible(self) -> bool:
        return not self.plus.is_zero() and not self.minus.is_zero()

    def __add__(self, other: "PiScalar") -> "PiScalar":
        return PiScalar(self.plus + other.plus, self.minus + other.minus)

    def __sub__(self, other: "PiScalar") -> "PiScalar":
        return PiScalar(self.plus - other.plus, self.minus - other.minus)

    def __neg__(self) -> "PiScalar":
        return PiScalar(-self.plus, -self.minus)

    def __mul__(self, other: "PiScalar") -> "PiScalar":
        return PiScalar(self.plus * other.plus, self.minus * other.minus)

    def __truediv__(self, other: "PiScalar") -> "PiScalar":
        if not other.is_invertible():
            raise ZeroDivisionError("non-invertible scalar")
        return PiScalar(self.plus / other.plus, self.minus / other.minus)

    def __pow__(self, k: int) -> "PiScalar":
        if k < 0:
            return ONE / (self ** (-k))
        out = ONE
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def bar(self) -> "PiScalar":
        return PiScalar(self.plus.bar(), self.minus.bar())

    def series(self, lo: int, hi: int) -> SeriesPair:
        return SeriesPair(self.plus.series(lo, hi), self.minus.series(lo, hi))

    def render(self) -> str:
        return f"plus={self.plus.render()}; minus={self.minus.render()}"


ZERO = PiScalar(RF_ZERO, RF_ZERO)
ONE = PiScalar(RF_ONE, RF_ONE)
Q = PiScalar.from_laurent({(1, 0): 1})
PI = PiScalar.from_laurent({(0, 1): 1})


def q_power(k: int, *, d: int = 1) -> PiScalar:
    """q_i^k = q^(d*k)."""
    return PiScalar.from_laurent({(d * k, 0): 1})


def pi_power(k: int, *, parity: int = 1) -> PiScalar:
    """pi_i^k = pi^(parity*k)."""
    return PiScalar.from_laurent({(0, (parity * k) % 2): 1})


def qpi_monomial(qexp: int, piexp: int, *, d: int = 1, parity: int = 1) -> PiScalar:
    return PiScalar.from_laurent({(d * qexp, (parity * piexp) % 2): 1})


def field_ops(a: PiScalar, b: PiScalar, which: str):
    """Dispatch table used by the CLI; library code calls operators directly."""
    if which == "add":
        return a + b
    if which == "sub":
        return a - b
    if which == "mul":
        return a * b
    if which == "div":
        return a / b
    if which == "eq":
        return a == b
    raise ValueError(f"unknown field op {which!r}")


def bar(a: PiScalar) -> PiScalar:
    return a.bar()


def qpi_int(n: int, *, d: int = 1, parity: int = 1) -> PiScalar:
    """[n] in (q_i, pi_i) with q_i = q^d, pi_i = pi^parity.

    [n] = (q^n - (pi q)^-n) / (q - (pi q)^-1)
        = q^(n-1) + pi q^(n-3) + ... + pi^(n-1) q^(1-n)       for n >= 0,
        = -pi^n (q^(-n-1) + pi q^(-n-3) + ... + pi^(-n-1) q^(1+n)) for n <= 0.
    """
    terms: dict = {}
    if n >= 0:
        for k in range(n):
            key = (d * (n - 1 - 2 * k), (parity * k) % 2)
            terms[key] = terms.get(key, 0) + 1
    else:
        for k in range(-n):
            key = (d * (-n - 1 - 2 * k), (parity * (n + k)) % 2)
            terms[key] = terms.get(key, 0) - 1
    return PiScalar.from_laurent(terms)


def qpi_factorial(n: int, *, d: int = 1, parity: int = 1) -> PiScalar:
    if n < 0:
        raise ValueError("factorial of a negative integer")
    out = ONE
    for k in range(1, n + 1):
        out = out * qpi_int(k, d=d, parity=parity)
    return out


def qpi_binom(n: int, r: int, *, d: int = 1, parity: int = 1) -> PiScalar:
    """[n choose r] = prod_{k=1..r} [n-k+1]/[k]; 0 when 0 <= n < r."""
    if r < 0:
        raise ValueError("binomial with negative lower index")
    num = ONE
    for k in range(1, r + 1):
        num = num * qpi_int(n - k + 1, d=d, parity=parity)
    if num.is_zero():
        return ZERO
    return num / qpi_factorial(r, d=d, parity=parity)


def to_series(a: PiScalar, lo: int, hi: int) -> SeriesPair:
    return a.series(lo, hi)
