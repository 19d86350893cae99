"""Genus 0 mirror symmetry for the (4,2) hypersurface in P^3 x P^1.

Three layers of exact data:

* :class:`BiSeries` -- truncated power series in q1 = e^t1, q2 = e^t2;
* :class:`LogSeries` -- polynomials in t1, t2 with BiSeries coefficients;
* :class:`MirrorSeries` -- an element of Q[H1,H2]/(H1^4, H2^2) with
  LogSeries coefficients, which is how the I-function is packaged.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import comb, factorial, lcm
from typing import Mapping

from .bpsk3 import gv_invert

__all__ = [
    "BiSeries",
    "LogSeries",
    "MirrorSeries",
    "LogCancellationError",
    "hyper_F",
    "hyper_G",
    "i_functions",
    "mirror_map",
    "invert_map",
    "compose",
    "potential",
    "fiber_gw",
    "fiber_bps",
]


class LogCancellationError(ArithmeticError):
    """Terms polynomial in T survived the mirror change of variables."""


# -- bivariate truncated series ------------------------------------------------

class BiSeries:
    """sum c[d1,d2] q1^d1 q2^d2 known for d1 <= D1, d2 <= D2."""

    __slots__ = ("D1", "D2", "c")

    def __init__(self, D1: int, D2: int, coeffs: Mapping[tuple[int, int], object] = ()):
        self.D1, self.D2 = int(D1), int(D2)
        items = coeffs.items() if isinstance(coeffs, Mapping) else coeffs
        self.c: dict[tuple[int, int], Fraction] = {}
        for (a, b), v in items:
            if a <= self.D1 and b <= self.D2 and v:
                self.c[(a, b)] = Fraction(v)

    @classmethod
    def const(cls, D1, D2, v=1) -> "BiSeries":
        return cls(D1, D2, {(0, 0): v})

    @classmethod
    def var(cls, D1, D2, i: int) -> "BiSeries":
        return cls(D1, D2, {(1, 0) if i == 1 else (0, 1): 1})

    def __getitem__(self, key) -> Fraction:
        a, b = key
        if a > self.D1 or b > self.D2:
            raise IndexError(f"coefficient {key} beyond truncation ({self.D1}, {self.D2})")
        return self.c.get(key, Fraction(0))

    def constant(self) -> Fraction:
        return self.c.get((0, 0), Fraction(0))

    def is_zero(self) -> bool:
        return not self.c

    def _like(self, c) -> "BiSeries":
        out = BiSeries.__new__(BiSeries)
        out.D1, out.D2, out.c = self.D1, self.D2, c
        return out

    def __add__(self, other):
        if not isinstance(other, BiSeries):
            other = BiSeries.const(self.D1, self.D2, other)
        c = dict(self.c)
        for k, v in other.c.items():
            if k[0] > self.D1 or k[1] > self.D2:
                continue
            s = c.get(k, 0) + v
            if s:
                c[k] = s
            else:
                c.pop(k, None)
        out = self._like(c)
        if other.D1 < self.D1 or other.D2 < self.D2:
            out = out.truncate(min(self.D1, other.D1), min(self.D2, other.D2))
        return out

    __radd__ = __add__

    def __neg__(self):
        return self._like({k: -v for k, v in self.c.items()})

    def __sub__(self, other):
        return self + (-other if isinstance(other, BiSeries) else -Fraction(other))

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, s) -> "BiSeries":
        s = Fraction(s)
        if not s:
            return self._like({})
        return self._like({k: v * s for k, v in self.c.items()})

    def __mul__(self, other):
        if not isinstance(other, BiSeries):
            return self.scale(other)
        D1, D2 = min(self.D1, other.D1), min(self.D2, other.D2)
        da = db = 1
        for v in self.c.values():
            da = lcm(da, v.denominator)
        for v in other.c.values():
            db = lcm(db, v.denominator)
        ia = [(k, int(v * da)) for k, v in self.c.items()]
        ib = [(k, int(v * db)) for k, v in other.c.items()]
        acc: dict[tuple[int, int], int] = {}
        for (a1, a2), x in ia:
            if a1 > D1 or a2 > D2:
                continue
            for (b1, b2), y in ib:
                e1, e2 = a1 + b1, a2 + b2
                if e1 <= D1 and e2 <= D2:
                    acc[(e1, e2)] = acc.get((e1, e2), 0) + x * y
        den = da * db
        out = BiSeries.__new__(BiSeries)
        out.D1, out.D2 = D1, D2
        out.c = {k: Fraction(v, den) for k, v in acc.items() if v}
        return out

    __rmul__ = __mul__

    def __pow__(self, n: int):
        out = BiSeries.const(self.D1, self.D2)
        for _ in range(n):
            out = out * self
        return out

    def inverse(self) -> "BiSeries":
        c0 = self.constant()
        if not c0:
            raise ZeroDivisionError("series has zero constant term")
        # solve self * x = 1 degree by degree in the lexicographic order
        x: dict[tuple[int, int], Fraction] = {}
        others = [(k, v) for k, v in self.c.items() if k != (0, 0)]
        for a in range(self.D1 + 1):
            for b in range(self.D2 + 1):
                s = Fraction(1) if (a, b) == (0, 0) else Fraction(0)
                for (k1, k2), v in others:
                    if k1 <= a and k2 <= b:
                        y = x.get((a - k1, b - k2))
                        if y:
                            s -= v * y
                if s:
                    x[(a, b)] = s / c0
        return self._like(x)

    def __truediv__(self, other):
        if isinstance(other, BiSeries):
            return self * other.inverse()
        return self.scale(1 / Fraction(other))

    def exp(self) -> "BiSeries":
        if self.constant():
            raise ValueError("exp needs zero constant term")
        out = BiSeries.const(self.D1, self.D2)
        term = BiSeries.const(self.D1, self.D2)
        for m in range(1, self.D1 + self.D2 + 1):
            term = (term * self).scale(Fraction(1, m))
            if term.is_zero():
                break
            out = out + term
        return out

    def shift(self, s1: int, s2: int) -> "BiSeries":
        """Multiply by q1^s1 q2^s2 (nonnegative shifts)."""
        return self._like({(a + s1, b + s2): v for (a, b), v in self.c.items()
                           if a + s1 <= self.D1 and b + s2 <= self.D2})

    def truncate(self, D1: int, D2: int) -> "BiSeries":
        return BiSeries(D1, D2, {k: v for k, v in self.c.items() if k[0] <= D1 and k[1] <= D2})

    def restrict_q2_zero(self) -> list[Fraction]:
        return [self.c.get((a, 0), Fraction(0)) for a in range(self.D1 + 1)]

    def __eq__(self, other):
        if not isinstance(other, BiSeries):
            return NotImplemented
        return (self.D1, self.D2, self.c) == (other.D1, other.D2, other.c)

    def __repr__(self):
        items = sorted(self.c.items())[:6]
        body = " + ".join(f"{v}*q1^{a}*q2^{b}" for (a, b), v in items) or "0"
        return f"BiSeries({body}{' + ...' if len(self.c) > 6 else ''}; <= ({self.D1},{self.D2}))"


# -- polynomials in t with BiSeries coefficients ----------------------------------

@dataclass
class LogSeries:
    """sum_{a,b} t1^a t2^b coeff[a,b](q1, q2)."""

    D1: int
    D2: int
    coeffs: dict = field(default_factory=dict)

    def __post_init__(self):
        self.coeffs = {k: v for k, v in self.coeffs.items() if not v.is_zero()}

    @classmethod
    def from_series(cls, s: BiSeries) -> "LogSeries":
        return cls(s.D1, s.D2, {(0, 0): s})

    def get(self, a: int, b: int) -> BiSeries:
        return self.coeffs.get((a, b), BiSeries(self.D1, self.D2))

    def degree(self) -> int:
        return max((a + b for a, b in self.coeffs), default=0)

    def __add__(self, other: "LogSeries") -> "LogSeries":
        out = dict(self.coeffs)
        for k, v in other.coeffs.items():
            out[k] = out[k] + v if k in out else v
        return LogSeries(self.D1, self.D2, out)

    def __neg__(self):
        return LogSeries(self.D1, self.D2, {k: -v for k, v in self.coeffs.items()})

    def __sub__(self, other):
        return self + (-other)

    def scale(self, s) -> "LogSeries":
        if isinstance(s, BiSeries):
            return LogSeries(self.D1, self.D2, {k: v * s for k, v in self.coeffs.items()})
        return LogSeries(self.D1, self.D2, {k: v.scale(s) for k, v in self.coeffs.items()})

    def __mul__(self, other):
        if not isinstance(other, LogSeries):
            return self.scale(other)
        out: dict = {}
        for (a1, b1), x in self.coeffs.items():
            for (a2, b2), y in other.coeffs.items():
                k = (a1 + a2, b1 + b2)
                p = x * y
                out[k] = out[k] + p if k in out else p
        return LogSeries(self.D1, self.D2, out)

    def substitute_t(self, c1: BiSeries, c2: BiSeries) -> "LogSeries":
        """Rewrite in T-variables, where t_i = T_i - c_i(q)."""
        pow1 = [BiSeries.const(self.D1, self.D2)]
        pow2 = [BiSeries.const(self.D1, self.D2)]
        amax = max((a for a, _ in self.coeffs), default=0)
        bmax = max((b for _, b in self.coeffs), default=0)
        for _ in range(amax):
            pow1.append(pow1[-1] * (-c1))
        for _ in range(bmax):
            pow2.append(pow2[-1] * (-c2))
        out: dict = {}
        for (a, b), s in self.coeffs.items():
            for al in range(a + 1):
                for be in range(b + 1):
                    term = s * pow1[a - al] * pow2[b - be]
                    term = term.scale(comb(a, al) * comb(b, be))
                    k = (al, be)
                    out[k] = out[k] + term if k in out else term
        return LogSeries(self.D1, self.D2, out)

    def map_series(self, fn) -> "LogSeries":
        return LogSeries(self.D1, self.D2, {k: fn(v) for k, v in self.coeffs.items()})


# -- the cohomology ring Q[H1,H2]/(H1^4, H2^2) -------------------------------------

def _idx(i: int, j: int) -> int:
    return i + 4 * j


def _hmul(x: list, y: list) -> list:
    out = [Fraction(0)] * 8
    for i1 in range(4):
        for j1 in range(2):
            a = x[_idx(i1, j1)]
            if not a:
                continue
            for i2 in range(4 - i1):
                for j2 in range(2 - j1):
                    b = y[_idx(i2, j2)]
                    if b:
                        out[_idx(i1 + i2, j1 + j2)] += a * b
    return out


def _hlinear(c0, c1, c2) -> list:
    """c0 + c1*H1 + c2*H2."""
    out = [Fraction(0)] * 8
    out[_idx(0, 0)] = Fraction(c0)
    out[_idx(1, 0)] = Fraction(c1)
    out[_idx(0, 1)] = Fraction(c2)
    return out


def _inv_linear_H1(r: int) -> list:
    """(H1 + r)^(-1) = (1/r) sum_k (-H1/r)^k."""
    out = [Fraction(0)] * 8
    for k in range(4):
        out[_idx(k, 0)] = Fraction((-1) ** k, r ** (k + 1))
    return out


def _inv_linear_H2(r: int) -> list:
    out = [Fraction(0)] * 8
    out[_idx(0, 0)] = Fraction(1, r)
    out[_idx(0, 1)] = Fraction(-1, r * r)
    return out


@lru_cache(maxsize=None)
def _hyper_coefficient(d1: int, d2: int) -> tuple[Fraction, ...]:
    """prod_{r=0}^{4d1+2d2}(4H1+2H2+r) / (prod_{r<=d1}(H1+r)^4 prod_{r<=d2}(H2+r)^2)."""
    acc = _hlinear(0, 4, 2)  # the r = 0 factor
    for r in range(1, 4 * d1 + 2 * d2 + 1):
        acc = _hmul(acc, _hlinear(r, 4, 2))
    for r in range(1, d1 + 1):
        inv = _inv_linear_H1(r)
        for _ in range(4):
            acc = _hmul(acc, inv)
    for r in range(1, d2 + 1):
        inv = _inv_linear_H2(r)
        for _ in range(2):
            acc = _hmul(acc, inv)
    return tuple(acc)


@dataclass
class MirrorSeries:
    """sum_{i<=3, j<=1} H1^i H2^j * LogSeries."""

    D1: int
    D2: int
    parts: dict  # (i, j) -> LogSeries

    def __getitem__(self, ij) -> LogSeries:
        i, j = ij
        if i > 3 or j > 1:
            return LogSeries(self.D1, self.D2)
        return self.parts.get(ij, LogSeries(self.D1, self.D2))

    @property
    def coefficients(self) -> dict:
        """Flat map (i, j, a, b, d1, d2) -> rational."""
        out = {}
        for (i, j), ls in self.parts.items():
            for (a, b), s in ls.coeffs.items():
                for (d1, d2), v in s.c.items():
                    out[(i, j, a, b, d1, d2)] = v
        return out


# -- hypergeometric data ---------------------------------------------------------

def _F_coefficient(d1: int, d2: int) -> int:
    return factorial(4 * d1 + 2 * d2) // (factorial(d1) ** 4 * factorial(d2) ** 2)


def hyper_F(d1max: int, d2max: int) -> BiSeries:
    """F = sum (4d1+2d2)!/((d1!)^4 (d2!)^2) q1^d1 q2^d2."""
    return BiSeries(d1max, d2max, {(a, b): _F_coefficient(a, b)
                                   for a in range(d1max + 1) for b in range(d2max + 1)})


def _harmonic(n: int) -> Fraction:
    return sum((Fraction(1, r) for r in range(1, n + 1)), Fraction(0))


def hyper_G(a: int, b: int, d1max: int, d2max: int) -> BiSeries:
    """F-coefficients weighted by the harmonic number H_(a d1 + b d2)."""
    return BiSeries(d1max, d2max, {(x, y): _F_coefficient(x, y) * _harmonic(a * x + b * y)
                                   for x in range(d1max + 1) for y in range(d2max + 1)})


def i_functions(d1max: int, d2max: int) -> MirrorSeries:
    """All I_{i,j}(t1, t2) jointly.

    e^{H1 t1 + H2 t2} contributes t1^a t2^b / (a! b!) H1^a H2^b, so
    I_{i,j} = sum_{a<=i, b<=j} t1^a t2^b/(a! b!) R_{i-a, j-b}(q).
    """
    R = {}
    for i in range(4):
        for j in range(2):
            R[(i, j)] = BiSeries(d1max, d2max, {
                (x, y): _hyper_coefficient(x, y)[_idx(i, j)]
                for x in range(d1max + 1) for y in range(d2max + 1)
            })
    parts = {}
    for i in range(4):
        for j in range(2):
            coeffs = {}
            for a in range(i + 1):
                for b in range(j + 1):
                    s = R[(i - a, j - b)].scale(Fraction(1, factorial(a) * factorial(b)))
                    if not s.is_zero():
                        coeffs[(a, b)] = s
            parts[(i, j)] = LogSeries(d1max, d2max, coeffs)
    return MirrorSeries(d1max, d2max, parts)


# -- mirror map --------------------------------------------------------------------

@dataclass
class MirrorMap:
    """T_i = t_i + correction_i(q);  Q_i = q_i * exp(correction_i)."""

    correction1: BiSeries
    correction2: BiSeries
    Q1: BiSeries
    Q2: BiSeries


def mirror_map(d1max: int, d2max: int) -> MirrorMap:
    F = hyper_F(d1max, d2max)
    G42 = hyper_G(4, 2, d1max, d2max)
    G10 = hyper_G(1, 0, d1max, d2max)
    G01 = hyper_G(0, 1, d1max, d2max)
    Finv = F.inverse()
    c1 = ((G42 - G10) * Finv).scale(4)
    c2 = ((G42 - G01) * Finv).scale(2)
    Q1 = (c1.exp()).shift(1, 0)
    Q2 = (c2.exp()).shift(0, 1)
    return MirrorMap(c1, c2, Q1, Q2)


def compose(f: BiSeries, q1: BiSeries, q2: BiSeries) -> BiSeries:
    """f(q1(Q), q2(Q)) for q1, q2 without constant term."""
    if q1.constant() or q2.constant():
        raise ValueError("substituted series must vanish at the origin")
    D1, D2 = min(f.D1, q1.D1, q2.D1), min(f.D2, q1.D2, q2.D2)
    # Horner in q1 for each q2-degree
    by_b: dict[int, dict[int, Fraction]] = {}
    for (a, b), v in f.c.items():
        if a <= D1 and b <= D2:
            by_b.setdefault(b, {})[a] = v
    result = BiSeries(D1, D2)
    q2pow = BiSeries.const(D1, D2)
    for b in range(D2 + 1):
        if b:
            q2pow = q2pow * q2
        row = by_b.get(b)
        if not row:
            continue
        acc = BiSeries(D1, D2)
        for a in range(max(row), -1, -1):
            acc = acc * q1 + row.get(a, 0)
        result = result + acc * q2pow
    return result


def invert_map(Q1: BiSeries, Q2: BiSeries) -> tuple[BiSeries, BiSeries]:
    """Formal inverse (q1(Q), q2(Q)) of Q_i = q_i * unit_i(q)."""
    D1, D2 = min(Q1.D1, Q2.D1), min(Q1.D2, Q2.D2)
    u1 = _unit_part(Q1, 1)
    u2 = _unit_part(Q2, 2)
    q1 = BiSeries.var(D1, D2, 1)
    q2 = BiSeries.var(D1, D2, 2)
    for _ in range(D1 + D2 + 1):
        nq1 = compose(u1, q1, q2).inverse().shift(1, 0)
        nq2 = compose(u2, q1, q2).inverse().shift(0, 1)
        if nq1 == q1 and nq2 == q2:
            break
        q1, q2 = nq1, nq2
    return q1, q2


def _unit_part(Q: BiSeries, i: int) -> BiSeries:
    """Q / q_i, which must have constant term 1.

    The quotient is known one order less in direction i; the missing row is
    padded with zeros, which is harmless because only q_i * unit is used.
    """
    s1, s2 = (1, 0) if i == 1 else (0, 1)
    if (Q.D1 if i == 1 else Q.D2) == 0:
        return BiSeries.const(Q.D1, Q.D2)
    u = {}
    for (a, b), v in Q.c.items():
        if a < s1 or b < s2:
            raise ValueError(f"Q{i} is not divisible by q{i}")
        u[(a - s1, b - s2)] = v
    unit = BiSeries(Q.D1, Q.D2, u)
    if unit.constant() != 1:
        raise ValueError(f"Q{i}/q{i} must have constant term 1")
    return unit


# -- potential ------------------------------------------------------------------------

@dataclass
class Potential:
    """Instanton part sum N_{0,(d1,d2)} Q1^d1 Q2^d2 and the classical polynomial."""

    instanton: BiSeries
    classical: dict  # (a, b) -> coefficient of T1^a T2^b
    t_polynomial: LogSeries  # full result in T before splitting


def potential(d1max: int, d2max: int, check: bool = True) -> Potential:
    """Genus 0 potential in Q-variables, with log-cancellation asserted."""
    I = i_functions(d1max, d2max)
    I10 = I[1, 0]
    if set(I10.coeffs) != {(0, 0)}:
        raise ArithmeticError("I_{1,0} unexpectedly depends on t")
    inv = I10.get(0, 0).inverse()

    def ratio(i, j):
        return I[i, j].scale(inv)

    rhs = (ratio(1, 1).scale(2) - ratio(2, 0)) * ratio(3, 0) \
        + (ratio(2, 0) * ratio(2, 1)).scale(2) - ratio(3, 1).scale(2)
    mm = mirror_map(d1max, d2max)
    inT = rhs.substitute_t(mm.correction1, mm.correction2)
    q1, q2 = invert_map(mm.Q1, mm.Q2)
    inQ = inT.map_series(lambda s: compose(s, q1, q2))
    classical_expected = {(3, 0): Fraction(1, 3), (2, 1): Fraction(2)}
    if check:
        for (a, b), s in inQ.coeffs.items():
            if (a, b) == (0, 0):
                if s.constant():
                    raise LogCancellationError(f"nonzero constant term {s.constant()}")
                continue
            want = classical_expected.get((a, b), Fraction(0))
            if s.constant() != want or any(k != (0, 0) for k in s.c):
                raise LogCancellationError(f"T1^{a} T2^{b} coefficient did not cancel: {s!r}")
    classical = {k: inQ.get(*k).constant() for k in inQ.coeffs if k != (0, 0)}
    return Potential(inQ.get(0, 0), classical, inQ)


def fiber_gw(dmax: int, d2max: int = 0) -> list[Fraction]:
    """N_{0,(d,0)} for d = 0..dmax (entry 0 is zero)."""
    return potential(dmax, d2max).instanton.restrict_q2_zero()


def fiber_bps(dmax: int, d2max: int = 0) -> dict[int, Fraction]:
    """Genus 0 BPS counts n_{0,d} of the fiber classes, d = 1..dmax."""
    N = fiber_gw(dmax, d2max)
    bps = gv_invert({(0, d): N[d] for d in range(1, dmax + 1)}, 0, dmax)
    return {d: bps[(0, d)] for d in range(1, dmax + 1)}
