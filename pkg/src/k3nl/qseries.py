"""Truncated series in q with exponents in (1/N)Z and exact rational coefficients.

A :class:`FracSeries` stores the coefficients it knows together with a
truncation order ``trunc``: every exponent at or above ``trunc`` is unknown,
and asking for it raises :class:`TruncationError`.  ``trunc=None`` marks an
exact (finite) Laurent polynomial.
"""
from __future__ import annotations

import json
from fractions import Fraction
from math import gcd, lcm
from typing import Iterable, Mapping

__all__ = [
    "FracSeries",
    "TruncationError",
    "add",
    "mul",
    "invert",
    "eta24",
    "q_derivative",
    "coeff",
    "monomial",
]


class TruncationError(ValueError):
    """Raised when a coefficient is read in the unknown region of a series."""


def _frac(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, str):
        return Fraction(x)
    if isinstance(x, float):
        raise TypeError("floating point values are not accepted in exact series")
    return Fraction(x)


def _min_trunc(*ts):
    ts = [t for t in ts if t is not None]
    return min(ts) if ts else None


class FracSeries:
    """Immutable truncated series ``sum c_e q^e`` with ``N*e`` integral."""

    __slots__ = ("_N", "_trunc", "_terms")

    def __init__(self, N: int = 1, terms: Mapping | Iterable = (), trunc=None):
        if int(N) != N or N < 1:
            raise ValueError(f"grading denominator must be a positive integer, got {N!r}")
        N = int(N)
        if trunc is not None:
            trunc = _frac(trunc)
        items = terms.items() if isinstance(terms, Mapping) else terms
        store: dict[int, Fraction] = {}
        for e, c in items:
            e = _frac(e)
            k = e * N
            if k.denominator != 1:
                raise ValueError(f"exponent {e} is not in (1/{N})Z")
            if trunc is not None and e >= trunc:
                continue
            c = _frac(c)
            if c:
                k = int(k)
                c = store.get(k, 0) + c
                if c:
                    store[k] = c
                else:
                    store.pop(k, None)
        self._N = N
        self._trunc = trunc
        self._terms = store

    @classmethod
    def _raw(cls, N: int, store: dict[int, Fraction], trunc) -> "FracSeries":
        # store is trusted: integer keys, nonzero Fraction values, keys below trunc
        obj = cls.__new__(cls)
        obj._N = N
        obj._trunc = trunc
        obj._terms = store
        return obj

    # -- accessors -------------------------------------------------------
    @property
    def N(self) -> int:
        return self._N

    @property
    def trunc(self):
        return self._trunc

    @property
    def is_exact(self) -> bool:
        return self._trunc is None

    def terms(self) -> list[tuple[Fraction, Fraction]]:
        """Known nonzero terms as ``(exponent, coefficient)``, sorted by exponent."""
        N = self._N
        return [(Fraction(k, N), self._terms[k]) for k in sorted(self._terms)]

    def exponents(self) -> list[Fraction]:
        return [e for e, _ in self.terms()]

    def valuation(self):
        """Smallest exponent with a nonzero coefficient (``trunc`` if none is known)."""
        if self._terms:
            return Fraction(min(self._terms), self._N)
        return self._trunc

    def leading(self) -> tuple[Fraction, Fraction]:
        if not self._terms:
            raise ZeroDivisionError("series is zero up to its truncation")
        k = min(self._terms)
        return Fraction(k, self._N), self._terms[k]

    def coeff(self, e) -> Fraction:
        e = _frac(e)
        if self._trunc is not None and e >= self._trunc:
            raise TruncationError(f"exponent {e} is at or beyond truncation {self._trunc}")
        k = e * self._N
        if k.denominator != 1:
            return Fraction(0)
        return self._terms.get(int(k), Fraction(0))

    __getitem__ = coeff

    def is_zero(self) -> bool:
        return not self._terms

    # -- structural helpers ---------------------------------------------
    def regrade(self, N: int) -> "FracSeries":
        """Same series viewed with grading denominator ``N`` (a multiple of the current one)."""
        if N == self._N:
            return self
        if N % self._N:
            raise ValueError(f"cannot regrade from 1/{self._N} to 1/{N}")
        f = N // self._N
        return FracSeries._raw(N, {k * f: c for k, c in self._terms.items()}, self._trunc)

    def reduced(self) -> "FracSeries":
        """Use the smallest grading denominator compatible with the stored exponents."""
        g = self._N
        for k in self._terms:
            g = gcd(g, k)
        if g == 1:
            return self
        return FracSeries._raw(self._N // g, {k // g: c for k, c in self._terms.items()}, self._trunc)

    def truncate(self, trunc) -> "FracSeries":
        trunc = _frac(trunc)
        if self._trunc is not None and trunc > self._trunc:
            raise TruncationError(f"cannot extend truncation {self._trunc} to {trunc}")
        lim = trunc * self._N
        return FracSeries._raw(self._N, {k: c for k, c in self._terms.items() if k < lim}, trunc)

    def shift(self, e) -> "FracSeries":
        """Multiply by the monomial q^e."""
        e = _frac(e)
        N = lcm(self._N, e.denominator)
        s = self.regrade(N)
        k0 = int(e * N)
        trunc = None if s._trunc is None else s._trunc + e
        return FracSeries._raw(N, {k + k0: c for k, c in s._terms.items()}, trunc)

    def scale(self, c) -> "FracSeries":
        c = _frac(c)
        if not c:
            return FracSeries._raw(self._N, {}, self._trunc)
        return FracSeries._raw(self._N, {k: v * c for k, v in self._terms.items()}, self._trunc)

    def map_coefficients(self, fn) -> "FracSeries":
        """Apply ``fn(exponent, coefficient)`` to every known term."""
        N = self._N
        return FracSeries(N, ((Fraction(k, N), fn(Fraction(k, N), c)) for k, c in self._terms.items()), self._trunc)

    # -- arithmetic -------------------------------------------------------
    def __add__(self, other):
        return add(self, _coerce(other, self))

    __radd__ = __add__

    def __neg__(self):
        return self.scale(-1)

    def __sub__(self, other):
        return add(self, -_coerce(other, self))

    def __rsub__(self, other):
        return add(_coerce(other, self), -self)

    def __mul__(self, other):
        if isinstance(other, FracSeries):
            return mul(self, other)
        return self.scale(other)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, FracSeries):
            return mul(self, invert(other))
        return self.scale(1 / _frac(other))

    def __pow__(self, n: int):
        if n < 0:
            return invert(self) ** (-n)
        result = FracSeries(self._N, {0: 1})
        base = self
        while n:
            if n & 1:
                result = mul(result, base)
            n >>= 1
            if n:
                base = mul(base, base)
        return result

    def __eq__(self, other):
        if not isinstance(other, FracSeries):
            return NotImplemented
        if self._trunc != other._trunc:
            return False
        N = lcm(self._N, other._N)
        return self.regrade(N)._terms == other.regrade(N)._terms

    def agrees_with(self, other: "FracSeries", upto=None) -> bool:
        """Coefficientwise equality on the common known window, optionally capped at ``upto``."""
        t = _min_trunc(self._trunc, other._trunc, None if upto is None else _frac(upto))
        N = lcm(self._N, other._N)
        a, b = self.regrade(N)._terms, other.regrade(N)._terms
        if t is not None:
            lim = t * N
            a = {k: c for k, c in a.items() if k < lim}
            b = {k: c for k, c in b.items() if k < lim}
        return a == b

    def __hash__(self):
        return hash((self._trunc, tuple(self.reduced().terms())))

    def __repr__(self):
        body = " + ".join(f"({c})*q^({e})" for e, c in self.terms()[:8]) or "0"
        if len(self._terms) > 8:
            body += " + ..."
        tail = "" if self._trunc is None else f" + O(q^{self._trunc})"
        return f"FracSeries({body}{tail})"

    # -- serialization ----------------------------------------------------
    def to_json_obj(self) -> dict:
        return {
            "N": self._N,
            "trunc": "inf" if self._trunc is None else str(self._trunc),
            "terms": [[str(e), str(c)] for e, c in self.terms()],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_json_obj())

    @classmethod
    def from_json_obj(cls, obj: Mapping) -> "FracSeries":
        trunc = None if obj["trunc"] in ("inf", None) else Fraction(obj["trunc"])
        return cls(obj["N"], [(Fraction(e), Fraction(c)) for e, c in obj["terms"]], trunc)

    @classmethod
    def from_json(cls, text: str) -> "FracSeries":
        return cls.from_json_obj(json.loads(text))


def _coerce(x, like: FracSeries) -> FracSeries:
    if isinstance(x, FracSeries):
        return x
    return FracSeries(like.N, {0: _frac(x)})


def monomial(e, c=1, trunc=None) -> FracSeries:
    e = _frac(e)
    return FracSeries(e.denominator, {e: c}, trunc)


def _common(a: FracSeries, b: FracSeries) -> tuple[FracSeries, FracSeries]:
    N = lcm(a.N, b.N)
    return a.regrade(N), b.regrade(N)


def add(a: FracSeries, b: FracSeries) -> FracSeries:
    a, b = _common(a, b)
    trunc = _min_trunc(a.trunc, b.trunc)
    lim = None if trunc is None else trunc * a.N
    store = {k: c for k, c in a._terms.items() if lim is None or k < lim}
    for k, c in b._terms.items():
        if lim is not None and k >= lim:
            continue
        v = store.get(k, 0) + c
        if v:
            store[k] = v
        else:
            store.pop(k, None)
    return FracSeries._raw(a.N, store, trunc)


def _int_scaled(terms: dict[int, Fraction]) -> tuple[dict[int, int], int]:
    den = 1
    for c in terms.values():
        den = lcm(den, c.denominator)
    return {k: int(c * den) for k, c in terms.items()}, den


def mul(a: FracSeries, b: FracSeries) -> FracSeries:
    a, b = _common(a, b)
    N = a.N
    va, vb = a.valuation(), b.valuation()
    cands = []
    if a.trunc is not None and vb is not None:
        cands.append(a.trunc + vb)
    if b.trunc is not None and va is not None:
        cands.append(b.trunc + va)
    trunc = min(cands) if cands else None
    lim = None if trunc is None else trunc * N
    ia, da = _int_scaled(a._terms)
    ib, db = _int_scaled(b._terms)
    acc: dict[int, int] = {}
    kb_sorted = sorted(ib.items())
    for ka, ca in ia.items():
        for kb, cb in kb_sorted:
            k = ka + kb
            if lim is not None and k >= lim:
                break
            acc[k] = acc.get(k, 0) + ca * cb
    den = da * db
    store = {k: Fraction(v, den) for k, v in acc.items() if v}
    return FracSeries._raw(N, store, trunc)


def invert(a: FracSeries) -> FracSeries:
    """Multiplicative inverse, valid up to ``trunc - 2*valuation``."""
    if a.is_zero():
        raise ZeroDivisionError("cannot invert a series that is zero up to truncation")
    N = a.N
    k0 = min(a._terms)
    c0 = a._terms[k0]
    if a.trunc is None:
        if len(a._terms) == 1:
            return FracSeries._raw(N, {-k0: 1 / c0}, None)
        raise ValueError("inverse of an exact non-monomial series needs a truncation; call .truncate() first")
    # a = c0 q^{k0/N} (1 + u), u supported on positive indices
    length = int(a.trunc * N) - k0  # number of known coefficients of the unit part
    u = [Fraction(0)] * length
    for k, c in a._terms.items():
        u[k - k0] = c / c0
    inv = [Fraction(0)] * length
    inv[0] = Fraction(1)
    nz = [(j, u[j]) for j in range(1, length) if u[j]]
    for n in range(1, length):
        s = 0
        for j, uj in nz:
            if j > n:
                break
            s += uj * inv[n - j]
        inv[n] = -s
    store = {n - k0: v / c0 for n, v in enumerate(inv) if v}
    trunc = a.trunc - 2 * Fraction(k0, N)
    return FracSeries._raw(N, store, trunc)


def coeff(a: FracSeries, e) -> Fraction:
    return a.coeff(e)


def q_derivative(a: FracSeries) -> FracSeries:
    """The operator q d/dq: the coefficient at q^e is multiplied by e."""
    N = a.N
    store = {k: c * Fraction(k, N) for k, c in a._terms.items() if k}
    return FracSeries._raw(N, store, a.trunc)


def euler_product(trunc: int, power: int = 1) -> FracSeries:
    """prod_{n>=1} (1 - q^n)^power to O(q^trunc), for any integer power."""
    trunc = int(trunc)
    if trunc <= 0:
        return FracSeries(1, {}, trunc)
    c = [0] * trunc
    c[0] = 1
    for n in range(1, trunc):
        if power > 0:
            for _ in range(power):
                for m in range(trunc - 1, n - 1, -1):
                    c[m] -= c[m - n]
        else:
            for _ in range(-power):
                for m in range(n, trunc):
                    c[m] += c[m - n]
    return FracSeries(1, {m: v for m, v in enumerate(c) if v}, trunc)


def eta24(trunc) -> FracSeries:
    """Delta(q) = q prod (1 - q^n)^24 to O(q^trunc)."""
    trunc = int(trunc)
    if trunc < 1:
        raise ValueError("eta24 needs trunc >= 1")
    return euler_product(trunc - 1, 24).shift(1)
