"""Truncated Dirichlet-series arithmetic with exact and log-domain backends.

A series is a finite sorted map {dimension -> multiplicity} truncated at a
cutoff N.  Dimensions are arbitrary-precision positive integers (model
dimensions grow like q^n and overflow machine words almost immediately).
The exact backend keeps multiplicities as positive big integers and is
closed under every operation here; the log backend keeps natural-log
multiplicities as floats.  Backends never mix silently: conversion is
explicit via :meth:`DirichletSeries.to_log`.
"""
from __future__ import annotations

import math
from bisect import bisect_right
from dataclasses import dataclass
from typing import Dict, Iterator, Mapping, Optional, Tuple, Union

from .errors import PreconditionError

EXACT = "exact"
LOG = "log"

# Refuse to materialize exponent-form multiplicities beyond this many bits.
MAX_MATERIALIZE_BITS = 1 << 22


class BackendMismatch(PreconditionError):
    """Two series with different backends were combined."""


class RangeOverflow(OverflowError):
    """Exact -> float conversion left double range; switch to the log backend."""


@dataclass(frozen=True)
class BigPower:
    """A multiplicity of the form base**exponent kept unexpanded.

    Used for the factor counts q^{f(j)} whose exponents can make the plain
    integer impractical to materialize while its logarithm stays tiny.
    """

    base: int
    exponent: int

    def __post_init__(self):
        if self.base < 2 or self.exponent < 0:
            raise PreconditionError("BigPower needs base >= 2 and exponent >= 0")

    def log(self) -> float:
        return self.exponent * math.log(self.base)

    def bits(self) -> float:
        return self.exponent * math.log2(self.base)

    def to_int(self) -> int:
        if self.bits() > MAX_MATERIALIZE_BITS:
            raise RangeOverflow(
                f"{self.base}**{self.exponent} is too large to materialize exactly"
            )
        return self.base ** self.exponent


Multiplicity = Union[int, BigPower]


def mult_log(m: Multiplicity) -> float:
    """Natural log of a multiplicity descriptor (big ints are fine)."""
    if isinstance(m, BigPower):
        return m.log()
    if m < 1:
        raise PreconditionError("multiplicity must be >= 1")
    return math.log(m)


def mult_bits(m: Multiplicity) -> float:
    if isinstance(m, BigPower):
        return m.bits()
    return m.bit_length()


def mult_to_int(m: Multiplicity) -> int:
    return m.to_int() if isinstance(m, BigPower) else m


def _logaddexp(a: float, b: float) -> float:
    if a < b:
        a, b = b, a
    return a + math.log1p(math.exp(b - a))


def _logsumexp(values) -> float:
    vals = list(values)
    if not vals:
        return float("-inf")
    m = max(vals)
    return m + math.log(math.fsum(math.exp(v - m) for v in vals))


def _kahan(terms) -> float:
    total = 0.0
    comp = 0.0
    for v in terms:
        y = v - comp
        t = total + y
        comp = (t - total) - y
        total = t
    return total


class DirichletSeries:
    """Immutable truncated series: sorted dims, parallel multiplicities."""

    __slots__ = ("cutoff", "backend", "_dims", "_mults")

    def __init__(self, cutoff: int, entries, backend: str = EXACT):
        if cutoff < 1:
            raise PreconditionError("cutoff must be a positive integer")
        if backend not in (EXACT, LOG):
            raise PreconditionError(f"unknown backend {backend!r}")
        if isinstance(entries, Mapping):
            items = entries.items()
        else:
            items = entries
        merged: Dict[int, object] = {}
        for d, m in items:
            if d < 1:
                raise PreconditionError(f"dimension {d} is not a positive integer")
            if d > cutoff:
                continue  # truncation silently discards
            if backend == EXACT:
                if not isinstance(m, int) or m <= 0:
                    raise PreconditionError(
                        f"exact multiplicity at dim {d} must be a positive integer"
                    )
                merged[d] = merged.get(d, 0) + m
            else:
                m = float(m)
                if not math.isfinite(m):
                    raise PreconditionError(f"log multiplicity at dim {d} must be finite")
                prev = merged.get(d)
                merged[d] = m if prev is None else _logaddexp(prev, m)
        dims = sorted(merged)
        object.__setattr__(self, "cutoff", cutoff)
        object.__setattr__(self, "backend", backend)
        object.__setattr__(self, "_dims", tuple(dims))
        object.__setattr__(self, "_mults", tuple(merged[d] for d in dims))

    def __setattr__(self, name, value):  # immutable
        raise AttributeError("DirichletSeries is immutable")

    @classmethod
    def one(cls, cutoff: int, backend: str = EXACT) -> "DirichletSeries":
        """The multiplicative identity {1 -> 1}."""
        return cls(cutoff, {1: 1 if backend == EXACT else 0.0}, backend)

    @property
    def dims(self) -> Tuple[int, ...]:
        return self._dims

    @property
    def mults(self) -> Tuple:
        return self._mults

    def items(self) -> Iterator[Tuple[int, object]]:
        return zip(self._dims, self._mults)

    def __len__(self) -> int:
        return len(self._dims)

    def __bool__(self) -> bool:
        return bool(self._dims)

    def mult_at(self, d: int, default=None):
        i = bisect_right(self._dims, d) - 1
        if i >= 0 and self._dims[i] == d:
            return self._mults[i]
        return default

    def min_dim(self) -> Optional[int]:
        return self._dims[0] if self._dims else None

    def without_dim_one(self) -> "DirichletSeries":
        return DirichletSeries(
            self.cutoff,
            ((d, m) for d, m in self.items() if d != 1),
            self.backend,
        )

    def restrict(self, cutoff: int) -> "DirichletSeries":
        return DirichletSeries(cutoff, self.items(), self.backend)

    def to_log(self) -> "DirichletSeries":
        """Explicit exact -> log conversion (never done implicitly)."""
        if self.backend == LOG:
            return self
        return DirichletSeries(
            self.cutoff, ((d, math.log(m)) for d, m in self.items()), LOG
        )

    def total_mass(self):
        """Sum of all multiplicities; natural log of it on the log backend."""
        if self.backend == EXACT:
            return sum(self._mults)
        return _logsumexp(self._mults)

    def __eq__(self, other) -> bool:
        if not isinstance(other, DirichletSeries):
            return NotImplemented
        return (
            self.backend == other.backend
            and self.cutoff == other.cutoff
            and self._dims == other._dims
            and self._mults == other._mults
        )

    def __hash__(self):
        return hash((self.backend, self.cutoff, self._dims, self._mults))

    def __repr__(self) -> str:
        head = ", ".join(f"{d}:{m}" for d, m in list(self.items())[:6])
        tail = ", ..." if len(self) > 6 else ""
        return f"DirichletSeries(N={self.cutoff}, {self.backend}, {{{head}{tail}}})"

    def to_jsonable(self) -> dict:
        entries = [
            [str(d), str(m) if self.backend == EXACT else float(m)]
            for d, m in self.items()
        ]
        return {"cutoff": self.cutoff, "backend": self.backend, "entries": entries}

    @classmethod
    def from_jsonable(cls, obj: dict) -> "DirichletSeries":
        backend = obj["backend"]
        if backend == EXACT:
            entries = ((int(d), int(m)) for d, m in obj["entries"])
        else:
            entries = ((int(d), float(m)) for d, m in obj["entries"])
        return cls(int(obj["cutoff"]), entries, backend)


def evaluate(s: DirichletSeries, sigma: float) -> float:
    """Sum mult * dim^(-sigma) with compensated (Kahan) summation.

    sigma = 0 is allowed (the total mass, e.g. a class number); terms that
    leave double range raise :class:`RangeOverflow` (the caller may convert
    to the log backend), terms that underflow contribute 0.
    """
    if sigma < 0:
        raise PreconditionError("sigma must be nonnegative")

    def terms():
        for d, m in s.items():
            if s.backend == LOG:
                lt = m - sigma * math.log(d)
                if lt > 709.0:
                    raise RangeOverflow("value exceeds double range at this sigma")
                yield math.exp(lt) if lt > -745.0 else 0.0
                continue
            if m.bit_length() <= 53 and d.bit_length() <= 53:
                yield m * float(d) ** (-sigma)
                continue
            lt = math.log(m) - sigma * math.log(d)
            if lt > 709.0:
                raise RangeOverflow(
                    "term exceeds double range; evaluate on the log backend"
                )
            yield math.exp(lt) if lt > -745.0 else 0.0

    return _kahan(terms())


def convolve(s1: DirichletSeries, s2: DirichletSeries, N: int) -> DirichletSeries:
    """Dirichlet product truncated at N: entry at d is sum over d1*d2 = d."""
    if s1.backend != s2.backend:
        raise BackendMismatch("cannot convolve series with different backends")
    if N > min(s1.cutoff, s2.cutoff):
        raise PreconditionError("convolution target N exceeds an input cutoff")
    exact = s1.backend == EXACT
    acc: Dict[int, object] = {}
    if s1 and s2:
        d2s, m2s = s2.dims, s2.mults
        d2min = d2s[0]
        for d1, m1 in s1.items():
            if d1 * d2min > N:
                break  # dims sorted, nothing further fits
            for d2, m2 in zip(d2s, m2s):
                p = d1 * d2
                if p > N:
                    break
                if exact:
                    acc[p] = acc.get(p, 0) + m1 * m2
                else:
                    v = m1 + m2
                    prev = acc.get(p)
                    acc[p] = v if prev is None else _logaddexp(prev, v)
    return DirichletSeries(N, acc, s1.backend)


def _log_binomial(M: Multiplicity, k: int) -> float:
    """log C(M, k) = sum_{i<k} log((M-i)/(i+1)), usable for huge M."""
    if isinstance(M, BigPower):
        if M.bits() <= 900:  # comfortably materializable, stay accurate
            M = M.to_int()
        else:
            lM = M.log()
            # (M - i)/M differs from 1 by < k/M, far below double resolution here
            return k * lM - math.fsum(math.log(i + 1.0) for i in range(k))
    if k > M:
        return float("-inf")
    return math.fsum(math.log(M - i) - math.log(i + 1.0) for i in range(k))


def power_one_plus(base: DirichletSeries, M: Multiplicity, N: int) -> DirichletSeries:
    """(1 + x)^M truncated at N, for base = 1 + x with x supported on dims >= 2.

    Every nontrivial dimension is >= 2, so only k <= log2(N) powers of x can
    contribute; the exact backend uses exact binomials, the log backend the
    identity log C(M,k) = sum_{i<k} log((M-i)/(i+1)).
    """
    if N > base.cutoff:
        raise PreconditionError("power target N exceeds the base cutoff")
    exact = base.backend == EXACT
    unit = base.mult_at(1)
    if exact and unit != 1:
        raise PreconditionError("base must have constant term exactly 1")
    if not exact and unit != 0.0:
        raise PreconditionError("base must have constant term exactly 1 (log 0.0)")
    if isinstance(M, int):
        if M < 1:
            raise PreconditionError("power M must be >= 1")
    x = base.without_dim_one().restrict(N)
    out: Dict[int, object] = {1: 1 if exact else 0.0}
    if not x:
        return DirichletSeries(N, out, base.backend)
    Mi = mult_to_int(M) if exact else None
    xk = None
    k = 0
    while True:
        k += 1
        if isinstance(M, int) and k > M:
            break
        xk = x if k == 1 else convolve(xk, x, N)
        if not xk:
            break
        if exact:
            c = math.comb(Mi, k)
            if c == 0:
                break
            for d, m in xk.items():
                out[d] = out.get(d, 0) + c * m
        else:
            lc = _log_binomial(M, k)
            if lc == float("-inf"):
                break
            for d, m in xk.items():
                v = lc + m
                prev = out.get(d)
                out[d] = v if prev is None else _logaddexp(prev, v)
    return DirichletSeries(N, out, base.backend)


def cumulative(s: DirichletSeries, n: int):
    """R_n = sum of multiplicities at dims <= n.

    Exact backend returns the integer count; the log backend returns the
    natural log of the count, combined by log-sum-exp.  Refuses n beyond the
    cutoff: the truncation makes the answer unknown there.
    """
    if n < 1:
        raise PreconditionError("n must be a positive integer")
    if n > s.cutoff:
        raise PreconditionError(
            f"cumulative at n={n} exceeds the truncation cutoff {s.cutoff}"
        )
    idx = bisect_right(s.dims, n)
    if s.backend == EXACT:
        return sum(s.mults[:idx])
    return _logsumexp(s.mults[:idx])


def log_cumulative(s: DirichletSeries, n: int) -> float:
    """ln R_n on either backend (-inf if nothing counts yet)."""
    r = cumulative(s, n)
    if s.backend == LOG:
        return r
    return math.log(r) if r > 0 else float("-inf")
