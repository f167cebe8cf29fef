"""Exact character-degree multisets for SL2(q) and PSL2(q).

The degree families are the classical closed forms; every constructed table
is guarded by the column-orthogonality mass identity sum(mult * d^2) = |G|,
which catches any transcription slip in the formulas.  q = 2, 3 are
rejected outright (the groups there are not quasi-simple).
"""
from __future__ import annotations

import io
import csv
from dataclasses import dataclass
from math import gcd
from typing import Dict, Iterator, Optional, Tuple

from .dirichlet import EXACT, DirichletSeries
from .errors import InvariantError, PreconditionError


def prime_power(q: int) -> Optional[Tuple[int, int]]:
    """(p, k) with q = p^k, or None.  Trial factorization; smooth values are
    recognized immediately, desk-scale primes need a sqrt(q) scan."""
    if q < 2:
        return None
    p = None
    m = q
    d = 2
    while d * d <= m:
        if m % d == 0:
            p = d
            break
        d += 1 if d == 2 else 2
    if p is None:
        return (q, 1)
    k = 0
    while m % p == 0:
        m //= p
        k += 1
    return (p, k) if m == 1 else None


def is_prime(n: int) -> bool:
    pk = prime_power(n)
    return pk is not None and pk[1] == 1


def primes_from(start: int) -> Iterator[int]:
    """Primes >= start in increasing order."""
    n = max(2, start)
    while True:
        if is_prime(n):
            yield n
        n += 1


@dataclass(frozen=True)
class DegreeTable:
    """Character degrees with multiplicities for a fixed group."""

    group: str  # "SL2" | "PSL2" | "Trivial"
    q: int
    degrees: Tuple[Tuple[int, int], ...]  # sorted (degree, multiplicity)
    order: int

    def __post_init__(self):
        mass = sum(m * d * d for d, m in self.degrees)
        if mass != self.order:
            raise InvariantError(
                f"{self.group}({self.q}): sum d^2*mult = {mass} != order {self.order}"
            )
        if dict(self.degrees).get(1) != 1:
            raise InvariantError(f"{self.group}({self.q}): need exactly one linear character")

    def mult(self, d: int) -> int:
        return dict(self.degrees).get(d, 0)

    def num_characters(self) -> int:
        return sum(m for _, m in self.degrees)

    def degree_dict(self) -> Dict[int, int]:
        return dict(self.degrees)


TRIVIAL = DegreeTable("Trivial", 1, ((1, 1),), 1)


def sl2_order(q: int) -> int:
    return q * (q * q - 1)


def psl2_order(q: int) -> int:
    return sl2_order(q) // gcd(2, q - 1)


def _check_q(q: int) -> None:
    pk = prime_power(q)
    if pk is None:
        raise PreconditionError(f"q = {q} is not a prime power")
    if q < 4:
        raise PreconditionError(f"q = {q} is excluded: SL2(2), SL2(3) are not quasi-simple")


def _table(group: str, q: int, raw: Dict[int, int], order: int) -> DegreeTable:
    degrees = tuple(sorted((d, m) for d, m in raw.items() if m > 0))
    return DegreeTable(group, q, degrees, order)


def sl2_table(q: int) -> DegreeTable:
    """SL2(q) degrees.  Odd q: 1, q, (q+1) x (q-3)/2, (q-1) x (q-1)/2 and the
    four half-discrete-series characters of degrees (q+-1)/2.  Even q:
    SL2(q) = PSL2(q) with 1, q, (q+1) x (q/2-1), (q-1) x q/2."""
    _check_q(q)
    if q % 2 == 0:
        raw = {1: 1, q: 1, q + 1: q // 2 - 1, q - 1: q // 2}
    else:
        raw = {1: 1, q: 1, q + 1: (q - 3) // 2, q - 1: (q - 1) // 2}
        raw[(q + 1) // 2] = raw.get((q + 1) // 2, 0) + 2
        raw[(q - 1) // 2] = raw.get((q - 1) // 2, 0) + 2
    return _table("SL2", q, raw, sl2_order(q))


def psl2_table(q: int) -> DegreeTable:
    """PSL2(q) degrees; the odd case splits on q mod 4 (which of the two
    half-degree pairs survives the central quotient)."""
    _check_q(q)
    if q % 2 == 0:
        raw = {1: 1, q: 1, q + 1: q // 2 - 1, q - 1: q // 2}
    elif q % 4 == 1:
        raw = {1: 1, q: 1, q - 1: (q - 1) // 4, q + 1: (q - 5) // 4}
        raw[(q + 1) // 2] = raw.get((q + 1) // 2, 0) + 2
    else:
        raw = {1: 1, q: 1, q - 1: (q - 3) // 4, q + 1: (q - 3) // 4}
        raw[(q - 1) // 2] = raw.get((q - 1) // 2, 0) + 2
    return _table("PSL2", q, raw, psl2_order(q))


def min_nontrivial_degree(t: DegreeTable) -> int:
    """Smallest degree above 1; the dimension at which the group first
    contributes to any multiplicity count."""
    for d, _ in t.degrees:
        if d > 1:
            return d
    raise PreconditionError(f"{t.group}({t.q}) has no nontrivial character")


def cover_degree_check(q: int) -> bool:
    """The covering-degree inequality at A1 scale: the simple quotient has a
    nontrivial character of degree <= (cover's minimal degree)^2 - 1."""
    d_cover = min_nontrivial_degree(sl2_table(q))
    d_simple = min_nontrivial_degree(psl2_table(q))
    return d_simple <= d_cover * d_cover - 1


def zeta_series(t: DegreeTable, N: int, backend: str = EXACT) -> DirichletSeries:
    """The degree data as an exact truncated series (dims > N dropped)."""
    s = DirichletSeries(N, {d: m for d, m in t.degrees}, EXACT)
    return s.to_log() if backend != EXACT else s


def table_to_jsonable(t: DegreeTable) -> dict:
    return {
        "group": t.group,
        "q": t.q,
        "order": str(t.order),
        "degrees": [[d, m] for d, m in t.degrees],
    }


def table_to_csv(t: DegreeTable) -> str:
    buf = io.StringIO()
    w = csv.writer(buf)
    w.writerow(["degree", "multiplicity"])
    for d, m in t.degrees:
        w.writerow([d, m])
    return buf.getvalue()
