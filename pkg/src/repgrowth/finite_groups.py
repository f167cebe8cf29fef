"""Exhaustive oracles on tiny concrete groups: generating-tuple counts
(Eulerian functions), automorphism counts by homomorphism extension, and
the minimal generator number of cartesian powers of a simple group.

Everything here is exact enumeration by design: the statements being
verified are exact, so exact verification beats sampling.
"""
from __future__ import annotations

import random
from typing import Dict, FrozenSet, List, Optional, Sequence, Tuple

from .errors import BudgetExceededError, InvariantError, PreconditionError

ORDER_LIMIT = 2000
TUPLE_BUDGET = 10 ** 8
AUT_ORDER_LIMIT = 400


def _compose(p1: tuple, p2: tuple) -> tuple:
    # (p1*p2)(i) = p1(p2(i))
    return tuple(p1[p2[i]] for i in range(len(p1)))


def _mat_mul(a: tuple, b: tuple, p: int) -> tuple:
    (a11, a12), (a21, a22) = a
    (b11, b12), (b21, b22) = b
    return (
        ((a11 * b11 + a12 * b21) % p, (a11 * b12 + a12 * b22) % p),
        ((a21 * b11 + a22 * b21) % p, (a21 * b12 + a22 * b22) % p),
    )


class ConcreteGroup:
    """A finite group as an explicit multiplication table over element
    indices; immutable after construction and safe to share."""

    def __init__(self, name: str, elements: List, mul, identity):
        if len(elements) > ORDER_LIMIT:
            raise PreconditionError(f"group order {len(elements)} exceeds {ORDER_LIMIT}")
        self.name = name
        self.order = len(elements)
        index = {e: i for i, e in enumerate(elements)}
        if len(index) != self.order:
            raise PreconditionError("duplicate elements")
        self.identity = index[identity]
        self.table: List[List[int]] = [
            [index[mul(x, y)] for y in elements] for x in elements
        ]
        self.inverse: List[int] = [0] * self.order
        for i, row in enumerate(self.table):
            self.inverse[i] = row.index(self.identity)
        self._spot_check_associativity()
        # caches shared across the counting operations
        self._sub_index: Dict[FrozenSet[int], int] = {}
        self._sub_sets: List[FrozenSet[int]] = []
        self._sub_gens: List[Tuple[int, ...]] = []
        self._extend_cache: Dict[Tuple[int, int], int] = {}
        self._count_cache: Dict[Tuple[int, int], int] = {}
        self._phi_cache: Dict[int, int] = {}
        self._aut_cache: Optional[int] = None
        self._simple_cache: Optional[bool] = None

    def _spot_check_associativity(self) -> None:
        # construction sources are associative by design; this guards typos
        rng = random.Random(0)
        n = self.order
        t = self.table
        for _ in range(1000):
            a, b, c = rng.randrange(n), rng.randrange(n), rng.randrange(n)
            if t[t[a][b]][c] != t[a][t[b][c]]:
                raise InvariantError("multiplication table is not associative")

    def mul(self, a: int, b: int) -> int:
        return self.table[a][b]

    def element_order(self, a: int) -> int:
        k, x = 1, a
        while x != self.identity:
            x = self.table[x][a]
            k += 1
        return k

    def closure(self, gens: Sequence[int]) -> FrozenSet[int]:
        """Subgroup generated by gens: BFS over right multiplication.
        Finite groups need no explicit inverses (inverse = power)."""
        gens = [g for g in gens if g != self.identity]
        if not gens:
            return frozenset((self.identity,))
        seen = {self.identity}
        seen.update(gens)
        queue = [self.identity] + list(dict.fromkeys(gens))
        t = self.table
        qi = 0
        while qi < len(queue):
            x = queue[qi]
            qi += 1
            for g in gens:
                y = t[x][g]
                if y not in seen:
                    seen.add(y)
                    queue.append(y)
        return frozenset(seen)

    def conjugacy_classes(self) -> List[FrozenSet[int]]:
        remaining = set(range(self.order))
        out = []
        t = self.table
        while remaining:
            x = min(remaining)
            cls = {t[t[g][x]][self.inverse[g]] for g in range(self.order)}
            out.append(frozenset(cls))
            remaining -= cls
        return out

    def is_nonabelian_simple(self) -> bool:
        """Simple iff the normal closure of every nontrivial class is the
        whole group (normal subgroups are unions of classes)."""
        if self._simple_cache is None:
            abelian = all(
                self.table[a][b] == self.table[b][a]
                for a in range(self.order)
                for b in range(a)
            )
            if abelian:
                self._simple_cache = False
            else:
                self._simple_cache = all(
                    len(self.closure(tuple(cls))) == self.order
                    for cls in self.conjugacy_classes()
                    if cls != frozenset((self.identity,))
                )
        return self._simple_cache

    # -- subgroup registry for the tuple-count recursion ------------------

    def _register(self, sub: FrozenSet[int], gens: Tuple[int, ...]) -> int:
        sid = self._sub_index.get(sub)
        if sid is None:
            sid = len(self._sub_sets)
            self._sub_index[sub] = sid
            self._sub_sets.append(sub)
            self._sub_gens.append(gens)
        return sid

    def _extend(self, sid: int, z: int) -> int:
        key = (sid, z)
        nid = self._extend_cache.get(key)
        if nid is None:
            if z in self._sub_sets[sid]:
                nid = sid
            else:
                gens = self._sub_gens[sid] + (z,)
                nid = self._register(self.closure(gens), gens)
            self._extend_cache[key] = nid
        return nid

    def __repr__(self):
        return f"ConcreteGroup({self.name}, order={self.order})"


def permutation_group(name: str, gens: Sequence[tuple]) -> ConcreteGroup:
    n = len(gens[0])
    if n > 8:
        raise PreconditionError("permutation degree capped at 8 points")
    identity = tuple(range(n))
    elements = [identity]
    seen = {identity}
    qi = 0
    while qi < len(elements):
        x = elements[qi]
        qi += 1
        for g in gens:
            y = _compose(x, g)
            if y not in seen:
                seen.add(y)
                elements.append(y)
                if len(elements) > ORDER_LIMIT:
                    raise PreconditionError("closure exceeded the order limit")
    return ConcreteGroup(name, elements, _compose, identity)


def cyclic_group(n: int) -> ConcreteGroup:
    gen = tuple(list(range(1, n)) + [0])
    return permutation_group(f"C{n}", [gen])


def alternating_group_5() -> ConcreteGroup:
    return permutation_group("A5", [(1, 2, 3, 4, 0), (1, 2, 0, 3, 4)])


def sl2_group(p: int) -> ConcreteGroup:
    """SL2(F_p) as explicit 2x2 matrices; order p(p^2-1)."""
    if p > 13:
        raise PreconditionError("matrix catalog capped at p <= 13")
    gens = [((1, 1), (0, 1)), ((0, p - 1), (1, 0))]
    identity = ((1, 0), (0, 1))
    elements = [identity]
    seen = {identity}
    qi = 0
    while qi < len(elements):
        x = elements[qi]
        qi += 1
        for g in gens:
            y = _mat_mul(x, g, p)
            if y not in seen:
                seen.add(y)
                elements.append(y)
    G = ConcreteGroup(f"SL2_{p}", elements, lambda a, b: _mat_mul(a, b, p), identity)
    if G.order != p * (p * p - 1):
        raise InvariantError(f"SL2({p}) closure has wrong order {G.order}")
    return G


def psl2_group(p: int) -> ConcreteGroup:
    """PSL2(F_p): matrices modulo +-1, represented by the lexicographically
    smaller of M and -M."""
    if p > 13:
        raise PreconditionError("matrix catalog capped at p <= 13")

    def canon(m: tuple) -> tuple:
        neg = tuple(tuple((-v) % p for v in row) for row in m)
        return min(m, neg)

    def mul(a: tuple, b: tuple) -> tuple:
        return canon(_mat_mul(a, b, p))

    gens = [canon(((1, 1), (0, 1))), canon(((0, p - 1), (1, 0)))]
    identity = canon(((1, 0), (0, 1)))
    elements = [identity]
    seen = {identity}
    qi = 0
    while qi < len(elements):
        x = elements[qi]
        qi += 1
        for g in gens:
            y = mul(x, g)
            if y not in seen:
                seen.add(y)
                elements.append(y)
    G = ConcreteGroup(f"PSL2_{p}", elements, mul, identity)
    expected = p * (p * p - 1) // (2 if p % 2 else 1)
    if G.order != expected:
        raise InvariantError(f"PSL2({p}) closure has wrong order {G.order}")
    return G


_CATALOG = {
    "A5": alternating_group_5,
    "SL2_5": lambda: sl2_group(5),
    "PSL2_7": lambda: psl2_group(7),
    "C2": lambda: cyclic_group(2),
    "C3": lambda: cyclic_group(3),
}
_instances: Dict[str, ConcreteGroup] = {}


def catalog_names() -> Tuple[str, ...]:
    return tuple(sorted(_CATALOG))


def get_group(name: str) -> ConcreteGroup:
    if name not in _CATALOG:
        raise PreconditionError(f"unknown group id {name!r}; catalog: {catalog_names()}")
    if name not in _instances:
        _instances[name] = _CATALOG[name]()
    return _instances[name]


def generating_tuple_count(G: ConcreteGroup, d: int) -> int:
    """phi_d(G): exact number of ordered d-tuples generating G.

    Tuples are enumerated through their closure states, with the closure of
    each (subgroup, extra element) pair cached, so the count is exact while
    the work is proportional to (#subgroup states) * |G| * d.
    """
    if d < 1:
        raise PreconditionError("d must be >= 1")
    if G.order ** d > TUPLE_BUDGET:
        raise PreconditionError(
            f"|G|^d = {G.order}^{d} exceeds the enumeration budget {TUPLE_BUDGET}"
        )
    if d in G._phi_cache:
        return G._phi_cache[d]
    trivial = G._register(frozenset((G.identity,)), ())
    full_size = G.order

    def count(sid: int, r: int) -> int:
        if r == 0:
            return 1 if len(G._sub_sets[sid]) == full_size else 0
        key = (sid, r)
        got = G._count_cache.get(key)
        if got is None:
            got = sum(count(G._extend(sid, z), r - 1) for z in range(G.order))
            G._count_cache[key] = got
        return got

    phi = count(trivial, d)
    G._phi_cache[d] = phi
    return phi


def automorphism_count(G: ConcreteGroup) -> int:
    """|Aut(G)| by brute force: fix one generating pair (a, b) and count the
    images (x, y) whose extension is a bijective homomorphism."""
    if G.order > AUT_ORDER_LIMIT:
        raise PreconditionError(f"automorphism counting capped at order {AUT_ORDER_LIMIT}")
    if G._aut_cache is not None:
        return G._aut_cache
    # pick a of maximal order to keep the candidate pool small
    orders = [G.element_order(i) for i in range(G.order)]
    a = max(range(G.order), key=lambda i: orders[i])
    b = None
    for cand in sorted(range(G.order), key=lambda i: -orders[i]):
        if len(G.closure((a, cand))) == G.order:
            b = cand
            break
    if b is None:
        raise PreconditionError(f"{G.name} is not 2-generated")

    # BFS words over right multiplication by a, b
    parent = [-1] * G.order
    via = [-1] * G.order  # 0 = a, 1 = b
    bfs = [G.identity]
    seen = {G.identity}
    t = G.table
    qi = 0
    while qi < len(bfs):
        x = bfs[qi]
        qi += 1
        for gi, g in enumerate((a, b)):
            y = t[x][g]
            if y not in seen:
                seen.add(y)
                parent[y] = x
                via[y] = gi
                bfs.append(y)

    cand_x = [i for i in range(G.order) if orders[i] == orders[a]]
    cand_y = [i for i in range(G.order) if orders[i] == orders[b]]
    count = 0
    n = G.order
    for x in cand_x:
        for y in cand_y:
            img = (x, y)
            phi = [0] * n
            phi[G.identity] = G.identity
            for g in bfs[1:]:
                phi[g] = t[phi[parent[g]]][img[via[g]]]
            # multiplicativity on generator right-mults extends inductively
            # to all products; bijectivity then makes phi an automorphism
            ok = True
            for h in range(n):
                ph = phi[h]
                if phi[t[h][a]] != t[ph][x] or phi[t[h][b]] != t[ph][y]:
                    ok = False
                    break
            if ok and len(set(phi)) == n:
                count += 1
    G._aut_cache = count
    return count


def min_generators_power(G: ConcreteGroup, k: int) -> int:
    """d(G^k) = min{d >= 2 : phi_d(G)/|Aut G| >= k} for nonabelian simple G.

    phi_d is enumerated on demand while |G|^d stays inside the budget; past
    that the bound phi_{d+1} >= phi_d * |G| certifies the answer when it can,
    otherwise a larger enumeration is genuinely needed.
    """
    if not G.is_nonabelian_simple():
        raise PreconditionError(f"{G.name} is not nonabelian simple")
    if k < 1:
        raise PreconditionError("k must be >= 1")
    aut = automorphism_count(G)
    d = 2
    last_d, last_phi = None, None
    while G.order ** d <= TUPLE_BUDGET:
        phi = generating_tuple_count(G, d)
        if phi // aut >= k:
            return d
        last_d, last_phi = d, phi
        d += 1
    # lower bound on d: even phi_d = |G|^d cannot reach k before this
    d_low = last_d + 1
    while G.order ** d_low < k * aut:
        d_low += 1
    # upper bound: appending arbitrary coordinates keeps tuples generating
    d_up = last_d + 1
    while last_phi * G.order ** (d_up - last_d) < k * aut:
        d_up += 1
    if d_low == d_up:
        return d_low
    raise BudgetExceededError(
        f"needs larger enumeration: d({G.name}^k) is in [{d_low}, {d_up}]"
    )


def counts_jsonable(G: ConcreteGroup, ds: Sequence[int]) -> dict:
    return {
        "group": G.name,
        "phi": {str(d): generating_tuple_count(G, d) for d in ds},
        "aut": automorphism_count(G),
    }
