"""Finite groups as multiplication oracles and their induced sign actions.

A GroupOracle is a group on ids 0..order-1 (0 = identity) given by a Cayley
table or a callback.  MonomialRep realizes the representation induced from a
+-1 character of a subgroup as signed permutations of the left cosets; the
fixed-point structure of the action on a product of unit spheres is then a
purely combinatorial matter: an element fixes a sphere point iff some cycle
of its signed permutation has sign product +1, and no floating point is ever
involved.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, NamedTuple, Optional, Sequence

from .errors import GuardExceeded, SchemaError
from .phigroup import PhiGroup

ASSOCIATIVITY_GUARD = 512  # full structural validation below this order
ORDER_GUARD = 1 << 16
ISOTROPY_GUARD = 4096


class GroupOracle:
    """Finite group on integer ids with id 0 the identity."""

    def __init__(
        self,
        order: int,
        mul: Callable[[int, int], int],
        provenance: str,
        validate: bool = True,
    ):
        if not 1 <= order <= ORDER_GUARD:
            raise ValueError(f"order must be in 1..{ORDER_GUARD}")
        self.order = order
        self._mul = mul
        self.provenance = provenance
        self.phi = None  # set for phi_group provenance
        self._inv: dict[int, int] = {0: 0}
        if validate and order <= ASSOCIATIVITY_GUARD:
            self._validate()

    # -- construction ----------------------------------------------------

    @classmethod
    def from_table(cls, table: Sequence[Sequence[int]], validate: bool = True) -> GroupOracle:
        order = len(table)
        failing = []
        if any(len(row) != order for row in table):
            failing.append("mul: table must be square")
        elif any(not 0 <= e < order for row in table for e in row):
            failing.append("mul: entries must be ids in 0..order-1")
        if failing:
            raise SchemaError(failing)
        rows = [tuple(row) for row in table]
        return cls(order, lambda i, j: rows[i][j], "cayley_table", validate=validate)

    @classmethod
    def from_phi_group(cls, G: PhiGroup) -> GroupOracle:
        n, t = G.n, G.t
        amask = (1 << n) - 1
        lower_rows = [lo.row_bits() for lo in G.fam.lower]
        folds: dict[int, list[int]] = {}  # a-part -> per-form row fold, lazily

        def fold(a: int) -> list[int]:
            cached = folds.get(a)
            if cached is None:
                cached = []
                for rows in lower_rows:
                    acc = 0
                    bits = a
                    while bits:
                        low = bits & -bits
                        acc ^= rows[low.bit_length() - 1]
                        bits ^= low
                    cached.append(acc)
                folds[a] = cached
            return cached

        def mul(i: int, j: int) -> int:
            a1, a2 = i & amask, j & amask
            beta = 0
            for s, acc in enumerate(fold(a1)):
                beta |= ((acc & a2).bit_count() & 1) << s
            return (a1 ^ a2) | ((i >> n) ^ (j >> n) ^ beta) << n

        oracle = cls(G.order, mul, "phi_group")
        oracle.phi = G
        return oracle

    # -- validation --------------------------------------------------------

    def _validate(self) -> None:
        n = self.order
        for g in range(n):
            if self._mul(0, g) != g or self._mul(g, 0) != g:
                raise ValueError("id 0 is not a two-sided identity")
        for g in range(n):
            row = sorted(self._mul(g, h) for h in range(n))
            col = sorted(self._mul(h, g) for h in range(n))
            if row != list(range(n)) or col != list(range(n)):
                raise ValueError(f"row/column of element {g} is not a permutation")
        for g in range(n):
            h = next(h for h in range(n) if self._mul(g, h) == 0)
            if self._mul(h, g) != 0:
                raise ValueError(f"element {g} has no two-sided inverse")
            self._inv[g] = h
        # Light's associativity test on a generating set
        gens = self._generating_set()
        for s in gens:
            for a in range(n):
                a_s = self._mul(a, s)
                for b in range(n):
                    if self._mul(a, self._mul(s, b)) != self._mul(a_s, b):
                        raise ValueError("multiplication is not associative")

    def _generating_set(self) -> list[int]:
        gens: list[int] = []
        closure = {0}
        for g in range(1, self.order):
            if g in closure:
                continue
            gens.append(g)
            frontier = [g]
            while frontier:
                x = frontier.pop()
                if x in closure:
                    continue
                closure.add(x)
                frontier.extend(self._mul(x, h) for h in list(closure))
                frontier.extend(self._mul(h, x) for h in list(closure))
        return gens

    # -- arithmetic ---------------------------------------------------------

    def mul(self, i: int, j: int) -> int:
        return self._mul(i, j)

    def inv(self, i: int) -> int:
        if i not in self._inv:
            acc = i
            while True:
                nxt = self._mul(acc, i)
                if nxt == 0:
                    break
                acc = nxt
            self._inv[i] = acc
        return self._inv[i]

    def element_order(self, i: int) -> int:
        k, acc = 1, i
        while acc != 0:
            acc = self._mul(acc, i)
            k += 1
        return k

    def involutions(self) -> list[int]:
        return [g for g in range(1, self.order) if self._mul(g, g) == 0]

    def closure(self, gens: Sequence[int]) -> list[int]:
        """Sorted element ids of the subgroup generated by gens."""
        for g in gens:
            if not 0 <= g < self.order:
                raise ValueError(f"element id {g} out of range")
        elems = {0}
        frontier = [0]
        while frontier:
            x = frontier.pop()
            for g in gens:
                y = self._mul(x, g)
                if y not in elems:
                    elems.add(y)
                    frontier.append(y)
        return sorted(elems)

    def to_table(self) -> list[list[int]]:
        if self.order > 4096:
            raise GuardExceeded("to_table", "order too large to materialize")
        return [[self._mul(i, j) for j in range(self.order)] for i in range(self.order)]


def is_two_central(G: GroupOracle) -> bool:
    """True iff every involution commutes with every element."""
    for g in G.involutions():
        for h in range(G.order):
            if G.mul(g, h) != G.mul(h, g):
                return False
    return True


# -- stock Cayley tables ------------------------------------------------------


def cyclic_table(m: int) -> list[list[int]]:
    return [[(i + j) % m for j in range(m)] for i in range(m)]


def elementary_abelian_table(r: int) -> list[list[int]]:
    n = 1 << r
    return [[i ^ j for j in range(n)] for i in range(n)]


_QUAT_UNITS = (
    ((0, 1), (1, 1), (2, 1), (3, 1)),
    ((1, 1), (0, -1), (3, 1), (2, -1)),
    ((2, 1), (3, -1), (0, -1), (1, 1)),
    ((3, 1), (2, 1), (1, -1), (0, -1)),
)


def quaternion_table() -> list[list[int]]:
    """Q8 with ids 0..7 encoding (+-1, +-i, +-j, +-k) as 2*unit + signbit."""

    def mul(x: int, y: int) -> int:
        u1, s1 = x >> 1, x & 1
        u2, s2 = y >> 1, y & 1
        u, s = _QUAT_UNITS[u1][u2]
        sign = (s1 + s2 + (1 if s == -1 else 0)) & 1
        return (u << 1) | sign

    return [[mul(i, j) for j in range(8)] for i in range(8)]


# -- induced monomial representations -----------------------------------------


@dataclass(frozen=True)
class SignedPermutation:
    dim: int
    image: tuple[int, ...]
    signs: tuple[int, ...]  # entries +-1

    def __post_init__(self):
        if sorted(self.image) != list(range(self.dim)):
            raise ValueError("image is not a bijection")


class MonomialRep:
    """Representation induced from a +-1 character of a subgroup.

    Basis vectors are indexed by the left cosets of C, enumerated with the
    smallest unused element id as representative: g . e_r = chi(c) e_r'
    where g * rep_r = rep_r' * c.
    """

    def __init__(self, group: GroupOracle, c_gens: Sequence[int], character_on_gens: Sequence[int]):
        if len(c_gens) != len(character_on_gens):
            raise ValueError("one character value per generator required")
        if any(v not in (1, -1) for v in character_on_gens):
            raise ValueError("character values must be +1 or -1")
        char_on_gens: dict[int, int] = {}
        for g, v in zip(c_gens, character_on_gens):
            if char_on_gens.setdefault(g, v) != v:
                raise ValueError("inconsistent character on the subgroup")
        self.group = group
        self.subgroup_gens = tuple(c_gens)
        elems = group.closure(c_gens)
        self.subgroup = tuple(elems)
        self.character = self._extend_character(char_on_gens)
        self.cosets, self._loc = self._enumerate_cosets()
        self.dim = group.order // len(self.subgroup)
        self._traces: dict[int, int] = {}

    def _extend_character(self, char_on_gens: dict[int, int]) -> dict[int, int]:
        G = self.group
        chi = {0: 1}
        frontier = [0]
        while frontier:
            x = frontier.pop()
            for g, cg in char_on_gens.items():
                y = G.mul(x, g)
                val = chi[x] * cg
                if y in chi:
                    if chi[y] != val:
                        raise ValueError("inconsistent character on the subgroup")
                else:
                    chi[y] = val
                    frontier.append(y)
        # closure-consistency on every (element, generator) edge extends to all
        # products by induction on word length
        for x in self.subgroup:
            for g, cg in char_on_gens.items():
                if chi[G.mul(x, g)] != chi[x] * cg:
                    raise ValueError("inconsistent character on the subgroup")
        return chi

    def _enumerate_cosets(self) -> tuple[tuple[int, ...], dict[int, tuple[int, int]]]:
        G = self.group
        loc: dict[int, tuple[int, int]] = {}
        reps = []
        for g in range(G.order):
            if g in loc:
                continue
            idx = len(reps)
            reps.append(g)
            for c in self.subgroup:
                loc[G.mul(g, c)] = (idx, c)
        return tuple(reps), loc

    def action(self, g: int) -> SignedPermutation:
        image = []
        signs = []
        for rep in self.cosets:
            idx, c = self._loc[self.group.mul(g, rep)]
            image.append(idx)
            signs.append(self.character[c])
        return SignedPermutation(self.dim, tuple(image), tuple(signs))

    def trace(self, g: int) -> int:
        if g not in self._traces:
            sp = self.action(g)
            self._traces[g] = sum(
                s for i, (im, s) in enumerate(zip(sp.image, sp.signs)) if im == i
            )
        return self._traces[g]

    def __repr__(self) -> str:
        return f"MonomialRep(dim={self.dim}, |C|={len(self.subgroup)})"


def build_induced(
    G: GroupOracle, c_gens: Sequence[int], character_on_gens: Sequence[int]
) -> MonomialRep:
    return MonomialRep(G, c_gens, character_on_gens)


def has_plus_one_eigenvalue(rep: MonomialRep, g: int) -> bool:
    """True iff the signed permutation of g has a cycle with sign product +1."""
    sp = rep.action(g)
    seen = [False] * sp.dim
    for start in range(sp.dim):
        if seen[start]:
            continue
        prod = 1
        i = start
        while not seen[i]:
            seen[i] = True
            prod *= sp.signs[i]
            i = sp.image[i]
        if prod == 1:
            return True
    return False


def _fixed_dim_over(rep: MonomialRep, elements: Sequence[int]) -> int:
    total = sum(rep.trace(h) for h in elements)
    if total < 0 or total % len(elements):
        raise AssertionError("character sum is not a nonnegative multiple of |H|")
    return total // len(elements)


def fixed_subspace_dim(rep: MonomialRep, h_gens: Sequence[int]) -> int:
    """Dimension of the subspace fixed by <h_gens>: (1/|H|) sum of traces."""
    return _fixed_dim_over(rep, rep.group.closure(h_gens))


class FreenessResult(NamedTuple):
    free: bool
    witness: Optional[int]  # smallest non-identity id fixing a product point


def is_free_on_product(G: GroupOracle, reps: Sequence[MonomialRep]) -> FreenessResult:
    """Freeness of the diagonal action on the product of unit spheres.

    g fixes a product point iff it has a +1 eigenvalue on every factor
    (fixed points on distinct factors are independent).
    """
    if any(rep.group is not G for rep in reps):
        raise ValueError("all representations must live over the given group")
    for g in range(1, G.order):
        if all(has_plus_one_eigenvalue(rep, g) for rep in reps):
            return FreenessResult(False, g)
    return FreenessResult(True, None)


class IsotropyResult(NamedTuple):
    rank: int
    witness_gens: tuple[int, ...]


def max_isotropy_rank(G: GroupOracle, reps: Sequence[MonomialRep]) -> IsotropyResult:
    """Largest rank of an elementary abelian subgroup fixing a product point.

    H fixes a point iff every factor has positive H-fixed dimension.  The
    search walks the commuting-involution graph, extending subgroups only
    while the fixed-point condition holds (it is hereditary downward).
    """
    if G.order > ISOTROPY_GUARD:
        raise GuardExceeded("max_isotropy_rank", f"order {G.order} exceeds {ISOTROPY_GUARD}")
    if any(rep.group is not G for rep in reps):
        raise ValueError("all representations must live over the given group")

    # trace sums per factor carry down the search: sum over H equals
    # |H| * fixed dim, so H fixes a product point iff every sum is positive
    invs = [
        g
        for g in G.involutions()
        if all(rep.trace(0) + rep.trace(g) > 0 for rep in reps)
    ]
    best = IsotropyResult(0, ())
    visited: set[frozenset] = set()

    def dfs(gens: tuple[int, ...], elements: list[int], sums: list[int], cand: list[int]) -> None:
        nonlocal best
        rank = len(elements).bit_length() - 1
        if rank > best.rank:
            best = IsotropyResult(rank, gens)
        for k, v in enumerate(cand):
            if v in set(elements):
                continue
            coset = [G.mul(e, v) for e in elements]
            key = frozenset(elements) | frozenset(coset)
            if key in visited:
                continue
            visited.add(key)
            new_sums = [s + sum(rep.trace(x) for x in coset) for s, rep in zip(sums, reps)]
            if any(s <= 0 for s in new_sums):
                continue
            new_cand = [w for w in cand[k + 1 :] if G.mul(v, w) == G.mul(w, v)]
            dfs(gens + (v,), sorted(key), new_sums, new_cand)

    dfs((), [0], [rep.trace(0) for rep in reps], invs)
    return best
