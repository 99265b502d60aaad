"""Numeric and structural rank bounds, all in exact integer arithmetic.

Covers the free 2-rank of symmetry of products of real projective spaces,
the two dimension bounds for sphere quotients (the linear one and the
conjectured exponential one), the rank condition for the randomized form
search with its headline instance report, and two exhaustive desk-scale
audits of the rank inequalities for permutation and general linear actions.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import permutations
from typing import NamedTuple, Sequence

from .errors import GuardExceeded
from .gf2 import _rref_bits

SMALL_SPHERE_CAVEAT = 7  # the standing assumption wants sphere dims > 7
PERM_AUDIT_GUARD = 7
GL_AUDIT_GUARD = 4


def free_rank_rp(m: int, n: int) -> int:
    """Free 2-rank of symmetry of a product of n copies of RP^m.

    0 for m = 0, 2 mod 4 (Euler characteristic 1), n for m = 1 mod 4,
    2n for m = 3 mod 4.  Values with m <= SMALL_SPHERE_CAVEAT deserve the
    caveat flag reported by the CLI.
    """
    if m < 1 or n < 1:
        raise ValueError("need m >= 1 and n >= 1")
    r = m % 4
    if r in (0, 2):
        return 0
    return n if r == 1 else 2 * n


def browder_min_m(dim_gv: int, t: int) -> int:
    """Least m consistent with dim G/V <= (m+1)t: ceil((dim_gv - t)/t)."""
    if t < 1:
        raise ValueError("need t >= 1")
    if dim_gv <= t:
        return 0
    return -(-(dim_gv - t) // t)


class CarlssonBound(NamedTuple):
    exact: int  # least m with (m+1)^t >= 2^dim_gv, by big-integer search
    paper_weak: int  # 2^(dim_gv // t) - 1, the rounded-down deduction


def carlsson_min_m(dim_gv: int, t: int) -> CarlssonBound:
    """Least m with (m+1)^t >= 2^dim_gv, plus the weaker rounded bound."""
    if t < 1:
        raise ValueError("need t >= 1")
    target = 1 << dim_gv
    lo, hi = 0, 1 << (-(-dim_gv // t))  # (hi+1)^t > (2^ceil(d/t))^t >= 2^d
    while lo < hi:
        mid = (lo + hi) // 2
        if (mid + 1) ** t >= target:
            hi = mid
        else:
            lo = mid + 1
    return CarlssonBound(lo, (1 << (dim_gv // t)) - 1)


def olshanskii_condition(n: int, t: int, k: int) -> bool:
    """The rank condition n < t(k-1)/2, checked as 2n < t(k-1) exactly."""
    if n < 1 or t < 1 or k < 1:
        raise ValueError("inputs must be positive")
    return 2 * n < t * (k - 1)


@dataclass(frozen=True)
class HeadlineReport:
    """Bound arithmetic for a form-search instance (n, t, k).

    T_bound/N_bound describe the extension 1 -> (Z/2)^T -> G -> (Z/2)^N -> 1
    through the rank target t + k - 1; sphere_dim is the induced-sphere
    dimension |G|/2 - 1 = 2^(n+t-1) - 1; the dimension bounds are evaluated
    verbatim at (N_bound, T_bound).
    """

    n: int
    t: int
    k: int
    condition_holds: bool
    T_bound: int
    N_bound: int
    sphere_dim: int
    browder_min_m: int
    carlsson_min_m: CarlssonBound

    def __post_init__(self):
        assert self.T_bound + self.N_bound == self.n + self.t
        assert (self.sphere_dim + 1) == 1 << (self.n + self.t - 1)


def headline_report(n: int, t: int, k: int) -> HeadlineReport:
    T_bound = t + k - 1
    N_bound = n - k + 1
    return HeadlineReport(
        n=n,
        t=t,
        k=k,
        condition_holds=olshanskii_condition(n, t, k),
        T_bound=T_bound,
        N_bound=N_bound,
        sphere_dim=(1 << (n + t - 1)) - 1,
        browder_min_m=browder_min_m(N_bound, T_bound),
        carlsson_min_m=carlsson_min_m(N_bound, T_bound),
    )


# -- desk-scale audits ---------------------------------------------------------


class PermAuditResult(NamedTuple):
    ok: bool
    worst_rank: int  # largest elementary abelian rank found
    worst_orbits: int  # orbit count of a subgroup achieving it
    subgroups_checked: int


def _perm_orbits(elements: Sequence[tuple[int, ...]], n: int) -> int:
    parent = list(range(n))

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for perm in elements:
        for i, j in enumerate(perm):
            ri, rj = find(i), find(j)
            if ri != rj:
                parent[ri] = rj
    return sum(1 for i in range(n) if find(i) == i)


def perm_rank_audit(n: int) -> PermAuditResult:
    """Verify rank <= n - orbits for every elementary abelian 2-subgroup of S_n.

    Exhaustive over the commuting-involution graph with span deduplication;
    the worst case reported is the first subgroup (in search order) of
    maximal rank.
    """
    if n > PERM_AUDIT_GUARD:
        raise GuardExceeded("perm_rank_audit", f"n={n} exceeds guard {PERM_AUDIT_GUARD}")
    identity = tuple(range(n))
    points = list(range(n))
    invs = [
        p
        for p in permutations(points)
        if p != identity and tuple(p[p[i]] for i in points) == identity
    ]

    def compose(a: tuple[int, ...], b: tuple[int, ...]) -> tuple[int, ...]:
        return tuple(a[b[i]] for i in points)

    checked = 0
    worst = (0, n)  # (rank, orbits) with rank 0 for the trivial subgroup
    visited: set[frozenset] = set()

    def audit(elements: frozenset) -> tuple[int, int]:
        rank_h = len(elements).bit_length() - 1
        orbits = _perm_orbits(list(elements), n)
        if rank_h > n - orbits:
            raise AssertionError(f"rank {rank_h} exceeds {n} - {orbits} orbits")
        return rank_h, orbits

    def dfs(elements: frozenset, cand: list) -> None:
        nonlocal checked, worst
        checked += 1
        rank_h, orbits = audit(elements)
        if rank_h > worst[0]:
            worst = (rank_h, orbits)
        for k, v in enumerate(cand):
            if v in elements:
                continue
            new_elements = elements | {compose(e, v) for e in elements}
            if new_elements in visited:
                continue
            visited.add(new_elements)
            new_cand = [w for w in cand[k + 1 :] if compose(v, w) == compose(w, v)]
            dfs(new_elements, new_cand)

    dfs(frozenset({identity}), invs)
    return PermAuditResult(True, worst[0], worst[1], checked)


class GlAuditResult(NamedTuple):
    max_rank_found: int
    bound: int  # floor(n^2 / 4)
    subgroups_checked: int


def _mat_mul(a: tuple[int, ...], b: tuple[int, ...]) -> tuple[int, ...]:
    out = []
    for row in a:
        acc = 0
        bits = row
        while bits:
            low = bits & -bits
            acc ^= b[low.bit_length() - 1]
            bits ^= low
        out.append(acc)
    return tuple(out)


def gl_rank_audit(n: int) -> GlAuditResult:
    """Max elementary abelian rank inside GL(n, 2) versus floor(n^2/4).

    Enumerates invertible matrices, walks commuting sets of involutions
    closed under span, and asserts the quadratic bound.
    """
    if n > GL_AUDIT_GUARD:
        raise GuardExceeded("gl_rank_audit", f"n={n} exceeds guard {GL_AUDIT_GUARD}")
    identity = tuple(1 << i for i in range(n))
    full = 1 << n

    all_matrices = []
    rows_choices = list(range(1, full))

    def build(rows: list[int]) -> None:
        if len(rows) == n:
            all_matrices.append(tuple(rows))
            return
        for r in rows_choices:
            if _reduce_ok(rows, r):
                build(rows + [r])

    def _reduce_ok(rows: list[int], r: int) -> bool:
        return not _in_span(rows, r)

    def _in_span(rows: list[int], r: int) -> bool:
        v = r
        for b in _rref_bits(rows):
            if v & (b & -b):
                v ^= b
        return v == 0

    build([])
    invs = [m for m in all_matrices if m != identity and _mat_mul(m, m) == identity]

    bound = (n * n) // 4
    best = 0
    checked = 0
    visited: set[frozenset] = set()

    def dfs(elements: frozenset, rank_h: int, cand: list) -> None:
        nonlocal best, checked
        checked += 1
        if rank_h > best:
            best = rank_h
            if best > bound:
                raise AssertionError(f"rank {best} exceeds the bound {bound}")
        for k, v in enumerate(cand):
            if v in elements:
                continue
            new_elements = elements | {_mat_mul(e, v) for e in elements}
            if new_elements in visited:
                continue
            visited.add(new_elements)
            # extension by e more dims needs 2^rank (2^e - 1) commuting involutions
            new_cand = [w for w in cand[k + 1 :] if _mat_mul(v, w) == _mat_mul(w, v)]
            dfs(new_elements, rank_h + 1, new_cand)

    dfs(frozenset({identity}), 0, invs)
    return GlAuditResult(best, bound, checked)
