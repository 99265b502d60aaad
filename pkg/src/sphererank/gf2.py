"""Exact linear algebra over GF(2): bit-packed vectors, matrices, subspaces.

Coordinate i of a vector lives at bit position i of an arbitrary-precision
integer (LSB first; equivalently bit i % 64 of 64-bit word i // 64, words
little-endian).  Subspaces carry a canonical reduced-row-echelon basis with
strictly increasing pivot columns, so set-level equality is plain tuple
equality.  Everything here is immutable and pure; no floating point.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Iterable, Iterator, Sequence

from .errors import GuardExceeded

ENUMERATION_GUARD = 16  # max ambient dim for full subspace streams


@dataclass(frozen=True)
class BitVector:
    """Vector in F2^n packed into an int (coordinate i = bit i)."""

    n: int
    bits: int = 0

    def __post_init__(self):
        if self.n < 0:
            raise ValueError("negative dimension")
        if self.bits < 0 or self.bits >> self.n:
            raise ValueError(f"bits set beyond dimension {self.n}")

    @classmethod
    def from_coords(cls, coords: Iterable[int]) -> BitVector:
        coords = list(coords)
        bits = 0
        for i, c in enumerate(coords):
            if c not in (0, 1):
                raise ValueError("coordinates must be 0 or 1")
            bits |= c << i
        return cls(len(coords), bits)

    @classmethod
    def from_string(cls, s: str) -> BitVector:
        """Parse a '0'/'1' string, leftmost character = coordinate 0."""
        if set(s) - {"0", "1"}:
            raise ValueError(f"invalid bit string {s!r}")
        return cls.from_coords(int(ch) for ch in s)

    @classmethod
    def basis(cls, n: int, i: int) -> BitVector:
        if not 0 <= i < n:
            raise ValueError("basis index out of range")
        return cls(n, 1 << i)

    @classmethod
    def zero(cls, n: int) -> BitVector:
        return cls(n, 0)

    def __len__(self) -> int:
        return self.n

    def __getitem__(self, i: int) -> int:
        if not 0 <= i < self.n:
            raise IndexError(i)
        return (self.bits >> i) & 1

    def __xor__(self, other: BitVector) -> BitVector:
        if self.n != other.n:
            raise ValueError("length mismatch")
        return BitVector(self.n, self.bits ^ other.bits)

    __add__ = __xor__  # characteristic 2

    def dot(self, other: BitVector) -> int:
        if self.n != other.n:
            raise ValueError("length mismatch")
        return (self.bits & other.bits).bit_count() & 1

    def weight(self) -> int:
        return self.bits.bit_count()

    def is_zero(self) -> bool:
        return self.bits == 0

    def support(self) -> Iterator[int]:
        bits = self.bits
        while bits:
            low = bits & -bits
            yield low.bit_length() - 1
            bits ^= low

    def words(self) -> tuple[int, ...]:
        """64-bit little-endian words of the packed coordinates."""
        nwords = (self.n + 63) // 64
        return tuple((self.bits >> (64 * w)) & ((1 << 64) - 1) for w in range(nwords))

    def to_string(self) -> str:
        return "".join("1" if (self.bits >> i) & 1 else "0" for i in range(self.n))

    def __str__(self) -> str:
        return self.to_string()


@dataclass(frozen=True)
class BitMatrix:
    """Dense GF(2) matrix stored as a tuple of BitVector rows."""

    rows: int
    cols: int
    row_data: tuple[BitVector, ...]

    def __post_init__(self):
        if self.rows != len(self.row_data):
            raise ValueError("row count mismatch")
        for r in self.row_data:
            if r.n != self.cols:
                raise ValueError("row length mismatch")

    @classmethod
    def from_rows(cls, rows: Sequence[BitVector]) -> BitMatrix:
        if not rows:
            raise ValueError("cannot infer column count from zero rows")
        return cls(len(rows), rows[0].n, tuple(rows))

    @classmethod
    def from_bits(cls, rows: int, cols: int, bits: Sequence[int]) -> BitMatrix:
        return cls(rows, cols, tuple(BitVector(cols, b) for b in bits))

    @classmethod
    def from_strings(cls, data: Sequence[str]) -> BitMatrix:
        rows = [BitVector.from_string(s) for s in data]
        if len({r.n for r in rows}) > 1:
            raise ValueError("ragged rows")
        return cls.from_rows(rows)

    @classmethod
    def identity(cls, n: int) -> BitMatrix:
        return cls.from_bits(n, n, [1 << i for i in range(n)])

    @classmethod
    def zero(cls, rows: int, cols: int) -> BitMatrix:
        return cls.from_bits(rows, cols, [0] * rows)

    def row(self, i: int) -> BitVector:
        return self.row_data[i]

    def row_bits(self) -> list[int]:
        return [r.bits for r in self.row_data]

    def entry(self, i: int, j: int) -> int:
        return self.row_data[i][j]

    def is_square(self) -> bool:
        return self.rows == self.cols

    def transpose(self) -> BitMatrix:
        cols = [0] * self.cols
        for i, r in enumerate(self.row_data):
            bits = r.bits
            while bits:
                low = bits & -bits
                cols[low.bit_length() - 1] |= 1 << i
                bits ^= low
        return BitMatrix.from_bits(self.cols, self.rows, cols)

    def mul_vec(self, v: BitVector) -> BitVector:
        if v.n != self.cols:
            raise ValueError("dimension mismatch")
        out = 0
        for i, r in enumerate(self.row_data):
            out |= ((r.bits & v.bits).bit_count() & 1) << i
        return BitVector(self.rows, out)

    def matmul(self, other: BitMatrix) -> BitMatrix:
        if self.cols != other.rows:
            raise ValueError("dimension mismatch")
        obits = other.row_bits()
        new_rows = []
        for r in self.row_data:
            acc = 0
            bits = r.bits
            while bits:
                low = bits & -bits
                acc ^= obits[low.bit_length() - 1]
                bits ^= low
            new_rows.append(acc)
        return BitMatrix.from_bits(self.rows, other.cols, new_rows)

    def add(self, other: BitMatrix) -> BitMatrix:
        if (self.rows, self.cols) != (other.rows, other.cols):
            raise ValueError("dimension mismatch")
        return BitMatrix.from_bits(
            self.rows, self.cols, [a.bits ^ b.bits for a, b in zip(self.row_data, other.row_data)]
        )

    def is_symmetric(self) -> bool:
        return self.is_square() and all(
            self.entry(i, j) == self.entry(j, i) for i in range(self.rows) for j in range(i)
        )

    def has_zero_diagonal(self) -> bool:
        return self.is_square() and all(self.entry(i, i) == 0 for i in range(self.rows))

    def to_json_dict(self) -> dict:
        return {
            "rows": self.rows,
            "cols": self.cols,
            "data": [r.to_string() for r in self.row_data],
        }

    @classmethod
    def from_json_dict(cls, obj: dict) -> BitMatrix:
        rows, cols, data = obj["rows"], obj["cols"], obj["data"]
        m = cls(rows, cols, tuple(BitVector.from_string(s) for s in data))
        return m


def _rref_bits(rows: Iterable[int]) -> list[int]:
    """Reduced row echelon form of int-packed rows, sorted by pivot.

    Pivot = lowest set bit (leftmost coordinate).  Result rows are nonzero,
    mutually reduced, pivots strictly increasing.
    """
    basis: list[int] = []
    for v in rows:
        for b in basis:
            if v & (b & -b):
                v ^= b
        if v:
            pivot = v & -v
            basis = [b ^ v if b & pivot else b for b in basis]
            basis.append(v)
    basis.sort(key=lambda r: r & -r)
    return basis


def _reduce_bits(v: int, basis: Sequence[int]) -> int:
    """Reduce v modulo an RREF basis (clears pivot coordinates)."""
    for b in basis:
        if v & (b & -b):
            v ^= b
    return v


@dataclass(frozen=True)
class Subspace:
    """Canonical subspace of F2^n: RREF basis, pivots strictly increasing."""

    ambient_dim: int
    basis: tuple[BitVector, ...]

    def __post_init__(self):
        prev_pivot = -1
        pivots = 0
        for r in self.basis:
            if r.n != self.ambient_dim:
                raise ValueError("basis row length mismatch")
            if r.is_zero():
                raise ValueError("zero basis row")
            pivot = (r.bits & -r.bits).bit_length() - 1
            if pivot <= prev_pivot:
                raise ValueError("pivots not strictly increasing")
            prev_pivot = pivot
            pivots |= 1 << pivot
        for r in self.basis:
            own_pivot = r.bits & -r.bits
            if (r.bits & pivots) != own_pivot:
                raise ValueError("basis not fully reduced")

    @classmethod
    def span(cls, ambient_dim: int, vectors: Iterable[BitVector]) -> Subspace:
        bits = []
        for v in vectors:
            if v.n != ambient_dim:
                raise ValueError("length mismatch")
            bits.append(v.bits)
        return cls(ambient_dim, tuple(BitVector(ambient_dim, b) for b in _rref_bits(bits)))

    @classmethod
    def zero_space(cls, n: int) -> Subspace:
        return cls(n, ())

    @classmethod
    def full(cls, n: int) -> Subspace:
        return cls(n, tuple(BitVector.basis(n, i) for i in range(n)))

    @property
    def dim(self) -> int:
        return len(self.basis)

    def contains(self, v: BitVector) -> bool:
        if v.n != self.ambient_dim:
            raise ValueError("length mismatch")
        return _reduce_bits(v.bits, [r.bits for r in self.basis]) == 0

    def contains_space(self, other: Subspace) -> bool:
        return all(self.contains(v) for v in other.basis)

    def vectors(self) -> Iterator[BitVector]:
        """Enumerate all 2^dim elements (small subspaces only)."""
        if self.dim > 24:
            raise GuardExceeded("subspace_vectors", "subspace too large to enumerate")
        rows = [r.bits for r in self.basis]
        for mask in range(1 << self.dim):
            acc = 0
            m = mask
            while m:
                low = m & -m
                acc ^= rows[low.bit_length() - 1]
                m ^= low
            yield BitVector(self.ambient_dim, acc)


def rank(m: BitMatrix) -> int:
    """GF(2) row rank."""
    return len(_rref_bits(m.row_bits()))


def kernel(m: BitMatrix) -> Subspace:
    """Canonical right kernel {v : m.v = 0}; dim = cols - rank."""
    reduced = _rref_bits(m.row_bits())
    pivot_cols = [(r & -r).bit_length() - 1 for r in reduced]
    pivot_set = set(pivot_cols)
    gens = []
    for free in range(m.cols):
        if free in pivot_set:
            continue
        v = 1 << free
        for r, p in zip(reduced, pivot_cols):
            if (r >> free) & 1:
                v |= 1 << p
        gens.append(BitVector(m.cols, v))
    return Subspace.span(m.cols, gens)


def subspace_span(vectors: Sequence[BitVector], ambient_dim: int | None = None) -> Subspace:
    """Canonical span; ambient_dim required only for an empty vector list."""
    vectors = list(vectors)
    if not vectors:
        if ambient_dim is None:
            raise ValueError("ambient_dim required for empty span")
        return Subspace.zero_space(ambient_dim)
    n = vectors[0].n
    if ambient_dim is not None and ambient_dim != n:
        raise ValueError("length mismatch")
    return Subspace.span(n, vectors)


def _check_action(action: Sequence[BitMatrix], dim: int | None) -> int:
    dims = {m.rows for m in action} | {m.cols for m in action}
    if dim is not None:
        dims.add(dim)
    if len(dims) > 1:
        raise ValueError("action matrices must be square of one dimension")
    if not dims:
        raise ValueError("dimension unknown: empty generator list needs dim=")
    return dims.pop()


def invariants(action: Sequence[BitMatrix], dim: int | None = None) -> Subspace:
    """Fixed subspace of the group generated by the action matrices.

    Fixed by all generators iff fixed by the whole group, so this is
    the kernel of the rows of every g + I stacked together.
    """
    n = _check_action(action, dim)
    stacked = [g.row(i).bits ^ (1 << i) for g in action for i in range(n)]
    if not stacked:
        return Subspace.full(n)
    return kernel(BitMatrix.from_bits(len(stacked), n, stacked))


def coinvariants_dim(action: Sequence[BitMatrix], dim: int | None = None) -> int:
    """dim V - dim sum_g im(g + I), the largest quotient with trivial action."""
    n = _check_action(action, dim)
    cols = []
    for g in action:
        gi = BitMatrix.from_bits(n, n, [g.row(i).bits ^ (1 << i) for i in range(n)])
        cols.extend(gi.transpose().row_bits())
    return n - len(_rref_bits(cols))


def gaussian_binomial(n: int, d: int) -> int:
    """Number of d-dimensional subspaces of F2^n (exact integer)."""
    if d < 0 or d > n:
        return 0
    num = den = 1
    for i in range(d):
        num *= (1 << (n - i)) - 1
        den *= (1 << (d - i)) - 1
    assert num % den == 0
    return num // den


def enumerate_subspaces(ambient_dim: int, dim: int) -> Iterator[Subspace]:
    """Stream every dim-dimensional subspace of F2^ambient_dim exactly once.

    Enumerates RREF bases directly: a choice of pivot columns plus free
    entries to the right of each pivot in non-pivot columns.
    """
    if ambient_dim > ENUMERATION_GUARD:
        raise GuardExceeded(
            "enumerate_subspaces",
            f"ambient dim {ambient_dim} exceeds enumeration guard {ENUMERATION_GUARD}",
        )
    if dim < 0 or dim > ambient_dim:
        raise ValueError("need 0 <= dim <= ambient_dim")
    for pivots in combinations(range(ambient_dim), dim):
        pivot_mask = 0
        for p in pivots:
            pivot_mask |= 1 << p
        free_slots = [
            (i, j)
            for i, p in enumerate(pivots)
            for j in range(p + 1, ambient_dim)
            if not (pivot_mask >> j) & 1
        ]
        for assignment in range(1 << len(free_slots)):
            rows = [1 << p for p in pivots]
            for k, (i, j) in enumerate(free_slots):
                if (assignment >> k) & 1:
                    rows[i] |= 1 << j
            yield Subspace(
                ambient_dim, tuple(BitVector(ambient_dim, r) for r in rows)
            )
