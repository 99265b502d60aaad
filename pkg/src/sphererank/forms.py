"""Families of alternating bilinear forms on F2^n and quadratic zero search.

A FormFamily holds t alternating forms sharing one Gram-matrix dimension.
Each form also carries its strictly-lower-triangular half L (row i, col j
entry = gram[i][j] for i > j); the derived quadratic refinement
q_s(e) = e^T L_s e satisfies q_s(basis vector) = 0 and polarizes to the
form: q(u + v) = q(u) + q(v) + (phi_s(u, v))_s.

The lower-triangle convention is frozen: any other triangle choice gives an
equivalent theory but different serialized bits.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Sequence

from .errors import GuardExceeded, SchemaError
from .gf2 import BitMatrix, BitVector, Subspace, kernel
from .rng import BitStream

COMMON_ZERO_GUARD = 24  # max variable count for the exhaustive zero scan


@dataclass(frozen=True)
class AlternatingForm:
    """Alternating (symmetric, zero-diagonal) bilinear form on F2^n."""

    n: int
    gram: BitMatrix

    def __post_init__(self):
        if self.gram.rows != self.n or self.gram.cols != self.n:
            raise ValueError("gram must be n x n")
        if not self.gram.is_symmetric():
            raise ValueError("gram must be symmetric")
        if not self.gram.has_zero_diagonal():
            raise ValueError("gram must have zero diagonal")

    def lower(self) -> BitMatrix:
        """Strictly lower triangular half of the Gram matrix."""
        mask_rows = [self.gram.row(i).bits & ((1 << i) - 1) for i in range(self.n)]
        return BitMatrix.from_bits(self.n, self.n, mask_rows)


def evaluate(form: AlternatingForm, x: BitVector, y: BitVector) -> int:
    """x^T . gram . y in F2."""
    if x.n != form.n or y.n != form.n:
        raise ValueError("length mismatch")
    acc = 0
    bits = x.bits
    rows = form.gram.row_bits()
    while bits:
        low = bits & -bits
        acc ^= rows[low.bit_length() - 1]
        bits ^= low
    return (acc & y.bits).bit_count() & 1


@dataclass(frozen=True)
class FormFamily:
    """Tuple of t alternating forms on F2^n plus their lower triangles."""

    n: int
    t: int
    forms: tuple[AlternatingForm, ...]
    lower: tuple[BitMatrix, ...] = field(default=())

    def __post_init__(self):
        if self.t != len(self.forms):
            raise ValueError("family size mismatch")
        if any(f.n != self.n for f in self.forms):
            raise ValueError("forms must share one dimension")
        if not self.lower:
            object.__setattr__(self, "lower", tuple(f.lower() for f in self.forms))
        for f, lo in zip(self.forms, self.lower):
            if lo.add(lo.transpose()).row_bits() != f.gram.row_bits():
                raise ValueError("lower triangle inconsistent with gram")

    @classmethod
    def from_grams(cls, grams: Sequence[BitMatrix]) -> FormFamily:
        if not grams:
            raise ValueError("need at least one form")
        n = grams[0].rows
        return cls(n, len(grams), tuple(AlternatingForm(n, g) for g in grams))

    def phi(self, s: int, x: BitVector, y: BitVector) -> int:
        return evaluate(self.forms[s], x, y)

    def beta(self, e: BitVector, e2: BitVector) -> BitVector:
        """Cocycle (e^T L_s e2)_s, a vector of t bits."""
        if e.n != self.n or e2.n != self.n:
            raise ValueError("length mismatch")
        out = 0
        for s, lo in enumerate(self.lower):
            rows = lo.row_bits()
            acc = 0
            bits = e.bits
            while bits:
                low = bits & -bits
                acc ^= rows[low.bit_length() - 1]
                bits ^= low
            out |= ((acc & e2.bits).bit_count() & 1) << s
        return BitVector(self.t, out)

    def to_json_dict(self) -> dict:
        return {
            "n": self.n,
            "t": self.t,
            "forms": [[r.to_string() for r in f.gram.row_data] for f in self.forms],
        }

    @classmethod
    def from_json_dict(cls, obj: dict) -> FormFamily:
        failing: list[str] = []
        for key in ("n", "t", "forms"):
            if key not in obj:
                failing.append(f"missing key {key!r}")
        if failing:
            raise SchemaError(failing)
        n, t, forms = obj["n"], obj["t"], obj["forms"]
        if not isinstance(n, int) or n < 1:
            failing.append("n: must be a positive integer")
        if not isinstance(t, int) or t < 1:
            failing.append("t: must be a positive integer")
        if not isinstance(forms, list) or (isinstance(t, int) and len(forms) != t):
            failing.append("forms: must be a list of t matrices")
        if failing:
            raise SchemaError(failing)
        grams = []
        for s, rows in enumerate(forms):
            try:
                g = BitMatrix.from_strings(rows)
            except (ValueError, TypeError) as exc:
                failing.append(f"forms[{s}]: {exc}")
                continue
            if g.rows != n or g.cols != n:
                failing.append(f"forms[{s}]: expected {n}x{n} matrix")
                continue
            if not g.is_symmetric():
                failing.append(f"forms[{s}]: gram not symmetric")
            if not g.has_zero_diagonal():
                failing.append(f"forms[{s}]: gram diagonal not zero")
            grams.append(g)
        if failing:
            raise SchemaError(failing)
        return cls.from_grams(grams)


def quadratic_refinement(fam: FormFamily, e: BitVector) -> BitVector:
    """(e^T L_s e)_s: the central part of the square of a word with a-part e."""
    return fam.beta(e, e)


def common_radical(fam: FormFamily) -> Subspace:
    """Vectors pairing to zero with everything, for every form in the family."""
    stacked = [r for f in fam.forms for r in f.gram.row_bits()]
    return kernel(BitMatrix.from_bits(len(stacked), fam.n, stacked))


def random_family(n: int, t: int, seed: int) -> FormFamily:
    """Family with iid fair strictly-lower Gram bits, deterministic in seed.

    Draw order: form index, then row 1..n-1, then column 0..row-1.
    """
    if n < 1 or t < 1:
        raise ValueError("need n >= 1 and t >= 1")
    stream = BitStream(seed)
    grams = []
    for _ in range(t):
        rows = [0] * n
        for i in range(1, n):
            for j in range(i):
                if stream.next_bit():
                    rows[i] |= 1 << j
                    rows[j] |= 1 << i
        grams.append(BitMatrix.from_bits(n, n, rows))
    return FormFamily.from_grams(grams)


# -- quadratic systems -------------------------------------------------------

Monomial = tuple[int, ...]  # sorted variable indices, repeats allowed, len <= 2


@dataclass(frozen=True)
class QuadraticSystem:
    """Polynomials of degree <= 2 over F2 in v variables, as monomial sets."""

    v: int
    polys: tuple[frozenset[Monomial], ...]

    def __post_init__(self):
        for p in self.polys:
            for mono in p:
                if len(mono) > 2:
                    raise ValueError("monomial degree exceeds 2")
                if any(not 0 <= i < self.v for i in mono):
                    raise ValueError("variable index out of range")
                if tuple(sorted(mono)) != mono:
                    raise ValueError("monomial indices must be sorted")

    @classmethod
    def from_lists(cls, v: int, polys: Sequence[Sequence[Sequence[int]]]) -> QuadraticSystem:
        return cls(v, tuple(frozenset(tuple(sorted(m)) for m in p) for p in polys))

    def to_json_dict(self) -> dict:
        return {
            "v": self.v,
            "polys": [sorted([list(m) for m in p]) for p in self.polys],
        }

    @classmethod
    def from_json_dict(cls, obj: dict) -> QuadraticSystem:
        failing = [f"missing key {k!r}" for k in ("v", "polys") if k not in obj]
        if failing:
            raise SchemaError(failing)
        try:
            return cls.from_lists(obj["v"], obj["polys"])
        except (ValueError, TypeError) as exc:
            raise SchemaError([f"polys: {exc}"]) from exc

    def evaluate(self, point: int) -> tuple[int, ...]:
        """Value of every polynomial at the point (bitmask of coordinates)."""
        masks = _poly_masks(self)
        return tuple(_eval_masks(m, point) for m in masks)


def _poly_masks(sys: QuadraticSystem) -> list[list[int]]:
    # monomial -> single mask m; value at point p is [p & m == m]
    out = []
    for p in sys.polys:
        masks = []
        for mono in p:
            m = 0
            for i in mono:
                m |= 1 << i
            masks.append(m)
        out.append(masks)
    return out


def _eval_masks(masks: list[int], point: int) -> int:
    acc = 0
    for m in masks:
        if point & m == m:
            acc ^= 1
    return acc


def common_zero_quadratics(sys: QuadraticSystem) -> Optional[BitVector]:
    """Some nonzero common zero of all polynomials, or None if none exists.

    Exhaustive over all 2^v - 1 nonzero points, so None is a proof of
    nonexistence.  Returns the numerically smallest zero.
    """
    if sys.v > COMMON_ZERO_GUARD:
        raise GuardExceeded(
            "common_zero_quadratics",
            f"{sys.v} variables exceed exhaustive-scan guard {COMMON_ZERO_GUARD}",
        )
    masks = _poly_masks(sys)
    for point in range(1, 1 << sys.v):
        if all(_eval_masks(m, point) == 0 for m in masks):
            return BitVector(sys.v, point)
    return None
