"""Homogeneous polynomial algebra over F2 (the cohomology of (Z/2)^n).

Polynomials are sets of exponent tuples with mod-2 coefficients; addition is
symmetric difference and squaring is the Frobenius doubling of exponents.
Hilbert functions of graded quotients come from row-reducing monomial
multiples of the generators inside one graded piece, and for n homogeneous
generators in n variables regularity is equivalent to the quotient dying at
the Artinian boundary degree sum(d_i - 1) + 1.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations_with_replacement
from typing import NamedTuple, Optional, Sequence

from .errors import GuardExceeded, NonSquareSystemError, SchemaError
from .gf2 import BitMatrix, BitVector, _reduce_bits, _rref_bits, rank
from .repaction import GroupOracle, MonomialRep

NVARS_GUARD = 16
DEGREE_GUARD = 64

Exponents = tuple[int, ...]


@dataclass(frozen=True)
class GradedPoly:
    """Homogeneous polynomial: set of exponent tuples sharing a total degree.

    The empty set is the zero polynomial of its declared degree; the marker
    keeps a vanished Euler class distinguishable from the constant 1.
    """

    nvars: int
    degree: int
    monomials: frozenset[Exponents]

    def __post_init__(self):
        if self.nvars < 1 or self.nvars > NVARS_GUARD:
            raise GuardExceeded("poly_nvars", f"nvars must be in 1..{NVARS_GUARD}")
        if self.degree < 0 or self.degree > DEGREE_GUARD:
            raise GuardExceeded("poly_degree", f"degree must be in 0..{DEGREE_GUARD}")
        for m in self.monomials:
            if len(m) != self.nvars or any(e < 0 for e in m):
                raise ValueError(f"bad exponent tuple {m}")
            if sum(m) != self.degree:
                raise ValueError(f"monomial {m} is not of degree {self.degree}")

    @classmethod
    def from_monomials(cls, nvars: int, monomials: Sequence[Sequence[int]]) -> GradedPoly:
        monos = frozenset(tuple(m) for m in monomials)
        if not monos:
            raise ValueError("use GradedPoly.zero for the zero polynomial")
        degree = sum(next(iter(monos)))
        return cls(nvars, degree, monos)

    @classmethod
    def zero(cls, nvars: int, degree: int) -> GradedPoly:
        return cls(nvars, degree, frozenset())

    @classmethod
    def one(cls, nvars: int) -> GradedPoly:
        return cls(nvars, 0, frozenset({(0,) * nvars}))

    @classmethod
    def variable(cls, nvars: int, i: int) -> GradedPoly:
        return cls.linear(nvars, BitVector.basis(nvars, i))

    @classmethod
    def linear(cls, nvars: int, coeffs: BitVector) -> GradedPoly:
        if coeffs.n != nvars:
            raise ValueError("coefficient length mismatch")
        monos = frozenset(
            tuple(1 if j == i else 0 for j in range(nvars)) for i in coeffs.support()
        )
        return cls(nvars, 1, monos)

    def is_zero(self) -> bool:
        return not self.monomials

    def linear_coeffs(self) -> BitVector:
        if self.degree != 1:
            raise ValueError("not a degree-1 polynomial")
        bits = 0
        for m in self.monomials:
            bits |= 1 << m.index(1)
        return BitVector(self.nvars, bits)

    def __add__(self, other: GradedPoly) -> GradedPoly:
        if self.nvars != other.nvars or self.degree != other.degree:
            raise ValueError("can only add within one graded piece")
        return GradedPoly(self.nvars, self.degree, self.monomials ^ other.monomials)

    def __mul__(self, other: GradedPoly) -> GradedPoly:
        if self.nvars != other.nvars:
            raise ValueError("variable count mismatch")
        acc: set[Exponents] = set()
        for m1 in self.monomials:
            for m2 in other.monomials:
                prod = tuple(a + b for a, b in zip(m1, m2))
                acc.symmetric_difference_update({prod})
        return GradedPoly(self.nvars, self.degree + other.degree, frozenset(acc))

    def square(self) -> GradedPoly:
        # Frobenius: (f)^2 = f with doubled exponents over F2
        return GradedPoly(
            self.nvars, 2 * self.degree, frozenset(tuple(2 * e for e in m) for m in self.monomials)
        )

    def power(self, p: int) -> GradedPoly:
        if p < 0:
            raise ValueError("negative power")
        result = GradedPoly.one(self.nvars)
        base = self
        while p:
            if p & 1:
                result = result * base
            p >>= 1
            if p:
                base = base.square()
        return result

    def to_json_dict(self) -> dict:
        return {
            "nvars": self.nvars,
            "degree": self.degree,
            "monomials": sorted(list(m) for m in self.monomials),
        }

    @classmethod
    def from_json_dict(cls, obj: dict) -> GradedPoly:
        failing = [f"missing key {k!r}" for k in ("nvars", "monomials") if k not in obj]
        if failing:
            raise SchemaError(failing)
        monos = obj["monomials"]
        try:
            if not monos:
                return cls.zero(obj["nvars"], obj.get("degree", 0))
            poly = cls.from_monomials(obj["nvars"], monos)
        except (ValueError, TypeError) as exc:
            raise SchemaError([f"monomials: {exc}"]) from exc
        if "degree" in obj and obj["degree"] != poly.degree:
            raise SchemaError(["degree: does not match monomials"])
        return poly


@dataclass(frozen=True)
class IdealGens:
    """Homogeneous generators of an ideal of F2[x_1..x_n]."""

    nvars: int
    gens: tuple[GradedPoly, ...]

    def __post_init__(self):
        if any(g.nvars != self.nvars for g in self.gens):
            raise ValueError("generators must share the variable count")


def monomials_of_degree(nvars: int, degree: int) -> list[Exponents]:
    """All exponent tuples of the given total degree, in a fixed order."""
    out = []
    for combo in combinations_with_replacement(range(nvars), degree):
        exp = [0] * nvars
        for i in combo:
            exp[i] += 1
        out.append(tuple(exp))
    return out


def hilbert_function(I: IdealGens, d: int) -> int:
    """dim_F2 of the degree-d piece of F2[x_1..x_n] / I."""
    if d < 0:
        raise ValueError("degree must be nonnegative")
    basis = monomials_of_degree(I.nvars, d)
    index = {m: i for i, m in enumerate(basis)}
    rows = []
    for g in I.gens:
        if g.degree > d or g.is_zero():
            continue
        for m in monomials_of_degree(I.nvars, d - g.degree):
            row = 0
            for gm in g.monomials:
                row ^= 1 << index[tuple(a + b for a, b in zip(m, gm))]
            rows.append(row)
    return len(basis) - len(_rref_bits(rows))


def _require_square(I: IdealGens) -> None:
    if len(I.gens) != I.nvars:
        raise NonSquareSystemError(
            f"{len(I.gens)} generators in {I.nvars} variables: regularity is only "
            "decidable here for square systems"
        )
    if any(g.degree < 1 for g in I.gens):
        raise ValueError("generators must be homogeneous of degree >= 1")


def is_regular_sequence(I: IdealGens) -> bool:
    """Regularity of n homogeneous generators in n variables.

    Equivalent to a finite-dimensional quotient; since the ring is generated
    in degree 1, the quotient vanishes in all degrees above the Artinian
    boundary sum(d_i - 1) as soon as it vanishes there, so one Hilbert value
    decides.
    """
    _require_square(I)
    cutoff = sum(g.degree - 1 for g in I.gens) + 1
    return hilbert_function(I, cutoff) == 0


def quotient_total_dim(I: IdealGens) -> Optional[int]:
    """Total dimension of the quotient when regular (= prod d_i), else None."""
    _require_square(I)
    if not is_regular_sequence(I):
        return None
    boundary = sum(g.degree - 1 for g in I.gens)
    return sum(hilbert_function(I, d) for d in range(boundary + 1))


# -- Euler classes of induced representations ---------------------------------


def _elementary_abelian_coords(
    G: GroupOracle, e_gens: Sequence[int], expected_rank: int
) -> tuple[list[int], dict[int, int]]:
    """Basis (subset of e_gens) and coordinates of <e_gens>, validated rank."""
    elems = G.closure(e_gens)
    for e in elems:
        if e != 0 and G.mul(e, e) != 0:
            raise ValueError("subgroup is not elementary abelian")
    for e in elems:
        for f in elems:
            if G.mul(e, f) != G.mul(f, e):
                raise ValueError("subgroup is not elementary abelian")
    basis: list[int] = []
    coords = {0: 0}
    for g in e_gens:
        if g in coords:
            continue
        i = len(basis)
        basis.append(g)
        for e, c in list(coords.items()):
            coords[G.mul(e, g)] = c | (1 << i)
    if len(coords) != len(elems) or len(elems) != 1 << expected_rank:
        raise ValueError(
            f"generators span rank {len(elems).bit_length() - 1}, expected {expected_rank}"
        )
    return basis, coords


def euler_class_restriction(rep: MonomialRep, e_gens: Sequence[int], e_rank: int) -> GradedPoly:
    """Euler class of the induced sphere restricted to an elementary abelian E.

    Decomposes rep|E into +-1 characters by the trace formula; a trivial
    summand kills the class (zero marker), otherwise the class is the product
    of the nontrivial character linear forms with their multiplicities.
    """
    _, coords = _elementary_abelian_coords(rep.group, e_gens, e_rank)
    size = 1 << e_rank
    traces = {e: rep.trace(e) for e in coords}
    mult = []
    for c in range(size):
        total = sum(tr if (c & coords[e]).bit_count() % 2 == 0 else -tr for e, tr in traces.items())
        if total < 0 or total % size:
            raise AssertionError("character multiplicities are not nonnegative integers")
        mult.append(total // size)
    if sum(mult) != rep.dim:
        raise AssertionError("multiplicities do not sum to the representation dimension")
    if mult[0] > 0:
        return GradedPoly.zero(e_rank, rep.dim)
    euler = GradedPoly.one(e_rank)
    for c in range(1, size):
        if mult[c]:
            euler = euler * GradedPoly.linear(e_rank, BitVector(e_rank, c)).power(mult[c])
    return euler


def transgression_check(
    G: GroupOracle, reps: Sequence[MonomialRep], e_gens: Sequence[int]
) -> bool:
    """Whether the restricted Euler classes form a regular sequence.

    Requires equidimensional factors and an elementary abelian subgroup of
    rank equal to the number of factors (the square case).
    """
    if not reps:
        raise ValueError("need at least one representation")
    if len({rep.dim for rep in reps}) != 1:
        raise ValueError("representations must be equidimensional")
    n = len(reps)
    classes = [euler_class_restriction(rep, e_gens, n) for rep in reps]
    if any(c.is_zero() for c in classes):
        return False
    return is_regular_sequence(IdealGens(n, tuple(classes)))


# -- linear actions on the degree-one part ------------------------------------


@dataclass(frozen=True)
class LinearAction:
    """Invertible generators acting on the span of the degree-1 variables."""

    nvars: int
    generators: tuple[BitMatrix, ...]

    def __post_init__(self):
        for m in self.generators:
            if m.rows != self.nvars or m.cols != self.nvars:
                raise ValueError("generators must be nvars x nvars")
            if rank(m) != self.nvars:
                raise ValueError("generators must be invertible")


def apply_linear(poly: GradedPoly, m: BitMatrix) -> GradedPoly:
    """Ring substitution x_i -> sum_j m[i][j] x_j applied to a polynomial."""
    if m.rows != poly.nvars or m.cols != poly.nvars:
        raise ValueError("matrix size mismatch")
    images = [GradedPoly.linear(poly.nvars, m.row(i)) for i in range(poly.nvars)]
    out = GradedPoly.zero(poly.nvars, poly.degree)
    for mono in poly.monomials:
        term = GradedPoly.one(poly.nvars)
        for i, e in enumerate(mono):
            if e:
                term = term * images[i].power(e)
        out = out + term
    return out


class PowerSpanResult(NamedTuple):
    stable: bool  # span{y_i^p} is carried into itself by every generator
    permuted: bool  # every generator permutes the lines {y_1 .. y_n}


def power_span_test(act: LinearAction, ys: Sequence[GradedPoly], p: int) -> PowerSpanResult:
    """Stability of span{y_i^p} and permutation of {y_i} under the action."""
    if any(y.degree != 1 or y.nvars != act.nvars for y in ys):
        raise ValueError("ys must be degree-1 forms in the action's variables")
    coeffs = [y.linear_coeffs().bits for y in ys]
    if len(_rref_bits(coeffs)) != len(ys):
        raise ValueError("ys must be linearly independent")
    basis = monomials_of_degree(act.nvars, p)
    index = {m: i for i, m in enumerate(basis)}

    def pack(poly: GradedPoly) -> int:
        bits = 0
        for m in poly.monomials:
            bits |= 1 << index[m]
        return bits

    span = _rref_bits([pack(y.power(p)) for y in ys])
    stable = True
    permuted = True
    line_set = set(coeffs)
    for g in act.generators:
        for y in ys:
            if _reduce_bits(pack(apply_linear(y.power(p), g)), span):
                stable = False
            if apply_linear(y, g).linear_coeffs().bits not in line_set:
                permuted = False
    return PowerSpanResult(stable, permuted)
