"""Exact arithmetic, weighted norms, dominance and the reference point objective.

Every value that drives an algorithmic branch is a :class:`fractions.Fraction`
(or a plain ``int`` when integral).  Norm values of the ``l^p`` family are in
general irrational, so they are carried symbolically by :class:`NormValue` and
compared through exact special cases or certified interval refinement.
"""
from __future__ import annotations

import enum
import functools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from numbers import Rational
from typing import Iterable, Sequence, Union

Number = Union[int, Fraction]

#: Absolute width below which an undecided comparison is declared tolerance-equal.
DEFAULT_RESOLUTION = Fraction(1, 2**64)


class Sense(str, enum.Enum):
    MIN = "min"
    MAX = "max"


class Order(enum.Enum):
    """Outcome of an exact comparison.

    ``TOLERANCE_EQUAL`` means no exact decision was possible and the two
    enclosures still overlap at the configured resolution.
    """

    LESS = -1
    EQUAL = 0
    GREATER = 1
    TOLERANCE_EQUAL = 2

    @property
    def sign(self) -> int:
        return 0 if self is Order.TOLERANCE_EQUAL else self.value


class DimensionError(ValueError):
    pass


class InfeasibleReferencePoint(ValueError):
    """Raised when a reference point is not feasible for an instance."""


# ---------------------------------------------------------------------------
# rationals


def as_fraction(x) -> Fraction:
    """Convert ints, Fractions, ``"num/den"`` / decimal strings and floats.

    Floats go through their shortest ``repr`` so ``1.1`` becomes ``11/10``.
    """
    if isinstance(x, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, Rational):
        return Fraction(x.numerator, x.denominator)
    if isinstance(x, float):
        if not math.isfinite(x):
            raise ValueError(f"non-finite value {x!r}")
        return Fraction(repr(x))
    if isinstance(x, str):
        return Fraction(x.strip())
    raise TypeError(f"cannot interpret {x!r} as a rational")


def as_number(x) -> Number:
    """Like :func:`as_fraction` but returns a plain ``int`` when integral."""
    f = as_fraction(x)
    return f.numerator if f.denominator == 1 else f


def format_rational(x) -> str:
    f = as_fraction(x)
    return str(f.numerator) if f.denominator == 1 else f"{f.numerator}/{f.denominator}"


def rational_json(x) -> Union[int, str]:
    """JSON form of a rational: plain int when integral, else ``"num/den"``."""
    f = as_fraction(x)
    return f.numerator if f.denominator == 1 else format_rational(f)


# ---------------------------------------------------------------------------
# objective vectors


class ObjectiveVector(tuple):
    """Immutable nonnegative rational vector.

    Coordinates are stored as ``int`` when integral, otherwise as ``Fraction``,
    so tuple ordering is lexicographic and hashing agrees across both.
    """

    __slots__ = ()

    def __new__(cls, coords: Iterable) -> "ObjectiveVector":
        if isinstance(coords, ObjectiveVector):
            return coords
        vals = tuple(as_number(c) for c in coords)
        if not vals:
            raise DimensionError("objective vectors need at least one coordinate")
        if any(v < 0 for v in vals):
            raise ValueError(f"objective vector has a negative coordinate: {vals}")
        return super().__new__(cls, vals)

    @property
    def k(self) -> int:
        return len(self)

    @property
    def is_integral(self) -> bool:
        return all(isinstance(v, int) for v in self)

    def scaled(self, factor) -> "ObjectiveVector":
        f = as_fraction(factor)
        return ObjectiveVector(f * v for v in self)

    def to_json(self) -> list:
        return [rational_json(v) for v in self]

    @classmethod
    def from_json(cls, data: Sequence) -> "ObjectiveVector":
        return cls(data)

    def __repr__(self) -> str:
        return "(" + ", ".join(format_rational(v) for v in self) + ")"


def vec(*coords) -> ObjectiveVector:
    """Shorthand: ``vec(1, 2)`` or ``vec([1, 2])``."""
    if len(coords) == 1 and not isinstance(coords[0], (int, Fraction, str, float)):
        return ObjectiveVector(coords[0])
    return ObjectiveVector(coords)


def leq(u: Sequence, v: Sequence) -> bool:
    """Component-wise ``u <= v``."""
    return all(a <= b for a, b in zip(u, v))


def dominates(u: Sequence, v: Sequence, sense: Sense = Sense.MIN) -> bool:
    if len(u) != len(v):
        raise DimensionError("vectors differ in length")
    if tuple(u) == tuple(v):
        return False
    if Sense(sense) is Sense.MIN:
        return leq(u, v)
    return leq(v, u)


def pareto_filter(points: Iterable[Sequence], sense: Sense = Sense.MIN) -> list[ObjectiveVector]:
    """Non-dominated subset, duplicates collapsed, sorted lexicographically."""
    pts = sorted({ObjectiveVector(p) for p in points})
    if not pts:
        raise ValueError("pareto_filter needs at least one point")
    sense = Sense(sense)
    if sense is Sense.MAX:
        pts.reverse()
    # after sorting, a point can only be dominated by one that precedes it
    kept: list[ObjectiveVector] = []
    for p in pts:
        if not any(dominates(q, p, sense) for q in kept):
            kept.append(p)
    return sorted(kept)


# ---------------------------------------------------------------------------
# root enclosures


def iroot(n: int, k: int) -> int:
    """floor(n ** (1/k)) for integers n >= 0, k >= 1."""
    if n < 0 or k < 1:
        raise ValueError("iroot needs n >= 0 and k >= 1")
    if n < 2 or k == 1:
        return n
    if k == 2:
        return math.isqrt(n)
    x = 1 << -(-n.bit_length() // k)
    while True:
        y = ((k - 1) * x + n // x ** (k - 1)) // k
        if y >= x:
            break
        x = y
    while x**k > n:
        x -= 1
    while (x + 1) ** k <= n:
        x += 1
    return x


def root_bounds(x: Fraction, n: int, bits: int) -> tuple[Fraction, Fraction]:
    """Dyadic enclosure of ``x ** (1/n)`` with width at most ``2**-bits``."""
    x = as_fraction(x)
    if x < 0:
        raise ValueError("root of a negative number")
    if n == 1:
        return x, x
    scaled_num = x.numerator << (bits * n)
    r = iroot(scaled_num // x.denominator, n)
    lo = Fraction(r, 1 << bits)
    if r**n * x.denominator == scaled_num:
        return lo, lo
    return lo, Fraction(r + 1, 1 << bits)


def _pow_bounds(x: Fraction, p: Fraction, bits: int) -> tuple[Fraction, Fraction]:
    """Enclosure of ``x ** p`` for rational ``p = a/b > 0``."""
    a, b = p.numerator, p.denominator
    return root_bounds(x**a, b, bits)


def _lp_bounds(w: tuple, p: Fraction, bits: int) -> tuple[Fraction, Fraction]:
    """Enclosure of ``(sum w_i ** p) ** (1/p)``."""
    a, b = p.numerator, p.denominator
    if b == 1:
        s = sum(Fraction(v) ** a for v in w)
        return root_bounds(s, a, bits)
    slo = shi = Fraction(0)
    for v in w:
        lo, hi = _pow_bounds(Fraction(v), p, bits + 8)
        slo += lo
        shi += hi
    lo = root_bounds(slo**b, a, bits)[0]
    hi = root_bounds(shi**b, a, bits)[1]
    return lo, hi


# ---------------------------------------------------------------------------
# norm values


def _canonical_terms(terms) -> tuple[Fraction, tuple]:
    """Fold exactly-known terms into a constant and merge equal symbolic ones."""
    const = Fraction(0)
    merged: dict[tuple, Fraction] = {}
    for coef, p, w in terms:
        if coef == 0:
            continue
        nz = tuple(sorted(v for v in w if v != 0))
        if not nz:
            continue
        if len(nz) == 1:
            const += coef * nz[0]
            continue
        if p == 1:
            const += coef * sum(nz)
            continue
        key = (p, nz)
        merged[key] = merged.get(key, Fraction(0)) + coef
    out = tuple((c, p, w) for (p, w), c in sorted(merged.items()) if c != 0)
    return const, out


@dataclass(frozen=True, eq=False)
class NormValue:
    """``const + sum(coef * ||w||_p)`` kept symbolically.

    Values built from the infinity and cornered norms are always exact
    (``terms`` empty).  Arithmetic with rationals and other NormValues stays
    exact; comparisons certify their result or report ``TOLERANCE_EQUAL``.
    """

    const: Fraction = Fraction(0)
    terms: tuple = ()
    resolution: Fraction = field(default=DEFAULT_RESOLUTION, compare=False)

    @classmethod
    def of(cls, x) -> "NormValue":
        if isinstance(x, NormValue):
            return x
        return cls(as_fraction(x))

    @classmethod
    def build(cls, const, terms) -> "NormValue":
        c, t = _canonical_terms(terms)
        return cls(as_fraction(const) + c, t)

    @property
    def is_exact(self) -> bool:
        return not self.terms

    @property
    def exact(self) -> Fraction | None:
        return self.const if not self.terms else None

    def enclosure(self, bits: int = 64) -> tuple[Fraction, Fraction]:
        lo = hi = self.const
        for coef, p, w in self.terms:
            tlo, thi = _lp_bounds(w, p, bits)
            if coef > 0:
                lo += coef * tlo
                hi += coef * thi
            else:
                lo += coef * thi
                hi += coef * tlo
        return lo, hi

    def interval(self, tol=None) -> tuple[Fraction, Fraction]:
        """Enclosure refined until ``hi - lo <= tol``."""
        tol = self.resolution if tol is None else as_fraction(tol)
        bits = 64
        while True:
            lo, hi = self.enclosure(bits)
            if hi - lo <= tol:
                return lo, hi
            bits *= 2

    @property
    def lo(self) -> Fraction:
        return self.interval()[0]

    @property
    def hi(self) -> Fraction:
        return self.interval()[1]

    def __float__(self) -> float:
        lo, hi = self.interval()
        return float((lo + hi) / 2)

    # arithmetic --------------------------------------------------------
    def __add__(self, other) -> "NormValue":
        if isinstance(other, NormValue):
            if not other.terms:
                return NormValue(self.const + other.const, self.terms)
            return NormValue.build(self.const + other.const, self.terms + other.terms)
        if isinstance(other, (int, Fraction)):
            return NormValue(self.const + other, self.terms)
        return NotImplemented

    __radd__ = __add__

    def __neg__(self) -> "NormValue":
        return NormValue(-self.const, tuple((-c, p, w) for c, p, w in self.terms))

    def __sub__(self, other) -> "NormValue":
        if isinstance(other, NormValue) and not self.terms and not other.terms:
            return NormValue(self.const - other.const)
        if isinstance(other, (NormValue, int, Fraction)):
            return self + (-NormValue.of(other))
        return NotImplemented

    def __rsub__(self, other) -> "NormValue":
        return NormValue.of(other) - self

    def __mul__(self, other) -> "NormValue":
        if isinstance(other, (int, Fraction)):
            f = Fraction(other)
            return NormValue.build(self.const * f, tuple((c * f, p, w) for c, p, w in self.terms))
        return NotImplemented

    __rmul__ = __mul__

    def __truediv__(self, other) -> "NormValue":
        if isinstance(other, (int, Fraction)):
            return self * (1 / Fraction(other))
        return NotImplemented

    # comparison --------------------------------------------------------
    def compare(self, other) -> Order:
        return compare_values(self, other)

    def __lt__(self, other):
        return self.compare(other) is Order.LESS

    def __gt__(self, other):
        return self.compare(other) is Order.GREATER

    def __le__(self, other):
        return self.compare(other) is not Order.GREATER

    def __ge__(self, other):
        return self.compare(other) is not Order.LESS

    def __eq__(self, other):
        if not isinstance(other, (NormValue, int, Fraction)):
            return NotImplemented
        return self.compare(other) is Order.EQUAL

    __hash__ = None  # type: ignore[assignment]

    def __repr__(self) -> str:
        if self.is_exact:
            return f"NormValue({format_rational(self.const)})"
        lo, hi = self.enclosure(32)
        return f"NormValue(~{float((lo + hi) / 2)!r})"

    def to_json(self) -> dict:
        if self.is_exact:
            return {"exact": format_rational(self.const), "decimal": float(self.const)}
        lo, hi = self.interval()
        return {"lo": format_rational(lo), "hi": format_rational(hi), "decimal": float((lo + hi) / 2)}


def _sign(x) -> int:
    return (x > 0) - (x < 0)


def compare_values(a, b) -> Order:
    """Exact comparison of two NormValues (or rationals)."""
    ca = a.const if isinstance(a, NormValue) and not a.terms else a
    cb = b.const if isinstance(b, NormValue) and not b.terms else b
    if type(ca) in (int, Fraction) and type(cb) in (int, Fraction):
        return Order(_sign(ca - cb))
    d = NormValue.of(a) - NormValue.of(b)
    if not d.terms:
        return Order(_sign(d.const))
    if len(d.terms) == 1:
        coef, p, w = d.terms[0]
        if d.const == 0 or _sign(d.const) == _sign(coef):
            return Order(_sign(coef))
        if p.denominator == 1:
            # sign of coef*||w|| + const, both sides positive after moving const
            lhs = abs(coef) ** p.numerator * sum(Fraction(v) ** p.numerator for v in w)
            rhs = abs(d.const) ** p.numerator
            return Order(_sign(coef) * _sign(lhs - rhs))
    if len(d.terms) == 2 and d.const == 0:
        (c1, p1, w1), (c2, p2, w2) = d.terms
        if p1 == p2 and c1 == -c2 and p1.denominator == 1:
            e = p1.numerator
            s1 = sum(Fraction(v) ** e for v in w1)
            s2 = sum(Fraction(v) ** e for v in w2)
            return Order(_sign(c1) * _sign(s1 - s2))
    resolution = NormValue.of(a).resolution
    bits = 64
    while True:
        lo, hi = d.enclosure(bits)
        if lo > 0:
            return Order.GREATER
        if hi < 0:
            return Order.LESS
        if hi - lo < resolution:
            return Order.TOLERANCE_EQUAL
        bits *= 2


# ---------------------------------------------------------------------------
# norms


class NormKind(str, enum.Enum):
    INF = "inf"
    LP = "lp"
    CORNERED = "cornered"


@dataclass(frozen=True)
class Norm:
    """Weighted norm ``||y||^lambda := ||(lambda_1 y_1, ..., lambda_k y_k)||``.

    ``kind`` is one of the infinity norm, the standard ``l^p`` norm, or the
    cornered p-norm ``max_i |y_i| + (1/p) sum_i |y_i|``.
    """

    kind: NormKind
    weights: tuple
    p: Fraction | None = None
    allow_zero: bool = False

    def __post_init__(self):
        object.__setattr__(self, "kind", NormKind(self.kind))
        w = tuple(as_fraction(x) for x in self.weights)
        if not w:
            raise DimensionError("norm needs at least one weight")
        if any(x < 0 for x in w):
            raise ValueError("norm weights must be nonnegative")
        if not self.allow_zero and all(x == 0 for x in w):
            raise ValueError("all-zero weights give a seminorm; pass allow_zero=True to permit")
        object.__setattr__(self, "weights", w)
        if self.kind is NormKind.INF:
            object.__setattr__(self, "p", None)
        else:
            if self.p is None:
                raise ValueError(f"{self.kind.value} norm needs p")
            p = as_fraction(self.p)
            if p < 1:
                raise ValueError(f"p must be >= 1, got {p}")
            object.__setattr__(self, "p", p)

    @classmethod
    def infinity(cls, weights, allow_zero=False) -> "Norm":
        return cls(NormKind.INF, tuple(weights), None, allow_zero)

    @classmethod
    def lp(cls, p, weights, allow_zero=False) -> "Norm":
        return cls(NormKind.LP, tuple(weights), p, allow_zero)

    @classmethod
    def cornered(cls, p, weights, allow_zero=False) -> "Norm":
        return cls(NormKind.CORNERED, tuple(weights), p, allow_zero)

    @classmethod
    def parse(cls, spec: str, weights, allow_zero=False) -> "Norm":
        """Parse ``"inf"``, ``"lp:P"`` or ``"cornered:P"`` (``cornered:inf`` is the infinity norm)."""
        spec = spec.strip().lower()
        if spec in ("inf", "infinity", "cornered:inf"):
            return cls.infinity(weights, allow_zero)
        kind, _, p = spec.partition(":")
        if kind in ("lp", "l") and p:
            return cls.lp(as_fraction(p), weights, allow_zero)
        if kind == "cornered" and p:
            return cls.cornered(as_fraction(p), weights, allow_zero)
        raise ValueError(f"unknown norm spec {spec!r}")

    @property
    def k(self) -> int:
        return len(self.weights)

    def with_weights(self, weights, allow_zero=None) -> "Norm":
        az = self.allow_zero if allow_zero is None else allow_zero
        return Norm(self.kind, tuple(weights), self.p, az)

    def with_p(self, p) -> "Norm":
        return Norm(self.kind, self.weights, p, self.allow_zero)

    def spec(self) -> str:
        if self.kind is NormKind.INF:
            return "inf"
        return f"{self.kind.value}:{format_rational(self.p)}"

    @property
    def is_exact(self) -> bool:
        return self.kind is not NormKind.LP or self.p == 1

    def weighted(self, v: Sequence) -> tuple:
        if len(v) != len(self.weights):
            raise DimensionError(f"vector of length {len(v)} vs {len(self.weights)} weights")
        return tuple(lam * abs(x if type(x) in (int, Fraction) else as_fraction(x))
                     for lam, x in zip(self.weights, v))

    def unit_value(self) -> Fraction:
        """Exact value of the norm at the all-ones vector (infinity/cornered only)."""
        v = self(tuple(1 for _ in self.weights))
        if not v.is_exact:
            raise ValueError("unit_value is only exact for infinity and cornered norms")
        return v.const

    def __call__(self, v: Sequence) -> NormValue:
        return eval_norm(self, v)


def eval_norm(norm: Norm, v: Sequence) -> NormValue:
    w = norm.weighted(v)
    if norm.kind is NormKind.INF:
        return NormValue(max(w))
    if norm.kind is NormKind.CORNERED:
        return NormValue(max(w) + sum(w) / norm.p)
    return NormValue.build(0, ((Fraction(1), norm.p, w),))


def compare_norm(norm: Norm, u: Sequence, v: Sequence) -> Order:
    """Exact decision of ``||u|| <?> ||v||`` in the given weighted norm."""
    if len(u) != len(v):
        raise DimensionError("vectors differ in length")
    if norm.kind is NormKind.LP and norm.p.denominator == 1:
        e = norm.p.numerator
        su = sum(x**e for x in norm.weighted(u))
        sv = sum(x**e for x in norm.weighted(v))
        return Order(_sign(su - sv))
    return compare_values(eval_norm(norm, u), eval_norm(norm, v))


# ---------------------------------------------------------------------------
# reference point objective


@dataclass(frozen=True)
class ReferenceContext:
    """Reference point, weighted norm and optimization sense.

    ``verified`` records whether feasibility of ``refpoint`` was checked
    against a concrete instance; the constructor cannot know.
    """

    refpoint: ObjectiveVector
    norm: Norm
    sense: Sense = Sense.MIN
    verified: bool = False

    def __post_init__(self):
        object.__setattr__(self, "refpoint", ObjectiveVector(self.refpoint))
        object.__setattr__(self, "sense", Sense(self.sense))
        if len(self.refpoint) != self.norm.k:
            raise DimensionError("reference point and weights differ in length")

    @property
    def k(self) -> int:
        return len(self.refpoint)

    @functools.cached_property
    def base(self) -> NormValue:
        """``||y^r||``."""
        return eval_norm(self.norm, self.refpoint)

    def with_norm(self, norm: Norm) -> "ReferenceContext":
        return ReferenceContext(self.refpoint, norm, self.sense, self.verified)

    def __call__(self, y: Sequence) -> NormValue:
        return ref_objective(self, y)


def ref_objective(ctx: ReferenceContext, y: Sequence) -> NormValue:
    """``||y^r|| + ||y - y^r||`` for Min, ``||y^r|| - ||y^r - y||`` for Max.

    Differences are taken component-wise in absolute value so the function
    is total on infeasible reference points.
    """
    if len(y) != ctx.k:
        raise DimensionError(f"vector of length {len(y)} vs reference point of length {ctx.k}")
    yr = ctx.refpoint
    base = ctx.base
    dist = eval_norm(ctx.norm, tuple(a - b for a, b in zip(y, yr)))
    if ctx.sense is Sense.MIN:
        return base + dist
    return base - dist


# ---------------------------------------------------------------------------
# Gap answers


@dataclass(frozen=True)
class Witness:
    """Positive Gap answer: a solution at least as good as the query."""

    point: ObjectiveVector

    def to_json(self) -> dict:
        return {"answer": "witness", "point": self.point.to_json()}


@dataclass(frozen=True)
class NoneBelow:
    """Negative Gap answer (Min): nothing lies below ``query / alpha``."""

    def to_json(self) -> dict:
        return {"answer": "none-below"}


@dataclass(frozen=True)
class NoneAbove:
    """Negative Gap answer (Max): nothing lies above ``alpha * query``."""

    def to_json(self) -> dict:
        return {"answer": "none-above"}


GapAnswer = Union[Witness, NoneBelow, NoneAbove]
