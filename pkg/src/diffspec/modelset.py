"""The silver-mean chain with exact Z[sqrt(2)] arithmetic.

The chain is generated by the tile substitution long -> long long short,
short -> long with tile lengths lambda = 1 + sqrt(2) and 1.  All
coordinates live in Z[sqrt(2)] and are kept as exact integer pairs
(a, b) <-> a + b sqrt(2).  Bragg peak positions live in the Fourier
module (sqrt(2)/4) Z[sqrt(2)]; their exponential sums are evaluated with
phases reduced exactly: the rational half-integer part by integer
parity, the irrational part in extended precision before a single float
multiplication.  This keeps extinctions clean at sample sizes where
naively multiplied float phases would drown them in rounding noise.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import total_ordering

import numpy as np

from .delone import PointSet1D
from .errors import NotSilverMean, OutOfRange

SQRT2 = math.sqrt(2.0)

# sqrt(2)/4 to more digits than extended precision keeps
_SQRT2_OVER_4 = np.longdouble("0.353553390593273762200422181052424519642417968844237018294170")


@total_ordering
@dataclass(frozen=True)
class QuadraticInt:
    """The ring element a + b sqrt(2) with integer a, b."""

    a: int
    b: int

    def __add__(self, other: "QuadraticInt") -> "QuadraticInt":
        if not isinstance(other, QuadraticInt):
            return NotImplemented
        return QuadraticInt(self.a + other.a, self.b + other.b)

    def __sub__(self, other: "QuadraticInt") -> "QuadraticInt":
        if not isinstance(other, QuadraticInt):
            return NotImplemented
        return QuadraticInt(self.a - other.a, self.b - other.b)

    def __mul__(self, other: "QuadraticInt") -> "QuadraticInt":
        if not isinstance(other, QuadraticInt):
            return NotImplemented
        a, b, c, d = self.a, self.b, other.a, other.b
        return QuadraticInt(a * c + 2 * b * d, a * d + b * c)

    def __neg__(self) -> "QuadraticInt":
        return QuadraticInt(-self.a, -self.b)

    def star(self) -> "QuadraticInt":
        """The algebraic conjugate a - b sqrt(2)."""
        return QuadraticInt(self.a, -self.b)

    def __float__(self) -> float:
        return self.a + self.b * SQRT2

    def __lt__(self, other: "QuadraticInt") -> bool:
        # exact order: a + b sqrt(2) < c + d sqrt(2) iff (a - c) < (d - b) sqrt(2)
        da = self.a - other.a
        db = other.b - self.b
        if db == 0:
            return da < 0
        if db > 0:
            return da < 0 or da * da < 2 * db * db
        return da < 0 and da * da > 2 * db * db

    def __str__(self) -> str:
        return f"{self.a}+{self.b}r2"


ZERO = QuadraticInt(0, 0)
ONE = QuadraticInt(1, 0)
LAMBDA = QuadraticInt(1, 1)  # the silver mean 1 + sqrt(2)
LAMBDA_SQ = LAMBDA * LAMBDA  # 3 + 2 sqrt(2)


@dataclass(frozen=True)
class FourierModuleElement:
    """k = (sqrt(2)/4) (a + b sqrt(2)) = b/2 + a sqrt(2)/4."""

    a: int
    b: int

    @property
    def value(self) -> float:
        return self.b / 2.0 + self.a * SQRT2 / 4.0

    @property
    def star_value(self) -> float:
        return self.b / 2.0 - self.a * SQRT2 / 4.0

    def times_lambda(self) -> "FourierModuleElement":
        """lambda * k stays in the module: q -> (1 + sqrt(2)) q."""
        return FourierModuleElement(self.a + 2 * self.b, self.a + self.b)

    def __str__(self) -> str:
        return f"({self.a},{self.b})"


def is_extinct(k: FourierModuleElement) -> bool:
    """True iff the Bragg amplitude at k vanishes identically.

    The conjugate k* equals b/2 - a sqrt(2)/4; the amplitude is zero
    exactly when k* is a nonzero integer multiple of 1/sqrt(2), i.e.
    when b = 0 and a is even and nonzero.
    """
    return k.b == 0 and k.a % 2 == 0 and k.a != 0


def silver_mean_chain(n_points: int) -> PointSet1D:
    """Left endpoints of the first n_points tiles of the fixed chain.

    Starts at 0; gaps are lambda after a long tile and 1 after a short
    one, following the substitution long -> long long short,
    short -> long iterated from a single long tile.
    """
    if n_points < 1:
        raise ValueError("need at least one point")
    word = [0]  # 0 = long, 1 = short
    while len(word) < n_points:
        nxt: list[int] = []
        for t in word:
            nxt.extend((0, 0, 1) if t == 0 else (0,))
        word = nxt
    word = word[: n_points - 1]
    exact = [ZERO]
    for t in word:
        exact.append(exact[-1] + (LAMBDA if t == 0 else ONE))
    coords = np.array([float(q) for q in exact])
    return PointSet1D(coords, np.ones(n_points, dtype=np.complex128), exact)


def _exact_arrays(ps: PointSet1D) -> tuple[np.ndarray, np.ndarray]:
    if ps.exact is None:
        raise NotSilverMean("operation needs exact coordinates")
    c = np.fromiter((q.a for q in ps.exact), dtype=np.int64, count=len(ps.exact))
    d = np.fromiter((q.b for q in ps.exact), dtype=np.int64, count=len(ps.exact))
    return c, d


def exact_phases(ps: PointSet1D, k: FourierModuleElement) -> np.ndarray:
    """Fractional parts of k * x for every exact point x = c + d sqrt(2).

    k x = (b c + a d)/2 + ((a c + 2 b d)/4) sqrt(2): the first term is a
    half-integer reduced by parity; the second is reduced in extended
    precision so the result is accurate to ~1e-13 even at coordinates
    of order 1e5.
    """
    c, d = _exact_arrays(ps)
    a, b = k.a, k.b
    half = ((b * c + a * d) % 2).astype(np.float64) * 0.5
    m = a * c + 2 * b * d
    irr = m.astype(np.longdouble) * _SQRT2_OVER_4
    frac = (irr - np.floor(irr)).astype(np.float64)
    return (half + frac) % 1.0


def intensity_at(
    ps: PointSet1D, k: "FourierModuleElement | float", radius: float | None = None
) -> float:
    """Normalized intensity |sum_x w_x e^{-2 pi i k x}|^2 / (2R)^2.

    The sum runs over the points within a window of length 2R anchored
    at the left end of the sample (the chains here grow rightward from
    0); radius None uses the whole sample.  Exact phase reduction is
    used when both the point set and k are exact.
    """
    if len(ps) == 0:
        raise OutOfRange("empty point set")
    extent = ps.extent
    if radius is None:
        radius = extent / 2.0
        sub = ps
    else:
        if 2 * radius > extent + 1e-9:
            raise OutOfRange(f"2R = {2 * radius:g} exceeds extent {extent:g}")
        sub = ps.restrict(ps.coords[0] - 1e-9, ps.coords[0] + 2 * radius + 1e-9)
    if isinstance(k, FourierModuleElement) and sub.exact is not None:
        phases = exact_phases(sub, k)
        s = np.sum(sub.weights * np.exp(-2j * np.pi * phases))
    else:
        kv = k.value if isinstance(k, FourierModuleElement) else float(k)
        s = np.sum(sub.weights * np.exp(-2j * np.pi * kv * sub.coords))
    return float(abs(s) ** 2) / (2 * radius) ** 2


def _gap_kinds(ps: PointSet1D) -> np.ndarray:
    """0 for a lambda gap, 1 for a unit gap; NotSilverMean otherwise."""
    if ps.exact is None:
        raise NotSilverMean("gap classification needs exact coordinates")
    kinds = np.empty(len(ps.exact) - 1, dtype=np.int8)
    for i in range(len(ps.exact) - 1):
        g = ps.exact[i + 1] - ps.exact[i]
        if g == LAMBDA:
            kinds[i] = 0
        elif g == ONE:
            kinds[i] = 1
        else:
            raise NotSilverMean(f"gap {g} is neither 1 nor lambda")
    return kinds


def inflate_factor(ps: PointSet1D) -> PointSet1D:
    """The points opening an inflation block: start of two long tiles.

    A point that begins a long tile whose successor also begins a long
    tile is exactly the image under multiplication by lambda of a chain
    point, so the result is the chain rescaled by lambda (up to the two
    trailing points whose forward gaps the sample cannot classify).
    """
    kinds = _gap_kinds(ps)
    keep = [i for i in range(len(kinds) - 1) if kinds[i] == 0 and kinds[i + 1] == 0]
    coords = ps.coords[keep]
    exact = [ps.exact[i] for i in keep]
    return PointSet1D(coords, np.ones(len(keep), dtype=np.complex128), exact)


def weighted_silver_comb(
    ps: PointSet1D, w_short_start: complex, w_long_start: complex
) -> PointSet1D:
    """Reweight each point by the kind of tile it begins.

    The final point begins no tile and is dropped.  Weights (1, 1) give
    back the plain comb minus that endpoint; weights (0, 1) mark the
    long-tile starts.
    """
    kinds = _gap_kinds(ps)
    w = np.where(kinds == 0, complex(w_long_start), complex(w_short_start))
    exact = ps.exact[:-1] if ps.exact is not None else None
    return PointSet1D(ps.coords[:-1], w.astype(np.complex128), exact)


def module_box(
    a_max: int, b_max: int, k_max: float | None = None
) -> list[FourierModuleElement]:
    """All module elements with |a| <= a_max, |b| <= b_max (and |k| <= k_max)."""
    out = []
    for a in range(-a_max, a_max + 1):
        for b in range(-b_max, b_max + 1):
            k = FourierModuleElement(a, b)
            if k_max is not None and abs(k.value) > k_max:
                continue
            out.append(k)
    return sorted(out, key=lambda k: (k.value, k.a))


@dataclass
class InflationRow:
    k: FourierModuleElement
    inflated_intensity: float
    original_at_lambda_k: float
    rel_error: float


@dataclass
class InflationReport:
    rows: list[InflationRow]
    density_ratio: float  # density(inflated) / density(original)
    scale_constant: float  # density_ratio squared, the intensity ratio
    max_rel_error: float
    extinction_transport: list[tuple[FourierModuleElement, float]]


def verify_inflation_identity(
    ps: PointSet1D,
    candidates: list[FourierModuleElement],
    top: int = 20,
    intensity_floor: float = 1e-3,
) -> InflationReport:
    """Check I_inflated(k) == C * I_original(lambda k) over candidates.

    C is the squared density ratio of the two chains (the per-chain
    normalization makes the identity hold only up to this constant,
    which is reported).  Candidates whose lambda k is extinct have both
    sides zero and are skipped; the remaining ones are ranked by
    inflated intensity and the strongest ``top`` are compared.
    Additionally every extinct candidate is checked to carry intensity
    in the inflated chain (extinctions do not transport).
    """
    infl = inflate_factor(ps)
    dens_orig = len(ps) / ps.extent
    dens_infl = len(infl) / infl.extent
    ratio = dens_infl / dens_orig
    c_scale = ratio * ratio

    rows: list[InflationRow] = []
    for k in candidates:
        lk = k.times_lambda()
        if is_extinct(lk):
            continue
        i_infl = intensity_at(infl, k)
        i_orig = intensity_at(ps, lk)
        target = c_scale * i_orig
        if max(i_infl, target) < intensity_floor:
            continue
        rel = abs(i_infl - target) / max(target, 1e-300)
        rows.append(InflationRow(k, i_infl, i_orig, rel))
    rows.sort(key=lambda r: -r.inflated_intensity)
    rows = rows[:top]
    max_rel = max((r.rel_error for r in rows), default=0.0)

    transport = []
    for k in candidates:
        if is_extinct(k):
            transport.append((k, intensity_at(infl, k)))
    return InflationReport(rows, ratio, c_scale, max_rel, transport)
