"""Finite samples of one-dimensional point sets with finite local complexity.

A sample is a strictly increasing list of coordinates with complex
weights.  Coordinates may carry exact representations (any hashable
objects supporting subtraction and float conversion); when they do, the
cluster operations below compare patterns exactly instead of through a
float merge tolerance.

A K-cluster of a point x is the pattern (Lambda - x) within [-K, K].
The locator set of a cluster collects every point showing that exact
pattern; its density is the cluster's absolute frequency, which ties
point-set geometry to the correlation and diffraction machinery.
"""

from __future__ import annotations

import io
from dataclasses import dataclass, field

import numpy as np

from .errors import EmptyInterior, EmptyPointSet, IncompatibleCluster

MERGE_TOL = 1e-9


@dataclass
class PointSet1D:
    """Sorted, weighted points; optionally with exact coordinates."""

    coords: np.ndarray
    weights: np.ndarray | None = None
    exact: list | None = None

    def __post_init__(self):
        self.coords = np.asarray(self.coords, dtype=float)
        if self.coords.ndim != 1:
            raise ValueError("coords must be one-dimensional")
        if len(self.coords) > 1 and not np.all(np.diff(self.coords) > 0):
            raise ValueError("coords must be strictly increasing")
        if self.weights is None:
            self.weights = np.ones(len(self.coords), dtype=np.complex128)
        else:
            self.weights = np.asarray(self.weights, dtype=np.complex128)
            if self.weights.shape != self.coords.shape:
                raise ValueError("one weight per point required")
        if self.exact is not None and len(self.exact) != len(self.coords):
            raise ValueError("one exact coordinate per point required")

    def __len__(self) -> int:
        return len(self.coords)

    @property
    def extent(self) -> float:
        if len(self.coords) == 0:
            return 0.0
        return float(self.coords[-1] - self.coords[0])

    @property
    def packing_radius(self) -> float:
        """Half the minimal gap: balls of this radius do not overlap."""
        if len(self.coords) < 2:
            return np.inf
        return float(np.diff(self.coords).min()) / 2.0

    def gaps(self) -> np.ndarray:
        return np.diff(self.coords)

    def distinct_gaps(self, tol: float = MERGE_TOL) -> np.ndarray:
        """Sorted distinct gap values after merging within tol."""
        g = np.sort(self.gaps())
        if len(g) == 0:
            return g
        keep = np.concatenate([[True], np.diff(g) > tol])
        return g[keep]

    def restrict(self, lo: float, hi: float) -> "PointSet1D":
        i = int(np.searchsorted(self.coords, lo, side="left"))
        j = int(np.searchsorted(self.coords, hi, side="right"))
        exact = self.exact[i:j] if self.exact is not None else None
        return PointSet1D(self.coords[i:j], self.weights[i:j], exact)

    def serialize(self) -> str:
        buf = io.StringIO()
        mode = "exact" if self.exact is not None else "float"
        pr = self.packing_radius
        pr_s = "inf" if np.isinf(pr) else f"{pr:.12g}"
        buf.write(f"pointset {mode} packing_radius {pr_s}\n")
        for i in range(len(self.coords)):
            w = self.weights[i]
            if self.exact is not None:
                a, b = self.exact[i].a, self.exact[i].b
                buf.write(f"{a} {b} {w.real:.12g} {w.imag:.12g}\n")
            else:
                buf.write(f"{self.coords[i]:.12g} {w.real:.12g} {w.imag:.12g}\n")
        return buf.getvalue()

    @classmethod
    def parse(cls, text: str) -> "PointSet1D":
        from .modelset import QuadraticInt

        lines = [ln.strip() for ln in text.splitlines()]
        lines = [ln for ln in lines if ln and not ln.startswith("#")]
        if not lines or not lines[0].startswith("pointset"):
            raise ValueError("point set file must start with a pointset header")
        mode = lines[0].split()[1]
        coords: list[float] = []
        weights: list[complex] = []
        exact: list | None = [] if mode == "exact" else None
        for ln in lines[1:]:
            parts = ln.split()
            if mode == "exact":
                a, b, wr, wi = int(parts[0]), int(parts[1]), float(parts[2]), float(parts[3])
                q = QuadraticInt(a, b)
                exact.append(q)
                coords.append(float(q))
            else:
                coords.append(float(parts[0]))
                wr, wi = float(parts[1]), float(parts[2])
            weights.append(complex(wr, wi))
        return cls(np.array(coords), np.array(weights), exact)


@dataclass(frozen=True)
class Cluster:
    """The local pattern (Lambda - x) cap [-K, K] of some point x."""

    k_radius: float
    offsets: tuple[float, ...]
    exact_offsets: tuple | None = None

    def __post_init__(self):
        if 0.0 not in self.offsets and not any(abs(z) <= MERGE_TOL for z in self.offsets):
            raise IncompatibleCluster("cluster must contain its own center 0")
        if any(abs(z) > self.k_radius + MERGE_TOL for z in self.offsets):
            raise IncompatibleCluster("cluster offset outside [-K, K]")

    def __str__(self) -> str:
        inner = ", ".join(f"{z:.6g}" for z in self.offsets)
        return f"Cluster(K={self.k_radius:g}, [{inner}])"


def _interior_indices(ps: PointSet1D, k_radius: float) -> np.ndarray:
    x = ps.coords
    if len(x) == 0:
        raise EmptyPointSet("no points")
    lo = x[0] + k_radius
    hi = x[-1] - k_radius
    idx = np.nonzero((x >= lo - MERGE_TOL) & (x <= hi + MERGE_TOL))[0]
    if len(idx) == 0:
        raise EmptyInterior(f"no point is {k_radius:g} away from both ends")
    return idx


def _offsets_at(ps: PointSet1D, i: int, k_radius: float) -> tuple[np.ndarray, slice]:
    x = ps.coords
    lo = int(np.searchsorted(x, x[i] - k_radius - MERGE_TOL, side="left"))
    hi = int(np.searchsorted(x, x[i] + k_radius + MERGE_TOL, side="right"))
    return x[lo:hi] - x[i], slice(lo, hi)


def _canonical_key(offsets: np.ndarray, merged: np.ndarray) -> tuple[int, ...]:
    idx = np.searchsorted(merged, offsets)
    idx = np.clip(idx, 0, len(merged) - 1)
    left = np.clip(idx - 1, 0, len(merged) - 1)
    use_left = np.abs(merged[left] - offsets) < np.abs(merged[idx] - offsets)
    idx = np.where(use_left, left, idx)
    return tuple(int(i) for i in idx)


def enumerate_k_clusters(
    ps: PointSet1D, k_radius: float
) -> list[tuple[Cluster, int]]:
    """Distinct K-clusters over interior points with their sample counts.

    Patterns are compared exactly when exact coordinates are present,
    otherwise through a global merge of all observed offsets within
    1e-9.  Points closer than K to either end are excluded (their
    pattern could be truncated), so counts refer to interior points.
    """
    idx = _interior_indices(ps, k_radius)
    if ps.exact is not None:
        table: dict[tuple, tuple[Cluster, int]] = {}
        for i in idx:
            offs, sl = _offsets_at(ps, int(i), k_radius)
            exact = tuple(ps.exact[j] - ps.exact[int(i)] for j in range(sl.start, sl.stop))
            if exact in table:
                c, n = table[exact]
                table[exact] = (c, n + 1)
            else:
                c = Cluster(k_radius, tuple(float(z) for z in offs), exact)
                table[exact] = (c, 1)
        return sorted(table.values(), key=lambda cn: cn[0].offsets)

    all_offs: list[np.ndarray] = []
    for i in idx:
        offs, _ = _offsets_at(ps, int(i), k_radius)
        all_offs.append(offs)
    flat = np.sort(np.concatenate(all_offs))
    keep = np.concatenate([[True], np.diff(flat) > MERGE_TOL]) if len(flat) else []
    merged = flat[keep]
    table2: dict[tuple[int, ...], tuple[Cluster, int]] = {}
    for offs in all_offs:
        key = _canonical_key(offs, merged)
        if key in table2:
            c, n = table2[key]
            table2[key] = (c, n + 1)
        else:
            c = Cluster(k_radius, tuple(float(merged[i]) for i in key))
            table2[key] = (c, 1)
    return sorted(table2.values(), key=lambda cn: cn[0].offsets)


def locator_set(ps: PointSet1D, cluster: Cluster) -> PointSet1D:
    """All interior points whose K-pattern equals the cluster.

    The result carries unit weights (and exact coordinates when the
    input has them).  An empty result is returned, not raised.
    """
    if any(abs(z) > cluster.k_radius + MERGE_TOL for z in cluster.offsets):
        raise IncompatibleCluster("cluster exceeds its stated radius")
    k_radius = cluster.k_radius
    idx = _interior_indices(ps, k_radius)
    want = np.asarray(cluster.offsets)
    hits: list[int] = []
    if ps.exact is not None and cluster.exact_offsets is not None:
        want_exact = cluster.exact_offsets
        for i in idx:
            offs, sl = _offsets_at(ps, int(i), k_radius)
            if sl.stop - sl.start != len(want_exact):
                continue
            exact = tuple(ps.exact[j] - ps.exact[int(i)] for j in range(sl.start, sl.stop))
            if exact == want_exact:
                hits.append(int(i))
    else:
        for i in idx:
            offs, _ = _offsets_at(ps, int(i), k_radius)
            if len(offs) == len(want) and np.all(np.abs(offs - want) <= MERGE_TOL):
                hits.append(int(i))
    coords = ps.coords[hits]
    exact = [ps.exact[i] for i in hits] if ps.exact is not None else None
    return PointSet1D(coords, np.ones(len(hits), dtype=np.complex128), exact)


@dataclass
class ClusterFrequency:
    absolute: float  # locator points per unit length
    relative: float  # fraction of points carrying the cluster
    count: int


def cluster_frequency(ps: PointSet1D, cluster: Cluster) -> ClusterFrequency:
    """Absolute (per length) and relative (per point) cluster frequency.

    absolute is the density of the locator set over the interior span;
    relative divides by the overall point density, i.e. it is the
    fraction of interior points whose pattern matches.
    """
    t = locator_set(ps, cluster)
    idx = _interior_indices(ps, cluster.k_radius)
    span = float(ps.coords[idx[-1]] - ps.coords[idx[0]])
    if span <= 0:
        raise EmptyInterior("interior span is empty")
    absolute = len(t) / span
    relative = len(t) / len(idx)
    return ClusterFrequency(absolute, relative, len(t))


@dataclass(frozen=True)
class BumpFunction:
    """A smoothing bump.

    kind "tent": the unit-height tent of half-width eps with the
    closed-form transform eps * (sin(pi eps k) / (pi eps k))^2.
    kind "identity": a transform-one stub (smoothing by it changes
    nothing; useful as a neutral element in tests).
    kind "custom": sampled values without a closed-form transform.
    """

    kind: str = "tent"
    eps: float = 0.25
    samples: tuple = field(default=None, compare=False)

    def __post_init__(self):
        if self.kind not in ("tent", "identity", "custom"):
            raise ValueError(f"unknown bump kind {self.kind!r}")
        if self.kind == "tent" and self.eps <= 0:
            raise ValueError("tent half-width must be positive")

    @property
    def has_closed_form_ft(self) -> bool:
        return self.kind in ("tent", "identity")

    def value(self, t: np.ndarray | float) -> np.ndarray | float:
        if self.kind == "tent":
            u = np.abs(np.asarray(t, dtype=float)) / self.eps
            v = np.maximum(0.0, 1.0 - u)
            return float(v) if np.isscalar(t) else v
        if self.kind == "custom":
            ts, vs = self.samples
            return np.interp(t, ts, vs, left=0.0, right=0.0)
        raise ValueError("identity bump has no pointwise values")

    def ft(self, k: np.ndarray | float) -> np.ndarray | float:
        """Fourier transform at frequency k (closed form only)."""
        if self.kind == "identity":
            return np.ones_like(np.asarray(k, dtype=float)) if not np.isscalar(k) else 1.0
        if self.kind == "tent":
            return tent_ft(self.eps, k)
        from .errors import DiffspecError

        raise DiffspecError("custom bump has no closed-form transform")


def tent_ft(eps: float, k: np.ndarray | float) -> np.ndarray | float:
    """Transform of the unit-height tent: eps * sinc(eps k)^2.

    np.sinc is the normalized sin(pi x)/(pi x), so the k -> 0 limit is
    eps, the area under the tent.
    """
    if eps <= 0:
        raise ValueError("tent half-width must be positive")
    val = eps * np.sinc(eps * np.asarray(k, dtype=float)) ** 2
    return float(val) if np.isscalar(k) else val


def smooth_comb(ps: PointSet1D, phi: BumpFunction, t_grid: np.ndarray) -> np.ndarray:
    """Samples of (phi * comb)(t) = sum_x w_x phi(t - x) on the grid.

    With a tent narrower than the packing radius at most one point can
    contribute per t; this is asserted because it is what makes the
    smoothed comb a faithful copy of the point set.
    """
    if phi.kind == "identity":
        raise ValueError("identity bump cannot be sampled")
    t_grid = np.asarray(t_grid, dtype=float)
    if len(ps) == 0:
        raise EmptyPointSet("no points")
    eps = phi.eps if phi.kind == "tent" else float(np.max(np.abs(phi.samples[0])))
    x = ps.coords
    w = ps.weights
    out = np.zeros(len(t_grid), dtype=np.complex128)
    lo = np.searchsorted(x, t_grid - eps, side="left")
    hi = np.searchsorted(x, t_grid + eps, side="right")
    n_contrib = hi - lo
    if phi.kind == "tent" and eps < ps.packing_radius:
        assert int(n_contrib.max(initial=0)) <= 1, "tent narrower than packing radius"
    for j in range(int(n_contrib.max(initial=0))):
        has = n_contrib > j
        pts = lo[has] + j
        out[has] += w[pts] * phi.value(t_grid[has] - x[pts])
    if np.abs(out.imag).max(initial=0.0) == 0.0:
        return out.real
    return out
