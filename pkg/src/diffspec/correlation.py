"""Autocorrelation coefficients of weighted sequences and point sets.

For a complex-weighted sequence y the coefficients are

    eta(m) = lim (1/(2N+1)) sum_{n=-N..N} conj(y_n) y_{n+m},

estimated here with boundary-exact normalization: each lag divides by
the exact number of pairs the finite window supplies, so eta(-m) equals
conj(eta(m)) identically and no window taper biases small samples.

For a weighted point set the analogue divides by the covered length
instead of the pair count; the value at difference 0 is then the
weighted point density.
"""

from __future__ import annotations

import io
from dataclasses import dataclass

import numpy as np

from .errors import EmptyPointSet, NotHermitian, WindowTooShort, ZTooLarge
from .factors import BlockMap, apply_block_map
from .subshift import SymbolicWindow


@dataclass
class CorrelationSeq:
    """eta(m) for m in [-max_lag, max_lag], hermitian by construction."""

    max_lag: int
    data: np.ndarray  # index m + max_lag
    n_used: int

    def __post_init__(self):
        self.data = np.asarray(self.data, dtype=np.complex128)
        if self.data.shape != (2 * self.max_lag + 1,):
            raise ValueError("data must cover every lag in [-max_lag, max_lag]")

    def value(self, m: int) -> complex:
        if abs(m) > self.max_lag:
            raise IndexError(f"lag {m} outside [-{self.max_lag}, {self.max_lag}]")
        return complex(self.data[m + self.max_lag])

    def lags(self) -> np.ndarray:
        return np.arange(-self.max_lag, self.max_lag + 1)

    def pair_count(self, m: int) -> int:
        return self.n_used - abs(m)

    def check_hermitian(self, tol: float = 0.0):
        dev = np.abs(self.data - np.conj(self.data[::-1])).max()
        if dev > tol:
            raise NotHermitian(f"eta(-m) != conj(eta(m)), deviation {dev:g}")

    def to_csv(self) -> str:
        buf = io.StringIO()
        buf.write("lag_or_diff,re,im,n_used\n")
        for m in range(-self.max_lag, self.max_lag + 1):
            z = self.value(m)
            buf.write(f"{m},{z.real:.12g},{z.imag:.12g},{self.pair_count(m)}\n")
        return buf.getvalue()


def _correlate_values(values: np.ndarray, max_lag: int) -> CorrelationSeq:
    n = len(values)
    if n < 2 * max_lag + 4:
        raise WindowTooShort(
            f"{n} values cannot support max_lag {max_lag} (need {2 * max_lag + 4})"
        )
    data = np.empty(2 * max_lag + 1, dtype=np.complex128)
    for m in range(max_lag + 1):
        s = np.vdot(values[: n - m], values[m:])  # sum conj(y_n) y_{n+m}
        data[max_lag + m] = s / (n - m)
        data[max_lag - m] = np.conj(s) / (n - m)
    return CorrelationSeq(max_lag, data, n)


def autocorr_symbolic(window: SymbolicWindow, max_lag: int) -> CorrelationSeq:
    """Boundary-exact autocorrelation of the window's weight sequence."""
    if max_lag < 0:
        raise ValueError("max_lag must be nonnegative")
    return _correlate_values(window.values(), max_lag)


def autocorr_via_spectral_inner(
    window: SymbolicWindow, g: BlockMap, max_lag: int
) -> CorrelationSeq:
    """eta(m) as the ergodic average of conj(g(S^n x)) g(S^{n+m} x).

    g(S^n x) is g evaluated on the block of x anchored at n, so the
    average runs over exactly the n where both evaluation blocks fit.
    The result is the spectral inner product <g | U^m g> of the shift
    operator U, and coincides term by term with autocorr_symbolic of
    the factor image.
    """
    if max_lag < 0:
        raise ValueError("max_lag must be nonnegative")
    image = apply_block_map(window, g)
    z = image.values()
    n = len(z)
    if n < 2 * max_lag + 4:
        raise WindowTooShort("factor image too short for requested max_lag")
    data = np.empty(2 * max_lag + 1, dtype=np.complex128)
    for m in range(max_lag + 1):
        prod = np.conj(z[: n - m]) * z[m:]
        s = complex(np.add.reduce(prod))
        data[max_lag + m] = s / (n - m)
        data[max_lag - m] = np.conj(s) / (n - m)
    return CorrelationSeq(max_lag, data, n)


@dataclass
class PointCorrelation:
    """Eberlein coefficients of a weighted point set.

    values maps each realized difference z (|z| <= z_max, merged within
    merge_tol) to (1/volume) sum conj(w_x) w_{x+z}.  For nonnegative
    real weights every value is real and nonnegative.
    """

    z_max: float
    diffs: np.ndarray
    values: np.ndarray
    counts: np.ndarray
    radius_used: float
    merge_tol: float = 1e-9

    def value(self, z: float) -> complex:
        i = np.searchsorted(self.diffs, z)
        for j in (i - 1, i, i + 1):
            if 0 <= j < len(self.diffs) and abs(self.diffs[j] - z) <= self.merge_tol:
                return complex(self.values[j])
        return 0.0 + 0j

    def to_csv(self) -> str:
        buf = io.StringIO()
        buf.write("lag_or_diff,re,im,n_used\n")
        for z, v, c in zip(self.diffs, self.values, self.counts):
            buf.write(f"{z:.12g},{v.real:.12g},{v.imag:.12g},{int(c)}\n")
        return buf.getvalue()


def autocorr_pointset(ps, z_max: float, merge_tol: float = 1e-9) -> PointCorrelation:
    """Difference-set autocorrelation of a finite weighted point set.

    The averaging volume is the sample extent (largest minus smallest
    coordinate), so value(0) estimates the weighted density.  Requires
    z_max below the extent; merged differences use merge_tol.
    """
    x = ps.coords
    w = ps.weights
    if len(x) == 0:
        raise EmptyPointSet("no points")
    extent = float(x[-1] - x[0])
    if extent <= 0:
        raise EmptyPointSet("zero extent")
    if z_max >= extent:
        raise ZTooLarge(f"z_max {z_max} exceeds extent {extent:g}")
    vol = extent

    diffs: list[np.ndarray] = [np.zeros(1)]
    prods: list[np.ndarray] = [np.array([np.vdot(w, w)])]
    d = 1
    while d < len(x):
        dz = x[d:] - x[:-d]
        keep = dz <= z_max + merge_tol
        if not keep.any():
            break
        diffs.append(dz[keep])
        prods.append(np.conj(w[: len(dz)][keep]) * w[d:][keep])
        d += 1

    all_d = np.concatenate(diffs)
    all_p = np.concatenate(prods)
    order = np.argsort(all_d, kind="stable")
    all_d = all_d[order]
    all_p = all_p[order]
    # merge differences agreeing within merge_tol
    group = np.zeros(len(all_d), dtype=np.int64)
    if len(all_d) > 1:
        group[1:] = np.cumsum(np.diff(all_d) > merge_tol)
    n_groups = int(group[-1]) + 1 if len(group) else 0
    sums = np.zeros(n_groups, dtype=np.complex128)
    reps = np.zeros(n_groups)
    counts = np.zeros(n_groups, dtype=np.int64)
    np.add.at(sums, group, all_p)
    np.add.at(counts, group, 1)
    np.add.at(reps, group, all_d)
    reps /= counts

    # mirror to negative differences (z=0 group is first)
    neg_reps = -reps[1:][::-1]
    neg_sums = np.conj(sums[1:][::-1])
    neg_counts = counts[1:][::-1]
    diffs_full = np.concatenate([neg_reps, reps])
    values_full = np.concatenate([neg_sums, sums]) / vol
    counts_full = np.concatenate([neg_counts, counts])
    return PointCorrelation(
        z_max, diffs_full, values_full, counts_full, extent / 2.0, merge_tol
    )


def tent_autoconv(eps: float, t: np.ndarray | float) -> np.ndarray | float:
    """(phi * phi~)(t) for the unit-height tent of half-width eps.

    Piecewise cubic with support [-2 eps, 2 eps]; the value at 0 is the
    squared integral 2 eps / 3.
    """
    u = np.abs(np.asarray(t, dtype=float)) / eps
    out = np.zeros_like(u)
    core = u <= 1.0
    out[core] = 2.0 / 3.0 - u[core] ** 2 + 0.5 * u[core] ** 3
    edge = (u > 1.0) & (u < 2.0)
    out[edge] = (2.0 - u[edge]) ** 3 / 6.0
    out = out * eps
    if np.isscalar(t):
        return float(out)
    return out


def regularised_autocorr(pc: PointCorrelation, phi, t_grid: np.ndarray) -> np.ndarray:
    """Sampled autocorrelation of the phi-smoothed comb.

    gamma_phi(t) = sum_z value(z) (phi * phi~)(t - z); with a tent of
    half-width eps only differences within 2 eps of t contribute.
    """
    t_grid = np.asarray(t_grid, dtype=float)
    if phi.kind != "tent":
        raise ValueError("regularised autocorrelation needs a tent bump")
    eps = phi.eps
    out = np.zeros(len(t_grid), dtype=np.complex128)
    diffs = pc.diffs
    vals = pc.values
    for i, t in enumerate(t_grid):
        lo = np.searchsorted(diffs, t - 2 * eps)
        hi = np.searchsorted(diffs, t + 2 * eps)
        if hi > lo:
            out[i] = np.sum(vals[lo:hi] * tent_autoconv(eps, t - diffs[lo:hi]))
    if np.abs(out.imag).max(initial=0.0) < 1e-12:
        return out.real
    return out
