"""Spectral estimation: intensities, atom detection, grid measures.

The finite-sample intensity of a weighted sequence y at frequency k is

    I_N(k) = | sum_n y_n e^{-2 pi i k n} |^2 / N^2

over a block of N sites; for a point-set comb the sum runs over a
window of length 2R and the normalizer is (2R)^2.  At a Bragg peak
I_N stabilizes as N doubles; in the continuous part of the spectrum it
decays.  Atom detection turns that dichotomy into a criterion: a
candidate is an atom when the intensity is positive and its relative
variation across the last two schedule doublings stays within rel_tol.

Spectral distribution functions are represented as measures on a
uniform grid; the Fejer (Cesaro) average of a correlation sequence
gives a nonnegative density whose grid masses total eta(0).
"""

from __future__ import annotations

import io
import json
import warnings
from dataclasses import dataclass

import numpy as np

from .correlation import CorrelationSeq
from .delone import BumpFunction, PointSet1D
from .errors import (
    DiffspecError,
    GridMismatch,
    OutOfRange,
    ZeroMass,
)
from .modelset import FourierModuleElement, intensity_at
from .subshift import SymbolicWindow


def intensity_symbolic(window: SymbolicWindow, k: float, n_sites: int) -> float:
    """I_N(k) over a block of n_sites letters.

    The block starts at the index origin when the window allows, so
    doubling N extends a substitution-aligned sample; it slides left
    only when the right half is too short.
    """
    if n_sites < 1 or n_sites > len(window):
        raise OutOfRange(f"N = {n_sites} outside window of {len(window)} sites")
    start = max(window.lo, min(0, window.hi - n_sites + 1))
    idx = np.arange(start, start + n_sites)
    vals = window.values()[start - window.lo : start - window.lo + n_sites]
    s = np.sum(vals * np.exp(-2j * np.pi * k * idx))
    return float(abs(s) ** 2) / n_sites**2


def intensity_estimate(source, k, n_or_r) -> float:
    """Dispatch on the source type: sequence block size N or radius R."""
    if isinstance(source, SymbolicWindow):
        kv = k.value if isinstance(k, FourierModuleElement) else float(k)
        return intensity_symbolic(source, kv, int(n_or_r))
    if isinstance(source, PointSet1D):
        return intensity_at(source, k, float(n_or_r))
    raise TypeError(f"cannot estimate intensity of {type(source).__name__}")


def sampled_comb_intensity(
    t_samples: np.ndarray, f_samples: np.ndarray, k: float, norm_length: float
) -> float:
    """Quadrature intensity |integral f(t) e^{-2 pi i k t} dt|^2 / L^2.

    Plain Riemann sum on a uniform grid; accurate when the grid step is
    small against both 1/k and the sample's finest feature.
    """
    t_samples = np.asarray(t_samples, dtype=float)
    h = float(t_samples[1] - t_samples[0])
    s = h * np.sum(f_samples * np.exp(-2j * np.pi * k * t_samples))
    return float(abs(s) ** 2) / norm_length**2


@dataclass
class Atom:
    k: float
    intensity: float
    stability: float
    k_exact: tuple[int, int] | None = None


@dataclass
class SpectralEstimate:
    """Detected atoms plus an optional sampled density grid."""

    atoms: list[Atom]
    schedule: list[float]
    grid: "MeasureOnGrid | None" = None

    def total_atom_mass(self) -> float:
        return float(sum(a.intensity for a in self.atoms))

    def atom_at(self, k: float, tol: float = 1e-9) -> Atom | None:
        for a in self.atoms:
            if abs(a.k - k) <= tol:
                return a
        return None

    def to_json(self) -> str:
        obj = {
            "atoms": [
                {
                    "k": a.k,
                    "k_exact": list(a.k_exact) if a.k_exact is not None else None,
                    "intensity": a.intensity,
                    "stability": a.stability,
                }
                for a in self.atoms
            ],
            "grid": None
            if self.grid is None
            else {
                "min": self.grid.lo,
                "max": self.grid.hi,
                "step": self.grid.step,
                "values": [float(v) for v in self.grid.masses],
            },
            "schedule": list(self.schedule),
        }
        return json.dumps(obj, indent=2)

    def atoms_csv(self) -> str:
        buf = io.StringIO()
        buf.write("k,intensity,stability\n")
        for a in self.atoms:
            buf.write(f"{a.k:.12g},{a.intensity:.12g},{a.stability:.12g}\n")
        return buf.getvalue()


def detect_atoms(
    source,
    candidates,
    schedule,
    rel_tol: float = 0.05,
    min_intensity: float = 1e-6,
    n_jobs: int = 1,
) -> SpectralEstimate:
    """Classify each candidate frequency as atom or not.

    schedule is an increasing list (at least 3 entries) of block sizes
    N (sequences) or radii R (point sets); a candidate is kept when its
    intensity at the largest size exceeds min_intensity and the maximal
    relative variation across the last two doublings is at most
    rel_tol.  Results are sorted by frequency regardless of evaluation
    order, so parallel evaluation cannot change the output.
    """
    schedule = list(schedule)
    if len(schedule) < 3:
        raise ValueError("schedule needs at least 3 sizes")
    if any(b <= a for a, b in zip(schedule, schedule[1:])):
        raise ValueError("schedule must increase")

    def eval_candidate(k) -> Atom | None:
        kv = k.value if isinstance(k, FourierModuleElement) else float(k)
        vals = [intensity_estimate(source, k, s) for s in schedule]
        last = vals[-3:]
        rels = [
            abs(b - a) / max(abs(a), abs(b), 1e-300)
            for a, b in zip(last, last[1:])
        ]
        stability = max(rels)
        if stability <= rel_tol and vals[-1] >= min_intensity:
            exact = (k.a, k.b) if isinstance(k, FourierModuleElement) else None
            return Atom(kv, vals[-1], stability, exact)
        return None

    if n_jobs > 1:
        from concurrent.futures import ThreadPoolExecutor

        with ThreadPoolExecutor(max_workers=n_jobs) as pool:
            found = list(pool.map(eval_candidate, candidates))
    else:
        found = [eval_candidate(k) for k in candidates]
    atoms = sorted((a for a in found if a is not None), key=lambda a: a.k)
    return SpectralEstimate(atoms, [float(s) for s in schedule])


# Sums that vanish identically leave only rounding residue; one surviving
# site would already give I = 1/N^2, many orders above this floor.
NOISE_FLOOR = 1e-18


def intensity_ratios(source, candidates, schedule) -> np.ndarray:
    """Mean of I_{next}/I_{prev} over candidates, one per schedule step.

    Pairs where both intensities sit below NOISE_FLOOR count as fully
    decayed (ratio 0): the underlying sums are exact zeros and the
    stored values are rounding residue, so their quotient carries no
    information.
    """
    schedule = list(schedule)
    ratios = np.zeros((len(candidates), len(schedule) - 1))
    for i, k in enumerate(candidates):
        vals = [intensity_estimate(source, k, s) for s in schedule]
        for j in range(len(schedule) - 1):
            if max(vals[j], vals[j + 1]) < NOISE_FLOOR:
                ratios[i, j] = 0.0
            else:
                ratios[i, j] = vals[j + 1] / max(vals[j], NOISE_FLOOR)
    return ratios.mean(axis=0)


def sobol_candidates(n: int) -> np.ndarray:
    """n deterministic quasirandom frequencies in the open interval (0, 1)."""
    from scipy.stats import qmc

    m = 1
    while 2**m < 4 * n:
        m += 1
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        pts = qmc.Sobol(d=1, scramble=False).random(2**m).ravel()
    pts = pts[(pts > 0.0) & (pts < 1.0)]
    return np.sort(pts[:n])


def kronecker_candidates(n: int) -> np.ndarray:
    """n irrational frequencies frac(i * golden mean); never dyadic."""
    g = (np.sqrt(5.0) - 1.0) / 2.0
    return np.sort((np.arange(1, n + 1) * g) % 1.0)


@dataclass(frozen=True)
class UniformGrid:
    lo: float
    hi: float
    n: int
    circular: bool = False

    def __post_init__(self):
        if self.n < 1 or self.hi <= self.lo:
            raise ValueError("grid needs positive width and at least one cell")

    @property
    def step(self) -> float:
        return (self.hi - self.lo) / self.n

    def centers(self) -> np.ndarray:
        return self.lo + (np.arange(self.n) + 0.5) * self.step

    def cell_of(self, k: float) -> int:
        if self.circular:
            width = self.hi - self.lo
            k = self.lo + ((k - self.lo) % width)
        if not self.lo <= k <= self.hi:
            raise OutOfRange(f"{k} outside [{self.lo}, {self.hi}]")
        return min(int((k - self.lo) / self.step), self.n - 1)


CIRCLE_GRID = UniformGrid(0.0, 1.0, 1024, circular=True)


@dataclass
class MeasureOnGrid:
    """A nonnegative measure given by one mass per grid cell."""

    grid: UniformGrid
    masses: np.ndarray

    def __post_init__(self):
        self.masses = np.asarray(self.masses, dtype=float)
        if self.masses.shape != (self.grid.n,):
            raise ValueError("one mass per cell required")

    @property
    def lo(self) -> float:
        return self.grid.lo

    @property
    def hi(self) -> float:
        return self.grid.hi

    @property
    def step(self) -> float:
        return self.grid.step

    @property
    def total_mass(self) -> float:
        return float(self.masses.sum())

    def check_compatible(self, other: "MeasureOnGrid"):
        if self.grid != other.grid:
            raise GridMismatch("measures live on different grids")

    def normalized(self) -> "MeasureOnGrid":
        t = self.total_mass
        if t <= 0:
            raise ZeroMass("cannot normalize a measure without mass")
        return MeasureOnGrid(self.grid, self.masses / t)

    def convolve(self, other: "MeasureOnGrid") -> "MeasureOnGrid":
        """Convolution on the grid; circular grids wrap exactly.

        On a non-circular grid mass pushed outside the window is
        truncated; the result is renormalized with a warning when the
        loss matters.
        """
        self.check_compatible(other)
        if self.grid.circular:
            fa = np.fft.rfft(self.masses)
            fb = np.fft.rfft(other.masses)
            conv = np.fft.irfft(fa * fb, n=self.grid.n)
            return MeasureOnGrid(self.grid, np.maximum(conv, 0.0))
        full = np.convolve(self.masses, other.masses)
        # cell i + j of the full convolution sits at lo + lo + (i + j) h;
        # keep the part overlapping the original window
        shift = int(round(-self.grid.lo / self.grid.step))
        lo_i = shift
        vals = full[lo_i : lo_i + self.grid.n]
        if len(vals) < self.grid.n:
            vals = np.pad(vals, (0, self.grid.n - len(vals)))
        before = self.total_mass * other.total_mass
        lost = before - vals.sum()
        out = MeasureOnGrid(self.grid, np.maximum(vals, 0.0))
        if before > 0 and lost / before > 1e-9:
            warnings.warn(
                f"convolution truncated {lost / before:.2e} of the mass; renormalizing"
            )
            out = MeasureOnGrid(self.grid, out.masses * (before / vals.sum()))
        return out

    @classmethod
    def from_atoms(cls, atoms: list[Atom], grid: UniformGrid) -> "MeasureOnGrid":
        masses = np.zeros(grid.n)
        for a in atoms:
            masses[grid.cell_of(a.k)] += a.intensity
        return cls(grid, masses)


def fejer_density(eta: CorrelationSeq, t: np.ndarray | float) -> np.ndarray | float:
    """The Cesaro-averaged trigonometric polynomial of eta at t.

    density(t) = sum_{|m| <= M} (1 - |m|/(M+1)) eta(m) e^{-2 pi i m t};
    real by hermiticity and nonnegative up to the finite-sample wobble
    of the input sequence.
    """
    eta.check_hermitian(1e-12)
    m = eta.max_lag
    lags = np.arange(1, m + 1)
    w = 1.0 - lags / (m + 1.0)
    coeff = eta.data[m + 1 :]  # eta(1) ... eta(M)
    t_arr = np.atleast_1d(np.asarray(t, dtype=float))
    phases = np.exp(-2j * np.pi * np.outer(t_arr, lags))
    vals = eta.value(0).real + 2.0 * (phases * (w * coeff)).real.sum(axis=1)
    return float(vals[0]) if np.isscalar(t) else vals


def spectral_distribution(
    eta: CorrelationSeq, grid: UniformGrid = CIRCLE_GRID
) -> MeasureOnGrid:
    """Grid measure of the Fejer average of eta.

    Cell masses are midpoint-rule integrals of the density; negative
    quadrature wobble below 1e-9 is floored to zero.  With more cells
    than 2 max_lag the midpoint rule is exact and the total mass equals
    eta(0).
    """
    density = fejer_density(eta, grid.centers())
    masses = np.maximum(density, 0.0) * grid.step
    return MeasureOnGrid(grid, masses)


def maximal_measure_mix(measures: list[MeasureOnGrid]) -> MeasureOnGrid:
    """The convex-style mixture sum_n mu_n / (2^n (1 + |mu_n|)), n from 1.

    Every input is absolutely continuous with respect to the result, so
    the mixture dominates each summand's null sets; the weights keep
    the total finite regardless of how many measures are combined.
    """
    if not measures:
        raise ZeroMass("empty mixture")
    grid = measures[0].grid
    out = np.zeros(grid.n)
    for n, mu in enumerate(measures, start=1):
        measures[0].check_compatible(mu)
        out += mu.masses / (2.0**n * (1.0 + mu.total_mass))
    return MeasureOnGrid(grid, out)


def nu_family(
    gamma_hat: MeasureOnGrid, h_samples: np.ndarray, n_max: int
) -> list[MeasureOnGrid]:
    """nu_1 = normalized h * gamma_hat and its convolution powers.

    h must be strictly positive on the grid so that nu_1 is equivalent
    to gamma_hat; the n-th entry is the n-fold convolution nu_1^{*n}.
    Each returned measure keeps total mass 1 to rounding.
    """
    h = np.asarray(h_samples, dtype=float)
    if h.shape != (gamma_hat.grid.n,):
        raise GridMismatch("h must be sampled on the measure's grid")
    if np.any(h <= 0):
        raise ValueError("h must be strictly positive")
    if n_max < 1:
        raise ValueError("n_max must be at least 1")
    nu1 = MeasureOnGrid(gamma_hat.grid, gamma_hat.masses * h).normalized()
    out = [nu1]
    for _ in range(n_max - 1):
        out.append(out[-1].convolve(nu1))
    return out


def regularised_diffraction(est: SpectralEstimate, phi: BumpFunction) -> SpectralEstimate:
    """Push the diffraction through phi-smoothing: multiply by |phi^|^2.

    Smoothing the comb with phi multiplies every atom intensity (and
    any density values) by |phi^(k)|^2; requires a bump with a
    closed-form transform.
    """
    if not phi.has_closed_form_ft:
        raise DiffspecError("smoothing transfer needs a closed-form transform")
    atoms = [
        Atom(a.k, a.intensity * float(phi.ft(a.k)) ** 2, a.stability, a.k_exact)
        for a in est.atoms
    ]
    grid = est.grid
    if grid is not None:
        factors = np.asarray(phi.ft(grid.grid.centers()), dtype=float) ** 2
        grid = MeasureOnGrid(grid.grid, grid.masses * factors)
    return SpectralEstimate(atoms, list(est.schedule), grid)
