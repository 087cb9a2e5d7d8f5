"""Named property suites shared by the command line and the test suite.

Each suite checks one identity the library is built around and returns a
SuiteReport with a pass flag and the measured deviations, so callers can
print a one-line verdict or assert on the numbers.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .correlation import autocorr_symbolic, autocorr_via_spectral_inner
from .delone import BumpFunction, enumerate_k_clusters, locator_set, smooth_comb, tent_ft
from .errors import DiffspecError
from .factors import BlockMap, apply_block_map, identity_map, indicator_block_map, xor_map
from .modelset import (
    intensity_at,
    is_extinct,
    module_box,
    silver_mean_chain,
    verify_inflation_identity,
)
from .spectral import sampled_comb_intensity, spectral_distribution
from .subshift import (
    SymbolicWindow,
    dictionary,
    fixed_point_window,
    letter_frequencies_pf,
    letter_id,
    rule_by_name,
    word_frequency_empirical,
)

SUITE_NAMES = ("dual-route", "word-freq", "smoothing", "inflation", "extinction")


@dataclass
class SuiteReport:
    name: str
    ok: bool
    metrics: dict[str, float]
    lines: list[str] = field(default_factory=list)

    def summary(self) -> str:
        verdict = "PASS" if self.ok else "FAIL"
        parts = [f"suite {self.name}: {verdict}"]
        for key, val in self.metrics.items():
            parts.append(f"  {key} = {val:.6g}")
        parts.extend(f"  {line}" for line in self.lines)
        return "\n".join(parts)


def named_block_map(name: str, window: SymbolicWindow) -> BlockMap:
    """Resolve a factor named on the command line.

    Accepts "identity", "xor" (two-letter alphabets only), and
    "indicator:WORD" for the one-zero indicator of WORD.
    """
    if name == "identity":
        return identity_map(window)
    if name == "xor":
        return xor_map()
    if name.startswith("indicator:"):
        word_text = name.split(":", 1)[1]
        if not word_text:
            raise DiffspecError("indicator factor needs a word, e.g. indicator:ab")
        n_letters = int(window.letters.max()) + 1
        word = tuple(letter_id(c, n_letters) for c in word_text)
        return indicator_block_map(word)
    raise DiffspecError(f"unknown factor {name!r}; known: identity, xor, indicator:WORD")


def verify_dual_route(
    rule_name: str = "thue-morse",
    g_name: str = "xor",
    min_len: int = 2**16,
    max_lag: int = 32,
    dev_tol: float = 1e-12,
    dist_lags: int = 512,
    dist_tol: float = 0.05,
) -> SuiteReport:
    """Dual-route autocorrelation and its distribution on the circle.

    Route one averages conj(y_n) y_{n+m} over the factor image y; route
    two takes the inner products <g | U^m g> along the original window.
    Both the term-by-term deviation and the L1 distance between the two
    Fejer distributions on the circle grid must be small.
    """
    rule = rule_by_name(rule_name)
    window = fixed_point_window(rule, 0, min_len)
    g = named_block_map(g_name, window)
    image = apply_block_map(window, g)

    lags = max(max_lag, dist_lags)
    eta_inner = autocorr_via_spectral_inner(window, g, lags)
    eta_direct = autocorr_symbolic(image, lags)
    dev = max(
        abs(eta_direct.value(m) - eta_inner.value(m))
        for m in range(-max_lag, max_lag + 1)
    )
    d_inner = spectral_distribution(eta_inner)
    d_direct = spectral_distribution(eta_direct)
    l1 = float(np.abs(d_inner.masses - d_direct.masses).sum())

    ok = dev <= dev_tol and l1 <= dist_tol
    return SuiteReport(
        "dual-route",
        ok,
        {"max_abs_dev": dev, "grid_l1": l1, "lags": float(max_lag)},
    )


def verify_word_freq(
    rule_name: str = "fibonacci",
    max_word_len: int = 4,
    min_len: int = 2**16,
    tol: float = 1e-3,
) -> SuiteReport:
    """Word frequencies recovered from lag-zero spectral inner products.

    nu_w = <1_w | 1_w> on one sample must match direct counting on an
    independently grown sample twice the size, and the letter values
    must match the Perron eigenvector of the substitution matrix.
    """
    rule = rule_by_name(rule_name)
    window = fixed_point_window(rule, 0, min_len)
    counting_window = fixed_point_window(rule, 0, 2 * min_len)

    words = sorted(dictionary(window, max_word_len), key=lambda w: (len(w), w))
    lines = []
    word_dev = 0.0
    nu_letters = {}
    for w in words:
        g = indicator_block_map(w)
        nu = autocorr_via_spectral_inner(window, g, 0).value(0).real
        counted, _ = word_frequency_empirical(counting_window, w)
        word_dev = max(word_dev, abs(nu - counted))
        if len(w) == 1:
            nu_letters[w[0]] = nu
        name = "".join(chr(ord("a") + c) for c in w)
        lines.append(f"nu[{name}] = {nu:.6f}  counted {counted:.6f}")

    pf = letter_frequencies_pf(rule)
    letter_dev = max(abs(nu_letters[i] - pf[i]) for i in nu_letters)

    ok = word_dev <= tol and letter_dev <= tol
    return SuiteReport(
        "word-freq",
        ok,
        {
            "max_word_dev": word_dev,
            "max_letter_dev": letter_dev,
            "words": float(len(words)),
        },
        lines,
    )


def verify_smoothing(
    n_points: int = 2**13,
    k_radius: float = 1.1,
    eps: float = 0.25,
    t_step: float = 0.005,
    top: int = 10,
    tol: float = 0.01,
) -> SuiteReport:
    """Smoothing factorizes through the transform of the bump.

    The intensity of the tent-smoothed locator comb at k must equal
    tent_ft(eps, k)^2 times the raw comb intensity; checked at the
    strongest raw peaks, where the quadrature route is well conditioned.
    """
    chain = silver_mean_chain(n_points)
    clusters = enumerate_k_clusters(chain, k_radius)
    singleton = next(c for c, _ in clusters if c.offsets == (0,))
    locator = locator_set(chain, singleton)

    candidates = module_box(6, 3, 3.0)
    ranked = sorted(candidates, key=lambda k: -intensity_at(locator, k))[:top]

    phi = BumpFunction("tent", eps)
    x0 = float(locator.coords[0])
    x1 = float(locator.coords[-1])
    t_grid = np.arange(x0 - 2 * eps, x1 + 2 * eps, t_step)
    f = smooth_comb(locator, phi, t_grid)

    worst = 0.0
    lines = []
    for k in ranked:
        raw = intensity_at(locator, k)
        smoothed = sampled_comb_intensity(t_grid, f, k.value, locator.extent)
        target = tent_ft(eps, k.value) ** 2 * raw
        rel = abs(smoothed - target) / max(target, 1e-300)
        worst = max(worst, rel)
        lines.append(f"k = {k.value:+.6f}  raw {raw:.4e}  smoothed {smoothed:.4e}  rel {rel:.2e}")

    ok = worst <= tol
    return SuiteReport(
        "smoothing",
        ok,
        {"max_rel_error": worst, "peaks": float(len(ranked)), "eps": eps},
        lines,
    )


def verify_inflation(
    n_points: int = 100000,
    top: int = 20,
    rel_tol: float = 0.02,
    transport_floor: float = 1e-3,
) -> SuiteReport:
    """Intensities of the inflated chain reproduce the original at lambda k.

    The comparison carries the squared density ratio as its constant,
    and extinctions of the original chain must not survive inflation.
    """
    chain = silver_mean_chain(n_points)
    candidates = module_box(6, 3, 3.0)
    report = verify_inflation_identity(chain, candidates, top=top)
    transport_min = min((v for _, v in report.extinction_transport), default=np.inf)

    ok = report.max_rel_error <= rel_tol and transport_min > transport_floor
    lines = [
        f"k = {row.k.value:+.6f}  inflated {row.inflated_intensity:.4e}  "
        f"scaled original {report.scale_constant * row.original_at_lambda_k:.4e}  "
        f"rel {row.rel_error:.2e}"
        for row in report.rows
    ]
    return SuiteReport(
        "inflation",
        ok,
        {
            "max_rel_error": report.max_rel_error,
            "density_ratio": report.density_ratio,
            "scale_constant": report.scale_constant,
            "min_extinction_transport": transport_min,
        },
        lines,
    )


def verify_extinction(
    n_points: int = 100000,
    a_max: int = 6,
    b_max: int = 3,
    k_max: float = 3.0,
    threshold: float = 1e-4,
) -> SuiteReport:
    """Intensity vanishes exactly at the predicted module elements.

    Over the module box without 0, intensity below the threshold must
    occur exactly at b = 0 with a even; both the largest intensity on
    that set and the smallest off it are reported.
    """
    chain = silver_mean_chain(n_points)
    worst_extinct = 0.0
    smallest_live = np.inf
    misclassified = 0
    for k in module_box(a_max, b_max, k_max):
        if k.a == 0 and k.b == 0:
            continue
        i = intensity_at(chain, k)
        if is_extinct(k):
            worst_extinct = max(worst_extinct, i)
            if i >= threshold:
                misclassified += 1
        else:
            smallest_live = min(smallest_live, i)
            if i < threshold:
                misclassified += 1

    ok = misclassified == 0
    return SuiteReport(
        "extinction",
        ok,
        {
            "max_extinct_intensity": worst_extinct,
            "min_live_intensity": smallest_live,
            "misclassified": float(misclassified),
        },
    )


_SUITES = {
    "dual-route": verify_dual_route,
    "word-freq": verify_word_freq,
    "smoothing": verify_smoothing,
    "inflation": verify_inflation,
    "extinction": verify_extinction,
}


def run_suite(name: str, **kwargs) -> SuiteReport:
    """Run one named suite, forwarding only the keywords it accepts."""
    if name not in _SUITES:
        raise DiffspecError(f"unknown suite {name!r}; known: {', '.join(SUITE_NAMES)}")
    fn = _SUITES[name]
    accepted = fn.__code__.co_varnames[: fn.__code__.co_argcount]
    return fn(**{k: v for k, v in kwargs.items() if k in accepted and v is not None})
