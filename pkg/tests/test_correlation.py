"""Autocorrelation of sequences and point sets, smoothing of the latter."""

import numpy as np
import pytest

from diffspec.correlation import (
    autocorr_pointset,
    autocorr_symbolic,
    autocorr_via_spectral_inner,
    regularised_autocorr,
    tent_autoconv,
)
from diffspec.delone import BumpFunction, PointSet1D
from diffspec.errors import NotHermitian, WindowTooShort, ZTooLarge
from diffspec.factors import indicator_block_map
from diffspec.subshift import SymbolicWindow, fixed_point_window, rule_by_name


def period2(n=64):
    letters = np.tile([0, 1], n).astype(np.int16)
    return SymbolicWindow(letters, -n, weights={0: 1.0, 1: -1.0})


def eta_tm(m, _memo={0: 1.0, 1: -1.0 / 3.0}):
    """Lag values of the two-letter parity sequence, solved recursively.

    The odd-lag relation at m = 1 closes on itself and pins the value
    -1/3; everything else follows from halving the lag.
    """
    if m not in _memo:
        if m % 2 == 0:
            _memo[m] = eta_tm(m // 2)
        else:
            _memo[m] = -(eta_tm(m // 2) + eta_tm(m // 2 + 1)) / 2.0
    return _memo[m]


class TestSymbolic:
    def test_alternating_sequence_is_exactly_periodic(self):
        eta = autocorr_symbolic(period2(), 8)
        for m in range(-8, 9):
            assert eta.value(m) == (-1.0) ** m

    def test_constant_sequence_gives_all_ones(self):
        w = SymbolicWindow(np.zeros(64, dtype=np.int16), 0)
        eta = autocorr_symbolic(w, 5)
        assert all(eta.value(m) == 1.0 for m in range(-5, 6))

    def test_pair_count_is_boundary_exact(self):
        eta = autocorr_symbolic(period2(16), 4)
        assert eta.pair_count(0) == 32
        assert eta.pair_count(3) == 29
        assert eta.pair_count(-3) == 29

    def test_window_too_short(self):
        w = SymbolicWindow(np.zeros(10, dtype=np.int16), 0)
        with pytest.raises(WindowTooShort):
            autocorr_symbolic(w, 4)

    def test_hermitian_symmetry_with_complex_weights(self):
        w = fixed_point_window(
            rule_by_name("thue-morse"), 0, 512, weights={0: 1.0 + 0.5j, 1: -0.25j}
        )
        eta = autocorr_symbolic(w, 16)
        eta.check_hermitian(0.0)
        for m in range(1, 17):
            assert eta.value(-m) == np.conj(eta.value(m))

    def test_check_hermitian_raises_on_tampered_data(self):
        eta = autocorr_symbolic(period2(), 4)
        eta.data[0] += 1e-3
        with pytest.raises(NotHermitian):
            eta.check_hermitian(1e-9)

    def test_thue_morse_recursion_oracle(self):
        w = fixed_point_window(
            rule_by_name("thue-morse"), 0, 2**16, weights={0: 1.0, 1: -1.0}
        )
        eta = autocorr_symbolic(w, 32)
        dev = max(abs(eta.value(m).real - eta_tm(m)) for m in range(33))
        assert dev <= 1e-3

    def test_csv_has_one_row_per_lag(self):
        csv = autocorr_symbolic(period2(), 3).to_csv()
        lines = csv.strip().splitlines()
        assert lines[0] == "lag_or_diff,re,im,n_used"
        assert len(lines) == 8


class TestSpectralInnerRoute:
    def test_matches_direct_route_for_indicator(self):
        w = fixed_point_window(rule_by_name("fibonacci"), 0, 2048)
        g = indicator_block_map((0, 1))
        from diffspec.factors import apply_block_map

        direct = autocorr_symbolic(apply_block_map(w, g), 16)
        inner = autocorr_via_spectral_inner(w, g, 16)
        dev = max(abs(direct.value(m) - inner.value(m)) for m in range(-16, 17))
        assert dev <= 1e-14

    def test_lag_zero_is_word_frequency(self):
        w = fixed_point_window(rule_by_name("fibonacci"), 0, 4096)
        from diffspec.subshift import word_frequency_empirical

        nu = autocorr_via_spectral_inner(w, indicator_block_map((0, 0)), 0).value(0).real
        counted, _ = word_frequency_empirical(w, (0, 0))
        assert nu == pytest.approx(counted, abs=1e-12)


class TestPointSets:
    def test_integer_comb_values(self):
        ps = PointSet1D(np.arange(5.0))
        pc = autocorr_pointset(ps, 3.0)
        # extent 4, counts 5,4,3,2 at differences 0,1,2,3
        assert pc.value(0.0) == pytest.approx(5 / 4)
        assert pc.value(1.0) == pytest.approx(1.0)
        assert pc.value(3.0) == pytest.approx(2 / 4)
        assert pc.value(-2.0) == pytest.approx(3 / 4)

    def test_missing_difference_is_zero(self):
        ps = PointSet1D(np.arange(5.0))
        pc = autocorr_pointset(ps, 3.0)
        assert pc.value(0.5) == 0.0

    def test_weights_conjugated_on_the_left(self):
        ps = PointSet1D(np.arange(4.0), weights=np.array([1j, 1.0, 1j, 1.0]))
        pc = autocorr_pointset(ps, 2.0)
        # both difference-2 pairs multiply to 1, extent is 3
        assert pc.value(2.0) == pytest.approx(2 / 3)
        assert pc.value(-2.0) == pytest.approx(np.conj(pc.value(2.0)))
        # difference 1 alternates conj(1j)*1 and conj(1)*1j
        assert pc.value(1.0) == pytest.approx((2 * (-1j) + 1j) / 3)

    def test_merge_tolerance_groups_jittered_differences(self):
        coords = np.array([0.0, 1.0, 2.0 + 1e-12])
        pc = autocorr_pointset(PointSet1D(coords), 1.5, merge_tol=1e-9)
        assert pc.value(1.0) == pytest.approx(1.0)
        assert len(pc.diffs[np.abs(pc.diffs - 1.0) < 0.1]) == 1

    def test_z_too_large(self):
        with pytest.raises(ZTooLarge):
            autocorr_pointset(PointSet1D(np.arange(4.0)), 100.0)


class TestTentSmoothing:
    def test_autoconvolution_center_and_support(self):
        eps = 0.25
        assert tent_autoconv(eps, 0.0) == pytest.approx(2 * eps / 3)
        assert tent_autoconv(eps, 2 * eps) == 0.0
        assert tent_autoconv(eps, -2 * eps) == 0.0
        assert tent_autoconv(eps, 5.0) == 0.0

    def test_autoconvolution_matches_quadrature(self):
        eps = 0.3
        s = np.linspace(-eps, eps, 20001)
        h = s[1] - s[0]
        tent = lambda u: np.maximum(0.0, 1.0 - np.abs(u) / eps)
        for t in (0.0, 0.1, 0.25, 0.45, 0.55):
            direct = float(np.sum(tent(s) * tent(t - s)) * h)
            assert tent_autoconv(eps, t) == pytest.approx(direct, abs=1e-6)

    def test_autoconvolution_is_even(self):
        t = np.linspace(-0.6, 0.6, 101)
        np.testing.assert_allclose(tent_autoconv(0.3, t), tent_autoconv(0.3, -t))

    def test_regularised_autocorr_of_integer_comb(self):
        ps = PointSet1D(np.arange(3.0))
        pc = autocorr_pointset(ps, 1.5)
        eps = 0.25
        t = np.array([0.0, 1.0, 0.5])
        got = regularised_autocorr(pc, BumpFunction("tent", eps), t)
        # masses 3/2 at 0 and 1 at +-1; the tent pair is supported on |t| < 1/2
        assert got[0] == pytest.approx(1.5 * tent_autoconv(eps, 0.0))
        assert got[1] == pytest.approx(1.0 * tent_autoconv(eps, 0.0))
        assert got[2] == pytest.approx(0.0)
