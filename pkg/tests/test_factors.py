"""Sliding block maps: application, composition, serialization, equivariance."""

import numpy as np
import pytest

from diffspec.errors import MissingTableEntry, WindowTooShort
from diffspec.factors import (
    BlockMap,
    apply_block_map,
    compose,
    evaluate_at,
    identity_map,
    indicator_block_map,
    verify_factor_equivariance,
    xor_map,
)
from diffspec.subshift import SymbolicWindow, fixed_point_window, rule_by_name, word_occurrences


def tm_window(min_len=256, **kw):
    return fixed_point_window(rule_by_name("thue-morse"), 0, min_len, **kw)


class TestBlockMapBasics:
    def test_output_lookup_and_default(self):
        g = BlockMap(0, 2, {(0, 1): 1.0}, default=0.0)
        assert g.output((0, 1)) == 1.0
        assert g.output((1, 1)) == 0.0

    def test_missing_entry_without_default(self):
        g = BlockMap(0, 2, {(0, 1): 1.0})
        with pytest.raises(MissingTableEntry):
            g.output((1, 1))

    def test_serialize_parse_round_trip(self):
        g = BlockMap(-1, 3, {(0, 1, 0): 0.5 + 2.0j, (1, 0, 0): -1.0}, default=0.25)
        back = BlockMap.parse(g.serialize())
        assert back.offset == g.offset and back.length == g.length
        assert back.table == g.table and back.default == g.default

    def test_parse_rejects_garbage(self):
        with pytest.raises(ValueError):
            BlockMap.parse("not a block map\n")


class TestApplication:
    def test_identity_map_reproduces_values(self):
        w = tm_window(64, weights={0: 1.0, 1: -1.0})
        image = apply_block_map(w, identity_map(w))
        assert image.lo == w.lo and len(image) == len(w)
        np.testing.assert_array_equal(image.values(), w.values())

    def test_xor_image_of_thue_morse_is_period_doubling(self):
        # the two-block parity factor maps one fixed point onto the other;
        # exact from the origin on, and a legal hull element on the left
        w = tm_window(512)
        image = apply_block_map(w, xor_map())
        pd = fixed_point_window(
            rule_by_name("period-doubling"), 0, 256, weights={0: 1.0, 1: 0.0}
        )
        hi = min(image.hi, pd.hi)
        got = [image.values()[n - image.lo] for n in range(0, hi + 1)]
        want = [pd.values()[n - pd.lo] for n in range(0, hi + 1)]
        assert got == want
        vals = image.values().real
        assert np.all(vals[:-1] + vals[1:] >= 1.0 - 1e-12)  # no "bb" anywhere

    def test_indicator_image_sums_to_occurrence_count(self):
        w = tm_window(256)
        word = (0, 1, 1)
        image = apply_block_map(w, indicator_block_map(word))
        assert int(image.values().real.sum()) == word_occurrences(w, word)

    def test_output_range_shrinks_by_block_geometry(self):
        w = tm_window(64)
        image = apply_block_map(w, indicator_block_map((0, 1), offset=-1))
        assert image.lo == w.lo + 1
        assert image.hi == w.hi

    def test_window_too_short(self):
        w = SymbolicWindow(np.array([0, 1], dtype=np.int16), 0)
        with pytest.raises(WindowTooShort):
            apply_block_map(w, indicator_block_map((0, 1, 0, 1)))

    def test_evaluate_at_matches_applied_image(self):
        w = tm_window(64)
        g = xor_map()
        image = apply_block_map(w, g)
        for n in (-5, 0, 7):
            assert evaluate_at(w, g, n) == image.values()[n - image.lo]


class TestCompose:
    def test_compose_equals_sequential_application(self):
        w = tm_window(128)
        inner = xor_map()
        # full table: composition does not accept defaulted maps
        outer = BlockMap(
            0, 2, {(a, b): 1.0 if (a, b) == (1, 0) else 0.0 for a in (0, 1) for b in (0, 1)}
        )
        combined = compose(outer, inner)
        one_shot = apply_block_map(w, combined)
        two_step = apply_block_map(apply_block_map(w, inner), outer)
        assert one_shot.lo == two_step.lo
        np.testing.assert_array_equal(one_shot.values(), two_step.values())

    def test_compose_window_arithmetic(self):
        inner = BlockMap(1, 2, {(a, b): float(a ^ b) for a in (0, 1) for b in (0, 1)})
        outer = BlockMap(-1, 1, {(0,): 0.0, (1,): 1.0})
        combined = compose(outer, inner)
        assert combined.length == 2
        assert combined.offset == 0

    def test_compose_rejects_defaulted_maps(self):
        with pytest.raises(ValueError):
            compose(indicator_block_map((1, 0)), xor_map())


class TestEquivariance:
    def test_factor_commutes_with_shift(self):
        w = tm_window(128)
        report = verify_factor_equivariance(w, xor_map(), range(1, 9))
        assert report.ok
        assert report.max_abs_dev == 0.0
        assert report.first_violation is None

    def test_violation_is_reported_not_raised(self):
        w = tm_window(128)
        # a reference image that is wrong at one site
        good = apply_block_map(w, xor_map())
        letters = good.letters.copy()
        mid = len(letters) // 2
        letters[mid] = 1 - letters[mid]
        bad = SymbolicWindow(letters, good.lo, dict(good.weights))
        report = verify_factor_equivariance(w, xor_map(), range(1, 5), reference=bad)
        assert not report.ok
        assert report.first_violation is not None
        assert report.max_abs_dev == 1.0
