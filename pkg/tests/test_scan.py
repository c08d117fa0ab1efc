import logging

import numpy as np
import pytest

from config_manager import ScanConfig
from exceptions import BoundsError, BracketError
from ordering import ION, MADELUNG, generate_sequence
from qalgebra import Deformation
from scan import (
    _pair_crossings,
    HYDROGENLIKE,
    INVERTED,
    ION_LIKE,
    MADELUNG_LIKE,
    TRANSITIONAL,
    classify_point,
    classify_regimes,
    find_crossing,
    is_hydrogenlike,
    key_difference,
    novaro_alpha_windows,
    q_grid,
)
from spectrum import Orbital


@pytest.fixture(scope="module")
def wide_profile():
    return classify_regimes(1.0, 1.5, 0.01)


class TestFindCrossing:
    def test_four_s_three_d(self):
        event = find_crossing("4s", "3d", 1.0, 1.3)
        assert event is not None
        assert 1.11 < event.q_star < 1.12
        assert event.residual <= 1e-12
        assert [o.label for o in event.pair] == ["4s", "3d"]
        assert event.bracket == (1.0, 1.3)

    def test_sign_certificate(self):
        event = find_crossing("4s", "3d", 1.0, 1.3)
        below = key_difference(event.pair[0], event.pair[1], event.q_star - 1e-10)
        above = key_difference(event.pair[0], event.pair[1], event.q_star + 1e-10)
        assert below * above < 0

    def test_argument_order_does_not_move_the_root(self):
        forward = find_crossing("4s", "3d", 1.0, 1.3)
        backward = find_crossing("3d", "4s", 1.0, 1.3)
        assert forward.q_star == pytest.approx(backward.q_star, abs=1e-12)

    def test_no_sign_change(self):
        assert find_crossing("1s", "2s", 0.5, 1.5) is None

    def test_unconfirmed_flip_is_logged_and_skipped(self, caplog):
        orbitals = [Orbital(1, 0), Orbital(2, 0)]
        with caplog.at_level(logging.WARNING, logger="scan"):
            events = _pair_crossings(orbitals, np.array([1.0, 4.0]), np.array([4.0, 1.0]), 1.0, 1.1, 1e-13)
        assert events == []
        assert "1s/2s" in caplog.text

    def test_endpoint_root_is_not_bracketed(self):
        # both 2s and 2p sit at 4 when alpha vanishes
        assert find_crossing("2s", "2p", 1.5, 1.8) is None

    @pytest.mark.parametrize("lo,hi", [(1.3, 1.0), (0.0, 1.0), (1.0, 1.0), (1.0, float("inf"))])
    def test_bad_bracket(self, lo, hi):
        with pytest.raises(BracketError):
            find_crossing("4s", "3d", lo, hi)

    def test_to_dict(self):
        payload = find_crossing("4s", "3d", 1.0, 1.3).to_dict()
        assert payload["pair"] == ["4s", "3d"]
        assert set(payload) == {"pair", "q_star", "q_lo", "q_hi", "residual"}


class TestClassifyPoint:
    @pytest.mark.parametrize("q,label", [
        (0.85, MADELUNG_LIKE),
        (1.0, TRANSITIONAL),
        (1.2, ION_LIKE),
        (1.7, HYDROGENLIKE),
        (1.8, HYDROGENLIKE),
        (2.0, INVERTED),
    ])
    def test_labels(self, q, label):
        assert classify_point(q)[0] == label

    def test_witness_backs_the_label(self):
        label, report, _ = classify_point(1.2)
        assert label == ION_LIKE
        assert report.reference == ION
        assert report.exact_match

        label, report, _ = classify_point(0.85)
        assert report.reference == MADELUNG
        assert report.max_deviation < 8.0

    def test_is_hydrogenlike(self):
        assert is_hydrogenlike(generate_sequence(Deformation(1.7), 7, 3))
        assert not is_hydrogenlike(generate_sequence(Deformation(1.0), 7, 3))


class TestGrid:
    def test_exact_multiple(self):
        grid = q_grid(1.0, 1.05, 0.01)
        assert list(grid) == pytest.approx([1.0, 1.01, 1.02, 1.03, 1.04, 1.05])

    def test_closed_by_upper_end(self):
        grid = q_grid(1.0, 1.055, 0.01)
        assert len(grid) == 7
        assert grid[-1] == 1.055

    def test_values_are_rounded(self):
        assert q_grid(0.1, 0.4, 0.1)[2] == 0.3


class TestClassifyRegimes:
    def test_ion_range_is_one_interval(self):
        profile = classify_regimes(1.15, 1.30, 0.01)
        assert len(profile.intervals) == 1
        interval = profile.intervals[0]
        assert interval.label == ION_LIKE
        assert (interval.q_lo, interval.q_hi) == (1.15, 1.30)

    def test_hydrogenlike_range_is_one_interval(self):
        profile = classify_regimes(1.6, 1.8, 0.01)
        assert [i.label for i in profile.intervals] == [HYDROGENLIKE]

    def test_ion_interval_covers_recommended_range(self, wide_profile):
        ion = [i for i in wide_profile.intervals if i.label == ION_LIKE]
        assert len(ion) == 1
        assert 1.11 < ion[0].q_lo < 1.12
        assert 1.34 < ion[0].q_hi < 1.35
        assert wide_profile.label_at(1.225) == ION_LIKE

    def test_boundaries_snap_to_crossings(self, wide_profile):
        ion = next(i for i in wide_profile.intervals if i.label == ION_LIKE)
        by_pair = {tuple(o.label for o in c.pair): c for c in wide_profile.crossings}
        assert ion.q_lo == by_pair[("3d", "4s")].q_star
        assert ion.q_hi == by_pair[("5f", "6p")].q_star

    def test_intervals_tile_the_range(self, wide_profile):
        intervals = wide_profile.intervals
        assert intervals[0].q_lo == 1.0
        assert intervals[-1].q_hi == 1.5
        for left, right in zip(intervals, intervals[1:]):
            assert left.q_hi == right.q_lo
            assert left.label != right.label

    def test_crossings_ascending(self, wide_profile):
        q_stars = [c.q_star for c in wide_profile.crossings]
        assert q_stars == sorted(q_stars)
        assert all(c.residual <= 1e-11 for c in wide_profile.crossings)

    def test_recommended_values(self, wide_profile):
        assert wide_profile.recommended_q == {"neutral": 0.85, "ion": 1.225, "highly-ionized": 1.7}

    def test_workers_do_not_change_the_result(self):
        serial = classify_regimes(1.1, 1.2, 0.01)
        pooled = classify_regimes(1.1, 1.2, 0.01, ScanConfig(workers=4))
        assert pooled.to_dict() == serial.to_dict()

    @pytest.mark.parametrize("q_lo,q_hi,step", [
        (2.5, 1.0, 0.01),
        (1.0, 2.5, 0.01),
        (0.0, 1.0, 0.01),
        (1.0, 1.3, 0.1),
        (1.0, 1.3, 0.0),
        (1.0, float("nan"), 0.01),
    ])
    def test_invalid_scan(self, q_lo, q_hi, step):
        with pytest.raises(BoundsError):
            classify_regimes(q_lo, q_hi, step)


class TestNovaroWindows:
    def test_ion_window(self):
        windows = novaro_alpha_windows(ION, 1.0, 1.3, 0.01)
        assert len(windows) == 1
        assert windows[0] == (pytest.approx(1.10), pytest.approx(1.16))

    def test_no_constant_alpha_reproduces_madelung(self):
        assert novaro_alpha_windows(MADELUNG, 0.5, 3.0, 0.01) == []

    def test_invalid_range(self):
        with pytest.raises(BoundsError):
            novaro_alpha_windows(ION, 1.3, 1.0, 0.01)
