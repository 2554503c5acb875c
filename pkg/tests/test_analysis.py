"""Pole classification, per-block verification, and divergence scans."""

import math
from fractions import Fraction

import pytest

from padelab.analysis import (
    CounterexampleReport,
    PoleReport,
    divergence_scan,
    find_poles,
    verify_counterexample,
)
from padelab.errors import (
    DomainError,
    InvalidParameterError,
    OutOfRangeError,
    UnsupportedSizeError,
)
from padelab.pade import PadeApproximant, classical_pade
from padelab.series import PoleSequence, PowerSeries, build_counterexample_series


@pytest.fixture(scope="module")
def k2_float_approx():
    s = build_counterexample_series(2, PoleSequence.harmonic(2))
    floats = PowerSeries.from_coefficients([complex(x) for x in s.as_complex_array()])
    return classical_pade(floats, 2)


# ---------------------------------------------------------------------------
# find_poles


def test_find_poles_block2(k2_float_approx):
    report = find_poles(k2_float_approx)
    assert len(report.poles) == 1
    pole = report.poles[0]
    assert abs(pole.location - 0.25) < 1e-8
    assert abs(pole.residue_magnitude - 0.25) < 1e-6
    assert len(report.zeros) == 2
    assert report.doublets == ()
    # the pole sits inside the unit disc with numerator magnitude ~1,
    # far above the spurious threshold
    assert len(report.spurious) == 1
    assert abs(report.spurious[0].location - 0.25) < 1e-8
    assert abs(report.spurious[0].numerator_magnitude - 1.0) < 1e-6
    # the rounding-noise trailing coefficient creates one huge companion
    # root that fails the backward-error check and is discarded
    assert len(report.discarded) == 1
    assert abs(report.discarded[0]) > 1e10


def test_find_poles_backward_error_invariant(k2_float_approx):
    report = find_poles(k2_float_approx)
    b_eff = [complex(x) for x in k2_float_approx.b_effective]
    b_norm = math.sqrt(sum(abs(x) ** 2 for x in b_eff))
    for pole in report.poles:
        value = sum(c * pole.location ** j for j, c in enumerate(b_eff))
        assert abs(value) <= 1e-8 * b_norm
        assert pole.denom_residual <= 1e-8 * b_norm


def test_find_poles_boundary_pole_not_spurious():
    # 1/(1 - z) has its pole exactly on the unit circle; radius_hint = 1
    # uses a strict inequality so the pole is genuine, not spurious
    s = PowerSeries.from_coefficients([1.0, 1.0, 1.0])
    report = find_poles(classical_pade(s, 1))
    assert len(report.poles) == 1
    assert abs(report.poles[0].location - 1.0) < 1e-12
    assert report.spurious == ()
    assert abs(report.poles[0].residue_magnitude - 1.0) < 1e-12


def test_find_poles_constant_denominator():
    s = PowerSeries.from_coefficients([3.0, 0.0, 0.0])
    report = find_poles(classical_pade(s, 0))
    assert report.poles == () and report.zeros == ()
    assert report.doublets == () and report.spurious == ()


def test_find_poles_reports_close_doublet():
    # numerator root at 0.5 + 1e-5, denominator root at 0.5: a doublet
    zero_at = 0.5 + 1e-5
    approx = PadeApproximant(a=(1.0 + 0j, -1.0 / zero_at), b=(1.0 + 0j, -2.0 + 0j),
                             requested_n=1, effective_degrees=(1, 1),
                             mode="classical", exact=False)
    report = find_poles(approx)
    assert len(report.doublets) == 1
    doublet = report.doublets[0]
    assert abs(doublet.pole - 0.5) < 1e-12
    assert abs(doublet.zero - zero_at) < 1e-12
    assert abs(doublet.separation - 1e-5) < 1e-9


def test_find_poles_parameter_guards(k2_float_approx):
    with pytest.raises(InvalidParameterError):
        find_poles(k2_float_approx, radius_hint=0.0)
    with pytest.raises(InvalidParameterError):
        find_poles(k2_float_approx, delta_doublet=0.0)
    with pytest.raises(InvalidParameterError):
        find_poles(k2_float_approx, tol_spurious=0.0)


def test_pole_report_dict_shape(k2_float_approx):
    d = find_poles(k2_float_approx, radius_hint=0.9).to_dict()
    assert set(d) == {"poles", "zeros", "doublets", "spurious", "discarded",
                      "radius_hint", "delta_doublet", "tol_spurious"}
    assert d["radius_hint"] == 0.9
    assert set(d["poles"][0]) == {"location", "residue_magnitude", "denom_residual"}
    assert set(d["spurious"][0]) == {"location", "numerator_magnitude"}
    assert isinstance(d["poles"][0]["location"], list)


# ---------------------------------------------------------------------------
# verify_counterexample


def test_verify_block2_exact_frozen():
    rep = verify_counterexample(2, PoleSequence.harmonic(2), exact=True)
    assert rep.k == 2 and rep.n == 2 and rep.exact
    assert rep.coeff_bound_ok and rep.c1_equality
    assert rep.q_match == 0.0 and rep.q_ok
    assert rep.p_at_zk == 1 + 0j and rep.p_expected == 1 + 0j
    assert rep.p_match == 0.0 and rep.p_ok
    assert abs(rep.sigma1 - 91392 ** 0.5) < 1e-8 * 91392 ** 0.5
    assert abs(rep.sigman - 48384 ** 0.5) < 1e-8 * 48384 ** 0.5
    assert abs(rep.sigma_ratio - (91392 / 48384) ** 0.5) < 1e-10
    assert rep.sigma_ratio_pass
    assert rep.sigma_ratio_oracle is not None and rep.oracle_agrees
    assert rep.head_sum == 0.0 and abs(rep.head_limit - 256 / 6) < 1e-12
    assert rep.tail_sum == 80.0 and rep.tail_limit == 128.0
    assert rep.s_value == 80.0 and abs(rep.s_limit - 512 / 3) < 1e-12
    assert rep.bounds_ok
    assert rep.sandwich_lo == 176.0 and rep.sandwich_hi == 336.0
    assert rep.sandwich_ok
    assert 0.0 < rep.max_no_reduction_tol < 1.0
    assert abs(rep.max_no_reduction_tol - (48384 / 91392) ** 0.5) < 1e-10
    assert rep.passed


def test_verify_block3_float_route():
    rep = verify_counterexample(3, PoleSequence.harmonic(3), exact=False)
    assert not rep.exact
    assert rep.n == 6
    assert rep.q_ok and rep.q_match < 1e-8 * 5
    assert rep.p_ok
    expected_p = 4096 * 0.2 ** 12
    assert abs(rep.p_at_zk - expected_p) < 1e-8
    assert rep.sigma_ratio < 5 and rep.sigma_ratio_pass
    # exact poles make the series exact, so the oracle still engages
    assert rep.oracle_agrees
    assert rep.passed


def test_verify_consistency_of_pass_flag():
    rep = verify_counterexample(2, PoleSequence.harmonic(4), exact=True)
    d = rep.to_dict()
    recomputed = (d["coeff_bound_ok"] and d["c1_equality"] and d["q_ok"]
                  and d["p_ok"] and d["sigma_ratio_pass"] and d["bounds_ok"]
                  and d["sandwich_ok"] and d["oracle_agrees"] is not False)
    assert d["passed"] == recomputed


def test_verify_csv_row_matches_header():
    rep = verify_counterexample(2, PoleSequence.harmonic(2), exact=True)
    header = CounterexampleReport.CSV_HEADER.split(",")
    assert header == ["k", "n", "sigma1", "sigman", "ratio", "S", "S_limit",
                      "q_match", "p_at_zk_re", "p_at_zk_im", "pass"]
    cells = rep.csv_row().split(",")
    assert len(cells) == len(header)
    assert cells[0] == "2" and cells[1] == "2"
    assert abs(float(cells[2]) - rep.sigma1) < 1e-12 * rep.sigma1
    assert float(cells[5]) == 80.0
    assert float(cells[7]) == 0.0
    assert float(cells[8]) == 1.0 and float(cells[9]) == 0.0
    assert cells[10] == "1"


def test_verify_guards():
    with pytest.raises(InvalidParameterError):
        verify_counterexample(1, PoleSequence.harmonic(2))
    with pytest.raises(OutOfRangeError):
        verify_counterexample(4, PoleSequence.harmonic(3))
    with pytest.raises(InvalidParameterError):
        verify_counterexample(2, PoleSequence.explicit([Fraction(2, 5)]))
    with pytest.raises(InvalidParameterError):
        verify_counterexample(2, PoleSequence.explicit([0.25]), exact=True)
    with pytest.raises(UnsupportedSizeError):
        verify_counterexample(5, PoleSequence.harmonic(5), with_oracle=True)
    with pytest.raises(InvalidParameterError):
        verify_counterexample(2, PoleSequence.explicit([0.25]), with_oracle=True)


# ---------------------------------------------------------------------------
# divergence_scan


def test_scan_single_block():
    table = divergence_scan(2)
    assert table.scheme == "harmonic_repeated" and table.exact
    assert table.k_max == 2 and table.points == ()
    assert len(table.rows) == 1
    row = table.rows[0]
    assert row.k == 2 and row.n == 2
    assert row.z_k == 0.25 + 0j
    assert row.abs_q_at_zk == 0.0
    assert row.error_at_zk == math.inf


def test_scan_repeated_scheme_prefix_and_probes():
    # pole values recur across blocks: z_2 = z_3 = 1/4, z_4 = 1/5, so the
    # probe at 1/4 sees an infinite error along the subsequence k = 2, 3
    table = divergence_scan(4, points=(Fraction(1, 4), Fraction(9, 10)))
    assert [complex(r.z_k) for r in table.rows] == [0.25, 0.25, 0.2]
    for row in table.rows:
        assert row.abs_q_at_zk == 0.0
        assert row.error_at_zk == math.inf
        assert len(row.extras) == 2
    at_quarter = {row.k: row.extras[0].error for row in table.rows}
    assert at_quarter[2] == math.inf
    assert at_quarter[3] == math.inf
    assert math.isfinite(at_quarter[4])
    for row in table.rows:
        outer = row.extras[1]
        assert outer.point == 0.9 + 0j
        assert math.isfinite(outer.error)
        assert outer.abs_q > 0


def test_scan_float_mode_hits_own_pole():
    table = divergence_scan(3, exact=False)
    assert not table.exact
    for row in table.rows:
        assert row.error_at_zk == math.inf
        assert row.abs_q_at_zk <= 1e-10 * (1.0 + abs(row.z_k) / 0.2)


def test_scan_explicit_poles_take_their_tag():
    poles = PoleSequence.explicit([Fraction(1, 4), Fraction(1, 5)])
    table = divergence_scan(3, poles=poles)
    assert table.scheme == "explicit_list"
    assert [complex(r.z_k) for r in table.rows] == [0.25, 0.2]


def test_scan_guards():
    with pytest.raises(InvalidParameterError):
        divergence_scan(1)
    with pytest.raises(InvalidParameterError):
        divergence_scan(3, scheme="fibonacci")
    with pytest.raises(InvalidParameterError):
        divergence_scan(3, points=(0.3,))
    with pytest.raises(DomainError):
        divergence_scan(2, points=(Fraction(3, 2),))


def test_scan_dict_serializes_infinities():
    d = divergence_scan(2, points=(Fraction(1, 4),)).to_dict()
    assert set(d) == {"scheme", "k_max", "exact", "points", "rows"}
    assert d["points"] == [[0.25, 0.0]]
    row = d["rows"][0]
    assert row["error_at_zk"] == "inf"
    assert row["abs_q_at_zk"] == 0.0
    assert row["extras"][0]["error"] == "inf"
