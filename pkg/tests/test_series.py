"""Pole sequences, the two series families, evaluation, file round trips."""

import json
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from padelab.errors import (
    ConvergenceError,
    DomainError,
    InvalidParameterError,
    OutOfRangeError,
    SeriesFormatError,
    UnsupportedInputError,
)
from padelab.rational import QC, qc
from padelab.series import (
    GammelParams,
    PoleSequence,
    PowerSeries,
    block_end,
    block_of_index,
    block_order,
    build_counterexample_series,
    build_gammel_series,
    counterexample_coeff,
    default_gammel_alpha,
    eval_series,
    gammel_block_of,
    growth_tail_bound,
    load_series,
    save_series,
    spike_index,
    truncation_length,
)


# ---------------------------------------------------------------------------
# pole sequences


def test_harmonic_values():
    p = PoleSequence.harmonic(5)
    assert p.points == tuple(Fraction(1, k + 2) for k in range(2, 6))
    assert p.z(2) == Fraction(1, 4)
    assert p.z(5) == Fraction(1, 7)
    assert p.start_index == 2 and p.max_index == 5
    assert p.exact


def test_harmonic_repeated_prefix():
    p = PoleSequence.harmonic_repeated(7)
    expected = (Fraction(1, 4), Fraction(1, 4), Fraction(1, 5),
                Fraction(1, 4), Fraction(1, 5), Fraction(1, 6))
    assert p.points == expected
    assert p.generator_tag == "harmonic_repeated"


def test_pole_out_of_range():
    p = PoleSequence.harmonic(3)
    with pytest.raises(OutOfRangeError):
        p.z(4)
    with pytest.raises(OutOfRangeError):
        p.z(1)


@pytest.mark.parametrize("bad", [0, 1, Fraction(3, 2), -1, 1.0])
def test_pole_outside_disc_rejected(bad):
    with pytest.raises(InvalidParameterError):
        PoleSequence.explicit([bad])


def test_explicit_float_poles_are_inexact():
    p = PoleSequence.explicit([0.25, 0.2])
    assert not p.exact
    assert p.as_complex() == (0.25 + 0j, 0.2 + 0j)


def test_counterexample_admissibility():
    assert PoleSequence.harmonic(4).counterexample_admissible()
    assert not PoleSequence.explicit([Fraction(2, 5)]).counterexample_admissible()
    with pytest.raises(InvalidParameterError):
        PoleSequence.explicit([Fraction(2, 5)]).require_counterexample_poles(2)
    with pytest.raises(InvalidParameterError):
        PoleSequence.explicit([Fraction(1, 4)], start_index=1).require_counterexample_poles(1)
    with pytest.raises(OutOfRangeError):
        PoleSequence.harmonic(3).require_counterexample_poles(5)


# ---------------------------------------------------------------------------
# block index bookkeeping


def test_block_index_values():
    assert [block_order(k) for k in (2, 3, 4, 5, 6)] == [2, 6, 14, 30, 62]
    assert [spike_index(k) for k in (2, 3, 4)] == [1, 5, 13]
    assert [block_end(k) for k in (2, 3, 4)] == [4, 12, 28]
    assert [truncation_length(k) for k in (2, 3, 4, 5)] == [5, 13, 29, 61]


@given(st.integers(min_value=1, max_value=10_000))
def test_block_of_index_brackets(j):
    k = block_of_index(j)
    assert spike_index(k) <= j <= block_end(k)
    assert block_end(k) + 1 == spike_index(k + 1)


def test_truncation_ends_on_block_boundary():
    for k in range(2, 8):
        assert truncation_length(k) == block_end(k) + 1
        assert truncation_length(k) == 2 * block_order(k) + 1


# ---------------------------------------------------------------------------
# counterexample family


def test_k2_coefficients(k2_series):
    assert [c.re for c in k2_series.coeffs] == [1, 256, 16, 64, 256]
    assert k2_series.exact
    assert k2_series.meta.family == "counterexample"
    assert k2_series.meta.k_max == 2


def test_k3_block_values(k3_series):
    c = k3_series.coeffs
    assert len(c) == 13
    assert c[5] == qc(4096)                       # spike of block 3
    assert c[12] == qc(4096)                      # geometric part ends at z^0
    assert c[8] == qc(Fraction(4096, 625))        # 4096 * (1/5)^4
    assert c[:5] == tuple(qc(v) for v in (1, 256, 16, 64, 256))


@given(st.integers(min_value=0, max_value=28))
def test_single_coeff_matches_built_series(j):
    poles = PoleSequence.harmonic(4)
    s = build_counterexample_series(4, poles)
    assert counterexample_coeff(4, poles, j) == s.coeffs[j]


def test_coeff_growth_bound_holds_exactly():
    s = build_counterexample_series(6, PoleSequence.harmonic(6))
    for j in range(1, len(s.coeffs)):
        c = s.coeffs[j]
        assert c.abs2() > 0
        assert c.abs2() <= Fraction((j + 3) ** 4) ** 2


def test_coeff_index_guards():
    poles = PoleSequence.harmonic(3)
    with pytest.raises(OutOfRangeError):
        counterexample_coeff(3, poles, 13)
    with pytest.raises(InvalidParameterError):
        build_counterexample_series(1, poles)
    with pytest.raises(OutOfRangeError):
        build_counterexample_series(4, poles)


def test_inexact_poles_build_float_series():
    s = build_counterexample_series(2, PoleSequence.explicit([0.25]))
    assert not s.exact
    assert s.coeffs == (1 + 0j, 256 + 0j, 16 + 0j, 64 + 0j, 256 + 0j)


# ---------------------------------------------------------------------------
# gammel family


def test_gammel_block_one():
    params = GammelParams(alphas=(1,),
                          poles=PoleSequence.explicit([Fraction(1, 2)], start_index=1))
    s = build_gammel_series(params, 2)
    assert [c.re for c in s.coeffs] == [1, 2, 4]
    assert s.meta.family == "gammel"


def test_gammel_two_blocks_weighting():
    params = GammelParams(
        alphas=(1, Fraction(1, 256)),
        poles=PoleSequence.explicit([Fraction(1, 2), Fraction(1, 3)], start_index=1))
    s = build_gammel_series(params, 6)
    assert s.coeffs[3] == qc(Fraction(27, 256))       # alpha_2 * 3^3
    assert s.coeffs[6] == qc(Fraction(729, 256))


def test_gammel_insufficient_alphas():
    params = GammelParams(alphas=(1,),
                          poles=PoleSequence.explicit([Fraction(1, 2)], start_index=1))
    with pytest.raises(InvalidParameterError):
        build_gammel_series(params, 3)


def test_gammel_zero_alpha_skips_pole():
    params = GammelParams(alphas=(0, 1),
                          poles=PoleSequence.explicit(
                              [Fraction(1, 2), Fraction(1, 3)], start_index=1))
    s = build_gammel_series(params, 4)
    assert s.coeffs[1] == qc(0) and s.coeffs[2] == qc(0)
    assert s.coeffs[3] == qc(27)


def test_gammel_pole_indexing_guard():
    with pytest.raises(InvalidParameterError):
        GammelParams(alphas=(1,), poles=PoleSequence.explicit([Fraction(1, 2)]))


def test_gammel_helpers():
    assert default_gammel_alpha(1) == Fraction(1, 4)
    assert default_gammel_alpha(2) == Fraction(1, 256)
    assert [gammel_block_of(n) for n in (1, 2, 3, 6, 7, 14)] == [1, 1, 2, 2, 3, 3]


# ---------------------------------------------------------------------------
# containers and evaluation


def test_series_construction_guards():
    with pytest.raises(InvalidParameterError):
        PowerSeries(None, False)
    with pytest.raises(InvalidParameterError):
        PowerSeries((1.5,), True)
    with pytest.raises(InvalidParameterError):
        PowerSeries(None, True, coeff_fn=lambda j: 1.0)
    with pytest.raises(InvalidParameterError):
        PowerSeries((1,), True, radius_hint=0.0)


def test_from_coefficients_detects_exactness():
    assert PowerSeries.from_coefficients([1, Fraction(1, 2)]).exact
    assert not PowerSeries.from_coefficients([1, 0.5]).exact


def test_coeff_access_guards(k2_series):
    assert k2_series.known_len == 5
    with pytest.raises(OutOfRangeError):
        k2_series.coeff(5)
    with pytest.raises(OutOfRangeError):
        k2_series.coeff(-1)
    with pytest.raises(OutOfRangeError):
        k2_series.require_terms(6)
    arr = k2_series.as_complex_array(3)
    assert arr.dtype == complex and list(arr) == [1, 256, 16]


def test_eval_exact_value(k2_series):
    res = eval_series(k2_series, Fraction(1, 4))
    assert res.value == qc(68)
    assert res.terms == 5


def test_eval_float_matches_polyval(k2_series):
    res = eval_series(k2_series, 0.1 + 0.05j)
    ref = np.polyval([256, 64, 16, 256, 1], 0.1 + 0.05j)
    assert res.value == pytest.approx(ref, rel=1e-13)


def test_eval_outside_radius(k2_series):
    with pytest.raises(DomainError):
        eval_series(k2_series, 1.0)
    with pytest.raises(DomainError):
        eval_series(PowerSeries.from_coefficients([1.0], radius_hint=0.5), 0.6)


def test_eval_stream_geometric():
    geo = PowerSeries.from_fn(lambda j: 1.0)
    res = eval_series(geo, 0.5)
    assert res.value == pytest.approx(2.0, rel=1e-12)
    assert res.terms < 200


def test_eval_stream_cap():
    geo = PowerSeries.from_fn(lambda j: 1.0)
    with pytest.raises(ConvergenceError) as exc:
        eval_series(geo, 0.999, rel_tol=1e-12, max_terms=50)
    assert exc.value.residual > 0


def test_growth_tail_bound_dominates_tail():
    x = 0.3
    bound = growth_tail_bound(10, x)
    tail = sum((j + 3) ** 4 * x ** j for j in range(11, 400))
    assert 0 < tail <= bound
    assert growth_tail_bound(5, 0.0) == 0.0
    with pytest.raises(DomainError):
        growth_tail_bound(5, 1.0)


# ---------------------------------------------------------------------------
# file round trips


def test_exact_round_trip(tmp_path, k3_series):
    path = tmp_path / "s.json"
    save_series(k3_series, path)
    loaded = load_series(path)
    assert loaded.exact
    assert loaded.coeffs == k3_series.coeffs
    assert loaded.meta.family == "counterexample"
    assert loaded.meta.poles.points == k3_series.meta.poles.points
    assert loaded.meta.poles.start_index == 2


def test_float_round_trip(tmp_path):
    s = PowerSeries.from_coefficients([1.0, 0.5 + 0.25j], radius_hint=2.0)
    path = tmp_path / "f.json"
    save_series(s, path)
    loaded = load_series(path)
    assert not loaded.exact
    assert loaded.coeffs == s.coeffs
    assert loaded.radius_hint == 2.0


def test_save_is_deterministic(tmp_path, k2_series):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    save_series(k2_series, a)
    save_series(k2_series, b)
    assert a.read_bytes() == b.read_bytes()


def test_stream_series_cannot_be_saved(tmp_path):
    s = PowerSeries.from_fn(lambda j: 1.0)
    with pytest.raises(UnsupportedInputError):
        save_series(s, tmp_path / "x.json")


def _write(tmp_path, doc):
    path = tmp_path / "bad.json"
    path.write_text(json.dumps(doc))
    return path


@pytest.mark.parametrize("mutate", [
    lambda d: d.pop("c"),
    lambda d: d.pop("exact"),
    lambda d: d.pop("radius_hint"),
    lambda d: d.__setitem__("c", {"0": [1.0, 0.0]}),
    lambda d: d.__setitem__("c", [[1.0]]),
    lambda d: d.__setitem__("c", [[True, 0.0]]),
    lambda d: d.__setitem__("exact", "yes"),
    lambda d: d.__setitem__("radius_hint", -1),
    lambda d: d.__setitem__("meta", 3),
])
def test_malformed_documents_rejected(tmp_path, mutate):
    doc = {"c": [[1.0, 0.0]], "exact": False, "radius_hint": 1.0, "meta": {}}
    mutate(doc)
    with pytest.raises(SeriesFormatError):
        load_series(_write(tmp_path, doc))


def test_empty_coefficient_list_loads_as_empty_series(tmp_path):
    doc = {"c": [], "exact": False, "radius_hint": 1.0}
    s = load_series(_write(tmp_path, doc))
    assert s.known_len == 0
    with pytest.raises(OutOfRangeError):
        s.coeff(0)
    assert eval_series(s, 0.5).value == 0
    out = tmp_path / "round.json"
    save_series(s, out)
    assert load_series(out).coeffs == ()


def test_exact_file_with_float_entries_rejected(tmp_path):
    doc = {"c": [[1.0, 0.0]], "exact": True, "radius_hint": 1.0}
    with pytest.raises(SeriesFormatError):
        load_series(_write(tmp_path, doc))


def test_bad_rational_literal_rejected(tmp_path):
    doc = {"c": [["1/x", "0"]], "exact": True, "radius_hint": 1.0}
    with pytest.raises(SeriesFormatError):
        load_series(_write(tmp_path, doc))


def test_nonfinite_token_rejected(tmp_path):
    path = tmp_path / "nan.json"
    path.write_text('{"c": [[NaN, 0.0]], "exact": false, "radius_hint": 1.0}')
    with pytest.raises(SeriesFormatError):
        load_series(path)


def test_invalid_json_names_position(tmp_path):
    path = tmp_path / "syntax.json"
    path.write_text('{"c": [[1.0, 0.0]],')
    with pytest.raises(SeriesFormatError) as exc:
        load_series(path)
    assert "line" in str(exc.value)


def test_missing_file_reports_path(tmp_path):
    with pytest.raises(SeriesFormatError) as exc:
        load_series(tmp_path / "absent.json")
    assert "absent.json" in str(exc.value)


@given(st.lists(st.complex_numbers(max_magnitude=1e6, allow_nan=False,
                                   allow_infinity=False),
                min_size=1, max_size=12))
def test_float_round_trip_property(tmp_path_factory, values):
    s = PowerSeries.from_coefficients(values)
    path = tmp_path_factory.mktemp("rt") / "s.json"
    save_series(s, path)
    assert load_series(path).coeffs == s.coeffs
