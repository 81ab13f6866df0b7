import json
import warnings

import numpy as np
import pytest
from hypothesis import given, strategies as st

from crossdipole import metrics
from crossdipole.metrics import (Band, SweepRecord, analyze, band_report, common_band,
                                 extract_band, harrington_limit, load_capacitance, s11, sweep,
                                 write_sweep_csv)

GHZ = 1e9


def record(f, s11_db=0.0, ar=0.0, ok=True):
    return SweepRecord(f, 50 + 0j, s11_db, ar, 0.0, 0.0, 0.0, ok)


def test_s11_values():
    gamma, db = s11(50.0, 50.0)
    assert gamma == 0 and db == -100.0
    gamma, db = s11(100.0, 50.0)
    assert abs(gamma) == pytest.approx(1 / 3)
    assert db == pytest.approx(-9.542, abs=1e-3)


def test_s11_nonpassive_warns():
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        gamma, _ = s11(-10 + 5j, 50.0)
    assert caught and abs(gamma) > 1


@given(st.floats(1e-3, 1e4), st.floats(-1e4, 1e4), st.floats(1.0, 500.0))
def test_s11_passive_below_unity(r, x, z0):
    gamma, db = s11(complex(r, x), z0)
    assert abs(gamma) < 1 and db <= 0


def test_harrington():
    assert harrington_limit(1.65) == pytest.approx(7.797, abs=1e-3)
    assert harrington_limit(1.65) == pytest.approx(7.80, abs=0.05)
    assert harrington_limit(1.0) == pytest.approx(10 * np.log10(3), abs=1e-12)
    with pytest.raises(ValueError):
        harrington_limit(0.0)


@given(st.floats(1e-3, 50), st.floats(1e-3, 50))
def test_harrington_monotone(a, b):
    if a < b:
        assert harrington_limit(a) < harrington_limit(b)


def test_load_capacitance():
    assert load_capacitance(-74.96, 3.5 * GHZ) == pytest.approx(0.6066e-12, rel=1e-3)
    assert load_capacitance(-1 / (2 * np.pi), 1.0) == pytest.approx(1.0)
    with pytest.raises(ValueError):
        load_capacitance(50.0, 3.5 * GHZ)


def test_extract_band_v_shape():
    # s11 = -20 + 40 |f - 3.5| (f in GHz): crosses -10 dB at 3.25 and 3.75 GHz.
    f = np.linspace(3.0, 4.0, 11)
    recs = [record(x * GHZ, -20 + 40 * abs(x - 3.5)) for x in f]
    (band,) = extract_band(recs, "s11", -10.0)
    assert band.f_low == pytest.approx(3.25 * GHZ, rel=1e-12)
    assert band.f_high == pytest.approx(3.75 * GHZ, rel=1e-12)
    assert band.fractional == pytest.approx(0.5 / 3.5)


def test_extract_band_empty_and_multiple():
    f = np.linspace(3e9, 4e9, 6)
    assert extract_band([record(x, 0.0) for x in f], "s11", -10.0) == []
    vals = [-12, -5, -5, -12, -12, -5]
    bands = extract_band([record(x, v) for x, v in zip(f, vals)], "s11", -10.0)
    assert len(bands) == 2 and bands[0].f_high < bands[1].f_low
    assert bands[0].f_low == f[0]


def test_extract_band_failed_points_split_band():
    f = np.linspace(3e9, 4e9, 5)
    recs = [record(x, -20.0) for x in f]
    recs[2] = record(f[2], float("nan"), ok=False)
    assert len(extract_band(recs, "s11", -10.0)) == 2


@given(st.lists(st.floats(-30, 10), min_size=2, max_size=30))
def test_extract_band_edges_bracketed(vals):
    f = np.linspace(3e9, 4e9, len(vals))
    recs = [record(x, v) for x, v in zip(f, vals)]
    for band in extract_band(recs, "s11", -10.0):
        assert f[0] <= band.f_low < band.f_high <= f[-1]
        inside = [v for x, v in zip(f, vals) if band.f_low < x < band.f_high]
        assert all(v <= -10.0 for v in inside)


def test_common_band():
    a = [Band(3.29 * GHZ, 4.17 * GHZ)]
    b = [Band(3.43 * GHZ, 3.57 * GHZ)]
    (c,) = common_band(a, b)
    assert (c.f_low, c.f_high) == (3.43 * GHZ, 3.57 * GHZ)
    assert common_band([Band(1, 2)], [Band(3, 4)]) == []
    assert common_band(a, a) == a


def _disjoint(steps):
    bands, edge = [], 0.0
    for gap, width in steps:
        bands.append(Band(edge + gap, edge + gap + width))
        edge += gap + width
    return bands


# Band lists as produced by extract_band: sorted and pairwise disjoint.
band_lists = st.lists(st.tuples(st.floats(0.1, 10), st.floats(0.1, 10)), max_size=4).map(_disjoint)


@given(band_lists, band_lists)
def test_common_band_commutes_and_is_subset(a, b):
    ab, ba = common_band(a, b), common_band(b, a)
    assert ab == ba
    for c in ab:
        assert any(x.f_low <= c.f_low and c.f_high <= x.f_high for x in a)
        assert any(x.f_low <= c.f_low and c.f_high <= x.f_high for x in b)


def test_band_rejects_inverted():
    with pytest.raises(ValueError):
        Band(2.0, 1.0)


def test_sweep_two_points(ref):
    recs = sweep(ref, 3.0e9, 4.0e9, 2)
    assert [r.frequency for r in recs] == [3.0e9, 4.0e9]
    for r in recs:
        assert r.ok and r.s11_db <= 0
        assert r.g_lhcp_db <= r.d_boresight_dbi + 0.01


def test_sweep_rejects_bad_range(ref):
    with pytest.raises(ValueError):
        sweep(ref, 4e9, 3e9, 5)
    with pytest.raises(ValueError):
        sweep(ref, 3e9, 4e9, 1)


def test_sweep_scale_invariance(ref):
    a = sweep(ref, 3.2e9, 3.8e9, 3)
    b = sweep(ref.scaled(2.0), 1.6e9, 1.9e9, 3)
    for ra, rb in zip(a, b):
        assert rb.frequency == pytest.approx(ra.frequency / 2)
        assert rb.zin == pytest.approx(ra.zin, rel=1e-6)
        assert rb.g_lhcp_db == pytest.approx(ra.g_lhcp_db, abs=1e-6)
        assert rb.ar_boresight_db == pytest.approx(ra.ar_boresight_db, abs=1e-6)


def test_sweep_flags_failed_point(ref, monkeypatch):
    real = metrics.analyze

    def flaky(design, segments, z0, frequency=None, model=None):
        if frequency == pytest.approx(3.5e9):
            raise RuntimeError("boom")
        return real(design, segments, z0, frequency=frequency, model=model)

    monkeypatch.setattr(metrics, "analyze", flaky)
    recs = sweep(ref, 3.0e9, 4.0e9, 3)
    assert [r.ok for r in recs] == [True, False, True]


def test_analyze_report_finite(ref):
    report, _ = analyze(ref)
    values = report.to_json()
    assert len(values) == 9
    for key, v in values.items():
        if key == "zin":
            assert np.isfinite(v["re"]) and np.isfinite(v["im"])
        else:
            assert np.isfinite(v), key
    assert report.load_capacitance_pf == pytest.approx(0.6066, abs=1e-3)


def test_sweep_csv_and_band_json(tmp_path, ref):
    recs = sweep(ref, 3.0e9, 4.0e9, 3)
    write_sweep_csv(recs, tmp_path / "s.csv")
    lines = (tmp_path / "s.csv").read_text().splitlines()
    assert lines[0] == "freq_hz,re_zin_ohm,im_zin_ohm,s11_db,ar_db,g_lhcp_db,g_rhcp_db,d_dbi,ok_flag"
    assert len(lines) == 4
    rep = band_report("s11", -10.0, [Band(3.29e9, 4.17e9)])
    blob = json.loads(json.dumps(rep))
    assert blob["bands"][0]["fractional"] == pytest.approx(0.88 / 3.73, rel=1e-12)
