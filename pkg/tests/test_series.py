import numpy as np
import pytest

from hospectra import (
    DataError,
    ParameterError,
    SegmentConfig,
    TimeSeries,
    generate_gaussian_ar,
    generate_qpc,
    load_series,
    save_series,
    segment_and_demean,
)


class TestLoadSeries:
    def test_csv_basic(self, tmp_path):
        path = tmp_path / "x.csv"
        path.write_text("1.0\n2.0\n3.0\n")
        ts = load_series(path, "csv")
        assert ts.n == 3
        assert np.array_equal(ts.samples, [1.0, 2.0, 3.0])
        assert ts.source == str(path)

    def test_csv_header_skipped(self, tmp_path):
        path = tmp_path / "x.csv"
        path.write_text("value\n1.5\n-2.5\n")
        ts = load_series(path, "csv")
        assert np.array_equal(ts.samples, [1.5, -2.5])

    def test_empty_file(self, tmp_path):
        path = tmp_path / "x.csv"
        path.write_text("")
        with pytest.raises(DataError, match="empty input"):
            load_series(path, "csv")

    def test_non_numeric_mid_file_names_line(self, tmp_path):
        path = tmp_path / "x.csv"
        path.write_text("1.0\n2.0\nbogus\n4.0\n")
        with pytest.raises(DataError, match=":3:"):
            load_series(path, "csv")

    def test_nan_rejected_with_line(self, tmp_path):
        path = tmp_path / "x.csv"
        path.write_text("1.0\nnan\n")
        with pytest.raises(DataError, match=":2:"):
            load_series(path, "csv")

    def test_missing_file(self, tmp_path):
        with pytest.raises(DataError):
            load_series(tmp_path / "nope.csv", "csv")

    def test_raw64_roundtrip(self, tmp_path):
        # oracle: encode with numpy's little-endian float64 writer, read back
        path = tmp_path / "x.raw"
        np.array([1.0, 2.0, 3.0]).astype("<f8").tofile(path)
        assert path.stat().st_size == 24
        ts = load_series(path, "raw64")
        assert np.array_equal(ts.samples, [1.0, 2.0, 3.0])

    def test_raw64_bad_length(self, tmp_path):
        path = tmp_path / "x.raw"
        path.write_bytes(b"\x00" * 11)
        with pytest.raises(DataError, match="multiple of 8"):
            load_series(path, "raw64")

    def test_raw64_empty(self, tmp_path):
        path = tmp_path / "x.raw"
        path.write_bytes(b"")
        with pytest.raises(DataError, match="empty input"):
            load_series(path, "raw64")

    def test_unknown_format(self, tmp_path):
        with pytest.raises(ParameterError):
            load_series(tmp_path / "x", "xml")

    def test_save_load_csv_roundtrip(self, tmp_path):
        rng = np.random.default_rng(5)
        ts = TimeSeries(rng.standard_normal(41), source="test")
        path = tmp_path / "r.csv"
        save_series(ts, path, "csv")
        back = load_series(path, "csv")
        assert np.array_equal(back.samples, ts.samples)

    def test_save_load_raw64_roundtrip(self, tmp_path):
        rng = np.random.default_rng(6)
        ts = TimeSeries(rng.standard_normal(17), source="test")
        path = tmp_path / "r.raw"
        save_series(ts, path, "raw64")
        back = load_series(path, "raw64")
        assert np.array_equal(back.samples, ts.samples)


class TestTimeSeries:
    def test_rejects_empty(self):
        with pytest.raises(ParameterError):
            TimeSeries(np.empty(0))

    def test_rejects_nan(self):
        with pytest.raises(DataError, match="index 1"):
            TimeSeries(np.array([1.0, np.nan, 2.0]))


class TestSegmentAndDemean:
    def test_constant_segments_demean_to_zero(self):
        ts = TimeSeries(np.array([5.0, 5.0, 5.0, 5.0]))
        segs = segment_and_demean(ts, SegmentConfig(m=2, k=2))
        assert np.array_equal(segs.segments, np.zeros((2, 2)))
        assert segs.means_removed

    def test_single_segment_hand_oracle(self):
        # mean of [1,2,3,4] is 2.5
        ts = TimeSeries(np.array([1.0, 2.0, 3.0, 4.0]))
        segs = segment_and_demean(ts, SegmentConfig(m=4, k=1))
        assert np.allclose(segs.segments, [[-1.5, -0.5, 0.5, 1.5]], atol=1e-15)

    def test_trailing_samples_discarded(self):
        ts = TimeSeries(np.array([1.0, 2.0, 3.0, 4.0, 5.0]))
        segs = segment_and_demean(ts, SegmentConfig(m=2, k=2))
        assert np.allclose(segs.segments, [[-0.5, 0.5], [-0.5, 0.5]], atol=1e-15)

    def test_oversized_config_names_both_values(self):
        ts = TimeSeries(np.arange(1, 5, dtype=float))
        with pytest.raises(ParameterError) as err:
            segment_and_demean(ts, SegmentConfig(m=3, k=2))
        assert "6" in str(err.value) and "4" in str(err.value)

    def test_shift_invariance(self):
        rng = np.random.default_rng(13)
        x = rng.standard_normal(96)
        cfg = SegmentConfig(m=24, k=4)
        base = segment_and_demean(TimeSeries(x), cfg).segments
        for c in (1.0, -3.7, 1e6):
            shifted = segment_and_demean(TimeSeries(x + c), cfg).segments
            assert np.max(np.abs(shifted - base)) < 1e-9 * max(1.0, abs(c))

    def test_concatenation_property(self):
        rng = np.random.default_rng(14)
        x = rng.standard_normal(64)
        both = segment_and_demean(TimeSeries(x), SegmentConfig(m=32, k=2)).segments
        first = segment_and_demean(TimeSeries(x[:32]), SegmentConfig(m=32, k=1)).segments
        second = segment_and_demean(TimeSeries(x[32:]), SegmentConfig(m=32, k=1)).segments
        assert np.array_equal(both[0], first[0])
        assert np.array_equal(both[1], second[0])

    def test_means_are_zero_relative_to_peak(self):
        rng = np.random.default_rng(15)
        x = rng.standard_normal(200) * 1e6
        segs = segment_and_demean(TimeSeries(x), SegmentConfig(m=50, k=4))
        scale = np.abs(segs.segments).max()
        assert np.all(np.abs(segs.segments.mean(axis=1)) <= 1e-12 * scale)


class TestGenerateQpc:
    def test_deterministic_per_seed(self):
        a = generate_qpc(0.1, 0.15, 256, 0.3, seed=42)
        b = generate_qpc(0.1, 0.15, 256, 0.3, seed=42)
        assert np.array_equal(a.samples, b.samples)

    def test_noise_free_bounded_by_three(self):
        ts = generate_qpc(0.1, 0.15, 4096, 0.0, seed=1)
        assert np.all(np.abs(ts.samples) <= 3.0)

    def test_frequency_sum_constraint(self):
        with pytest.raises(ParameterError):
            generate_qpc(0.3, 0.3, 64)

    def test_nonpositive_frequency_rejected(self):
        with pytest.raises(ParameterError):
            generate_qpc(0.0, 0.1, 64)

    def test_negative_sigma_rejected(self):
        with pytest.raises(ParameterError):
            generate_qpc(0.1, 0.15, 64, noise_sigma=-1.0)


class TestGenerateGaussianAr:
    def test_ar0_is_reproducible_iid_draws(self):
        a = generate_gaussian_ar([], 4, seed=9)
        b = generate_gaussian_ar([], 4, seed=9)
        assert np.array_equal(a.samples, b.samples)
        # degenerate AR(0): exactly the generator's standard-normal stream
        assert np.array_equal(a.samples, np.random.default_rng(9).standard_normal(4))

    def test_unstable_coefficients_rejected(self):
        with pytest.raises(ParameterError, match="unstable"):
            generate_gaussian_ar([1.1], 16)

    def test_unstable_two_tap_rejected(self):
        with pytest.raises(ParameterError, match="unstable"):
            generate_gaussian_ar([0.5, 0.6], 16)

    def test_ar1_lag_one_autocorrelation(self):
        # theoretical AR(1) autocorrelation at lag 1 equals the coefficient
        ts = generate_gaussian_ar([0.5], 100_000, seed=33)
        x = ts.samples - ts.samples.mean()
        rho = float(np.dot(x[:-1], x[1:]) / np.dot(x, x))
        assert abs(rho - 0.5) < 0.02
