import numpy as np
import pytest

from crossclear.errors import ParseError, StationRangeError
from crossclear.profile import (
    ImuGpsSequence,
    PairedSample,
    Profile,
    downsample,
    downsample_sample,
    elevation_at,
    load_paired_samples,
    parse_imugps_csv,
    parse_manifest_csv,
    parse_profile_csv,
    resample,
    stations_from_speed,
    target_as_profile_csv,
    write_imugps_csv,
    write_profile_csv,
)

from conftest import random_imu_channels


class TestProfile:
    def test_basic_properties(self):
        p = Profile([0.0, 1.0, 4.0], [0.1, 0.2, 0.0], crossing_id="x")
        assert p.start == 0.0 and p.end == 4.0 and p.length == 4.0
        assert len(p) == 3

    def test_arrays_are_immutable(self):
        p = Profile([0.0, 1.0], [0.0, 0.0])
        with pytest.raises(ValueError):
            p.elevations[0] = 5.0

    def test_rejects_non_increasing_stations(self):
        with pytest.raises(ValueError, match="strictly increasing"):
            Profile([0.0, 1.0, 1.0], [0.0, 0.0, 0.0])

    def test_rejects_single_point(self):
        with pytest.raises(ValueError):
            Profile([0.0], [0.0])

    def test_rejects_nan(self):
        with pytest.raises(ValueError, match="finite"):
            Profile([0.0, 1.0], [0.0, float("nan")])

    def test_rejects_length_mismatch(self):
        with pytest.raises(ValueError):
            Profile([0.0, 1.0, 2.0], [0.0, 0.0])


class TestElevationAt:
    def test_interpolates_linearly(self):
        p = Profile([0.0, 2.0], [0.0, 1.0])
        assert elevation_at(p, 1.0) == 0.5
        assert elevation_at(p, 0.5) == 0.25

    def test_hits_knots_exactly(self):
        p = Profile([0.0, 1.5, 2.0], [0.3, -0.1, 0.8])
        assert elevation_at(p, 1.5) == -0.1

    def test_out_of_range_raises(self):
        p = Profile([1.0, 2.0], [0.0, 0.0])
        with pytest.raises(StationRangeError):
            elevation_at(p, 0.5)
        with pytest.raises(StationRangeError):
            elevation_at(p, 2.5)

    def test_vectorized(self):
        p = Profile([0.0, 2.0], [0.0, 2.0])
        out = elevation_at(p, np.array([0.0, 1.0, 2.0]))
        assert np.array_equal(out, [0.0, 1.0, 2.0])


class TestResample:
    def test_uniform_grid(self):
        p = Profile([0.0, 1.0], [0.0, 1.0])
        r = resample(p, 0.25)
        assert np.allclose(r.stations, [0.0, 0.25, 0.5, 0.75, 1.0])
        assert np.allclose(r.elevations, r.stations)

    def test_appends_final_station_when_off_grid(self):
        p = Profile([0.0, 1.1], [0.0, 1.1])
        r = resample(p, 0.25)
        assert r.stations[-1] == 1.1
        assert r.stations[-2] == 1.0

    def test_preserves_knot_values(self):
        p = Profile([0.0, 0.5, 1.0], [0.0, 0.7, 0.2])
        r = resample(p, 0.01)
        i = int(round(0.5 / 0.01))
        assert abs(r.elevations[i] - 0.7) < 1e-12

    def test_spacing_must_be_positive(self):
        p = Profile([0.0, 1.0], [0.0, 0.0])
        with pytest.raises(ValueError):
            resample(p, 0.0)


class TestDownsample:
    def test_every_other(self):
        seq = np.arange(10)
        assert np.array_equal(downsample(seq, 2), [0, 2, 4, 6, 8])

    def test_factor_one_is_identity(self):
        seq = np.arange(5)
        assert np.array_equal(downsample(seq, 1), seq)

    def test_sample_downsampled_consistently(self):
        rng = np.random.default_rng(3)
        sample = PairedSample(
            input=ImuGpsSequence(np.arange(8.0), random_imu_channels(rng, 8)),
            target=np.arange(8.0) * 0.1,
            crossing_id="s",
        )
        half = downsample_sample(sample, 2)
        assert len(half.input) == 4 and len(half.target) == 4
        assert half.input.timestamps[1] == 2.0
        assert half.target[1] == pytest.approx(0.2)


class TestProfileCsv:
    def test_round_trip_bit_stable(self):
        p = Profile([0.0, 0.01, 0.02, 1.5], [0.1, -0.2, 0.30000000000000004, 0.0])
        text = write_profile_csv(p)
        again = write_profile_csv(parse_profile_csv(text))
        assert again == text
        parsed = parse_profile_csv(text)
        assert np.array_equal(parsed.stations, p.stations)
        assert np.array_equal(parsed.elevations, p.elevations)

    def test_comments_and_blanks_ignored(self):
        text = "# survey notes\n\nstation_m,elevation_m\n0,0\n1,0.5\n"
        p = parse_profile_csv(text)
        assert len(p) == 2

    def test_bad_header_names_file_and_row(self):
        with pytest.raises(ParseError) as err:
            parse_profile_csv("foo,bar\n0,0\n", source="bad.csv")
        assert "bad.csv" in str(err.value)

    def test_non_numeric_cell_rejected(self):
        with pytest.raises(ParseError, match="non-numeric"):
            parse_profile_csv("station_m,elevation_m\n0,zero\n1,0\n")

    def test_unsorted_stations_rejected(self):
        with pytest.raises(ParseError):
            parse_profile_csv("station_m,elevation_m\n1,0\n0,0\n")


class TestImuCsv:
    def test_round_trip(self):
        rng = np.random.default_rng(11)
        seq = ImuGpsSequence(np.arange(5) * 0.02, random_imu_channels(rng, 5),
                             crossing_id="imu")
        text = write_imugps_csv(seq)
        parsed = parse_imugps_csv(text)
        assert np.array_equal(parsed.timestamps, seq.timestamps)
        assert np.array_equal(parsed.channels, seq.channels)
        assert write_imugps_csv(parsed) == text

    def test_timestamps_must_increase(self):
        rng = np.random.default_rng(1)
        with pytest.raises(ValueError):
            ImuGpsSequence(np.zeros(3), random_imu_channels(rng, 3))

    def test_channel_count_enforced(self):
        with pytest.raises(ValueError):
            ImuGpsSequence(np.arange(3.0), np.zeros((3, 5)))


class TestStationsFromSpeed:
    def test_constant_speed(self):
        rng = np.random.default_rng(2)
        channels = random_imu_channels(rng, 4)
        channels[:, 5] = 10.0
        seq = ImuGpsSequence(np.arange(4) * 0.5, channels)
        s = stations_from_speed(seq)
        assert np.allclose(s, [0.0, 5.0, 10.0, 15.0])

    def test_zero_speed_is_unusable(self):
        rng = np.random.default_rng(2)
        channels = random_imu_channels(rng, 4)
        channels[:, 5] = 0.0
        seq = ImuGpsSequence(np.arange(4.0), channels)
        assert stations_from_speed(seq) is None


class TestManifest:
    def test_load_paired_samples(self, tmp_path):
        rng = np.random.default_rng(5)
        seq = ImuGpsSequence(np.arange(6) * 0.02, random_imu_channels(rng, 6),
                             crossing_id="a")
        sample = PairedSample(input=seq, target=rng.normal(size=6), crossing_id="a")
        (tmp_path / "a.imu.csv").write_text(write_imugps_csv(seq))
        (tmp_path / "a.target.csv").write_text(target_as_profile_csv(sample))
        (tmp_path / "manifest.csv").write_text(
            "crossing_id,imu_path,profile_path\na,a.imu.csv,a.target.csv\n")
        samples = load_paired_samples(tmp_path / "manifest.csv")
        assert len(samples) == 1
        assert samples[0].crossing_id == "a"
        assert np.allclose(samples[0].target, sample.target)

    def test_manifest_missing_column(self):
        with pytest.raises(ParseError):
            parse_manifest_csv("crossing_id,imu_path\na,b\n")
