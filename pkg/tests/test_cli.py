import json

import numpy as np
import pytest

from crossclear.cli import main
from crossclear.neural import HybridModel, ModelConfig, init_params, save_checkpoint
from crossclear.profile import (
    ImuGpsSequence,
    PairedSample,
    Profile,
    load_profile,
    target_as_profile_csv,
    write_imugps_csv,
    write_profile_csv,
)

from conftest import EXPECTED_RESULTS_CSV, hump_profile, random_imu_channels


class TestExitCodes:
    def test_no_subcommand_is_usage_error(self):
        assert main([]) == 1

    def test_unknown_subcommand(self):
        assert main(["frobnicate"]) == 1

    def test_bad_flag_value(self, tmp_path):
        assert main(["network", "--inventory", "x", "--scenario", "typical",
                     "--out", "y"]) == 1

    def test_missing_file_is_data_error(self, tmp_path, capsys):
        rc = main(["analyze", "--profile", str(tmp_path / "nope.csv"),
                   "--vehicle", "low_boy"])
        assert rc == 2
        assert "nope.csv" in capsys.readouterr().err

    def test_help_exits_zero(self, capsys):
        assert main(["--help"]) == 0
        assert "export-geojson" in capsys.readouterr().out


class TestAnalyze:
    def test_json_output(self, tmp_path, capsys):
        path = tmp_path / "hump.csv"
        path.write_text(write_profile_csv(hump_profile(0.3)))
        rc = main(["analyze", "--profile", str(path), "--vehicle", "low_boy",
                   "--scenario", "worst", "--json"])
        assert rc == 0
        doc = json.loads(capsys.readouterr().out)
        assert doc["level"] == 4
        assert doc["delta_min_m"] == pytest.approx(-0.11725, abs=1e-4)
        assert doc["vehicle_label"] == "Low Boy (worst)"

    def test_text_output_lists_fields(self, tmp_path, capsys):
        path = tmp_path / "flat.csv"
        path.write_text(write_profile_csv(hump_profile(0.0)))
        rc = main(["analyze", "--profile", str(path), "--vehicle", "school_bus",
                   "--scenario", "median"])
        assert rc == 0
        out = capsys.readouterr().out
        assert "delta_min_m: 0.23" in out
        assert "level: 1" in out

    def test_custom_geometry(self, tmp_path, capsys):
        path = tmp_path / "hump.csv"
        path.write_text(write_profile_csv(hump_profile(0.3)))
        rc = main(["analyze", "--profile", str(path), "--wheelbase", "10",
                   "--clearance", "0.3", "--json"])
        assert rc == 0
        doc = json.loads(capsys.readouterr().out)
        assert doc["delta_min_m"] == pytest.approx(0.3 - 0.3 * 10 / 12, abs=1e-4)

    def test_vehicle_and_dimensions_conflict(self, tmp_path, capsys):
        path = tmp_path / "flat.csv"
        path.write_text(write_profile_csv(hump_profile(0.0)))
        rc = main(["analyze", "--profile", str(path), "--vehicle", "low_boy",
                   "--wheelbase", "9", "--clearance", "0.2"])
        assert rc == 2


class TestVehicles:
    def test_list_prints_bundled_table(self, capsys):
        assert main(["vehicles", "--list"]) == 0
        lines = capsys.readouterr().out.strip().splitlines()
        assert len(lines) == 13
        assert lines[1].startswith("belly_dump,24,10.06,10.29,11.13,0.23,0.25,0.32")

    def test_summarize_raw_measurements(self, tmp_path, capsys):
        raw = tmp_path / "raw.csv"
        raw.write_text(
            "vehicle_type,wheelbase,clearance_wheelbase,front_overhang_length,"
            "clearance_front,rear_overhang_length,clearance_rear,units\n"
            "Tanker,9.5,0.3,,,,,m\nTanker,10.5,0.4,,,,,m\n")
        assert main(["vehicles", "--summarize", str(raw)]) == 0
        out = capsys.readouterr().out
        assert out.splitlines()[1].startswith("tanker,2,10,")


class TestNetworkAndGeojson:
    def test_fixture_byte_exact_and_manifest(self, fixture_dir):
        out = fixture_dir / "results.csv"
        rc = main(["network", "--inventory", str(fixture_dir / "inventory.csv"),
                   "--scenario", "median", "--types", "low_boy",
                   "--out", str(out)])
        assert rc == 0
        assert out.read_text() == EXPECTED_RESULTS_CSV
        summary = json.loads((fixture_dir / "results.summary.json").read_text())
        assert summary["worst_level_by_crossing"] == {
            "XING-FLAT": 1, "XING-MILD": 1, "XING-SEVERE": 4}
        manifest = json.loads((fixture_dir / "results.csv.manifest.json").read_text())
        assert manifest["command"] == "network"
        assert len(manifest["inputs"]) == 4  # inventory + 3 profiles
        assert all(len(digest) == 64 for digest in manifest["inputs"].values())

    def test_rerun_is_byte_identical(self, fixture_dir):
        args = ["network", "--inventory", str(fixture_dir / "inventory.csv"),
                "--scenario", "median", "--types", "low_boy"]
        main(args + ["--out", str(fixture_dir / "a.csv")])
        main(args + ["--out", str(fixture_dir / "b.csv"), "--jobs", "3"])
        assert (fixture_dir / "a.csv").read_bytes() == (fixture_dir / "b.csv").read_bytes()

    def test_export_geojson_layers(self, fixture_dir):
        out = fixture_dir / "results.csv"
        main(["network", "--inventory", str(fixture_dir / "inventory.csv"),
              "--scenario", "median", "--types", "low_boy", "--out", str(out)])
        rc = main(["export-geojson", "--inventory",
                   str(fixture_dir / "inventory.csv"), "--results", str(out),
                   "--out", str(fixture_dir / "layers")])
        assert rc == 0
        combined = json.loads((fixture_dir / "layers" / "combined.geojson").read_text())
        assert len(combined["features"]) == 3
        assert (fixture_dir / "layers" / "low_boy.geojson").exists()


class TestAugmentTrainPredict:
    def _write_corpus(self, tmp_path, count=3, length=24):
        rng = np.random.default_rng(0)
        lines = ["crossing_id,imu_path,profile_path"]
        for i in range(count):
            seq = ImuGpsSequence(np.arange(length) * 0.02,
                                 random_imu_channels(rng, length),
                                 crossing_id=f"c{i}")
            sample = PairedSample(input=seq, target=rng.normal(size=length),
                                  crossing_id=f"c{i}")
            (tmp_path / f"c{i}.imu.csv").write_text(write_imugps_csv(seq))
            (tmp_path / f"c{i}.target.csv").write_text(target_as_profile_csv(sample))
            lines.append(f"c{i},c{i}.imu.csv,c{i}.target.csv")
        manifest = tmp_path / "pairs.csv"
        manifest.write_text("\n".join(lines) + "\n")
        return manifest

    def test_augment_writes_dataset(self, tmp_path, capsys):
        manifest = self._write_corpus(tmp_path)
        out = tmp_path / "dataset"
        rc = main(["augment", "--manifest", str(manifest), "--out", str(out),
                   "--t1", "2", "--t2", "1", "--seed", "5"])
        assert rc == 0
        assert "12 samples" in capsys.readouterr().out  # 3 * (2 + 2*1)
        for part in ("train", "test", "validation"):
            assert (out / part / "manifest.csv").exists()
        run = json.loads((out / "run-manifest.json").read_text())
        assert run["seeds"] == {"seed": 5}

    def test_train_then_predict(self, tmp_path, capsys):
        manifest = self._write_corpus(tmp_path, count=4, length=16)
        dataset = tmp_path / "dataset"
        main(["augment", "--manifest", str(manifest), "--out", str(dataset),
              "--t1", "2", "--t2", "1"])
        ckpt = tmp_path / "model.json"
        rc = main(["train", "--data", str(dataset), "--out", str(ckpt),
                   "--epochs", "1", "--d-model", "8", "--num-heads", "2",
                   "--ff-width", "16", "--lstm-hidden", "8", "--batch-size", "4"])
        assert rc == 0
        assert ckpt.exists()
        history = json.loads((tmp_path / "model.json.history.json").read_text())
        assert len(history["history"]) == 1

        rc = main(["predict", "--checkpoint", str(ckpt),
                   "--imu", str(tmp_path / "c0.imu.csv"),
                   "--out", str(tmp_path / "pred.csv")])
        assert rc == 0
        prof = load_profile(tmp_path / "pred.csv")
        assert len(prof) == 16

    def test_predict_with_bad_checkpoint_is_data_error(self, tmp_path):
        bad = tmp_path / "bad.json"
        bad.write_text("{}")
        rng = np.random.default_rng(1)
        seq = ImuGpsSequence(np.arange(8) * 0.02, random_imu_channels(rng, 8))
        (tmp_path / "imu.csv").write_text(write_imugps_csv(seq))
        rc = main(["predict", "--checkpoint", str(bad),
                   "--imu", str(tmp_path / "imu.csv"),
                   "--out", str(tmp_path / "out.csv")])
        assert rc == 2
