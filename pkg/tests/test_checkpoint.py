import json

import numpy as np
import pytest

from crossclear.errors import CheckpointError
from crossclear.neural import (
    HybridModel,
    checkpoint_from_json,
    checkpoint_to_json,
    init_params,
    load_checkpoint,
    save_checkpoint,
)
from crossclear.neural.training import Normalization


@pytest.fixture()
def model(tiny_config):
    norm = Normalization(np.linspace(-1, 1, 7), np.linspace(0.5, 2.0, 7))
    return HybridModel(tiny_config, init_params(tiny_config, seed=3),
                       normalization=norm)


class TestRoundTrip:
    def test_bit_stable_text(self, model):
        text = checkpoint_to_json(model)
        again = checkpoint_to_json(checkpoint_from_json(text))
        assert again == text

    def test_parameters_bit_exact(self, model):
        restored = checkpoint_from_json(checkpoint_to_json(model))
        assert sorted(restored.params) == sorted(model.params)
        for name in model.params:
            assert np.array_equal(restored.params[name], model.params[name])
        assert np.array_equal(restored.normalization.mean, model.normalization.mean)

    def test_file_round_trip(self, model, tmp_path):
        path = tmp_path / "model.json"
        save_checkpoint(model, path)
        restored = load_checkpoint(path)
        save_checkpoint(restored, tmp_path / "again.json")
        assert (tmp_path / "again.json").read_bytes() == path.read_bytes()

    def test_missing_normalization_round_trips(self, tiny_config):
        bare = HybridModel(tiny_config, init_params(tiny_config, seed=0))
        restored = checkpoint_from_json(checkpoint_to_json(bare))
        assert restored.normalization is None


class TestValidation:
    def test_wrong_marker_rejected(self, model):
        doc = json.loads(checkpoint_to_json(model))
        doc["format"] = "something-else"
        with pytest.raises(CheckpointError, match="format"):
            checkpoint_from_json(json.dumps(doc))

    def test_future_version_rejected(self, model):
        doc = json.loads(checkpoint_to_json(model))
        doc["format_version"] = 99
        with pytest.raises(CheckpointError, match="format_version"):
            checkpoint_from_json(json.dumps(doc))

    def test_missing_parameter_rejected(self, model):
        doc = json.loads(checkpoint_to_json(model))
        del doc["params"]["fusion.W"]
        with pytest.raises(CheckpointError, match="fusion.W"):
            checkpoint_from_json(json.dumps(doc))

    def test_extra_parameter_rejected(self, model):
        doc = json.loads(checkpoint_to_json(model))
        doc["params"]["bogus.W"] = doc["params"]["fusion.b"]
        with pytest.raises(CheckpointError):
            checkpoint_from_json(json.dumps(doc))

    def test_truncated_payload_rejected(self, model):
        doc = json.loads(checkpoint_to_json(model))
        entry = doc["params"]["fusion.W"]
        entry["data"] = entry["data"][: len(entry["data"]) // 2]
        with pytest.raises(CheckpointError):
            checkpoint_from_json(json.dumps(doc))

    def test_invalid_json_rejected(self):
        with pytest.raises(CheckpointError):
            checkpoint_from_json("not json at all")

    def test_bad_config_rejected(self, model):
        doc = json.loads(checkpoint_to_json(model))
        doc["config"]["num_heads"] = 5
        with pytest.raises(CheckpointError):
            checkpoint_from_json(json.dumps(doc))
