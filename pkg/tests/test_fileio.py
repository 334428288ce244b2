"""Binary format round-trips, manifest validation, state dumps, reports."""

import json
import struct
from importlib import resources

import jsonschema
import numpy as np
import pytest

from cliqueadapt import datagen, fileio
from cliqueadapt.core import Space
from cliqueadapt.errors import (
    BadMagic,
    NonUnitVectors,
    SchemaMismatch,
    TruncatedPayload,
    VersionUnsupported,
)
from cliqueadapt.pipeline import EngineConfig, EngineState, run_stream

from helpers import random_unit_rows


class TestFeatureFile:
    def test_round_trip_bit_identical(self, tmp_path):
        rng = np.random.default_rng(0)
        matrix = random_unit_rows(rng, 17, 9).astype("<f4")
        path = tmp_path / "f.csmf"
        fileio.write_feature_file(path, matrix, Space.AFV)
        again, space = fileio.read_feature_file(path)
        assert space is Space.AFV
        assert again.tobytes() == matrix.tobytes()
        # writing the read-back matrix reproduces the file byte for byte
        path2 = tmp_path / "g.csmf"
        fileio.write_feature_file(path2, again, Space.AFV)
        assert path.read_bytes() == path2.read_bytes()

    def test_bad_magic(self, tmp_path):
        path = tmp_path / "f.csmf"
        path.write_bytes(b"XXXX" + b"\x00" * 12)
        with pytest.raises(BadMagic):
            fileio.read_feature_file(path)

    def test_unsupported_version(self, tmp_path):
        rng = np.random.default_rng(1)
        path = tmp_path / "f.csmf"
        fileio.write_feature_file(path, random_unit_rows(rng, 2, 3), Space.CSS)
        raw = bytearray(path.read_bytes())
        raw[4:6] = struct.pack("<H", 99)
        path.write_bytes(bytes(raw))
        with pytest.raises(VersionUnsupported):
            fileio.read_feature_file(path)

    def test_unknown_dtype_code(self, tmp_path):
        rng = np.random.default_rng(2)
        path = tmp_path / "f.csmf"
        fileio.write_feature_file(path, random_unit_rows(rng, 2, 3), Space.CSS)
        raw = bytearray(path.read_bytes())
        raw[7] = 9
        path.write_bytes(bytes(raw))
        with pytest.raises(VersionUnsupported):
            fileio.read_feature_file(path)

    def test_truncated_payload(self, tmp_path):
        rng = np.random.default_rng(3)
        path = tmp_path / "f.csmf"
        fileio.write_feature_file(path, random_unit_rows(rng, 4, 5), Space.CSS)
        raw = path.read_bytes()
        path.write_bytes(raw[: len(raw) - 8])
        with pytest.raises(TruncatedPayload):
            fileio.read_feature_file(path)

    def test_non_unit_rows_rejected_on_read(self, tmp_path):
        header = struct.Struct("<4sHBBII").pack(b"CSMF", 1, 0, 0, 2, 1)
        payload = np.array([[2.0, 0.0]], dtype="<f4").tobytes()
        path = tmp_path / "f.csmf"
        path.write_bytes(header + payload)
        with pytest.raises(NonUnitVectors):
            fileio.read_feature_file(path)

    def test_non_unit_rows_rejected_on_write(self, tmp_path):
        with pytest.raises(NonUnitVectors):
            fileio.write_feature_file(tmp_path / "f.csmf", np.eye(3) * 2.0, Space.CSS)

    def test_labels_round_trip(self, tmp_path):
        labels = np.array([0, 3, 2, 2, 9], dtype="<u4")
        fileio.write_labels(tmp_path / "labels.bin", labels)
        np.testing.assert_array_equal(fileio.read_labels(tmp_path / "labels.bin"), labels)


class TestManifest:
    def _write_dataset(self, tmp_path, samples=6, views=2):
        spec = datagen.SynthSpec(samples=samples, views_per_sample=views, seed=4)
        text, stream = datagen.generate(spec)
        return spec, fileio.write_stream(tmp_path / "data", text, stream)

    def test_write_then_load(self, tmp_path):
        spec, manifest_path = self._write_dataset(tmp_path)
        manifest, data = fileio.load_stream(manifest_path)
        assert manifest.k == spec.k
        assert len(data.samples) == 6
        batch, label = data.samples[0]
        assert batch.css.shape == (2, spec.d1)
        assert batch.afv.shape == (2, spec.d2)
        assert 0 <= label < spec.k

    def test_missing_key(self, tmp_path):
        _, manifest_path = self._write_dataset(tmp_path)
        data = json.loads(manifest_path.read_text())
        del data["labels"]
        manifest_path.write_text(json.dumps(data))
        with pytest.raises(SchemaMismatch):
            fileio.load_stream(manifest_path)

    def test_label_count_mismatch(self, tmp_path):
        _, manifest_path = self._write_dataset(tmp_path)
        fileio.write_labels(manifest_path.parent / "labels.bin", np.zeros(5, dtype="<u4"))
        with pytest.raises(SchemaMismatch):
            fileio.load_stream(manifest_path)

    def test_views_divisibility(self, tmp_path):
        _, manifest_path = self._write_dataset(tmp_path, samples=6, views=2)
        data = json.loads(manifest_path.read_text())
        data["views_per_sample"] = 5
        manifest_path.write_text(json.dumps(data))
        with pytest.raises(SchemaMismatch):
            fileio.load_stream(manifest_path)

    def test_stream_count_mismatch(self, tmp_path):
        rng = np.random.default_rng(5)
        _, manifest_path = self._write_dataset(tmp_path)
        fileio.write_feature_file(
            manifest_path.parent / "afv.csmf", random_unit_rows(rng, 3, 4), Space.AFV
        )
        with pytest.raises(SchemaMismatch):
            fileio.load_stream(manifest_path)

    def test_space_tag_mismatch(self, tmp_path):
        rng = np.random.default_rng(6)
        _, manifest_path = self._write_dataset(tmp_path)
        fileio.write_feature_file(
            manifest_path.parent / "text.csmf", random_unit_rows(rng, 10, 32), Space.AFV
        )
        with pytest.raises(SchemaMismatch):
            fileio.load_stream(manifest_path)


class TestStateDump:
    def test_save_load_round_trip(self, tmp_path):
        spec = datagen.SynthSpec(samples=25, seed=7)
        text, stream = datagen.generate(spec)
        cfg = EngineConfig(k=spec.k, d1=spec.d1, d2=spec.d2)
        from cliqueadapt.pipeline import StreamData

        state = EngineState(cfg, text)
        run_stream(cfg, StreamData(text_features=text, samples=stream), state=state)
        path = tmp_path / "state.json"
        fileio.save_state(path, state)
        loaded = fileio.load_state(path)
        assert loaded.sample_count == state.sample_count
        assert loaded.css_sched.i == state.css_sched.i
        # dumping the loaded state reproduces the file exactly
        path2 = tmp_path / "state2.json"
        fileio.save_state(path2, loaded)
        assert path.read_bytes() == path2.read_bytes()

    def test_version_gate(self, tmp_path):
        with pytest.raises(VersionUnsupported):
            fileio.state_from_dict({"version": 99})


class TestReport:
    def _report(self, verbose=False):
        spec = datagen.SynthSpec(samples=12, seed=8)
        text, stream = datagen.generate(spec)
        cfg = EngineConfig(k=spec.k, d1=spec.d1, d2=spec.d2)
        from cliqueadapt.pipeline import StreamData

        result = run_stream(cfg, StreamData(text_features=text, samples=stream))
        return fileio.make_report(result, cfg, verbose=verbose)

    @pytest.mark.parametrize("verbose", [False, True])
    def test_validates_against_committed_schema(self, verbose):
        schema = json.loads(
            resources.files("cliqueadapt.schemas").joinpath("report.schema.json").read_text()
        )
        jsonschema.validate(self._report(verbose=verbose), schema)

    def test_canonical_json_is_deterministic(self):
        report = self._report(verbose=True)
        assert fileio.canonical_json(report) == fileio.canonical_json(
            json.loads(fileio.canonical_json(report))
        )

    def test_canonical_json_rejects_nan(self):
        with pytest.raises(ValueError):
            fileio.canonical_json({"x": float("nan")})
