import json

import numpy as np
import pytest

from krausforge.model import (
    ModelError,
    NoiseChannel,
    QuantumSystem,
    load_model,
    rescale,
    save_model,
    validate,
)

from conftest import make_random_system


class TestBundledModel:
    def test_is_valid(self, bundled):
        assert validate(bundled).ok

    def test_encodes_leakage_hamiltonian(self, bundled):
        h = bundled.hamiltonian
        omega = np.pi
        assert h[0, 1] == omega
        assert h[1, 0] == omega
        assert h[1, 2] == pytest.approx(omega * np.sqrt(2), abs=0)
        assert h[2, 2] == pytest.approx(-omega / 20, abs=0)
        assert h[0, 0] == 0 and h[0, 2] == 0 and h[2, 0] == 0

    def test_encodes_noise_channel(self, bundled):
        assert len(bundled.channels) == 1
        channel = bundled.channels[0]
        expected = np.array([[1, 0, 0], [1, 1, 1], [0, 0, 0]], dtype=complex)
        assert np.array_equal(channel.collapse, expected)
        assert channel.rate == pytest.approx(0.01 * np.pi, abs=0)
        assert channel.quadrature_count == 10


class TestValidate:
    def test_reports_hermiticity_violation_with_entry(self):
        h = np.zeros((2, 2), dtype=complex)
        h[0, 1] = 1.0
        report = validate(QuantumSystem(2, h))
        assert not report.ok
        assert report.issues[0].path == "hamiltonian"
        assert "(0,1)" in report.issues[0].message

    def test_reports_negative_rate(self):
        sys_ = QuantumSystem(2, np.eye(2), [NoiseChannel(np.eye(2), -0.1)])
        report = validate(sys_)
        assert [i.path for i in report.issues] == ["channels[0].rate"]

    def test_reports_dimension_mismatch(self):
        sys_ = QuantumSystem(2, np.eye(2), [NoiseChannel(np.eye(3), 0.1)])
        report = validate(sys_)
        assert report.issues[0].path == "channels[0].matrix"

    def test_reports_bad_quadrature_count(self):
        sys_ = QuantumSystem(2, np.eye(2), [NoiseChannel(np.eye(2), 0.1, 0)])
        report = validate(sys_)
        assert report.issues[0].path == "channels[0].quadrature"

    def test_collects_every_violation(self):
        h = np.zeros((2, 2), dtype=complex)
        h[0, 1] = 1.0
        sys_ = QuantumSystem(2, h, [NoiseChannel(np.eye(3), -1.0, 0)])
        report = validate(sys_)
        assert len(report.issues) == 4


class TestRescale:
    def test_paper_rate(self, bundled):
        scaled = rescale(bundled, 1.0)
        assert scaled.epsilons[0] == pytest.approx(0.0314159265, abs=1e-9)
        assert np.array_equal(scaled.h_tilde, bundled.hamiltonian)

    def test_small_tau_limit(self, bundled):
        scaled = rescale(bundled, 1e-12)
        assert np.abs(scaled.h_tilde).max() < 1e-11
        assert scaled.epsilons[0] < 1e-12

    def test_linear_in_tau(self, bundled):
        one = rescale(bundled, 1.3)
        two = rescale(bundled, 2.6)
        assert np.allclose(two.h_tilde, 2 * one.h_tilde)
        assert np.allclose(two.epsilons, 2 * one.epsilons)

    def test_rejects_nonpositive_tau(self, bundled):
        with pytest.raises(ValueError, match="positive"):
            rescale(bundled, 0.0)

    def test_linearization_warning_flag(self):
        sys_ = QuantumSystem(2, np.eye(2), [NoiseChannel(np.eye(2), 1.0)])
        assert not rescale(sys_, 0.4).linearization_warning
        assert rescale(sys_, 0.6).linearization_warning


class TestLoadModel:
    def test_malformed_json(self):
        with pytest.raises(ModelError, match="malformed JSON"):
            load_model("{not json")

    def test_missing_dimension(self):
        with pytest.raises(ModelError, match="dimension"):
            load_model("{}")

    def test_empty_channels_is_closed_system(self):
        doc = {
            "dimension": 2,
            "hamiltonian": [[[0.0, 0.0], [1.0, 0.0]], [[1.0, 0.0], [0.0, 0.0]]],
        }
        system = load_model(json.dumps(doc))
        assert system.channels == []

    def test_dimension_mismatch_names_path(self):
        doc = {
            "dimension": 2,
            "hamiltonian": [[[0.0, 0.0], [0.0, 0.0]], [[0.0, 0.0], [0.0, 0.0]]],
            "channels": [
                {
                    "matrix": [[[1.0, 0.0]] * 3] * 3,
                    "rate": 0.1,
                }
            ],
        }
        with pytest.raises(ModelError, match=r"channels\[0\]\.matrix"):
            load_model(json.dumps(doc))

    def test_bad_entry_names_path(self):
        doc = {
            "dimension": 2,
            "hamiltonian": [[[0.0, 0.0], [0.0]], [[0.0, 0.0], [0.0, 0.0]]],
        }
        with pytest.raises(ModelError, match=r"hamiltonian\[0\]\[1\]"):
            load_model(json.dumps(doc))

    def test_non_hermitian_rejected_on_load(self):
        doc = {
            "dimension": 2,
            "hamiltonian": [[[0.0, 0.0], [1.0, 0.0]], [[0.0, 0.0], [0.0, 0.0]]],
        }
        with pytest.raises(ModelError, match="hamiltonian"):
            load_model(json.dumps(doc))


class TestRoundTrip:
    def test_bundled_round_trips_exactly(self, bundled):
        again = load_model(save_model(bundled))
        assert again.dimension == bundled.dimension
        assert again.label == bundled.label
        assert np.array_equal(again.hamiltonian, bundled.hamiltonian)
        for a, b in zip(again.channels, bundled.channels):
            assert np.array_equal(a.collapse, b.collapse)
            assert a.rate == b.rate
            assert a.quadrature_count == b.quadrature_count

    def test_random_systems_round_trip_exactly(self):
        rng = np.random.default_rng(21)
        for _ in range(5):
            system = make_random_system(rng)
            again = load_model(save_model(system))
            assert np.array_equal(again.hamiltonian, system.hamiltonian)
            for a, b in zip(again.channels, system.channels):
                assert np.array_equal(a.collapse, b.collapse)
                assert a.rate == b.rate
