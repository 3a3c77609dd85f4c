import numpy as np
import pytest
from sklearn.base import clone
from sklearn.exceptions import NotFittedError
from sklearn.pipeline import make_pipeline

from krausforge.estimator import KrausChannel, as_quantum_system
from krausforge.linalg import l2_distance
from krausforge.liouville import exact_map
from krausforge.model import save_model

from conftest import random_hermitian


def random_density(rng, d):
    a = rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))
    rho = a @ a.conj().T
    return rho / np.trace(rho)


class TestSklearnContract:
    def test_get_params(self):
        params = KrausChannel(tau=0.5, n_quadrature=7).get_params()
        assert params == {
            "tau": 0.5,
            "method": "kraus",
            "n_quadrature": 7,
            "quadrature": "midpoint",
            "system": None,
        }

    def test_set_params_round_trip(self):
        channel = KrausChannel().set_params(tau=2.0, method="exact")
        assert channel.tau == 2.0
        assert channel.method == "exact"

    def test_clone_preserves_params(self, bundled):
        channel = KrausChannel(tau=0.7, n_quadrature=4).fit(bundled)
        copy = clone(channel)
        assert copy.get_params() == channel.get_params()
        with pytest.raises(NotFittedError):
            copy.transform(np.eye(3) / 3)

    def test_unfitted_transform_raises(self):
        with pytest.raises(NotFittedError):
            KrausChannel().transform(np.eye(3) / 3)

    def test_unknown_method_rejected(self, bundled):
        with pytest.raises(ValueError, match="method"):
            KrausChannel(method="magic").fit(bundled)


class TestFitInputs:
    def test_fit_from_system(self, bundled):
        channel = KrausChannel().fit(bundled)
        assert channel.dim_ == 3
        assert channel.n_features_in_ == 9
        assert channel.kraus_set_ is not None

    def test_fit_from_json_text(self, bundled):
        channel = KrausChannel(method="exact").fit(save_model(bundled))
        assert channel.dim_ == 3
        assert channel.kraus_set_ is None

    def test_each_method_builds_its_map(self, bundled):
        from krausforge.liouville import first_order_map, infinitesimal_map

        dphi = KrausChannel(tau=0.4, method="dphi").fit(bundled)
        assert np.array_equal(dphi.superoperator_.matrix, infinitesimal_map(bundled, 0.4).matrix)
        first = KrausChannel(tau=0.4, method="first_order").fit(bundled)
        assert np.array_equal(first.superoperator_.matrix, first_order_map(bundled, 0.4).matrix)

    def test_fit_from_path(self, bundled, tmp_path):
        path = tmp_path / "model.json"
        path.write_text(save_model(bundled))
        channel = KrausChannel(method="first_order").fit(str(path))
        assert channel.dim_ == 3

    def test_rejects_unsupported_source(self):
        with pytest.raises(TypeError, match="quantum system"):
            as_quantum_system(42)


class TestTransform:
    def test_single_state_trace_preserved_by_exact_map(self, bundled):
        rng = np.random.default_rng(50)
        channel = KrausChannel(tau=1.0, method="exact").fit(bundled)
        rho = random_density(rng, 3)
        out = channel.transform(rho)
        assert out.shape == (3, 3)
        assert abs(np.trace(out) - 1.0) < 1e-10
        assert np.abs(out - out.conj().T).max() < 1e-10

    def test_batch_matches_single(self, bundled):
        rng = np.random.default_rng(51)
        channel = KrausChannel(tau=1.0).fit(bundled)
        batch = np.stack([random_density(rng, 3) for _ in range(5)])
        out = channel.transform(batch)
        assert out.shape == (5, 3, 3)
        for k in range(5):
            assert np.abs(out[k] - channel.transform(batch[k])).max() < 1e-14

    def test_vectorized_layouts(self, bundled):
        rng = np.random.default_rng(52)
        channel = KrausChannel(tau=1.0).fit(bundled)
        rho = random_density(rng, 3)
        flat = rho.reshape(-1, order="F")
        out_flat = channel.transform(flat)
        assert out_flat.shape == (9,)
        assert np.abs(out_flat.reshape((3, 3), order="F") - channel.transform(rho)).max() < 1e-14
        out_rows = channel.transform(np.stack([flat, flat]))
        assert out_rows.shape == (2, 9)
        assert np.abs(out_rows[0] - out_flat).max() < 1e-13

    def test_predict_is_transform(self, bundled):
        rng = np.random.default_rng(53)
        channel = KrausChannel(tau=1.0).fit(bundled)
        rho = random_density(rng, 3)
        assert np.array_equal(channel.predict(rho), channel.transform(rho))

    def test_rejects_wrong_shape(self, bundled):
        channel = KrausChannel().fit(bundled)
        with pytest.raises(ValueError, match="shape"):
            channel.transform(np.eye(4))


class TestComposition:
    def test_pipeline_composes_evolution_windows(self, bundled):
        # Two exact half-windows compose to the exact full window, so a
        # pipeline of channels is sequential evolution on the state stream.
        rng = np.random.default_rng(54)
        half = KrausChannel(tau=0.5, method="exact", system=bundled)
        pipeline = make_pipeline(clone(half), clone(half))
        batch = np.stack([random_density(rng, 3) for _ in range(3)])
        out = pipeline.fit(batch).transform(batch)
        full = KrausChannel(tau=1.0, method="exact").fit(bundled)
        assert np.abs(out - full.transform(batch)).max() < 1e-10

    def test_fit_without_system_raises(self):
        with pytest.raises(TypeError, match="no system"):
            KrausChannel().fit()

    def test_score_improves_with_quadrature(self, bundled):
        coarse = KrausChannel(tau=1.0, n_quadrature=1).fit(bundled)
        fine = KrausChannel(tau=1.0, n_quadrature=50).fit(bundled)
        assert fine.score() > coarse.score()

    def test_score_is_negative_distance(self, bundled):
        channel = KrausChannel(tau=1.0, method="first_order").fit(bundled)
        expected = l2_distance(channel.superoperator_.matrix, exact_map(bundled, 1.0).matrix)
        assert channel.score() == -expected
