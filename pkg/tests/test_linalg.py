import numpy as np
import pytest

from cbnorm import linalg


def random_complex(rng, *shape):
    return (rng.standard_normal(shape) + 1j * rng.standard_normal(shape)) / np.sqrt(2)


class TestHermitianEig:
    def test_identity(self):
        w, v = linalg.hermitian_eig(np.eye(2))
        np.testing.assert_allclose(w, [1.0, 1.0])

    def test_swap_matrix(self):
        w, _ = linalg.hermitian_eig(np.array([[0.0, 1.0], [1.0, 0.0]]))
        np.testing.assert_allclose(w, [-1.0, 1.0], atol=1e-12)

    def test_hand_characteristic_polynomial(self):
        # det([[2-x,1],[1,2-x]]) = x^2 - 4x + 3 -> roots 1, 3
        w, v = linalg.hermitian_eig(np.array([[2.0, 1.0], [1.0, 2.0]]))
        np.testing.assert_allclose(w, [1.0, 3.0], atol=1e-12)

    def test_reconstruction_and_unitarity(self):
        rng = np.random.default_rng(0)
        m = random_complex(rng, 9, 9)
        a = m + m.conj().T
        w, v = linalg.hermitian_eig(a)
        scale = linalg.operator_norm(a)
        assert np.all(np.diff(w) >= 0)
        assert np.max(np.abs(a - (v * w) @ v.conj().T)) <= 1e-10 * scale
        assert np.max(np.abs(v.conj().T @ v - np.eye(9))) <= 1e-10

    def test_rejects_non_hermitian(self):
        with pytest.raises(ValueError, match="asymmetry"):
            linalg.hermitian_eig(np.array([[0.0, 1.0], [0.0, 0.0]]))


class TestNorms:
    def test_zero_matrix(self):
        assert linalg.operator_norm(np.zeros((3, 4))) == 0.0

    def test_unitary_has_norm_one(self):
        rng = np.random.default_rng(1)
        q, _ = np.linalg.qr(random_complex(rng, 5, 5))
        assert abs(linalg.operator_norm(q) - 1.0) <= 1e-10

    def test_all_ones(self):
        # rank one: sigma = ||ones||_2^2 = n
        for n in (2, 3, 7):
            assert abs(linalg.operator_norm(np.ones((n, n))) - n) <= 1e-10

    def test_trace_norm_identity(self):
        assert abs(linalg.trace_norm(np.eye(5)) - 5.0) <= 1e-10

    def test_trace_norm_rank_one(self):
        rng = np.random.default_rng(2)
        f, g = random_complex(rng, 6), random_complex(rng, 4)
        expect = np.linalg.norm(f) * np.linalg.norm(g)
        assert abs(linalg.trace_norm(np.outer(f, g.conj())) - expect) <= 1e-10

    def test_trace_norm_hand_example(self):
        # singular values of [[1,1],[1,-1]] are sqrt(2), sqrt(2)
        a = np.array([[1.0, 1.0], [1.0, -1.0]])
        assert abs(linalg.trace_norm(a) - 2 * np.sqrt(2)) <= 1e-10

    def test_max_eig_equals_operator_norm_hermitian(self):
        rng = np.random.default_rng(3)
        for _ in range(20):
            m = random_complex(rng, 8, 8)
            a = m + m.conj().T
            w, _ = linalg.hermitian_eig(a)
            top = max(abs(w[0]), abs(w[-1]))
            assert abs(top - linalg.operator_norm(a)) <= 1e-9 * max(1.0, top)

    def test_trace_dominates_operator_norm(self):
        rng = np.random.default_rng(4)
        for _ in range(20):
            a = random_complex(rng, 6, 6)
            assert linalg.trace_norm(a) >= linalg.operator_norm(a) - 1e-10

    def test_rank_one_equality(self):
        rng = np.random.default_rng(5)
        for _ in range(10):
            a = np.outer(random_complex(rng, 5), random_complex(rng, 5))
            assert abs(linalg.trace_norm(a) - linalg.operator_norm(a)) <= 1e-10


class TestPsdFactor:
    def test_identity(self):
        ell = linalg.psd_factor(np.eye(2))
        np.testing.assert_allclose(ell @ ell.conj().T, np.eye(2), atol=1e-12)

    def test_rank_one_diag(self):
        ell = linalg.psd_factor(np.diag([4.0, 0.0]))
        assert ell.shape == (2, 1)
        np.testing.assert_allclose(np.abs(ell[:, 0]), [2.0, 0.0], atol=1e-12)

    def test_reconstruction(self):
        a = np.array([[2.0, 1.0], [1.0, 2.0]])
        ell = linalg.psd_factor(a)
        assert np.max(np.abs(a - ell @ ell.conj().T)) <= 1e-10

    def test_random_psd_reconstruction(self):
        rng = np.random.default_rng(6)
        tol = 1e-10
        for _ in range(100):
            n = int(rng.integers(2, 65))
            m = random_complex(rng, n, n)
            a = m @ m.conj().T
            ell = linalg.psd_factor(a, tol=tol)
            bound = 10 * tol * max(1.0, linalg.operator_norm(a))
            assert linalg.operator_norm(a - ell @ ell.conj().T) <= max(bound, 1e-10 * n)

    def test_rejects_indefinite(self):
        with pytest.raises(ValueError, match="not PSD"):
            linalg.psd_factor(np.diag([1.0, -1.0]), tol=1e-10)

    def test_clips_slightly_negative(self):
        a = np.diag([1.0, -1e-12])
        ell = linalg.psd_factor(a, tol=1e-10)
        assert ell.shape[1] == 1


class TestJson:
    def test_round_trip_complex(self):
        rng = np.random.default_rng(7)
        a = random_complex(rng, 3, 5)
        doc = linalg.matrix_to_json(a)
        np.testing.assert_array_equal(linalg.matrix_from_json(doc), a)

    def test_im_omitted_for_real(self):
        doc = linalg.matrix_to_json(np.ones((2, 2)))
        assert "im" not in doc
        np.testing.assert_array_equal(linalg.matrix_from_json(doc), np.ones((2, 2)))

    def test_shape_mismatch_rejected(self):
        with pytest.raises(ValueError, match="shape"):
            linalg.matrix_from_json({"rows": 2, "cols": 2, "re": [[1.0]]})

    def test_non_finite_rejected(self):
        with pytest.raises(ValueError, match="finite"):
            linalg.as_matrix([[np.nan, 0.0]])
