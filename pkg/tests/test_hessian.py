import numpy as np
import pytest

from geoent import (
    DEGENERATE,
    LOCAL_MINIMUM,
    SADDLE,
    DomainError,
    ProductParams,
    SymmetricBlocks,
    SymmetricParams,
    SymmetryError,
    TargetState,
    analytic_eigenpairs,
    block_hessian,
    build_hessian,
    distance_sq,
    eig_symmetric,
    gauge_directions,
    jacobi_eigh,
    make_dicke,
    make_ring,
    symmetric_blocks,
)
from geoent.symmetric import solve_dicke, solve_ring
from geoent.verify import fd_hessian_matrix


def random_target(q, rng):
    c = rng.standard_normal(2 ** q)
    return TargetState(q, c / np.linalg.norm(c))


class TestBuildHessian:
    def test_two_qubit_basis_target_hand_values(self):
        H = build_hessian(make_dicke(2, 0), ProductParams(2, [(1, 0), (1, 0)])).entries
        np.testing.assert_allclose(np.diag(H), [2, 2, 2, 2], atol=0)
        assert H[0, 2] == 2.0  # 4*a0*b0 - 2*chi00
        assert H[0, 3] == 0.0
        assert H[0, 1] == 0.0 and H[2, 3] == 0.0  # intra-qubit entries vanish

    def test_matches_finite_differences(self):
        rng = np.random.default_rng(21)
        for _ in range(12):
            q = int(rng.integers(2, 5))
            target = random_target(q, rng)
            params = ProductParams(q, rng.uniform(-1, 1, (q, 2)))
            H = build_hessian(target, params).entries
            fun = lambda x: distance_sq(target, ProductParams.from_flat(x)).dsq
            fd = fd_hessian_matrix(fun, params.flat())
            assert np.max(np.abs(H - fd)) < 1e-5

    def test_intra_qubit_blocks_always_zero(self):
        rng = np.random.default_rng(22)
        for _ in range(10):
            q = int(rng.integers(2, 6))
            target = random_target(q, rng)
            H = build_hessian(target, ProductParams(q, rng.uniform(-1, 1, (q, 2)))).entries
            for t in range(q):
                assert H[2 * t, 2 * t + 1] == 0.0
                assert H[2 * t, 2 * t] == H[2 * t + 1, 2 * t + 1] > 0

    def test_symmetric_point_equals_block_form(self):
        for q, p in [(3, 1), (4, 2), (5, 3)]:
            sol = solve_dicke(q, p)
            target = make_dicke(q, p)
            direct = build_hessian(target, sol.product_params()).entries
            blocks = symmetric_blocks(target, sol.symmetric_params())
            assert np.max(np.abs(direct - block_hessian(q, blocks).entries)) < 1e-13


class TestSymmetricBlocks:
    def test_dicke31_ratios(self):
        blocks = symmetric_blocks(make_dicke(3, 1), solve_dicke(3, 1).symmetric_params())
        assert blocks.scale_ratio == pytest.approx(np.sqrt(2), abs=1e-12)
        assert blocks.rotation_ratio == pytest.approx(-1 / np.sqrt(2), abs=1e-12)
        assert blocks.stationary

    def test_balanced_dicke_ratios(self):
        blocks = symmetric_blocks(make_dicke(4, 2), solve_dicke(4, 2).symmetric_params())
        assert blocks.scale_ratio == pytest.approx(1.0, abs=1e-12)
        assert blocks.rotation_ratio == pytest.approx(-1.0, abs=1e-12)

    def test_on_shell_product_across_family(self):
        for q in range(3, 9):
            for p in range(1, q):
                blocks = symmetric_blocks(make_dicke(q, p), solve_dicke(q, p).symmetric_params())
                assert blocks.on_shell_residual <= 1e-10

    def test_rejects_non_symmetric_target(self):
        with pytest.raises(SymmetryError):
            symmetric_blocks(make_ring(4), SymmetricParams(4, 0.5, 0.5))

    def test_off_shell_point_flagged(self):
        blocks = symmetric_blocks(make_dicke(3, 1), SymmetricParams(3, 1.0, 1.0))
        assert not blocks.stationary


class TestAnalyticEigenpairs:
    def test_dicke31_eigenvalues(self):
        sol = solve_dicke(3, 1)
        blocks = symmetric_blocks(make_dicke(3, 1), sol.symmetric_params())
        pairs = analytic_eigenpairs(3, blocks)
        tau = 2 * (4 / 9) ** (2 / 3)
        np.testing.assert_allclose(
            sorted(e for e, _ in pairs),
            sorted([3 * tau, 0, 0, tau / 2, tau / 2, 2 * tau]),
            atol=1e-12,
        )

    def test_multiplicity_pattern(self):
        for q in (3, 5, 8):
            sol = solve_dicke(q, 1)
            blocks = symmetric_blocks(make_dicke(q, 1), sol.symmetric_params())
            values = [e for e, _ in analytic_eigenpairs(q, blocks)]
            assert len(values) == 2 * q
            assert values[0] == pytest.approx(q * blocks.diag, rel=1e-12)
            assert values[1:q] == [0.0] * (q - 1)
            assert len(set(np.round(values[q:2 * q - 1], 12))) == 1

    def test_eigen_equation_residuals(self):
        for q in range(3, 9):
            for p in (1, q // 2):
                sol = solve_dicke(q, p)
                target = make_dicke(q, p)
                H = build_hessian(target, sol.product_params()).entries
                blocks = symmetric_blocks(target, sol.symmetric_params())
                hnorm = np.linalg.norm(H)
                for e, v in analytic_eigenpairs(q, blocks):
                    assert np.max(np.abs(H @ v - e * v)) <= 1e-10 * hnorm

    def test_vectors_orthonormal(self):
        sol = solve_dicke(6, 2)
        blocks = symmetric_blocks(make_dicke(6, 2), sol.symmetric_params())
        V = np.column_stack([v for _, v in analytic_eigenpairs(6, blocks)])
        np.testing.assert_allclose(V.T @ V, np.eye(12), atol=1e-10)

    def test_rejects_off_shell_blocks(self):
        bad = SymmetricBlocks(
            diag=1.0, coupling00=0.5, coupling01=0.5, coupling11=0.5,
            scale_ratio=1.0, rotation_ratio=1.0, stationary=False,
        )
        with pytest.raises(DomainError):
            analytic_eigenpairs(3, bad)

    def test_ring_block_values(self):
        # uniform-coupling surrogate eigenvalues from the closed-form blocks
        sol = solve_ring(6)
        assert sol.eigenvalues[3] == pytest.approx(-sol.diag / 4, abs=1e-12)
        sol = solve_ring(7)
        assert sol.eigenvalues[3] == pytest.approx(-0.8 * sol.diag, abs=1e-12)


class TestJacobi:
    def test_against_numpy_on_random_matrices(self):
        rng = np.random.default_rng(23)
        for n in (2, 5, 11, 20):
            a = rng.standard_normal((n, n))
            a = a + a.T
            w, v = jacobi_eigh(a)
            np.testing.assert_allclose(w, np.linalg.eigvalsh(a), atol=1e-10 * np.linalg.norm(a))
            np.testing.assert_allclose(v.T @ v, np.eye(n), atol=1e-12)
            np.testing.assert_allclose(v @ np.diag(w) @ v.T, a, atol=1e-10 * np.linalg.norm(a))

    def test_identity_matrix(self):
        w, v = jacobi_eigh(2 * np.eye(2))
        np.testing.assert_array_equal(w, [2, 2])
        np.testing.assert_array_equal(v, np.eye(2))

    def test_zero_matrix(self):
        w, v = jacobi_eigh(np.zeros((3, 3)))
        np.testing.assert_array_equal(w, np.zeros(3))


class TestEigSymmetric:
    def test_trivial_scaled_identity(self):
        rep = eig_symmetric(2 * np.eye(2))
        np.testing.assert_array_equal(rep.eigenvalues, [2, 2])
        assert rep.zero_modes == 0
        assert rep.classification == LOCAL_MINIMUM

    def test_dicke41_spectrum_and_zero_modes(self):
        sol = solve_dicke(4, 1)
        target = make_dicke(4, 1)
        params = sol.product_params()
        rep = eig_symmetric(build_hessian(target, params), params=params)
        np.testing.assert_allclose(rep.eigenvalues, sol.spectrum_list(), atol=1e-9 * sol.diag)
        assert rep.zero_modes == 3
        assert rep.classification == LOCAL_MINIMUM

    def test_reconstruction_residual(self):
        rng = np.random.default_rng(24)
        target = random_target(4, rng)
        H = build_hessian(target, ProductParams(4, rng.uniform(-1, 1, (4, 2))))
        rep = eig_symmetric(H)
        recon = rep.eigenvectors @ np.diag(rep.eigenvalues) @ rep.eigenvectors.T
        nrm = np.max(np.abs(H.entries))
        assert np.max(np.abs(H.entries - recon)) <= 1e-10 * nrm

    def test_ring7_one_negative_family_saddle(self):
        sol = solve_ring(7)
        params = sol.product_params()
        rep = eig_symmetric(build_hessian(make_ring(7), params), params=params)
        negatives = rep.eigenvalues[rep.eigenvalues < -1e-8 * np.max(np.abs(rep.eigenvalues))]
        assert len(negatives) == 2  # one doubly-degenerate family
        assert negatives[0] == pytest.approx(negatives[1], rel=1e-9)
        assert rep.classification == SADDLE

    def test_zero_band_without_params_is_degenerate(self):
        sol = solve_dicke(4, 1)
        rep = eig_symmetric(build_hessian(make_dicke(4, 1), sol.product_params()))
        assert rep.zero_modes == 3
        assert rep.classification == DEGENERATE

    def test_json_serialization(self):
        import json

        rep = eig_symmetric(2 * np.eye(2))
        data = json.loads(rep.to_json())
        assert data == {"eigenvalues": [2.0, 2.0], "zeroModes": 0, "classification": LOCAL_MINIMUM}


class TestZeroModeGeometry:
    def test_zero_vectors_span_gauge_directions(self):
        for q, p in [(3, 1), (5, 2), (7, 3)]:
            sol = solve_dicke(q, p)
            params = sol.product_params()
            rep = eig_symmetric(build_hessian(make_dicke(q, p), params), params=params)
            scale = np.max(np.abs(rep.eigenvalues))
            zero_vecs = rep.eigenvectors[:, np.abs(rep.eigenvalues) < 1e-8 * scale]
            assert zero_vecs.shape[1] == q - 1
            basis, _ = np.linalg.qr(gauge_directions(params).T)
            for v in zero_vecs.T:
                assert np.linalg.norm(v - basis @ (basis.T @ v)) < 1e-6

    def test_spectrum_independent_of_p_after_tau_scaling(self):
        for q in (4, 6, 8):
            spectra = []
            for p in range(1, q):
                sol = solve_dicke(q, p)
                params = sol.product_params()
                rep = eig_symmetric(build_hessian(make_dicke(q, p), params), params=params)
                spectra.append(rep.eigenvalues / sol.diag)
            for s in spectra[1:]:
                np.testing.assert_allclose(s, spectra[0], atol=1e-9)


class TestModeInterpretation:
    """Translating along an eigenvector matches a scaling or rotation to O(eps^2)."""

    EPSILONS = (1e-2, 1e-3, 1e-4)

    @staticmethod
    def _setup(q=4, p=1):
        sol = solve_dicke(q, p)
        blocks = symmetric_blocks(make_dicke(q, p), sol.symmetric_params())
        pairs = analytic_eigenpairs(q, blocks)
        x0 = sol.product_params().flat()
        return sol, pairs, x0

    def _assert_quadratic(self, diffs):
        # ||shifted - transformed|| must scale as eps^2: fit the constant at
        # the largest step and allow 50% slack at the smaller ones
        k = diffs[0] / self.EPSILONS[0] ** 2
        for eps, d in zip(self.EPSILONS[1:], diffs[1:]):
            assert d <= 1.5 * max(k, 1e-12) * eps ** 2

    def test_global_scaling_mode_is_exact(self):
        # the all-qubit scaling eigenvector is proportional to the point
        # itself, so x0 + eps*v IS the uniformly scaled point, exactly
        sol, pairs, x0 = self._setup()
        _, v = pairs[0]
        for eps in self.EPSILONS:
            shifted = x0 + eps * v
            lam = 1 + eps * v[0] / x0[0]
            assert np.max(np.abs(shifted - lam * x0)) < 1e-14

    def test_gauge_mode_matches_two_qubit_scaling(self):
        sol, pairs, x0 = self._setup()
        _, v = pairs[1]  # first gauge vector: slots 0 and 1 only
        k = v[2] / x0[2]  # signed rate: slot 1 carries +k*(alpha0, alpha1)
        diffs = []
        for eps in self.EPSILONS:
            shifted = x0 + eps * v
            lam = np.exp(k * eps)
            scaled = x0.copy()
            scaled[0:2] /= lam
            scaled[2:4] *= lam
            diffs.append(np.max(np.abs(shifted - scaled)))
        self._assert_quadratic(diffs)

    @staticmethod
    def _rotate(pair, angle):
        c, s = np.cos(angle), np.sin(angle)
        return np.array([c * pair[0] - s * pair[1], s * pair[0] + c * pair[1]])

    def test_paired_rotation_mode(self):
        sol, pairs, x0 = self._setup()
        q = sol.q
        _, v = pairs[q]  # first rotation-pair vector: slots 0 and 1
        # slot 1 carries +k * (-alpha1, alpha0), the rotation generator
        k = v[3] / x0[0]
        diffs = []
        for eps in self.EPSILONS:
            shifted = x0 + eps * v
            rotated = x0.copy()
            rotated[0:2] = self._rotate(x0[0:2], -k * eps)
            rotated[2:4] = self._rotate(x0[2:4], k * eps)
            diffs.append(np.max(np.abs(shifted - rotated)))
        self._assert_quadratic(diffs)

    def test_global_rotation_mode(self):
        sol, pairs, x0 = self._setup()
        q = sol.q
        _, v = pairs[2 * q - 1]
        k = v[1] / x0[0]
        diffs = []
        for eps in self.EPSILONS:
            shifted = x0 + eps * v
            rotated = np.concatenate(
                [self._rotate(x0[2 * t:2 * t + 2], k * eps) for t in range(q)]
            )
            diffs.append(np.max(np.abs(shifted - rotated)))
        self._assert_quadratic(diffs)
