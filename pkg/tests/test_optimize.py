import numpy as np
import pytest

from geoent import (
    DomainError,
    MultistartError,
    OptimOptions,
    ProductParams,
    critical_identities,
    default_seed_list,
    distance_sq,
    eig_symmetric,
    build_hessian,
    gauge_fix,
    make_dicke,
    make_ring,
    minimize,
    multistart,
)
from geoent.symmetric import solve_ring


def opts_with_seeds(n, **kw):
    return OptimOptions(seed_list=default_seed_list(n), **kw)


class TestMinimize:
    def test_dicke31_from_symmetric_start(self):
        res = minimize(make_dicke(3, 1), ProductParams(3, [(0.5, 0.5)] * 3))
        assert res.converged
        assert res.dsq == pytest.approx(5 / 9, abs=1e-8)

    def test_unentangled_target_reaches_zero(self):
        res = minimize(make_dicke(2, 0), ProductParams(2, [(0.8, 0.3), (0.2, 0.9)]))
        assert res.converged
        assert res.dsq <= 1e-10

    def test_initialized_at_ring_saddle_stays_there(self):
        sol = solve_ring(6)
        res = minimize(make_ring(6), sol.product_params())
        assert res.converged
        assert res.iters == 1
        assert res.dsq == pytest.approx(sol.dc_squared, abs=1e-12)

    def test_escape_from_ring_saddle_along_unstable_mode(self):
        # perturbing 1e-3 along the numeric lowest mode and descending must
        # end strictly below the symmetric stationary value
        sol = solve_ring(6)
        params = sol.product_params()
        rep = eig_symmetric(build_hessian(make_ring(6), params), params=params)
        unstable = rep.eigenvectors[:, 0]
        assert rep.eigenvalues[0] < 0
        start = ProductParams.from_flat(params.flat() + 1e-3 * unstable)
        res = minimize(make_ring(6), start)
        assert res.converged
        assert res.dsq < sol.dc_squared - 1e-6

    def test_converged_points_satisfy_critical_identity(self):
        rng = np.random.default_rng(31)
        for q, p in [(3, 1), (4, 2), (5, 1)]:
            target = make_dicke(q, p)
            res = minimize(target, ProductParams(q, rng.uniform(0.2, 1.0, (q, 2))))
            assert res.converged
            ident = critical_identities(target, res.params)
            assert ident.cd_residual <= 1e-8
            assert ident.d_n_sq == pytest.approx(2 * res.dsq, abs=1e-12)

    def test_gauge_fix_equalizes_norms_without_moving_dsq(self):
        target = make_dicke(4, 1)
        res_raw = minimize(target, ProductParams(4, [(0.9, 0.2)] * 4),
                           OptimOptions(gauge_fix=False))
        fixed = gauge_fix(res_raw.params)
        norms = fixed.norms
        np.testing.assert_allclose(norms, norms[0], rtol=1e-12)
        d_raw = distance_sq(target, res_raw.params).dsq
        d_fix = distance_sq(target, fixed).dsq
        assert abs(d_raw - d_fix) <= 1e-12

    def test_dimension_mismatch(self):
        with pytest.raises(DomainError):
            minimize(make_dicke(3, 1), ProductParams(2, [(1, 0), (1, 0)]))

    def test_rejects_degenerate_init(self):
        with pytest.raises(DomainError):
            minimize(make_dicke(2, 1), ProductParams(2, [(1, 0), (0, 0)]))

    def test_overflowing_init_raises_numerical_error(self):
        from geoent import NumericalError

        huge = ProductParams(2, [(1e200, 0.0), (1e200, 0.0)])
        with pytest.raises(NumericalError) as exc:
            minimize(make_dicke(2, 1), huge)
        assert exc.value.iteration == 1


class TestMultistart:
    def test_balanced_four_qubit_dicke(self):
        res = multistart(make_dicke(4, 2), 16, opts_with_seeds(16))
        assert res.dsq == pytest.approx(1 - 3 / 8, abs=1e-8)

    def test_bell_like_target(self):
        res = multistart(make_dicke(2, 1), 8, opts_with_seeds(8))
        assert res.dsq == pytest.approx(0.5, abs=1e-8)

    def test_unentangled_target(self):
        res = multistart(make_dicke(3, 0), 4, opts_with_seeds(4))
        assert res.dsq <= 1e-10

    def test_deterministic_given_seed_list(self):
        target = make_dicke(3, 1)
        a = multistart(target, 6, opts_with_seeds(6))
        b = multistart(target, 6, opts_with_seeds(6))
        assert a.dsq == b.dsq
        assert a.iters == b.iters
        np.testing.assert_array_equal(a.params.pairs, b.params.pairs)

    def test_requires_enough_seeds(self):
        with pytest.raises(DomainError):
            multistart(make_dicke(3, 1), 4, OptimOptions(seed_list=[1, 2]))

    def test_aggregate_failure_when_nothing_converges(self):
        opts = OptimOptions(seed_list=default_seed_list(3), max_iter=1, grad_tol=1e-15)
        with pytest.raises(MultistartError):
            multistart(make_dicke(3, 1), 3, opts)

    def test_ring_minimum_beats_symmetric_stationary_point(self):
        for q in (5, 6):
            sol = solve_ring(q)
            res = multistart(make_ring(q), 12, opts_with_seeds(12))
            assert res.dsq < sol.dc_squared - 1e-3

    def test_converged_results_respect_gauge_fix(self):
        res = multistart(make_dicke(3, 1), 4, opts_with_seeds(4))
        norms = res.params.norms
        np.testing.assert_allclose(norms, norms[0], rtol=1e-12)


class TestOptimOptions:
    def test_validation(self):
        with pytest.raises(DomainError):
            OptimOptions(max_iter=0)
        with pytest.raises(DomainError):
            OptimOptions(grad_tol=0.0)

    def test_default_seed_list(self):
        assert default_seed_list(3) == [42, 43, 44]
        assert default_seed_list(2, base=7) == [7, 8]
