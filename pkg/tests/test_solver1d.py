"""Exact 1D solvers: tridiagonal elimination and the taut string."""

import time

import numpy as np
import pytest

from splitsmooth import (
    DimensionError,
    ParameterError,
    Tridiagonal,
    thomas_solve,
    wls_1d,
    wls_normal_system,
    wtv_1d,
    wtv_dual_certificate,
)
from splitsmooth.reference import wtv_1d_oracle

KKT_TOL = 1e-8
JUMP_EPS = 1e-9  # a difference above this counts as a strict jump


def _dense_wls_matrix(n, w):
    a = np.eye(n)
    for i in range(n - 1):
        a[i, i] += w[i]
        a[i + 1, i + 1] += w[i]
        a[i, i + 1] -= w[i]
        a[i + 1, i] -= w[i]
    return a


def _random_instance(rng, n_max=33):
    n = int(rng.integers(2, n_max))
    f = rng.uniform(0.0, 255.0, n)
    w = rng.uniform(0.0, 200.0, n - 1)
    return f, w


class TestTridiagonal:
    def test_band_length_validation(self):
        with pytest.raises(DimensionError):
            Tridiagonal(np.ones(2), np.ones(2), np.ones(1))

    def test_matvec_matches_dense(self):
        rng = np.random.default_rng(31)
        n = 9
        lower = rng.normal(size=n - 1)
        diag = rng.normal(size=n)
        upper = rng.normal(size=n - 1)
        m = Tridiagonal(lower, diag, upper)
        a = np.diag(diag) + np.diag(lower, -1) + np.diag(upper, 1)
        z = rng.normal(size=n)
        assert np.allclose(m.matvec(z), a @ z, rtol=1e-13)


class TestThomasSolve:
    def test_identity(self):
        rng = np.random.default_rng(32)
        r = rng.normal(size=6)
        m = Tridiagonal(np.zeros(5), np.ones(6), np.zeros(5))
        assert np.array_equal(thomas_solve(m, r), r)

    def test_two_by_two(self):
        m = Tridiagonal(np.array([-1.0]), np.array([2.0, 2.0]), np.array([-1.0]))
        z = thomas_solve(m, np.array([0.0, 1.0]))
        assert np.allclose(z, [1.0 / 3.0, 2.0 / 3.0], atol=1e-15)

    def test_matches_dense_on_dominant_systems(self):
        rng = np.random.default_rng(33)
        for _ in range(50):
            n = 16
            lower = rng.uniform(-1.0, 1.0, n - 1)
            upper = rng.uniform(-1.0, 1.0, n - 1)
            diag = 2.5 + rng.uniform(0.0, 1.0, n)
            rhs = rng.uniform(-100.0, 100.0, n)
            m = Tridiagonal(lower, diag, upper)
            a = np.diag(diag) + np.diag(lower, -1) + np.diag(upper, 1)
            z = thomas_solve(m, rhs)
            assert np.max(np.abs(z - np.linalg.solve(a, rhs))) <= 1e-10

    def test_residual_bound(self):
        rng = np.random.default_rng(34)
        for _ in range(100):
            f, w = _random_instance(rng, n_max=65)
            m, rhs = wls_normal_system(f, w)
            z = thomas_solve(m, rhs)
            res = np.max(np.abs(m.matvec(z) - rhs))
            assert res <= 1e-8 * (1.0 + np.max(np.abs(rhs)))

    def test_zero_pivot_raises(self):
        with pytest.raises(ArithmeticError):
            thomas_solve(Tridiagonal(np.zeros(0), np.zeros(1), np.zeros(0)), np.ones(1))
        singular = Tridiagonal(np.array([1.0]), np.array([1.0, 1.0]), np.array([1.0]))
        with pytest.raises(ArithmeticError):
            thomas_solve(singular, np.ones(2))

    def test_rhs_length_checked(self):
        m = Tridiagonal(np.zeros(1), np.ones(2), np.zeros(1))
        with pytest.raises(DimensionError):
            thomas_solve(m, np.ones(3))


class TestWls1d:
    def test_constant_is_exact_fixed_point(self):
        f = np.full(9, 41.125)
        assert np.array_equal(wls_1d(f, np.full(8, 199.0)), f)

    def test_zero_weights_return_input_exactly(self):
        rng = np.random.default_rng(35)
        f = rng.uniform(0.0, 255.0, 12)
        assert np.array_equal(wls_1d(f, np.zeros(11)), f)

    def test_two_sample_example(self):
        z = wls_1d(np.array([0.0, 1.0]), np.array([1.0]))
        assert np.allclose(z, [1.0 / 3.0, 2.0 / 3.0], atol=1e-15)

    def test_single_sample(self):
        assert np.array_equal(wls_1d(np.array([5.0]), np.zeros(0)), [5.0])

    def test_matches_dense_solve(self):
        rng = np.random.default_rng(36)
        for _ in range(200):
            f, w = _random_instance(rng, n_max=65)
            z = wls_1d(f, w)
            zd = np.linalg.solve(_dense_wls_matrix(f.shape[0], w), f)
            assert np.max(np.abs(z - zd)) <= 1e-8

    def test_linearity(self):
        rng = np.random.default_rng(37)
        for _ in range(50):
            f, w = _random_instance(rng)
            g = rng.uniform(0.0, 255.0, f.shape[0])
            a, b = rng.uniform(-2.0, 2.0, 2)
            combo = wls_1d(a * f + b * g, w)
            parts = a * wls_1d(f, w) + b * wls_1d(g, w)
            scale = 1.0 + np.max(np.abs(a * f + b * g))
            assert np.max(np.abs(combo - parts)) <= 1e-10 * scale

    def test_translation_equivariance(self):
        rng = np.random.default_rng(38)
        for _ in range(50):
            f, w = _random_instance(rng)
            c = rng.uniform(-500.0, 500.0)
            assert np.max(np.abs(wls_1d(f + c, w) - (wls_1d(f, w) + c))) <= 1e-8

    def test_negative_weight_rejected(self):
        with pytest.raises(ParameterError):
            wls_1d(np.zeros(3), np.array([1.0, -0.5]))

    def test_weight_length_checked(self):
        with pytest.raises(DimensionError):
            wls_1d(np.zeros(3), np.zeros(3))


class TestWtv1d:
    def test_constant_is_exact_fixed_point(self):
        f = np.full(7, 88.5)
        assert np.array_equal(wtv_1d(f, np.full(6, 123.0)), f)

    def test_partial_shrink(self):
        # jump of 10 against weight 4: each side moves w/2 toward the other
        z = wtv_1d(np.array([0.0, 10.0]), np.array([4.0]))
        assert np.allclose(z, [2.0, 8.0], atol=1e-12)

    def test_full_merge(self):
        # weight exceeds the gap: both samples collapse to the mean
        z = wtv_1d(np.array([0.0, 10.0]), np.array([12.0]))
        assert np.allclose(z, [5.0, 5.0], atol=1e-12)

    def test_zero_weight_decouples(self):
        f = np.array([0.0, 10.0])
        assert np.array_equal(wtv_1d(f, np.array([0.0])), f)
        rng = np.random.default_rng(41)
        f = rng.uniform(0.0, 255.0, 17)
        w = rng.uniform(0.0, 50.0, 16)
        w[6] = 0.0
        z = wtv_1d(f, w)
        zl = wtv_1d(f[:7], w[:6])
        zr = wtv_1d(f[7:], w[7:])
        assert np.max(np.abs(z - np.concatenate([zl, zr]))) <= 1e-9

    def test_single_sample(self):
        assert np.array_equal(wtv_1d(np.array([5.0]), np.zeros(0)), [5.0])

    def test_matches_oracle(self):
        rng = np.random.default_rng(42)
        for _ in range(200):
            f, w = _random_instance(rng)
            z = wtv_1d(f, w)
            assert np.max(np.abs(z - wtv_1d_oracle(f, w).z)) <= 1e-6

    def test_nonexpansive(self):
        rng = np.random.default_rng(43)
        for _ in range(50):
            f, w = _random_instance(rng)
            g = f + rng.normal(0.0, 30.0, f.shape[0])
            dz = np.linalg.norm(wtv_1d(f, w) - wtv_1d(g, w))
            df = np.linalg.norm(f - g)
            assert dz <= df + 1e-9

    def test_translation_equivariance(self):
        rng = np.random.default_rng(44)
        for _ in range(50):
            f, w = _random_instance(rng)
            c = rng.uniform(-500.0, 500.0)
            assert np.max(np.abs(wtv_1d(f + c, w) - (wtv_1d(f, w) + c))) <= 1e-8

    def test_weight_increase_never_raises_total_variation(self):
        rng = np.random.default_rng(45)
        for _ in range(100):
            f, w = _random_instance(rng)
            tv_before = np.sum(np.abs(np.diff(wtv_1d(f, w))))
            w2 = w.copy()
            w2[rng.integers(0, w.shape[0])] += rng.uniform(0.0, 100.0)
            tv_after = np.sum(np.abs(np.diff(wtv_1d(f, w2))))
            assert tv_after <= tv_before + 1e-9

    def test_negative_weight_rejected(self):
        with pytest.raises(ParameterError):
            wtv_1d(np.zeros(3), np.array([1.0, -0.5]))


class TestDualCertificate:
    def test_certificate_conditions_hold(self):
        rng = np.random.default_rng(46)
        for _ in range(300):
            f, w = _random_instance(rng)
            z = wtv_1d(f, w)
            s = wtv_dual_certificate(f, z)
            n = f.shape[0]
            assert s[0] == 0.0
            assert abs(s[n]) <= KKT_TOL
            assert np.all(np.abs(s[1:n]) <= w + KKT_TOL)
            dz = np.diff(z)
            up = dz > JUMP_EPS
            down = dz < -JUMP_EPS
            assert np.all(np.abs(s[1:n][up] - w[up]) <= KKT_TOL)
            assert np.all(np.abs(s[1:n][down] + w[down]) <= KKT_TOL)

    def test_mean_behavior_of_constant_runs(self):
        # with uniform weights, a maximal constant run flanked by jumps of
        # the same direction keeps the data mean; a plateau between
        # opposite jumps is offset by exactly w/length
        rng = np.random.default_rng(47)
        checked_same = 0
        checked_opposite = 0
        for _ in range(300):
            n = int(rng.integers(6, 33))
            f = np.round(rng.uniform(0.0, 255.0, n), 0)
            wval = float(rng.uniform(1.0, 60.0))
            z = wtv_1d(f, np.full(n - 1, wval))
            # global mean is always conserved
            assert abs(np.mean(z) - np.mean(f)) <= 1e-8
            dz = np.diff(z)
            bounds = [0] + list(np.nonzero(np.abs(dz) > JUMP_EPS)[0] + 1) + [n]
            for k in range(1, len(bounds) - 2):
                a, b = bounds[k], bounds[k + 1]
                d_left = np.sign(z[a] - z[a - 1])
                d_right = np.sign(z[b] - z[b - 1])
                shift = np.mean(z[a:b]) - np.mean(f[a:b])
                expect = wval * (d_right - d_left) / (2.0 * (b - a))
                assert abs(shift - expect) <= 1e-8
                if d_left == d_right:
                    checked_same += 1
                else:
                    checked_opposite += 1
        assert checked_same > 50 and checked_opposite > 50

    def test_shape_validation(self):
        with pytest.raises(DimensionError):
            wtv_dual_certificate(np.zeros(3), np.zeros(4))


class TestLinearRuntime:
    def test_both_solvers_scale_linearly(self):
        rng = np.random.default_rng(48)
        sizes = [100_000, 200_000, 400_000]
        signals = {n: rng.uniform(0.0, 255.0, n) for n in sizes}
        weights = {n: rng.uniform(0.0, 200.0, n - 1) for n in sizes}
        wls_1d(signals[sizes[0]][:64], weights[sizes[0]][:63])  # jit warmup
        wtv_1d(signals[sizes[0]][:64], weights[sizes[0]][:63])
        for solver in (wls_1d, wtv_1d):
            times = []
            for n in sizes:
                best = min(
                    _timed(solver, signals[n], weights[n]) for _ in range(3)
                )
                times.append(best)
            assert times[1] / times[0] <= 2.5, (solver.__name__, times)
            assert times[2] / times[1] <= 2.5, (solver.__name__, times)


def _timed(solver, f, w):
    t0 = time.perf_counter()
    solver(f, w)
    return time.perf_counter() - t0
