import math

import numpy as np
import pytest

from conftest import random_spd, random_sym
from spdmean.errors import DimensionMismatch, DomainError
from spdmean.spd_core import (
    ORTHO_TOL,
    RECON_TOL,
    check_spd,
    exp_m,
    frob_inner,
    geodesic,
    inv_m,
    inv_sqrt_m,
    log_m,
    matrix_fn,
    pow_m,
    riem_dist,
    sqrt_m,
    sym,
    sym_eig,
)


class TestSymEig:
    def test_identity(self):
        u, w = sym_eig(np.eye(3))
        assert np.allclose(w, [1, 1, 1])
        assert np.allclose(u @ u.T, np.eye(3), atol=1e-14)

    def test_diagonal(self):
        u, w = sym_eig(np.diag([4.0, 1.0]))
        assert np.allclose(w, [4.0, 1.0])
        # eigenvectors are a signed permutation of the identity
        assert np.allclose(np.abs(u), np.eye(2), atol=1e-14)

    def test_two_by_two_hand_solved(self):
        # characteristic polynomial of [[2,1],[1,2]]: (2-l)^2 - 1 = 0
        # so l = 3, 1 with eigenvectors (1,1)/sqrt2 and (1,-1)/sqrt2
        u, w = sym_eig(np.array([[2.0, 1.0], [1.0, 2.0]]))
        assert np.allclose(w, [3.0, 1.0])
        s = 1.0 / math.sqrt(2.0)
        assert np.allclose(np.abs(u[:, 0]), [s, s])
        assert np.allclose(np.abs(u[:, 1]), [s, s])
        assert u[0, 1] * u[1, 1] < 0

    def test_invariants_random(self, rng):
        for p in (2, 3, 5, 8):
            m = random_sym(rng, p)
            u, w = sym_eig(m)
            assert np.all(np.diff(w) <= 0)
            assert np.linalg.norm(u.T @ u - np.eye(p)) <= ORTHO_TOL
            recon = (u * w) @ u.T
            assert np.linalg.norm(recon - m) <= RECON_TOL * np.linalg.norm(m)

    def test_rejects_asymmetric(self):
        with pytest.raises(DomainError):
            sym_eig(np.array([[1.0, 2.0], [0.0, 1.0]]))

    def test_rejects_nonsquare(self):
        with pytest.raises(DimensionMismatch):
            sym_eig(np.ones((2, 3)))


class TestCheckSpd:
    def test_accepts_spd(self, rng):
        a = random_spd(rng, 4)
        out = check_spd(a)
        assert np.allclose(out, a)

    def test_rejects_indefinite(self):
        with pytest.raises(DomainError, match="positive definite"):
            check_spd(np.diag([1.0, -2.0]))

    def test_relative_floor_survives_scaling(self, rng):
        a = random_spd(rng, 3) * 1e4
        check_spd(a)


class TestMatrixFn:
    def test_log_of_identity_is_zero(self):
        assert np.allclose(matrix_fn(np.eye(3), math.log), 0.0, atol=1e-14)

    def test_sqrt_of_diagonal(self):
        out = matrix_fn(np.diag([4.0, 9.0]), math.sqrt)
        assert np.allclose(out, np.diag([2.0, 3.0]))

    def test_exp_log_round_trip(self):
        a = np.array([[2.0, 1.0], [1.0, 2.0]])
        out = matrix_fn(matrix_fn(a, math.log), math.exp)
        assert np.allclose(out, a, atol=1e-12)

    def test_domain_error(self):
        with pytest.raises(DomainError):
            matrix_fn(np.diag([1.0, 4.0]) - 2 * np.eye(2), math.log)

    def test_commutes_with_input(self, rng):
        a = random_spd(rng, 5)
        f = matrix_fn(a, math.exp)
        comm = np.linalg.norm(a @ f - f @ a)
        assert comm <= 1e-8 * np.linalg.norm(a) * np.linalg.norm(f)

    def test_convenience_round_trips(self, rng):
        for p in (2, 4, 8):
            a = random_spd(rng, p)
            na = np.linalg.norm(a)
            assert np.linalg.norm(sqrt_m(a) @ sqrt_m(a) - a) <= 1e-10 * na
            assert np.linalg.norm(inv_sqrt_m(a) @ sqrt_m(a) - np.eye(p)) <= 1e-10
            assert np.linalg.norm(exp_m(log_m(a)) - a) <= 1e-10 * na
            assert np.linalg.norm(inv_m(a) @ a - np.eye(p)) <= 1e-10
            assert np.allclose(pow_m(a, 2.0), a @ a)

    def test_exp_log_large_condition(self, rng):
        # condition number up to 1e6
        from spdmean.bench import random_orthogonal

        u = random_orthogonal(6, rng)
        w = 10.0 ** rng.uniform(-3, 3, size=6)
        a = sym((u * w) @ u.T)
        assert np.linalg.norm(exp_m(log_m(a)) - a) <= 1e-10 * np.linalg.norm(a)


class TestFrobInner:
    def test_identity(self):
        assert frob_inner(np.eye(2), np.eye(2)) == 2.0

    def test_zero(self, rng):
        a = random_sym(rng, 3)
        assert frob_inner(a, np.zeros((3, 3))) == 0.0

    def test_hand_computed(self):
        a = np.array([[1.0, 2.0], [2.0, 3.0]])
        b = np.array([[0.0, 1.0], [1.0, 0.0]])
        assert frob_inner(a, b) == 4.0

    def test_equals_trace_product(self, rng):
        a, b = random_sym(rng, 4), random_sym(rng, 4)
        tr = float(np.trace(a @ b))
        assert abs(frob_inner(a, b) - tr) <= 1e-12 * max(1.0, abs(tr))

    def test_dimension_mismatch(self):
        with pytest.raises(DimensionMismatch):
            frob_inner(np.eye(2), np.eye(3))

    def test_positive_on_diagonal(self, rng):
        a = random_sym(rng, 3)
        assert frob_inner(a, a) >= 0.0


class TestGeodesic:
    def test_from_identity_is_power(self, rng):
        a = random_spd(rng, 3)
        assert np.allclose(geodesic(np.eye(3), a, 0.3), pow_m(a, 0.3), atol=1e-12)

    def test_constant(self, rng):
        a = random_spd(rng, 3)
        assert np.allclose(geodesic(a, a, 0.37), a, atol=1e-12)

    def test_commuting_diagonal_midpoint(self):
        out = geodesic(np.eye(2), np.diag([4.0, 9.0]), 0.5)
        assert np.allclose(out, np.diag([2.0, 3.0]), atol=1e-12)

    def test_endpoints(self, rng):
        x1, x2 = random_spd(rng, 4), random_spd(rng, 4)
        assert np.linalg.norm(geodesic(x1, x2, 0.0) - x1) <= 1e-12 * np.linalg.norm(x1)
        assert np.linalg.norm(geodesic(x1, x2, 1.0) - x2) <= 1e-12 * np.linalg.norm(x2)

    def test_result_is_spd(self, rng):
        x1, x2 = random_spd(rng, 4), random_spd(rng, 4)
        check_spd(geodesic(x1, x2, 0.6))


class TestRiemDist:
    def test_self_distance(self, rng):
        a = random_spd(rng, 3)
        assert riem_dist(a, a) <= 1e-10

    def test_scaled_identity(self):
        assert abs(riem_dist(np.eye(2), math.e * np.eye(2)) - math.sqrt(2)) <= 1e-12

    def test_diagonal_closed_form(self):
        want = math.sqrt(math.log(4.0) ** 2 + math.log(9.0) ** 2)
        assert abs(riem_dist(np.eye(2), np.diag([4.0, 9.0])) - want) <= 1e-12

    def test_symmetric_in_arguments(self, rng):
        x, y = random_spd(rng, 4), random_spd(rng, 4)
        assert abs(riem_dist(x, y) - riem_dist(y, x)) <= 1e-10

    def test_congruence_invariance(self, rng):
        for _ in range(10):
            p = int(rng.integers(2, 6))
            x, y = random_spd(rng, p), random_spd(rng, p)
            m = rng.standard_normal((p, p))
            d1 = riem_dist(x, y)
            d2 = riem_dist(sym(m @ x @ m.T), sym(m @ y @ m.T))
            assert abs(d1 - d2) <= 1e-8

    def test_dimension_mismatch(self):
        with pytest.raises(DimensionMismatch):
            riem_dist(np.eye(2), np.eye(3))
