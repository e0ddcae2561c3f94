import numpy as np
import pytest

from braidforge.convolutions import dr_matrix, twisted_lm
from braidforge.errors import PreconditionError, ResourceGuardError
from braidforge.klm import (
    invariance_residual,
    klm,
    quotient_action,
    quotient_data,
    subspace_k,
    subspace_l,
    tower,
)
from braidforge.linalg import SubspaceBasis
from braidforge.reps import check_braid_relations, check_semidirect_compat, scalar_seed
from braidforge.suites import engineered_l_rep, random_free_suite, scalar_suite, tower_suite

T = np.exp(1j * np.pi / 3)


def test_k_is_blockwise_kernel():
    g = [np.diag([1.0, 2.0]), np.diag([3.0, 4.0])]
    K = subspace_k(g)
    assert K.dim == 1
    assert np.allclose(np.abs(K.basis[:, 0]), [1, 0, 0, 0])


def test_trivial_seed_has_everything_in_k():
    rep = scalar_seed(3, 1.0, 1.0)
    out, qd = klm(rep, 1.0)
    assert out is None
    assert qd.dim_k == 3 and qd.dim_quotient == 0


def test_generic_scalar_quotient_is_everything():
    # no eigenvalue 1 in g, and lam t^n != 1: both K and L vanish
    for case in scalar_suite(8):
        qd = quotient_data(case.rep.g, case.lam)
        assert (qd.dim_k, qd.dim_l, qd.dim_quotient) == (0, 0, case.rep.n)


def test_scalar_l_appears_when_lambda_t_n_is_one():
    n = 3
    lam = np.exp(0.9j)
    t = lam ** (-1 / n)
    qd = quotient_data([np.array([[t]])] * n, lam)
    assert qd.dim_l == 1
    assert qd.l_fixed_residual < 1e-12


def test_tower_level_k_dimension():
    for case in tower_suite(6):
        n = case.rep.n
        qd = quotient_data(case.rep.g, case.lam)
        assert qd.dim_k == n * (n - 1)
        assert qd.dim_quotient == n * n - qd.dim_w


def test_quotient_is_a_representation():
    for case in tower_suite(3):
        out, qd = klm(case.rep, case.lam)
        assert out.N == qd.dim_quotient
        assert check_semidirect_compat(out) < 1e-9
        assert check_braid_relations(out) < 1e-9
        assert out.H is not None


def test_invariance_residuals_on_engineered_cases():
    for case in random_free_suite(12):
        qd = quotient_data(case.rep.g, case.lam)
        G = [dr_matrix(case.rep.g, case.lam, j) for j in range(1, case.rep.n + 1)]
        assert max(invariance_residual(m, qd.W) for m in G) <= 1e-8


def test_engineered_l_is_nonzero(rng):
    lam = np.exp(1.3j)
    rep = engineered_l_rep(3, 2, lam, rng)
    G = [dr_matrix(rep.g, lam, j) for j in range(1, 4)]
    assert subspace_l(G).dim >= 1


def test_quotient_action_refuses_non_invariant_matrix():
    W = SubspaceBasis(np.array([[1.0], [0.0]]))
    qd = quotient_data([np.array([[2.0]]), np.array([[3.0]])], 0.5)
    swap = np.array([[0.0, 1.0], [1.0, 0.0]])
    assert invariance_residual(swap, W) == pytest.approx(1.0)
    fake = type(qd)(W, SubspaceBasis(np.array([[0.0], [1.0]])), 1, 0)
    with pytest.raises(PreconditionError):
        quotient_action([swap], fake)


def test_tower_depth_two_dimensions():
    levels = tower(scalar_seed(3, T, 1.0), [np.exp(0.7j), np.exp(1.9j)], 2)
    assert [lv.dim for lv in levels] == [1, 3, 3]
    assert levels[2].quotient["dim_K"] == 6
    assert all(lv.commutant_dim == 1 for lv in levels)
    assert all(lv.compat_residual < 1e-9 for lv in levels)


def test_tower_without_quotient_grows_as_n_power():
    levels = tower(scalar_seed(2, T, 1.0), [np.exp(0.7j)] * 3, 3, quotient=False)
    assert [lv.dim for lv in levels] == [1, 2, 4, 8]


def test_tower_stops_at_degenerate_level():
    levels = tower(scalar_seed(3, 1.0, 1.0), [1.0, 1.0], 2)
    assert len(levels) == 2 and levels[-1].rep is None and levels[-1].dim == 0


def test_tower_size_guard():
    with pytest.raises(ResourceGuardError):
        tower(scalar_seed(4, T, 1.0), [np.exp(0.7j)] * 3, 3, quotient=False, max_dim=20)
