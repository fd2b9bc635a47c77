import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from exactlump import cases
from exactlump.compartmental import ChainSpec, chain_matrix, gen_chain, standard_two_row_m
from exactlump.errors import InvalidInputError, NotExactlyLumpableError, SingularMatrixError
from exactlump.linalg import inf_norm, rank
from exactlump.lti import LtiSystem, krylov_blocks
from exactlump.lumping import (
    build_m_from_eigenvectors,
    dual_lumped,
    is_kinetic_lumping,
    lump_system,
    lumped_a,
    make_scheme,
    verify_preservation,
)
from exactlump.mmatrix import is_compartmental

from oracles import random_compartmental_symmetric, random_nonsingular_int

M3 = np.array([[2.0, 1.0, 0.0], [0.0, 1.0, 2.0]])


def a_hat_from_pivots(a, m):
    """Read A_hat off the sole-nonzero pivot columns of a kinetic M: (A_hat M)[:, j] = A_hat[:, i] M[i, j]."""
    ma = m @ a
    out = np.zeros((m.shape[0], m.shape[0]))
    for i in range(m.shape[0]):
        j = next(j for j in range(m.shape[1]) if m[i, j] != 0 and np.count_nonzero(m[:, j]) == 1)
        out[:, i] = ma[:, j] / m[i, j]
    return out


def test_pivot_oracle_self_check():
    a = np.array([[-1.0, 1.0], [1.0, -1.0]])
    np.testing.assert_array_equal(a_hat_from_pivots(a, np.eye(2)), a)


def test_lumped_a_identity():
    a = np.random.default_rng(0).normal(size=(4, 4))
    a_hat, res = lumped_a(a, np.eye(4))
    np.testing.assert_allclose(a_hat, a, atol=1e-15)
    assert res <= 1e-15


@pytest.mark.parametrize("k", [1.0, 0.37, 5.0])
def test_lumped_a_chain3(k):
    a_hat, res = lumped_a(chain_matrix(ChainSpec(3, k)), M3)
    np.testing.assert_allclose(a_hat, [[-k / 2, k / 2], [k / 2, -k / 2]], atol=1e-12 * k)
    assert res <= 1e-12


def test_lumped_a_chain6():
    # by hand: row 1 of M A is (2, -2, -2, 2, 2, -2) = -1 * M[0] + 1 * M[1], so the lumped rate is k
    m = np.array([[0, 2, 2, 0, 0, 2], [2, 0, 0, 2, 2, 0]], dtype=float)
    a = chain_matrix(ChainSpec(6, 1.0))
    a_hat, res = lumped_a(a, m)
    np.testing.assert_allclose(a_hat, [[-1, 1], [1, -1]], atol=1e-12)
    np.testing.assert_allclose(a_hat, a_hat_from_pivots(a, m), atol=1e-12)
    assert res <= 1e-12


def test_lumped_a_dimension_errors():
    with pytest.raises(InvalidInputError):
        lumped_a(np.ones((2, 3)), np.eye(2))
    with pytest.raises(InvalidInputError):
        lumped_a(np.eye(3), np.eye(2))
    with pytest.raises(SingularMatrixError):
        lumped_a(np.eye(3), [[1, 1, 1], [2, 2, 2]])


def test_make_scheme_chain3():
    sch = make_scheme(chain_matrix(ChainSpec(3, 1.0)), M3)
    assert sch.l == 2 and sch.n == 3
    np.testing.assert_allclose(M3 @ sch.m_pinv, np.eye(2), atol=1e-14)
    np.testing.assert_allclose(sch.a_hat, M3 @ chain_matrix(ChainSpec(3, 1.0)) @ sch.m_pinv, atol=1e-14)


def test_make_scheme_rejects_truncation():
    a = chain_matrix(ChainSpec(3, 1.0))
    m = np.array([[1.0, 0.0, 0.0], [0.0, 1.0, 0.0]])
    # best A_hat in the least-squares sense, found independently of the pseudo-inverse path
    sol, *_ = np.linalg.lstsq(m.T, (m @ a).T, rcond=None)
    best = inf_norm(sol.T @ m - m @ a) / (1 + inf_norm(m @ a))
    assert best > 0.1
    with pytest.raises(NotExactlyLumpableError) as info:
        make_scheme(a, m)
    assert info.value.residual == pytest.approx(best, rel=1e-9)


def test_make_scheme_identity_has_zero_residual():
    a = np.random.default_rng(1).normal(size=(5, 5))
    assert make_scheme(a, np.eye(5)).residual == 0.0


def test_build_m_chain3():
    a = chain_matrix(ChainSpec(3, 1.0))
    m = build_m_from_eigenvectors(a, [2, 1], [[1, 1], [1, -1]])
    np.testing.assert_array_equal(m, M3)


def test_build_m_chain4_sign_convention():
    a = chain_matrix(ChainSpec(4, 1.0))
    f2 = np.array([-1.0, 1.0, 1.0, -1.0])
    np.testing.assert_array_equal(a @ f2, -2.0 * f2)
    # f2 is normalized to (1, -1, -1, 1), so the mixing rows swap relative to (-1, 1, 1, -1)
    m = build_m_from_eigenvectors(a, [3, 1], [[1, -1], [1, 1]])
    np.testing.assert_array_equal(m, [[0, 2, 2, 0], [2, 0, 0, 2]])
    m_plain = build_m_from_eigenvectors(a, [3, 1], [[1, 1], [1, -1]])
    np.testing.assert_array_equal(m_plain, [[2, 0, 0, 2], [0, 2, 2, 0]])


def test_build_m_full_selection_is_similarity():
    sys = gen_chain(ChainSpec(5, 0.7))
    m = build_m_from_eigenvectors(sys.a, range(5))
    sch = make_scheme(sys.a, m)
    assert rank(m).rank == 5
    np.testing.assert_allclose(np.sort(np.linalg.eigvals(sch.a_hat).real), np.linalg.eigvalsh(sys.a), atol=1e-10)


def test_build_m_errors():
    a = chain_matrix(ChainSpec(3, 1.0))
    with pytest.raises(InvalidInputError):
        build_m_from_eigenvectors(a, [0, 1], [[1, 1], [1, 1]])
    with pytest.raises(InvalidInputError):
        build_m_from_eigenvectors(a, [0, 0])
    with pytest.raises(InvalidInputError):
        build_m_from_eigenvectors(a, [3])
    with pytest.raises(InvalidInputError):
        build_m_from_eigenvectors(a, [0, 1], np.eye(3))


def test_build_m_repeated_eigenvalues():
    # cycle graph Laplacian: eigenvalues come in equal pairs
    n = 6
    a = -2 * np.eye(n) + np.roll(np.eye(n), 1, axis=1) + np.roll(np.eye(n), -1, axis=1)
    vals = np.linalg.eigvalsh(a)
    assert np.isclose(vals[1], vals[2])
    for sel in ([1], [2], [1, 2], [0, 1, 5]):
        m = build_m_from_eigenvectors(a, sel)
        assert make_scheme(a, m).residual <= 1e-9


@pytest.mark.parametrize("k", [1.0, 0.37])
def test_lump_system_full_input(k):
    sys = cases.full_input_chain(k)
    lumped = lump_system(sys, make_scheme(sys.a, M3))
    np.testing.assert_array_equal(lumped.b, M3)
    w_hat = lumped.controllability_matrix()
    np.testing.assert_allclose(w_hat, [[2, 1, 0, -k, 0, k], [0, 1, 2, k, 0, -k]], atol=1e-14)
    assert rank(w_hat).rank == 2


@pytest.mark.parametrize("k", [1.0, 0.37])
def test_lump_system_deficient_input(k):
    sys = cases.deficient_input_chain(k)
    lumped = lump_system(sys, make_scheme(sys.a, M3))
    np.testing.assert_array_equal(lumped.b, [[3, 2, 0], [3, -2, 0]])
    np.testing.assert_allclose(lumped.a @ lumped.b, [[0, -2 * k, 0], [0, 2 * k, 0]], atol=1e-14)
    assert lumped.is_controllable().rank == 2


def test_lump_system_zero_input():
    sys = cases.full_input_chain().with_matrices(b=np.zeros((3, 1)))
    lumped = lump_system(sys, make_scheme(sys.a, M3))
    np.testing.assert_array_equal(lumped.b, np.zeros((2, 1)))
    assert not lumped.is_controllable().verdict


def test_lump_system_dimension_mismatch():
    sch = make_scheme(chain_matrix(ChainSpec(4, 1.0)), standard_two_row_m(4))
    with pytest.raises(InvalidInputError):
        lump_system(cases.full_input_chain(), sch)


def test_dual_lumped_symmetric_equals_forward():
    sys = gen_chain(ChainSpec(6, 0.37))
    sch = make_scheme(sys.a, standard_two_row_m(6))
    d = dual_lumped(sys, sch)
    np.testing.assert_allclose(d.a, sch.a_hat, atol=1e-14)


@pytest.mark.parametrize("k", [1.0, 0.37])
def test_dual_lumped_observed_pairs(k):
    sys = cases.observed_pairs_chain(k)
    d = dual_lumped(sys, make_scheme(sys.a, M3))
    np.testing.assert_array_equal(d.b, [[3, 1], [1, 3]])
    np.testing.assert_allclose(krylov_blocks(d.a, d.b), [[3, 1, -k, k], [1, 3, k, -k]], atol=1e-14)
    assert rank(krylov_blocks(d.a, d.b)).rank == 2
    np.testing.assert_array_equal(d.c, (M3 @ sys.b).T)


@pytest.mark.parametrize("k", [1.0, 0.37])
def test_dual_lumped_lumped_output(k):
    sys = cases.lumped_output_chain(k)
    sch = make_scheme(sys.a, M3)
    d = dual_lumped(sys, sch)
    np.testing.assert_array_equal(d.b, [[5, 1], [1, 5]])
    np.testing.assert_allclose(krylov_blocks(d.a, d.b), [[5, 1, -2 * k, 2 * k], [1, 5, 2 * k, -2 * k]], atol=1e-14)
    assert lump_system(sys, sch).is_observable().rank == 2


def test_dual_lumped_rejects_non_invariant_transpose():
    # irreversible chain 1 -> 2 -> 3; total mass is an exact lumping of A but not of A.T
    a = np.array([[-1.0, 0, 0], [1, -1, 0], [0, 1, 0]])
    sys = LtiSystem(a, np.eye(3), np.eye(3))
    sch = make_scheme(a, [[1.0, 1.0, 1.0]])
    with pytest.raises(NotExactlyLumpableError):
        dual_lumped(sys, sch)
    with pytest.raises(NotExactlyLumpableError):
        lump_system(sys, sch).is_observable()


def test_is_kinetic_lumping_examples():
    ok = is_kinetic_lumping(M3)
    assert ok and ok.pivots == (0, 2)
    bad = is_kinetic_lumping([[1, 1], [1, 1]])
    assert not bad and "sole nonzero" in bad.reason
    neg = is_kinetic_lumping([[1, -1, 0], [0, 0, 1]])
    assert not neg and "negative" in neg.reason


@pytest.mark.parametrize("n", [2, 3, 4, 6, 8, 10, 12])
def test_standard_m_is_kinetic(n):
    assert is_kinetic_lumping(standard_two_row_m(n))


def test_verify_preservation_cases():
    p1 = verify_preservation(cases.full_input_chain(), make_scheme(cases.full_input_chain().a, M3))
    assert (p1.original_controllable, p1.lumped_controllable, p1.theorem_consistent) == (True, True, True)
    assert (p1.original_rank, p1.lumped_rank) == (3, 2)
    sys = cases.deficient_input_chain()
    p2 = verify_preservation(sys, make_scheme(sys.a, M3))
    assert (p2.original_controllable, p2.lumped_controllable, p2.theorem_consistent) == (False, True, True)
    assert (p2.original_rank, p2.lumped_rank) == (2, 2)


def test_preservation_report_consistency_flag():
    from exactlump.lumping import PreservationReport
    assert not PreservationReport(True, False, 3, 1, 3, 2).theorem_consistent
    assert PreservationReport(False, False, 2, 1, 3, 2).theorem_consistent


@pytest.mark.parametrize("make", list(cases.ALL_CASES.values()))
def test_square_m_preserves_verdict(make):
    sys = make()
    sch = make_scheme(sys.a, np.eye(3))
    p = verify_preservation(sys, sch)
    assert p.original_controllable == p.lumped_controllable


def random_scheme_trial(rng, n_max=8):
    n = int(rng.integers(2, n_max + 1))
    a = random_compartmental_symmetric(rng, n)
    l = int(rng.integers(1, n + 1))
    sel = rng.choice(n, size=l, replace=False)
    m = build_m_from_eigenvectors(a, sel, random_nonsingular_int(rng, l))
    r = int(rng.integers(1, n + 1))
    b = rng.normal(size=(n, r))
    return LtiSystem(a, b, np.eye(n)), make_scheme(a, m)


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_scheme_identities(seed):
    rng = np.random.default_rng(seed)
    sys, sch = random_scheme_trial(rng)
    a, m, a_hat = sys.a, sch.m, sch.a_hat
    assert inf_norm(a_hat @ m - m @ a) <= 1e-9 * (1 + inf_norm(m @ a))
    # A_hat^j M = M A^j, scaled by the natural size ||M|| ||A||^j
    lhs, rhs = m.copy(), m.copy()
    for j in range(sys.n):
        assert inf_norm(lhs - rhs) <= 1e-8 * inf_norm(m) * max(1.0, inf_norm(a)) ** j
        lhs, rhs = a_hat @ lhs, rhs @ a
    w_hat = krylov_blocks(a_hat, m @ sys.b, sch.l)
    w_proj = m @ krylov_blocks(a, sys.b, sch.l)
    assert np.max(np.abs(w_hat - w_proj)) <= 1e-9 * max(1.0, np.max(np.abs(w_proj)))
    assert verify_preservation(sys, sch).theorem_consistent


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_square_nonsingular_m_equivalence(seed):
    rng = np.random.default_rng(seed)
    n = int(rng.integers(2, 7))
    a = random_compartmental_symmetric(rng, n)
    m = build_m_from_eigenvectors(a, range(n), random_nonsingular_int(rng, n))
    if seed % 2:
        b = rng.normal(size=(n, 1))
    else:
        vecs = np.linalg.eigh(a)[1]
        b = vecs[:, : n - 1] @ rng.normal(size=(n - 1, 1))
    sys = LtiSystem(a, b, np.eye(n))
    p = verify_preservation(sys, make_scheme(a, m, exact_tol=1e-9))
    assert p.original_controllable == p.lumped_controllable


@pytest.mark.parametrize("n", [3, 4, 6, 8, 10, 12])
@pytest.mark.parametrize("k", [1.0, 0.37, 5.0])
def test_kinetic_closure_on_chains(n, k):
    a = chain_matrix(ChainSpec(n, k))
    m = standard_two_row_m(n)
    assert is_compartmental(a) and is_kinetic_lumping(m)
    assert is_compartmental(make_scheme(a, m).a_hat)


def test_kinetic_closure_on_random_kinetic_schemes():
    rng = np.random.default_rng(7)
    for _ in range(20):
        n = int(rng.integers(2, 8))
        a = random_compartmental_symmetric(rng, n)
        m = build_m_from_eigenvectors(a, [n - 1])  # constant vector: total mass
        assert is_kinetic_lumping(m)
        assert is_compartmental(make_scheme(a, m).a_hat, atol=1e-12 * inf_norm(a))
