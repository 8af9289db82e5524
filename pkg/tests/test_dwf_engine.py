import itertools

import numpy as np
import pytest

from conftest import broken_stencil, naive_parity, naive_whdo, random_density, random_operator
from dwfstencil.doubled_space import doubled_frame, doubled_wigner, project
from dwfstencil.dwf_engine import (
    PPOFrame,
    check_marginalisation,
    frames_equal,
    m_ppo_frame,
    m_ppo_frame_from_projection,
    marginals,
    negativity,
    stencil_from_frame,
    stencil_hash,
    validate_frame,
    weyl,
    wig,
    wig_via_stencil,
)
from dwfstencil.qudit_algebra import DomainError, shift_power
from dwfstencil.stencil_kit import builtin_stencil, sample_valid_stencil, validate_stencil, zero_stencil

TOL = 1e-10


def valid_stencils(d, samples=3):
    kinds = ("rs", "dks") if d % 2 else ("cgs",)
    out = [builtin_stencil(k, d) for k in kinds]
    out += [sample_valid_stencil(d, s) for s in range(samples)]
    return out


def test_rs_frame_is_doubled_frame_at_even_sites():
    for d in [3, 5]:
        F = m_ppo_frame(builtin_stencil("rs", d))
        A2d = doubled_frame(d)
        for a in itertools.product(range(d), repeat=2):
            np.testing.assert_allclose(F[a], A2d[2 * a[0], 2 * a[1]], atol=1e-12)


def test_cgs_frame_is_average_of_four_sites():
    d = 4
    F = m_ppo_frame(builtin_stencil("cgs", d))
    A2d = doubled_frame(d)
    for a in itertools.product(range(d), repeat=2):
        ref = 0.5 * sum(A2d[(2 * a[0] + b1) % 8, (2 * a[1] + b2) % 8]
                        for b1, b2 in itertools.product(range(2), repeat=2))
        np.testing.assert_allclose(F[a], ref, atol=1e-12)


def test_zero_stencil_frame():
    F = m_ppo_frame(zero_stencil(3))
    assert np.abs(F.ppos).max() == 0
    report = validate_frame(F)
    assert not report.a2_ok and report.residuals["a2"] == pytest.approx(1)
    assert not report.a3_ok and report.residuals["a3"] == pytest.approx(3)
    QH, QV = marginals(F)
    assert np.abs(QH).max() == 0 and np.abs(QV).max() == 0
    assert not check_marginalisation(F).ok


@pytest.mark.parametrize("d", [2, 3, 4, 5])
def test_projection_path_matches_definition(d):
    for M in valid_stencils(d):
        np.testing.assert_allclose(m_ppo_frame(M).ppos, m_ppo_frame_from_projection(M).ppos, atol=1e-10)


def test_wig_examples():
    d = 3
    F = m_ppo_frame(builtin_stencil("rs", d))
    np.testing.assert_allclose(wig(np.eye(d), F), np.full((d, d), 1 / d), atol=1e-12)
    W = wig(np.eye(d) / d, F)
    np.testing.assert_allclose(W, 1 / d**2, atol=1e-12)
    assert W.sum() == pytest.approx(1)


def test_wig_ground_state_rs_d3():
    d = 3
    ket0 = np.diag([1.0, 0, 0])
    W = wig(ket0, m_ppo_frame(builtin_stencil("rs", d)))
    # independent trace with naively built V(2a) R
    ref = np.empty((d, d), dtype=complex)
    for a1, a2 in itertools.product(range(d), repeat=2):
        A = naive_whdo(d, 2 * a1, 2 * a2) @ naive_parity(d)
        ref[a1, a2] = np.trace(A.conj().T @ ket0) / d
    np.testing.assert_allclose(W, ref, atol=1e-12)
    expected = np.zeros((d, d))
    expected[0, :] = 1 / 3
    np.testing.assert_allclose(W, expected, atol=1e-12)
    assert negativity(W) == pytest.approx(0, abs=1e-12)


@pytest.mark.parametrize("d", [2, 3, 4, 5])
def test_wig_two_paths_agree(d, rng):
    for M in valid_stencils(d):
        F = m_ppo_frame(M)
        O = random_operator(rng, d)
        np.testing.assert_allclose(wig(O, F), wig_via_stencil(O, M), atol=1e-10)


def test_wig_dimension_mismatch():
    F = m_ppo_frame(builtin_stencil("rs", 3))
    with pytest.raises(DomainError):
        wig(np.eye(4), F)
    with pytest.raises(DomainError):
        weyl(np.zeros((4, 4)), F)


def test_weyl_examples():
    d = 3
    F = m_ppo_frame(builtin_stencil("rs", d))
    X = shift_power(d, 1)
    np.testing.assert_allclose(weyl(wig(X, F), F), X, atol=1e-10)
    np.testing.assert_allclose(weyl(np.full((d, d), 1 / d), F), np.eye(d), atol=1e-12)
    np.testing.assert_allclose(weyl(np.zeros((d, d)), F), 0)


@pytest.mark.parametrize("kind,dims", [("rs", [3, 5, 7]), ("cgs", [2, 4, 6]), ("dks", [3, 5, 7])])
def test_builtin_frames_valid(kind, dims):
    for d in dims:
        report = validate_frame(m_ppo_frame(builtin_stencil(kind, d)), TOL)
        assert report.ok, report.residuals


@pytest.mark.parametrize("d", [2, 3, 4, 5])
def test_sampled_frames_valid(d):
    for seed in range(5):
        report = validate_frame(m_ppo_frame(sample_valid_stencil(d, seed)), TOL)
        assert report.ok, report.residuals


@pytest.mark.parametrize("d", [2, 3, 4, 5])
def test_frame_reconstructs_its_stencil(d):
    for M in valid_stencils(d):
        F = m_ppo_frame(M)
        recovered = stencil_from_frame(F)
        assert np.abs(recovered.raw - recovered.projected).max() <= 1e-12
        assert np.abs(recovered.projected - M.projected).max() <= 1e-10
        assert validate_stencil(recovered).ok
        assert np.abs(m_ppo_frame(recovered).ppos - F.ppos).max() <= 1e-10


@pytest.mark.parametrize("d", [3, 4])
@pytest.mark.parametrize("violate,criterion", [("m1", "a1_ok"), ("m2", "a2_ok"), ("m3", "a3_ok")])
def test_broken_stencil_breaks_matching_frame_criterion(d, violate, criterion):
    report = validate_frame(m_ppo_frame(broken_stencil(d, violate)), TOL)
    assert not getattr(report, criterion), report.residuals
    assert report.a4_ok


def test_marginals_rs_and_cgs():
    for kind, d in [("rs", 3), ("cgs", 4), ("cgs", 2), ("rs", 5)]:
        F = m_ppo_frame(builtin_stencil(kind, d))
        _, QV = marginals(F)
        for a1 in range(d):
            expected = np.zeros((d, d))
            expected[a1, a1] = 1
            np.testing.assert_allclose(QV[a1], expected, atol=1e-10)
        report = check_marginalisation(F, TOL)
        assert report.ok, report.to_dict()
        assert report.unbiasedness_residual <= 1e-9


def test_marginalisation_dks_recorded():
    report = check_marginalisation(m_ppo_frame(builtin_stencil("dks", 3)), TOL)
    assert isinstance(report.ok, bool)
    assert set(report.to_dict()) >= {"qh_projectors_ok", "qv_projectors_ok", "unbiasedness_residual"}


def test_sampled_frames_generally_lack_marginalisation():
    report = check_marginalisation(m_ppo_frame(sample_valid_stencil(3, 0)), TOL)
    assert not report.ok


@pytest.mark.parametrize("d", [2, 3, 4, 5])
def test_sum_and_purity_rules(d, rng):
    for M in valid_stencils(d, samples=2):
        F = m_ppo_frame(M)
        for _ in range(5):
            rho = random_density(rng, d)
            W = wig(rho, F)
            assert W.sum() == pytest.approx(np.trace(rho), abs=1e-10)
            assert d * np.sum(np.abs(W) ** 2) == pytest.approx(np.trace(rho @ rho).real, abs=1e-10)
            assert np.abs(W.imag).max() <= 1e-10


def test_negativity_basics():
    assert negativity(np.full((3, 3), 1 / 3)) == 0
    assert negativity(np.array([[0.5, -0.25], [1.0, -0.25]])) == pytest.approx(0.5)
    with pytest.raises(DomainError):
        negativity(np.array([[1j, 0], [0, 0]]))


def test_negativity_depends_on_representation():
    d = 3
    rs = m_ppo_frame(builtin_stencil("rs", d))
    dks = m_ppo_frame(builtin_stencil("dks", d))
    plus = np.ones(d) / np.sqrt(d)
    rho = np.outer(plus, plus)
    # |+> is a stabilizer state; both pictures stay nonnegative
    assert negativity(wig(rho, rs)) == pytest.approx(0, abs=1e-12)
    assert negativity(wig(rho, dks)) == pytest.approx(0, abs=1e-12)
    psi = np.array([1, np.exp(1j * np.pi / 3), 0]) / np.sqrt(2)
    rho = np.outer(psi, psi.conj())
    n_rs = negativity(wig(rho, rs))
    n_dks = negativity(wig(rho, dks))
    assert n_rs == pytest.approx(1 / 3, abs=1e-12)
    assert n_dks == pytest.approx(2 / 9, abs=1e-12)
    # cross-check through the stencil correlation path
    assert negativity(wig_via_stencil(rho, builtin_stencil("dks", d)).real) == pytest.approx(2 / 9, abs=1e-12)


def test_frame_hash_short_circuit():
    M = builtin_stencil("rs", 3)
    F = m_ppo_frame(M)
    G = m_ppo_frame(M.as_projected())
    assert stencil_hash(M) == stencil_hash(M.as_projected())
    assert frames_equal(F, G)
    assert not frames_equal(F, m_ppo_frame(builtin_stencil("dks", 3)))
    bare = PPOFrame(F.ppos.copy())
    assert frames_equal(F, bare)


def test_frame_shape_guard():
    with pytest.raises(DomainError):
        PPOFrame(np.zeros((3, 3, 2, 2)))
