"""Finite-section frame algebra: Gram spectra, gaps, perturbation bounds."""

import math

import numpy as np
import pytest

from suborbit import (
    CoordinateVector,
    DegenerateFamilyError,
    FrameFamily,
    PreconditionError,
    basis_vector,
    canonical_basis_family,
    empirical_frame_bounds,
    excess_finite,
    geometric_domination,
    gram_matrix,
    independence_margin,
    is_eps_approximation,
    norm_sq,
    pairwise_deficit,
    perturbation_report,
    synthesis_gap,
    two_orbit_family,
)

e = basis_vector


def fam(*vecs):
    return FrameFamily(tuple(vecs))


def embed(family: FrameFamily, dim: int) -> np.ndarray:
    """Dense coordinate matrix, columns = elements (test-side oracle only)."""
    mat = np.zeros((dim, len(family)), dtype=complex)
    for k, f in enumerate(family.elements):
        for j, amp in f.items():
            mat[j - 1, k] = amp
    return mat


# --- gram and spectra ---------------------------------------------------------

def test_gram_examples():
    assert np.allclose(gram_matrix(fam(e(1), e(2))), np.eye(2))
    assert np.allclose(gram_matrix(fam(e(1), e(1))), np.ones((2, 2)))
    assert np.allclose(gram_matrix(fam(e(1) + e(2), e(1) - e(2))), 2 * np.eye(2))


def test_empirical_bounds_examples():
    assert empirical_frame_bounds(canonical_basis_family(6)) == pytest.approx((1, 1))
    assert empirical_frame_bounds(fam(e(1), e(2), e(1), e(2))) == pytest.approx((2, 2))
    assert empirical_frame_bounds(fam(e(1) + e(2), e(1) - e(2))) == pytest.approx((2, 2))


def test_empirical_bounds_degenerate():
    zero = CoordinateVector()
    with pytest.raises(DegenerateFamilyError):
        empirical_frame_bounds(fam(zero, zero))


def test_excess_examples():
    assert excess_finite(canonical_basis_family(6)) == 0
    assert excess_finite(fam(e(1), e(2), e(1) + e(2))) == 1


def test_excess_two_orbit_family_against_rank_oracle():
    n = 5
    family = two_orbit_family(n + 1)  # elements indexed k <= n on both halves
    measured = excess_finite(family)
    rank = np.linalg.matrix_rank(embed(family, n + 2))
    assert measured == len(family) - rank == n - 1


# --- synthesis gaps -----------------------------------------------------------

def test_synthesis_gap_examples():
    f2 = fam(e(1), e(2))
    assert synthesis_gap(f2, f2) == 0
    t = 0.37
    g = fam(e(1), e(2) + t * e(3))
    assert synthesis_gap(f2, g) == pytest.approx(t, rel=1e-12)
    h = fam(e(1) + t * e(3), e(2) + t * e(3))
    assert synthesis_gap(f2, h) == pytest.approx(t * math.sqrt(2), rel=1e-12)


def test_eps_approximation_examples():
    f2 = fam(e(1), e(2))
    g = fam(e(1), e(2) + 0.6 * e(3))
    assert is_eps_approximation(f2, f2, 1e-9)
    assert not is_eps_approximation(f2, g, 0.25)
    assert is_eps_approximation(f2, g, 0.5)


def test_pairwise_deficit_examples():
    f2 = fam(e(1), e(2))
    assert pairwise_deficit(f2, f2) == 0
    t = 0.7
    assert pairwise_deficit(f2, fam(e(1) + t * e(9), e(2))) == pytest.approx(t * t)
    g = fam(e(1) + 0.3 * e(7), e(2) + 0.4 * e(8))
    assert pairwise_deficit(f2, g) == pytest.approx(0.25)


def test_geometric_domination_examples():
    eps = 0.8
    f2 = fam(e(1), e(2))
    ok, table = geometric_domination(f2, f2, eps)
    assert ok and all(row[1] == 0 for row in table)

    g_bad = fam(e(1) + math.sqrt(eps / 4) * e(5), e(2) + math.sqrt(eps / 2) * e(6))
    ok, table = geometric_domination(f2, g_bad, eps)
    assert not ok
    assert table[1][1] > table[1][2]  # k=2 exceeds its eps/4 budget

    g_ok = fam(e(1) + math.sqrt(eps / 4) * e(5), e(2) + math.sqrt(eps / 8) * e(6))
    ok, _ = geometric_domination(f2, g_ok, eps)
    assert ok


def test_domination_implies_deficit_implies_eps_approximation():
    rng = np.random.default_rng(3)
    for _ in range(25):
        k = int(rng.integers(1, 7))
        dim = int(rng.integers(k, 15))
        base = [
            CoordinateVector({j + 1: complex(x, y) for j, (x, y) in
                              enumerate(zip(rng.uniform(-1, 1, dim), rng.uniform(-1, 1, dim)))})
            for _ in range(k)
        ]
        eps = float(rng.uniform(0.1, 2.0))
        other = []
        for i, f in enumerate(base, start=1):
            room = math.sqrt(eps * 2.0 ** (-i)) * float(rng.uniform(0, 0.99))
            other.append(f + room * e(dim + i))
        family, approx = FrameFamily(tuple(base)), FrameFamily(tuple(other))
        ok, _ = geometric_domination(family, approx, eps)
        assert ok
        assert pairwise_deficit(family, approx) <= eps
        assert is_eps_approximation(family, approx, eps)


def test_quadratic_form_never_exceeds_gap(subtests=None):
    rng = np.random.default_rng(11)
    for _ in range(5):
        k = int(rng.integers(2, 8))
        dim = int(rng.integers(k, 16))
        family = FrameFamily(tuple(
            CoordinateVector({j + 1: complex(x, y) for j, (x, y) in
                              enumerate(zip(rng.uniform(-1, 1, dim), rng.uniform(-1, 1, dim)))})
            for _ in range(k)
        ))
        approx = FrameFamily(tuple(
            f + float(rng.uniform(-0.5, 0.5)) * e(int(rng.integers(1, dim + 5)))
            for f in family.elements
        ))
        gap_sq = synthesis_gap(family, approx) ** 2
        for _ in range(200):
            c = rng.uniform(-1, 1, k) + 1j * rng.uniform(-1, 1, k)
            vec = CoordinateVector()
            for ck, f, g in zip(c, family.elements, approx.elements):
                vec = vec + complex(ck) * (f - g)
            assert norm_sq(vec) <= gap_sq * float(np.sum(np.abs(c) ** 2)) + 1e-9


# --- independence -------------------------------------------------------------

def test_independence_margin_examples():
    assert independence_margin(fam(e(1), e(2))) == pytest.approx(1.0)
    assert independence_margin(fam(e(1), e(1))) == 0.0
    third = (1 / math.sqrt(2)) * (e(1) + e(2))
    assert independence_margin(fam(e(1), third)) == pytest.approx(1 - 1 / math.sqrt(2))
    with pytest.raises(PreconditionError):
        independence_margin(fam(e(1), CoordinateVector()))


# --- perturbation reports -----------------------------------------------------

def test_report_identity_perturbation():
    family = canonical_basis_family(6)
    rep = perturbation_report(family, family, eps=0.5)
    assert rep.synthesis_gap == 0
    assert rep.frame_op_gap == pytest.approx(0, abs=1e-12)
    assert rep.inv_frame_op_gap == pytest.approx(0, abs=1e-10)
    assert rep.all_bounds_hold and not rep.spans_differ


def test_report_new_bounds_closed_form():
    family = canonical_basis_family(6)
    rep = perturbation_report(family, family, eps=0.25)
    assert rep.new_lower_bound == pytest.approx(0.25, rel=1e-15)
    assert rep.new_upper_bound == pytest.approx(2.25, rel=1e-15)


def test_report_against_dense_oracle():
    family = canonical_basis_family(6)
    perturbed = FrameFamily((e(1) + 0.1 * e(7),) + family.elements[1:])
    rep = perturbation_report(family, perturbed, eps=0.25)
    assert rep.synthesis_gap == pytest.approx(0.1, rel=1e-12)
    assert rep.synthesis_gap <= rep.bound_synthesis
    assert rep.frame_op_gap <= rep.bound_frame_op
    assert rep.inv_frame_op_gap <= rep.bound_inv
    assert rep.all_bounds_hold

    # dense reconstruction of every operator on the 7-dim span
    phi = embed(family, 7)
    psi = embed(perturbed, 7)
    s, s_t = phi @ phi.conj().T, psi @ psi.conj().T
    assert rep.synthesis_gap == pytest.approx(np.linalg.norm(phi - psi, 2), rel=1e-10)
    assert rep.frame_op_gap == pytest.approx(np.linalg.norm(s - s_t, 2), rel=1e-9)
    inv_gap = np.linalg.norm(np.linalg.pinv(s, hermitian=True)
                             - np.linalg.pinv(s_t, hermitian=True), 2)
    assert rep.inv_frame_op_gap == pytest.approx(inv_gap, rel=1e-8)


def test_report_requires_eps_below_lower_bound():
    family = canonical_basis_family(4)
    with pytest.raises(PreconditionError):
        perturbation_report(family, family, eps=1.0)
    with pytest.raises(PreconditionError):
        perturbation_report(family, family, eps=1.5, lower=1.0, upper=1.0)


def test_report_randomised_bounds_hold():
    rng = np.random.default_rng(5)
    for _ in range(40):
        k = int(rng.integers(2, 13))
        dim = int(rng.integers(k, 25))
        family = FrameFamily(tuple(
            CoordinateVector({j + 1: complex(x, y) for j, (x, y) in
                              enumerate(zip(rng.uniform(-1, 1, dim), rng.uniform(-1, 1, dim)))})
            for _ in range(k)
        ))
        a_emp, b_emp = empirical_frame_bounds(family)
        eps = float(rng.uniform(0.05, 0.6)) * a_emp
        deltas = [
            CoordinateVector({j + 1: complex(x, y) for j, (x, y) in
                              enumerate(zip(rng.uniform(-1, 1, dim), rng.uniform(-1, 1, dim)))})
            for _ in range(k)
        ]
        total = math.fsum(norm_sq(d) for d in deltas)
        scale = math.sqrt(0.95 * eps / total)
        perturbed = FrameFamily(tuple(
            f + scale * d for f, d in zip(family.elements, deltas)
        ))
        assert is_eps_approximation(family, perturbed, eps)
        rep = perturbation_report(family, perturbed, eps, lower=a_emp, upper=b_emp)
        assert rep.all_bounds_hold


def test_report_json_field_names():
    family = canonical_basis_family(3)
    rep = perturbation_report(family, family, eps=0.5)
    assert set(rep.to_json()) == {
        "epsilon", "synthesis_gap", "frame_op_gap", "inv_frame_op_gap",
        "bound_synthesis", "bound_frame_op", "bound_inv",
        "new_lower_bound", "new_upper_bound",
        "excess_original", "excess_perturbed", "all_bounds_hold",
    }
