from fractions import Fraction

import pytest

from bellpoly import (
    BellInequality,
    BudgetExceededError,
    LinearGame,
    NLCSpec,
    Scenario,
    VerificationError,
    build_nlcd,
    enumerate_deterministic_boxes,
    facet_test,
    hadamard_diagonal_check,
    nlc2_block_symmetry,
    nlc2_decompose,
    nlcd_classical_formula,
    nlcd_lambda,
    nlcd_nonfacet_check,
    saturating_boxes,
    to_bell_inequality,
    to_correlator_inequality,
)
from bellpoly.tightness import LambdaProfile
from bellpoly.values import classical_value

F = Fraction


# ------------------------------------------------------------ saturating boxes

def test_chsh_saturating_boxes(chsh_game):
    ineq = to_bell_inequality(chsh_game)
    boxes = saturating_boxes(ineq)
    assert len(boxes) == 8
    for b in boxes:
        assert ineq.evaluate_box(b) == ineq.bound
    keys = [(b.a_map, b.b_map) for b in boxes]
    assert keys == sorted(keys)


def test_saturating_boxes_budget(chsh_game):
    with pytest.raises(BudgetExceededError):
        saturating_boxes(to_bell_inequality(chsh_game), budget=7)


# ---------------------------------------------------------------- facet tests

def test_chsh_is_facet_in_bell_polytope(chsh_game):
    rep = facet_test(to_bell_inequality(chsh_game), "bell")
    assert rep.polytope_kind == "bell"
    assert (rep.ambient_dim, rep.saturating_count, rep.saturating_affine_dim) \
        == (8, 8, 7)
    assert rep.is_facet


def test_chsh_is_facet_in_correlation_polytope(chsh_game):
    rep = facet_test(to_correlator_inequality(chsh_game), "correlation")
    assert rep.polytope_kind == "correlation"
    assert (rep.ambient_dim, rep.saturating_count, rep.saturating_affine_dim) \
        == (4, 8, 3)
    assert rep.is_facet


def test_nlc2_and_not_facet_bell(nlc2_and):
    rep = facet_test(to_bell_inequality(nlc2_and), "bell")
    assert rep.ambient_dim == 24
    assert rep.saturating_count == 8
    assert rep.saturating_affine_dim == 7
    assert not rep.is_facet


def test_nlc2_and_not_facet_correlation(nlc2_and):
    rep = facet_test(to_correlator_inequality(nlc2_and), "correlation")
    assert rep.ambient_dim == 16
    assert rep.saturating_affine_dim == 3
    assert not rep.is_facet


def test_positivity_flagged_trivial():
    s = Scenario(2, 2, 2, 2)
    coeffs = tuple(
        tuple(tuple(tuple(F(-1) if (x, y, a, b) == (0, 0, 0, 0) else F(0)
                          for b in range(2)) for a in range(2))
              for y in range(2)) for x in range(2))
    rep = facet_test(BellInequality(s, coeffs, F(0)), "bell")
    assert rep.trivial_facet_class
    assert rep.is_facet  # positivity supports a facet of the local polytope


def test_correlation_facet_requires_correlator_space(chsh_game):
    with pytest.raises(ValueError):
        facet_test(to_bell_inequality(chsh_game), "correlation")
    with pytest.raises(ValueError):
        facet_test(to_bell_inequality(chsh_game), "banana")


# ------------------------------------------------------------- nlc2 decompose

def test_nlc2_and_decomposition(nlc2_and):
    rep = nlc2_decompose(nlc2_and)
    assert not rep.is_facet
    assert rep.decomposition is not None
    assert [fr.bound for fr in rep.decomposition] == [F(3, 8), F(3, 8)]
    assert rep.saturating_count == 8
    assert rep.saturating_affine_dim == 7
    assert rep.ambient_dim == 24


def test_nlc2_decompose_fragment_coefficients_sum(nlc2_and):
    rep = nlc2_decompose(nlc2_and)
    whole = to_bell_inequality(nlc2_and)
    for x in range(4):
        for y in range(4):
            for a in range(2):
                for b in range(2):
                    total = sum(fr.coeffs[x][y][a][b] for fr in rep.decomposition)
                    assert total == whole.coeffs[x][y][a][b]


def test_nlc2_decompose_without_stats(nlc2_and):
    rep = nlc2_decompose(nlc2_and, compute_polytope_stats=False)
    assert not rep.is_facet
    assert rep.saturating_count == -1
    assert any("skipped" in n for n in rep.notes)


def test_nlc2_decompose_rejects_non_nlc(chsh_game):
    with pytest.raises(ValueError):
        nlc2_decompose(chsh_game)


def test_nlc2_xor_decompose(nlc2_xor):
    # perfectly winnable games still decompose; every box on the face
    # of a fragment stays within its bound
    rep = nlc2_decompose(nlc2_xor)
    assert not rep.is_facet
    assert sum(fr.bound for fr in rep.decomposition) == classical_value(nlc2_xor).value


# ---------------------------------------------------------- hadamard structure

def test_nlc2_hadamard_diagonal(nlc2_and, nlc2_xor):
    for g in (nlc2_and, nlc2_xor):
        for j in range(2):
            for k in range(2):
                assert hadamard_diagonal_check(g, j, k)


def test_nlc2_block_symmetry(nlc2_and, nlc2_xor):
    assert nlc2_block_symmetry(nlc2_and)
    assert nlc2_block_symmetry(nlc2_xor)


def test_generic_game_fails_hadamard_structure():
    q = tuple(tuple(F(1, 16) for _ in range(4)) for _ in range(4))
    f = tuple(tuple(1 if (x + y) % 3 == 0 else 0 for y in range(4))
              for x in range(4))
    g = LinearGame(2, 4, 4, q, f, n=2)
    results = [hadamard_diagonal_check(g, j, k)
               for j in range(2) for k in range(2)]
    assert not all(results)
    assert not nlc2_block_symmetry(g)


def test_hadamard_check_validates_inputs(nlc2_and, chsh_game):
    with pytest.raises(ValueError):
        hadamard_diagonal_check(nlc2_and, 2, 0)
    with pytest.raises(ValueError):
        hadamard_diagonal_check(chsh_game, 0, 0)  # n = 1 has no blocks


# ------------------------------------------------------------- lambda profiles

def test_lambda_profiles(lambda_games):
    for g, lam, wc in lambda_games:
        prof = nlcd_lambda(g)
        assert prof.big_lambda == lam
        assert nlcd_classical_formula(g) == wc


def test_lambda_profile_mass_interpretation():
    g = build_nlcd(NLCSpec(3, 2, (0, 0, 1), (F(1, 3),) * 3))
    prof = nlcd_lambda(g)
    # per-dit table (0, 0, 1) under the uniform distribution puts mass
    # 2/3 on output 0 and 1/3 on output 1
    assert prof.lambdas == (F(2, 3), F(1, 3), F(0))
    assert prof.i_max == 0
    assert sum(prof.lambdas) == 1


def test_lambda_profile_validation():
    with pytest.raises(VerificationError):
        LambdaProfile((F(1, 2), F(1, 4)), F(1, 2), 0)  # does not sum to 1


def test_formula_equals_brute_force(lambda_games):
    for g, _, wc in lambda_games:
        assert classical_value(g).value == wc == nlcd_classical_formula(g)


# ------------------------------------------------------------ nlcd non-facet

def test_nlcd_nonfacet_check_high_lambda(lambda_games):
    for g, lam, wc in lambda_games:
        if lam < F(1, 2):
            with pytest.raises(ValueError):
                nlcd_nonfacet_check(g)
            continue
        rep = nlcd_nonfacet_check(g)
        assert not rep.is_facet
        assert rep.decomposition is not None
        assert len(rep.decomposition) == 3  # one fragment per leading trit
        for fr in rep.decomposition:
            assert fr.bound == wc / 3


def test_nlcd_nonfacet_fragment_value():
    g = build_nlcd(NLCSpec(3, 2, (0, 0, 1), (F(1, 3),) * 3))
    rep = nlcd_nonfacet_check(g)
    assert [fr.bound for fr in rep.decomposition] == [F(7, 27)] * 3


def test_nlcd_nonfacet_rejects_plain_linear(nlc3_game):
    with pytest.raises(ValueError):
        nlcd_nonfacet_check(nlc3_game)


# --------------------------------------------------------------- verification

def test_decompose_raises_if_fragment_doctored(nlc2_and, monkeypatch):
    # force the fragment classical values to disagree with the halved
    # game value and confirm the cross-check trips
    import bellpoly.tightness as T
    real = T.classical_value

    def lying(g, *a, **k):
        out = real(g, *a, **k)
        import dataclasses
        return dataclasses.replace(out, value=out.value + F(1, 97))

    monkeypatch.setattr(T, "classical_value", lying)
    with pytest.raises(VerificationError):
        nlc2_decompose(nlc2_and, compute_polytope_stats=False)
