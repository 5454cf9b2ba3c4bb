import cmath
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from bellpoly import (
    LinearGame,
    NLCSpec,
    UniqueGame3,
    build_nlc,
    build_nlc2,
    build_nlcd,
    dits_to_index,
    ditwise_add,
    enumerate_deterministic_boxes,
    evaluate,
    behaviour_from_box,
    game_matrix,
    input_dits,
    rotation_game_to_linear,
    subgame_restrict,
    to_bell_inequality,
    to_correlator_inequality,
    unique3_matrices,
)
from bellpoly.values import classical_value

F = Fraction


# ---------------------------------------------------------------- dit helpers

def test_dit_round_trip():
    for d, n in ((2, 3), (3, 2), (5, 1)):
        for x in range(d ** n):
            assert dits_to_index(input_dits(x, d, n), d) == x


def test_ditwise_add_is_componentwise():
    assert ditwise_add(5, 7, 3, 2) == dits_to_index(
        tuple((a + b) % 3 for a, b in zip(input_dits(5, 3, 2),
                                          input_dits(7, 3, 2))), 3)


# ---------------------------------------------------------------- linear games

def test_win_rule_is_modular_sum(nlc3_game):
    g = nlc3_game
    for x in range(3):
        for y in range(3):
            for a in range(3):
                for b in range(3):
                    assert g.win(a, b, x, y) == ((a + b) % 3 == g.f[x][y])
                winning = g.winning_b(a, x, y)
                assert g.win(a, winning, x, y)


def test_total_weight_one(nlc3_game, phi_ex_game):
    assert nlc3_game.total_weight == 1
    assert phi_ex_game.total_weight == 1


def test_game_matrix_entries(nlc3_game):
    g = nlc3_game
    for k in (1, 2):
        m = game_matrix(g, k)
        z = m.to_complex()
        zeta = cmath.exp(2j * cmath.pi / 3)
        for x in range(3):
            for y in range(3):
                expected = float(g.q[x][y]) * zeta ** (k * g.f[x][y])
                assert abs(z[x][y] - expected) < 1e-12
                assert abs(abs(z[x][y]) - float(g.q[x][y])) < 1e-15


def test_game_matrix_k_out_of_range(nlc3_game):
    for k in (0, 3):
        with pytest.raises(ValueError):
            game_matrix(nlc3_game, k)


def test_roots_of_unity_sum_identity(nlc3_game):
    # Summing zeta^(k f) over k = 0..d-1 hits d exactly when f = 0.
    g = nlc3_game
    zeta = cmath.exp(2j * cmath.pi / 3)
    for x in range(3):
        for y in range(3):
            total = sum(zeta ** (k * g.f[x][y]) for k in range(3))
            expected = 3 if g.f[x][y] == 0 else 0
            assert abs(total - expected) < 1e-12


def test_linear_game_validation():
    q = ((F(1, 2), F(1, 2)),)
    with pytest.raises(ValueError):
        LinearGame(2, 1, 2, q, ((0, 2),))  # f value out of Z_2
    with pytest.raises(ValueError):
        LinearGame(2, 1, 2, ((F(1, 2), F(-1, 2)),), ((0, 0),))  # negative weight
    with pytest.raises(ValueError):
        LinearGame(1, 1, 2, q, ((0, 0),))  # d too small


# ------------------------------------------------------------------ NLC games

def test_nlc2_and_table(nlc2_and):
    g = nlc2_and
    assert (g.d, g.ma, g.mb, g.n) == (2, 4, 4, 2)
    # f(x, y) must equal AND of the two bits of x xor y.
    for x in range(4):
        for y in range(4):
            z = ditwise_add(x, y, 2, 2)
            bits = input_dits(z, 2, 2)
            assert g.f[x][y] == (bits[0] & bits[1])


def test_nlc_weights_are_shared_uniformly(nlc2_and):
    # q(x, y) = p(x xor y) / 2^n: every diagonal {x xor y = z} is constant.
    g = nlc2_and
    for z in range(4):
        cells = {g.q[x][ditwise_add(z, x, 2, 2)] for x in range(4)}
        assert len(cells) == 1
        assert cells.pop() == F(1, 4) / 4


def test_build_nlc_dispatch():
    full = build_nlc(NLCSpec(2, 2, (0, 0, 0, 1), (F(1, 4),) * 4))
    assert full.f == build_nlc2(NLCSpec(2, 2, (0, 0, 0, 1), (F(1, 4),) * 4)).f
    prod = build_nlc(NLCSpec(3, 2, (0, 0, 1), (F(1, 3),) * 3))
    assert (prod.d, prod.ma, prod.n) == (3, 9, 2)


def test_nlcd_product_form_function():
    g = build_nlcd(NLCSpec(3, 2, (0, 0, 1), (F(1, 3),) * 3))
    for x in range(9):
        for y in range(9):
            z = ditwise_add(x, y, 3, 2)
            dits = input_dits(z, 3, 2)
            assert g.f[x][y] == (((0, 0, 1)[dits[0]]) * dits[1]) % 3


def test_nlcd_rejects_full_table_for_d3():
    with pytest.raises(ValueError):
        NLCSpec(3, 2, (0,) * 9, (F(1, 9),) * 9)


def test_nlc_spec_distribution_must_normalize():
    with pytest.raises(ValueError):
        NLCSpec(2, 2, (0, 0, 0, 1), (F(1, 2),) * 4)


# ----------------------------------------------------------------- restriction

def test_subgame_restrict_masks_weight(nlc2_and):
    g = nlc2_and
    frag = subgame_restrict(g, fix_a={0: 1})
    # Alice inputs with first bit 1 are x = 2, 3.
    for x in range(4):
        for y in range(4):
            if input_dits(x, 2, 2)[0] == 1:
                assert frag.q[x][y] == g.q[x][y]
            else:
                assert frag.q[x][y] == 0
    assert frag.total_weight == F(1, 2)


def test_subgame_restrictions_partition_weight(nlc2_and):
    g = nlc2_and
    total = sum(subgame_restrict(g, fix_a={0: v}).total_weight
                for v in range(2))
    assert total == g.total_weight


def test_subgame_restrict_validation(nlc2_and):
    with pytest.raises(ValueError):
        subgame_restrict(nlc2_and)
    with pytest.raises(ValueError):
        subgame_restrict(nlc2_and, fix_a={5: 0})
    with pytest.raises(ValueError):
        subgame_restrict(nlc2_and, fix_a={0: 3})


# ---------------------------------------------------------------- unique games

def test_unique3_win_rule(unique3_mixed):
    g = unique3_mixed
    # Permutation names act on outcomes; b must equal pi(a).
    pi = {"e": (0, 1, 2), "(01)": (1, 0, 2), "(02)": (2, 1, 0),
          "(12)": (0, 2, 1), "(012)": (1, 2, 0), "(021)": (2, 0, 1)}
    for x in range(2):
        for y in range(2):
            table = pi[g.perms[x][y]]
            for a in range(3):
                assert g.winning_b(a, x, y) == table[a]
                for b in range(3):
                    assert g.win(a, b, x, y) == (b == table[a])


def test_unique3_matrices_partition_weight(unique3_mixed, unique3_rotation):
    for g in (unique3_mixed, unique3_rotation):
        rot, ref = unique3_matrices(g, 1)
        for x in range(2):
            for y in range(2):
                assert rot.weights[x][y] + ref.weights[x][y] == g.q[x][y]
                assert (rot.weights[x][y] == 0) or (ref.weights[x][y] == 0)


def test_unique3_rotation_game_has_empty_reflection_block(unique3_rotation):
    _, ref = unique3_matrices(unique3_rotation, 1)
    assert all(v == 0 for row in ref.weights for v in row)


def test_rotation_game_to_linear_preserves_value(unique3_rotation):
    lin = rotation_game_to_linear(unique3_rotation)
    assert classical_value(lin).value == classical_value(unique3_rotation).value


def test_rotation_game_to_linear_rejects_reflections(unique3_mixed):
    with pytest.raises(ValueError):
        rotation_game_to_linear(unique3_mixed)


def test_unique3_rejects_bad_permutation_name():
    q = ((F(1, 2), F(1, 2)),)
    with pytest.raises(ValueError):
        UniqueGame3(1, 2, q, (("e", "(0123)"),))


# ----------------------------------------------------------- inequality bridges

def test_bell_inequality_agrees_with_game_value(chsh_game):
    g = chsh_game
    ineq = to_bell_inequality(g)
    best = max(ineq.evaluate_box(b)
               for b in enumerate_deterministic_boxes(g.scenario))
    assert best == classical_value(g).value == ineq.bound


def test_correlator_and_probability_forms_agree(chsh_game):
    g = chsh_game
    bell = to_bell_inequality(g)
    corr = to_correlator_inequality(g)
    half_weight = g.total_weight / 2
    for box in enumerate_deterministic_boxes(g.scenario):
        pb = bell.evaluate_box(box)
        cb = corr.evaluate_box(box)
        # win probability = W/2 + correlator form value
        assert pb == half_weight + cb
    assert corr.bound == bell.bound - half_weight


def test_correlator_form_requires_binary(nlc3_game):
    with pytest.raises(ValueError):
        to_correlator_inequality(nlc3_game)


def test_evaluate_on_behaviour_matches_box(chsh_game):
    ineq = to_bell_inequality(chsh_game)
    for box in enumerate_deterministic_boxes(chsh_game.scenario):
        assert evaluate(ineq, behaviour_from_box(box)) == ineq.evaluate_box(box)


# ------------------------------------------------------------------ properties

@settings(max_examples=25, deadline=None)
@given(st.integers(0, 3), st.integers(0, 3), st.integers(0, 1), st.integers(0, 1))
def test_nlc2_win_depends_only_on_xor(x, y, da, db):
    g = build_nlc2(NLCSpec(2, 2, (0, 1, 1, 1), (F(1, 4),) * 4))
    z = ditwise_add(x, y, 2, 2)
    # shifting both inputs by the same mask keeps the target value
    for mask in range(4):
        x2, y2 = ditwise_add(x, mask, 2, 2), ditwise_add(y, mask, 2, 2)
        assert ditwise_add(x2, y2, 2, 2) == z
        assert g.f[x2][y2] == g.f[x][y]


@settings(max_examples=20, deadline=None)
@given(st.tuples(*[st.integers(0, 1)] * 4))
def test_nlc2_table_realized_exactly(bits):
    g = build_nlc2(NLCSpec(2, 2, bits, (F(1, 4),) * 4))
    for z in range(4):
        assert g.f[z][0] == bits[z]  # y = 0 leaves x xor y = x
