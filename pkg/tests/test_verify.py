import random

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from nimcell.cellular import SHIFT, XOR, CARule, all_rules, ca_rows, find_pattern
from nimcell.circuits import bracket_from_rule, gates_from_expr, parse_bracket
from nimcell.errors import BoxTooSmall, ShapeMismatch
from nimcell.games import InvariantGame, ModularGame, PGrid, solve_modular
from nimcell.reductions import augment_101, modular_from_gates
from nimcell.verify import (
    check_emulation,
    check_gadget,
    compile_rule,
    equiv_bounded,
    extract_ca_from_modular,
    random_modular_game,
)

XOR_RULE = XOR
IDENTITY = CARule(1, (0, 1))
ZERO = CARule(2, (0, 0, 0, 0))


def pair_for(rule):
    return augment_101(gates_from_expr(bracket_from_rule(rule)))


class TestExtract:
    def test_rows(self):
        game = compile_rule(XOR_RULE)
        grid = solve_modular(game, (5, 5 * 3 + 1))
        rows = extract_ca_from_modular(grid, 5, 3, 5)
        assert rows.row_string(0) == "11111"
        assert rows.row_string(1) == "10000"
        assert rows.row_string(2) == "11000"
        assert rows.rows[0] == int(grid.bits[:5, 0].sum() == 5) * 0b11111

    def test_box_too_small(self):
        grid = PGrid(np.zeros((5, 10), dtype=bool))
        with pytest.raises(BoxTooSmall):
            extract_ca_from_modular(grid, 5, 3, 5)
        with pytest.raises(BoxTooSmall):
            extract_ca_from_modular(grid, 2, 3, 6)


class TestEmulation:
    def test_xor(self):
        report = check_emulation(XOR_RULE, 9, 50)
        assert report.all_match and all(report.row_match) and report.k == 5

    def test_identity(self):
        report = check_emulation(IDENTITY, 20, 20)
        assert report.all_match
        assert ca_rows(IDENTITY, 20, 20).rows == ((1 << 20) - 1,) * 20

    def test_zero(self):
        assert check_emulation(ZERO, 5, 10).all_match

    def test_explicit_expression(self):
        expr = parse_bracket("[[xy][[x][y]]]", {"x": 1, "y": 0})
        assert check_emulation(XOR_RULE, 9, 30, expr=expr).all_match

    def test_mismatch_reported(self):
        # shift circuit passed off as xor
        report = check_emulation(XOR_RULE, 6, 20, expr=parse_bracket("[[x]]", {"x": 1}))
        assert not report.all_match
        assert report.first_mismatch == (1, 0)

    @pytest.mark.parametrize("l", [1, 2, 3])
    def test_remodularized(self, l):
        reports = [check_emulation(XOR_RULE, 10, 50, l=l) for l in (1, l)]
        assert all(r.all_match for r in reports)
        assert reports[0].grid_sha256 != "" and reports[1].row_match == reports[0].row_match

    def test_all_small_rules(self):
        for n in (1, 2, 3):
            for rule in all_rules(n):
                assert check_emulation(rule, 8, 40).all_match, rule.table

    def test_random_four_cell_rules(self):
        rng = random.Random(0)
        for _ in range(20):
            table = (0,) + tuple(rng.randint(0, 1) for _ in range(15))
            assert check_emulation(CARule(4, table), 8, 40).all_match, table


class TestGadget:
    def test_xor(self):
        report = check_gadget(compile_rule(XOR_RULE), (20, 20))
        assert report.agreement == report.embedded_total == 400
        assert report.unreliable_embedded == 0 and report.all_match

    def test_empty_game(self):
        game = ModularGame(4, ((), (), (), ()))
        report = check_gadget(game, (5, 5))
        assert report.all_match

    def test_observations_are_reported(self):
        report = check_gadget(compile_rule(XOR_RULE), (12, 12))
        assert [o.offset for o in report.out_of_phase] == [1, 2, 3, 4]
        assert len(report.trash) == 15
        assert all(o.behaviour in {"ca-identical", "periodic", "irregular", "out-of-box"} for o in report.out_of_phase)

    def test_observe_off(self):
        report = check_gadget(compile_rule(XOR_RULE), (8, 8), observe=False)
        assert report.out_of_phase == [] and report.trash == []

    @pytest.mark.parametrize("seed", range(5))
    def test_random_games(self, seed):
        game = random_modular_game(random.Random(seed))
        report = check_gadget(game, (10, 10), observe=False)
        assert report.all_match, (seed, game)


class TestEquiv:
    def test_xor_pair(self):
        g1, g2 = pair_for(XOR_RULE)
        assert equiv_bounded(g1, g2, (30, 80)) == (2, 27)

    def test_shift_pair_equal(self):
        g1, g2 = pair_for(SHIFT)
        assert equiv_bounded(g1, g2, (30, 80)) is None

    def test_self(self):
        game = compile_rule(XOR_RULE)
        assert equiv_bounded(game, game, (20, 20)) is None
        inv = InvariantGame(2, ((-1, -3), (-2, 1)))
        assert equiv_bounded(inv, inv, (20, 20)) is None

    def test_shape_mismatch(self):
        inv = InvariantGame(2, ((-1, -3),))
        with pytest.raises(ShapeMismatch):
            equiv_bounded(inv, compile_rule(XOR_RULE), (5, 5))
        with pytest.raises(ShapeMismatch):
            equiv_bounded(inv, InvariantGame(3, ((-1, 0, 0),)), (5, 5))
        with pytest.raises(ShapeMismatch):
            equiv_bounded(inv, inv, (5, 5, 5))


@given(st.sampled_from(list(all_rules(2)) + list(all_rules(1))), st.integers(3, 12), st.integers(4, 20))
@settings(max_examples=30)
def test_pair_differs_iff_pattern(rule, T, W):
    g1, g2 = pair_for(rule)
    k = g1.k
    a, b = solve_modular(g1, (W, k * T)), solve_modular(g2, (W, k * T))
    diff = {tuple(map(int, p)) for p in np.argwhere(a.bits != b.bits)}
    rows = ca_rows(rule, T, W)
    # b3 sits at level 3 of period t and reads the row below, cells i-2 .. i
    want = set()
    for t in range(T):
        for i in range(W):
            if (rows.cell(t, i - 2), rows.cell(t, i - 1), rows.cell(t, i)) == (1, 0, 1):
                want.add((i, k * t + 3))
    want = {c for c in want if c[1] < k * T}
    assert diff == want
    assert (find_pattern(rule, "101", T, W) is not None) == bool(want)


@given(st.integers(0, 10_000))
@settings(max_examples=15)
def test_random_gadget_soundness(seed):
    game = random_modular_game(random.Random(seed))
    assert check_gadget(game, (8, 8), observe=False).all_match
