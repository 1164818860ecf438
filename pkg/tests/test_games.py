import random

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from nimcell.errors import BoxMismatch, DimensionMismatch, DuplicateMove, NonnegativeSumMove
from nimcell.games import (
    InvariantGame,
    ModularGame,
    Outcome,
    PGrid,
    first_difference,
    outcome_invariant,
    solve_invariant,
    solve_invariant_exact,
    solve_modular,
    validate_invariant,
    validate_modular,
)
from oracles import cone_in_box, fixed_point_violations, invariant_oracle, modular_oracle

TWO_MOVE = InvariantGame(2, ((-1, -3), (-2, 1)))
EIGHT_MOVE = InvariantGame(
    2, ((0, -2), (-2, 0), (2, -3), (-3, 2), (-5, 4), (-5, -2), (-4, -3), (-1, -4))
)
XOR_MODULAR = ModularGame(
    5, (((0, -1), (0, -2)), ((-1, -1),), ((0, -2),), ((0, -3), (-1, -3)), ((0, -2), (0, -3)))
)


class TestValidation:
    def test_accepts_mixed_sign_moves(self):
        validate_invariant(TWO_MOVE)
        validate_invariant(InvariantGame(2, ((1, -2),)))
        # components sum to 0, which is not a strict decrease
        with pytest.raises(NonnegativeSumMove):
            validate_invariant(InvariantGame(2, ((1, -1),)))

    def test_zero_sum_rejected(self):
        with pytest.raises(NonnegativeSumMove) as err:
            validate_invariant(InvariantGame(2, ((-1, 1),)))
        assert err.value.move == (-1, 1)

    def test_duplicate_rejected(self):
        with pytest.raises(DuplicateMove):
            validate_invariant(InvariantGame(2, ((-1, 0), (-1, 0))))

    def test_length_mismatch(self):
        with pytest.raises(DimensionMismatch):
            validate_invariant(InvariantGame(2, ((-1, 0, 0),)))

    def test_empty_game_is_legal(self):
        validate_invariant(InvariantGame(3, ()))
        assert solve_invariant(InvariantGame(3, ()), (2, 3, 4)).bits.all()

    def test_modular_rules(self):
        validate_modular(XOR_MODULAR)
        with pytest.raises(ValueError):
            validate_modular(ModularGame(1, (((1, -1),),)))
        with pytest.raises(ValueError):
            validate_modular(ModularGame(1, (((0, 0),),)))
        with pytest.raises(ValueError):
            validate_modular(ModularGame(2, (((0, -1),),)))


class TestSolveInvariant:
    def test_terminal_column(self):
        grid = solve_invariant_exact(TWO_MOVE, (25, 25))
        assert grid[(0, 7)]
        assert all(grid[(0, y)] for y in range(25))

    def test_known_cells(self):
        grid = solve_invariant_exact(TWO_MOVE, (25, 25))
        assert grid[(5, 0)]
        # only option is (-2, 1) to the terminal cell (0, 1)
        assert not grid[(2, 0)]

    def test_box_dimension_checked(self):
        with pytest.raises(DimensionMismatch):
            solve_invariant(TWO_MOVE, (5, 5, 5))

    def test_unreliable_cells_only_where_moves_leave(self):
        grid = solve_invariant(TWO_MOVE, (25, 25))
        exact = solve_invariant_exact(TWO_MOVE, (25, 25))
        assert exact.all_reliable
        assert not grid.all_reliable
        inside = cone_in_box(TWO_MOVE, (25, 25))
        for a in map(tuple, np.argwhere(~grid.reliable)):
            assert not inside(a)
        assert grid.reliable[:2].all() and grid.reliable[:, :10].all()
        rel = grid.reliable
        assert np.array_equal(grid.bits[rel], exact.bits[rel])

    def test_eight_move_game_against_oracle(self):
        grid = solve_invariant(EIGHT_MOVE, (100, 100))
        oracle = invariant_oracle(EIGHT_MOVE)
        rng = random.Random(0)
        reliable = [tuple(map(int, p)) for p in np.argwhere(grid.reliable)]
        for pos in rng.sample(reliable, 200):
            assert grid[pos] == oracle(pos), pos
        for pos in rng.sample(reliable, 5):
            assert grid[pos] == (outcome_invariant(EIGHT_MOVE, pos) is Outcome.P)

    def test_fixed_point(self):
        for game, box in [(TWO_MOVE, (25, 25)), (EIGHT_MOVE, (40, 40))]:
            grid = solve_invariant(game, box)
            assert fixed_point_violations(game, grid) == []

    def test_threads_do_not_change_result(self):
        g1 = solve_invariant(EIGHT_MOVE, (60, 60), threads=1)
        g8 = solve_invariant(EIGHT_MOVE, (60, 60), threads=8)
        assert g1 == g8
        assert g1.to_bytes() == g8.to_bytes()


class TestOutcome:
    def test_examples(self):
        assert outcome_invariant(TWO_MOVE, (0, 0)) is Outcome.P
        assert outcome_invariant(TWO_MOVE, (1, 3)) is Outcome.N
        assert outcome_invariant(TWO_MOVE, (5, 0)) is Outcome.P

    def test_dimension(self):
        with pytest.raises(DimensionMismatch):
            outcome_invariant(TWO_MOVE, (1,))

    def test_deep_chain_does_not_recurse(self):
        game = InvariantGame(1, ((-1,),))
        assert outcome_invariant(game, (5000,)) is Outcome.P
        assert outcome_invariant(game, (5001,)) is Outcome.N


class TestSolveModular:
    def test_xor_cells(self):
        grid = solve_modular(XOR_MODULAR, (50, 50))
        assert grid[(0, 0)]
        assert grid[(0, 5)]
        assert not grid[(1, 5)]

    def test_no_moves(self):
        game = ModularGame(3, ((), (), ()))
        assert solve_modular(game, (3, 3)).bits.all()

    def test_against_oracle(self):
        grid = solve_modular(XOR_MODULAR, (50, 50))
        oracle = modular_oracle(XOR_MODULAR)
        for a1 in range(50):
            for a2 in range(50):
                assert grid[(a1, a2)] == oracle(a1, a2)

    def test_k1_is_invariant(self):
        moves = ((0, -1), (-2, -1), (-1, -3))
        mod = solve_modular(ModularGame(1, (moves,)), (30, 30))
        inv = solve_invariant(InvariantGame(2, moves), (30, 30))
        assert inv.all_reliable
        assert mod == inv

    def test_box_must_be_2d(self):
        with pytest.raises(DimensionMismatch):
            solve_modular(XOR_MODULAR, (5, 5, 5))


class TestFirstDifference:
    def test_identical(self):
        g = solve_invariant(TWO_MOVE, (30, 30))
        assert first_difference(g, g) is None

    def test_single_flip(self):
        bits = np.zeros((30, 30), dtype=bool)
        other = bits.copy()
        other[2, 27] = True
        assert first_difference(PGrid(bits), PGrid(other)) == (2, 27)

    def test_tie_break(self):
        bits = np.zeros((5, 5), dtype=bool)
        other = bits.copy()
        other[0, 3] = other[3, 0] = True
        assert first_difference(PGrid(bits), PGrid(other)) == (0, 3)

    def test_total_before_lexicographic(self):
        bits = np.zeros((10, 10), dtype=bool)
        other = bits.copy()
        other[0, 9] = other[5, 1] = True
        assert first_difference(PGrid(bits), PGrid(other)) == (5, 1)

    def test_unreliable_cells_ignored(self):
        bits = np.zeros((4, 4), dtype=bool)
        other = bits.copy()
        other[1, 1] = True
        mask = np.ones((4, 4), dtype=bool)
        mask[1, 1] = False
        assert first_difference(PGrid(bits), PGrid(other, mask)) is None

    def test_box_mismatch(self):
        with pytest.raises(BoxMismatch):
            first_difference(PGrid(np.zeros((2, 2))), PGrid(np.zeros((2, 3))))


def test_packed_round_trip():
    grid = solve_modular(XOR_MODULAR, (13, 7))
    data = grid.to_bytes()
    assert len(data) == (13 * 7 + 7) // 8
    assert PGrid.from_bytes(data, (13, 7)) == grid
    # last coordinate fastest
    assert np.unpackbits(np.frombuffer(data, dtype=np.uint8))[1] == grid[(0, 1)]


@st.composite
def invariant_games(draw):
    d = draw(st.integers(1, 3))
    vec = st.lists(st.integers(-5, 5), min_size=d, max_size=d).map(tuple).filter(lambda m: sum(m) < 0)
    moves = draw(st.lists(vec, max_size=6, unique=True))
    box = tuple(draw(st.lists(st.integers(1, 20 if d < 3 else 12), min_size=d, max_size=d)))
    return InvariantGame(d, tuple(moves)), box


@given(invariant_games())
@settings(max_examples=60)
def test_solver_matches_oracle(case):
    game, box = case
    grid = solve_invariant(game, box)
    is_p = invariant_oracle(game)
    inside = cone_in_box(game, box)
    for a in np.ndindex(*box):
        if inside(a):
            assert grid.reliable[a], a
        if grid.reliable[a]:
            assert grid.bits[a] == is_p(a), a


@given(invariant_games())
@settings(max_examples=40)
def test_terminal_positions_are_p(case):
    game, box = case
    grid = solve_invariant(game, box)
    for a in np.ndindex(*box):
        legal = any(min(x + y for x, y in zip(a, m)) >= 0 for m in game.moves)
        if not legal:
            assert grid.reliable[a] and grid.bits[a]


@given(invariant_games())
@settings(max_examples=30)
def test_fixed_point_property(case):
    game, box = case
    assert fixed_point_violations(game, solve_invariant(game, box)) == []
