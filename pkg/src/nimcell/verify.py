"""Bounded cross-checks of each reduction stage against an independent route."""

from __future__ import annotations

import hashlib
import random
from dataclasses import dataclass, field
from itertools import product
from typing import Optional, Sequence, Union

import numpy as np

from .cellular import CARows, CARule, ca_rows
from .circuits import Expr, bracket_from_rule, gates_from_expr
from .errors import BoxTooSmall, DimensionMismatch, ShapeMismatch
from .games import (
    InvariantGame,
    ModularGame,
    PGrid,
    first_difference,
    solve_invariant,
    solve_modular,
)
from .reductions import GadgetSpec, embed, invariant_from_modular, modular_from_gates, remodularize

GADGET_BOUND = 3


def extract_ca_from_modular(grid: PGrid, k: int, T: int, W: int) -> CARows:
    width, height = grid.box
    if width < W or height <= k * (T - 1):
        raise BoxTooSmall(f"grid {grid.box} cannot hold {T} rows of period {k} and width {W}")
    rows = []
    for t in range(T):
        col = grid.bits[:W, k * t]
        rows.append(int.from_bytes(np.packbits(col, bitorder="little").tobytes(), "little"))
    return CARows(None, W, tuple(rows))


@dataclass
class EmulationReport:
    rule: dict
    k: int
    l: int
    W: int
    T: int
    row_match: list[bool]
    first_mismatch: Optional[tuple[int, int]] = None
    grid_sha256: str = ""

    @property
    def all_match(self) -> bool:
        return self.first_mismatch is None


def compile_rule(rule: CARule, expr: Optional[Expr] = None) -> ModularGame:
    return modular_from_gates(gates_from_expr(expr if expr is not None else bracket_from_rule(rule)))


def check_emulation(rule: CARule, T: int, W: int, l: int = 1, expr: Optional[Expr] = None) -> EmulationReport:
    """Solve the compiled modular game and compare every k-th row with the CA.

    With ``l > 1`` the game is first remodularized; CA rows are still read at
    multiples of the original modulus.
    """
    game = compile_rule(rule, expr)
    k = game.k
    grid = solve_modular(remodularize(game, l), (W, k * T + 1))
    got = extract_ca_from_modular(grid, k, T, W)
    want = ca_rows(rule, T, W)
    matches = [a == b for a, b in zip(got.rows, want.rows)]
    first = None
    for t, ok in enumerate(matches):
        if not ok:
            diff = got.rows[t] ^ want.rows[t]
            first = (t, (diff & -diff).bit_length() - 1)
            break
    return EmulationReport(
        rule={"n": rule.n, "table": list(rule.table)},
        k=k,
        l=l,
        W=W,
        T=T,
        row_match=matches,
        first_mismatch=first,
        grid_sha256=hashlib.sha256(grid.to_bytes()).hexdigest(),
    )


@dataclass
class PhaseObservation:
    offset: int
    first_finished_row: Optional[int]
    first_finished_row_constant: Optional[bool]
    first_finished_row_value: Optional[int]
    first_constant_finished_row: Optional[int]
    behaviour: str  # "ca-identical", "periodic", "irregular" or "out-of-box"


@dataclass
class TrashObservation:
    gadget: tuple[int, ...]
    reliable_cells: int
    tape_period: Optional[int]
    time_period: Optional[int]


@dataclass
class GadgetReport:
    game_id: str
    spec: GadgetSpec
    box: tuple[int, int]
    embedded_total: int
    agreement: int
    unreliable_embedded: int
    first_disagreement: Optional[tuple[int, int]] = None
    out_of_phase: list[PhaseObservation] = field(default_factory=list)
    trash: list[TrashObservation] = field(default_factory=list)

    @property
    def all_match(self) -> bool:
        return self.agreement == self.embedded_total

    @property
    def trash_counterexamples(self) -> list[TrashObservation]:
        return [o for o in self.trash if o.reliable_cells and (o.tape_period is None or o.time_period is None)]


def game_id(game: ModularGame) -> str:
    text = repr((game.k, game.move_sets)).encode()
    return hashlib.sha256(text).hexdigest()[:12]


def _phase_slice(inv: PGrid, spec: GadgetSpec, offset: int):
    W, H = inv.box[:2]
    bits = np.zeros((W, H), dtype=bool)
    rel = np.zeros((W, H), dtype=bool)
    for a2 in range(H):
        idx = (slice(None), a2) + tuple(int(h == (a2 + offset) % spec.k) for h in range(spec.k))
        bits[:, a2] = inv.bits[idx]
        rel[:, a2] = inv.reliable[idx]
    return bits, rel


def _observe_phase(inv: PGrid, modular: PGrid, spec: GadgetSpec, offset: int) -> PhaseObservation:
    bits, rel = _phase_slice(inv, spec, offset)
    H = bits.shape[1]
    finished = [a2 for a2 in range(H) if (a2 + offset) % spec.base_k == 0]
    if not finished or not rel[:, finished[0]:].all():
        return PhaseObservation(offset, finished[0] if finished else None, None, None, None, "out-of-box")
    i = finished[0]
    constant = [r for r in finished if bits[:, r].all() or not bits[:, r].any()]
    row_const = i in constant
    value = int(bits[0, i]) if row_const else None
    span = H - i
    if np.array_equal(bits[:, i:], modular.bits[:, :span]):
        behaviour = "ca-identical"
    elif np.array_equal(bits[:, i + spec.base_k:], bits[:, i:H - spec.base_k]):
        behaviour = "periodic"
    else:
        behaviour = "irregular"
    return PhaseObservation(offset, i, row_const, value, constant[0] if constant else None, behaviour)


def _period(bits, rel, axis, limit, start):
    sl = tuple(slice(start, None) for _ in range(2))
    b, r = bits[sl], rel[sl]
    n = b.shape[axis]
    for p in range(1, limit + 1):
        if p >= n:
            break
        head = [slice(None)] * 2
        tail = [slice(None)] * 2
        head[axis] = slice(0, n - p)
        tail[axis] = slice(p, n)
        both = r[tuple(head)] & r[tuple(tail)]
        if not both.any():
            continue
        if np.array_equal(b[tuple(head)][both], b[tuple(tail)][both]):
            return p
    return None


def _observe_trash(inv: PGrid, spec: GadgetSpec) -> list[TrashObservation]:
    out = []
    for gadget in product(range(GADGET_BOUND), repeat=spec.k):
        if sum(gadget) != 2:
            continue
        bits = inv.bits[(slice(None), slice(None)) + gadget]
        rel = inv.reliable[(slice(None), slice(None)) + gadget]
        region = rel[spec.N:, spec.N:]
        out.append(
            TrashObservation(
                gadget,
                int(region.sum()),
                _period(bits, rel, 0, spec.N, spec.N),
                _period(bits, rel, 1, spec.N, spec.N),
            )
        )
    return out


def check_gadget(
    game: ModularGame, box2d: Sequence[int], threads: Optional[int] = None, observe: bool = True
) -> GadgetReport:
    """Solve the gadget game over tape x time x {0,1,2}^k* and compare embedded cells."""
    W, H = (int(b) for b in box2d)
    inv_game, spec = invariant_from_modular(game)
    modular = solve_modular(remodularize(game, spec.l), (W, H))
    inv = solve_invariant(inv_game, (W, H) + (GADGET_BOUND,) * spec.k, threads=threads)
    agree = unreliable = 0
    first = None
    for a2 in range(H):
        for a1 in range(W):
            e = embed((a1, a2), spec.k)
            if not inv.reliable[e]:
                unreliable += 1
                ok = False
            else:
                ok = bool(inv.bits[e] == modular.bits[a1, a2])
            agree += int(ok)
            if not ok and (first is None or (a1 + a2, a1) < (sum(first), first[0])):
                first = (a1, a2)
    report = GadgetReport(game_id(game), spec, (W, H), W * H, agree, unreliable, first)
    if observe:
        report.out_of_phase = [_observe_phase(inv, modular, spec, o) for o in range(1, spec.k)]
        report.trash = _observe_trash(inv, spec)
    return report


def random_modular_game(rng: random.Random, ks=(4, 5), max_moves=2, max_tape=2, max_time=3) -> ModularGame:
    """Small modular game: up to ``max_moves`` moves per residue with
    -max_tape <= m1 <= 0 and -max_time <= m2 <= -1."""
    k = rng.choice(ks)
    sets = []
    for _ in range(k):
        count = rng.randint(0, max_moves)
        sets.append({(-rng.randint(0, max_tape), -rng.randint(1, max_time)) for _ in range(count)})
    return ModularGame(k, tuple(tuple(s) for s in sets))


def solve_any(game: Union[InvariantGame, ModularGame], box: Sequence[int], threads=None) -> PGrid:
    if isinstance(game, ModularGame):
        return solve_modular(game, box)
    return solve_invariant(game, box, threads=threads)


def equiv_bounded(
    a: Union[InvariantGame, ModularGame], b: Union[InvariantGame, ModularGame], box: Sequence[int], threads=None
) -> Optional[tuple[int, ...]]:
    """First reliable position where the P-sets differ inside ``box``.

    None only means the games agree on this box.
    """
    if type(a) is not type(b):
        raise ShapeMismatch("cannot compare an invariant game with a modular game")
    d = 2 if isinstance(a, ModularGame) else a.d
    if isinstance(a, InvariantGame) and a.d != b.d:
        raise ShapeMismatch(f"heap counts differ: {a.d} vs {b.d}")
    if len(box) != d:
        raise ShapeMismatch(f"box has {len(box)} dimensions, games have {d}")
    try:
        return first_difference(solve_any(a, box, threads), solve_any(b, box, threads))
    except DimensionMismatch as exc:
        raise ShapeMismatch(str(exc)) from exc
