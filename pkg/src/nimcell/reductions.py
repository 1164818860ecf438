"""Compile circuits to modular games, and modular games to invariant games."""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Optional, Sequence

from .circuits import GateList, GateRef, Var
from .errors import DimensionMismatch, GadgetTooSmall, LayoutViolation
from .games import InvariantGame, ModularGame, validate_invariant, validate_modular


@dataclass(frozen=True)
class LayoutRecord:
    level: int
    child: object  # GateRef or Var
    move: tuple[int, int]


@dataclass(frozen=True)
class LayoutPlan:
    """Gate j (0-based j < K-1) sits at level j+1; the output sits at level 0,
    one full period above the rows it reads."""

    k: int
    levels: tuple[int, ...]
    records: tuple[LayoutRecord, ...]


def layout(gates: GateList) -> LayoutPlan:
    K = gates.K
    levels = tuple(list(range(1, K)) + [0])
    records = []
    for j, gate in enumerate(gates.gates):
        # height above the CA row the gate's block starts from
        height = K if j == K - 1 else j + 1
        for c in gate:
            if isinstance(c, GateRef):
                move = (0, -(height - (c.index + 1)))
            else:
                move = (-c.shift, -height)
            if move[0] > 0 or move[1] >= 0:
                raise LayoutViolation(f"gate {j} child {c} gives move {move}")
            records.append(LayoutRecord(levels[j], c, move))
    return LayoutPlan(K, levels, tuple(records))


def modular_from_gates(gates: GateList) -> ModularGame:
    plan = layout(gates)
    sets: list[set] = [set() for _ in range(plan.k)]
    for r in plan.records:
        sets[r.level].add(r.move)
    return ModularGame(plan.k, tuple(tuple(s) for s in sets))


def augment_101(gates: GateList) -> tuple[ModularGame, ModularGame]:
    """Games G' and G'' that differ only in the cell checking for cells 101.

    Three boxes run before the circuit: b1 = [cell 0], b2 = [cell 2], and b3.
    In G', b3 = [cell 1, b1, b2], which is 1 exactly when cells 2,1,0 read
    1,0,1.  In G'', b3 = [b2, cell 2], which is always 0.  Nothing reads b3.
    """
    shifted = tuple(
        tuple(GateRef(c.index + 3) if isinstance(c, GateRef) else c for c in g) for g in gates.gates
    )
    b1 = (Var(0),)
    b2 = (Var(2),)
    checking = (Var(1), GateRef(0), GateRef(1))
    dummy = (GateRef(1), Var(2))
    g1 = modular_from_gates(GateList((b1, b2, checking) + shifted))
    g2 = modular_from_gates(GateList((b1, b2, dummy) + shifted))
    return g1, g2


def remodularize(game: ModularGame, l: int) -> ModularGame:
    if l < 1:
        raise ValueError(f"multiplier must be >= 1, got {l}")
    return ModularGame(game.k * l, game.move_sets * l)


@dataclass(frozen=True)
class GadgetSpec:
    k: int       # gadget heaps after remodularization
    l: int       # multiplier applied to the original modulus
    N: int       # trash moves remove fewer than N from each main heap
    base_k: int  # modulus of the modular game that was compiled

    @property
    def d(self) -> int:
        return 2 + self.k


def choose_multiplier(game: ModularGame) -> int:
    """Smallest l with l*k above every time decrement and l*k >= 4."""
    reach = max((-m2 for _, m2 in game.moves()), default=0)
    l = 1
    while l * game.k <= reach or l * game.k < 4:
        l += 1
    return l


def trash_moves(k: int, N: int):
    """Moves taking two gadget matches to two other gadget heaps while
    removing (p, q) with 0 <= p, q < N and p + q >= 1 from tape and time."""
    sources = [{i: -1, j: -1} for i, j in combinations(range(k), 2)]
    sources += [{i: -2} for i in range(k)]
    steps = [(p, q) for p in range(N) for q in range(N) if p + q >= 1]
    for src in sources:
        free = [h for h in range(k) if h not in src]
        for i2, j2 in combinations(free, 2):
            gadget = [0] * k
            for h, v in src.items():
                gadget[h] = v
            gadget[i2] = gadget[j2] = 1
            for p, q in steps:
                yield (-p, -q, *gadget)


def invariant_from_modular(game: ModularGame, l: Optional[int] = None) -> tuple[InvariantGame, GadgetSpec]:
    """Invariant game on heaps (tape, time, g_0 .. g_{k*-1}) emulating ``game``.

    A move (m1, m2) of M_i becomes (m1, m2) on the main heaps with one match
    carried from gadget heap i to heap (i + m2) mod k*.  ``l`` defaults to
    choose_multiplier(game).
    """
    validate_modular(game)
    if l is None:
        l = choose_multiplier(game)
    big = remodularize(game, l)
    ks = big.k
    if ks < 4:
        raise GadgetTooSmall(f"gadget of {ks} heaps leaves no room for trash moves; need >= 4")
    moves = []
    for i, s in enumerate(big.move_sets):
        for m1, m2 in s:
            if m2 % ks == 0:
                raise GadgetTooSmall(f"move {(m1, m2)} keeps the time residue mod {ks}; use a larger l")
            gadget = [0] * ks
            gadget[i] -= 1
            gadget[(i + m2) % ks] += 1
            moves.append((m1, m2, *gadget))
    N = 1 + max((max(-m1, -m2) for m1, m2 in big.moves()), default=0)
    moves.extend(trash_moves(ks, N))
    inv = InvariantGame(2 + ks, tuple(sorted(moves)))
    validate_invariant(inv)
    return inv, GadgetSpec(ks, l, N, game.k)


def embed(pos: Sequence[int], k: int) -> tuple[int, ...]:
    a1, a2 = pos
    if a1 < 0 or a2 < 0:
        raise ValueError(f"position {tuple(pos)} has a negative coordinate")
    gadget = [0] * k
    gadget[a2 % k] = 1
    return (a1, a2, *gadget)


def project(pos: Sequence[int], k: int) -> Optional[tuple[int, int]]:
    """Inverse of embed; None unless the gadget holds one in-phase match."""
    if len(pos) != 2 + k:
        raise DimensionMismatch(f"position has {len(pos)} coordinates, expected {2 + k}")
    a1, a2, *gadget = pos
    if sum(gadget) != 1 or gadget[a2 % k] != 1:
        return None
    return a1, a2
