"""Invariant and modular heap games, and their P-positions over bounded boxes.

A box is a tuple of exclusive upper bounds, one per heap.  Grids are
numpy boolean arrays of that shape (C order, so the last heap varies
fastest); ``True`` marks a P-position.
"""

from __future__ import annotations

import enum
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from .errors import (
    BoxMismatch,
    DimensionMismatch,
    DuplicateMove,
    InvalidModularMove,
    NonnegativeSumMove,
)

Move = tuple[int, ...]
Box = tuple[int, ...]


class Outcome(enum.Enum):
    P = "P"
    N = "N"


@dataclass(frozen=True)
class InvariantGame:
    d: int
    moves: tuple[Move, ...]

    def __post_init__(self):
        object.__setattr__(self, "moves", tuple(tuple(int(c) for c in m) for m in self.moves))


@dataclass(frozen=True)
class ModularGame:
    """Two-heap game (tape, time) whose move set depends on time mod k."""

    k: int
    move_sets: tuple[tuple[tuple[int, int], ...], ...]

    def __post_init__(self):
        sets = tuple(tuple(sorted({(int(a), int(b)) for a, b in s})) for s in self.move_sets)
        object.__setattr__(self, "move_sets", sets)

    def moves(self):
        for s in self.move_sets:
            yield from s


@dataclass(frozen=True, eq=False)
class PGrid:
    """P-position bits over a box plus a mask of cells whose value is exact.

    Cells outside ``reliable`` could not be settled because some legal move
    leaves the box; their bit is ``False`` and carries no information.
    """

    bits: np.ndarray
    reliable: np.ndarray = field(default=None)

    def __post_init__(self):
        bits = np.asarray(self.bits, dtype=bool)
        bits.setflags(write=False)
        object.__setattr__(self, "bits", bits)
        rel = np.ones(bits.shape, dtype=bool) if self.reliable is None else np.asarray(self.reliable, dtype=bool)
        if rel.shape != bits.shape:
            raise BoxMismatch(f"mask shape {rel.shape} != grid shape {bits.shape}")
        rel.setflags(write=False)
        object.__setattr__(self, "reliable", rel)

    @property
    def box(self) -> Box:
        return tuple(self.bits.shape)

    def __getitem__(self, pos) -> bool:
        return bool(self.bits[tuple(pos)])

    def __eq__(self, other):
        if not isinstance(other, PGrid):
            return NotImplemented
        return (
            self.box == other.box
            and np.array_equal(self.bits, other.bits)
            and np.array_equal(self.reliable, other.reliable)
        )

    @property
    def all_reliable(self) -> bool:
        return bool(self.reliable.all())

    def crop(self, box: Sequence[int]) -> "PGrid":
        sl = tuple(slice(0, b) for b in box)
        return PGrid(self.bits[sl].copy(), self.reliable[sl].copy())

    def to_bytes(self) -> bytes:
        """Packed bits, row-major with the last coordinate fastest."""
        return np.packbits(self.bits.ravel()).tobytes()

    @classmethod
    def from_bytes(cls, data: bytes, box: Sequence[int]) -> "PGrid":
        n = int(np.prod(box))
        flat = np.unpackbits(np.frombuffer(data, dtype=np.uint8), count=n).astype(bool)
        return cls(flat.reshape(tuple(box)))

    def p_positions(self):
        """Reliable P-positions in nondecreasing total, then lexicographic order."""
        pts = np.argwhere(self.bits & self.reliable)
        order = np.lexsort(tuple(pts[:, i] for i in range(pts.shape[1] - 1, -1, -1)) + (pts.sum(axis=1),))
        return [tuple(int(c) for c in p) for p in pts[order]]


def validate_invariant(game: InvariantGame) -> None:
    seen = set()
    for m in game.moves:
        if len(m) != game.d:
            raise DimensionMismatch(f"move {m} has length {len(m)}, expected {game.d}")
        if sum(m) >= 0:
            raise NonnegativeSumMove(m)
        if m in seen:
            raise DuplicateMove(m)
        seen.add(m)
    if game.d < 1:
        raise DimensionMismatch("a game needs at least one heap")


def validate_modular(game: ModularGame) -> None:
    if game.k < 1:
        raise InvalidModularMove(f"modulus must be positive, got {game.k}")
    if len(game.move_sets) != game.k:
        raise InvalidModularMove(f"expected {game.k} move sets, got {len(game.move_sets)}")
    for i, s in enumerate(game.move_sets):
        for m1, m2 in s:
            if m1 > 0 or m2 >= 0:
                raise InvalidModularMove(f"move {(m1, m2)} in set {i} needs m1 <= 0 and m2 < 0")


def _check_box(box, d) -> Box:
    box = tuple(int(b) for b in box)
    if len(box) != d:
        raise DimensionMismatch(f"box has {len(box)} dimensions, game has {d}")
    if any(b < 1 for b in box):
        raise DimensionMismatch(f"box bounds must be >= 1, got {box}")
    return box


def resolve_threads(threads: Optional[int] = None) -> int:
    if threads is None:
        threads = int(os.environ.get("NIMCELL_THREADS", "1"))
    return max(1, int(threads))


# cell states used by the level sweep
_N, _P, _UNKNOWN, _ILLEGAL = 0, 1, 2, 3
_CHUNK = 1 << 21


def solve_invariant(game: InvariantGame, box: Sequence[int], threads: Optional[int] = None) -> PGrid:
    """P-positions of an invariant game over ``box``, swept by total match count.

    The box is surrounded by a margin wide enough for every move, so each
    move is a fixed offset into one flat array.  Margin cells below zero in
    some coordinate make the move illegal; margin cells past an upper bound
    are unknown.  A cell is settled N as soon as one legal target is a
    settled P, settled P when every legal target is settled N, and unknown
    otherwise.
    """
    validate_invariant(game)
    box = _check_box(box, game.d)
    d = game.d
    moves = np.array(game.moves, dtype=np.int64).reshape(-1, d)
    lo = np.maximum(0, -moves.min(axis=0)) if len(moves) else np.zeros(d, dtype=np.int64)
    hi = np.maximum(0, moves.max(axis=0)) if len(moves) else np.zeros(d, dtype=np.int64)
    padded = tuple(int(l + b + h) for l, b, h in zip(lo, box, hi))

    state = np.full(padded, _UNKNOWN, dtype=np.int8)
    for axis in range(d):
        sl = [slice(None)] * d
        sl[axis] = slice(0, int(lo[axis]))
        state[tuple(sl)] = _ILLEGAL
    flat = state.reshape(-1)

    strides = np.array([int(np.prod(padded[i + 1:])) for i in range(d)], dtype=np.int64)
    offsets = moves @ strides
    coords = np.indices(box).reshape(d, -1)
    cells = ((coords + lo[:, None]) * strides[:, None]).sum(axis=0)
    totals = coords.sum(axis=0)
    order = np.argsort(totals, kind="stable")
    cells, totals = cells[order], totals[order]
    bounds = np.searchsorted(totals, np.arange(totals[-1] + 2))

    def settle(idx):
        if len(offsets) == 0:
            return np.full(len(idx), _P, dtype=np.int8)
        vals = flat[idx[:, None] + offsets[None, :]]
        out = np.where((vals == _UNKNOWN).any(axis=1), _UNKNOWN, _P).astype(np.int8)
        out[(vals == _P).any(axis=1)] = _N
        return out

    step = max(1, _CHUNK // max(1, len(offsets)))
    nthreads = resolve_threads(threads)
    pool = ThreadPoolExecutor(nthreads) if nthreads > 1 else None
    try:
        for level in range(len(bounds) - 1):
            idx = cells[bounds[level]:bounds[level + 1]]
            if len(idx) == 0:
                continue
            chunks = [idx[i:i + step] for i in range(0, len(idx), step)]
            if pool is not None and len(chunks) > 1:
                results = list(pool.map(settle, chunks))
            else:
                results = [settle(c) for c in chunks]
            for c, r in zip(chunks, results):
                flat[c] = r
    finally:
        if pool is not None:
            pool.shutdown()

    inner = state[tuple(slice(int(l), int(l + b)) for l, b in zip(lo, box))]
    return PGrid(inner == _P, inner != _UNKNOWN)


def solve_invariant_exact(
    game: InvariantGame, box: Sequence[int], threads: Optional[int] = None, max_cells: int = 50_000_000
) -> PGrid:
    """Like solve_invariant, but enlarges the box until every requested cell is settled.

    Every reachable position has fewer matches than the start, so padding a
    dimension up to the largest total in the box always suffices.  Stops
    early (returning a partially masked grid) once the padded box would
    exceed ``max_cells``.
    """
    validate_invariant(game)
    box = _check_box(box, game.d)
    grows = [any(m[i] > 0 for m in game.moves) for i in range(game.d)]
    ceiling = sum(b - 1 for b in box) + 1
    pad = 8
    while True:
        big = tuple(min(max(b, ceiling), b + pad) if g else b for b, g in zip(box, grows))
        grid = solve_invariant(game, big, threads).crop(box)
        if grid.all_reliable or big == tuple(max(b, ceiling) if g else b for b, g in zip(box, grows)):
            return grid
        pad *= 2
        nxt = tuple(min(max(b, ceiling), b + pad) if g else b for b, g in zip(box, grows))
        if int(np.prod(nxt)) > max_cells:
            return grid


def solve_modular(game: ModularGame, box: Sequence[int]) -> PGrid:
    """P-positions of a modular game over a (tape W, time H) box.

    Each time row is one Python int with bit ``a1`` set for P-positions, so a
    move (m1, m2) is a left shift of row ``a2 + m2`` by ``-m1``.
    """
    validate_modular(game)
    width, height = _check_box(box, 2)
    full = (1 << width) - 1
    rows: list[int] = []
    for a2 in range(height):
        hit = 0
        for m1, m2 in game.move_sets[a2 % game.k]:
            src = a2 + m2
            if src < 0:
                continue
            assert src < a2, "modular move must reach an earlier row"
            hit |= rows[src] << -m1
        rows.append(~hit & full)
    return PGrid(rows_to_array(rows, width).T.copy())


def rows_to_array(rows: Sequence[int], width: int) -> np.ndarray:
    """Stack int-encoded rows (bit i = column i) into a (len(rows), width) bool array."""
    nbytes = (width + 7) // 8
    buf = b"".join(r.to_bytes(nbytes, "little") for r in rows)
    out = np.unpackbits(np.frombuffer(buf, dtype=np.uint8), bitorder="little")
    return out.reshape(len(rows), nbytes * 8)[:, :width].astype(bool)


def outcome_invariant(game: InvariantGame, pos: Sequence[int]) -> Outcome:
    """Top-down memoized outcome of a single position, with an explicit stack."""
    validate_invariant(game)
    pos = tuple(int(c) for c in pos)
    if len(pos) != game.d:
        raise DimensionMismatch(f"position {pos} has {len(pos)} coordinates, game has {game.d}")
    if any(c < 0 for c in pos):
        raise DimensionMismatch(f"position {pos} has a negative coordinate")

    def options(a):
        for m in game.moves:
            b = tuple(x + y for x, y in zip(a, m))
            if min(b) >= 0:
                yield b

    memo: dict[Move, bool] = {}
    stack = [pos]
    while stack:
        a = stack[-1]
        if a in memo:
            stack.pop()
            continue
        pending = [b for b in options(a) if b not in memo]
        if pending:
            stack.extend(pending)
            continue
        memo[a] = not any(memo[b] for b in options(a))
        stack.pop()
    return Outcome.P if memo[pos] else Outcome.N


def first_difference(a: PGrid, b: PGrid) -> Optional[tuple[int, ...]]:
    """First reliable cell where the grids disagree, by total count then lexicographically."""
    if a.box != b.box:
        raise BoxMismatch(f"boxes differ: {a.box} vs {b.box}")
    diff = (a.bits != b.bits) & a.reliable & b.reliable
    pts = np.argwhere(diff)
    if len(pts) == 0:
        return None
    # argwhere is lexicographic, so argmin keeps the lexicographic tie-break
    best = pts[int(np.argmin(pts.sum(axis=1)))]
    return tuple(int(c) for c in best)
