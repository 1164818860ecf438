"""Bracket (NOR) expressions over tape cells.

``[c1 ... cr] = 1 - max(c1, ..., cr)`` and ``[ ] = 1``.  A leaf ``Var(j)``
stands for the cell j places to the left of the one being computed, which
is also bit j of a rule's table index.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Mapping, Union

from .cellular import CARule
from .errors import InvalidRule, LeafAtRoot, ShiftOutOfRange, UnboundShift


@dataclass(frozen=True)
class Var:
    shift: int

    def __post_init__(self):
        if self.shift < 0:
            raise ValueError(f"shift must be >= 0, got {self.shift}")


@dataclass(frozen=True)
class Bracket:
    children: tuple["Expr", ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "children", tuple(self.children))


Expr = Union[Var, Bracket]


@dataclass(frozen=True)
class GateRef:
    """Reference to an earlier gate by its 0-based position in a GateList."""

    index: int


@dataclass(frozen=True)
class GateList:
    """Gates in evaluation order; each gate is a tuple of GateRef/Var children.
    The last gate is the output."""

    gates: tuple[tuple[Union[GateRef, Var], ...], ...]

    def __post_init__(self):
        gates = tuple(tuple(g) for g in self.gates)
        object.__setattr__(self, "gates", gates)
        if not gates:
            raise ValueError("a gate list needs at least one gate")
        for j, gate in enumerate(gates):
            for c in gate:
                if isinstance(c, GateRef) and not 0 <= c.index < j:
                    raise ValueError(f"gate {j} references gate {c.index}, which is not earlier")

    @property
    def K(self) -> int:
        return len(self.gates)

    def max_shift(self) -> int:
        return max((c.shift for g in self.gates for c in g if isinstance(c, Var)), default=-1)


def eval_bracket(expr: Expr, assignment: Mapping[int, int]) -> int:
    if isinstance(expr, Var):
        if expr.shift not in assignment:
            raise UnboundShift(f"shift {expr.shift} has no value")
        return assignment[expr.shift] & 1
    return 1 - max((eval_bracket(c, assignment) for c in expr.children), default=0)


def eval_gates(gates: GateList, assignment: Mapping[int, int]) -> int:
    values: list[int] = []
    for gate in gates.gates:
        inputs = []
        for c in gate:
            if isinstance(c, GateRef):
                inputs.append(values[c.index])
            elif c.shift in assignment:
                inputs.append(assignment[c.shift] & 1)
            else:
                raise UnboundShift(f"shift {c.shift} has no value")
        values.append(1 - max(inputs, default=0))
    return values[-1]


def gates_from_expr(expr: Expr) -> GateList:
    """Flatten a tree into gates, deepest level first, left to right within a level.

    For ``[[xy][[x][y]]]`` this yields [x], [y], [xy], [[x][y]], then the
    output.  Bracket nodes are keyed by object identity, so equal subtrees at
    different places become separate gates while a node object reused under
    several parents becomes one gate (placed at its greatest depth).
    """
    if not isinstance(expr, Bracket):
        raise LeafAtRoot("the root of a gate list must be a bracket, not a bare cell")
    depth: dict[int, int] = {}
    seen_at: dict[int, int] = {}
    nodes: dict[int, Bracket] = {}
    queue = deque([(expr, 0)])
    counter = 0
    while queue:
        node, dep = queue.popleft()
        key = id(node)
        nodes[key] = node
        if key not in seen_at:
            seen_at[key] = counter
            counter += 1
        if dep > depth.get(key, -1):
            depth[key] = dep
            for c in node.children:
                if isinstance(c, Bracket):
                    queue.append((c, dep + 1))
    order = sorted(nodes, key=lambda key: (-depth[key], seen_at[key]))
    # the root is unique at depth 0 and sorts last
    position = {key: j for j, key in enumerate(order)}
    gates = []
    for key in order:
        gates.append(
            tuple(GateRef(position[id(c)]) if isinstance(c, Bracket) else c for c in nodes[key].children)
        )
    return GateList(tuple(gates))


def bracket_from_rule(rule: CARule) -> Expr:
    """Bracket expression with the same truth table as ``rule``.

    f is the negation of the OR of the minterms where f is 0, which is a single
    bracket over those minterms.  A minterm is ``[c_{n-1} ... c_0]`` with
    ``c = [Var]`` where the cell must be 1 and the bare Var where it must be 0.
    The always-zero rule is ``[[ ]]``.  No minimisation is attempted.
    """
    if not isinstance(rule, CARule):
        raise InvalidRule(f"expected a CARule, got {type(rule).__name__}")
    if not any(rule.table):
        return Bracket((Bracket(()),))
    minterms = []
    for v, bit in enumerate(rule.table):
        if bit:
            continue
        lits = []
        for j in range(rule.n - 1, -1, -1):
            lits.append(Bracket((Var(j),)) if (v >> j) & 1 else Var(j))
        minterms.append(Bracket(tuple(lits)))
    return Bracket(tuple(minterms))


def shifts(expr: Expr) -> set[int]:
    if isinstance(expr, Var):
        return {expr.shift}
    out: set[int] = set()
    for c in expr.children:
        out |= shifts(c)
    return out


def rule_from_bracket(expr: Expr, n: int) -> CARule:
    bad = [s for s in shifts(expr) if s >= n]
    if bad:
        raise ShiftOutOfRange(f"shift {max(bad)} needs arity > {n}")
    table = tuple(eval_bracket(expr, {j: (v >> j) & 1 for j in range(n)}) for v in range(1 << n))
    if table[0] != 0:
        raise InvalidRule("expression is 1 on the all-zero neighbourhood")
    return CARule(n, table)


def expr_to_json(expr: Expr):
    """Nested lists for brackets, bare ints for cell shifts."""
    if isinstance(expr, Var):
        return expr.shift
    return [expr_to_json(c) for c in expr.children]


def expr_from_json(obj) -> Expr:
    if isinstance(obj, bool) or not isinstance(obj, (int, list)):
        raise ValueError(f"expected a list or a shift, got {obj!r}")
    if isinstance(obj, int):
        return Var(obj)
    return Bracket(tuple(expr_from_json(c) for c in obj))


def parse_bracket(text: str, names: Mapping[str, int]) -> Expr:
    """Parse ``[[xy][[x][y]]]``-style text; single-letter names map to shifts."""
    pos = 0

    def node():
        nonlocal pos
        pos += 1
        kids = []
        while True:
            while pos < len(text) and text[pos].isspace():
                pos += 1
            if pos >= len(text):
                raise ValueError("unterminated bracket")
            ch = text[pos]
            if ch == "]":
                pos += 1
                return Bracket(tuple(kids))
            if ch == "[":
                kids.append(node())
            elif ch in names:
                kids.append(Var(names[ch]))
                pos += 1
            else:
                raise ValueError(f"unexpected {ch!r} at {pos}")

    text = text.strip()
    if not text.startswith("["):
        raise ValueError("expression must start with '['")
    expr = node()
    if text[pos:].strip():
        raise ValueError(f"trailing text {text[pos:]!r}")
    return expr


def format_bracket(expr: Expr, names: Mapping[int, str]) -> str:
    if isinstance(expr, Var):
        return names.get(expr.shift, f"x{expr.shift}")
    return "[" + "".join(format_bracket(c, names) for c in expr.children) + "]"
