"""Invariant heap games, modular games, one-sided cellular automata and the
bracket circuits that connect them."""

from .cellular import SHIFT, XOR, CARows, CARule, all_rules, ca_rows, find_pattern
from .circuits import (
    Bracket,
    GateList,
    GateRef,
    Var,
    bracket_from_rule,
    eval_bracket,
    eval_gates,
    gates_from_expr,
    parse_bracket,
    rule_from_bracket,
)
from .games import (
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
from .reductions import (
    GadgetSpec,
    augment_101,
    embed,
    invariant_from_modular,
    modular_from_gates,
    project,
    remodularize,
)
from .verify import (
    check_emulation,
    check_gadget,
    compile_rule,
    equiv_bounded,
    extract_ca_from_modular,
    random_modular_game,
)

__version__ = "0.1.0"
