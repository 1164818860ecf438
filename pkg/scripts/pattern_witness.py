"""For every rule, compare the 101-checking game pair with a direct CA search.

The two games differ inside the box exactly when the automaton shows 101
early enough; the script prints one line per rule and exits 1 on any
disagreement.

    python3 scripts/pattern_witness.py --n 2
    python3 scripts/pattern_witness.py --n 3 --sample 20 --seed 0
"""

import argparse
import random
import sys
from dataclasses import dataclass
from typing import Optional

from nimcell import CARule, all_rules, augment_101, bracket_from_rule, equiv_bounded, find_pattern, gates_from_expr


@dataclass
class Config:
    n: int = 2
    T: int = 10
    W: int = 30
    sample: Optional[int] = None
    seed: int = 0


def rules_for(cfg: Config):
    if cfg.sample is None:
        return list(all_rules(cfg.n))
    rng = random.Random(cfg.seed)
    size = 1 << cfg.n
    return [CARule(cfg.n, (0,) + tuple(rng.randint(0, 1) for _ in range(size - 1))) for _ in range(cfg.sample)]


def run(cfg: Config) -> int:
    bad = 0
    for rule in rules_for(cfg):
        g1, g2 = augment_101(gates_from_expr(bracket_from_rule(rule)))
        diff = equiv_bounded(g1, g2, (cfg.W, g1.k * cfg.T))
        hit = find_pattern(rule, "101", cfg.T, cfg.W)
        ok = (diff is None) == (hit is None)
        if hit is not None and diff is not None:
            ok = diff == (hit[1] + 2, g1.k * hit[0] + 3)
        bad += not ok
        table = "".join(map(str, rule.table))
        print(f"{table:>{1 << cfg.n}}  k={g1.k:<3} ca={hit}  games={diff}  {'ok' if ok else 'MISMATCH'}")
    return bad


def main(argv=None):
    p = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    p.add_argument("--n", type=int, default=2)
    p.add_argument("--T", type=int, default=10)
    p.add_argument("--W", type=int, default=30)
    p.add_argument("--sample", type=int, help="random tables instead of all of them")
    p.add_argument("--seed", type=int, default=0)
    args = p.parse_args(argv)
    sys.exit(1 if run(Config(args.n, args.T, args.W, args.sample, args.seed)) else 0)


if __name__ == "__main__":
    main()
