"""Write the reference P-grids and CA rows as PBM files.

    python3 scripts/reproduce_grids.py --out grids
"""

import argparse
from dataclasses import dataclass
from pathlib import Path

from nimcell import XOR, InvariantGame, ca_rows, compile_rule, solve_invariant_exact, solve_modular
from nimcell.formats import write_pbm


@dataclass
class Config:
    out: Path = Path("grids")
    invariant_box: int = 25
    ca_size: int = 25
    modular_box: int = 50
    threads: int = 1


def run(cfg: Config) -> dict:
    cfg.out.mkdir(parents=True, exist_ok=True)
    n = cfg.invariant_box
    inv = solve_invariant_exact(InvariantGame(2, ((-1, -3), (-2, 1))), (n, n), threads=cfg.threads)
    rows = ca_rows(XOR, cfg.ca_size, cfg.ca_size)
    m = cfg.modular_box
    mod = solve_modular(compile_rule(XOR), (m, m))
    grids = {
        "invariant_two_move.pbm": inv.bits,
        "xor_ca.pbm": rows.to_array().T.astype(bool),
        "xor_modular.pbm": mod.bits,
    }
    counts = {}
    for name, bits in grids.items():
        (cfg.out / name).write_bytes(write_pbm(bits))
        counts[name] = int(bits.sum())
    return counts


def main(argv=None):
    p = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    p.add_argument("--out", type=Path, default=Config.out)
    p.add_argument("--threads", type=int, default=1)
    args = p.parse_args(argv)
    for name, count in run(Config(out=args.out, threads=args.threads)).items():
        print(f"{name}: {count} P-cells")


if __name__ == "__main__":
    main()
