#!/usr/bin/env python3
"""Run every shipped config through the verifier and write reports to an output directory."""
import argparse
import sys
from pathlib import Path

from polybounds.config import load_config
from polybounds.errors import PolyboundsError
from polybounds.harness import run_experiment, write_outputs

ROOT = Path(__file__).resolve().parents[1]


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out", default=str(ROOT / "results"))
    ap.add_argument("configs", nargs="*", default=sorted(str(p) for p in (ROOT / "configs").glob("*.yaml")))
    args = ap.parse_args()
    worst = 0
    for path in args.configs:
        cfg = load_config(path)
        try:
            rep = run_experiment(cfg)
        except PolyboundsError as exc:
            print(f"{Path(path).stem:<20} error: {exc}")
            worst = max(worst, exc.exit_code)
            continue
        write_outputs(rep, cfg, args.out)
        verdicts = [r[f"{b}:verdict"] for r in rep.rows for b in rep.bound_ids]
        print(f"{Path(path).stem:<20} rows={len(rep.rows):<4} ok={verdicts.count('ok'):<5} "
              f"skip={verdicts.count('skip'):<4} violations={len(rep.violations)} exit={rep.exit_code()}")
        worst = max(worst, 1 if rep.violations else 0)
    return worst


if __name__ == "__main__":
    sys.exit(main())
