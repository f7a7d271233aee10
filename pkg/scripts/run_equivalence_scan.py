#!/usr/bin/env python3
"""Batch the finite-set equivalence scan over the bundled rank <= 3 systems.

Every subset of the depth-window must classify identically under peeling and
under the geometric definitions; any reported violation would be a genuine
counterexample to the finite-set equivalences, so zero is the expected count.
"""

import json
import sys
import time
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "src"))

from coxwo.coxsys import load_system
from coxwo.scan import scan_system

ROOT = Path(__file__).resolve().parent.parent
DEFAULT = ["a2", "dihedral_inf", "a2_tilde", "c2_tilde"]


def main() -> int:
    names = sys.argv[1:] or DEFAULT
    total = 0
    for name in names:
        system = load_system(json.loads((ROOT / "systems" / f"{name}.json").read_text()))
        if system.rank > 3:
            print(f"{name}: skipped (rank {system.rank})")
            continue
        t0 = time.time()
        report = scan_system(system, name=name, max_size=4, window_depth=4,
                             join_samples=25, seed=7)
        eq = report["equivalence"]
        total += len(eq["violations"])
        print(
            f"{name}: {eq['subsets_checked']} subsets, {eq['peel_successes']} inversion sets, "
            f"{len(eq['violations'])} violations, joins {report['join_samples']['verdicts']}, "
            f"{time.time() - t0:.1f}s"
        )
    print(f"total violations: {total}")
    return 0 if total == 0 else 1


if __name__ == "__main__":
    raise SystemExit(main())
