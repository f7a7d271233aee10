#!/usr/bin/env python3
"""Numeric probes of the convergence conjectures on the bundled systems.

For each connected eventually periodic word, compare the orbit of an interior
imaginary-domain point with the normalized inversion roots: both sequences
are conjectured to converge to one common limit direction.  Disconnected
words are included to show the expected failure mode (several clusters).
"""

import json
import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "src"))

from coxwo.coxsys import load_system
from coxwo.imagcone import build_K, probe_orbit_vs_inversions
from coxwo.infwords import accumulation_estimate, is_connected, parse_infword

ROOT = Path(__file__).resolve().parent.parent

CASES = [
    ("fig6", "|(a.b)", 1000),
    ("fig6", "|(a.b.g)", 1000),
    ("a2_tilde", "|(a.b.g)", 1000),
    ("universal3", "s|(t.r)", 1000),
    ("path5_two_inf", "|(s1.s2.s4.s5)", 800),
]


def main() -> int:
    for name, literal, n in CASES:
        system = load_system(json.loads((ROOT / "systems" / f"{name}.json").read_text()))
        word = parse_infword(system, literal)
        if not is_connected(system, word):
            clusters = accumulation_estimate(system, word, n, tol=1e-3)
            print(f"{name} {literal}: disconnected, {len(clusters)} accumulation clusters")
            continue
        dom = build_K(system)
        report = probe_orbit_vs_inversions(system, word.letters(), dom.interior_point, n)
        print(
            f"{name} {literal}: distance {report['final_distance']:.2e}, "
            f"orbit clusters {len(report['orbit_clusters'])}, "
            f"inversion clusters {len(report['inversion_clusters'])}"
        )
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
