#!/usr/bin/env python3
"""Render the affine C~2 join picture: the two candidate triangles.

The triangle over {a-root, g-root, g(b-root)} misses the unique limit
direction, so the join of a and g.b exists and its inversion set is the five
roots inside; the triangle over {b-root, a-root, b(g-root)} swallows the
limit direction and the join of a and b.g does not exist.
"""

import json
import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "src"))

from coxwo.coxsys import load_system
from coxwo.figures import render_figure
from coxwo.rootstore import RootStore
from coxwo.scalar import format_scalar
from coxwo.weakorder import decide_join, parse_word

ROOT = Path(__file__).resolve().parent.parent


def root_literal(sys, vec):
    return [format_scalar(c) for c in vec]


def main() -> int:
    out = Path(sys.argv[1]) if len(sys.argv) > 1 else ROOT / "join_c2_tilde.svg"
    system = load_system(json.loads((ROOT / "systems" / "c2_tilde.json").read_text()))
    store = RootStore(system)

    exists = decide_join(store, [parse_word(system, "a"), parse_word(system, "g.b")])
    missing = decide_join(store, [parse_word(system, "a"), parse_word(system, "b.g")])
    print(f"join(a, g.b): {exists.kind}, |N| = {len(exists.inversions)}")
    print(f"join(a, b.g): {missing.kind} ({missing.witness_kind})")

    blue = [system.simple_root("a"), system.simple_root("g"),
            system.reflect_simple(2, system.simple_root("b"))]
    red = [system.simple_root("b"), system.simple_root("a"),
           system.reflect_simple(1, system.simple_root("g"))]
    spec = {
        "store_depth": 7,
        "imaginary": True,
        "highlights": [
            {"roots": [root_literal(system, v) for v in blue], "color": "#3b6fd4",
             "label": "join exists"},
            {"roots": [root_literal(system, v) for v in red], "color": "#d45b3b",
             "label": "no join"},
        ],
    }
    out.write_text(render_figure(store, spec))
    print(f"wrote {out}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
