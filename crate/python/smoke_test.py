"""Smoke test for the rph extension module.

Build the module and run this file with:

    cargo build --release -p rph-py
    cp target/release/librph.so python/rph.so
    python3 python/smoke_test.py
"""

import math
import sys

import rph


def main() -> None:
    t = rph.Tiling.generate(["LLLLLLLLLL"], depth=4, master_seed=0)
    assert t.vertex_count > 1000, t.vertex_count

    counts = t.face_counts()
    assert counts["r"] > 0 and counts["p"] > 0 and counts["h"] > 0, counts

    pr, hr = t.ratios()
    assert abs(pr - 2.0) < 0.3, pr
    assert abs(hr - 1 / 1.618033988749895) < 0.2, hr

    d = t.density()
    assert abs(d["v"] - 0.94046) < 0.05, d
    assert abs(d["area_closure"] - 1.0) < 0.05, d

    area = t.window_area(grid_step=0.06)
    assert abs(area - 2.6287) < 0.4, area

    assert t.symmetry() == "C10"

    # round trip through JSON
    back = rph.Tiling.from_json(t.to_json())
    assert back.vertex_count == t.vertex_count

    # flips exist and Monte Carlo preserves tile counts
    small = rph.Tiling.generate(depth=3)
    assert small.flip_count() > 0
    moved, steps = small.monte_carlo(200, seed=1)
    assert steps == 200
    assert moved.face_counts() == small.face_counts()

    assert rph.classify_wheel("LLLLLLLLLL") == "C10"
    census = rph.wheel_census()
    assert census == {"C1": 840, "D1": 150, "C2": 30, "D5": 2, "C10": 2}, census

    print("smoke test passed")


if __name__ == "__main__":
    sys.exit(main())
