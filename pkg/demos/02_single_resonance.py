"""Scanning the phase flip across a single resonance.

Moving the flip towards the resonance offset kills the resonant overlap A
and pumps up the off-resonant overlap B; for narrow enough lines the trade
is a net win and the absorption rate grows.
"""

import numpy as np

from tpaflip import (
    IntermediateLevel,
    LevelStructure,
    ScanGrid,
    find_peak,
    scan,
)

bandwidth = 4.0  # in units of the resonance offset nu0

for inverse in (20, 10, 3):
    levels = LevelStructure([IntermediateLevel(1.0, 1.0 / inverse)])
    result = scan(levels, bandwidth, ScanGrid(0.0, 2.0, 9))
    print(f"gamma = nu0/{inverse}")
    print(f"  {'delta_s':>8} {'A':>9} {'B':>9} {'rate':>9} {'g':>7}")
    for i, d in enumerate(result.delta_s):
        print(
            f"  {d:8.2f} {result.resonant[i, 0]:9.3f} {result.off_resonant[i, 0]:9.3f}"
            f" {result.relative_rate[i]:9.2f} {result.g[i]:7.3f}"
        )
    peak = find_peak(levels, bandwidth, (0.05, 1.95))
    print(f"  refined peak: g = {peak.value:.4f} at delta_s = {peak.delta_s:.5f}\n")

print("""
The flip at the resonance (delta_s = 1) turns the B column from its small
unflipped offset into the dominant contribution. At gamma = nu0/20 the peak
enhancement is ~3.7; at nu0/3 the line is too broad and every flip position
loses rate (g < 1). The delta_s = 0 and delta_s = 2 rows are the unflipped
state itself, so g = 1 there exactly.
""")
