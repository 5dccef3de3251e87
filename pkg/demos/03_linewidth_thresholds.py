"""How much enhancement a given inverse linewidth can buy.

In the broadband limit the resonant enhancement depends only on the ratio
nu0/gamma0. The log estimate ((2/pi) ln(2r))^2 puts the break-even point
near r = 2.4 and a factor of four near r = 11.6; finite bandwidths only
lower the curve.
"""

import math

from tpaflip import (
    IntermediateLevel,
    LevelStructure,
    g_res_broadband_approx,
    g_res_broadband_derived,
    g_res_broadband_exact,
    resonant_enhancement,
    total_rate_at_flip,
)

print(f"{'nu0/gamma0':>10} {'estimate':>9} {'derived':>9} {'printed':>9} "
      f"{'b=8nu0':>8} {'b=6nu0':>8} {'b=4nu0':>8}")
for ratio in (2.4, 5.0, 11.6, 20.0, 50.0):
    row = [
        g_res_broadband_approx(ratio),
        g_res_broadband_derived(ratio),
        g_res_broadband_exact(ratio),
    ]
    for b in (8.0, 6.0, 4.0):
        row.append(resonant_enhancement(IntermediateLevel(1.0, 1.0 / ratio), b))
    print(f"{ratio:10.1f} " + " ".join(f"{v:8.3f}" for v in row))

print(f"""
break-even check of the log estimate:
  r = e^(pi/2)/2 = {math.exp(math.pi / 2) / 2:.4f}  ->  {g_res_broadband_approx(math.exp(math.pi / 2) / 2)!r}
  r = e^pi/2     = {math.exp(math.pi) / 2:.4f}  ->  {g_res_broadband_approx(math.exp(math.pi) / 2)!r}

The two broadband columns use different off-resonant terms:
(2/pi) ln(1+2r) versus (1/pi) ln(1+4r^2). They agree asymptotically; the
'derived' form is the one the finite-bandwidth curves actually approach.
""")

level = IntermediateLevel(1.0, 0.05)
for b in (8.0, 64.0, 512.0, 4096.0):
    struct = LevelStructure([level])
    g = (
        total_rate_at_flip(struct, b, 1.0).relative_rate
        / total_rate_at_flip(struct, b, 0.0).relative_rate
    )
    print(f"b = {b:6.0f} nu0:  g_res = {g:.6f}")
print(f"derived limit      : {g_res_broadband_derived(20.0):.6f}")
