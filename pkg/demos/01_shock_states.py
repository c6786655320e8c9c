"""Build a backward shock and inspect its jump data.

The downstream state and the speed follow from the jump relations once
the upstream state and the downstream volume are fixed; the construction
is admissible by design on this branch (velocity drops, characteristic
speeds straddle the shock speed).
"""

import numpy as np

from viscoshock import (PressureLaw, build_shock, check_lax, lambda1,
                        rh_residuals, riemann_shock_eval)

law = PressureLaw(gamma=2.0)
shock = build_shock(v_minus=1.2, v_plus=1.0, u_minus=0.0, law=law)

print("end states     ", (shock.v_minus, shock.u_minus), "->",
      (shock.v_plus, round(shock.u_plus, 6)))
print("speed          ", shock.s)
print("strength       ", shock.delta)

r1, r2 = rh_residuals(shock, law)
print("jump residuals ", r1, r2)

rep = check_lax(shock, law)
print("char. speeds   ", rep.lambda_plus, "<", rep.s, "<", rep.lambda_minus)
print("admissible     ", rep.satisfied)

# the piecewise solution is constant along rays; sample a few
for t in (0.5, 1.0, 2.0):
    x = np.array([-3.0, shock.s * t, 1.0])
    v, u = riemann_shock_eval(shock, x, t)
    print(f"t={t}: v={v}")

# weak shocks travel at the upstream characteristic speed
for delta in (0.1, 0.01, 0.001):
    weak = build_shock(1.2, 1.2 - delta, 0.0, law)
    print(f"delta={delta:7.3f}  s={weak.s:.6f}  "
          f"lambda1(v-)={float(lambda1(1.2, law)):.6f}")
