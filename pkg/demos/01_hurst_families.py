"""
Hurst function families and assumption checking
================================================

Builds each built-in time-varying Hurst profile, prints its declared
regularity data, and runs the grid validation of the standing assumptions:
(A1) the profile stays strictly inside (1/2, 1), and (A2) it is Hoelder
continuous with the declared exponent and constant.
"""

import numpy as np

import mbmint as mb

families = [
    mb.constant_hurst(0.75),
    mb.affine_hurst(0.6, 0.2),
    mb.sin_hurst(0.7, 0.1),
    mb.logistic_hurst(0.55, 0.3, rate=8.0, midpoint=0.5),
]

print(f"{'family':42s} {'range':>16s} {'alpha':>6s} {'C':>8s} {'quotient':>9s} ok")
for h in families:
    rep = mb.validate_assumptions(h)
    rng = f"[{rep.h_min_measured:.4f}, {rep.h_max_measured:.4f}]"
    print(
        f"{h.name:42s} {rng:>16s} {h.alpha:6.2f} {h.holder_constant:8.4f} "
        f"{rep.holder_quotient:9.4f} {'yes' if rep.ok else 'NO'}"
    )

# A profile that dips below 1/2 is constructible but fails (A1): downstream
# consumers (rate exponents, convergence runs) refuse it unless forced.
bad = mb.affine_hurst(0.45, 0.1)
rep = mb.validate_assumptions(bad)
print(f"\n{bad.name}: ok={rep.ok}")
for msg in rep.messages:
    print("  -", msg)

# Values on a coarse grid, for a quick look at the shapes
ts = np.linspace(0.0, 1.0, 11)
print("\nt:      " + "  ".join(f"{t:5.2f}" for t in ts))
for h in families:
    print(f"{h.name.split('(')[0]:8s}" + "  ".join(f"{v:5.3f}" for v in h(ts)))
