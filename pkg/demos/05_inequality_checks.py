"""
Numeric verification of the auxiliary Gaussian inequalities
===========================================================

Two bounds drive the error analysis behind the convergence rates:

1. the pointwise scaling bound phi(a/s^mu) <= 2 e^{-1/2} a^{-2} s^{2mu}
   phi(a) for 0 < |a| <= 1, whose constant is sharp (approached at |a| = 1,
   s^{2mu} = 1/2), and

2. boundedness of F(a^2) = int_0^1 s^lam phi(a/s^mu) ds / (a^{-2} phi(a))
   for |a| >= 1 and mu > 0, whose large-a limit is 1/mu by Laplace's method
   at the s = 1 endpoint.
"""

import numpy as np

import mbmint as mb

print("pointwise scaling bound, max of phi(a/s^mu) a^2 s^{-2mu} / phi(a):")
for mu in (0.6, 0.75, 0.9):
    rep = mb.verify_gaussian_scaling_bound(mu)
    print(f"  mu={mu:4.2f}: max ratio {rep.max_ratio:.7f} at "
          f"(a={rep.worst_a:+.2f}, s={rep.worst_s:.4f}) "
          f"vs bound {rep.bound:.7f} -> {'ok' if rep.passed else 'VIOLATION'}")
print(f"  (sharpness: the ratio at |a|=1, s = 2^(-1/(2 mu)) approaches the "
      f"bound {mb.GAUSSIAN_SCALING_BOUND:.7f})")

print("\npower-exponential integral ratio F(a^2):")
for lam, mu in ((-2.26, 0.75), (0.0, 1.0), (-3.25, 0.75)):
    rep = mb.verify_power_exponential_integral_bound(
        lam, mu, grid_a=(1.0, 2.0, 4.0, 8.0, 16.0)
    )
    pairs = ", ".join(f"F({a ** 2:g})={r:.4f}" for a, r in zip(rep.grid_a, rep.ratios))
    print(f"  lam={lam:+5.2f}, mu={mu:4.2f}: {pairs}")
    print(f"      large-a limit 1/mu = {rep.limit_analytic:.4f}; "
          f"ratio at a={max(rep.grid_a):g} is {rep.limit_empirical:.4f}")

print("\nleading constants and rate exponents for the demo profiles:")
call = mb.make_call_payoff(0.0)
for h in (mb.constant_hurst(0.75), mb.sin_hurst(0.7, 0.1)):
    ex = mb.rate_exponents(h)
    lead = mb.leading_constant(call, h)
    print(f"  {h.name}: L = {lead:.5f}, decay n^-{ex.leading_exponent:.2f}, "
          f"remainder n^-{ex.remainder_exponent:.2f}, "
          f"two-sided: {ex.lower_bound_applicable}")
