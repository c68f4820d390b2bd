"""Gagliardo seminorms of trial functions by quadrature and Monte Carlo.

Shows the two routes agreeing within a few standard errors and the ratio
seminorm / profile norm staying bounded across profiles.
"""
import numpy as np

from fracorlicz.battery import random_profile
from fracorlicz.conditions import SmoothnessParams
from fracorlicz.norms import luxemburg_norm
from fracorlicz.seminorm import gagliardo_modular, make_trial, seminorm
from fracorlicz.young import PowerLog

A = PowerLog(2.0, 0.0, 2.0, 1.0)
rng = np.random.default_rng(1)
for params in (SmoothnessParams(1, 0.5), SmoothnessParams(2, 0.5)):
    print("n=%d s=%g" % (params.n, params.s))
    for i in range(3):
        f = random_profile(rng)
        u = make_trial("Radial", f, params)
        q = gagliardo_modular(A, params, u)
        m = gagliardo_modular(A, params, u, method="MonteCarlo", seed=i, N=200000)
        ratio = seminorm(A, params, u).value / luxemburg_norm(A, f).value
        print("  J quad %.5g  J mc %.5g +- %.2g  (z=%.2f)  seminorm/||f|| %.4f"
              % (q.value, m.value, m.stderr, (m.value - q.value) / m.stderr, ratio))
