"""Optimal moduli of continuity for a few Young functions.

For A = t^p the modulus is a power r^(s - n/p); logarithmic and exponential
Young functions produce logarithmic corrections, visible in the local slope.
"""
import numpy as np

from fracorlicz.conditions import SmoothnessParams
from fracorlicz.errors import NoEmbeddingError
from fracorlicz.modulus import sigma
from fracorlicz.young import Exponential, Power, PowerLog

r = np.logspace(-8, 0, 5)
for params in (SmoothnessParams(2, 0.5), SmoothnessParams(3, 1.5)):
    print("n=%d s=%g" % (params.n, params.s))
    for A in (Power(2.0), Power(6.0), PowerLog(4.0, 0.0, 4.0, 2.0), Exponential(-1.0, 1.0)):
        try:
            sg = sigma(A, params)
        except NoEmbeddingError as exc:
            print("  %-55r no embedding (%s)" % (A, exc))
            continue
        v = sg(r)
        slope = np.diff(np.log(v)) / np.diff(np.log(r))
        print("  %-55r %-16s sigma(1e-8)=%.3e  local slopes %s" % (A, sg.regime, v[0], np.round(slope, 3)))
