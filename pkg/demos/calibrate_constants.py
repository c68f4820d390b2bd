"""Recompute the frozen constants of the modular and trial-function bounds.

Prints the maximum observed ratio for each setting next to the frozen value
in fracorlicz.seminorm; every maximum must stay at or below its constant.
Takes about two minutes.
"""
import time

from fracorlicz.calibration import calibrate_modular_bound, calibrate_trial_bound
from fracorlicz.seminorm import MODULAR_BOUND_CONSTANTS, TRIAL_BOUND_CONSTANTS


def main():
    t0 = time.time()
    for kind, frozen in TRIAL_BOUND_CONSTANTS.items():
        print("trial bound %-7s max %.6f  frozen %.3f  (%.0fs)" % (kind, calibrate_trial_bound(kind), frozen,
                                                                   time.time() - t0))
    for (n, s), frozen in MODULAR_BOUND_CONSTANTS.items():
        print("modular bound n=%d s=%g max %.6f  frozen %.3f  (%.0fs)" % (n, s, calibrate_modular_bound(n, s),
                                                                          frozen, time.time() - t0))


if __name__ == "__main__":
    main()
