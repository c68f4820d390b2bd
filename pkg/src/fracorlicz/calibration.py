"""Calibration batteries for the frozen constants of the existence bounds.

Each constant is the maximum observed ratio over a seeded battery; the
acceptance runs use fresh seeds and allow 5% slack over it.
"""
import numpy as np

from .battery import random_profile
from .conditions import SmoothnessParams
from .norms import luxemburg_norm
from .seminorm import check_modular_bound, make_trial, seminorm
from .young import Exponential, Power, PowerLog

__all__ = [
    "MODULAR_BOUND_YOUNG",
    "TRIAL_BOUND_SETUP",
    "modular_bound_pairs",
    "calibrate_modular_bound",
    "calibrate_trial_bound",
]

CALIBRATION_SEED = 20240

# Young functions per (n, s) for the modular bound; each satisfies the tail gate
MODULAR_BOUND_YOUNG = {
    (1, 0.5): [Power(4.0), PowerLog(3.0, 0.0, 3.0, 1.0), Exponential(-1.0, 1.0), Power(2.5), Power(8.0)],
    (2, 0.5): [Power(6.0), PowerLog(5.0, 0.0, 5.0, 1.0), Exponential(-1.0, 1.0)],
}

# (params, Young function) per trial kind for the seminorm bound
TRIAL_BOUND_SETUP = {
    "Radial": ((1, 0.5), Power(2.0)),
    "Odd": ((1, 1.5), Power(2.0)),
}


def _point(d, n):
    return d if n == 1 else np.column_stack([d] + [np.zeros_like(d)] * (n - 1))


def modular_bound_pairs(rng, n, L, random_pairs=50, radial_pairs=0):
    """Pairs for the modular bound: uniform in [-1.5L, 1.5L]^n, optionally
    with pairs (0, d e1) on a geometric range of d."""
    shape = (random_pairs,) if n == 1 else (random_pairs, n)
    x = rng.uniform(-1.5 * L, 1.5 * L, shape)
    y = rng.uniform(-1.5 * L, 1.5 * L, shape)
    if radial_pairs:
        d = np.geomspace(1e-4 * L, 3.0 * L, radial_pairs)
        x = np.concatenate([x, _point(np.zeros_like(d), n)])
        y = np.concatenate([y, _point(d, n)])
    return x, y


def calibrate_modular_bound(n, s, per_young=12, seed=CALIBRATION_SEED):
    """Max of |u(x)-u(y)| / (|x-y|^s B^-1(J/|x-y|^n)) over Radial trials.

    Profile amplitudes span 10^-2..10^1.5 because the ratio is dilation
    invariant but not amplitude invariant for non-power Young functions.
    """
    params = SmoothnessParams(n, s)
    rng = np.random.default_rng(seed)
    worst = 0.0
    for A in MODULAR_BOUND_YOUNG[(n, s)]:
        for _ in range(per_young):
            u = make_trial("Radial", random_profile(rng, amplitude=(-2.0, 1.5)), params)
            x, y = modular_bound_pairs(rng, n, u.support_radius, random_pairs=200, radial_pairs=120)
            worst = max(worst, check_modular_bound(A, params, u, x, y, c=1.0)["max_ratio"])
    return worst


def calibrate_trial_bound(kind, profiles=40, seed=CALIBRATION_SEED):
    """Max of seminorm(u_f) / ||f||_A over seeded random profiles."""
    (n, s), A = TRIAL_BOUND_SETUP[kind]
    params = SmoothnessParams(n, s)
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(profiles):
        f = random_profile(rng)
        u = make_trial(kind, f, params)
        worst = max(worst, seminorm(A, params, u).value / luxemburg_norm(A, f).value)
    return worst
