"""Seeded test batteries: Young functions, trial profiles and step functions."""
import numpy as np

from .norms import SampledFunction
from .young import Exponential, LInftyGauge, Power, PowerLog

__all__ = ["young_battery", "random_profile", "random_step_function"]


def young_battery():
    """Twelve Young functions: powers, power-logs, exponentials and the L-infinity gauge."""
    return [
        Power(1.2), Power(2.0), Power(5.0),
        PowerLog(2.0, 0.0, 2.0, 1.0),
        PowerLog(3.0, 0.0, 3.0, 1.0),
        PowerLog(1.5, -1.0, 4.0, 2.0),
        PowerLog(2.0, 1.0, 6.0, -1.0),
        PowerLog(1.0, -1.0, 1.0, 1.0),
        Exponential(-1.0, 1.0),
        Exponential(-2.0, 0.5),
        Exponential(-1.0, 2.0),
        LInftyGauge(),
    ]


def random_profile(rng, max_steps=6, length=(-1.0, 0.7), amplitude=(-1.0, 1.0), ratio=(-2.0, 0.0)):
    """Nonnegative non-increasing step profile on (0, R) with R = 10^U(length).

    Step drops are 10^U(ratio) and the overall scale 10^U(amplitude).
    """
    k = int(rng.integers(1, max_steps + 1))
    R = 10.0 ** rng.uniform(*length)
    inner = np.sort(rng.uniform(0.0, R, k - 1))
    grid = np.concatenate([[0.0], inner, [R]])
    vals = np.cumsum(10.0 ** rng.uniform(*ratio, k))[::-1] * 10.0 ** rng.uniform(*amplitude)
    grid = np.unique(grid)
    return SampledFunction.step(grid, vals[:len(grid) - 1])


def random_step_function(rng, max_steps=8, length=(0.1, 5.0), scale=(-2.0, 2.0)):
    """Signed step function on (0, R) with up to ``max_steps`` pieces."""
    k = int(rng.integers(1, max_steps + 1))
    R = rng.uniform(*length)
    grid = np.concatenate([[0.0], np.sort(rng.uniform(0.0, R, k - 1)), [R]])
    grid = np.unique(grid)
    vals = rng.normal(size=len(grid) - 1) * 10.0 ** rng.uniform(*scale)
    return SampledFunction.step(grid, vals)
