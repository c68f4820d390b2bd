"""Young functions: evaluation, generalized inverse, Legendre conjugate,
Matuszewska-Orlicz indices, axiom checks and domination tests.

Every Young function here is vectorized: ``A(t)`` accepts scalars or arrays
and returns floats, with ``np.inf`` standing in for the extended value +inf.
"""
import csv
import json
import math
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np
from scipy.interpolate import PchipInterpolator

__all__ = [
    "Asymptotic",
    "YoungFunction",
    "Power",
    "PowerLog",
    "Exponential",
    "LInftyGauge",
    "NumericConjugate",
    "TabulatedMonotone",
    "IndexEstimate",
    "AxiomReport",
    "DominationReport",
    "evaluate",
    "inverse",
    "conjugate",
    "legendre",
    "matuszewska_indices",
    "check_axioms",
    "dominates",
    "equivalent",
    "young_from_dict",
]

# Natural-log range in which exp() is safe in double precision.
_U_MIN, _U_MAX = -744.0, 709.0
# Coarse bracketing grid for generalized inverses, one node per e-fold.
_BRACKET_U = np.arange(-690.0, 691.0, 1.0)


def _as_array(t):
    t = np.asarray(t, dtype=float)
    if np.any(t < 0):
        raise ValueError("Young functions are defined on [0, inf); got a negative argument")
    return t


@dataclass(frozen=True)
class Asymptotic:
    """Size of a function near one end of (0, inf).

    ``kind="powerlog"`` means t**power * L**logpower, where L = log(1/t) near
    zero and L = log(t) near infinity.  The other kinds are ``"tiny"`` (smaller
    than every power), ``"zero"`` (identically 0), ``"huge"`` (larger than every
    power) and ``"infinite"`` (identically +inf).
    """

    kind: str
    power: float = 0.0
    logpower: float = 0.0

    def conjugate(self, end):
        """Asymptotics of the Young conjugate, derived by exponent arithmetic."""
        if self.kind == "powerlog":
            p, a = self.power, self.logpower
            if p > 1 + 1e-12:
                return Asymptotic("powerlog", p / (p - 1), -a / (p - 1))
            if end == "zero":
                return Asymptotic("zero") if a == 0 else Asymptotic("tiny")
            return Asymptotic("infinite") if a == 0 else Asymptotic("huge")
        if self.kind == "zero":
            return Asymptotic("powerlog", 1.0, 0.0)
        if self.kind == "infinite":
            return Asymptotic("powerlog", 1.0, 0.0)
        raise ValueError("conjugate asymptotics of %r need explicit log data" % self.kind)


class YoungFunction:
    """Base class.  Subclasses implement ``_eval`` and ``_density``."""

    kind = "abstract"

    # -- evaluation ---------------------------------------------------------
    def __call__(self, t):
        t = _as_array(t)
        with np.errstate(all="ignore"):
            out = np.asarray(self._eval(t), dtype=float)
        out = np.where(t == 0, 0.0, out)
        return out if out.ndim else float(out)

    def density(self, t):
        """Non-decreasing left-continuous density a with A(t) = int_0^t a."""
        t = _as_array(t)
        with np.errstate(all="ignore"):
            out = np.asarray(self._density(t), dtype=float)
        return out if out.ndim else float(out)

    def log_eval(self, t):
        """log A(t), overridden where the plain value under/overflows."""
        with np.errstate(divide="ignore"):
            return np.log(self(t))

    @property
    def finiteness_threshold(self):
        """t_A = sup{t : A(t) < inf}."""
        return math.inf

    @property
    def kinks(self):
        """Points where the density may jump (used to split quadrature panels)."""
        return np.empty(0)

    # -- inverse ------------------------------------------------------------
    @cached_property
    def _bracket_values(self):
        return np.asarray(self(np.exp(_BRACKET_U)), dtype=float)

    def inverse(self, y):
        """Generalized inverse sup{t >= 0 : A(t) <= y}."""
        y = np.asarray(y, dtype=float)
        if np.any(y < 0):
            raise ValueError("inverse is defined for y >= 0")
        return _generic_inverse(self, y)

    # -- conjugation --------------------------------------------------------
    def conjugate(self):
        return NumericConjugate(self)

    # -- metadata -----------------------------------------------------------
    def asymptotics(self, end):
        """Asymptotic class near ``end`` ('zero' or 'infinity'), or None if unknown."""
        return None

    def conjugate_asymptotics(self, end):
        a = self.asymptotics(end)
        return None if a is None else a.conjugate(end)

    @property
    def symbolic(self):
        return self.asymptotics("zero") is not None and self.asymptotics("infinity") is not None

    def to_dict(self):
        raise NotImplementedError

    def to_json(self):
        return json.dumps(self.to_dict(), sort_keys=True)

    def __repr__(self):
        return "%s(%s)" % (type(self).__name__, ", ".join(
            "%s=%r" % kv for kv in self.to_dict().items() if kv[0] != "kind"))


def _generic_inverse(A, y):
    """Vectorized sup{t : A(t) <= y}: bracket on an e-fold grid, then bisect in log t."""
    shape = y.shape
    y = y.ravel()
    vals = A._bracket_values
    # index of the last grid node with A <= y
    idx = np.searchsorted(vals, y, side="right") - 1
    out = np.empty_like(y)
    below = idx < 0
    top = idx >= len(_BRACKET_U) - 1
    out[below] = 0.0
    out[top] = np.inf
    mid_mask = ~(below | top)
    if mid_mask.any():
        lo = _BRACKET_U[idx[mid_mask]].copy()
        hi = lo + 1.0
        yy = y[mid_mask]
        for _ in range(56):
            m = 0.5 * (lo + hi)
            ok = np.asarray(A(np.exp(m)), dtype=float) <= yy
            lo = np.where(ok, m, lo)
            hi = np.where(ok, hi, m)
        out[mid_mask] = np.exp(lo)
    out = out.reshape(shape)
    return out if out.ndim else float(out)


# ---------------------------------------------------------------------------
# Legendre transform by golden-section search on log(tau)
# ---------------------------------------------------------------------------

_GOLD = 0.5 * (math.sqrt(5.0) - 1.0)


def legendre(A, t, return_argmax=False):
    """Pointwise sup_{tau >= 0} (tau*t - A(tau)).

    The objective is concave in tau, hence unimodal in u = log(tau); the
    maximizer is bracketed by geometric expansion and located by
    golden-section search.  Returns +inf when the supremum is unbounded.
    """
    t = np.asarray(t, dtype=float)
    shape = t.shape
    t = t.ravel()
    val = np.zeros_like(t)
    arg = np.zeros_like(t)
    act = np.nonzero(t > 0)[0]
    if act.size:
        tt = t[act]

        def h(u, sel):
            tau = np.exp(np.clip(u, _U_MIN, _U_MAX))
            with np.errstate(all="ignore"):
                out = tau * tt[sel] - np.asarray(A(tau), dtype=float)
            return np.where(np.isnan(out), -np.inf, out)

        allsel = np.arange(act.size)
        b = np.log(tt)
        a, c = b - 1.0, b + 1.0
        fa, fb, fc = h(a, allsel), h(b, allsel), h(c, allsel)
        step = np.full_like(b, 2.0)
        for _ in range(80):
            up = (fc > fb) & (c < _U_MAX)
            down = ~up & ((fa > fb) | ((fb == -np.inf) & (fa == -np.inf))) & (a > _U_MIN)
            if not (up.any() or down.any()):
                break
            if up.any():
                i = np.nonzero(up)[0]
                a[i], fa[i], b[i], fb[i] = b[i], fb[i], c[i], fc[i]
                c[i] = np.minimum(b[i] + step[i], _U_MAX)
                fc[i] = h(c[i], i)
                step[i] *= 2.0
            if down.any():
                i = np.nonzero(down)[0]
                c[i], fc[i], b[i], fb[i] = b[i], fb[i], a[i], fa[i]
                a[i] = np.maximum(b[i] - step[i], _U_MIN)
                fa[i] = h(a[i], i)
                step[i] *= 2.0
        lo, hi = a, c
        x1 = hi - _GOLD * (hi - lo)
        x2 = lo + _GOLD * (hi - lo)
        f1, f2 = h(x1, allsel), h(x2, allsel)
        for _ in range(90):
            left = f1 >= f2
            hi = np.where(left, x2, hi)
            lo = np.where(left, lo, x1)
            x2n = np.where(left, x1, lo + _GOLD * (hi - lo))
            x1n = np.where(left, hi - _GOLD * (hi - lo), x2)
            fnew = h(np.where(left, x1n, x2n), allsel)
            f1, f2 = np.where(left, fnew, f2), np.where(left, f1, fnew)
            x1, x2 = x1n, x2n
        ubest = np.where(f1 >= f2, x1, x2)
        fbest = np.maximum(f1, f2)
        unbounded = ubest > _U_MAX - 10.0
        vv = np.where(unbounded, np.inf, np.maximum(fbest, 0.0))
        aa = np.where(fbest > 0, np.exp(ubest), 0.0)
        aa = np.where(unbounded, np.inf, aa)
        val[act] = vv
        arg[act] = aa
    val = val.reshape(shape)
    arg = arg.reshape(shape)
    if not val.ndim:
        val, arg = float(val), float(arg)
    return (val, arg) if return_argmax else val


# ---------------------------------------------------------------------------
# Concrete families
# ---------------------------------------------------------------------------

class Power(YoungFunction):
    """A(t) = coef * t**p with p >= 1."""

    kind = "power"

    def __init__(self, p, coef=1.0):
        if p < 1:
            raise ValueError("power Young functions need p >= 1")
        if coef <= 0:
            raise ValueError("coef must be positive")
        self.p = float(p)
        self.coef = float(coef)

    def _eval(self, t):
        return self.coef * t ** self.p

    def _density(self, t):
        if self.p == 1:
            return np.where(t > 0, self.coef, 0.0) + 0 * t
        return self.coef * self.p * t ** (self.p - 1)

    def log_eval(self, t):
        with np.errstate(divide="ignore"):
            return math.log(self.coef) + self.p * np.log(np.asarray(t, dtype=float))

    def inverse(self, y):
        y = np.asarray(y, dtype=float)
        if np.any(y < 0):
            raise ValueError("inverse is defined for y >= 0")
        out = (y / self.coef) ** (1.0 / self.p)
        return out if out.ndim else float(out)

    def conjugate(self):
        if self.p == 1:
            return LInftyGauge(level=self.coef)
        p, c = self.p, self.coef
        q = p / (p - 1)
        # sup_tau (tau t - c tau^p) = (p - 1) c (t / (c p))^q
        return Power(q, coef=(p - 1) * c * (c * p) ** (-q))

    def asymptotics(self, end):
        return Asymptotic("powerlog", self.p, 0.0)

    def to_dict(self):
        d = {"kind": "power", "p": self.p}
        if self.coef != 1.0:
            d["coef"] = self.coef
        return d


class LInftyGauge(YoungFunction):
    """A(t) = 0 on [0, level], +inf beyond; the gauge of L^infinity."""

    kind = "linfty"

    def __init__(self, level=1.0):
        self.level = float(level)

    def _eval(self, t):
        return np.where(t <= self.level, 0.0, np.inf)

    def _density(self, t):
        return np.where(t <= self.level, 0.0, np.inf)

    @property
    def finiteness_threshold(self):
        return self.level

    def inverse(self, y):
        y = np.asarray(y, dtype=float)
        if np.any(y < 0):
            raise ValueError("inverse is defined for y >= 0")
        out = np.full_like(y, self.level)
        return out if out.ndim else float(out)

    def conjugate(self):
        return Power(1.0, coef=self.level)

    def asymptotics(self, end):
        return Asymptotic("zero") if end == "zero" else Asymptotic("infinite")

    def to_dict(self):
        d = {"kind": "linfty"}
        if self.level != 1.0:
            d["level"] = self.level
        return d


class _Glued(YoungFunction):
    """Young function built from a density glued from two model densities.

    The density equals ``a0`` on (0, t_lo], is constant on (t_lo, t_hi], and
    equals ``c * a_inf`` beyond t_hi, with c chosen for continuity.  t_lo and
    t_hi are the largest / smallest points at which the model densities are
    still monotone, so A equals the near-zero model exactly on (0, t_lo] and a
    multiple of the near-infinity model plus a constant beyond t_hi.
    """

    def _setup(self, crossover=None):
        if crossover is None:
            g0 = np.geomspace(1e-12, 1.0, 241)
            with np.errstate(all="ignore"):
                d0 = self._a0(g0)
                good = np.isfinite(d0) & (d0 >= 0)
                bad = np.nonzero(~good[1:] | (np.diff(d0) < -1e-12 * np.abs(d0[1:])))[0]
            t_lo = g0[bad[0]] if bad.size else 1.0
            if not good[0] or t_lo <= g0[0] or d0[bad[0] if bad.size else -1] <= 0:
                t_lo = 1.0
            ginf = np.geomspace(1.0, 1e12, 241)
            with np.errstate(all="ignore"):
                dinf = self._ainf(ginf)
                good = np.isfinite(dinf) & (dinf > 0)
                bad = np.nonzero(~good[:-1] | (np.diff(dinf) < -1e-12 * np.abs(dinf[:-1])))[0]
            t_hi = ginf[bad[-1] + 1] if bad.size else 1.0
            if t_hi >= ginf[-1]:
                t_hi = 1.0
            t_hi = max(t_hi, t_lo)
        else:
            t_lo, t_hi = crossover if np.ndim(crossover) else (crossover, crossover)
        self.t_lo, self.t_hi = float(t_lo), float(t_hi)
        with np.errstate(all="ignore"):
            self._alo = float(self._a0(np.array(self.t_lo)))
            self._Alo = float(self._m0(np.array(self.t_lo)))
            self._c = self._alo / float(self._ainf(np.array(self.t_hi)))
            self._Ahi = self._Alo + self._alo * (self.t_hi - self.t_lo)
            self._Mhi = float(self._minf(np.array(self.t_hi)))

    @property
    def crossover(self):
        return (self.t_lo, self.t_hi)

    def _eval(self, t):
        t = np.asarray(t, dtype=float)
        out = np.empty_like(t)
        m0 = t <= self.t_lo
        mid = (t > self.t_lo) & (t <= self.t_hi)
        hi = t > self.t_hi
        out[m0] = self._m0(t[m0])
        out[mid] = self._Alo + self._alo * (t[mid] - self.t_lo)
        out[hi] = self._Ahi + self._c * (self._minf(t[hi]) - self._Mhi)
        return out

    def _density(self, t):
        t = np.asarray(t, dtype=float)
        out = np.empty_like(t)
        m0 = t <= self.t_lo
        mid = (t > self.t_lo) & (t <= self.t_hi)
        hi = t > self.t_hi
        out[m0] = self._a0(t[m0])
        out[mid] = self._alo
        out[hi] = self._c * self._ainf(t[hi])
        out[t == 0] = self._a0_at_zero()
        return out

    def _a0_at_zero(self):
        return 0.0

    def log_eval(self, t):
        t = _as_array(t)
        out = np.empty_like(t)
        with np.errstate(all="ignore"):
            m0 = t <= self.t_lo
            out[m0] = self._logm0(t[m0])
            rest = ~m0
            out[rest] = np.log(self._eval(t[rest]))
            big = rest & ~np.isfinite(out)
            if big.any():
                lm = self._logminf(t[big])
                out[big] = math.log(self._c) + lm + np.log1p(
                    (self._Ahi - self._c * self._Mhi) / self._c * np.exp(-lm))
        return out if out.ndim else float(out)

    def _logm0(self, t):
        return np.log(self._m0(t))

    def _logminf(self, t):
        return np.log(self._minf(t))


class PowerLog(_Glued):
    """A(t) ~ t^p0 log(1+1/t)^alpha0 near zero and t^p log(1+t)^alpha near infinity."""

    kind = "power_log"

    def __init__(self, p0, alpha0, p, alpha, crossover=None):
        self.p0, self.alpha0, self.p, self.alpha = map(float, (p0, alpha0, p, alpha))
        self._setup(crossover)

    def _m0(self, t):
        return t ** self.p0 * np.log1p(1.0 / t) ** self.alpha0

    def _logm0(self, t):
        return self.p0 * np.log(t) + self.alpha0 * np.log(np.log1p(1.0 / t))

    def _a0(self, t):
        L = np.log1p(1.0 / t)
        return t ** (self.p0 - 1) * L ** (self.alpha0 - 1) * (self.p0 * L - self.alpha0 / (1.0 + t))

    def _a0_at_zero(self):
        if self.p0 > 1:
            return 0.0
        return 0.0 if self.alpha0 < 0 else (1.0 if self.alpha0 == 0 else np.inf)

    def _minf(self, t):
        return t ** self.p * np.log1p(t) ** self.alpha

    def _logminf(self, t):
        return self.p * np.log(t) + self.alpha * np.log(np.log1p(t))

    def _ainf(self, t):
        L = np.log1p(t)
        return t ** (self.p - 1) * L ** (self.alpha - 1) * (self.p * L + self.alpha * t / (1.0 + t))

    def asymptotics(self, end):
        if end == "zero":
            return Asymptotic("powerlog", self.p0, self.alpha0)
        return Asymptotic("powerlog", self.p, self.alpha)

    def to_dict(self):
        return {"kind": "power_log", "p0": self.p0, "alpha0": self.alpha0,
                "p": self.p, "alpha": self.alpha}


class Exponential(_Glued):
    """A(t) ~ exp(-t^(1/gamma0)) near zero (gamma0 < 0) and exp(t^gamma) near infinity."""

    kind = "exponential"

    def __init__(self, gamma0, gamma, crossover=None):
        if not gamma0 < 0 < gamma:
            raise ValueError("need gamma0 < 0 < gamma")
        self.gamma0, self.gamma = float(gamma0), float(gamma)
        self._setup(crossover)

    def _m0(self, t):
        return np.exp(-t ** (1.0 / self.gamma0))

    def _logm0(self, t):
        return -t ** (1.0 / self.gamma0)

    def _a0(self, t):
        k = 1.0 / self.gamma0
        return -k * t ** (k - 1) * np.exp(-t ** k)

    def _minf(self, t):
        return np.exp(t ** self.gamma)

    def _logminf(self, t):
        return t ** self.gamma

    def _ainf(self, t):
        return self.gamma * t ** (self.gamma - 1) * np.exp(t ** self.gamma)

    def asymptotics(self, end):
        return Asymptotic("tiny") if end == "zero" else Asymptotic("huge")

    def conjugate_asymptotics(self, end):
        # conjugate ~ t log(1/t)^gamma0 near zero and t log(t)^(1/gamma) near infinity
        if end == "zero":
            return Asymptotic("powerlog", 1.0, self.gamma0)
        return Asymptotic("powerlog", 1.0, 1.0 / self.gamma)

    def to_dict(self):
        return {"kind": "exponential", "gamma0": self.gamma0, "gamma": self.gamma}


class NumericConjugate(YoungFunction):
    """Young conjugate of ``of`` evaluated by golden-section Legendre transform."""

    kind = "numeric_conjugate"

    def __init__(self, of):
        self.of = of

    def _eval(self, t):
        return legendre(self.of, t)

    def _density(self, t):
        # the maximizer tau*(t) is the left-continuous inverse of the density of ``of``
        return legendre(self.of, t, return_argmax=True)[1]

    @property
    def finiteness_threshold(self):
        d = self.of.density(np.array([1e300]))
        return float(d[0]) if np.isfinite(d[0]) else math.inf

    def asymptotics(self, end):
        return self.of.conjugate_asymptotics(end)

    def conjugate_asymptotics(self, end):
        return self.of.asymptotics(end)

    def to_dict(self):
        return {"kind": "numeric_conjugate", "of": self.of.to_dict()}

    @cached_property
    def table(self):
        """Log-log interpolation table for fast repeated evaluation."""
        return TabulatedMonotone.loglog_from_function(self, 1e-100, 1e100, per_decade=32)


class TabulatedMonotone(YoungFunction):
    """Young function given by samples.

    ``interpolation="linear"`` joins (t, A) samples by segments (exactly convex
    for convex data) and continues beyond the last node as a power with
    exponent ``tail_exponent``.  ``interpolation="loglog"`` uses a monotone
    cubic in (log t, log A); zero samples at the bottom are honoured exactly
    and infinite samples at the top mark the finiteness threshold.
    """

    kind = "tabulated"

    def __init__(self, grid, values, tail_exponent=None, interpolation="linear", meta=None):
        grid = np.asarray(grid, dtype=float)
        values = np.asarray(values, dtype=float)
        if grid.ndim != 1 or grid.shape != values.shape or grid.size < 2:
            raise ValueError("grid and values must be 1-d arrays of equal length >= 2")
        if np.any(np.diff(grid) <= 0) or grid[0] < 0:
            raise ValueError("grid must be strictly increasing and nonnegative")
        if np.any(values < 0):
            raise ValueError("values must be nonnegative")
        self.grid, self.values = grid, values
        self.interpolation = interpolation
        self._kinks = grid[grid > 0] if interpolation == "linear" else np.empty(0)
        self.meta = dict(meta or {})
        if interpolation == "linear":
            if grid[0] > 0:
                self._g = np.concatenate([[0.0], grid])
                self._v = np.concatenate([[0.0], values])
            else:
                self._g, self._v = grid, values.copy()
                self._v[0] = 0.0
            if tail_exponent is None:
                g1, g2 = self._g[-2:]
                v1, v2 = self._v[-2:]
                tail_exponent = (math.log(v2 / v1) / math.log(g2 / g1)
                                 if v1 > 0 and g1 > 0 else 1.0)
            self.tail_exponent = float(tail_exponent)
        elif interpolation == "loglog":
            pos = (values > 0) & np.isfinite(values)
            if pos.sum() < 2:
                raise ValueError("loglog tables need at least two positive finite samples")
            i0 = np.argmax(pos)
            i1 = len(pos) - np.argmax(pos[::-1]) - 1
            if not pos[i0:i1 + 1].all():
                raise ValueError("positive finite samples must be contiguous")
            self._zero_at = grid[i0 - 1] if i0 > 0 else 0.0
            self._inf_at = grid[i1 + 1] if i1 + 1 < len(grid) and values[i1 + 1] == np.inf else math.inf
            lg, lv = np.log(grid[i0:i1 + 1]), np.log(values[i0:i1 + 1])
            self._lg, self._lv = lg, lv
            self._pchip = PchipInterpolator(lg, lv, extrapolate=False)
            k = max(2, min(len(lg) - 1, 32))
            self._slope_lo = (lv[k] - lv[0]) / (lg[k] - lg[0])
            self._slope_hi = (lv[-1] - lv[-1 - k]) / (lg[-1] - lg[-1 - k])
            if tail_exponent is not None:
                self._slope_hi = float(tail_exponent)
            self.tail_exponent = float(self._slope_hi)
        else:
            raise ValueError("interpolation must be 'linear' or 'loglog'")

    @classmethod
    def loglog_from_function(cls, f, lo, hi, per_decade=32, meta=None):
        """Sample ``f`` on a geometric grid and build a log-log table."""
        n = int(round(per_decade * math.log10(hi / lo))) + 1
        g = np.geomspace(lo, hi, n)
        v = np.asarray(f(g), dtype=float)
        v = np.where(np.isnan(v), np.inf, v)
        v = np.where(v < 1e-290, 0.0, v)
        v = np.where(v > 1e290, np.inf, v)
        v = np.maximum.accumulate(v)
        pos = (v > 0) & np.isfinite(v)
        if not pos.any():
            raise ValueError("function has no positive finite samples on the grid")
        i1 = len(pos) - np.argmax(pos[::-1]) - 1
        stop = i1 + 1
        # keep one +inf node only when the function is genuinely infinite there
        if stop < len(g) and math.isfinite(getattr(f, "finiteness_threshold", math.inf)):
            stop += 1
        return cls(g[:stop], v[:stop], interpolation="loglog", meta=meta)

    @classmethod
    def from_csv(cls, path, tail_exponent=None):
        """Read (t, value) rows; a header row is skipped if present."""
        ts, vs = [], []
        with open(path, newline="") as fh:
            for row in csv.reader(fh):
                if not row:
                    continue
                try:
                    t, v = float(row[0]), float(row[1])
                except ValueError:
                    continue
                ts.append(t)
                vs.append(v)
        return cls(ts, vs, tail_exponent=tail_exponent)

    def to_csv(self, path):
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["t", "value"])
            for t, v in zip(self.grid, self.values):
                w.writerow([repr(float(t)), repr(float(v))])

    @property
    def kinks(self):
        return self._kinks

    def _eval(self, t):
        t = np.asarray(t, dtype=float)
        if self.interpolation == "linear":
            shape = t.shape
            t = np.atleast_1d(t)
            out = np.interp(t, self._g, self._v)
            T, V = self._g[-1], self._v[-1]
            beyond = t > T
            out[beyond] = V * (t[beyond] / T) ** self.tail_exponent
            return out.reshape(shape)
        return np.exp(self._loglog(t))

    def _loglog(self, t):
        t = np.asarray(t, dtype=float)
        out = np.full(t.shape, -np.inf)
        with np.errstate(divide="ignore"):
            lt = np.log(t)
        lg, lv = self._lg, self._lv
        inside = (lt >= lg[0]) & (lt <= lg[-1])
        out[inside] = self._pchip(lt[inside])
        top = lt > lg[-1]
        out[top] = lv[-1] + self._slope_hi * (lt[top] - lg[-1])
        out[t >= self._inf_at] = np.inf
        low = lt < lg[0]
        if self._zero_at > 0:
            g0, v0 = self._zero_at, math.exp(lv[0])
            lin = low & (t > g0)
            with np.errstate(divide="ignore"):
                out[lin] = np.log(v0 * (t[lin] - g0) / (math.exp(lg[0]) - g0))
            out[low & (t <= g0)] = -np.inf
        else:
            out[low] = lv[0] + self._slope_lo * (lt[low] - lg[0])
        return out

    def log_eval(self, t):
        t = _as_array(t)
        if self.interpolation == "loglog":
            out = self._loglog(t)
            out = np.where(t == 0, -np.inf, out)
            return out if out.ndim else float(out)
        return super().log_eval(t)

    def _density(self, t):
        t = np.asarray(t, dtype=float)
        if self.interpolation == "linear":
            slopes = np.diff(self._v) / np.diff(self._g)
            i = np.clip(np.searchsorted(self._g, t, side="left") - 1, 0, len(slopes) - 1)
            out = slopes[i]
            T, V = self._g[-1], self._v[-1]
            beyond = t > T
            out[beyond] = self.tail_exponent * V / T * (t[beyond] / T) ** (self.tail_exponent - 1)
            return out
        with np.errstate(divide="ignore", invalid="ignore"):
            lt = np.log(t)
            lg = self._lg
            slope = np.where(lt > lg[-1], self._slope_hi,
                             np.where(lt < lg[0], self._slope_lo,
                                      self._pchip.derivative()(np.clip(lt, lg[0], lg[-1]))))
            out = slope * np.exp(self._loglog(t)) / t
        if self._zero_at > 0:
            low = (t < math.exp(lg[0])) & (t > self._zero_at)
            out[low] = math.exp(self._lv[0]) / (math.exp(lg[0]) - self._zero_at)
            out[t <= self._zero_at] = 0.0
        out[t >= self._inf_at] = np.inf
        return np.nan_to_num(out, nan=0.0)

    @property
    def finiteness_threshold(self):
        return self._inf_at if self.interpolation == "loglog" else math.inf

    def asymptotics(self, end):
        return None

    def to_dict(self):
        return {"kind": "tabulated", "interpolation": self.interpolation,
                "grid": self.grid.tolist(), "values": self.values.tolist(),
                "tail_exponent": self.tail_exponent}


def young_from_dict(d):
    """Inverse of ``YoungFunction.to_dict``."""
    d = dict(d)
    kind = d.pop("kind")
    if kind == "power":
        return Power(d["p"], d.get("coef", 1.0))
    if kind == "power_log":
        return PowerLog(d["p0"], d["alpha0"], d["p"], d["alpha"], d.get("crossover"))
    if kind == "exponential":
        return Exponential(d["gamma0"], d["gamma"])
    if kind == "linfty":
        return LInftyGauge(d.get("level", 1.0))
    if kind == "numeric_conjugate":
        return NumericConjugate(young_from_dict(d["of"]))
    if kind == "tabulated":
        if "path" in d:
            return TabulatedMonotone.from_csv(d["path"], d.get("tail_exponent"))
        return TabulatedMonotone(d["grid"], d["values"], d.get("tail_exponent"),
                                 d.get("interpolation", "linear"))
    raise ValueError("unknown Young function kind %r" % kind)


# ---------------------------------------------------------------------------
# Operation-style entry points
# ---------------------------------------------------------------------------

def evaluate(A, t):
    """A(t); raises ValueError for negative t."""
    return A(t)


def inverse(A, y):
    """Right-continuous generalized inverse sup{t : A(t) <= y}."""
    return A.inverse(y)


def conjugate(A):
    """Young conjugate; closed form for power and L^inf gauges, numeric otherwise."""
    return A.conjugate()


@dataclass
class IndexEstimate:
    i0: float
    i_inf: float
    inconclusive: bool
    details: dict = field(default_factory=dict)

    def __iter__(self):
        return iter((self.i0, self.i_inf))


def _index_from_secants(loglam, logratio, invert):
    """Extrapolated index from the last three (log lambda, log ratio) points."""
    s1 = (logratio[-2] - logratio[-3]) / (loglam[-2] - loglam[-3])
    s2 = (logratio[-1] - logratio[-2]) / (loglam[-1] - loglam[-2])
    if not (np.isfinite(s1) and np.isfinite(s2)):
        return math.inf, False, (s1, s2)
    conclusive = abs(s1 - s2) <= 0.1
    s = s2
    if invert:
        est = math.inf if s <= 1e-9 else 1.0 / s
    else:
        est = s
    return est, not conclusive, (float(s1), float(s2))


def _inner_liminf(A, end, lam, how, decades):
    lo, hi = decades
    ts = np.logspace(-hi, -lo, 11) if end == "zero" else np.logspace(lo, hi, 11)
    out = []
    for l in lam:
        with np.errstate(all="ignore"):
            if how == "inverse":
                r = np.log(A.inverse(l * ts)) - np.log(A.inverse(ts))
            else:
                r = A.log_eval(l * ts) - A.log_eval(ts)
        r = np.where(np.isnan(r), np.inf, r)
        out.append(np.min(r))
    return np.array(out)


# Two sampling windows (in decades from 1) for the inner liminf; an estimate
# that keeps growing from the near to the far window is extrapolated to +inf.
_NEAR_WINDOW, _FAR_WINDOW = (40, 50), (190, 200)


def _one_index(A, end, how):
    k = np.arange(1, 11)
    lam = 2.0 ** (-k) if how == "inverse" else 2.0 ** k
    ests, incs, secs = [], [], []
    for w in (_NEAR_WINDOW, _FAR_WINDOW):
        lr = _inner_liminf(A, end, lam, how, w)
        est, inc, sec = _index_from_secants(np.log(lam), lr, invert=(how == "inverse"))
        ests.append(est)
        incs.append(inc)
        secs.append(sec)
    near, far = ests
    if math.isfinite(far) and math.isfinite(near) and far > 20 and far > 1.5 * near:
        far = math.inf
    if far > 1e6:
        far = math.inf
    return far, incs[-1] and math.isfinite(far), secs


def matuszewska_indices(A, method="both"):
    """Lower Matuszewska-Orlicz indices (i0, i_inf).

    The inverse-based formula evaluates the liminf of A^-1(lam t)/A^-1(t) for
    lam = 2^-1, ..., 2^-10; the direct formula uses A(lam t)/A(t) for
    lam = 2, ..., 2^10.  Each index is read off the secant slope of the last
    three points; the estimate is flagged inconclusive if the secants differ
    by more than 0.1 or the two formulas disagree by more than 0.05.
    """
    res = {}
    flag = False
    for end in ("zero", "infinity"):
        est_inv, inc1, sec1 = _one_index(A, end, "inverse")
        est_dir, inc2, sec2 = _one_index(A, end, "direct")
        agree = (est_inv == est_dir) or abs(est_inv - est_dir) <= 0.05
        res[end] = {"inverse_formula": est_inv, "direct_formula": est_dir,
                    "secants_inverse": sec1, "secants_direct": sec2, "agree": bool(agree)}
        flag = flag or inc1 or inc2 or not agree
    key = "direct_formula" if method == "direct" else "inverse_formula"
    return IndexEstimate(res["zero"][key], res["infinity"][key], bool(flag), res)


@dataclass
class AxiomReport:
    checks: dict

    @property
    def passed(self):
        return all(c["passed"] for c in self.checks.values())

    def failures(self):
        return {k: v for k, v in self.checks.items() if not v["passed"]}


def check_axioms(A, grid=None, rtol=1e-9):
    """Run the Young-function axioms on a deterministic grid and report witnesses."""
    t = np.geomspace(1e-6, 1e6, 121) if grid is None else np.asarray(grid, dtype=float)
    v = np.asarray(A(t), dtype=float)
    fin = np.isfinite(v)
    checks = {}

    def put(name, ok, witness=None):
        checks[name] = {"passed": bool(ok), "witness": witness}

    put("zero_at_zero", A(0.0) == 0.0, 0.0)
    put("non_constant", np.any(v > 0), None)
    with np.errstate(invalid="ignore"):
        dec = np.nonzero(np.diff(v) < -rtol * np.abs(v[1:]))[0]
    put("non_decreasing", dec.size == 0, float(t[dec[0] + 1]) if dec.size else None)
    # midpoint convexity on neighbouring pairs and a fixed pseudo-random set of pairs
    rng = np.random.default_rng(12345)
    i = np.concatenate([np.arange(len(t) - 2), rng.integers(0, len(t), 200)])
    j = np.concatenate([np.arange(2, len(t)), rng.integers(0, len(t), 200)])
    x, y = t[i], t[j]
    lhs = np.asarray(A(0.5 * (x + y)), dtype=float)
    rhs = 0.5 * (v[i] + v[j])
    with np.errstate(invalid="ignore"):
        bad = np.nonzero(lhs > rhs * (1 + rtol) + 1e-300)[0]
    put("convex", bad.size == 0,
        (float(x[bad[0]]), float(y[bad[0]])) if bad.size else None)
    with np.errstate(all="ignore"):
        ratio = v / t
        rb = np.nonzero(fin[1:] & (np.diff(ratio) < -rtol * np.abs(ratio[1:])))[0]
    put("ratio_non_decreasing", rb.size == 0, float(t[rb[0] + 1]) if rb.size else None)
    kt_bad = None
    for k in (1.5, 2.0, 4.0, 10.0):
        with np.errstate(all="ignore"):
            bad = np.nonzero(k * v > np.asarray(A(k * t), dtype=float) * (1 + rtol) + 1e-300)[0]
        if bad.size:
            kt_bad = (k, float(t[bad[0]]))
            break
    put("k_scaling", kt_bad is None, kt_bad)
    # A(t) = int_0^t a, checked by Gauss-Legendre in log variable at a few points
    probes = t[fin][:: max(1, fin.sum() // 7)]
    xg, wg = np.polynomial.legendre.leggauss(24)
    worst, wit = 0.0, None
    for tp in probes:
        # panels graded geometrically toward the upper limit, where a
        # rapidly growing density concentrates its mass
        edges = math.log(tp) - np.concatenate([[0.0], np.geomspace(1e-7, 60.0, 120)])[::-1]
        kk = np.asarray(getattr(A, "kinks", ()), dtype=float)
        kk = np.log(kk[(kk > 0) & (kk < tp)])
        edges = np.unique(np.concatenate([edges, kk[kk > edges[0]]]))
        mids = 0.5 * (edges[1:] + edges[:-1])[:, None]
        half = 0.5 * np.diff(edges)[:, None]
        uu = mids + half * xg[None, :]
        tau = np.exp(uu)
        integ = float(np.sum(np.asarray(A.density(tau)) * tau * wg[None, :] * half))
        av = float(A(tp))
        err = abs(integ - av) / max(av, 1e-300)
        if err > worst:
            worst, wit = err, float(tp)
    put("density_consistent", worst < 1e-5, wit)
    return AxiomReport(checks)


@dataclass
class DominationReport:
    found: bool
    c: float = None
    t0: float = None
    witnesses: list = field(default_factory=list)


def dominates(A, B, range="Global"):
    """Search the smallest c = 2^k, |k| <= 10, with B(t) <= A(c t) on the range's grid.

    The grid spans 24 decades so that a power gap of any size outgrows every
    admissible c; purely logarithmic gaps may still go undetected.
    """
    cs = 2.0 ** np.arange(-10, 11)
    if range == "Global":
        t0s = [None]
    elif range == "NearInfinity":
        t0s = [1.0, 10.0, 100.0, 1e3]
    elif range == "NearZero":
        t0s = [1.0, 0.1, 0.01, 1e-3]
    else:
        raise ValueError("range must be Global, NearZero or NearInfinity")
    last = None
    for t0 in t0s:
        if t0 is None:
            t = np.geomspace(1e-24, 1e24, 961)
        elif range == "NearInfinity":
            t = np.geomspace(t0, t0 * 1e24, 481)
        else:
            t = np.geomspace(t0 * 1e-24, t0, 481)
        b = np.asarray(B(t), dtype=float)
        for c in cs:
            a = np.asarray(A(c * t), dtype=float)
            if np.all(b <= a * (1 + 1e-12)):
                return DominationReport(True, float(c), t0)
        a = np.asarray(A(cs[-1] * t), dtype=float)
        with np.errstate(all="ignore"):
            r = b / a
        order = np.argsort(-np.nan_to_num(r, nan=0.0))[:5]
        last = [(float(t[i]), float(r[i])) for i in sorted(order)]
    return DominationReport(False, witnesses=last)


def equivalent(A, B, range="Global"):
    """Mutual domination."""
    return dominates(A, B, range).found and dominates(B, A, range).found
