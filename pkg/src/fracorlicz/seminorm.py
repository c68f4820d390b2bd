"""Gagliardo modular and seminorm, trial-function families, the pointwise
modular bound and Hoelder quotients."""
import json
import math
import threading
from dataclasses import asdict, dataclass, field

import numpy as np
from scipy.special import gamma as gamma_fn

from .conditions import SmoothnessParams, build_E, classify_integral
from .errors import DomainError, PreconditionError, ProfileError
from .norms import _GL8, NormResult, SampledFunction, _bisect_luxemburg
from .young import NumericConjugate

__all__ = [
    "TrialFunction",
    "make_trial",
    "bump",
    "ModularEstimate",
    "gagliardo_modular",
    "seminorm",
    "PairSampler",
    "holder_quotient",
    "check_modular_bound",
    "flatten_tail",
    "MODULAR_BOUND_CONSTANTS",
    "TRIAL_BOUND_CONSTANTS",
]

KINDS = ("Radial", "RadialHigher", "Odd", "ScalingFamily")


def _sphere_area(n):
    """|S^(n-1)|."""
    return 2.0 * math.pi ** (n / 2.0) / gamma_fn(n / 2.0)


def _as_params(params):
    return params if isinstance(params, SmoothnessParams) else SmoothnessParams(*params)


# ---------------------------------------------------------------------------
# profiles
# ---------------------------------------------------------------------------

def _check_profile(f):
    if not isinstance(f, SampledFunction) or f.kind != "step":
        raise ProfileError("profile must be a step SampledFunction")
    if f.tail is not None:
        raise ProfileError("profile must have bounded support (no tail)")
    if f.grid[0] != 0:
        raise ProfileError("profile grid must start at 0", float(f.grid[0]))
    v = f.values
    if np.any(v < 0):
        i = int(np.argmax(v < 0))
        raise ProfileError("profile must be nonnegative", (float(f.grid[i]), float(v[i])))
    if np.any(np.diff(v) > 0):
        i = int(np.argmax(np.diff(v) > 0)) + 1
        raise ProfileError("profile must be non-increasing", (float(f.grid[i]), float(v[i - 1]), float(v[i])))


def _moment(f, z, gam):
    """int_z^inf f(r) r^gam dr for a bounded-support step profile, elementwise in z."""
    g, c = f.grid, f.values
    g1 = gam + 1.0
    with np.errstate(divide="ignore", over="ignore", invalid="ignore"):
        P = g ** g1
        seg = np.where(c != 0, c * (P[1:] - P[:-1]) / g1, 0.0)
    suffix = np.append(np.cumsum(seg[::-1])[::-1], 0.0)
    z = np.asarray(z, dtype=float)
    k = np.clip(np.searchsorted(g, z, side="right") - 1, 0, len(c) - 1)
    with np.errstate(divide="ignore", over="ignore", invalid="ignore"):
        part = np.where(c[k] != 0, c[k] * (g[k + 1] ** g1 - z ** g1) / g1, 0.0)
    return np.where(z < g[-1], part + suffix[k + 1], 0.0)


def bump(center=3.0 ** -0.25, n=1):
    """Smooth bump exp(1 - 1/(1-|x-c|^2)) on the unit ball around c = (center, 0, ...).

    It is nonnegative, compactly supported and has a nonzero gradient at 0.
    The default center puts 0 at the inflection point of the radial profile,
    so differences at the origin are linear up to third-order terms.
    """
    c = np.zeros(n)
    c[0] = center

    def xi(x):
        d2 = np.sum((np.asarray(x, dtype=float) - c) ** 2, axis=-1)
        with np.errstate(divide="ignore", over="ignore"):
            return np.where(d2 < 1, np.exp(1.0 - 1.0 / (1.0 - np.minimum(d2, 1 - 1e-300))), 0.0)

    def grad(x):
        x = np.asarray(x, dtype=float).reshape(-1, n)
        d = x - c
        d2 = np.sum(d * d, axis=1)
        with np.errstate(divide="ignore", over="ignore", invalid="ignore"):
            val = np.where(d2 < 1, np.exp(1.0 - 1.0 / (1.0 - np.minimum(d2, 1 - 1e-300))), 0.0)
            fac = np.where(d2 < 1, -2.0 / (1.0 - d2) ** 2, 0.0)
        return (val * fac)[:, None] * d

    xi.grad = grad
    xi.radius = 1.0 + abs(center)
    return xi


# ---------------------------------------------------------------------------
# trial functions
# ---------------------------------------------------------------------------

class TrialFunction:
    """One of the trial families.

    ``u(x)`` evaluates the function; ``field(x)`` is what enters the Gagliardo
    modular (u itself for s < 1, u' for the n = 1 higher-order kinds) and
    ``exponent`` the matching smoothness.  Points are arrays of shape (m, n),
    or (m,) when n = 1.
    """

    def __init__(self, kind, params, profile=None, k=None, xi=None):
        self.kind, self.params, self.profile, self.k, self.xi = kind, params, profile, k, xi
        n, s = params.n, float(params.s)
        self.n, self.s = n, s
        self.exponent = s if s < 1 else float(params.frac_part)
        if kind == "ScalingFamily":
            self.support_radius = k * xi.radius
            self.radial = False
            self.radii = np.array([])
        else:
            g = profile.grid
            end = g[np.flatnonzero(profile.values > 0)[-1] + 1]
            self.radii = (g[1:][g[1:] <= end] / params.omega_n) ** (1.0 / n)
            self.support_radius = float(self.radii[-1])
            self.radial = kind in ("Radial", "Odd")

    # -- helpers ------------------------------------------------------------
    def _pts(self, x):
        x = np.asarray(x, dtype=float)
        if self.n == 1:
            return x.reshape(x.shape[:-1]) if x.ndim > 1 and x.shape[-1] == 1 else x
        return x

    def _norm(self, x):
        return np.abs(x) if self.n == 1 else np.linalg.norm(x, axis=-1)

    # -- evaluation ---------------------------------------------------------
    def __call__(self, x):
        x = self._pts(x)
        f, s, n = self.profile, self.s, self.n
        if self.kind == "ScalingFamily":
            pts = x[..., None] if n == 1 else x
            return self.k ** (s - n) * self.xi(pts / self.k)
        z = self.params.omega_n * self._norm(x) ** n
        if self.kind == "Radial":
            return _moment(f, z, s / n - 1.0)
        if self.kind == "RadialHigher":
            return _moment(f, z, s - 1.0) - z * _moment(f, z, s - 2.0)
        with np.errstate(invalid="ignore", over="ignore"):
            phi = _moment(f, z, s - 2.0) - z * _moment(f, z, s - 3.0)
        return x * np.where(z > 0, phi, _moment(f, 0.0, s - 2.0))

    def field(self, x):
        """Function entering the modular: u for s < 1, its derivative for the higher kinds."""
        x = self._pts(x)
        f, s = self.profile, self.s
        if self.kind in ("Radial", "ScalingFamily") or self.s < 1:
            return self(x)
        z = 2.0 * np.abs(x)
        if self.kind == "RadialHigher":
            return -2.0 * np.sign(x) * _moment(f, z, s - 2.0)
        with np.errstate(invalid="ignore", over="ignore"):
            v = _moment(f, z, s - 2.0) - 2.0 * z * _moment(f, z, s - 3.0)
        return np.where(z > 0, v, _moment(f, 0.0, s - 2.0))

    def field_gradient(self, x):
        """Gradient of ``field``; shape (m,) for n = 1, (m, n) otherwise."""
        x = self._pts(x)
        f, s, n = self.profile, self.s, self.n
        if self.kind == "ScalingFamily":
            pts = x[..., None] if n == 1 else x
            g = self.k ** (s - n - 1) * self.xi.grad(pts / self.k)
            return g[:, 0] if n == 1 else g
        r = self._norm(x)
        if self.kind == "Radial":
            om = self.params.omega_n
            z = om * r ** n
            with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
                dr = -f(z) * z ** (s / n - 1.0) * n * om * r ** (n - 1)
            if n == 1:
                return dr * np.sign(x)
            with np.errstate(invalid="ignore"):
                return (dr / np.where(r > 0, r, 1.0))[:, None] * x
        z = 2.0 * r
        with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
            if self.kind == "RadialHigher":
                return 4.0 * f(z) * z ** (s - 2.0)
            return 2.0 * np.sign(x) * (f(z) * z ** (s - 2.0) - 2.0 * _moment(f, z, s - 3.0))

    def breakpoints(self):
        """Signed points where ``field`` may fail to be smooth (n = 1)."""
        if self.kind == "ScalingFamily":
            return np.array([-self.support_radius, self.support_radius])
        r = self.radii
        return np.unique(np.concatenate([-r, [0.0], r]))

    # -- companion lower bounds --------------------------------------------
    def lower_bound(self, x):
        """Radial: lower bound for |u(0) - u(x)|.  Odd: lower bound for |u(x) - u(0)|."""
        x = self._pts(x)
        f, s, n = self.profile, self.s, self.n
        if self.kind == "Radial":
            z = self.params.omega_n * self._norm(x) ** n
            return _moment(f, 0.0, s / n - 1.0) - _moment(f, z, s / n - 1.0)
        if self.kind == "Odd":
            x1 = x if n == 1 else x[..., 0]
            m = int(self.params.int_part)
            # (r - z)^m >= (r/2)^m for r >= 2z gives the factor 2^-m / m!
            return (2.0 ** (-m) / math.factorial(m) * np.abs(x1)
                    * _moment(f, 2.0 * self.params.omega_n * np.abs(x1) ** n, -1.0 + (s - 1.0) / n))
        raise DomainError("no lower bound is attached to kind %s" % self.kind)

    def to_csv(self, path, r=None):
        """Export u and the modular field along the first axis."""
        r = np.linspace(0.0, 1.25 * self.support_radius, 201) if r is None else np.asarray(r, float)
        pts = r if self.n == 1 else np.column_stack([r] + [np.zeros_like(r)] * (self.n - 1))
        u, v = self(pts), self.field(pts) if self.n == 1 else self(pts)
        with open(path, "w") as fh:
            fh.write("r,u,field\n")
            for row in zip(r, u, v):
                fh.write("%.17g,%.17g,%.17g\n" % row)

    def __repr__(self):
        return "TrialFunction(kind=%r, n=%d, s=%g)" % (self.kind, self.n, self.s)


def make_trial(kind, profile=None, params=None, k=None, xi=None):
    """Build a trial function; profiles are checked against the family's invariants."""
    params = _as_params(params)
    n, s = params.n, float(params.s)
    if kind not in KINDS:
        raise ValueError("kind must be one of %s" % (KINDS,))
    if kind == "ScalingFamily":
        if k is None or not k > 0:
            raise ValueError("ScalingFamily needs a scale k > 0")
        return TrialFunction(kind, params, k=float(k), xi=xi or bump(n=n))
    _check_profile(profile)
    if not np.any(profile.values > 0):
        raise ProfileError("profile vanishes identically", None)
    if kind == "Radial" and not 0 < s < 1:
        raise DomainError("Radial trials need 0 < s < 1")
    if kind in ("RadialHigher", "Odd") and not (n == 1 and 1 < s < 2):
        raise DomainError("%s trials are implemented for n = 1, 1 < s < 2" % kind)
    return TrialFunction(kind, params, profile=profile)


def flatten_tail(g, R):
    """f = (1/R) int_R^2R g on (0, 2R) and f = g on [2R, inf)."""
    _check_profile_flatten(g, R)
    grid, vals = g.grid, g.values
    lo, hi = np.maximum(grid[:-1], R), np.minimum(grid[1:], 2 * R)
    avg = float(np.sum(vals * np.clip(hi - lo, 0, None))) / R
    keep = grid > 2 * R
    if not keep.any():
        return SampledFunction.step([0.0, 2 * R], [avg])
    new_grid = np.concatenate([[0.0, 2 * R], grid[keep]])
    i0 = np.searchsorted(grid, 2 * R, side="right") - 1
    new_vals = np.concatenate([[avg], vals[i0:]])
    return SampledFunction.step(new_grid, new_vals, g.tail)


def _check_profile_flatten(g, R):
    if not R > 0:
        raise ProfileError("R must be positive", R)
    if not isinstance(g, SampledFunction) or g.kind != "step":
        raise ProfileError("g must be a step SampledFunction")
    grid, v = g.grid, g.values
    if np.any(v < 0):
        i = int(np.argmax(v < 0))
        raise ProfileError("g must be nonnegative", (float(grid[i]), float(v[i])))
    below = (grid[:-1] < R) & (v != 0)
    if below.any():
        i = int(np.argmax(below))
        raise ProfileError("g must vanish on (0, R)", (float(grid[i]), float(v[i])))
    act = grid[1:] > R
    va = v[act]
    if np.any(np.diff(va) > 0):
        i = int(np.argmax(np.diff(va) > 0)) + 1
        raise ProfileError("g must be non-increasing on (R, inf)", (float(grid[act.nonzero()[0][i]]), float(va[i])))


# ---------------------------------------------------------------------------
# modular plans: nodes (weights, difference quotients) independent of A
# ---------------------------------------------------------------------------

def _graded_template(levels=12, ratio=0.2, rule=_GL8):
    """GL nodes/weights on [0, 1] with panels graded geometrically toward both ends."""
    left = np.concatenate([[0.0], 0.5 * ratio ** np.arange(levels, -1, -1)])
    edges = np.concatenate([left, (1.0 - left[::-1])[1:]])
    x, w = rule
    a, b = edges[:-1, None], edges[1:, None]
    h = 0.5 * (b - a)
    return (a + h * (x + 1)).ravel(), (h * w).ravel()


_G_CACHE = {}
_G_LOCK = threading.Lock()


def _primitive_over_t(A):
    """G(z) = int_0^z A(t) dt / t as a vectorized callable (trapezoid in log t)."""
    key = A.to_json()
    with _G_LOCK:
        hit = _G_CACHE.get(key)
    if hit is not None:
        return hit
    u = np.linspace(-230.0, 230.0, 460 * 28 + 1)
    vals = np.asarray(A(np.exp(u)), dtype=float)
    du = u[1] - u[0]
    inc = 0.5 * (vals[1:] + vals[:-1]) * du
    cum = np.concatenate([[vals[0] * 1.0], vals[0] + np.cumsum(inc)])
    with np.errstate(divide="ignore"):
        logc = np.log(cum)

    def G(z):
        z = np.asarray(z, dtype=float)
        with np.errstate(divide="ignore", invalid="ignore"):
            lz = np.log(z)
            out = np.exp(np.interp(lz, u, logc, left=-np.inf, right=np.inf))
        return np.where(z > 0, np.nan_to_num(out, nan=np.inf), 0.0)

    with _G_LOCK:
        _G_CACHE[key] = G
    return G


class _QuadraturePlan1D:
    """J for n = 1 as 2 int_0^inf dh/h int A(|v(x+h)-v(x)|/h^sigma) dx.

    The x integral is split at the field's singular points and their
    h-shifts, each piece graded toward both ends; log h is covered by GL
    panels and both ends are closed by geometric extrapolation of the
    per-decade increments.
    """

    LOW, HIGH, PANELS = -10, 8, 2

    def __init__(self, v, sigma, support, breakpoints):
        self.sigma = sigma
        L = float(support)
        S = np.asarray(breakpoints, dtype=float)
        tx, tw = _graded_template()
        gx, gw = _GL8
        edges = np.linspace(self.LOW, self.HIGH, (self.HIGH - self.LOW) * self.PANELS + 1)
        # the h-integrand has kinks where h equals a difference of breakpoints
        diffs = np.abs(S[:, None] - S[None, :]).ravel()
        with np.errstate(divide="ignore"):
            kinks = np.log10(diffs[diffs > 0] / L)
        kinks = kinks[(kinks > self.LOW) & (kinks < self.HIGH)]
        edges = np.unique(np.concatenate([edges, kinks]))
        edges = edges[np.concatenate([[True], np.diff(edges) > 1e-9])]
        a, b = edges[:-1, None], edges[1:, None]
        lh = (a + 0.5 * (b - a) * (gx + 1)).ravel()
        wh = (0.5 * (b - a) * gw).ravel() * math.log(10.0)
        dec = np.floor(lh - self.LOW).astype(int)
        Ws, Qs, Ds = [], [], []
        for l, w_h, d in zip(lh, wh, dec):
            h = L * 10.0 ** l
            P = np.unique(np.concatenate([S, S - h]))
            P = P[(P >= -L - h) & (P <= L)]
            x0, x1 = P[:-1], P[1:]
            ok = x1 - x0 > 1e-14 * L
            x0, x1 = x0[ok], x1[ok]
            x = (x0[:, None] + (x1 - x0)[:, None] * tx).ravel()
            wx = ((x1 - x0)[:, None] * tw).ravel()
            dv = np.abs(v(x + h) - v(x))
            nz = dv > 0
            Qs.append(dv[nz] / h ** sigma)
            Ws.append(2.0 * w_h * wx[nz])
            Ds.append(np.full(int(nz.sum()), d, dtype=np.int16))
        self.Q, self.W, self.D = np.concatenate(Qs), np.concatenate(Ws), np.concatenate(Ds)
        self.ndec = self.HIGH - self.LOW
        self.nodes = len(self.Q)

    def modular(self, A, lam):
        with np.errstate(invalid="ignore", over="ignore"):
            terms = self.W * np.asarray(A(self.Q / lam), dtype=float)
        if not np.all(np.isfinite(terms)):
            return math.inf, 0.0, ["Diverges"]
        per = np.bincount(self.D, weights=terms, minlength=self.ndec)
        total, flags = float(per.sum()), []
        for last, prev in ((per[0], per[1]), (per[-1], per[-2])):
            if last <= 0:
                continue
            ratio = last / prev if prev > 0 else math.inf
            if ratio >= 1:
                return math.inf, 0.0, ["Diverges"]
            total += last * ratio / (1 - ratio)
        return total, 0.0, flags


class _QuadraturePlanRadial:
    """J for a radial function on R^n, n >= 2, as an integral over
    (|x|, |y|, angle between x and y):

        2 |S^(n-1)| |S^(n-2)| int_{r1 < r2} (r1 r2)^(n-1) sin^(n-2)(t) A(dU / d^s) d^-n,

    with r2 = r1 + w, d^2 = w^2 + 4 r1 r2 sin^2(t/2).  w is log-graded from
    the diagonal, the angle is graded toward 0 on the scale w / sqrt(r1 r2),
    and the decades of w nearest and farthest are closed geometrically.
    """

    LOW, HIGH, PANELS = -10, 6, 1
    ANGLE_PANELS = 16

    def __init__(self, u):
        n, sg = u.n, u.exponent
        self.sigma = sg
        L = u.support_radius
        U = lambda r: u(np.asarray(r)[:, None] * np.eye(n)[0])  # noqa: E731
        radii = np.concatenate([[0.0], u.radii])
        tx, tw = _graded_template(levels=8)
        a0, a1 = radii[:-1], radii[1:]
        r1s = (a0[:, None] + (a1 - a0)[:, None] * tx).ravel()
        w1s = ((a1 - a0)[:, None] * tw).ravel()
        gx, gw = np.polynomial.legendre.leggauss(6)
        base = np.linspace(self.LOW, self.HIGH, (self.HIGH - self.LOW) * self.PANELS + 1)
        const = 2.0 * _sphere_area(n) * _sphere_area(n - 1)
        U1 = U(r1s)
        Ws, Qs, Ds = [], [], []
        for r1, wr1, u1 in zip(r1s, w1s, U1):
            kinks = np.log10(np.clip(u.radii - r1, 1e-300, None) / L)
            e = np.unique(np.concatenate([base, kinks[(kinks > self.LOW) & (kinks < self.HIGH)]]))
            a, b = e[:-1, None], e[1:, None]
            lw = (a + 0.5 * (b - a) * (gx + 1)).ravel()
            ww = (0.5 * (b - a) * gw).ravel() * math.log(10.0)
            dec = np.floor(lw - self.LOW).astype(np.int16)
            w = L * 10.0 ** lw
            ww = ww * w
            r2 = r1 + w
            dU = np.abs(U(r2) - u1)
            keep = dU > 0
            if not keep.any():
                continue
            w, ww, r2, dU, dec = w[keep], ww[keep], r2[keep], dU[keep], dec[keep]
            th_c = np.where(r1 > 0, w / np.sqrt(np.maximum(r1 * r2, 1e-300)), np.pi)
            th_lo = np.minimum(1e-2 * th_c, 0.5)
            k = self.ANGLE_PANELS
            g = (np.pi / th_lo)[:, None] ** (np.arange(k + 1) / k)
            edges = np.concatenate([np.zeros((len(w), 1)), th_lo[:, None] * g], axis=1)
            ea, eb = edges[:, :-1, None], edges[:, 1:, None]
            th = (ea + 0.5 * (eb - ea) * (gx + 1)).reshape(len(w), -1)
            wth = (0.5 * (eb - ea) * gw).reshape(len(w), -1)
            d = np.sqrt(w[:, None] ** 2 + 4.0 * r1 * r2[:, None] * np.sin(0.5 * th) ** 2)
            wt = (const * wr1 * (ww * (r1 * r2) ** (n - 1))[:, None] * wth * np.sin(th) ** (n - 2) / d ** n)
            Qs.append((dU[:, None] / d ** sg).ravel())
            Ws.append(wt.ravel())
            Ds.append(np.repeat(dec, th.shape[1]))
        self.Q, self.W, self.D = np.concatenate(Qs), np.concatenate(Ws), np.concatenate(Ds)
        self.ndec = self.HIGH - self.LOW
        self.nodes = len(self.Q)

    modular = _QuadraturePlan1D.modular


class _MonteCarloPlan:
    """Importance-sampled J: x uniform on the support ball, direction uniform,
    |x - y| log-uniform on [delta, D], with integral corrections below delta
    (local gradient model) and above D (only u(x) survives)."""

    BATCH = 100_000

    def __init__(self, field, grad, sigma, n, support, seed, N, delta_rel=1e-6):
        if seed is None:
            raise ValueError("MonteCarlo needs an explicit seed")
        self.sigma, self.n, self.N, self.seed = sigma, n, int(N), seed
        L = float(support)
        delta, D = delta_rel * L, 4.0 * L
        vol = math.pi ** (n / 2.0) / gamma_fn(n / 2.0 + 1.0) * L ** n
        area = _sphere_area(n)
        sizes = [self.BATCH] * (self.N // self.BATCH) + ([self.N % self.BATCH] if self.N % self.BATCH else [])
        children = np.random.SeedSequence(seed).spawn(len(sizes))
        parts = {k: [] for k in ("Q", "fac", "zn", "zf", "dec")}
        for m, ss in zip(sizes, children):
            rng = np.random.default_rng(ss)
            if n == 1:
                x = rng.uniform(-L, L, m)
                th = rng.choice([-1.0, 1.0], m)
            else:
                g = rng.standard_normal((m, n))
                x = g / np.linalg.norm(g, axis=1, keepdims=True) * (L * rng.uniform(0, 1, m) ** (1.0 / n))[:, None]
                th = rng.standard_normal((m, n))
                th /= np.linalg.norm(th, axis=1, keepdims=True)
            rho = np.exp(rng.uniform(math.log(delta), math.log(D), m))
            y = x + (rho * th if n == 1 else rho[:, None] * th)
            ny = np.abs(y) if n == 1 else np.linalg.norm(y, axis=1)
            vx = field(x)
            parts["Q"].append(np.abs(field(y) - vx) / rho ** sigma)
            parts["fac"].append(np.where(ny <= L, 1.0, 2.0))
            parts["dec"].append(np.floor(np.log10(rho / delta)).astype(np.int16))
            gx = grad(x)
            dd = gx * th if n == 1 else np.sum(gx * th, axis=1)
            parts["zn"].append(np.nan_to_num(np.abs(dd), nan=np.inf) * delta ** (1.0 - sigma))
            parts["zf"].append(np.abs(vx) / D ** sigma)
        for k, val in parts.items():
            setattr(self, k, np.concatenate(val))
        self.c_mid = vol * area * math.log(D / delta)
        self.c_near = vol * area / (1.0 - sigma)
        self.c_far = 2.0 * vol * area / sigma

    def samples(self, A, lam):
        G = _primitive_over_t(A)
        with np.errstate(invalid="ignore", over="ignore"):
            return (self.c_mid * self.fac * np.asarray(A(self.Q / lam), dtype=float)
                    + self.c_near * G(self.zn / lam) + self.c_far * G(self.zf / lam))

    def modular(self, A, lam):
        t = self.samples(A, lam)
        if not np.all(np.isfinite(t)):
            return math.inf, 0.0, ["Diverges"]
        return float(t.mean()), float(t.std(ddof=1) / math.sqrt(len(t))), self._divergence(A, lam)

    def _divergence(self, A, lam):
        # a convergent modular has per-decade contributions dying out as |x-y| -> 0
        with np.errstate(invalid="ignore", over="ignore"):
            mid = self.fac * np.asarray(A(self.Q / lam), dtype=float)
        per = np.bincount(self.dec, weights=mid)
        if len(per) < 4 or per.max() <= 0:
            return []
        low, ref = per[:2].sum(), per[2:4].sum()
        return ["Diverges"] if ref > 0 and low >= 0.5 * ref and low >= 1e-3 * per.sum() else []


# ---------------------------------------------------------------------------
# public estimators
# ---------------------------------------------------------------------------

@dataclass
class ModularEstimate:
    value: float
    stderr: float
    method: str
    seed: object = None
    N: int = None
    status: str = "Ok"
    flags: list = field(default_factory=list)

    def __float__(self):
        return float(self.value)

    def to_json(self):
        d = asdict(self)
        return json.dumps({k: d[k] for k in ("value", "stderr", "method", "seed", "N", "status", "flags")},
                          default=float)


class _Callable:
    """Adapter giving a plain callable the interface the plans need."""

    def __init__(self, fn, params, support, breakpoints=(), grad=None):
        self.fn, self.n = fn, params.n
        self.exponent = float(params.s)
        self.support_radius = float(support)
        self._bp = np.asarray(breakpoints, dtype=float)
        self._grad = grad
        self.radial = False

    def field(self, x):
        return np.asarray(self.fn(x), dtype=float)

    def field_gradient(self, x, eps=1e-7):
        if self._grad is not None:
            return self._grad(x)
        h = eps * self.support_radius
        if self.n == 1:
            return (self.field(x + h) - self.field(x - h)) / (2 * h)
        return np.stack([(self.field(x + h * e) - self.field(x - h * e)) / (2 * h)
                         for e in np.eye(self.n)], axis=1)

    def breakpoints(self):
        L = self.support_radius
        return np.unique(np.concatenate([self._bp, [-L, L]]))


_PLAN_CACHE = {}
_PLAN_LOCK = threading.Lock()


def _plan(u, method, seed, N):
    key = (id(u), method, seed, N)
    with _PLAN_LOCK:
        hit = _PLAN_CACHE.get(key)
    if hit is not None and hit[0] is u:
        return hit[1]
    if method == "RadialQuadrature":
        if u.n == 1:
            plan = _QuadraturePlan1D(u.field, u.exponent, u.support_radius, u.breakpoints())
        elif getattr(u, "radial", False) and u.kind == "Radial":
            plan = _QuadraturePlanRadial(u)
        else:
            raise DomainError("RadialQuadrature needs n = 1 or a Radial trial")
    elif method == "MonteCarlo":
        plan = _MonteCarloPlan(u.field, u.field_gradient, u.exponent, u.n, u.support_radius, seed, N)
    else:
        raise ValueError("method must be RadialQuadrature or MonteCarlo")
    with _PLAN_LOCK:
        if len(_PLAN_CACHE) > 64:
            _PLAN_CACHE.clear()
        _PLAN_CACHE[key] = (u, plan)
    return plan


def _resolve(u, params, support, breakpoints):
    if isinstance(u, TrialFunction):
        return u
    if not callable(u):
        raise TypeError("u must be a TrialFunction or a callable")
    if support is None:
        raise ValueError("a callable u needs support=R with u constant (zero) outside |x| <= R")
    return _Callable(u, params, support, breakpoints)


def _jump_diverges(A, u, lam):
    """n = 1: a jump of size c in the field contributes about int^inf A(c t^sigma / lam) t^-2 dt.

    Rescaling t shows that divergence does not depend on c / lam, so the
    test is run on A(t^sigma) t^-2; ``lam`` is kept for the call signature.
    """
    if u.n != 1:
        return False
    b = u.breakpoints()
    eps = 1e-12 * max(u.support_radius, 1.0)
    jumps = np.abs(u.field(b + eps) - u.field(b - eps))
    scale = np.max(np.abs(u.field(np.linspace(-u.support_radius, u.support_radius, 101))))
    if not np.any(jumps > 1e-6 * max(scale, 1e-300)):
        return False
    sig = u.exponent
    return classify_integral(lambda t: A(t ** sig) / t ** 2, "infinity")[0] == "Diverges"


def gagliardo_modular(A, params, u, method="RadialQuadrature", seed=None, N=10 ** 6,
                      lam=1.0, rel_cap=None, support=None, breakpoints=()):
    """J(u/lam) = int int A(|u(x)-u(y)| / (lam |x-y|^s)) |x-y|^-n dx dy.

    For higher-order trial functions the field u' and the fractional part of
    s are used.  MonteCarlo requires ``seed``; the standard error is reported
    and the status is Inconclusive when it exceeds ``rel_cap`` relative.
    """
    params = _as_params(params)
    u = _resolve(u, params, support, breakpoints)
    if not 0 < u.exponent < 1:
        raise DomainError("the modular is taken with an exponent in (0, 1); got %g" % u.exponent)
    plan = _plan(u, method, seed, N)
    value, err, flags = plan.modular(A, lam)
    if "Diverges" not in flags and _jump_diverges(A, u, lam):
        value, flags = math.inf, flags + ["Diverges", "jump"]
    status = "Diverges" if "Diverges" in flags else "Ok"
    if status == "Ok" and rel_cap is not None and value > 0 and err > rel_cap * value:
        status = "Inconclusive"
    return ModularEstimate(value, err, method, seed if method == "MonteCarlo" else None,
                           N if method == "MonteCarlo" else None, status, flags)


def seminorm(A, params, u, method="RadialQuadrature", seed=None, N=10 ** 6, support=None, breakpoints=()):
    """inf{lam : J(u/lam) <= 1} by bisection on log lam (plan reused across lam)."""
    params = _as_params(params)
    u = _resolve(u, params, support, breakpoints)
    plan = _plan(u, method, seed, N)

    if _jump_diverges(A, u, 1.0):
        return NormResult(math.inf, math.inf, 0, True, ["InfiniteSeminorm", "jump"])

    def M(lam):
        return plan.modular(A, lam)[0]

    if not np.any(plan.Q > 0) and not np.any(getattr(plan, "zf", np.zeros(1)) > 0):
        return NormResult(0.0, 0.0, 0)
    res = _bisect_luxemburg(M)
    if res.infinite:
        res.flags.append("InfiniteSeminorm")
    return res


# ---------------------------------------------------------------------------
# pointwise checks
# ---------------------------------------------------------------------------

class PairSampler:
    """Deterministic pairs (x, y) stratified over decades of |x - y|.

    For each stratum [10^a, 10^(a + 1/per_decade)] ``per_stratum`` pairs are
    drawn: x uniform in the cube [-box, box]^n, |x - y| log-uniform in the
    stratum, direction uniform.  ``extra`` pairs are appended verbatim.
    """

    def __init__(self, n, seed, box=1.0, decades=(-6, 1), per_decade=4, per_stratum=64, extra=()):
        self.n, self.seed, self.box = n, seed, float(box)
        self.decades, self.per_decade, self.per_stratum = decades, per_decade, per_stratum
        self.extra = list(extra)

    def refined(self):
        """Same strata, twice the pairs per stratum."""
        return PairSampler(self.n, self.seed, self.box, self.decades, self.per_decade,
                           2 * self.per_stratum, self.extra)

    def pairs(self):
        n = self.n
        lo, hi = self.decades
        k = int(round((hi - lo) * self.per_decade))
        edges = np.linspace(lo, hi, k + 1)
        rng = np.random.default_rng(np.random.SeedSequence(self.seed))
        m = self.per_stratum
        xs, ys = [], []
        for a, b in zip(edges[:-1], edges[1:]):
            x = rng.uniform(-self.box, self.box, (m, n))
            d = 10.0 ** rng.uniform(a, b, m)
            th = rng.standard_normal((m, n))
            th /= np.linalg.norm(th, axis=1, keepdims=True)
            xs.append(x)
            ys.append(x + d[:, None] * th)
        for x, y in self.extra:
            xs.append(np.reshape(np.asarray(x, float), (1, n)))
            ys.append(np.reshape(np.asarray(y, float), (1, n)))
        x, y = np.concatenate(xs), np.concatenate(ys)
        return (x[:, 0], y[:, 0]) if n == 1 else (x, y)


def _dist(x, y):
    d = np.asarray(x, float) - np.asarray(y, float)
    return np.abs(d) if d.ndim == 1 else np.linalg.norm(d, axis=1)


def holder_quotient(u, omega, sampler):
    """max over the sampler's pairs of |u(x) - u(y)| / omega(|x - y|)."""
    x, y = sampler.pairs()
    d = _dist(x, y)
    keep = d > 0
    num = np.abs(np.asarray(u(x), float) - np.asarray(u(y), float))[keep]
    q = num / np.asarray(omega(d[keep]), dtype=float)
    return float(q.max()) if q.size else 0.0


# c in |u(x)-u(y)| <= c |x-y|^s B^-1(J/|x-y|^n) per (n, s): maxima over the
# calibration battery (calibration.calibrate_modular_bound), rounded up
MODULAR_BOUND_CONSTANTS = {(1, 0.5): 1.098, (2, 0.5): 0.4}

# c in seminorm(u) <= c ||f||_A per trial kind (calibration.calibrate_trial_bound), rounded up
TRIAL_BOUND_CONSTANTS = {"Radial": 4.092, "Odd": 4.092}


def _conjugate_of_E(A, params):
    from .modulus import _built
    return NumericConjugate(_built(build_E, A, params)).table


def check_modular_bound(A, params, u, x, y, c=None, J=None, method="RadialQuadrature", seed=None, N=10 ** 6):
    """Check |u(x)-u(y)| <= c |x-y|^s B^-1(J(u)/|x-y|^n), B the conjugate of E.

    Returns a dict with per-pair ratios |u(x)-u(y)| / (|x-y|^s B^-1(...)).
    """
    params = _as_params(params)
    s, n = float(params.s), params.n
    if not 0 < s < 1:
        raise DomainError("the modular bound is stated for 0 < s < 1")
    if c is None:
        key = (n, s)
        if key not in MODULAR_BOUND_CONSTANTS:
            raise KeyError("no frozen constant for (n, s) = %r; pass c" % (key,))
        c = MODULAR_BOUND_CONSTANTS[key]
    if J is None:
        J = gagliardo_modular(A, params, u, method=method, seed=seed, N=N).value
    rep = {"J": float(J), "c": float(c)}
    if not math.isfinite(J):
        raise PreconditionError("J(u) is infinite", rep)
    B = _conjugate_of_E(A, params)
    d = _dist(x, y)
    lhs = np.abs(np.asarray(u(x), float) - np.asarray(u(y), float))
    unit = d ** s * np.asarray(B.inverse(J / d ** n), dtype=float)
    with np.errstate(divide="ignore", invalid="ignore"):
        ratio = np.where(lhs > 0, lhs / unit, 0.0)
    rep.update(lhs=lhs, rhs=c * unit, ratio=ratio, max_ratio=float(ratio.max()) if ratio.size else 0.0)
    rep["passed"] = bool(np.all(lhs <= c * unit))
    return rep
