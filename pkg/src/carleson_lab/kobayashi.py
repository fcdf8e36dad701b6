"""Kobayashi metric and distance estimates on convex domains.

Everything is expressed in the tanh convention: the ball of radius r in (0,1)
around z0 is {z : tanh d_K(z0, z) < r}.  Exact distances exist for the disk
and the ball; elsewhere the module provides certified two-sided infinitesimal
bounds, certified upper bounds on distances (shortest piecewise-linear path
measured in the upper metric), and the polydisk sandwich of Kobayashi balls
coming from the minimal frame.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from numpy.polynomial.legendre import leggauss
from scipy import optimize

from . import domains, geometry
from .domains import DomainSpec, as_point, defining_value
from .errors import CapabilityError, ConfigError, InputError
from .geometry import MinimalFrame, Polydisk, minimal_frame

_GAUSS_NODES = 16
_BATCH_PHASES = 48

INSIDE = "inside"
OUTSIDE = "outside"
UNCERTAIN = "uncertain"


# ---------------------------------------------------------------------------
# infinitesimal bounds


@dataclass(frozen=True)
class MetricBound:
    lower: float
    upper: float


def metric_bounds(spec: DomainSpec, z, v) -> MetricBound:
    """Two-sided convexity estimate |v|/(2 delta(z;v)) <= k_D(z;v) <= |v|/delta(z;v)."""
    z = as_point(spec, z)
    v = np.asarray(v, dtype=complex)
    nv = float(np.linalg.norm(v))
    if nv == 0.0:
        return MetricBound(0.0, 0.0)
    delta = domains.line_boundary_distance(spec, z, v)
    return MetricBound(lower=nv / (2.0 * delta), upper=nv / delta)


def exact_metric_model(spec: DomainSpec, z, v) -> float:
    """Kobayashi metric of the disk/ball (closed form); capability error elsewhere."""
    if spec.kind not in ("disk", "ball"):
        raise CapabilityError(f"no exact Kobayashi metric for kind {spec.kind!r}")
    z = as_point(spec, z)
    v = np.asarray(v, dtype=complex)
    zz = float(np.vdot(z, z).real)
    vz = complex(np.sum(v * np.conj(z)))
    s = 1.0 - zz
    return math.sqrt(float(np.vdot(v, v).real) / s + abs(vz) ** 2 / s**2)


# ---------------------------------------------------------------------------
# exact model distances (disk and ball)


def tanh_distance_model(spec: DomainSpec, z, w) -> float:
    """Pseudohyperbolic distance tanh d_K on the disk/ball."""
    if spec.kind not in ("disk", "ball"):
        raise CapabilityError(f"no exact Kobayashi distance for kind {spec.kind!r}")
    z = as_point(spec, z)
    w = as_point(spec, w)
    zw = complex(np.sum(z * np.conj(w)))
    num = (1.0 - float(np.vdot(z, z).real)) * (1.0 - float(np.vdot(w, w).real))
    rho_sq = 1.0 - num / abs(1.0 - zw) ** 2
    return math.sqrt(max(rho_sq, 0.0))


def exact_distance_model(spec: DomainSpec, z, w) -> float:
    return math.atanh(min(tanh_distance_model(spec, z, w), 1.0 - 1e-16))


def tanh_distance_model_batch(spec: DomainSpec, z, pts: np.ndarray) -> np.ndarray:
    """Vectorized pseudohyperbolic distance from one point to a batch."""
    if spec.kind not in ("disk", "ball"):
        raise CapabilityError(f"no exact Kobayashi distance for kind {spec.kind!r}")
    z = as_point(spec, z)
    pts = np.asarray(pts, dtype=complex)
    zw = pts @ np.conj(z)
    sq = (pts.real**2 + pts.imag**2).sum(axis=-1)
    num = (1.0 - float(np.vdot(z, z).real)) * (1.0 - sq)
    rho_sq = 1.0 - num / np.abs(1.0 - zw) ** 2
    return np.sqrt(np.clip(rho_sq, 0.0, None))


def mobius_translation(spec: DomainSpec, a, w) -> np.ndarray:
    """Automorphism of the disk/ball swapping 0 and a; acts on batches (..., n)."""
    if spec.kind not in ("disk", "ball"):
        raise CapabilityError(f"no Mobius translation for kind {spec.kind!r}")
    a = as_point(spec, a)
    w = np.asarray(w, dtype=complex)
    aa = float(np.vdot(a, a).real)
    if aa < 1e-28:
        return -w
    s = math.sqrt(1.0 - aa)
    wa = w @ np.conj(a)  # <w, a>
    proj = (wa / aa)[..., None] * a
    orth = w - proj
    return (a - proj - s * orth) / (1.0 - wa)[..., None]


# ---------------------------------------------------------------------------
# batched line distances (quadrature backend)


def _line_distance_batch(
    spec: DomainSpec,
    pts: np.ndarray,
    direction: np.ndarray,
    phases: int = _BATCH_PHASES,
) -> np.ndarray:
    """Distance to the boundary within z + C*direction for each z in pts.

    Vectorized phase-grid bisection plus one parabolic phase refinement pass;
    relative accuracy around 1e-6, adequate for path quadrature.
    """
    pts = np.asarray(pts, dtype=complex)
    v = np.asarray(direction, dtype=complex)
    v = v / np.linalg.norm(v)

    if spec.kind in ("disk", "ball"):
        b = pts @ np.conj(v)  # <z, v>
        sq = (pts.real**2 + pts.imag**2).sum(axis=-1)
        return np.sqrt(np.abs(b) ** 2 + 1.0 - sq) - np.abs(b)

    m = pts.shape[0]
    theta = np.linspace(0.0, 2.0 * math.pi, phases, endpoint=False)
    dirs = np.exp(1j * theta)[None, :, None] * v[None, None, :]  # (1, phases, n)

    def g(t: np.ndarray) -> np.ndarray:  # t: (m, phases)
        probe = pts[:, None, :] + t[..., None] * dirs
        return domains._value_batch(spec, probe)

    tmax = 2.0 * float(np.sum(2.0 * np.asarray(spec.box))) + 1.0
    hi = np.full((m, phases), tmax)
    for _ in range(8):
        bad = g(hi) <= 0.0
        if not bad.any():
            break
        hi[bad] *= 2.0
    lo = np.zeros((m, phases))
    for _ in range(48):
        mid = 0.5 * (lo + hi)
        pos = g(mid) > 0.0
        hi = np.where(pos, mid, hi)
        lo = np.where(pos, lo, mid)
    roots = 0.5 * (lo + hi)

    # parabolic refinement of the best phase per point
    jbest = np.argmin(roots, axis=1)
    rows = np.arange(m)
    r0 = roots[rows, (jbest - 1) % phases]
    r1 = roots[rows, jbest]
    r2 = roots[rows, (jbest + 1) % phases]
    denom = r0 - 2.0 * r1 + r2
    shift = np.where(np.abs(denom) > 1e-30, 0.5 * (r0 - r2) / np.where(denom == 0, 1, denom), 0.0)
    shift = np.clip(shift, -1.0, 1.0)
    span = 2.0 * math.pi / phases
    theta_ref = theta[jbest] + shift * span
    dirs_ref = np.exp(1j * theta_ref)[:, None] * v[None, :]

    hi1 = np.maximum(r1 * 1.5, 1e-12)
    vals = domains._value_batch(spec, pts + hi1[:, None] * dirs_ref)
    for _ in range(8):
        bad = vals <= 0.0
        if not bad.any():
            break
        hi1[bad] *= 2.0
        vals = domains._value_batch(spec, pts + hi1[:, None] * dirs_ref)
    lo1 = np.zeros(m)
    for _ in range(48):
        mid = 0.5 * (lo1 + hi1)
        pos = domains._value_batch(spec, pts + mid[:, None] * dirs_ref) > 0.0
        hi1 = np.where(pos, mid, hi1)
        lo1 = np.where(pos, lo1, mid)
    refined = 0.5 * (lo1 + hi1)
    return np.minimum(roots.min(axis=1), refined)


# ---------------------------------------------------------------------------
# distance upper bounds via piecewise-linear paths


_gauss_cache: dict[int, tuple[np.ndarray, np.ndarray]] = {}


def _gauss01(nodes: int) -> tuple[np.ndarray, np.ndarray]:
    if nodes not in _gauss_cache:
        x, w = leggauss(nodes)
        _gauss_cache[nodes] = (0.5 * (x + 1.0), 0.5 * w)
    return _gauss_cache[nodes]


def _segment_upper_length(spec: DomainSpec, a: np.ndarray, b: np.ndarray, nodes: int) -> float:
    """Integral of the upper metric |gamma'| / delta(gamma; gamma') along [a,b]."""
    delta_vec = b - a
    length = float(np.linalg.norm(delta_vec))
    if length == 0.0:
        return 0.0
    t, w = _gauss01(nodes)
    probe = a[None, :] + t[:, None] * delta_vec[None, :]
    if np.any(domains._value_batch(spec, probe) >= 0.0):
        return math.inf
    dists = _line_distance_batch(spec, probe, delta_vec)
    return float(np.sum(w * length / dists))


def _path_upper_length(spec: DomainSpec, knots: np.ndarray, nodes: int) -> float:
    total = 0.0
    for i in range(len(knots) - 1):
        total += _segment_upper_length(spec, knots[i], knots[i + 1], nodes)
        if not math.isfinite(total):
            return math.inf
    return total


def distance_upper(
    spec: DomainSpec,
    z,
    w,
    refinement: int = 2,
    nodes: int = _GAUSS_NODES,
) -> float:
    """Certified (within quadrature tolerance) upper bound on d_K(z, w).

    Minimizes the upper-metric length over piecewise-linear paths; level L has
    2^L - 1 movable interior knots, warm-started by subdividing the previous
    level, so the bound is nonincreasing in ``refinement``.
    """
    z = as_point(spec, z)
    w = as_point(spec, w)
    for p in (z, w):
        if not float(defining_value(spec, p)) < 0.0:
            raise InputError("distance_upper expects interior endpoints")
    if refinement < 0:
        raise ConfigError(f"refinement must be >= 0, got {refinement}")

    knots = np.array([z, w])
    best = _path_upper_length(spec, knots, nodes)
    for _ in range(refinement):
        mid = 0.5 * (knots[:-1] + knots[1:])
        knots = np.concatenate([np.stack([knots[i], mid[i]]) for i in range(len(mid))] + [knots[-1:]])
        knots, value = _descend_knots(spec, knots, nodes)
        best = min(best, value)
    return best


def _descend_knots(spec: DomainSpec, knots: np.ndarray, nodes: int) -> tuple[np.ndarray, float]:
    """Coordinate descent over interior knots until improvement < 1e-6."""
    knots = knots.copy()
    current = _path_upper_length(spec, knots, nodes)
    for _ in range(8):
        improved = 0.0
        for i in range(1, len(knots) - 1):
            a, b = knots[i - 1], knots[i + 1]
            local = _segment_upper_length(spec, a, knots[i], nodes) + _segment_upper_length(
                spec, knots[i], b, nodes
            )

            def objective(x: np.ndarray) -> float:
                p = domains.to_complex(x)
                value = _segment_upper_length(spec, a, p, nodes) + _segment_upper_length(
                    spec, p, b, nodes
                )
                # finite penalty keeps Powell's parabolic steps well defined
                return value if math.isfinite(value) else 1e12

            res = optimize.minimize(
                objective,
                domains.to_real(knots[i]),
                method="Powell",
                options={"maxfev": 80 * knots.shape[1], "xtol": 1e-8, "ftol": 1e-9},
            )
            if res.fun < local:
                improved += local - res.fun
                knots[i] = domains.to_complex(res.x)
        current = _path_upper_length(spec, knots, nodes)
        if improved < 1e-6:
            break
    return knots, current


# ---------------------------------------------------------------------------
# Kobayashi balls: polydisk sandwich and membership


@dataclass(frozen=True)
class BallSandwich:
    """Certified polydisk sandwich of the Kobayashi ball B_D(center, radius)."""

    center: np.ndarray
    radius: float
    frame: MinimalFrame
    inner: Polydisk
    outer: Polydisk


def ball_sandwich(spec: DomainSpec, z0, r: float, frame: MinimalFrame | None = None) -> BallSandwich:
    """Polydisk sandwich (r/n) D^n(sigma)  subset  B_D(z0,r)  subset  (2r/(1-r)) D^n(sigma)."""
    if not 0.0 < r < 1.0:
        raise InputError(f"tanh radius must lie in (0, 1), got {r}")
    z0 = as_point(spec, z0)
    frame = frame if frame is not None else minimal_frame(spec, z0)
    n = spec.dim
    inner = geometry.frame_polydisk(frame, r / n)
    outer = geometry.frame_polydisk(frame, 2.0 * r / (1.0 - r))
    return BallSandwich(center=z0, radius=r, frame=frame, inner=inner, outer=outer)


def ball_membership(
    spec: DomainSpec,
    z0,
    r: float,
    z,
    sandwich: BallSandwich | None = None,
    use_path: bool = True,
    path_refinement: int = 1,
) -> str:
    """Classify z against the Kobayashi ball B_D(z0, r): inside/outside/uncertain.

    Disk and ball use the exact oracle; other domains use the polydisk
    sandwich, falling back to the path upper bound to certify 'inside'.
    """
    if not 0.0 < r < 1.0:
        raise InputError(f"tanh radius must lie in (0, 1), got {r}")
    z = as_point(spec, z)
    if spec.kind in ("disk", "ball"):
        return INSIDE if tanh_distance_model(spec, z0, z) < r else OUTSIDE
    sw = sandwich if sandwich is not None else ball_sandwich(spec, z0, r)
    if geometry.polydisk_contains(sw.inner, z):
        return INSIDE
    if not geometry.polydisk_contains(sw.outer, z):
        return OUTSIDE
    if use_path and math.tanh(distance_upper(spec, sw.center, z, refinement=path_refinement)) < r:
        return INSIDE
    return UNCERTAIN


def bracket_tanh_distance(
    spec: DomainSpec,
    x,
    y,
    frame_x: MinimalFrame | None = None,
    frame_y: MinimalFrame | None = None,
    with_upper: bool = False,
) -> tuple[float, float]:
    """Certified bracket [low, high] for tanh d_K(x, y).

    The lower bound inverts the outer polydisk inclusion: if the frame ratio
    max_i |<y-x, e_i>| / sigma_i equals m, then tanh d >= m / (2 + m).
    """
    x = as_point(spec, x)
    y = as_point(spec, y)
    if spec.kind in ("disk", "ball"):
        rho = tanh_distance_model(spec, x, y)
        return rho, rho
    low = 0.0
    for point, other, frame in ((x, y, frame_x), (y, x, frame_y)):
        fr = frame if frame is not None else minimal_frame(spec, point)
        ratios = np.abs(np.conj(fr.basis) @ (other - point)) / fr.sigma
        m = float(ratios.max())
        low = max(low, m / (2.0 + m))
    high = 1.0
    if with_upper:
        high = math.tanh(distance_upper(spec, x, y, refinement=0))
        high = max(high, low)
    return low, high


# ---------------------------------------------------------------------------
# log-envelope calibration


@dataclass(frozen=True)
class LogEnvelope:
    c1: float
    c2: float
    residuals: np.ndarray
    deltas: np.ndarray


def boundary_ray_samples(
    spec: DomainSpec,
    direction,
    deltas,
    anchor=None,
) -> np.ndarray:
    """Points along the chord anchor -> boundary with prescribed boundary distances."""
    anchor = as_point(spec, anchor if anchor is not None else domains.anchor_point(spec))
    v = np.asarray(direction, dtype=complex)
    v = v / np.linalg.norm(v)
    t_b = domains._ray_root(spec, anchor, v, 0.0)
    bpt = anchor + t_b * v
    out = np.empty((len(deltas), spec.dim), dtype=complex)
    for i, d in enumerate(deltas):
        if spec.kind in ("disk", "ball"):
            out[i] = bpt * (1.0 - d)  # anchor is the origin for the models
            continue
        lo, hi = 0.0, 1.0 - 1e-12
        for _ in range(60):
            mid = 0.5 * (lo + hi)
            pt = anchor + mid * (bpt - anchor)
            if domains.boundary_distance(spec, pt) > d:
                lo = mid
            else:
                hi = mid
        out[i] = anchor + 0.5 * (lo + hi) * (bpt - anchor)
    return out


def calibrate_log_envelope(spec: DomainSpec, z0, points) -> LogEnvelope:
    """Residuals d_K(z0, z) + 0.5 log delta_D(z) over boundary-approaching samples.

    Returns the empirical envelope (C1, C2) = (min, max) of the residuals.  On
    the disk/ball d_K is exact; elsewhere the path upper bound is used, so only
    C2 is certified there.
    """
    z0 = as_point(spec, z0)
    pts = np.atleast_2d(np.asarray(points, dtype=complex))
    if len(pts) < 10:
        raise ConfigError(f"need at least 10 calibration samples, got {len(pts)}")
    deltas = np.array([domains.boundary_distance(spec, p) for p in pts])
    if deltas.max() / deltas.min() < 1e4:
        raise ConfigError(
            f"calibration samples must span >= 4 decades of delta, got "
            f"[{deltas.min():.3g}, {deltas.max():.3g}]"
        )
    res = np.empty(len(pts))
    for i, p in enumerate(pts):
        if spec.kind in ("disk", "ball"):
            d = exact_distance_model(spec, z0, p)
        else:
            d = distance_upper(spec, z0, p, refinement=1)
        res[i] = d + 0.5 * math.log(deltas[i])
    return LogEnvelope(c1=float(res.min()), c2=float(res.max()), residuals=res, deltas=deltas)
