"""Bounded convex model domains in C^n with global polynomial defining functions.

A domain is D = {r < 0} for a smooth convex polynomial r on R^(2n).  Four kinds
are supported:

* ``disk``        r(z) = |z|^2 - 1 in C^1
* ``ball``        r(z) = |z|^2 - 1 in C^n
* ``ellipsoid``   r(z) = sum_i (|z_i|^2 / a_i^2)^(m_i) - 1
* ``polynomial``  r given term by term over the 2n real coordinates

Points are numpy arrays of shape (n,) with dtype complex128.  Real coordinates
are interleaved (x_1, y_1, ..., x_n, y_n), matching the CLI point syntax.

Construction validates three things on a seeded sample: the anchor is interior,
the sublevel set stays inside the declared coordinate box, and r is midpoint
quasi-convex along random segments.  A violation rejects the spec.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterable, Sequence

import numpy as np
from scipy import optimize, special
from scipy.stats import qmc

from .errors import CapabilityError, ConfigError, InputError, NumericError

KINDS = ("disk", "ball", "ellipsoid", "polynomial")

_VALIDATION_SEED = 742001
_CONVEXITY_TRIPLES = 1000
_FACE_SAMPLES = 512
_PROJECTION_STARTS = 8
_REL_TOL = 1e-8

# ---------------------------------------------------------------------------
# spec


@dataclass(frozen=True)
class DomainSpec:
    """Immutable description of a bounded convex domain.

    ``box`` holds one half-width per complex coordinate; the validation box is
    the polydisk of squares {|x_i| <= box_i, |y_i| <= box_i}.  ``collar`` is
    the collar width as a fraction of the inradius.
    """

    kind: str
    dim: int
    exponents: tuple[int, ...] = ()
    semi_axes: tuple[float, ...] = ()
    terms: tuple[tuple[float, tuple[int, ...]], ...] = ()
    box: tuple[float, ...] = ()
    anchor: tuple[float, ...] = ()
    collar: float = 0.2

    def __post_init__(self):
        _validate(self)

    @property
    def n(self) -> int:
        return self.dim


def unit_disk(collar: float = 0.2) -> DomainSpec:
    return DomainSpec(kind="disk", dim=1, box=(1.05,), anchor=(0.0, 0.0), collar=collar)


def unit_ball(dim: int, collar: float = 0.2) -> DomainSpec:
    if dim < 1:
        raise ConfigError(f"ball dimension must be >= 1, got {dim}")
    return DomainSpec(
        kind="ball", dim=dim, box=(1.05,) * dim, anchor=(0.0,) * (2 * dim), collar=collar
    )


def complex_ellipsoid(
    exponents: Sequence[int], semi_axes: Sequence[float] | None = None, collar: float = 0.2
) -> DomainSpec:
    exps = tuple(int(m) for m in exponents)
    if not exps or any(m < 1 for m in exps):
        raise ConfigError(f"ellipsoid exponents must be positive integers, got {exponents}")
    axes = tuple(float(a) for a in (semi_axes if semi_axes is not None else (1.0,) * len(exps)))
    if len(axes) != len(exps) or any(a <= 0 for a in axes):
        raise ConfigError(f"semi_axes must match exponents and be positive, got {semi_axes}")
    dim = len(exps)
    return DomainSpec(
        kind="ellipsoid",
        dim=dim,
        exponents=exps,
        semi_axes=axes,
        box=tuple(1.05 * a for a in axes),
        anchor=(0.0,) * (2 * dim),
        collar=collar,
    )


def convex_polynomial(
    terms: Iterable[tuple[float, Sequence[int]]],
    dim: int,
    box: Sequence[float],
    anchor: Sequence[float] | None = None,
    collar: float = 0.2,
) -> DomainSpec:
    tt = tuple((float(c), tuple(int(p) for p in pw)) for c, pw in terms)
    for _, pw in tt:
        if len(pw) != 2 * dim or any(p < 0 for p in pw):
            raise ConfigError(f"term powers must be {2 * dim} nonnegative integers, got {pw}")
    anchor = tuple(anchor) if anchor is not None else (0.0,) * (2 * dim)
    return DomainSpec(
        kind="polynomial",
        dim=dim,
        terms=tt,
        box=tuple(float(b) for b in box),
        anchor=anchor,
        collar=collar,
    )


# ---------------------------------------------------------------------------
# point helpers


def as_point(spec: DomainSpec, z) -> np.ndarray:
    """Coerce scalars/sequences to a complex (n,) array and check finiteness."""
    arr = np.atleast_1d(np.asarray(z, dtype=complex))
    if arr.shape != (spec.dim,):
        raise InputError(f"expected a point in C^{spec.dim}, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise InputError(f"point has non-finite entries: {arr}")
    return arr


def to_real(z: np.ndarray) -> np.ndarray:
    """Interleave (..., n) complex into (..., 2n) reals (x1, y1, x2, y2, ...)."""
    z = np.asarray(z, dtype=complex)
    out = np.empty(z.shape[:-1] + (2 * z.shape[-1],), dtype=float)
    out[..., 0::2] = z.real
    out[..., 1::2] = z.imag
    return out


def to_complex(x: np.ndarray) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    return x[..., 0::2] + 1j * x[..., 1::2]


def anchor_point(spec: DomainSpec) -> np.ndarray:
    return to_complex(np.asarray(spec.anchor, dtype=float))


# ---------------------------------------------------------------------------
# defining function and gradient


def defining_value(spec: DomainSpec, z) -> float | np.ndarray:
    """Evaluate r at one point (n,) or a batch (..., n)."""
    z = np.asarray(z, dtype=complex)
    single = z.ndim == 1
    val = _value_batch(spec, np.atleast_2d(z))
    return float(val[0]) if single else val.reshape(z.shape[:-1])


def _value_batch(spec: DomainSpec, z: np.ndarray) -> np.ndarray:
    sq = z.real**2 + z.imag**2
    if spec.kind in ("disk", "ball"):
        return sq.sum(axis=-1) - 1.0
    if spec.kind == "ellipsoid":
        a2 = np.asarray(spec.semi_axes) ** 2
        m = np.asarray(spec.exponents)
        return ((sq / a2) ** m).sum(axis=-1) - 1.0
    x = to_real(z)
    out = np.zeros(z.shape[:-1])
    for coeff, powers in spec.terms:
        mono = np.ones(z.shape[:-1])
        for j, p in enumerate(powers):
            if p:
                mono = mono * x[..., j] ** p
        out += coeff * mono
    return out


def defining_gradient(spec: DomainSpec, z) -> np.ndarray:
    """Real gradient of r, interleaved layout, shape (..., 2n)."""
    z = np.asarray(z, dtype=complex)
    x = to_real(z)
    if spec.kind in ("disk", "ball"):
        return 2.0 * x
    if spec.kind == "ellipsoid":
        sq = z.real**2 + z.imag**2
        a2 = np.asarray(spec.semi_axes) ** 2
        m = np.asarray(spec.exponents)
        u = sq / a2
        factor = m * np.where(u > 0, u, 1.0) ** (m - 1) / a2  # u^0 at the axis when m=1
        factor = np.where((u == 0) & (m > 1), 0.0, factor)
        grad = np.empty_like(x)
        grad[..., 0::2] = 2.0 * z.real * factor
        grad[..., 1::2] = 2.0 * z.imag * factor
        return grad
    grad = np.zeros_like(x)
    for coeff, powers in spec.terms:
        for j, p in enumerate(powers):
            if not p:
                continue
            mono = np.ones(z.shape[:-1])
            for k, q in enumerate(powers):
                e = q - 1 if k == j else q
                if e:
                    mono = mono * x[..., k] ** e
            grad[..., j] += coeff * p * mono
    return grad


def contains(spec: DomainSpec, z) -> bool | np.ndarray:
    val = defining_value(spec, z)
    return val < 0.0


# ---------------------------------------------------------------------------
# construction-time validation


@lru_cache(maxsize=128)
def _validation_report(spec: DomainSpec) -> tuple[float, float]:
    """Return (min r on box faces, worst convexity defect)."""
    rng = np.random.default_rng(_VALIDATION_SEED)
    n, box = spec.dim, np.asarray(spec.box, dtype=float)
    if len(box) != n or np.any(box <= 0):
        raise ConfigError(f"box must hold {n} positive half-widths, got {spec.box}")
    # faces of the 2n-cube
    face_min = math.inf
    wide = np.repeat(box, 2)
    for j in range(2 * n):
        pts = rng.uniform(-1.0, 1.0, size=(_FACE_SAMPLES // (2 * n) + 1, 2 * n)) * wide
        for sign in (-1.0, 1.0):
            pts[:, j] = sign * wide[j]
            vals = _value_batch(spec, to_complex(pts))
            face_min = min(face_min, float(vals.min()))
    a = rng.uniform(-1.0, 1.0, size=(_CONVEXITY_TRIPLES, 2 * n)) * wide
    b = rng.uniform(-1.0, 1.0, size=(_CONVEXITY_TRIPLES, 2 * n)) * wide
    ra = _value_batch(spec, to_complex(a))
    rb = _value_batch(spec, to_complex(b))
    rm = _value_batch(spec, to_complex(0.5 * (a + b)))
    defect = float(np.max(rm - np.maximum(ra, rb)))
    return face_min, defect


def _validate(spec: DomainSpec) -> None:
    if spec.kind not in KINDS:
        raise ConfigError(f"unknown domain kind {spec.kind!r}, expected one of {KINDS}")
    if spec.dim < 1:
        raise ConfigError(f"dimension must be >= 1, got {spec.dim}")
    if not (0.0 < spec.collar < 1.0):
        raise ConfigError(f"collar fraction must lie in (0, 1), got {spec.collar}")
    if len(spec.anchor) != 2 * spec.dim:
        raise ConfigError(f"anchor must hold {2 * spec.dim} reals, got {spec.anchor}")
    if spec.kind == "polynomial" and not spec.terms:
        raise ConfigError("polynomial domain needs at least one term")
    anchor = to_complex(np.asarray(spec.anchor, dtype=float))
    r0 = float(_value_batch(spec, anchor[None, :])[0])
    if not r0 < 0.0:
        raise InputError(f"anchor point is not interior: r(anchor) = {r0}")
    face_min, defect = _validation_report(spec)
    scale = max(1.0, abs(r0))
    if face_min <= 0.0:
        raise InputError(
            f"sublevel set {{r < 0}} is not certified bounded: min r on box faces = {face_min}"
        )
    if defect > 1e-9 * scale:
        raise InputError(f"defining function failed midpoint quasi-convexity by {defect}")


def level_cap(spec: DomainSpec) -> float:
    """Largest level value whose sublevel set is still certified inside the box."""
    face_min, _ = _validation_report(spec)
    return face_min


# ---------------------------------------------------------------------------
# distances to level sets


def _ray_root(spec: DomainSpec, q: np.ndarray, direction: np.ndarray, level: float) -> float:
    """Positive t with r(q + t*direction) = level; direction is unit length."""
    tmax = 2.0 * float(np.sum(2.0 * np.asarray(spec.box))) + 1.0
    f = lambda t: float(_value_batch(spec, (q + t * direction)[None, :])[0]) - level
    hi = tmax
    for _ in range(8):
        if f(hi) > 0.0:
            break
        hi *= 2.0
    else:
        raise NumericError(
            "ray never crosses the level set; level too high or spec unbounded",
            {"level": level, "t_max": hi},
        )
    return float(optimize.brentq(f, 0.0, hi, xtol=1e-14, rtol=1e-15))


@dataclass(frozen=True)
class ProjectionResult:
    point: np.ndarray
    distance: float
    unique: bool


def project_to_level(
    spec: DomainSpec,
    q,
    level: float = 0.0,
    basis: np.ndarray | None = None,
) -> ProjectionResult:
    """Nearest point to q on {r = level}, optionally restricted to the affine
    slice q + span_C(basis rows).

    Multi-start constrained minimization (slice axes first, then fixed
    quasi-random directions); each converged candidate is polished by a 1-d
    root along its ray so the constraint holds to near machine precision.
    Ties are broken by enumeration order, which pins symmetric centers to the
    canonical axes.
    """
    q = as_point(spec, q)
    rq = float(defining_value(spec, q))
    if not rq < level:
        raise InputError(f"point must satisfy r < level: r(q) = {rq}, level = {level}")
    if level >= level_cap(spec):
        raise NumericError(
            "level set escapes the validation box; use a smaller offset",
            {"level": level, "cap": level_cap(spec)},
        )
    if basis is None:
        basis = np.eye(spec.dim, dtype=complex)
    basis = np.atleast_2d(np.asarray(basis, dtype=complex))
    k = basis.shape[0]

    if spec.kind in ("disk", "ball") and k == spec.dim:
        radius = math.sqrt(1.0 + level)
        dist = radius - float(np.linalg.norm(q))
        nq = float(np.linalg.norm(q))
        if nq < 1e-12:
            e = np.zeros(spec.dim, dtype=complex)
            e[0] = 1.0
            return ProjectionResult(point=radius * e, distance=radius, unique=False)
        return ProjectionResult(point=q / nq * radius, distance=dist, unique=True)

    if spec.kind == "ellipsoid" and spec.dim == 2 and k == spec.dim:
        return _ellipsoid_project2(spec, q, level)

    directions = _start_directions(k)
    candidates: list[tuple[float, np.ndarray]] = []
    for d in directions:
        u_dir = d @ basis  # unit vector in C^n
        t = _ray_root(spec, q, u_dir, level)
        candidates.append((t, d * t))

    def objective(w: np.ndarray) -> float:
        return float(w @ w)

    def objective_grad(w: np.ndarray) -> np.ndarray:
        return 2.0 * w

    def constraint(w: np.ndarray) -> float:
        u = to_complex(w)
        xi = q + u @ basis
        return float(_value_batch(spec, xi[None, :])[0]) - level

    def constraint_grad(w: np.ndarray) -> np.ndarray:
        u = to_complex(w)
        xi = q + u @ basis
        g = defining_gradient(spec, xi)  # (2n,) interleaved
        out = np.empty(2 * k)
        for j in range(k):
            out[2 * j] = g @ to_real(basis[j])
            out[2 * j + 1] = g @ to_real(1j * basis[j])
        return out

    refined: list[tuple[float, np.ndarray]] = list(candidates)
    for t0, u0 in candidates:
        w0 = to_real(u0)
        res = optimize.minimize(
            objective,
            w0,
            jac=objective_grad,
            method="SLSQP",
            constraints=[{"type": "eq", "fun": constraint, "jac": constraint_grad}],
            options={"maxiter": 200, "ftol": 1e-16},
        )
        w = res.x if res.x is not None else w0
        u = to_complex(np.asarray(w))
        norm = float(np.linalg.norm(u))
        if norm < 1e-14:
            continue
        u_dir = (u / norm) @ basis
        t = _ray_root(spec, q, u_dir, level)  # polish back onto the level set
        refined.append((t, (u / norm) * t))

    # stable sort on a rounded key: exact symmetric ties resolve to the
    # canonical ray candidates, which are enumerated first
    refined.sort(key=lambda item: round(item[0], 12))
    best_t, best_u = refined[0]
    # uniqueness: near-minimal candidates must coincide with the winner
    tol_t = max(1e-9, 1e-7 * best_t)
    unique = True
    for t, u in refined[1:]:
        if t > best_t + tol_t:
            break
        if np.linalg.norm(u - best_u) > 1e-4 * max(1.0, best_t):
            unique = False
            break
    point = q + best_u @ basis
    return ProjectionResult(point=point, distance=best_t, unique=unique)


def _ellipsoid_project2(spec: DomainSpec, q: np.ndarray, level: float) -> ProjectionResult:
    """Full-space projection for two-coordinate ellipsoids.

    The constraint only sees moduli, and aligning phases with q never
    increases the distance, so the problem reduces to the plane curve
    (|z_1|^2/a_1^2)^{m_1} + (|z_2|^2/a_2^2)^{m_2} = 1 + level in the closed
    positive quadrant, minimized by a grid multistart plus bounded refinement.
    """
    a = np.asarray(spec.semi_axes, dtype=float)
    m = np.asarray(spec.exponents, dtype=float)
    c = 1.0 + level
    qm = np.abs(q)
    x2max = a[1] * c ** (1.0 / (2.0 * m[1]))

    def x1_of(x2):
        rem = c - (np.square(x2) / a[1] ** 2) ** m[1]
        return a[0] * np.clip(rem, 0.0, None) ** (1.0 / (2.0 * m[0]))

    def dist2(x2):
        return (x1_of(x2) - qm[0]) ** 2 + (x2 - qm[1]) ** 2

    grid = np.linspace(0.0, x2max, 513)
    vals = dist2(grid)
    # exact endpoints first: bounded refinement cannot land on them, and the
    # axis solutions must come out bit-exact for canonical frames
    local: list[tuple[float, float]] = [(float(vals[0]), 0.0), (float(vals[-1]), x2max)]
    for idx in range(513):
        left = vals[idx - 1] if idx > 0 else np.inf
        right = vals[idx + 1] if idx < 512 else np.inf
        if vals[idx] <= left and vals[idx] <= right:
            lo, hi = grid[max(idx - 1, 0)], grid[min(idx + 1, 512)]
            res = optimize.minimize_scalar(
                dist2, bounds=(lo, hi), method="bounded", options={"xatol": 1e-13}
            )
            local.append((float(res.fun), float(res.x)))
    local.sort(key=lambda item: round(math.sqrt(max(item[0], 0.0)), 12))
    best_d2, best_x2 = local[0]
    dist = math.sqrt(max(best_d2, 0.0))
    best = np.array([float(x1_of(best_x2)), best_x2])
    tol = max(1e-9, 1e-7 * dist)
    unique = True
    for d2, x2 in local[1:]:
        if math.sqrt(max(d2, 0.0)) > dist + tol:
            continue
        if abs(x2 - best_x2) > 1e-4 * max(1.0, dist):
            unique = False
            break
    # a positive modulus over a vanishing coordinate admits every phase
    if np.any((best > 1e-9) & (qm < 1e-12)):
        unique = False
    phase = np.where(qm > 0.0, q / np.where(qm > 0.0, qm, 1.0), 1.0 + 0.0j)
    return ProjectionResult(point=phase * best, distance=dist, unique=unique)


@lru_cache(maxsize=8)
def _start_directions(k: int) -> tuple[np.ndarray, ...]:
    """Deterministic unit starts in C^k: signed axes first, then quasi-random."""
    dirs: list[np.ndarray] = []
    for j in range(k):
        e = np.zeros(k, dtype=complex)
        e[j] = 1.0
        dirs.append(e)
    for j in range(k):
        e = np.zeros(k, dtype=complex)
        e[j] = -1.0
        dirs.append(e)
    rng = np.random.default_rng(561204)
    while len(dirs) < max(_PROJECTION_STARTS, 2 * k):
        v = rng.standard_normal(k) + 1j * rng.standard_normal(k)
        dirs.append(v / np.linalg.norm(v))
    return tuple(dirs[: max(_PROJECTION_STARTS, 2 * k)])


def boundary_distance(spec: DomainSpec, z) -> float:
    """Euclidean distance from an interior point to the boundary {r = 0}."""
    z = as_point(spec, z)
    if not float(defining_value(spec, z)) < 0.0:
        raise InputError("boundary_distance expects an interior point")
    if spec.kind in ("disk", "ball"):
        return 1.0 - float(np.linalg.norm(z))
    return project_to_level(spec, z, 0.0).distance


def boundary_distance_batch(spec: DomainSpec, pts: np.ndarray) -> np.ndarray:
    """Boundary distances for a batch of interior points (vectorized on models)."""
    pts = np.asarray(pts, dtype=complex)
    if spec.kind in ("disk", "ball"):
        return 1.0 - np.sqrt((pts.real**2 + pts.imag**2).sum(axis=-1))
    return np.array([boundary_distance(spec, p) for p in pts])


def boundary_projection(spec: DomainSpec, z) -> ProjectionResult:
    return project_to_level(spec, as_point(spec, z), 0.0)


def line_level_distance(
    spec: DomainSpec,
    z,
    v,
    level: float = 0.0,
    phases: int = 64,
) -> float:
    """Distance from z to {r = level} inside the complex line z + C v.

    The positive root t(theta) of r(z + t e^{i theta} v) = level is found by a
    vectorized bisection over a phase grid (the section is convex in t), then
    the best phase is refined by bounded scalar minimization.
    """
    z = as_point(spec, z)
    v = np.asarray(v, dtype=complex)
    nv = float(np.linalg.norm(v))
    if nv == 0.0 or not np.all(np.isfinite(v)):
        raise InputError("direction vector must be finite and nonzero")
    v = v / nv
    rz = float(defining_value(spec, z))
    if not rz < level:
        raise InputError(f"point must satisfy r < level along the line: r(z) = {rz}")

    if spec.kind in ("disk", "ball"):
        radius_sq = 1.0 + level
        b = complex(np.sum(z * np.conj(v)))  # <z, v>
        return math.sqrt(abs(b) ** 2 + radius_sq - float(np.vdot(z, z).real)) - abs(b)

    theta = np.linspace(0.0, 2.0 * math.pi, phases, endpoint=False)
    dirs = np.exp(1j * theta)[:, None] * v[None, :]  # (phases, n)

    def g(t: np.ndarray) -> np.ndarray:
        pts = z[None, :] + t[:, None] * dirs
        return _value_batch(spec, pts) - level

    tmax = 2.0 * float(np.sum(2.0 * np.asarray(spec.box))) + 1.0
    hi = np.full(phases, tmax)
    for _ in range(8):
        bad = g(hi) <= 0.0
        if not bad.any():
            break
        hi[bad] *= 2.0
    else:
        raise NumericError("line never crosses the level set", {"level": level})
    lo = np.zeros(phases)
    for _ in range(60):
        mid = 0.5 * (lo + hi)
        pos = g(mid) > 0.0
        hi = np.where(pos, mid, hi)
        lo = np.where(pos, lo, mid)
    roots = 0.5 * (lo + hi)
    jbest = int(np.argmin(roots))
    best = float(roots[jbest])

    def root_of(th: float) -> float:
        d = np.exp(1j * th) * v
        f = lambda t: float(_value_batch(spec, (z + t * d)[None, :])[0]) - level
        hi1 = best * 2.0 + 1e-3
        while f(hi1) <= 0.0:
            hi1 *= 2.0
        return float(optimize.brentq(f, 0.0, hi1, xtol=1e-14, rtol=1e-15))

    span = 2.0 * math.pi / phases
    res = optimize.minimize_scalar(
        root_of,
        bounds=(theta[jbest] - span, theta[jbest] + span),
        method="bounded",
        options={"xatol": 1e-10},
    )
    return min(best, float(res.fun))


def line_boundary_distance(spec: DomainSpec, z, v) -> float:
    """Distance from z to the boundary within the complex line spanned by v."""
    return line_level_distance(spec, z, v, level=0.0)


# ---------------------------------------------------------------------------
# collar and sampling


@lru_cache(maxsize=128)
def inradius(spec: DomainSpec) -> float:
    return boundary_distance(spec, anchor_point(spec))


def collar_width(spec: DomainSpec) -> float:
    return spec.collar * inradius(spec)


def in_collar(spec: DomainSpec, z) -> bool:
    """True when the point lies in the boundary collar W = {delta_D < width}."""
    return boundary_distance(spec, z) < collar_width(spec)


def box_nu_volume(spec: DomainSpec) -> float:
    """Volume of the validation box under the normalization nu(B_1(0)) = 1."""
    leb = float(np.prod([(2.0 * b) ** 2 for b in spec.box]))
    return leb / unit_ball_volume(spec.dim)


def unit_ball_volume(n: int) -> float:
    """Lebesgue volume of the unit Euclidean ball in R^(2n) = pi^n / n!."""
    return math.pi**n / math.factorial(n)


def random_interior(
    spec: DomainSpec,
    count: int,
    rng: np.random.Generator,
    level_floor: float = 0.0,
) -> np.ndarray:
    """Uniform (w.r.t. Lebesgue) sample of {r <= -level_floor}, shape (count, n)."""
    out = np.empty((count, spec.dim), dtype=complex)
    wide = np.repeat(np.asarray(spec.box, dtype=float), 2)
    got = 0
    attempts = 0
    while got < count:
        attempts += 1
        if attempts > 4000:
            raise NumericError("interior rejection sampling stalled", {"got": got})
        batch = max(256, 2 * (count - got))
        pts = to_complex(rng.uniform(-1.0, 1.0, size=(batch, 2 * spec.dim)) * wide)
        keep = pts[_value_batch(spec, pts) <= -level_floor]
        take = min(len(keep), count - got)
        out[got : got + take] = keep[:take]
        got += take
    return out


def quasi_interior(
    spec: DomainSpec,
    count: int,
    seed: int,
    level_floor: float = 0.0,
) -> np.ndarray:
    """Low-discrepancy interior sample (scrambled Halton), shape (count, n)."""
    sampler = qmc.Halton(d=2 * spec.dim, scramble=True, seed=seed)
    wide = np.repeat(np.asarray(spec.box, dtype=float), 2)
    out = np.empty((count, spec.dim), dtype=complex)
    got = 0
    for _ in range(4000):
        pts = to_complex((2.0 * sampler.random(max(256, count)) - 1.0) * wide)
        keep = pts[_value_batch(spec, pts) <= -level_floor]
        take = min(len(keep), count - got)
        out[got : got + take] = keep[:take]
        got += take
        if got == count:
            return out
    raise NumericError("quasi-random interior sampling stalled", {"got": got})


def quasi_uniform(spec: DomainSpec, count: int, seed: int) -> np.ndarray:
    """Exactly nu-uniform low-discrepancy sample on a Reinhardt domain.

    In the radial variables t_i = (|z_i|/a_i)^{2 m_i} the normalized volume is
    a Dirichlet(1/m_1, ..., 1/m_n; 1) density on the open simplex, so mapping
    scrambled Halton points through gamma quantiles gives uniform points with
    no rejection and no boundary indicator; integrands stay smooth in the
    sample cube, which is what quasi-Monte Carlo needs for fast convergence.
    """
    if spec.kind not in ("disk", "ball", "ellipsoid"):
        raise CapabilityError(f"no smooth uniform sampler for kind {spec.kind!r}")
    n = spec.dim
    exponents = spec.exponents if spec.exponents else (1,) * n
    axes = spec.semi_axes if spec.semi_axes else (1.0,) * n
    alphas = np.array([1.0 / m for m in exponents])
    sampler = qmc.Halton(d=2 * n + 1, scramble=True, seed=seed)
    u = sampler.random(count)
    gammas = np.empty((count, n + 1))
    for i in range(n):
        gammas[:, i] = special.gammaincinv(alphas[i], u[:, i])
    gammas[:, n] = -np.log1p(-u[:, n])  # unit-exponential tail coordinate
    t = gammas[:, :n] / gammas.sum(axis=1, keepdims=True)
    radii = np.asarray(axes) * t ** (0.5 / np.asarray(exponents, dtype=float))
    angles = np.exp(2j * np.pi * u[:, n + 1 :])
    return radii * angles


# ---------------------------------------------------------------------------
# JSON round trip

_JSON_KEYS = {"kind", "dimension", "exponents", "semi_axes", "terms", "box", "anchor", "collar"}


def spec_to_json(spec: DomainSpec) -> dict:
    data: dict = {"kind": spec.kind, "collar": spec.collar}
    if spec.kind == "ball":
        data["dimension"] = spec.dim
    elif spec.kind == "ellipsoid":
        data["exponents"] = list(spec.exponents)
        data["semi_axes"] = list(spec.semi_axes)
    elif spec.kind == "polynomial":
        data["dimension"] = spec.dim
        data["terms"] = [{"coeff": c, "powers": list(p)} for c, p in spec.terms]
        data["box"] = list(spec.box)
        data["anchor"] = list(spec.anchor)
    return data


def spec_from_json(data: dict) -> DomainSpec:
    unknown = set(data) - _JSON_KEYS
    if unknown:
        raise ConfigError(f"unknown keys in domain spec: {sorted(unknown)}")
    kind = data.get("kind")
    collar = float(data.get("collar", 0.2))
    if kind == "disk":
        return unit_disk(collar=collar)
    if kind == "ball":
        return unit_ball(int(data.get("dimension", 1)), collar=collar)
    if kind == "ellipsoid":
        if "exponents" not in data:
            raise ConfigError("ellipsoid spec needs 'exponents'")
        return complex_ellipsoid(
            data["exponents"], data.get("semi_axes"), collar=collar
        )
    if kind == "polynomial":
        for key in ("dimension", "terms", "box"):
            if key not in data:
                raise ConfigError(f"polynomial spec needs {key!r}")
        terms = [(t["coeff"], t["powers"]) for t in data["terms"]]
        return convex_polynomial(
            terms, int(data["dimension"]), data["box"], data.get("anchor"), collar=collar
        )
    raise ConfigError(f"unknown domain kind {kind!r}")


def load_spec(path) -> DomainSpec:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            return spec_from_json(json.load(fh))
    except FileNotFoundError as exc:
        raise ConfigError(f"domain spec file not found: {path}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError(f"domain spec file {path} is not valid JSON: {exc}") from exc


def save_spec(spec: DomainSpec, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(spec_to_json(spec), fh, indent=2, sort_keys=True)
        fh.write("\n")
