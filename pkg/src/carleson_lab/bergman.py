"""Bergman kernels on Reinhardt model domains and the Berezin transform.

Monomials z^alpha are pairwise orthogonal on Reinhardt domains, so the kernel
is the diagonal series K(z,w) = sum_alpha z^alpha conj(w)^alpha / m_alpha with
m_alpha = ||z^alpha||^2.  The moments reduce to products of one-dimensional
Beta-type integrals; the disk and ball also have closed forms used both as a
fast path and as an independent cross-check.  All norms are taken against the
Lebesgue measure nu normalized so that nu(unit Euclidean ball) = 1.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass

import numpy as np
from scipy import integrate
from scipy.stats import qmc

from . import domains, geometry, kobayashi, measures
from .domains import DomainSpec, as_point
from .errors import CapabilityError, InputError, NumericError, TruncationError
from .measures import AtomicMeasure, DensityMeasure
from .polynomials import HoloPolynomial, poly_eval

_REINHARDT_KINDS = ("disk", "ball", "ellipsoid")


def _reinhardt_data(spec: DomainSpec) -> tuple[tuple[int, ...], tuple[float, ...]]:
    if spec.kind in ("disk", "ball"):
        return tuple([1] * spec.dim), tuple([1.0] * spec.dim)
    if spec.kind == "ellipsoid":
        return tuple(spec.exponents), tuple(spec.semi_axes)
    raise CapabilityError(
        f"kind {spec.kind!r} is not a Reinhardt model; no moment series available"
    )


# ---------------------------------------------------------------------------
# moments


@dataclass(frozen=True)
class MomentTable:
    """Moments m_alpha = ||z^alpha||^2 for all |alpha| <= degree on one domain."""

    dim: int
    degree: int
    exponents: tuple[int, ...]
    semi_axes: tuple[float, ...]
    values: np.ndarray  # cube (degree+1,)*dim; nan where |alpha| > degree


def _moment_quad(exponents, semi_axes, alpha) -> float:
    """Product of Beta-type integrals from the per-coordinate radial reduction."""
    n = len(exponents)
    s = [(alpha[i] + 1.0) / exponents[i] for i in range(n)]
    value = math.factorial(n)
    for i in range(n):
        value *= semi_axes[i] ** (2 * alpha[i] + 2) / exponents[i]
    for j in range(n):
        rest = sum(s[j + 1 :])

        def integrand(u: float, sj=s[j], rj=rest) -> float:
            return u ** (sj - 1.0) * (1.0 - u) ** rj

        est, err = integrate.quad(integrand, 0.0, 1.0, epsabs=0.0, epsrel=1e-10, limit=200)
        if not est > 0.0 or err > 1e-8 * est:
            raise NumericError(
                "moment quadrature failed to converge",
                {"alpha": tuple(alpha), "estimate": est, "error": err},
            )
        value *= est
    return value


def moments(spec: DomainSpec, degree: int) -> MomentTable:
    """Tabulate m_alpha for |alpha| <= degree at relative tolerance 1e-10."""
    if degree < 0:
        raise InputError(f"degree must be >= 0, got {degree}")
    exponents, semi_axes = _reinhardt_data(spec)
    n = spec.dim
    cube = np.full((degree + 1,) * n, np.nan)
    for alpha in np.ndindex(*cube.shape):
        if sum(alpha) <= degree:
            cube[alpha] = _moment_quad(exponents, semi_axes, alpha)
    return MomentTable(
        dim=n, degree=degree, exponents=exponents, semi_axes=semi_axes, values=cube
    )


def moment(table: MomentTable, alpha) -> float:
    alpha = tuple(int(a) for a in alpha)
    if len(alpha) != table.dim or any(a < 0 for a in alpha) or sum(alpha) > table.degree:
        raise InputError(f"multi-index {alpha} outside table of degree {table.degree}")
    return float(table.values[alpha])


def norm_sq(poly: HoloPolynomial, table: MomentTable) -> float:
    """Exact squared A^2 norm sum |c_alpha|^2 m_alpha (orthogonal monomials)."""
    total = 0.0
    for alpha, c in poly.coeffs.items():
        total += abs(c) ** 2 * moment(table, alpha)
    return total


def moments_to_csv(table: MomentTable, path) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow([f"alpha{i + 1}" for i in range(table.dim)] + ["moment"])
        for alpha in np.ndindex(*table.values.shape):
            if sum(alpha) <= table.degree:
                writer.writerow(list(alpha) + [f"{table.values[alpha]:.17g}"])


def moments_from_csv(spec: DomainSpec, degree: int, path) -> MomentTable:
    exponents, semi_axes = _reinhardt_data(spec)
    cube = np.full((degree + 1,) * spec.dim, np.nan)
    with open(path, newline="") as fh:
        rows = list(csv.reader(fh))
    for row in rows[1:]:
        alpha = tuple(int(x) for x in row[:-1])
        if len(alpha) != spec.dim:
            raise InputError(f"row arity {len(alpha)} does not match dimension {spec.dim}")
        if sum(alpha) <= degree:
            cube[alpha] = float(row[-1])
    filled = ~np.isnan(cube)
    expected = np.array(
        [sum(a) <= degree for a in np.ndindex(*cube.shape)], dtype=bool
    ).reshape(cube.shape)
    if not np.array_equal(filled, expected):
        raise InputError(f"moment file {path} does not cover all |alpha| <= {degree}")
    return MomentTable(
        dim=spec.dim, degree=degree, exponents=exponents, semi_axes=semi_axes, values=cube
    )


# ---------------------------------------------------------------------------
# kernel models


@dataclass(frozen=True)
class KernelModel:
    """Bergman kernel evaluator: closed ball form or Reinhardt moment series."""

    spec: DomainSpec
    variant: str  # "closed" | "series"
    degree: int
    table: MomentTable | None
    coeffs: np.ndarray | None  # 1/m_alpha cube, zeros beyond total degree
    tail_w: np.ndarray | None  # W_k = max_{|alpha|=k} alpha!/(k! m_alpha)
    tail_ratio: float


def closed_ball_model(spec: DomainSpec) -> KernelModel:
    if spec.kind not in ("disk", "ball"):
        raise CapabilityError(f"closed-form kernel requires the disk/ball, got {spec.kind!r}")
    return KernelModel(
        spec=spec, variant="closed", degree=0, table=None, coeffs=None, tail_w=None, tail_ratio=0.0
    )


def reinhardt_series_model(spec: DomainSpec, degree: int = 60, table: MomentTable | None = None) -> KernelModel:
    if table is None:
        table = moments(spec, degree)
    elif table.degree < degree:
        raise InputError(f"moment table degree {table.degree} < requested {degree}")
    cube = table.values
    coeffs = np.where(np.isnan(cube), 0.0, 1.0 / np.where(np.isnan(cube), 1.0, cube))
    # degree-k slice bound: sum_{|a|=k} |p^a|/m_a <= W_k (sum_i |p_i|)^k with
    # W_k = max_{|a|=k} a!/(k! m_a), by the multinomial theorem
    logw = np.full(degree + 1, -np.inf)
    for alpha in np.ndindex(*coeffs.shape):
        k = sum(alpha)
        if k <= degree:
            lw = sum(math.lgamma(a + 1) for a in alpha) - math.lgamma(k + 1) - math.log(cube[alpha])
            logw[k] = max(logw[k], lw)
    w = np.exp(logw)
    ratios = w[1:] / w[:-1]
    # safety margin on the empirical growth ratio of the degree slices
    tail_ratio = float(np.max(ratios[-10:])) * 1.05 if len(ratios) else 1.0
    return KernelModel(
        spec=spec,
        variant="series",
        degree=degree,
        table=table,
        coeffs=coeffs,
        tail_w=w,
        tail_ratio=tail_ratio,
    )


def kernel_model(spec: DomainSpec, degree: int = 60) -> KernelModel:
    """Closed form on the disk/ball, moment series on ellipsoids."""
    if spec.kind in ("disk", "ball"):
        return closed_ball_model(spec)
    return reinhardt_series_model(spec, degree=degree)


def _eval_cube(cube: np.ndarray, pts: np.ndarray) -> np.ndarray:
    """sum_alpha cube[alpha] * prod_i pts[..,i]^alpha_i for pts of shape (m, n)."""
    m, n = pts.shape
    out = np.empty(m, dtype=complex)
    d = cube.shape[0]
    chunk = max(1, (1 << 21) // max(d ** max(n - 1, 1), 1))
    for start in range(0, m, chunk):
        p = pts[start : start + chunk]
        v = np.vander(p[:, 0], N=d, increasing=True)
        t = np.tensordot(v, cube, axes=(1, 0))
        for j in range(1, n):
            vj = np.vander(p[:, j], N=d, increasing=True)
            t = np.einsum("md,md...->m...", vj, t)
        out[start : start + chunk] = t
    return out


def _series_tail(model: KernelModel, s: float) -> float:
    """Estimated truncation remainder sum_{k>N} W_k s^k via ratio extrapolation.

    Here s is the l1 norm sum_i |z_i w_i| <= |z||w| by Cauchy-Schwarz.
    """
    if s <= 0.0:
        return 0.0
    rho = model.tail_ratio
    if s * rho >= 1.0:
        return math.inf
    w_last = float(model.tail_w[-1])
    return w_last * rho * s ** (model.degree + 1) / (1.0 - s * rho)


def kernel_row(model: KernelModel, z0, pts, tol: float = 1e-6) -> np.ndarray:
    """K(p, z0) for a batch of points p; raises when the series tail exceeds tol."""
    z0 = as_point(model.spec, z0)
    pts = np.atleast_2d(np.asarray(pts, dtype=complex))
    n = model.spec.dim
    if model.variant == "closed":
        inner = pts @ np.conj(z0)
        return (1.0 - inner) ** (-(n + 1.0))
    p = pts * np.conj(z0)[None, :]
    values = _eval_cube(model.coeffs, p)
    s = float(np.abs(p).sum(axis=1).max(initial=0.0))
    tail = _series_tail(model, s)
    floor = 1.0 / float(model.table.values[(0,) * n])
    scale = max(float(np.abs(values).min(initial=0.0)), floor)
    if not tail <= tol * scale:
        raise TruncationError(
            "series tail exceeds tolerance; increase the degree or move off the boundary",
            {"degree": model.degree, "tail": tail, "scale": scale, "s": s},
        )
    return values


def kernel(model: KernelModel, z, w, tol: float = 1e-6) -> complex:
    w = as_point(model.spec, w)
    return complex(kernel_row(model, w, as_point(model.spec, z)[None, :], tol=tol)[0])


def kernel_diag(model: KernelModel, z, tol: float = 1e-6) -> float:
    value = kernel(model, z, z, tol=tol)
    if not value.real > 0.0:
        raise NumericError("kernel diagonal must be positive", {"value": value})
    return value.real


def normalized_kernel(model: KernelModel, z0, pts, tol: float = 1e-6) -> np.ndarray:
    """k_{z0}(p) = K(p, z0)/sqrt(K(z0,z0)); unit A^2 norm by the reproducing identity."""
    return kernel_row(model, z0, pts, tol=tol) / math.sqrt(kernel_diag(model, z0, tol=tol))


# ---------------------------------------------------------------------------
# reproducing-property residual


@dataclass(frozen=True)
class ReproduceReport:
    estimate: complex
    exact: complex
    residual: float
    samples: int


def reproduce_check(
    model: KernelModel,
    poly: HoloPolynomial,
    z,
    samples: int = 1 << 20,
    seed: int = 0,
    points: np.ndarray | None = None,
) -> ReproduceReport:
    """Quasi-Monte Carlo residual |integral K(z,.)f dnu - f(z)|.

    Reinhardt domains use the exact smooth uniform sampler (no boundary
    indicator, so the integrand stays QMC-friendly); other domains fall back
    to box-uniform points with the indicator.  Pass ``points`` (box-uniform)
    to share one point set across several checks.
    """
    spec = model.spec
    z = as_point(spec, z)
    if points is None and spec.kind in ("disk", "ball", "ellipsoid"):
        pts = domains.quasi_uniform(spec, samples, seed=seed)
        # K(z, zeta) = conj K(zeta, z); the row is anti-holomorphic in its second slot
        vals = np.conj(kernel_row(model, z, pts)) * poly_eval(poly, pts)
        nu_d = 1.0 if model.variant == "closed" else moment(model.table, (0,) * spec.dim)
        estimate = nu_d * complex(vals.mean())
        exact = complex(poly_eval(poly, z))
        return ReproduceReport(
            estimate=estimate, exact=exact, residual=abs(estimate - exact), samples=samples
        )
    if points is None:
        halton = qmc.Halton(d=2 * spec.dim, scramble=True, seed=seed)
        u = halton.random(samples)
        half = np.repeat(np.asarray(spec.box), 2)
        coords = (2.0 * u - 1.0) * half[None, :]
        points = coords[:, 0::2] + 1j * coords[:, 1::2]
    total = len(points)
    inside = domains.contains(spec, points)
    kern = np.zeros(total, dtype=complex)
    # K(z, zeta) = conj K(zeta, z); the row is anti-holomorphic in its second slot
    kern[inside] = np.conj(kernel_row(model, z, points[inside]))
    vals = kern * poly_eval(poly, points) * inside
    estimate = domains.box_nu_volume(spec) * complex(vals.mean())
    exact = complex(poly_eval(poly, z))
    return ReproduceReport(
        estimate=estimate, exact=exact, residual=abs(estimate - exact), samples=total
    )


# ---------------------------------------------------------------------------
# Berezin transform


@dataclass(frozen=True)
class BerezinEstimate:
    value: float
    stderr: float
    samples: int
    method: str


def berezin_many(
    model: KernelModel,
    mu,
    zs,
    samples: int = 1 << 16,
    seed: int = 0,
    method: str = "auto",
) -> list[BerezinEstimate]:
    """Berezin transform at several points sharing one sample stream.

    Methods: "atomic" (exact sum), "mobius" (density pulled back through the
    disk/ball automorphism, variance-free for the Lebesgue density), "plain"
    (box Monte Carlo with the domain indicator).
    """
    spec = model.spec
    zs = np.atleast_2d(np.asarray(zs, dtype=complex))
    if method == "auto":
        if isinstance(mu, AtomicMeasure):
            method = "atomic"
        elif spec.kind in ("disk", "ball"):
            method = "mobius"
        else:
            method = "plain"

    if method == "atomic":
        if not isinstance(mu, AtomicMeasure):
            raise InputError("atomic method requires an atomic measure")
        out = []
        for z in zs:
            if mu.count == 0:
                out.append(BerezinEstimate(0.0, 0.0, 0, "atomic"))
                continue
            k = normalized_kernel(model, z, mu.points)
            value = float(np.sum(mu.weights * np.abs(k) ** 2))
            out.append(BerezinEstimate(value, 0.0, mu.count, "atomic"))
        return out

    if not isinstance(mu, DensityMeasure):
        raise CapabilityError(f"no density sampler for measure type {type(mu).__name__}")

    rng = np.random.default_rng(np.random.SeedSequence(seed))
    if method == "mobius":
        if spec.kind not in ("disk", "ball"):
            raise CapabilityError("mobius estimator requires the disk/ball")
        base = domains.random_interior(spec, samples, rng)
        out = []
        for z in zs:
            pulled = kobayashi.mobius_translation(spec, z, base)
            vals = mu.density(pulled)
            value = float(vals.mean())
            stderr = float(vals.std(ddof=1)) / math.sqrt(samples)
            out.append(BerezinEstimate(value, stderr, samples, "mobius"))
        return out

    if method == "plain":
        half = np.asarray(spec.box)
        re = rng.uniform(-half, half, size=(samples, spec.dim))
        im = rng.uniform(-half, half, size=(samples, spec.dim))
        pts = re + 1j * im
        inside = domains.contains(spec, pts)
        dens = mu.density(pts) * inside
        vol = domains.box_nu_volume(spec)
        out = []
        for z in zs:
            k2 = np.zeros(samples)
            k2[inside] = np.abs(normalized_kernel(model, z, pts[inside])) ** 2
            vals = vol * dens * k2
            value = float(vals.mean())
            stderr = float(vals.std(ddof=1)) / math.sqrt(samples)
            out.append(BerezinEstimate(value, stderr, samples, "plain"))
        return out

    raise InputError(f"unknown berezin method {method!r}")


def berezin(
    model: KernelModel,
    mu,
    z,
    samples: int = 1 << 16,
    seed: int = 0,
    method: str = "auto",
) -> BerezinEstimate:
    return berezin_many(model, mu, as_point(model.spec, z)[None, :], samples, seed, method)[0]


# ---------------------------------------------------------------------------
# kernel lower-bound checks on the collar


@dataclass(frozen=True)
class LowerBoundCheck:
    constant: float
    values: np.ndarray
    count: int


def diagonal_lowerbound_check(spec: DomainSpec, model: KernelModel, points) -> LowerBoundCheck:
    """inf over samples of K(z,z) * prod sigma_i(z)^2 (empirical kernel floor)."""
    pts = np.atleast_2d(np.asarray(points, dtype=complex))
    vals = np.empty(len(pts))
    for i, z in enumerate(pts):
        frame = geometry.minimal_frame(spec, z)
        vals[i] = kernel_diag(model, z) * float(np.prod(frame.sigma**2))
    return LowerBoundCheck(constant=float(vals.min()), values=vals, count=len(pts))


@dataclass(frozen=True)
class OffDiagonalCheck:
    re_constant: float
    k2_constant: float
    re_values: np.ndarray
    k2_values: np.ndarray


def offdiagonal_lowerbound_check(
    spec: DomainSpec,
    model: KernelModel,
    r: float,
    points,
    samples_per_point: int = 32,
    seed: int = 0,
    r0: float = 0.1,
) -> OffDiagonalCheck:
    """Kernel positivity near the diagonal at Kobayashi scale r < r0.

    For each collar center z0, samples omega in the certified inner polydisk of
    B_D(z0, r) and records Re K(z0,omega)*prod sigma^2 and |k_{z0}(omega)|^2 *
    prod sigma^2; returns the observed infima.
    """
    if not 0.0 < r < r0:
        raise InputError(f"radius {r} outside (0, {r0})")
    pts = np.atleast_2d(np.asarray(points, dtype=complex))
    rng = np.random.default_rng(np.random.SeedSequence(seed))
    re_vals, k2_vals = [], []
    for z0 in pts:
        frame = geometry.minimal_frame(spec, z0)
        sandwich = kobayashi.ball_sandwich(spec, z0, r, frame=frame)
        omega = geometry.sample_polydisk(sandwich.inner, samples_per_point, rng)
        prod = float(np.prod(frame.sigma**2))
        row = kernel_row(model, z0, omega)
        diag = kernel_diag(model, z0)
        re_vals.append(row.real * prod)
        k2_vals.append(np.abs(row) ** 2 / diag * prod)
    re_arr = np.concatenate(re_vals)
    k2_arr = np.concatenate(k2_vals)
    return OffDiagonalCheck(
        re_constant=float(re_arr.min()),
        k2_constant=float(k2_arr.min()),
        re_values=re_arr,
        k2_values=k2_arr,
    )
