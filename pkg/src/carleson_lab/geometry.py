"""Minimal orthogonal frames and level-set polydisks.

The greedy construction: project q to the nearest point of a level set of r,
record the direction and distance, restrict to the complex-orthogonal slice
through q, repeat.  Level 0 gives the minimal frame (sigma radii); the level
r(q) + eps gives the anisotropic polydisk radii tau(q, eps).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import domains
from .domains import DomainSpec, as_point, defining_value, project_to_level
from .errors import InputError, NumericError

_ENTRY_TOL = 1e-8


@dataclass(frozen=True)
class MinimalFrame:
    """Orthonormal frame e_1..e_n (rows of ``basis``) with slice distances sigma.

    ``unique`` reports whether the first boundary projection was unique within
    tolerance; deeper steps are always resolved by the canonical tie-break.
    """

    center: np.ndarray
    basis: np.ndarray
    sigma: np.ndarray
    unique: bool

    @property
    def n(self) -> int:
        return self.basis.shape[0]


@dataclass(frozen=True)
class Polydisk:
    """Closed polydisk {z : |<z - center, e_i>| <= radii_i for all i}."""

    center: np.ndarray
    basis: np.ndarray
    radii: np.ndarray

    @property
    def n(self) -> int:
        return self.basis.shape[0]


def _orthonormal_complement(basis: np.ndarray, direction: np.ndarray) -> np.ndarray:
    """Rows of ``basis`` minus the span of ``direction``, re-orthonormalized."""
    d = direction / np.linalg.norm(direction)
    proj = basis - np.outer(basis @ np.conj(d), d)
    q, rmat = np.linalg.qr(proj.T, mode="reduced")
    cols = [q[:, j] for j in range(q.shape[1]) if abs(rmat[j, j]) > 1e-10]
    if len(cols) != basis.shape[0] - 1:
        raise NumericError(
            "slice complement lost rank", {"expected": basis.shape[0] - 1, "got": len(cols)}
        )
    return np.array(cols)


def _level_frame(spec: DomainSpec, q: np.ndarray, level: float) -> tuple[np.ndarray, np.ndarray, bool]:
    n = spec.dim
    if spec.kind in ("disk", "ball"):
        radius = math.sqrt(1.0 + level)
        nq = float(np.linalg.norm(q))
        sigma = np.empty(n)
        sigma[0] = radius - nq
        if n > 1:
            sigma[1:] = math.sqrt(max(radius**2 - nq**2, 0.0))
        if nq < 1e-12:
            return np.eye(n, dtype=complex), np.full(n, radius), False
        basis = np.zeros((n, n), dtype=complex)
        basis[0] = q / nq
        # canonical completion: Gram-Schmidt of coordinate axes against e_1
        row = 1
        for j in range(n):
            if row == n:
                break
            e = np.zeros(n, dtype=complex)
            e[j] = 1.0
            for i in range(row):
                e = e - basis[i] * (np.conj(basis[i]) @ e)
            norm = float(np.linalg.norm(e))
            if norm > 1e-8:
                basis[row] = e / norm
                row += 1
        if row != n:
            raise NumericError("frame completion failed", {"rank": row})
        return basis, sigma, True

    basis = np.eye(n, dtype=complex)
    frame = np.zeros((n, n), dtype=complex)
    sigma = np.empty(n)
    slice_basis = basis
    unique = True
    for i in range(n):
        if i == n - 1 and i > 0:
            # final slice is one complex line; the phase of the frame vector
            # does not affect any polydisk built on it
            frame[i] = slice_basis[0]
            sigma[i] = domains.line_level_distance(spec, q, slice_basis[0], level)
            break
        proj = project_to_level(spec, q, level, basis=slice_basis)
        if i == 0:
            unique = proj.unique
        diff = proj.point - q
        norm = float(np.linalg.norm(diff))
        if norm <= 0.0:
            raise NumericError("projection collapsed onto the center", {"step": i})
        frame[i] = diff / norm
        sigma[i] = proj.distance
        if i < n - 1:
            slice_basis = _orthonormal_complement(slice_basis, frame[i])
    # the greedy construction makes sigma nondecreasing; tiny numeric
    # inversions are tolerated, real ones are a failure
    if np.any(np.diff(sigma) < -1e-7 * max(1.0, float(sigma.max()))):
        raise NumericError("slice distances are not nondecreasing", {"sigma": sigma.tolist()})
    return frame, sigma, unique


def minimal_frame(spec: DomainSpec, q) -> MinimalFrame:
    """Greedy minimal frame of D at an interior point q (level 0)."""
    q = as_point(spec, q)
    if not float(defining_value(spec, q)) < 0.0:
        raise InputError("minimal_frame expects an interior point")
    basis, sigma, unique = _level_frame(spec, q, 0.0)
    return MinimalFrame(center=q, basis=basis, sigma=sigma, unique=unique)


def mcneal_radii(spec: DomainSpec, q, eps: float) -> Polydisk:
    """Polydisk P(q, eps) built against the level set {r = r(q) + eps}."""
    q = as_point(spec, q)
    if not eps > 0.0:
        raise InputError(f"eps must be positive, got {eps}")
    level = float(defining_value(spec, q)) + eps
    if level >= domains.level_cap(spec):
        raise NumericError(
            "level set escapes the validation box; use a smaller eps",
            {"eps": eps, "level": level, "cap": domains.level_cap(spec)},
        )
    basis, tau, _ = _level_frame(spec, q, level)
    return Polydisk(center=q, basis=basis, radii=tau)


def frame_polydisk(frame: MinimalFrame, scale: float) -> Polydisk:
    """Polydisk with radii scale * sigma in the frame's axes."""
    if not scale > 0.0:
        raise InputError(f"scale must be positive, got {scale}")
    return Polydisk(center=frame.center, basis=frame.basis, radii=scale * frame.sigma)


def polydisk_coordinates(P: Polydisk, pts: np.ndarray) -> np.ndarray:
    """Frame coordinates <z - center, e_i>, shape (..., n)."""
    pts = np.asarray(pts, dtype=complex)
    return (pts - P.center) @ np.conj(P.basis).T


def polydisk_contains(P: Polydisk, z) -> bool | np.ndarray:
    """Closed membership test; accepts one point (n,) or a batch (..., n)."""
    u = polydisk_coordinates(P, z)
    inside = np.all(np.abs(u) <= P.radii, axis=-1)
    return bool(inside) if inside.ndim == 0 else inside


def scale_polydisk(P: Polydisk, factor: float) -> Polydisk:
    if not factor > 0.0:
        raise InputError(f"scale factor must be positive, got {factor}")
    return Polydisk(center=P.center, basis=P.basis, radii=factor * P.radii)


def polydisk_nu_volume(P: Polydisk) -> float:
    """Exact nu-volume n! * prod(radii^2) (nu is Lebesgue with nu(B_1) = 1)."""
    n = P.n
    return math.factorial(n) * float(np.prod(P.radii**2))


def sample_polydisk(P: Polydisk, count: int, rng: np.random.Generator) -> np.ndarray:
    """Uniform (nu) sample of the polydisk, shape (count, n)."""
    u = np.sqrt(rng.uniform(0.0, 1.0, size=(count, P.n)))
    phase = np.exp(2j * math.pi * rng.uniform(0.0, 1.0, size=(count, P.n)))
    coords = u * phase * P.radii
    return P.center + coords @ P.basis


def entry_scale(spec: DomainSpec, z, w, tol: float = _ENTRY_TOL, check: bool = True) -> float:
    """Smallest eps with w inside the polydisk P(z, eps), by bisection.

    The membership predicate is monotone in eps for the model domains; a
    detected flip raises a numeric error carrying the bracket.
    """
    z = as_point(spec, z)
    w = as_point(spec, w)
    if float(np.linalg.norm(w - z)) < 1e-14:
        return 0.0

    def pred(eps: float) -> bool:
        return bool(polydisk_contains(mcneal_radii(spec, z, eps), w))

    cap = domains.level_cap(spec) - float(defining_value(spec, z))
    hi = min(max(float(np.linalg.norm(w - z)), 16.0 * tol), 0.9 * cap)
    while not pred(hi):
        hi *= 2.0
        if hi >= cap:
            raise NumericError(
                "entry scale would push the level set out of the box",
                {"cap": cap, "hi": hi},
            )
    lo = 0.0
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if mid <= 0.0:
            break
        if pred(mid):
            hi = mid
        else:
            lo = mid
    eps = hi
    if check:
        for frac in (0.45, 0.8):
            probe = frac * lo
            if probe > 0.0 and pred(probe):
                raise NumericError(
                    "entry-scale predicate is not monotone (frame flip)",
                    {"lo": lo, "hi": hi, "flip_at": probe},
                )
        for fac in (1.6, 3.0):
            if eps * fac < cap and not pred(eps * fac):
                raise NumericError(
                    "entry-scale predicate is not monotone (frame flip)",
                    {"lo": lo, "hi": hi, "flip_at": eps * fac},
                )
    return eps
