"""Finite positive Borel measures as data: atom lists and densities against nu.

Densities are taken with respect to the normalized Lebesgue measure nu
(nu of the unit Euclidean ball = 1) restricted to the domain; the plain
Lebesgue measure is the constant density 1.  Mass evaluation on polydisks
and Kobayashi-ball sandwiches is exact for atomic measures and seeded
Monte Carlo with a standard error for densities.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from typing import Callable

import numpy as np

from . import domains, geometry
from .domains import DomainSpec, as_point
from .errors import InputError
from .geometry import Polydisk


@dataclass(frozen=True)
class AtomicMeasure:
    """Sum of point masses w_k at interior points z_k."""

    points: np.ndarray  # (m, n) complex
    weights: np.ndarray  # (m,) positive
    label: str = "atomic"

    @property
    def count(self) -> int:
        return len(self.weights)


@dataclass(frozen=True)
class DensityMeasure:
    """Measure g dnu|_D for a nonnegative density g evaluated on point batches."""

    density: Callable[[np.ndarray], np.ndarray]
    label: str = "density"
    total_mass_hint: float | None = None


def atomic_measure(spec: DomainSpec, points, weights, label: str = "atomic") -> AtomicMeasure:
    pts = np.asarray(points, dtype=complex)
    if pts.ndim == 0:
        pts = pts.reshape(1, 1)
    elif pts.ndim == 1:
        # flat input: a list of scalars on a 1-dim domain, else a single point
        pts = pts.reshape(-1, 1) if spec.dim == 1 else pts.reshape(1, -1)
    if pts.ndim != 2 or (len(pts) and pts.shape[1] != spec.dim):
        raise InputError(f"atom array of shape {pts.shape} does not match dimension {spec.dim}")
    w = np.asarray(weights, dtype=float)
    if len(pts) != len(w):
        raise InputError(f"{len(pts)} atoms but {len(w)} weights")
    if len(w) and not np.all(w > 0.0):
        raise InputError("atom weights must be strictly positive")
    if len(pts) and not np.all(domains.contains(spec, pts)):
        raise InputError("all atoms must lie inside the domain")
    return AtomicMeasure(points=pts, weights=w, label=label)


def lebesgue_measure(label: str = "lebesgue") -> DensityMeasure:
    return DensityMeasure(density=lambda pts: np.ones(len(pts)), label=label, total_mass_hint=None)


def restricted_lebesgue(predicate: Callable[[np.ndarray], np.ndarray], label: str = "restricted") -> DensityMeasure:
    """nu restricted to {predicate}; the predicate maps point batches to booleans."""
    return DensityMeasure(density=lambda pts: predicate(pts).astype(float), label=label)


def density_catalog(spec: DomainSpec) -> dict[str, DensityMeasure]:
    """Named densities used by the experiment suites and the CLI."""

    def one_minus_delta(pts: np.ndarray) -> np.ndarray:
        return 1.0 - domains.boundary_distance_batch(spec, pts)

    def inv_one_minus_delta(pts: np.ndarray) -> np.ndarray:
        # capped at 10 so the MC mass estimates keep finite variance
        vals = 1.0 - domains.boundary_distance_batch(spec, pts)
        return np.minimum(1.0 / np.maximum(vals, 1e-12), 10.0)

    return {
        "lebesgue": lebesgue_measure(),
        "one_minus_delta": DensityMeasure(density=one_minus_delta, label="one_minus_delta"),
        "inv_one_minus_delta": DensityMeasure(
            density=inv_one_minus_delta, label="inv_one_minus_delta"
        ),
    }


# ---------------------------------------------------------------------------
# mass evaluation


@dataclass(frozen=True)
class MassEstimate:
    value: float
    stderr: float
    samples: int
    exact: bool


@dataclass(frozen=True)
class MassBracket:
    """[inner polydisk mass, outer polydisk mass] bracketing a Kobayashi-ball mass."""

    inner: MassEstimate
    outer: MassEstimate


def mass(spec: DomainSpec, mu, region, samples: int = 1 << 14, seed: int = 0):
    """Measure of a polydisk (intersected with D); sandwiches give a MassBracket."""
    if hasattr(region, "inner") and hasattr(region, "outer"):
        return MassBracket(
            inner=mass(spec, mu, region.inner, samples=samples, seed=seed),
            outer=mass(spec, mu, region.outer, samples=samples, seed=seed + 1),
        )
    if not isinstance(region, Polydisk):
        raise InputError(f"unsupported region type {type(region).__name__}")

    if isinstance(mu, AtomicMeasure):
        if mu.count == 0:
            return MassEstimate(0.0, 0.0, 0, exact=True)
        inside = geometry.polydisk_contains(region, mu.points)
        return MassEstimate(float(mu.weights[inside].sum()), 0.0, 0, exact=True)

    if isinstance(mu, DensityMeasure):
        vol = geometry.polydisk_nu_volume(region)
        if vol == 0.0:
            return MassEstimate(0.0, 0.0, 0, exact=True)
        rng = np.random.default_rng(np.random.SeedSequence(seed))
        pts = geometry.sample_polydisk(region, samples, rng)
        vals = mu.density(pts) * domains.contains(spec, pts)
        value = vol * float(vals.mean())
        stderr = vol * float(vals.std(ddof=1)) / np.sqrt(samples)
        return MassEstimate(value, stderr, samples, exact=False)

    raise InputError(f"unsupported measure type {type(mu).__name__}")


def total_mass(spec: DomainSpec, mu, samples: int = 1 << 16, seed: int = 0) -> MassEstimate:
    if isinstance(mu, AtomicMeasure):
        return MassEstimate(float(mu.weights.sum()), 0.0, 0, exact=True)
    if isinstance(mu, DensityMeasure):
        rng = np.random.default_rng(np.random.SeedSequence(seed))
        half = np.asarray(spec.box)
        re = rng.uniform(-half, half, size=(samples, spec.dim))
        im = rng.uniform(-half, half, size=(samples, spec.dim))
        pts = re + 1j * im
        vals = mu.density(pts) * domains.contains(spec, pts)
        vol = domains.box_nu_volume(spec)
        value = vol * float(vals.mean())
        stderr = vol * float(vals.std(ddof=1)) / np.sqrt(samples)
        return MassEstimate(value, stderr, samples, exact=False)
    raise InputError(f"unsupported measure type {type(mu).__name__}")


# ---------------------------------------------------------------------------
# CSV interchange (2n coordinate columns + weight)


def atoms_to_csv(mu: AtomicMeasure, path) -> None:
    n = mu.points.shape[1] if mu.count else 0
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        header = [c for i in range(n) for c in (f"x{i + 1}", f"y{i + 1}")] + ["weight"]
        writer.writerow(header)
        for pt, w in zip(mu.points, mu.weights):
            row = []
            for i in range(n):
                row += [f"{pt[i].real:.17g}", f"{pt[i].imag:.17g}"]
            writer.writerow(row + [f"{w:.17g}"])


def atoms_from_csv(spec: DomainSpec, path, label: str | None = None) -> AtomicMeasure:
    try:
        with open(path, newline="") as fh:
            rows = list(csv.reader(fh))
    except FileNotFoundError as exc:
        raise InputError(f"atom file not found: {path}") from exc
    if not rows:
        raise InputError(f"empty atom file {path}")
    header, body = rows[0], rows[1:]
    if len(header) != 2 * spec.dim + 1:
        raise InputError(
            f"atom file has {len(header)} columns, expected {2 * spec.dim + 1} "
            f"for dimension {spec.dim}"
        )
    pts, weights = [], []
    for row in body:
        vals = [float(x) for x in row]
        pts.append([complex(vals[2 * i], vals[2 * i + 1]) for i in range(spec.dim)])
        weights.append(vals[-1])
    name = label if label is not None else str(path)
    return atomic_measure(spec, np.array(pts, dtype=complex), np.array(weights), label=name)
