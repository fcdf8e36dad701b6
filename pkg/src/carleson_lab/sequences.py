"""Uniformly discrete sequences and the weighted sequence measures they carry.

A finite sequence is uniformly discrete when its pairwise Kobayashi distances
are bounded below.  The module computes separation constants, counts points in
invariant balls, splits an arbitrary finite sequence into separated parts by
greedy coloring, generates separated test sequences by greedy packing, and
attaches the sigma-weighted atomic measure whose Carleson property the theory
predicts.  Boundary-accumulating counterexample generators live here too.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import domains, geometry, kobayashi, measures
from .carleson import (
    CarlesonConfig,
    CarlesonReport,
    carleson_test,
    _pseudo_distance_matrix,
)
from .bergman import KernelModel, kernel_row, norm_sq
from .domains import DomainSpec
from .errors import InputError
from .measures import AtomicMeasure
from .polynomials import poly_eval, random_polynomial

INSIDE = kobayashi.INSIDE
OUTSIDE = kobayashi.OUTSIDE
UNCERTAIN = kobayashi.UNCERTAIN


@dataclass(frozen=True)
class SequenceSet:
    """Finite set of distinct interior points, kept in insertion order."""

    points: np.ndarray
    label: str = ""
    separation_cache: float | None = None

    @property
    def count(self) -> int:
        return len(self.points)


def sequence_set(spec: DomainSpec, points, label: str = "") -> SequenceSet:
    pts = np.asarray(points, dtype=complex)
    if pts.ndim == 0:
        pts = pts.reshape(1, 1)
    elif pts.ndim == 1:
        # flat input: a list of scalars on a 1-dim domain, else a single point
        pts = pts.reshape(-1, 1) if spec.dim == 1 else pts.reshape(1, -1)
    if pts.ndim != 2 or (pts.shape[0] and pts.shape[1] != spec.dim):
        raise InputError(f"points have dimension {pts.shape[1]}, domain has {spec.dim}")
    inside = domains.contains(spec, pts)
    if not np.all(inside):
        raise InputError(f"{int((~inside).sum())} sequence points are not interior")
    if len(pts) > 1:
        diff = pts[:, None, :] - pts[None, :, :]
        dist = np.sqrt((np.abs(diff) ** 2).sum(axis=2))
        np.fill_diagonal(dist, np.inf)
        if float(dist.min()) <= 0.0:
            raise InputError("sequence points must be pairwise distinct")
    return SequenceSet(points=pts, label=label)


# ---------------------------------------------------------------------------
# separation and counting


def separation(spec: DomainSpec, gamma: SequenceSet) -> float:
    """Min pairwise tanh-distance; exact on the models, a certified lower
    bound elsewhere.  Fewer than two points returns +inf."""
    pts = gamma.points
    if len(pts) < 2:
        return math.inf
    if spec.kind in ("disk", "ball"):
        rho = _pseudo_distance_matrix(spec, pts, pts)
        np.fill_diagonal(rho, np.inf)
        return float(rho.min())
    frames = [geometry.minimal_frame(spec, p) for p in pts]
    best = math.inf
    for i in range(len(pts)):
        for j in range(i + 1, len(pts)):
            low, _ = kobayashi.bracket_tanh_distance(
                spec, pts[i], pts[j], frame_x=frames[i], frame_y=frames[j]
            )
            best = min(best, low)
    return best


@dataclass(frozen=True)
class BallCount:
    count: int
    uncertain: int  # how many of the counted points were not certified Inside


def count_in_ball(spec: DomainSpec, x, r: float, gamma: SequenceSet) -> BallCount:
    """M(x, r, Gamma): points of Gamma in the tanh-radius-r ball around x.
    Uncertain memberships count, so the result upper-bounds the true M."""
    x = domains.as_point(spec, x)
    if gamma.count == 0:
        return BallCount(count=0, uncertain=0)
    if spec.kind in ("disk", "ball"):
        rho = _pseudo_distance_matrix(spec, gamma.points, x[None, :])[:, 0]
        return BallCount(count=int((rho < r).sum()), uncertain=0)
    sandwich = kobayashi.ball_sandwich(spec, x, r)
    count = 0
    uncertain = 0
    for p in gamma.points:
        status = kobayashi.ball_membership(spec, x, r, p, sandwich=sandwich)
        if status != OUTSIDE:
            count += 1
            if status == UNCERTAIN:
                uncertain += 1
    return BallCount(count=count, uncertain=uncertain)


def max_count_in_ball(spec: DomainSpec, r: float, gamma: SequenceSet) -> int:
    """max over x in Gamma of M(x, r, Gamma)."""
    return max((count_in_ball(spec, p, r, gamma).count for p in gamma.points), default=0)


# ---------------------------------------------------------------------------
# greedy coloring decomposition


def _within_matrix(spec: DomainSpec, pts: np.ndarray, r: float) -> np.ndarray:
    """within[i, j]: point i fails to be certified outside the r-ball at j.
    Same-part points are therefore certified >= r apart."""
    if spec.kind in ("disk", "ball"):
        rho = _pseudo_distance_matrix(spec, pts, pts)
        return rho < r
    frames = [geometry.minimal_frame(spec, p) for p in pts]
    outer = np.array([(2.0 * r / (1.0 - r)) * f.sigma for f in frames])
    bases = np.array([f.basis for f in frames])
    diff = pts[:, None, :] - pts[None, :, :]
    coords = np.abs(np.einsum("ikj,kmj->ikm", diff, np.conj(bases)))
    outside = (coords > outer[None, :, :]).any(axis=2)
    return ~outside


def greedy_decompose(spec: DomainSpec, gamma: SequenceSet, r: float) -> list[SequenceSet]:
    """Index-order greedy coloring: each point takes the smallest color free
    among earlier points within tanh-distance r.  Every part is r-separated;
    the number of parts never exceeds max M(x, r, Gamma)."""
    if not 0.0 < r < 1.0:
        raise InputError(f"r must lie in (0,1), got {r}")
    pts = gamma.points
    if gamma.count == 0:
        return []
    within = _within_matrix(spec, pts, r)
    colors = np.full(gamma.count, -1, dtype=int)
    for i in range(gamma.count):
        used = {int(colors[j]) for j in range(i) if within[i, j] or within[j, i]}
        c = 0
        while c in used:
            c += 1
        colors[i] = c
    parts = []
    for c in range(int(colors.max()) + 1):
        idx = np.flatnonzero(colors == c)
        parts.append(
            SequenceSet(points=pts[idx], label=f"{gamma.label or 'seq'}:part{c}")
        )
    return parts


def decomposition_colors(gamma: SequenceSet, parts: list[SequenceSet]) -> np.ndarray:
    """Per-point color index implied by a decomposition (for CSV output)."""
    colors = np.full(gamma.count, -1, dtype=int)
    for c, part in enumerate(parts):
        for p in part.points:
            match = np.flatnonzero((gamma.points == p).all(axis=1))
            colors[match[0]] = c
    return colors


# ---------------------------------------------------------------------------
# greedy packing generator


@dataclass(frozen=True)
class PackingResult:
    sequence: SequenceSet
    exhausted: bool  # candidate stream ran out before the region saturated
    candidates_used: int


def greedy_packing(
    spec: DomainSpec,
    delta_sep: float,
    level_floor: float,
    seed: int = 0,
    candidates: int = 4096,
) -> PackingResult:
    """Greedy separated subset of a quasi-random stream on {r <= -level_floor}.

    A candidate is accepted when its tanh-distance to every accepted point is
    certified >= delta_sep (exact on the models).  The result is uniformly
    discrete with separation >= delta_sep by construction.
    """
    if not 0.0 < delta_sep < 1.0:
        raise InputError(f"delta_sep must lie in (0,1), got {delta_sep}")
    pts = domains.quasi_interior(spec, candidates, seed=seed, level_floor=level_floor)
    exact = spec.kind in ("disk", "ball")
    accepted: list[np.ndarray] = []
    frames: list[geometry.MinimalFrame] = []
    outer: list[np.ndarray] = []
    last_accept = -1
    for idx, z in enumerate(pts):
        ok = True
        if accepted:
            if exact:
                rho = _pseudo_distance_matrix(spec, z[None, :], np.array(accepted))[0]
                ok = bool((rho >= delta_sep).all())
            else:
                diff = z[None, :] - np.array(accepted)
                bases = np.array([f.basis for f in frames])
                coords = np.abs(np.einsum("kj,kmj->km", diff, np.conj(bases)))
                ok = bool((coords > np.array(outer)).any(axis=1).all())
        if ok:
            accepted.append(z)
            last_accept = idx
            if not exact:
                fr = geometry.minimal_frame(spec, z)
                frames.append(fr)
                outer.append((2.0 * delta_sep / (1.0 - delta_sep)) * fr.sigma)
    seq = SequenceSet(
        points=np.array(accepted), label=f"pack(sep={delta_sep:g},seed={seed})"
    )
    # acceptances in the last tenth of the stream mean the region had not
    # saturated when the candidates ran out
    exhausted = last_accept >= candidates - max(1, candidates // 10)
    return PackingResult(sequence=seq, exhausted=exhausted, candidates_used=candidates)


# ---------------------------------------------------------------------------
# sequence measures and boundary clusters


def sequence_measure(spec: DomainSpec, gamma: SequenceSet) -> AtomicMeasure:
    """Atomic measure with weight prod_i sigma_i(z_k)^2 at each point.

    The squared product matches the nu-volume scale of the invariant balls
    (each sigma_i is a complex one-dimensional radius, contributing area
    sigma_i^2), which is what makes separated sequences Carleson.
    """
    weights = np.empty(gamma.count)
    for k, p in enumerate(gamma.points):
        frame = geometry.minimal_frame(spec, p)
        weights[k] = float(np.prod(frame.sigma**2))
    return measures.atomic_measure(
        spec, gamma.points, weights, label=f"seq2[{gamma.label or 'gamma'}]"
    )


def dyadic_ray(spec: DomainSpec, direction, depth: int = 12, start: int = 1) -> SequenceSet:
    """Points at defining-levels shrinking like 2^{-k} along a boundary ray
    from the anchor; with unit weights this is the standard non-Carleson
    boundary accumulation."""
    anchor = domains.anchor_point(spec)
    d = np.asarray(direction, dtype=complex)
    d = d / np.linalg.norm(d)
    lam0 = abs(float(domains.defining_value(spec, anchor)))
    pts = []
    for k in range(start, start + depth):
        t = domains._ray_root(spec, anchor, d, -lam0 * 2.0 ** (-k))
        pts.append(anchor + t * d)
    return SequenceSet(points=np.array(pts), label=f"ray(depth={depth})")


def boundary_cluster(spec: DomainSpec, direction, levels: int = 8) -> SequenceSet:
    """Multiplicity cluster: 2^k points packed within pseudoradius ~2^{-k-2}
    of the dyadic ray point at level k.  Not uniformly discrete; its
    unit-weight measure diverges like 8^k at the accumulation point."""
    anchor = domains.anchor_point(spec)
    d = np.asarray(direction, dtype=complex)
    d = d / np.linalg.norm(d)
    lam0 = abs(float(domains.defining_value(spec, anchor)))
    pts = []
    for k in range(1, levels + 1):
        t = domains._ray_root(spec, anchor, d, -lam0 * 2.0 ** (-k))
        base = anchor + t * d
        delta = float(domains.boundary_distance(spec, base))
        n_k = 2**k
        # radial offsets keep the cluster inside and pairwise distinct
        offsets = (np.arange(n_k) / n_k) * (2.0 ** (-k - 2)) * delta
        for off in offsets:
            pts.append(base + off * d)
    return SequenceSet(points=np.array(pts), label=f"cluster(levels={levels})")


# ---------------------------------------------------------------------------
# the Carleson pipeline for sequence measures


@dataclass(frozen=True)
class Thm42Report:
    gamma: SequenceSet
    measure: AtomicMeasure
    carleson: CarlesonReport
    statement3_kernel_sup: float
    statement3_poly_sup: float
    part_count: int
    max_ball_count: int
    separation: float
    verdicts_agree: bool


def thm42_pipeline(
    spec: DomainSpec, model: KernelModel, gamma: SequenceSet, config: CarlesonConfig
) -> Thm42Report:
    """Weighted-measure Carleson test plus the direct sequence-side statement:
    sup_f sum_k w_k |f(z_k)|^2 / ||f||^2 over the same dictionary, evaluated
    from the atoms independently of the measure plumbing."""
    mu = sequence_measure(spec, gamma)
    report = carleson_test(spec, model, mu, config)

    # statement (3) recomputed from the raw atoms
    kernel_sup = 0.0
    for gp in report.grid:
        row = kernel_row(model, gp.point, gamma.points)
        norm = np.sqrt(float(np.real(kernel_row(model, gp.point, gp.point[None, :])[0])))
        kernel_sup = max(kernel_sup, float(np.sum(mu.weights * np.abs(row / norm) ** 2)))
    if model.variant == "series" and model.table.degree >= config.polynomial_degree:
        table = model.table
    else:
        import carleson_lab.bergman as _bergman

        table = _bergman.moments(spec, config.polynomial_degree)
    poly_sup = 0.0
    rng = np.random.default_rng(np.random.SeedSequence(config.seed, spawn_key=(202,)))
    for _ in range(config.dictionary_polynomials):
        poly = random_polynomial(spec.dim, config.polynomial_degree, rng)
        num = float(np.sum(mu.weights * np.abs(poly_eval(poly, gamma.points)) ** 2))
        poly_sup = max(poly_sup, num / norm_sq(poly, table))

    parts = greedy_decompose(spec, gamma, config.r)
    m_max = max_count_in_ball(spec, config.r, gamma)
    return Thm42Report(
        gamma=gamma,
        measure=mu,
        carleson=report,
        statement3_kernel_sup=kernel_sup,
        statement3_poly_sup=poly_sup,
        part_count=len(parts),
        max_ball_count=m_max,
        separation=separation(spec, gamma),
        verdicts_agree=report.berezin.verdict == report.geometric.verdict,
    )


# ---------------------------------------------------------------------------
# the standard measure suite


_SUITE_NAMES = (
    "lebesgue",
    "packing0.3",
    "packing0.5",
    "packing0.8",
    "ray+",
    "ray-",
    "cluster",
    "density(1-d)",
    "density(1/(1-d))",
    "atom",
)


def measure_suite_names() -> tuple[str, ...]:
    return _SUITE_NAMES


def named_measure(spec: DomainSpec, name: str, seed: int = 0):
    """Build one entry of the standard suite without constructing the rest."""
    e1 = np.zeros(spec.dim, dtype=complex)
    e1[0] = 1.0
    if name == "lebesgue":
        return measures.lebesgue_measure()
    if name in ("packing0.3", "packing0.5", "packing0.8"):
        delta_sep = float(name[len("packing") :])
        pack = greedy_packing(spec, delta_sep, level_floor=0.02, seed=seed, candidates=4096)
        return sequence_measure(spec, pack.sequence)
    if name in ("ray+", "ray-", "cluster"):
        if name == "cluster":
            seq = boundary_cluster(spec, 1j * e1)
        else:
            seq = dyadic_ray(spec, e1 if name == "ray+" else -e1)
        return measures.atomic_measure(
            spec, seq.points, np.ones(seq.count), label=f"unit[{seq.label}]"
        )
    if name == "density(1-d)":
        return measures.density_catalog(spec)["one_minus_delta"]
    if name == "density(1/(1-d))":
        return measures.density_catalog(spec)["inv_one_minus_delta"]
    if name == "atom":
        return measures.atomic_measure(
            spec, (0.5 * e1)[None, :], np.array([1.0]), label="atom-half"
        )
    raise InputError(f"unknown suite measure {name!r}; known: {', '.join(_SUITE_NAMES)}")


def standard_measure_suite(spec: DomainSpec, seed: int = 0) -> list[tuple[str, object]]:
    """Ten measures spanning the verdict space: Lebesgue, three weighted
    packings, two unit-weight dyadic rays, one boundary cluster, the two
    catalog densities, and a single atom at the half-way axis point."""
    return [(name, named_measure(spec, name, seed=seed)) for name in _SUITE_NAMES]


# ---------------------------------------------------------------------------
# CSV plumbing


def sequence_to_csv(seq: SequenceSet, path) -> None:
    pts = seq.points
    n = pts.shape[1] if len(pts) else 0
    header = ",".join(f"x{i+1},y{i+1}" for i in range(n))
    lines = [header]
    for p in pts:
        lines.append(",".join(f"{v:.17g}" for pair in zip(p.real, p.imag) for v in pair))
    with open(path, "w") as fh:
        fh.write("\n".join(lines) + "\n")


def sequence_from_csv(spec: DomainSpec, path, label: str = "") -> SequenceSet:
    try:
        with open(path) as fh:
            lines = [line.strip() for line in fh if line.strip()]
    except FileNotFoundError as exc:
        raise InputError(f"sequence file not found: {path}") from exc
    if not lines:
        raise InputError(f"empty sequence file {path}")
    header = lines[0].split(",")
    if len(header) != 2 * spec.dim:
        raise InputError(
            f"sequence file has {len(header)} columns, expected {2 * spec.dim}"
        )
    rows = []
    for line in lines[1:]:
        vals = [float(tok) for tok in line.split(",")]
        rows.append([complex(vals[2 * i], vals[2 * i + 1]) for i in range(spec.dim)])
    return sequence_set(spec, np.array(rows), label=label or str(path))


def decomposition_to_csv(gamma: SequenceSet, parts: list[SequenceSet], path) -> None:
    colors = decomposition_colors(gamma, parts)
    pts = gamma.points
    n = pts.shape[1]
    header = ",".join(f"x{i+1},y{i+1}" for i in range(n)) + ",color"
    lines = [header]
    for p, c in zip(pts, colors):
        coord = ",".join(f"{v:.17g}" for pair in zip(p.real, p.imag) for v in pair)
        lines.append(f"{coord},{int(c)}")
    with open(path, "w") as fh:
        fh.write("\n".join(lines) + "\n")
