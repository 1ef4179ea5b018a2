"""Monte Carlo facet censuses: the simulation ground truth.

Points are sampled uniformly on the sphere (normalized Gaussians), and
facets are found by brute force: every d-subset whose affine hull leaves
all remaining points strictly on one side is a facet.  That is the
defining criterion itself rather than a fast hull algorithm, which keeps
this module independent from the quadrature path it cross-checks; the
``subset_cap`` guard keeps the O(C(n, d)) enumeration at desk scale.

Replicates draw independent RNG streams keyed by (seed, replicate,
attempt), so reports are reproducible and independent of scheduling.
Samples with a near-tie against the half-space tolerance are discarded
and redrawn (counted), never silently classified.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field
from itertools import combinations

import numpy as np

from .exact import PolytopeParams

__all__ = [
    "EnsembleSpec",
    "FacetRecord",
    "CensusSummary",
    "EnsembleReport",
    "DegenerateSampleError",
    "sample_sphere",
    "facet_census",
    "estimate",
    "write_facet_csv",
    "ks_distance",
]

HALFSPACE_TOL = 1e-9
CONDITION_LIMIT = 1e12
VERTEX_RESIDUAL_TOL = 1e-8


class DegenerateSampleError(RuntimeError):
    """A non-vertex point ties the supporting hyperplane within tolerance."""


@dataclass(frozen=True)
class EnsembleSpec:
    """A reproducible batch of facet censuses."""

    params: PolytopeParams
    replicates: int
    seed: int
    subset_cap: int = 1_000_000
    keep_records: bool = False

    def __post_init__(self):
        if self.params.n is None:
            raise ValueError("Monte Carlo needs an exact point count")
        if self.replicates < 1:
            raise ValueError("need at least one replicate")
        n, d = int(self.params.n), self.params.d
        if math.comb(n, d) > self.subset_cap:
            raise ValueError(
                f"C({n}, {d}) = {math.comb(n, d)} exceeds subset_cap={self.subset_cap}"
            )


@dataclass(frozen=True)
class FacetRecord:
    """One detected facet: spanning vertices, outward unit normal, height."""

    vertex_indices: tuple
    normal: np.ndarray
    height: float

    def verify(self, points: np.ndarray, tol: float = 1e-8) -> bool:
        """Re-check the defining facet properties from the raw points."""
        u = self.normal
        if abs(float(np.linalg.norm(u)) - 1.0) > 1e-10:
            return False
        dots = points @ u
        for i in self.vertex_indices:
            if abs(dots[i] - self.height) > tol:
                return False
        others = np.setdiff1d(np.arange(len(points)), np.asarray(self.vertex_indices))
        return bool(np.all(dots[others] <= self.height + tol))


@dataclass
class CensusSummary:
    """Per-replicate aggregate of one facet census."""

    facet_count: int
    heights: np.ndarray
    min_height: float
    origin_inside: bool
    skipped_subsets: int = 0
    records: list = field(default_factory=list)

    def __post_init__(self):
        if self.facet_count != len(self.heights):
            raise ValueError("facet_count must equal the number of heights")
        if self.facet_count and self.origin_inside != (self.min_height > 0.0):
            raise ValueError("origin_inside must match the sign of min_height")


def sample_sphere(n: int, d: int, seed) -> np.ndarray:
    """n i.i.d. uniform points on the unit sphere in R^d.

    ``seed`` is an integer, a SeedSequence, or a Generator; the same seed
    always yields the same points.  Sampling normalizes standard Gaussian
    vectors, which is uniform in every dimension.
    """
    if n < 1 or d < 2:
        raise ValueError(f"need n >= 1 and d >= 2, got n={n}, d={d}")
    rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)
    pts = rng.standard_normal((n, d))
    norms = np.linalg.norm(pts, axis=1)
    while np.any(norms == 0.0):  # probability-zero guard
        bad = norms == 0.0
        pts[bad] = rng.standard_normal((int(bad.sum()), d))
        norms = np.linalg.norm(pts, axis=1)
    return pts / norms[:, None]


def _subset_array(n: int, d: int) -> np.ndarray:
    return np.array(list(combinations(range(n), d)), dtype=np.intp)


def facet_census(
    points: np.ndarray,
    subsets: np.ndarray | None = None,
    halfspace_tol: float = HALFSPACE_TOL,
    cond_limit: float = CONDITION_LIMIT,
    keep_records: bool = False,
) -> CensusSummary:
    """Enumerate all facets of the hull of the given sphere points.

    For each d-subset, the linear system <x_i, u> = 1 yields the
    hyperplane through the subset (normalized to a unit normal u and
    height h > 0); the subset spans a facet when every remaining point
    falls strictly on one side.  Near-singular systems are skipped and
    tallied; any remaining point within ``halfspace_tol`` of the plane
    raises DegenerateSampleError.
    """
    points = np.asarray(points, dtype=float)
    n, d = points.shape
    if subsets is None:
        subsets = _subset_array(n, d)

    mats = points[subsets]  # (C, d, d)
    singulars = np.linalg.svd(mats, compute_uv=False)
    with np.errstate(divide="ignore", invalid="ignore"):
        cond = singulars[:, 0] / singulars[:, -1]
    usable = np.isfinite(cond) & (cond < cond_limit)
    skipped = int(np.count_nonzero(~usable))

    sub = subsets[usable]
    sol = np.linalg.solve(mats[usable], np.ones((int(usable.sum()), d, 1)))[:, :, 0]
    norms = np.linalg.norm(sol, axis=1)
    normals = sol / norms[:, None]
    heights = 1.0 / norms

    side = normals @ points.T - heights[:, None]  # (C_ok, n)
    rows = np.arange(len(sub))[:, None]
    residual = np.abs(side[rows, sub]).max(axis=1)
    solved = residual <= VERTEX_RESIDUAL_TOL
    skipped += int(np.count_nonzero(~solved))
    sub, normals, heights, side = sub[solved], normals[solved], heights[solved], side[solved]

    is_vertex = np.zeros(side.shape, dtype=bool)
    np.put_along_axis(is_vertex, sub, True, axis=1)
    masked_low = np.where(is_vertex, -np.inf, side)
    masked_high = np.where(is_vertex, np.inf, side)
    if np.any(np.abs(masked_high) < halfspace_tol):
        raise DegenerateSampleError(
            "a non-vertex point ties a candidate hyperplane within tolerance"
        )
    below = np.all(masked_low <= -halfspace_tol, axis=1)
    above = np.all(masked_high >= halfspace_tol, axis=1)

    facet_heights = np.concatenate([heights[below], -heights[above]])
    records: list = []
    if keep_records:
        for idx in np.flatnonzero(below):
            records.append(
                FacetRecord(tuple(sub[idx]), normals[idx].copy(), float(heights[idx]))
            )
        for idx in np.flatnonzero(above):
            records.append(
                FacetRecord(tuple(sub[idx]), -normals[idx], float(-heights[idx]))
            )

    count = int(len(facet_heights))
    if skipped == 0 and count < d + 1:
        raise RuntimeError(
            f"census found {count} facets with no skips; every polytope has >= d+1"
        )
    min_height = float(facet_heights.min()) if count else math.nan
    return CensusSummary(
        facet_count=count,
        heights=facet_heights,
        min_height=min_height,
        origin_inside=bool(count and min_height > 0.0),
        skipped_subsets=skipped,
        records=records,
    )


@dataclass
class EnsembleReport:
    """Aggregated estimators over independent replicates."""

    spec: EnsembleSpec
    counts: np.ndarray
    pooled_heights: np.ndarray
    min_heights: np.ndarray
    origin_inside: np.ndarray
    skipped_subsets: int
    degenerate_resamples: int
    records_by_replicate: list | None = None

    @property
    def mean_facets(self) -> float:
        return float(self.counts.mean())

    @property
    def se_facets(self) -> float:
        if len(self.counts) < 2:
            return math.nan
        return float(self.counts.std(ddof=1) / math.sqrt(len(self.counts)))

    @property
    def origin_inside_freq(self) -> float:
        return float(self.origin_inside.mean())

    @property
    def origin_inside_se(self) -> float:
        p = self.origin_inside_freq
        return math.sqrt(p * (1.0 - p) / len(self.origin_inside))

    @property
    def negative_height_fraction(self) -> float:
        return float(np.mean(self.pooled_heights < 0.0))

    def to_dict(self) -> dict:
        return {
            "n": int(self.spec.params.n),
            "d": self.spec.params.d,
            "replicates": self.spec.replicates,
            "seed": self.spec.seed,
            "mean_facets": self.mean_facets,
            "se_facets": self.se_facets,
            "origin_inside_freq": self.origin_inside_freq,
            "origin_inside_se": self.origin_inside_se,
            "pooled_height_count": int(len(self.pooled_heights)),
            "negative_height_fraction": self.negative_height_fraction,
            "mean_min_height": float(self.min_heights.mean()),
            "skipped_subsets": self.skipped_subsets,
            "degenerate_resamples": self.degenerate_resamples,
        }


def estimate(spec: EnsembleSpec) -> EnsembleReport:
    """Run the ensemble: census every replicate and aggregate estimators.

    Replicate r (attempt a, after degenerate redraws) uses the stream
    seeded by SeedSequence(seed, spawn_key=(r, a)); the report is a
    deterministic function of the spec.
    """
    n, d = int(spec.params.n), spec.params.d
    subsets = _subset_array(n, d)
    counts = np.empty(spec.replicates, dtype=np.intp)
    mins = np.empty(spec.replicates)
    inside = np.empty(spec.replicates, dtype=bool)
    pooled = []
    all_records: list | None = [] if spec.keep_records else None
    skipped = 0
    degenerate = 0
    for rep in range(spec.replicates):
        for attempt in range(1000):
            rng = np.random.default_rng(
                np.random.SeedSequence(spec.seed, spawn_key=(rep, attempt))
            )
            points = sample_sphere(n, d, rng)
            try:
                summary = facet_census(
                    points, subsets=subsets, keep_records=spec.keep_records
                )
            except DegenerateSampleError:
                degenerate += 1
                continue
            break
        else:
            raise RuntimeError(f"replicate {rep} degenerate after 1000 redraws")
        counts[rep] = summary.facet_count
        mins[rep] = summary.min_height
        inside[rep] = summary.origin_inside
        pooled.append(summary.heights)
        skipped += summary.skipped_subsets
        if all_records is not None:
            all_records.append(summary.records)
    return EnsembleReport(
        spec=spec,
        counts=counts,
        pooled_heights=np.concatenate(pooled),
        min_heights=mins,
        origin_inside=inside,
        skipped_subsets=skipped,
        degenerate_resamples=degenerate,
        records_by_replicate=all_records,
    )


def write_facet_csv(path: str, records_by_replicate: list) -> None:
    """Per-facet dump: replicate, vertex indices, height, normal components."""
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["replicate", "vertex_indices", "height", "normal"])
        for rep, records in enumerate(records_by_replicate):
            for rec in records:
                writer.writerow(
                    [
                        rep,
                        " ".join(str(i) for i in rec.vertex_indices),
                        f"{rec.height:.17g}",
                        " ".join(f"{c:.17g}" for c in rec.normal),
                    ]
                )


def ks_distance(samples: np.ndarray, grid_x: np.ndarray, grid_cdf: np.ndarray) -> float:
    """Kolmogorov-Smirnov distance of samples against a tabulated CDF.

    The reference CDF is linearly interpolated from (grid_x, grid_cdf);
    the table must be dense enough that interpolation error is below the
    distance being resolved.
    """
    xs = np.sort(np.asarray(samples, dtype=float))
    ref = np.interp(xs, grid_x, grid_cdf)
    k = len(xs)
    steps_hi = np.arange(1, k + 1) / k
    steps_lo = np.arange(0, k) / k
    return float(np.max(np.maximum(steps_hi - ref, ref - steps_lo)))
