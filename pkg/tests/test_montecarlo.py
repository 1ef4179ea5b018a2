"""Sampling, facet census, and ensemble estimators."""

import math

import numpy as np
import pytest

from spherefacets import (
    DegenerateSampleError,
    EnsembleSpec,
    HeightInterval,
    PolytopeParams,
    estimate,
    expected_facets,
    facet_census,
    ks_distance,
    origin_outside_prob,
    sample_sphere,
    write_facet_csv,
)


class TestSampling:
    def test_unit_norms(self):
        pts = sample_sphere(500, 7, seed=0)
        np.testing.assert_allclose(np.linalg.norm(pts, axis=1), 1.0, atol=1e-12)

    def test_coordinate_means_clt_bound(self):
        pts = sample_sphere(10**5, 5, seed=1)
        assert np.all(np.abs(pts.mean(axis=0)) < 4.0 / math.sqrt(10**5))

    def test_determinism(self):
        a = sample_sphere(50, 3, seed=9)
        b = sample_sphere(50, 3, seed=9)
        c = sample_sphere(50, 3, seed=10)
        assert np.array_equal(a, b)
        assert not np.array_equal(a, c)

    def test_rejects_bad_shape(self):
        with pytest.raises(ValueError):
            sample_sphere(0, 3, seed=0)
        with pytest.raises(ValueError):
            sample_sphere(5, 1, seed=0)


class TestCensus:
    def test_simplex_counts(self):
        for d in (2, 3, 5, 7):
            summary = facet_census(sample_sphere(d + 1, d, seed=d))
            assert summary.facet_count == d + 1
            assert summary.skipped_subsets == 0

    def test_polygon_counts(self):
        for seed in range(5):
            summary = facet_census(sample_sphere(7, 2, seed=seed))
            assert summary.facet_count == 7

    def test_euler_counts_every_replicate(self):
        """d = 3: all sphere points are hull vertices, so 2n - 4 facets."""
        for seed in range(50):
            summary = facet_census(sample_sphere(12, 3, seed=seed))
            assert summary.facet_count == 20
            assert summary.skipped_subsets == 0

    def test_records_verify_from_raw_points(self):
        pts = sample_sphere(10, 4, seed=3)
        summary = facet_census(pts, keep_records=True)
        assert len(summary.records) == summary.facet_count
        assert all(rec.verify(pts) for rec in summary.records)
        heights = sorted(rec.height for rec in summary.records)
        np.testing.assert_allclose(heights, np.sort(summary.heights))

    def test_summary_consistency(self):
        summary = facet_census(sample_sphere(9, 3, seed=5))
        assert summary.facet_count == len(summary.heights)
        assert summary.origin_inside == (summary.min_height > 0)
        assert np.all(np.abs(summary.heights) <= 1.0)

    def test_degenerate_tie_detected(self):
        # a fourth point within tolerance of the plane through two others
        eps = 1e-13
        pts = np.array(
            [
                [1.0, 0.0],
                [0.0, 1.0],
                [math.cos(eps), math.sin(eps)],  # nearly duplicates (1, 0)
                [-1.0, 0.0],
            ]
        )
        with pytest.raises(DegenerateSampleError):
            facet_census(pts)


class TestEnsemble:
    def test_spec_validation(self):
        p = PolytopeParams(12, 4)
        with pytest.raises(ValueError):
            EnsembleSpec(p, replicates=0, seed=0)
        with pytest.raises(ValueError):
            EnsembleSpec(p, replicates=10, seed=0, subset_cap=100)
        with pytest.raises(ValueError):
            EnsembleSpec(PolytopeParams.from_log(900.0, 30), replicates=1, seed=0)

    def test_deterministic_reports(self):
        spec = EnsembleSpec(PolytopeParams(12, 4), replicates=50, seed=21)
        a, b = estimate(spec), estimate(spec)
        assert np.array_equal(a.counts, b.counts)
        assert np.array_equal(a.pooled_heights, b.pooled_heights)
        assert a.to_dict() == b.to_dict()

    def test_mean_count_matches_exact(self):
        spec = EnsembleSpec(PolytopeParams(10, 3), replicates=400, seed=2)
        report = estimate(spec)
        assert np.all(report.counts == 16)  # 2n - 4 deterministically
        assert report.se_facets == 0.0
        exact_val = expected_facets(PolytopeParams(10, 3)).to_float()
        assert report.mean_facets == pytest.approx(exact_val, rel=1e-12)

    def test_origin_inside_matches_wendel(self):
        spec = EnsembleSpec(PolytopeParams(10, 3), replicates=2000, seed=4)
        report = estimate(spec)
        want = 1.0 - origin_outside_prob(10, 3)
        se = report.origin_inside_se
        assert abs(report.origin_inside_freq - want) < 3.0 * se

    def test_negative_height_fraction_matches_exact_split(self):
        p = PolytopeParams(10, 3)
        spec = EnsembleSpec(p, replicates=2000, seed=8)
        report = estimate(spec)
        below = expected_facets(p, HeightInterval(-1.0, 0.0)).to_float()
        total = expected_facets(p).to_float()
        want = below / total
        n_pool = len(report.pooled_heights)
        se = math.sqrt(want * (1 - want) / n_pool) * 3.0
        # pooled heights are weakly dependent within replicates; allow 2x
        assert abs(report.negative_height_fraction - want) < 2.0 * se + 0.01

    def test_report_dict_fields(self):
        spec = EnsembleSpec(PolytopeParams(8, 3), replicates=20, seed=1)
        d = estimate(spec).to_dict()
        for key in ("mean_facets", "se_facets", "origin_inside_freq",
                    "degenerate_resamples", "skipped_subsets"):
            assert key in d


class TestKsHelper:
    def test_uniform_samples_against_uniform_cdf(self):
        rng = np.random.default_rng(12)
        samples = rng.uniform(0.0, 1.0, 4000)
        grid = np.linspace(0.0, 1.0, 2001)
        d = ks_distance(samples, grid, grid)
        assert d < 0.035  # ~ 1.63/sqrt(4000) at the 1% level

    def test_detects_gross_mismatch(self):
        rng = np.random.default_rng(13)
        samples = rng.uniform(0.5, 1.0, 4000)
        grid = np.linspace(0.0, 1.0, 2001)
        assert ks_distance(samples, grid, grid) > 0.4


class TestRecordDump:
    def test_csv_roundtrip(self, tmp_path):
        spec = EnsembleSpec(
            PolytopeParams(8, 3), replicates=3, seed=6, keep_records=True
        )
        report = estimate(spec)
        path = tmp_path / "facets.csv"
        write_facet_csv(str(path), report.records_by_replicate)
        lines = path.read_text().strip().splitlines()
        assert lines[0] == "replicate,vertex_indices,height,normal"
        total = sum(len(r) for r in report.records_by_replicate)
        assert len(lines) == total + 1
        rep, idx, height, normal = lines[1].split(",")
        assert rep == "0"
        assert len(idx.split()) == 3
        assert len(normal.split()) == 3
        assert abs(float(height)) <= 1.0
