"""Brute-force cross-checks: exact LP, hull membership, achievability scans."""

import random
from fractions import Fraction

import pytest

from dychan import lp
from dychan.channel import ChannelConfig
from dychan.errors import NotInRegionError
from dychan.oracle import (
    ScanLimits,
    achievability_scan,
    in_convex_hull,
    lp_feasible,
    out_of_bound_probes,
    sample_rational_tuples,
    vertex_validate,
)
from dychan.region import RateTuple, outer_bound, vertices
from dychan.scheme import build_plan

CFG = ChannelConfig(4, 3, 2)


class TestLpFeasible:
    def test_single_rate_maximum(self):
        res = lp_feasible(outer_bound(CFG).inequalities, (1, 0, 0, 0, 0, 0))
        assert res.is_optimal and res.value == 3

    def test_zero_objective(self):
        res = lp_feasible(outer_bound(CFG).inequalities, (0,) * 6)
        assert res.is_optimal and res.value == 0

    def test_weak_user_pair_is_capped_by_its_gain(self):
        res = lp_feasible(outer_bound(CFG).inequalities, (0, 0, 0, 0, 1, 1))
        assert res.value == 2

    def test_statuses_are_distinguished(self):
        infeasible = lp.solve_lp([1], [([1], lp.LE, -2)])
        unbounded = lp.solve_lp([1], [([-1], lp.LE, 0)])
        assert infeasible.status == lp.INFEASIBLE
        assert unbounded.status == lp.UNBOUNDED


class TestVertexValidate:
    def test_origin_vertex_of_degenerate_config(self):
        reg = outer_bound(ChannelConfig(0, 0, 0))
        report = vertex_validate(reg, vertices(reg))
        assert report.passed

    def test_all_enumerated_vertices_pass(self):
        reg = outer_bound(ChannelConfig(2, 2, 2))
        vs = vertices(reg)
        report = vertex_validate(reg, vs, hull_vertices=[v.point for v in vs],
                                 samples=100, seed=5)
        assert report.passed and report.hull_disagreements == 0

    def test_interior_member_is_flagged_as_non_vertex(self):
        reg = outer_bound(CFG)
        report = vertex_validate(reg, [RateTuple.make(1, 0, 0, 0, 0, 0)])
        (check,) = report.checks
        assert check.feasible and check.tight_rank < 6 and not check.is_vertex

    def test_symmetric_all_tight_point_is_a_face_barycenter(self):
        """All six triple-rate bounds can be tight simultaneously, yet the
        bounds only span rank four (the three opposite bounds pairwise sum
        to the total rate), so the symmetric point is the barycenter of a
        two-dimensional face rather than a corner."""
        reg = outer_bound(ChannelConfig(2, 2, 2))
        point = RateTuple.make(*[Fraction(2, 3)] * 6)
        assert reg.contains(point)
        tight = reg.tight_labels(point)
        assert set(tight) == {"TRB1", "TRB2", "TRB3", "TRB4", "TRB5", "TRB6"}
        report = vertex_validate(reg, [point])
        (check,) = report.checks
        assert check.feasible and check.tight_rank == 4 and not check.is_vertex
        # it is the average of three integer exchange-pair corners
        corners = [
            RateTuple.make(2, 0, 2, 0, 0, 0),
            RateTuple.make(0, 2, 0, 0, 2, 0),
            RateTuple.make(0, 0, 0, 2, 0, 2),
        ]
        avg = RateTuple.make(*(sum(c[i] for c in corners) / 3 for i in range(6)))
        assert avg == point
        assert in_convex_hull(point, [v.point for v in vertices(reg)])


class TestHullAgreement:
    @pytest.mark.parametrize("gains", [(2, 1, 1), (3, 2, 1), (2, 2, 2)])
    def test_membership_matches_hull(self, gains):
        cfg = ChannelConfig(*gains)
        reg = outer_bound(cfg)
        hull = [v.point for v in vertices(reg)]
        for rates in sample_rational_tuples(cfg, 120, seed=17):
            assert reg.contains(rates) == in_convex_hull(rates, hull)


class TestScan:
    def test_unit_config_scan_passes(self):
        report = achievability_scan(ChannelConfig(1, 1, 1), ScanLimits(seed=1, probes=10))
        assert report.passed
        assert report.points_checked == 10

    def test_reference_config_scan_passes(self):
        report = achievability_scan(CFG, ScanLimits(seed=1, probes=20))
        assert report.passed and report.points_checked == 190

    def test_probes_sit_one_unit_outside(self):
        region = outer_bound(CFG)
        for probe in out_of_bound_probes(CFG, 50, seed=9):
            violated = region.violations(probe)
            assert violated, probe
            worst = max(region.by_label(lab).lhs(probe) - region.by_label(lab).bound
                        for lab in violated)
            assert worst >= 1

    def test_single_rate_probe_above_envelope(self):
        with pytest.raises(NotInRegionError):
            build_plan(RateTuple.make(4, 0, 0, 0, 0, 0), CFG)

    def test_point_sampling_limits_work(self):
        report = achievability_scan(CFG, ScanLimits(seed=2, probes=5, point_sample=25))
        assert report.points_checked == 25 and report.passed


class TestDualitySanity:
    @pytest.mark.parametrize("gains", [(4, 3, 2), (3, 2, 1)])
    def test_optimum_attained_at_enumerated_vertex(self, gains):
        cfg = ChannelConfig(*gains)
        reg = outer_bound(cfg)
        points = [v.point for v in vertices(reg)]
        rng = random.Random(31)
        for _ in range(20):
            objective = [rng.randint(0, 7) for _ in range(6)]
            res = lp_feasible(reg.inequalities, objective)
            values = [sum(c * x for c, x in zip(objective, p)) for p in points]
            assert res.value == max(values)
