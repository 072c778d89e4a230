"""Level-assignment stages, plan building, and symbol extension."""

import pytest

from dychan.channel import ChannelConfig
from dychan.errors import NotInRegionError, PlanValidationError, PreconditionError
from dychan.region import RateTuple, integer_points, outer_bound
from dychan.scheme import (
    BIDIR,
    CYCLIC,
    UNI,
    LevelPlan,
    StreamAssignment,
    bidir_stage,
    build_plan,
    cyclic_stage,
    derive_relay_map,
    initial_state,
    symbol_extension,
    uni_stage,
)

CFG = ChannelConfig(4, 3, 2)


def levels(assignments, kind=None):
    return [a.uplink_levels for a in assignments if kind is None or a.kind == kind]


class TestBidirStage:
    def test_mixed_pairs(self):
        state, parts = bidir_stage(RateTuple.make(1, 1, 1, 0, 1, 0), CFG)
        assert (state.a, state.b, state.c) == (1, 1, 0)
        by_pair = {a.streams: a.uplink_levels for a in parts}
        assert by_pair[((1, 2), (2, 1))] == (3,)
        assert by_pair[((1, 3), (3, 1))] == (1,)
        assert state.residual == RateTuple.zero()
        assert state.reduced == (2, 1, 1)
        assert state.free_levels == (2, 4)

    def test_zero_rates_are_a_no_op(self):
        state, parts = bidir_stage(RateTuple.zero(), CFG)
        assert parts == ()
        assert state.reduced == CFG.gains()
        assert state.free_levels == (1, 2, 3, 4)

    def test_wide_pair_dips_into_shared_window(self):
        state, parts = bidir_stage(RateTuple.make(2, 0, 2, 0, 0, 0), CFG)
        assert state.a == 2
        assert levels(parts) == [(2, 3)]
        assert state.residual == RateTuple.zero()
        assert state.reduced == (2, 1, 1)  # the third gain saturates at n2'

    def test_rejects_fractional_and_outside_tuples(self):
        with pytest.raises(PreconditionError):
            bidir_stage(RateTuple.make("1/2", 0, 0, 0, 0, 0), CFG)
        with pytest.raises(PreconditionError):
            bidir_stage(RateTuple.make(4, 0, 4, 0, 0, 0), CFG)

    def test_residual_has_no_pair_left(self):
        for rates in integer_points(outer_bound(ChannelConfig(3, 3, 2))):
            state, _ = bidir_stage(rates, ChannelConfig(3, 3, 2))
            r = state.residual
            for j, k in ((1, 2), (1, 3), (2, 3)):
                assert min(r.rate(j, k), r.rate(k, j)) == 0


class TestCyclicStage:
    def test_forward_cycle(self):
        state0 = initial_state(RateTuple.make(1, 0, 0, 1, 1, 0), ChannelConfig(2, 2, 1))
        state, groups = cyclic_stage(state0)
        assert (state.d, state.e) == (1, 0)
        assert [(g.role, g.streams, g.uplink_levels) for g in groups] == [
            ("A", ((1, 2), (2, 3)), (2,)),
            ("B", ((2, 3), (3, 1)), (1,)),
        ]
        assert state.residual == RateTuple.zero()

    def test_mirror_cycle_repeats_user_one(self):
        state0 = initial_state(RateTuple.make(0, 1, 1, 0, 0, 1), ChannelConfig(2, 2, 1))
        state, groups = cyclic_stage(state0)
        assert (state.d, state.e) == (0, 1)
        assert groups[0].streams == ((1, 3), (2, 1))
        assert groups[1].streams == ((1, 3), (3, 2))
        assert groups[0].uplink_levels == (2,) and groups[1].uplink_levels == (1,)

    def test_empty_residual_skips(self):
        state0 = initial_state(RateTuple.zero(), CFG)
        state, groups = cyclic_stage(state0)
        assert groups == () and state.residual == RateTuple.zero()

    def test_rejects_residual_with_pair(self):
        state0 = initial_state(RateTuple.make(1, 0, 1, 0, 0, 0), CFG)
        with pytest.raises(PreconditionError):
            cyclic_stage(state0)


class TestUniStage:
    def test_three_stream_packing(self):
        state0 = initial_state(RateTuple.make(1, 1, 0, 1, 0, 0), ChannelConfig(3, 3, 2))
        parts = uni_stage(state0)
        table = {a.streams[0]: (a.uplink_levels, a.downlink_levels) for a in parts}
        assert table[(1, 2)] == ((3,), (3,))
        assert table[(1, 3)] == ((2,), (1,))
        assert table[(2, 3)] == ((1,), (2,))

    def test_common_receiver(self):
        state0 = initial_state(RateTuple.make(0, 0, 1, 0, 1, 0), ChannelConfig(2, 2, 1))
        parts = uni_stage(state0)
        table = {a.streams[0]: (a.uplink_levels, a.downlink_levels) for a in parts}
        assert table[(2, 1)][0] == (2,) and table[(3, 1)][0] == (1,)
        assert {table[(2, 1)][1], table[(3, 1)][1]} == {(1,), (2,)}

    def test_empty_residual(self):
        assert uni_stage(initial_state(RateTuple.zero(), CFG)) == ()

    def test_rejects_cyclic_residual(self):
        state0 = initial_state(RateTuple.make(1, 0, 0, 1, 1, 0), ChannelConfig(2, 2, 1))
        with pytest.raises(PreconditionError):
            uni_stage(state0)


class TestBuildPlan:
    def test_all_ones_is_pure_bidirectional(self):
        plan = build_plan(RateTuple.make(1, 1, 1, 1, 1, 1), CFG)
        assert all(a.kind == BIDIR for a in plan.assignments)
        assert sorted(l for a in plan.assignments for l in a.uplink_levels) == [1, 2, 3]
        assert plan.delivered() == plan.rates

    def test_zero_plan_is_empty(self):
        plan = build_plan(RateTuple.zero(), CFG)
        assert plan.assignments == () and plan.relay_map == ()

    def test_pure_uni_directional(self):
        plan = build_plan(RateTuple.make(3, 0, 0, 0, 0, 0), CFG)
        assert [a.kind for a in plan.assignments] == [UNI]
        assert plan.assignments[0].uplink_levels == (1, 2, 3)

    def test_stream_split_across_all_three_stages(self):
        plan = build_plan(RateTuple.make(3, 0, 1, 1, 1, 0), ChannelConfig(4, 4, 2))
        kinds = [a.kind for a in plan.assignments]
        assert kinds == [BIDIR, CYCLIC, CYCLIC, UNI]
        assert plan.delivered() == plan.rates
        # bit windows of the split stream tile its full width
        windows = sorted(
            win for (idx, stream), win in plan.bit_slices.items() if stream == (1, 2)
        )
        assert windows == [(0, 1), (1, 2), (2, 3)]

    def test_rejects_out_of_region(self):
        with pytest.raises(NotInRegionError) as err:
            build_plan(RateTuple.make(4, 0, 0, 0, 0, 0), CFG)
        assert "TRB1" in err.value.violated

    def test_rejects_fractional(self):
        with pytest.raises(PreconditionError):
            build_plan(RateTuple.make("1/2", 0, 0, 0, 0, 0), CFG)

    @pytest.mark.parametrize("gains", [(2, 2, 2), (3, 2, 1), (3, 3, 3)])
    def test_every_integer_point_plans(self, gains):
        cfg = ChannelConfig(*gains)
        for rates in integer_points(outer_bound(cfg)):
            plan = build_plan(rates, cfg)
            plan.validate()
            acct = plan.stage_accounting()
            assert acct["bidir"]["bits"] == 2 * acct["bidir"]["levels"]
            assert 2 * acct["cyclic"]["bits"] == 3 * acct["cyclic"]["levels"]
            assert acct["uni"]["bits"] == acct["uni"]["levels"]
            used = sum(v["levels"] for v in acct.values())
            assert used <= cfg.n1

    def test_probes_one_unit_outside_are_rejected(self):
        region = outer_bound(CFG)
        for rates in list(integer_points(region))[:40]:
            for iq in region.substantive:
                slack = iq.bound - iq.lhs(rates)
                coord = next(i for i, c in enumerate(iq.coeffs) if c > 0)
                bumped = list(rates)
                bumped[coord] += slack + 1
                with pytest.raises(NotInRegionError):
                    build_plan(RateTuple.make(*bumped), CFG)


class TestPlanValidation:
    def test_triple_superposition_rejected(self):
        asg = StreamAssignment(UNI, ((1, 2), (2, 3), (3, 1)), (1,), (1,), 1)
        plan = LevelPlan(CFG, RateTuple.make(1, 0, 0, 1, 1, 0), (asg,), derive_relay_map([asg]))
        with pytest.raises(PlanValidationError):
            plan.validate()

    def test_overlapping_levels_rejected(self):
        a1 = StreamAssignment(UNI, ((1, 2),), (1,), (1,), 1)
        a2 = StreamAssignment(UNI, ((2, 1),), (1,), (2,), 1)
        plan = LevelPlan(
            CFG, RateTuple.make(1, 0, 1, 0, 0, 0), (a1, a2), derive_relay_map([a1, a2])
        )
        with pytest.raises(PlanValidationError):
            plan.validate()

    def test_inaccessible_level_rejected(self):
        # user 3 cannot reach level 4 on either side
        asg = StreamAssignment(UNI, ((3, 1),), (4,), (4,), 1)
        plan = LevelPlan(CFG, RateTuple.make(0, 0, 0, 0, 1, 0), (asg,), derive_relay_map([asg]))
        with pytest.raises(PlanValidationError):
            plan.validate()

    def test_echo_assignment_must_reuse_levels(self):
        asg = StreamAssignment(BIDIR, ((1, 2), (2, 1)), (3,), (2,), 1)
        plan = LevelPlan(CFG, RateTuple.make(1, 0, 1, 0, 0, 0), (asg,), (((3, 2)),))
        with pytest.raises(PlanValidationError):
            plan.validate()

    def test_delivery_mismatch_rejected(self):
        asg = StreamAssignment(UNI, ((1, 2),), (1,), (1,), 1)
        plan = LevelPlan(CFG, RateTuple.make(2, 0, 0, 0, 0, 0), (asg,), derive_relay_map([asg]))
        with pytest.raises(PlanValidationError):
            plan.validate()


class TestSymbolExtension:
    def test_symmetric_two_thirds_point(self):
        q, rates, config = symbol_extension(RateTuple.make(*["2/3"] * 6), ChannelConfig(2, 2, 2))
        assert q == 3
        assert rates == RateTuple.make(2, 2, 2, 2, 2, 2)
        assert config == ChannelConfig(6, 6, 6)

    def test_integer_tuples_need_no_extension(self):
        q, rates, config = symbol_extension(RateTuple.make(1, 0, 1, 0, 0, 0), CFG)
        assert q == 1 and config == CFG

    def test_half_rate_pair(self):
        q, rates, config = symbol_extension(
            RateTuple.make("1/2", 0, "1/2", 0, 0, 0), ChannelConfig(1, 1, 1)
        )
        assert q == 2
        assert rates == RateTuple.make(1, 0, 1, 0, 0, 0)
        assert config == ChannelConfig(2, 2, 2)

    def test_rejects_outside_tuples(self):
        with pytest.raises(NotInRegionError):
            symbol_extension(RateTuple.make("7/2", 0, 0, 0, 0, 0), CFG)
