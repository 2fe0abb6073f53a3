import random
from fractions import Fraction

import pytest

from netcon import (
    L,
    L_ETPC,
    SWRT,
    USRT,
    EdgeSchedule,
    InfeasibleScheduleError,
    ModelError,
    Network,
    ProblemInstance,
    SpanningTree,
    UndefinedGapError,
    UnsupportedVariantError,
    check_it_feasible,
    evaluate,
    format_gap,
    gap,
    pairs_connection_sequence,
    vertex_recovery_sequence,
)

from helpers import random_feasible_order, random_instance, random_spanning_tree, tri


def tri_sched(edge_ids, order):
    tree = SpanningTree.from_edges(tri(), edge_ids)
    return EdgeSchedule(tree, order)


class TestProblemInstance:
    def test_usrt_gets_unit_weights(self):
        inst = ProblemInstance(tri(), USRT)
        assert inst.weights == (1, 1, 1)

    def test_variant_data_required(self):
        with pytest.raises(ModelError):
            ProblemInstance(tri(), SWRT)
        with pytest.raises(ModelError):
            ProblemInstance(tri(), L)
        with pytest.raises(ModelError):
            ProblemInstance(tri(), L_ETPC)
        with pytest.raises(ModelError):
            ProblemInstance(tri(), "bogus", weights=(1, 1, 1))

    def test_mismatched_data_rejected(self):
        with pytest.raises(ModelError):
            ProblemInstance(tri(), SWRT, weights=(1, 2))
        with pytest.raises(ModelError):
            ProblemInstance(tri(), L, vertex_due_dates=(0,))
        with pytest.raises(ModelError):
            ProblemInstance(tri(), L_ETPC, pair_due_dates={(1, 1): 3})
        with pytest.raises(ModelError):
            ProblemInstance(tri(), USRT, vertex_due_dates=(0, 0, 0))

    def test_pair_normalization(self):
        inst = ProblemInstance(tri(), L_ETPC, pair_due_dates={(2, 1): 5, (0, 1): 3})
        assert inst.relevant_pairs == [(0, 1), (1, 2)]
        assert inst.q == 2
        assert inst.d_min() == 3

    def test_d_min_vertex(self):
        inst = ProblemInstance(tri(), L, vertex_due_dates=(99, 4, 7))
        assert inst.d_min() == 4  # depot due date ignored
        with pytest.raises(UnsupportedVariantError):
            ProblemInstance(tri(), USRT).d_min()


class TestEvaluate:
    def test_usrt_tri(self):
        inst = ProblemInstance(tri(), USRT)
        obj, times = evaluate(inst, tri_sched([0, 2], (0, 2)))
        assert times == {1: 1, 2: 2}
        assert obj == 3

    def test_lateness_tri(self):
        inst = ProblemInstance(tri(), L, vertex_due_dates=(0, 2, 2))
        obj, _ = evaluate(inst, tri_sched([0, 2], (0, 2)))
        assert obj == 0

    def test_letpc_tri(self):
        inst = ProblemInstance(tri(), L_ETPC, pair_due_dates={(1, 2): 1, (0, 1): 3})
        obj, _ = evaluate(inst, tri_sched([0, 2], (2, 0)))
        assert obj == 0
        obj2, _ = evaluate(inst, tri_sched([0, 2], (0, 2)))
        assert obj2 == 1

    def test_swrt_weighting(self):
        inst = ProblemInstance(tri(), SWRT, weights=(1, 5, 2))
        obj, _ = evaluate(inst, tri_sched([0, 2], (0, 2)))
        assert obj == 5 * 1 + 2 * 2

    def test_infeasible_raises_for_it(self):
        inst = ProblemInstance(tri(), USRT)
        with pytest.raises(InfeasibleScheduleError) as exc:
            evaluate(inst, tri_sched([0, 2], (2, 0)))
        assert exc.value.position == 0
        assert exc.value.edge_id == 2

    def test_et_any_order_ok(self):
        inst = ProblemInstance(tri(), L_ETPC, pair_due_dates={(0, 2): 0})
        obj, _ = evaluate(inst, tri_sched([0, 2], (2, 0)))
        assert obj == 2


class TestFeasibility:
    def test_tri_orders(self):
        net = tri()
        assert not check_it_feasible(net, tri_sched([0, 2], (2, 0)))
        assert check_it_feasible(net, tri_sched([0, 2], (0, 2)))

    def test_star_always_feasible(self):
        net = Network(4, ((0, 1, 1), (0, 2, 1), (0, 3, 1)))
        tree = SpanningTree.from_edges(net, [0, 1, 2])
        for order in ((0, 1, 2), (2, 1, 0), (1, 0, 2)):
            assert check_it_feasible(net, EdgeSchedule(tree, order))


class TestSequences:
    def test_recovery_tri(self):
        inst = ProblemInstance(tri(), USRT)
        assert vertex_recovery_sequence(inst, tri_sched([0, 2], (0, 2))).order == (1, 2)

    def test_recovery_path(self):
        net = Network(3, ((0, 1, 1), (1, 2, 1)))
        inst = ProblemInstance(net, USRT)
        tree = SpanningTree.from_edges(net, [0, 1])
        assert vertex_recovery_sequence(inst, EdgeSchedule(tree, (0, 1))).order == (1, 2)

    def test_recovery_tri_other_tree(self):
        inst = ProblemInstance(tri(), USRT)
        assert vertex_recovery_sequence(inst, tri_sched([0, 1], (0, 1))).order == (1, 2)

    def test_recovery_rejects_et(self):
        inst = ProblemInstance(tri(), L_ETPC, pair_due_dates={(0, 1): 0})
        with pytest.raises(UnsupportedVariantError):
            vertex_recovery_sequence(inst, tri_sched([0, 2], (0, 2)))

    def test_pairs_full_tri(self):
        inst = ProblemInstance(tri(), USRT)
        seq = pairs_connection_sequence(inst, tri_sched([0, 2], (0, 2)))
        assert seq.groups() == [[(0, 1)], [(0, 2), (1, 2)]]

    def test_pairs_single_edge(self):
        net = Network(2, ((0, 1, 3),))
        inst = ProblemInstance(net, USRT)
        sched = EdgeSchedule(SpanningTree.from_edges(net, [0]), (0,))
        assert pairs_connection_sequence(inst, sched).groups() == [[(0, 1)]]

    def test_pairs_reduced(self):
        inst = ProblemInstance(tri(), L_ETPC, pair_due_dates={(1, 2): 1})
        seq = pairs_connection_sequence(inst, tri_sched([0, 2], (0, 2)), reduced=True)
        assert seq.groups() == [[], [(1, 2)]]

    def test_group_of_with_empty_groups(self):
        inst = ProblemInstance(tri(), L_ETPC, pair_due_dates={(1, 2): 1})
        seq = pairs_connection_sequence(inst, tri_sched([0, 2], (0, 2)), reduced=True)
        assert seq.group_starts == (0, 0)
        assert seq.group_of(0) == 1  # the pair belongs to the later group


class TestGap:
    def test_eq1(self):
        assert format_gap(gap(110, 100, None, USRT)) == "9.09"

    def test_zero(self):
        assert format_gap(gap(100, 100, None, SWRT)) == "0.00"

    def test_eq2(self):
        assert format_gap(gap(50, 40, 50, L)) == "10.00"

    def test_exact_fraction(self):
        assert gap(110, 100, None, USRT) == Fraction(1000, 110)

    def test_undefined(self):
        with pytest.raises(UndefinedGapError):
            gap(-5, -10, 0, L)
        with pytest.raises(ModelError):
            gap(90, 100, None, USRT)

    def test_rounding_half_up(self):
        assert format_gap(Fraction(1, 8)) == "0.13"  # 0.125 rounds up


class TestRandomConsistency:
    def test_recovery_times_monotone(self):
        rng = random.Random(21)
        for _ in range(50):
            inst = random_instance(rng, USRT, rng.randint(2, 9))
            tree = random_spanning_tree(rng, inst.net)
            sched = random_feasible_order(rng, tree)
            _, times = evaluate(inst, sched)
            assert sorted(times) == [v for v in range(inst.net.n) if v != inst.net.depot]
            assert max(times.values()) == tree.total_length

    def test_pair_times_cover_all(self):
        rng = random.Random(22)
        for _ in range(50):
            inst = random_instance(rng, L_ETPC, rng.randint(2, 9))
            tree = random_spanning_tree(rng, inst.net)
            order = list(tree.edge_ids)
            rng.shuffle(order)
            _, times = evaluate(inst, EdgeSchedule(tree, tuple(order)))
            assert set(times) == set(inst.relevant_pairs)
