import pytest

from pramtraj.algorithms import run
from pramtraj.algorithms.search import SearchInstance, binary_search, parallel_search
from pramtraj.algorithms.sorting import SortInstance, bubble_sort, oets_sort
from pramtraj.efficiency import (
    capacity,
    edge_efficiency,
    node_efficiency,
    pair_metrics,
    render_table,
    report_ndjson,
    scaling_report,
    trace_edge_shares,
)
from pramtraj.harness import (
    exhaustive_instances,
    gen_permutation,
    gen_search_instance,
    generate_instance,
    sample_seed,
)
from pramtraj.machine import mapped_edge_count, operated_edge_count
from pramtraj.trajectory import encode_sample


def traces_for(algo, n, count, master=21):
    out = []
    for i in range(count):
        seed = sample_seed(master, algo, n, i)
        inst = generate_instance(algo, n, seed)
        out.append(run(algo, inst)[1])
    return out


class TestCapacity:
    def test_width_times_depth(self):
        _, trace = parallel_search(gen_search_instance(4, 1))
        assert capacity(trace) == 5 * 2

    def test_parallel_search_n8(self):
        _, trace = parallel_search(gen_search_instance(8, 2))
        assert capacity(trace) == 9 * 2

    def test_binary_search_n8_bounded(self):
        for i in range(20):
            _, trace = binary_search(gen_search_instance(8, i))
            assert capacity(trace) <= 9 * 4


class TestNodeEfficiency:
    def test_parallel_search_at_least_half(self):
        for i in range(20):
            _, trace = parallel_search(gen_search_instance(12, i))
            assert node_efficiency(trace) >= 0.5

    def test_binary_search_n16(self):
        for i in range(20):
            _, trace = binary_search(gen_search_instance(16, i))
            assert node_efficiency(trace) <= 2 * 5 / (17 * 5)

    def test_oets_reversed_high_efficiency(self):
        inst = SortInstance(items=tuple(float(9 - i) for i in range(9)))
        _, trace = oets_sort(inst)
        assert node_efficiency(trace) >= 2 / 3

    def test_zero_depth_convention(self):
        _, trace = bubble_sort(SortInstance(items=(1.0,)))
        assert trace.depth == 0
        assert node_efficiency(trace) == 1.0

    def test_budget_bound_everywhere(self):
        for algo in ("parallel_search", "binary_search", "oets", "bubble_sort", "dcsc", "kosaraju"):
            for trace in traces_for(algo, 9, 5):
                eta = node_efficiency(trace)
                assert 0.0 <= eta <= 1.0 + 1.0 / trace.width
                ops = sum(r.op_count for r in trace.activity)
                assert ops <= capacity(trace) + trace.depth


class TestEdgeEfficiency:
    def test_parallel_search_star_share(self):
        traces = traces_for("parallel_search", 8, 30)
        eps_min, eps_mean = edge_efficiency(traces)
        # layer 1 uses n of the 2n star edges, layer 2 none: exactly 1/4
        assert eps_min == pytest.approx(0.25)
        assert eps_mean == pytest.approx(0.25)

    def test_oets_n8_class(self):
        traces = traces_for("oets", 8, 30)
        eps_min, eps_mean = edge_efficiency(traces)
        # even rounds use n pair edges of n(n-1), odd rounds n-2
        assert 1 / 8 <= eps_min + 1e-12 <= eps_mean <= 1 / 7
        assert eps_min == pytest.approx(1 / 8)

    def test_bubble_at_most_four_active_edges(self):
        for trace in traces_for("bubble_sort", 8, 15):
            for rec in trace.activity:
                assert mapped_edge_count(trace, rec) <= 4

    def test_empty_list_rejected(self):
        with pytest.raises(ValueError):
            edge_efficiency([])

    def test_mixed_traces_rejected(self):
        a = traces_for("oets", 6, 1)
        b = traces_for("bubble_sort", 6, 1)
        with pytest.raises(ValueError):
            edge_efficiency(a + b)

    def test_scc_share_counts_instance_edges_once(self):
        for trace in traces_for("dcsc", 10, 10):
            m = operated_edge_count(trace)
            for rec in trace.activity:
                assert mapped_edge_count(trace, rec) <= max(m, 1)
            for share in trace_edge_shares(trace):
                assert 0.0 <= share <= 1.0


class TestScalingReport:
    def test_parallel_search_constant_depth(self):
        rep = scaling_report("parallel_search", [8, 16, 32, 64], 5, 3)
        assert {rec.depth for rec in rep.records} == {2.0}
        assert 0.8 <= rep.slopes["capacity"] <= 1.2
        assert rep.classes["capacity"] == "n"

    def test_bubble_cubic_capacity(self):
        rep = scaling_report("bubble_sort", [8, 16, 32, 64], 5, 3)
        assert 2.8 <= rep.slopes["capacity"] <= 3.2
        assert rep.classes["capacity"] == "n^3"

    def test_dcsc_eta_class(self):
        rep = scaling_report("dcsc", [16, 32, 64, 128], 5, 3)
        etas = [rec.eta for rec in rep.records]
        assert all(a > b for a, b in zip(etas, etas[1:]))
        assert rep.classes["eta"] == "n^-1"

    def test_deterministic_for_fixed_seed(self):
        a = scaling_report("oets", [4, 8, 16], 4, 9)
        b = scaling_report("oets", [4, 8, 16], 4, 9)
        assert a == b
        assert report_ndjson(a) == report_ndjson(b)

    def test_n_list_validation(self):
        with pytest.raises(ValueError):
            scaling_report("oets", [8, 4, 16], 2, 0)
        with pytest.raises(ValueError):
            scaling_report("oets", [4, 8], 2, 0)

    def test_table_rendering(self):
        rep = scaling_report("binary_search", [4, 8, 16], 3, 1)
        table = render_table(rep)
        lines = table.splitlines()
        assert lines[0].split()[:3] == ["algo", "n", "m"]
        assert len(lines) == 4

    def test_exhaustive_matches_enumeration(self):
        rep = scaling_report("oets", [3, 4, 5], 1, 0, exhaustive=True)
        for rec in rep.records:
            shares = []
            for inst in exhaustive_instances("oets", rec.n):
                _, trace = run("oets", inst)
                per = trace_edge_shares(trace)
                shares.append(sum(per) / len(per))
            assert rec.eps_min == pytest.approx(min(shares))


class TestMetricsSurviveSerialization:
    def test_recompute_from_activity_block(self):
        for algo in ("parallel_search", "binary_search", "oets", "bubble_sort", "dcsc", "kosaraju"):
            n = 7
            seed = sample_seed(5, algo, n, 0)
            inst = generate_instance(algo, n, seed)
            output, trace = run(algo, inst)
            sample = encode_sample(algo, inst, trace, output, seed=seed)
            act = sample.activity
            depth = len(act["steps"])
            assert act["width"] * depth == capacity(trace)
            ops = sum(s["ops"] for s in act["steps"])
            if depth:
                assert ops / (act["width"] * depth) == pytest.approx(node_efficiency(trace))
            m = act["m"]
            shares = [s["edges"] / m if m else 0.0 for s in act["steps"]]
            want = trace_edge_shares(trace)
            assert shares == pytest.approx(want)


class TestScaleInvariance:
    def test_sorting_metrics_invariant_under_affine_values(self):
        inst = gen_permutation(9, 77)
        shifted = SortInstance(items=tuple(3.5 * v + 11.0 for v in inst.items))
        for sort_fn in (oets_sort, bubble_sort):
            _, a = sort_fn(inst)
            _, b = sort_fn(shifted)
            assert a.depth == b.depth
            assert [r.active_nodes for r in a.activity] == [r.active_nodes for r in b.activity]
            assert [r.active_edges for r in a.activity] == [r.active_edges for r in b.activity]
            assert node_efficiency(a) == node_efficiency(b)
            assert trace_edge_shares(a) == trace_edge_shares(b)

    def test_search_metrics_invariant_under_affine_values(self):
        inst = gen_search_instance(8, 13)
        shifted = SearchInstance(
            items=tuple(2.0 * v + 1.0 for v in inst.items), x=2.0 * inst.x + 1.0
        )
        for search_fn in (parallel_search, binary_search):
            rank_a, a = search_fn(inst)
            rank_b, b = search_fn(shifted)
            assert rank_a == rank_b
            assert a.depth == b.depth
            assert node_efficiency(a) == node_efficiency(b)


def test_pair_metrics_shape():
    rec = pair_metrics("oets", 8, 5, 3)
    assert rec["algo"] == "oets" and rec["n"] == 8
    assert 0 < rec["eta_min"] <= rec["eta_mean"]
    assert 0 < rec["eps_min"] <= rec["eps_mean"] <= 1
