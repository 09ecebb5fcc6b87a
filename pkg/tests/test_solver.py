"""CO-MBI greedy solver, candidate filtering, opponents, and the baseline."""

import random
import threading

import pytest

from netboost import (
    DistanceTransform,
    NetboostError,
    Network,
    apply_edits,
    betweenness_all,
    betweenness_bruteforce,
)
from netboost._engine import CentralityEngine
from netboost.solver import (
    CandidateEvaluation,
    Mode,
    OpponentStrategy,
    SolverConfig,
    TerminationReason,
    _improves,
    candidate_set,
    check_opponents,
    evaluate_candidate,
    select_best,
    solve_co_mbi,
    solve_mbi_greedy,
    validate_solution,
)
from conftest import random_connected_network, random_network

REC = DistanceTransform.RECIPROCAL


# -- candidate_set ----------------------------------------------------------------


def test_candidate_set_change_weight(star_pendant):
    cfg = SolverConfig(target=1, budget=5, mode=Mode.CHANGE_WEIGHT, forbidden=frozenset({3}))
    assert candidate_set(star_pendant, cfg) == {2, 4}  # neighbors minus forbidden


def test_candidate_set_new_connection_on_clique():
    clique = Network(["a", "b", "c"], [(1, 2, 1), (1, 3, 1), (2, 3, 1)])
    cfg = SolverConfig(target=1, budget=5, mode=Mode.NEW_CONNECTION)
    assert candidate_set(clique, cfg) == set()


def test_candidate_set_excludes_already_edited(star_pendant):
    cfg = SolverConfig(target=5, budget=5, mode=Mode.BOTH)
    cands = candidate_set(star_pendant, cfg, already_edited={2})
    assert 2 not in cands
    assert cands == {1, 3, 4}


def test_candidate_set_degree_filter():
    # hub-heavy graph: nodes 4,5 are peripheral (low weighted degree)
    net = Network(
        ["v", "hub", "mid", "leaf1", "leaf2"],
        [(2, 3, 5), (2, 4, 1), (3, 5, 1), (2, 5, 1)],
    )
    cfg = SolverConfig(target=1, budget=3, mode=Mode.NEW_CONNECTION, degree_filter_percentile=60)
    cands = candidate_set(net, cfg)
    from netboost import degree_percentile_threshold, weighted_degree

    thr = degree_percentile_threshold(net, 60)
    assert cands == {u for u in (2, 3, 4, 5) if weighted_degree(net, u) >= thr}
    # neighbors are exempt from the filter
    cfg2 = SolverConfig(target=4, budget=3, mode=Mode.BOTH, degree_filter_percentile=100)
    assert 2 in candidate_set(net, cfg2)  # neighbor of 4 stays despite filter


# -- check_opponents ----------------------------------------------------------------


def test_no_increment_allows_equality():
    assert check_opponents({1: 5.0}, {1: 5.0}, 1.0, OpponentStrategy.no_increment())
    assert not check_opponents({1: 5.0}, {1: 5.1}, 1.0, OpponentStrategy.no_increment())


def test_delta_percentage():
    s = OpponentStrategy.delta(0.05)
    assert not check_opponents({1: 100.0}, {1: 106.0}, 1.0, s)
    assert check_opponents({1: 100.0}, {1: 104.0}, 1.0, s)
    # growth from zero is out regardless of percentage
    assert not check_opponents({1: 0.0}, {1: 0.5}, 1.0, s)
    assert check_opponents({1: 0.0}, {1: 0.0}, 1.0, s)


def test_upper_bound():
    s = OpponentStrategy.upper_bound(2.0)
    assert check_opponents({1: 10.0}, {1: 12.0}, 0.5, s)
    assert not check_opponents({1: 10.0}, {1: 12.1}, 0.5, s)


def test_delta_ratio():
    s = OpponentStrategy.delta_ratio(3.0)
    assert check_opponents({1: 10.0, 2: 4.0}, {1: 10.2, 2: 4.0}, 1.0, s)  # 1.0 >= 3*0.2
    assert not check_opponents({1: 10.0}, {1: 10.4}, 1.0, s)  # 1.0 < 3*0.4
    # vacuous when nobody grows
    assert check_opponents({1: 10.0}, {1: 9.0}, 0.0, s)


def test_mismatched_sets():
    with pytest.raises(NetboostError) as exc:
        check_opponents({1: 1.0}, {2: 1.0}, 0.0, OpponentStrategy.no_increment())
    assert exc.value.code == "MISMATCHED_OPPONENT_SETS"


# -- evaluate_candidate ----------------------------------------------------------------


def test_minimal_increment_when_everything_accepts(star_pendant):
    cfg = SolverConfig(target=5, budget=10, mode=Mode.NEW_CONNECTION)
    ev = evaluate_candidate(star_pendant, cfg, 3, 10)
    assert ev is not None and ev.increment == 1


def test_none_when_opponent_blocks_everything(star_pendant):
    # any edit from v raises l1's... use h as opponent with a strategy that
    # cannot pass: upper bound below any possible change is emulated by
    # making the opponent the node whose betweenness must strictly drop
    cfg = SolverConfig(
        target=5,
        budget=4,
        mode=Mode.NEW_CONNECTION,
        opponents=frozenset({2}),  # l1 gains nothing... choose h instead
    )
    # l1 sits on every new v-path? verify via the solver outcome instead:
    ev = evaluate_candidate(star_pendant, cfg, 1, 4)  # connecting v-h
    # b_v stays 0 when connecting to the hub directly: rejected by threshold
    assert ev is None


def test_binary_search_crossing_at_six():
    # a-v w3 (len 1/3), a-t w2 (len 1/2); new edge v-t of weight w gives the
    # a->t route through v length 1/3 + 1/w, which first ties 1/2 at w = 6
    net = Network(["a", "v", "t"], [(1, 2, 3), (1, 3, 2)])
    cfg = SolverConfig(target=2, budget=10, mode=Mode.NEW_CONNECTION)
    ev = evaluate_candidate(net, cfg, 3, 10)
    assert ev is not None
    assert ev.increment == 6
    # linear-scan oracle over per-increment recomputation
    from netboost import EdgeEdit, recompute_after_edit

    accepted = []
    for w in range(1, 11):
        scores = recompute_after_edit(net, 2, EdgeEdit(3, w), REC)
        if _improves(0.0, scores[2], cfg.p_imp):
            accepted.append(w)
    assert accepted and accepted[0] == 6


def test_whole_budget_probe(star_pendant):
    cfg = SolverConfig(target=5, budget=7, mode=Mode.NEW_CONNECTION, use_binary_search=False)
    ev = evaluate_candidate(star_pendant, cfg, 3, 7)
    assert ev is not None and ev.increment == 7


def test_evaluate_materializes_scores(star_pendant):
    cfg = SolverConfig(target=5, budget=2, mode=Mode.NEW_CONNECTION)
    ev = evaluate_candidate(star_pendant, cfg, 3, 2)
    scores = ev.scores
    assert scores is not None
    assert abs(scores[5] - ev.b_v) <= 1e-9


# -- select_best ------------------------------------------------------------------------


def _ev(node, increment, b_v):
    return CandidateEvaluation(node=node, increment=increment, b_v=b_v)


def test_select_single():
    assert select_best([_ev(3, 2, 1.0)], 0.0, 0.01).node == 3


def test_select_equal_score_prefers_cheaper():
    out = select_best([_ev(2, 3, 1.0), _ev(7, 1, 1.0)], 0.0, 0.01)
    assert out.node == 7 and out.increment == 1
    out = select_best([_ev(2, 1, 1.0), _ev(7, 3, 1.0)], 0.0, 0.01)
    assert out.node == 2


def test_select_equal_score_equal_cost_prefers_low_id():
    out = select_best([_ev(9, 1, 1.0), _ev(4, 1, 1.0)], 0.0, 0.01)
    assert out.node == 4


def test_select_near_tie_prefers_materially_cheaper():
    # (b=100, w=10) vs (b=99.5, w=2) at p_imp=0.01: near-equal, much cheaper
    for order in ([_ev(1, 10, 100.0), _ev(2, 2, 99.5)], [_ev(1, 2, 99.5), _ev(2, 10, 100.0)]):
        out = select_best(order, 50.0, 0.01)
        assert out.increment == 2 and out.b_v == 99.5


def test_select_clear_winner():
    out = select_best([_ev(1, 2, 10.0), _ev(2, 1, 30.0)], 5.0, 0.01)
    assert out.node == 2


def test_select_empty():
    assert select_best([], 1.0, 0.01) is None


# -- solve_co_mbi ---------------------------------------------------------------------------


def test_star_pendant_budget2(star_pendant):
    sol = solve_co_mbi(star_pendant, SolverConfig(target=5, budget=2, mode=Mode.NEW_CONNECTION))
    assert [(e.node, e.increment) for e in sol.edits] == [(3, 1), (4, 1)]
    assert sol.target_before == 0.0
    assert abs(sol.target_after - 1.5) <= 1e-9
    assert sol.terminated_reason is TerminationReason.BUDGET_EXHAUSTED
    # exhaustive oracle over all <=2-edge unit additions
    best = None
    import itertools

    for k in (1, 2):
        for combo in itertools.combinations([1, 3, 4], k):
            from netboost import EdgeEdit

            edited = apply_edits(star_pendant, 5, [EdgeEdit(u, 1) for u in combo])
            bv = betweenness_bruteforce(edited, REC)[5]
            if best is None or bv > best:
                best = bv
    assert abs(sol.target_after - best) <= 1e-9


def test_clique_new_connection_empty():
    clique = Network(["a", "b", "c"], [(1, 2, 1), (1, 3, 1), (2, 3, 1)])
    sol = solve_co_mbi(clique, SolverConfig(target=1, budget=3, mode=Mode.NEW_CONNECTION))
    assert sol.edits == []
    assert sol.terminated_reason is TerminationReason.NO_IMPROVING_CANDIDATE


def test_opponent_blocking(star_pendant):
    cfg = SolverConfig(target=5, budget=2, mode=Mode.NEW_CONNECTION, opponents=frozenset({1}))
    sol = solve_co_mbi(star_pendant, cfg)
    orig_h = betweenness_bruteforce(star_pendant, REC)[1]
    assert sol.edits  # improving edits exist that do not raise b_h
    for i in range(1, len(sol.edits) + 1):
        edited = apply_edits(star_pendant, 5, sol.edits[:i])
        assert betweenness_bruteforce(edited, REC)[1] <= orig_h + 1e-9
    # exhaustive check: at the committed increment, the first edit is the best
    # single edit that improves b_v without raising b_h (pair the oracle with
    # the solver's minimal-increment policy)
    from netboost import EdgeEdit

    w0 = sol.edits[0].increment
    best = None
    for u in (1, 3, 4):
        edited = apply_edits(star_pendant, 5, [EdgeEdit(u, w0)])
        scores = betweenness_bruteforce(edited, REC)
        if scores[1] <= orig_h + 1e-9 and scores[5] > 1e-9:
            if best is None or scores[5] > best[0]:
                best = (scores[5], u)
    first = apply_edits(star_pendant, 5, sol.edits[:1])
    assert abs(betweenness_bruteforce(first, REC)[5] - best[0]) <= 1e-9


def test_max_edges_cap(star_pendant):
    cfg = SolverConfig(target=5, budget=5, mode=Mode.NEW_CONNECTION, max_edges=1)
    sol = solve_co_mbi(star_pendant, cfg)
    assert len(sol.edits) == 1
    assert sol.terminated_reason is TerminationReason.EDGE_CAP_REACHED


def test_cancelled_before_start(star_pendant):
    flag = threading.Event()
    flag.set()
    sol = solve_co_mbi(star_pendant, SolverConfig(target=5, budget=2), cancel_flag=flag)
    assert sol.edits == []
    assert sol.terminated_reason is TerminationReason.CANCELLED


def test_config_validation(star_pendant):
    with pytest.raises(NetboostError) as exc:
        solve_co_mbi(star_pendant, SolverConfig(target=99, budget=2))
    assert exc.value.code == "UNKNOWN_TARGET"
    for bad in (
        SolverConfig(target=5, budget=0),
        SolverConfig(target=5, budget=2, p_imp=0.0),
        SolverConfig(target=5, budget=2, forbidden=frozenset({5})),
        SolverConfig(target=5, budget=2, opponents=frozenset({5})),
        SolverConfig(target=5, budget=2, max_edges=0),
        SolverConfig(target=5, budget=2, degree_filter_percentile=101),
    ):
        with pytest.raises(NetboostError) as exc:
            solve_co_mbi(star_pendant, bad)
        assert exc.value.code == "INVALID_CONFIG"


def _random_config(rng, net, target):
    others = [x for x in net.node_ids() if x != target]
    n_opp = rng.randint(0, min(2, len(others)))
    opponents = frozenset(rng.sample(others, n_opp))
    rest = [x for x in others if x not in opponents]
    forbidden = frozenset(rng.sample(rest, rng.randint(0, min(2, len(rest)))))
    strategy = rng.choice(
        [
            OpponentStrategy.no_increment(),
            OpponentStrategy.upper_bound(rng.choice([0.0, 0.5, 2.0])),
            OpponentStrategy.delta(rng.choice([0.0, 0.05, 0.5])),
            OpponentStrategy.delta_ratio(rng.choice([0.5, 1.0, 3.0])),
        ]
    )
    return SolverConfig(
        target=target,
        budget=rng.randint(1, 6),
        mode=rng.choice(list(Mode)),
        opponents=opponents,
        opponent_strategy=strategy,
        forbidden=forbidden,
        p_imp=rng.choice([0.005, 0.01, 0.1]),
        degree_filter_percentile=rng.choice([None, 25.0, 75.0]),
        max_edges=rng.choice([None, 1, 2]),
        use_binary_search=rng.random() < 0.5,
    )


def test_randomized_safety_suite():
    rng = random.Random(42)
    for _ in range(80):
        net = random_network(rng, n_min=3)
        target = rng.randint(1, net.n_nodes)
        cfg = _random_config(rng, net, target)
        sol = solve_co_mbi(net, cfg)
        validate_solution(net, cfg, sol)
        assert sol.cost <= cfg.budget
        nv = set(net.neighbors(target))
        seen = set()
        for e in sol.edits:
            assert e.node not in cfg.forbidden and e.node != target
            assert e.node not in seen
            seen.add(e.node)
            if cfg.mode is Mode.CHANGE_WEIGHT:
                assert e.node in nv
            if cfg.mode is Mode.NEW_CONNECTION:
                assert e.node not in nv
        prev = sol.target_before
        for it in sol.iterations:
            assert it.b_v >= prev - 1e-12
            prev = it.b_v
        assert sol.target_after >= sol.target_before - 1e-12
        if sol.edits and cfg.opponents and cfg.opponent_strategy.kind.value == "no-increment":
            edited = apply_edits(net, target, sol.edits)
            before = betweenness_bruteforce(net, REC)
            after = betweenness_bruteforce(edited, REC)
            for c in cfg.opponents:
                assert after[c] <= before[c] + 1e-9


def test_thread_count_does_not_change_solution():
    rng = random.Random(7)
    for _ in range(10):
        net = random_connected_network(rng, n_min=5, n_max=8)
        target = rng.randint(1, net.n_nodes)
        cfg = SolverConfig(target=target, budget=4, mode=Mode.BOTH)
        a = solve_co_mbi(net, cfg, threads=1)
        b = solve_co_mbi(net, cfg, threads=4)
        assert [(e.node, e.increment) for e in a.edits] == [(e.node, e.increment) for e in b.edits]
        assert a.target_after == b.target_after


def test_progress_events(star_pendant):
    events = []
    solve_co_mbi(
        star_pendant,
        SolverConfig(target=5, budget=2, mode=Mode.NEW_CONNECTION),
        progress_sink=events.append,
    )
    assert [e.iteration for e in events] == [1, 2]
    assert events[-1].fraction == 1.0
    assert events[0].cost <= events[1].cost


# -- solve_mbi_greedy --------------------------------------------------------------------------


def test_greedy_k1_tie_break(star_pendant):
    sol = solve_mbi_greedy(star_pendant, 5, k=1, delta=1)
    assert [(e.node, e.increment) for e in sol.edits] == [(3, 1)]
    assert abs(sol.target_after - 0.5) <= 1e-9
    # argmax verified over all three non-neighbors
    from netboost import EdgeEdit

    values = {}
    for u in (1, 3, 4):
        edited = apply_edits(star_pendant, 5, [EdgeEdit(u, 1)])
        values[u] = betweenness_bruteforce(edited, REC)[5]
    assert max(values.values()) == pytest.approx(values[3])


def test_greedy_exhausts_candidates(star_pendant):
    sol = solve_mbi_greedy(star_pendant, 5, k=10, delta=1)
    assert {e.node for e in sol.edits} == {1, 3, 4}
    assert sol.terminated_reason is TerminationReason.NO_IMPROVING_CANDIDATE


def test_greedy_step_optimality_random():
    rng = random.Random(9)
    from netboost import EdgeEdit

    for _ in range(25):
        net = random_connected_network(rng, n_min=4, n_max=7)
        target = rng.randint(1, net.n_nodes)
        k = rng.randint(1, 3)
        sol = solve_mbi_greedy(net, target, k=k, delta=1)
        current = net
        for step in sol.iterations:
            nv = set(current.neighbors(target))
            cands = [u for u in current.node_ids() if u != target and u not in nv]
            best_bv = max(
                betweenness_all(apply_edits(current, target, [EdgeEdit(u, 1)]), REC)[target] for u in cands
            )
            assert step.b_v >= best_bv - 1e-9
            current = apply_edits(current, target, [EdgeEdit(step.node, 1)])


def test_greedy_errors(star_pendant):
    with pytest.raises(NetboostError):
        solve_mbi_greedy(star_pendant, 99, k=1)
    with pytest.raises(NetboostError):
        solve_mbi_greedy(star_pendant, 5, k=0)
