import numpy as np
import pytest

import bmcp
from bmcp import ConfigError, Flip, SearchState, Swap, TabuList
from bmcp.tabu import TsParams
from conftest import make_instance


def state_of(inst, items):
    return SearchState.from_selection(inst, bmcp.selection_from_items(inst.m, items))


def test_tenure_formula():
    assert bmcp.tabu_tenure(585, 600) == 10
    assert bmcp.tabu_tenure(1000, 985) == 14
    assert bmcp.tabu_tenure(1, 1) == 4
    assert bmcp.tabu_tenure(100, 99) == 5
    assert bmcp.tabu_tenure(99, 99) == 4


def test_depth_formula():
    assert bmcp.tabu_depth(600) == 10000
    assert bmcp.tabu_depth(100) == 20000
    assert bmcp.tabu_depth(1099) == 20
    for m in (1100, 1500):
        with pytest.raises(ConfigError):
            bmcp.tabu_depth(m)


def test_params_validation():
    with pytest.raises(ConfigError):
        TsParams(depth=0, tenure=3)
    with pytest.raises(ConfigError):
        TsParams(depth=10, tenure=0)


def test_tabu_window():
    tabu = TabuList(4, tenure=3)
    assert not any(tabu.is_tabu(i) for i in range(4))
    tabu.mark(2)
    marked_at = tabu.iteration
    for offset in (1, 2, 3):
        tabu.advance()
        assert tabu.iteration == marked_at + offset
        assert tabu.is_tabu(2)
        assert not tabu.is_tabu(0)
    tabu.advance()
    assert not tabu.is_tabu(2)
    assert tabu.mask().tolist() == [False] * 4


def test_mark_both_swap_items():
    tabu = TabuList(5, tenure=2)
    tabu.mark(1, 4)
    tabu.advance()
    assert tabu.is_tabu(1) and tabu.is_tabu(4)
    assert tabu.mask().tolist() == [False, True, False, False, True]


class TestSelectMove:
    """Hand-checked neighborhood of the selection {item 1} on the tiny
    fixture: flipping in item 2 or item 3 both gain 2 (the unique best),
    every other move loses."""

    def test_best_move_is_a_gaining_flip(self, tiny):
        rng = np.random.default_rng(0)
        seen = set()
        for _ in range(60):
            state = state_of(tiny, [0])
            move = bmcp.select_move(state, TabuList(3, 4), state.objective, rng)
            assert move in (Flip(1), Flip(2))
            state.apply(move)
            assert state.objective == 12
            seen.add(move)
        assert seen == {Flip(1), Flip(2)}

    def test_tabu_item_is_skipped(self, tiny):
        state = state_of(tiny, [0])
        tabu = TabuList(3, 4)
        tabu.mark(1)
        tabu.advance()
        move = bmcp.select_move(state, tabu, 12, np.random.default_rng(0))
        assert move == Flip(2)

    def test_aspiration_overrides_tabu(self, tiny):
        state = state_of(tiny, [0])
        tabu = TabuList(3, 4)
        tabu.mark(1)
        tabu.advance()
        seen = set()
        for k in range(40):
            move = bmcp.select_move(state, tabu, 11, np.random.default_rng(k))
            assert move in (Flip(1), Flip(2))
            seen.add(move)
        assert Flip(1) in seen

    def test_no_admissible_move(self, tiny):
        state = state_of(tiny, [0])
        tabu = TabuList(3, 4)
        tabu.mark(0, 1, 2)
        tabu.advance()
        assert bmcp.select_move(state, tabu, 13, np.random.default_rng(0)) is None

    def test_worsening_move_accepted_when_forced(self, tiny):
        # With the gaining flips tabu and no aspiration, the best
        # admissible move worsens the objective.
        state = state_of(tiny, [0])
        tabu = TabuList(3, 4)
        tabu.mark(1, 2)
        tabu.advance()
        move = bmcp.select_move(state, tabu, 13, np.random.default_rng(0))
        assert move is not None
        delta = state.move_delta(move)
        assert delta.objective < 0


def test_random_fill_fills_everything_when_it_fits(tiny):
    roomy = bmcp.parse_instance(
        bmcp.write_instance(tiny).replace("3 3 10", "3 3 15")
    )
    sel = bmcp.random_fill(roomy, np.random.default_rng(0))
    assert sel.all()


def test_random_fill_respects_capacity():
    inst = make_instance(40, 30, 0.1, 0.3, seed=9)
    for seed in range(20):
        sel = bmcp.random_fill(inst, np.random.default_rng(seed))
        assert bmcp.total_weight(inst, sel) <= inst.capacity
    a = bmcp.random_fill(inst, np.random.default_rng(4))
    b = bmcp.random_fill(inst, np.random.default_rng(4))
    assert np.array_equal(a, b)


def test_random_fill_empty_when_nothing_fits(tiny):
    cramped = bmcp.parse_instance(
        bmcp.write_instance(tiny).replace("3 3 10", "3 3 3")
    )
    assert not bmcp.random_fill(cramped, np.random.default_rng(0)).any()


def test_descent_reaches_swap_local_optimum(tiny):
    # {3} -> swap in item 1 (+5, the unique best); {1} admits no
    # improving swap, so descent stops there.
    state = bmcp.descent_local_search(state_of(tiny, [2]), np.random.default_rng(1))
    assert state.selected_items.tolist() == [0]
    assert state.objective == 10


def test_descent_fixpoint(tiny):
    state = bmcp.descent_local_search(state_of(tiny, [0, 1]), np.random.default_rng(1))
    assert state.selected_items.tolist() == [0, 1]


def test_descent_output_has_no_improving_swap():
    inst = make_instance(25, 30, 0.15, 0.4, seed=21)
    state = bmcp.initial_solution(inst, np.random.default_rng(2))
    assert state.total_weight <= inst.capacity
    for out_item in np.flatnonzero(state.selection):
        for in_item in np.flatnonzero(~state.selection):
            delta = state.swap_delta(int(out_item), int(in_item))
            assert not (delta.feasible and delta.objective > 0)


def test_tabu_search_finds_tiny_optimum(tiny):
    visited = []
    state = state_of(tiny, [2])
    best, _ = bmcp.tabu_search(
        state,
        bmcp.ProbabilityVector.initial(3),
        TsParams(depth=40, tenure=1),
        np.random.default_rng(5),
        observer=lambda s: visited.append((s.objective, s.total_weight)),
    )
    assert best.objective == 12
    assert best.total_weight <= 10
    assert all(w <= 10 for _, w in visited)
    # The walk keeps moving after the optimum, so worsening steps appear.
    objectives = [f for f, _ in visited]
    assert any(b < a for a, b in zip(objectives, objectives[1:]))


def test_tabu_search_halts_when_everything_is_tabu(tiny):
    # Tenure 2 on three items locks the whole neighborhood within a few
    # marks, so the phase ends before the depth cutoff.
    visited = []
    best, _ = bmcp.tabu_search(
        state_of(tiny, [2]),
        bmcp.ProbabilityVector.initial(3),
        TsParams(depth=40, tenure=2),
        np.random.default_rng(5),
        observer=lambda s: visited.append(s.objective),
    )
    assert best.objective == 12
    assert len(visited) < 40


def test_tabu_search_updates_probabilities(tiny):
    prob = bmcp.ProbabilityVector.initial(3)
    bmcp.tabu_search(
        state_of(tiny, [2]),
        prob,
        TsParams(depth=10, tenure=2),
        np.random.default_rng(5),
    )
    assert (prob.probs != 0.5).any()
    assert ((prob.probs > 0) & (prob.probs < 1)).all()


def test_tabu_search_halts_without_moves():
    inst = bmcp.Instance(
        weights=np.array([5]), profits=np.array([1]), capacity=4,
        rows=(np.array([0]),),
    )
    best, _ = bmcp.tabu_search(
        SearchState.empty(inst),
        bmcp.ProbabilityVector.initial(1),
        TsParams(depth=100, tenure=1),
        np.random.default_rng(0),
    )
    assert best.objective == 0


def test_sparse_scan_matches_dense(monkeypatch):
    # Forcing the sparse evaluator must reproduce the dense walk exactly:
    # deltas are identical integers, so every tie-break draw lines up.
    inst = make_instance(40, 50, 0.1, 0.4, seed=15)

    def run():
        state = SearchState.from_selection(
            inst, bmcp.random_fill(inst, np.random.default_rng(7))
        )
        return bmcp.tabu_search(
            state,
            bmcp.ProbabilityVector.initial(inst.m),
            TsParams(depth=60, tenure=4),
            np.random.default_rng(11),
        )[0]

    dense = run()
    monkeypatch.setattr("bmcp.tabu._DENSE_LIMIT", 0)
    sparse = run()
    assert dense.objective == sparse.objective
    assert np.array_equal(dense.selection, sparse.selection)


def test_int64_scan_matches_float(monkeypatch):
    inst = make_instance(30, 40, 0.12, 0.4, seed=16)

    def run():
        state = SearchState.from_selection(
            inst, bmcp.random_fill(inst, np.random.default_rng(3))
        )
        return bmcp.tabu_search(
            state,
            bmcp.ProbabilityVector.initial(inst.m),
            TsParams(depth=60, tenure=4),
            np.random.default_rng(19),
        )[0]

    floats = run()
    monkeypatch.setattr("bmcp.tabu._FLOAT_SAFE", 0)
    ints = run()
    assert floats.objective == ints.objective
    assert np.array_equal(floats.selection, ints.selection)


def test_tabu_search_respects_deadline():
    import time

    inst = make_instance(80, 80, 0.08, 0.4, seed=30)
    state = SearchState.from_selection(
        inst, bmcp.random_fill(inst, np.random.default_rng(0))
    )
    started = time.perf_counter()
    bmcp.tabu_search(
        state,
        bmcp.ProbabilityVector.initial(inst.m),
        TsParams(depth=10**6, tenure=4),
        np.random.default_rng(0),
        deadline=started + 0.2,
    )
    assert time.perf_counter() - started < 2.0


def test_tabu_search_best_is_a_copy(tiny):
    state = state_of(tiny, [0])
    best, _ = bmcp.tabu_search(
        state,
        bmcp.ProbabilityVector.initial(3),
        TsParams(depth=5, tenure=2),
        np.random.default_rng(3),
    )
    assert best is not state
    frozen = (best.objective, best.selection.copy())
    selected = np.flatnonzero(state.selection)
    assert selected.size
    state.apply(Flip(int(selected[0])))
    assert best.objective == frozen[0]
    assert np.array_equal(best.selection, frozen[1])
