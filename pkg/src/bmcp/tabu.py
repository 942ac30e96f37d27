"""Tabu search over the flip and swap neighborhoods.

One search phase starts from a feasible state, repeatedly applies the best
admissible move (worsening moves included), and stops after ``depth``
consecutive non-improving iterations or when no admissible move exists.
Both items touched by a move become tabu for ``tenure`` iterations;
a tabu move is still admitted when it would beat the best objective seen
so far in the phase (aspiration). Exact ties in the integer move deltas
are broken uniformly at random.
"""

from __future__ import annotations

import time
from dataclasses import dataclass
from typing import TYPE_CHECKING

import numpy as np

from .errors import ConfigError
from .instance import Instance
from .state import Flip, Move, SearchState, Swap

if TYPE_CHECKING:
    from .learning import ProbabilityVector

# Up to this m*n the incidence matrix is densified for the neighborhood
# scan (64 MB of float64 at the limit); larger instances stay sparse.
_DENSE_LIMIT = 1 << 23

# Deltas are exact in float64 as long as every partial sum of profits
# stays below 2^52; beyond that the scan falls back to int64 arithmetic.
_FLOAT_SAFE = 1 << 52


def tabu_tenure(m: int, n: int) -> int:
    """Tenure grows with instance size: 4 + floor(max(m, n) / 100)."""
    return 4 + max(m, n) // 100


def tabu_depth(m: int) -> int:
    """Default cutoff for consecutive non-improving iterations: (1100 - m) * 20.

    The formula shrinks as instances grow and turns nonpositive at
    m >= 1100; such instances must set an explicit depth.
    """
    if m >= 1100:
        raise ConfigError(
            f"default depth formula is nonpositive for m={m}; set depth explicitly"
        )
    return (1100 - m) * 20


@dataclass(frozen=True)
class TsParams:
    depth: int
    tenure: int

    def __post_init__(self):
        if self.depth < 1:
            raise ConfigError("depth must be positive")
        if self.tenure < 1:
            raise ConfigError("tenure must be positive")

    @classmethod
    def for_instance(cls, inst: Instance) -> "TsParams":
        return cls(depth=tabu_depth(inst.m), tenure=tabu_tenure(inst.m, inst.n))


class TabuList:
    """Per-item tabu expiry, advanced once per search iteration.

    An item marked at iteration t stays tabu through iteration t + tenure
    and is admissible again from t + tenure + 1. Iterations start at 1 so a
    fresh list (expiry all zero) marks nothing tabu.
    """

    __slots__ = ("expiry", "tenure", "iteration")

    def __init__(self, item_count: int, tenure: int):
        self.expiry = np.zeros(item_count, dtype=np.int64)
        self.tenure = tenure
        self.iteration = 1

    def advance(self) -> None:
        self.iteration += 1

    def mark(self, *items: int) -> None:
        self.expiry[list(items)] = self.iteration + self.tenure

    def is_tabu(self, item: int) -> bool:
        return bool(self.iteration <= self.expiry[item])

    def mask(self) -> np.ndarray:
        """Boolean vector of currently tabu items."""
        return self.expiry >= self.iteration


class _MoveEvaluator:
    """Vectorized move deltas for one instance.

    ``deltas`` gives, for every item at once, the objective gain of
    flipping it in (meaningful where unselected) and the loss of flipping
    it out (where selected): a single matvec against the incidence matrix
    with profits masked to uncovered / uniquely covered elements.
    ``swap_matrix`` adds the correction term for elements the leaving and
    entering rows share.

    Arithmetic runs in float64 on a densified incidence matrix whenever
    that is safe and fits (every value is an integer well below 2^53, so
    results and tie comparisons stay exact while matmuls hit BLAS).
    """

    __slots__ = ("instance", "weights", "profits", "zero", "sparse", "A")

    def __init__(self, inst: Instance):
        self.instance = inst
        self.weights = inst.weights
        exact_in_float = int(inst.profits.max()) * inst.n < _FLOAT_SAFE
        dtype = np.float64 if exact_in_float else np.int64
        self.sparse = inst.m * inst.n > _DENSE_LIMIT
        if self.sparse:
            A = inst.incidence
            self.A = A.astype(dtype) if exact_in_float else A
        else:
            self.A = inst.incidence.toarray().astype(dtype)
        self.profits = inst.profits.astype(dtype)
        self.zero = dtype(0)

    def deltas(self, state: SearchState) -> tuple[np.ndarray, np.ndarray]:
        cov = state.coverage
        gain = self.A @ np.where(cov == 0, self.profits, self.zero)
        loss = self.A @ np.where(cov == 1, self.profits, self.zero)
        return gain, loss

    def swap_matrix(
        self,
        state: SearchState,
        sel_idx: np.ndarray,
        unsel_idx: np.ndarray,
        gain: np.ndarray,
        loss: np.ndarray,
    ) -> np.ndarray:
        """Objective deltas for every (selected, unselected) exchange."""
        unique_profit = np.where(state.coverage == 1, self.profits, self.zero)
        if self.sparse:
            corr = (
                self.A[sel_idx].multiply(unique_profit) @ self.A[unsel_idx].T
            ).toarray()
        else:
            # Full s-by-m product: BLAS consumes the transposed view
            # without a copy, the column slice afterwards is small.
            corr = ((self.A[sel_idx] * unique_profit) @ self.A.T)[:, unsel_idx]
        return gain[unsel_idx][None, :] - loss[sel_idx][:, None] + corr


def _pick_move(
    evaluator: _MoveEvaluator,
    state: SearchState,
    tabu: TabuList,
    best_so_far: int,
    rng: np.random.Generator,
) -> Move | None:
    inst = evaluator.instance
    weights = evaluator.weights
    headroom = inst.capacity - state.total_weight
    sel_idx = np.flatnonzero(state.selection)
    unsel_idx = np.flatnonzero(~state.selection)
    gain, loss = evaluator.deltas(state)
    tabu_now = tabu.mask()
    free_sel = ~tabu_now[sel_idx]
    free_unsel = ~tabu_now[unsel_idx]
    # Aspiration: a tabu move is admissible when its delta pushes the
    # objective strictly past the phase best.
    threshold = best_so_far - state.objective

    deltas = []
    admissible = []
    if unsel_idx.size:
        d = gain[unsel_idx]
        deltas.append(d)
        admissible.append(
            (weights[unsel_idx] <= headroom) & (free_unsel | (d > threshold))
        )
    if sel_idx.size:
        d = -loss[sel_idx]
        deltas.append(d)
        admissible.append(free_sel | (d > threshold))
    if sel_idx.size and unsel_idx.size:
        d = evaluator.swap_matrix(state, sel_idx, unsel_idx, gain, loss)
        dw = weights[unsel_idx][None, :] - weights[sel_idx][:, None]
        ok = (dw <= headroom) & (
            (free_sel[:, None] & free_unsel[None, :]) | (d > threshold)
        )
        deltas.append(d.ravel())
        admissible.append(ok.ravel())

    if not deltas:
        return None
    flat_d = np.concatenate(deltas)
    flat_ok = np.concatenate(admissible)
    if flat_d.dtype == np.float64:
        masked = np.where(flat_ok, flat_d, -np.inf)
        best = masked.max()
        if best == -np.inf:
            return None
    else:
        if not flat_ok.any():
            return None
        masked = np.where(flat_ok, flat_d, np.iinfo(np.int64).min)
        best = masked.max()
    ties = np.flatnonzero(masked == best)
    pick = int(ties[0] if ties.size == 1 else ties[rng.integers(ties.size)])

    n_in = unsel_idx.size
    n_out = sel_idx.size
    if pick < n_in:
        return Flip(int(unsel_idx[pick]))
    pick -= n_in
    if pick < n_out:
        return Flip(int(sel_idx[pick]))
    pick -= n_out
    return Swap(int(sel_idx[pick // n_in]), int(unsel_idx[pick % n_in]))


def select_move(
    state: SearchState,
    tabu: TabuList,
    best_so_far: int,
    rng: np.random.Generator,
) -> Move | None:
    """Best admissible move at the tabu list's current iteration, or None.

    Admissible: feasible and either non-tabu or past the aspiration bar.
    The best may worsen the objective; ties break uniformly via ``rng``.
    """
    return _pick_move(_MoveEvaluator(state.instance), state, tabu, best_so_far, rng)


def random_fill(
    inst: Instance,
    rng: np.random.Generator,
    selection: np.ndarray | None = None,
) -> np.ndarray:
    """Add uniformly random items until the first one that does not fit.

    Starts from the given selection (empty by default) and returns the
    completed boolean vector. The first drawn misfit ends the fill, so the
    result is not necessarily maximal.
    """
    sel = (
        np.zeros(inst.m, dtype=bool) if selection is None else selection.copy()
    )
    weight = int(inst.weights[sel].sum())
    pool = np.flatnonzero(~sel).tolist()
    while pool:
        k = int(rng.integers(len(pool)))
        item = pool[k]
        if weight + inst.weights[item] > inst.capacity:
            break
        sel[item] = True
        weight += int(inst.weights[item])
        pool[k] = pool[-1]
        pool.pop()
    return sel


def descent_local_search(
    state: SearchState, rng: np.random.Generator
) -> SearchState:
    """Apply best improving swaps until none exists; mutates and returns state."""
    evaluator = _MoveEvaluator(state.instance)
    weights = state.instance.weights
    while True:
        sel_idx = np.flatnonzero(state.selection)
        unsel_idx = np.flatnonzero(~state.selection)
        if not sel_idx.size or not unsel_idx.size:
            return state
        gain, loss = evaluator.deltas(state)
        d = evaluator.swap_matrix(state, sel_idx, unsel_idx, gain, loss)
        headroom = state.instance.capacity - state.total_weight
        ok = (weights[unsel_idx][None, :] - weights[sel_idx][:, None]) <= headroom
        if not ok.any():
            return state
        best = d[ok].max()
        if best <= 0:
            return state
        ties = np.argwhere(ok & (d == best))
        a, b = ties[rng.integers(len(ties))]
        state.apply(Swap(int(sel_idx[a]), int(unsel_idx[b])))


def initial_solution(inst: Instance, rng: np.random.Generator) -> SearchState:
    """Random fill followed by swap descent."""
    state = SearchState.from_selection(inst, random_fill(inst, rng))
    return descent_local_search(state, rng)


def tabu_search(
    state: SearchState,
    prob: ProbabilityVector,
    params: TsParams,
    rng: np.random.Generator,
    observer=None,
    deadline: float | None = None,
):
    """Run one tabu phase from ``state``; returns (best state copy, prob).

    ``state`` is mutated as the walk proceeds. The probability vector is
    updated in place on every applied move: entering items are rewarded,
    leaving items punished. ``observer``, when given, is called with the
    state after every applied move. ``deadline`` (a perf_counter value)
    cuts the phase short once the wall clock passes it.
    """
    evaluator = _MoveEvaluator(state.instance)
    tabu = TabuList(state.instance.m, params.tenure)
    best = state.copy()
    non_improving = 0
    while non_improving < params.depth:
        if deadline is not None and time.perf_counter() >= deadline:
            break
        move = _pick_move(evaluator, state, tabu, best.objective, rng)
        if move is None:
            break
        state.apply(move)
        if observer is not None:
            observer(state)
        if isinstance(move, Flip):
            if state.selection[move.item]:
                prob.reward(move.item)
            else:
                prob.punish(move.item)
            tabu.mark(move.item)
        else:
            prob.punish(move.out_item)
            prob.reward(move.in_item)
            tabu.mark(move.out_item, move.in_item)
        if state.objective > best.objective:
            best = state.copy()
            non_improving = 0
        else:
            non_improving += 1
        tabu.advance()
    return best, prob
