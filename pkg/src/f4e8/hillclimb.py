"""Greedy re-alignment of a toral subalgebra into the standard Cartan.

The search conjugates a commuting toral basis by the 480 inner automorphisms
x_gamma(+-1) of e8, greedily maximizing the total number of zero coefficients
on the 240 root-space coordinates (maximum 240 per target).  When no
candidate improves, the climb backtracks to the most recent step that still
has an untried improving candidate; at fixed intervals a seeded random
generator is applied unconditionally as a kick.

Interpretation choices (the published description leaves them open):
backtracking depth is unbounded but budget-limited; the backtrack bookkeeping
is cleared at each kick, so a kick is never silently undone; if the climb is
stuck with an exhausted backtrack stack before the next scheduled kick, the
kick is applied early.  History records the net path from the initial state
(backtracking pops entries), so replaying it reproduces the final targets.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field as dataclass_field

import numpy as np

from . import gf
from .chevgroup import exp_root
from .liealg import ChevalleyAlgebra
from .rootsys import root_label


class NotToralError(ValueError):
    pass


class BudgetExhaustedError(RuntimeError):
    """Raised when the budget runs out; carries the best state reached."""

    def __init__(self, message, best):
        super().__init__(message)
        self.best = best


@dataclass
class ClimbState:
    """Targets conjugated so far, the net move history, and the objective."""

    targets: np.ndarray  # dim x k, one column per toral basis element
    history: list  # generator indices, in application order
    objective: int
    rng_seed: int
    trace: list = dataclass_field(default_factory=list)  # full event log


class InnerGenerators:
    """The 480 conjugating automorphisms x_gamma(+-1), gamma over all roots,
    as a batch of adjoint matrices.  Generator 2i is x_{gamma_i}(+1) and
    2i+1 is x_{gamma_i}(-1), with gamma_i in root-system order, so indices
    are stable and ties break deterministically."""

    def __init__(self, alg: ChevalleyAlgebra, fieldobj: gf.GF = None):
        self.alg = alg
        self.field = fieldobj or alg.field
        self.labels = []
        mats = []
        for root in alg.rs.roots:
            for t in (1, self.field.neg(1)):
                g = exp_root(alg, root, t, self.field)
                sign = "+1" if t == 1 else "-1"
                self.labels.append(f"x_{root_label(root)}({sign})")
                mats.append(g.matrix)
        self.count = len(mats)
        # one int64 batch so a whole step is a single matmul
        self.batch = np.stack(mats).astype(np.int64)

    def matrix(self, index):
        return self.batch[index].astype(np.int8)

    def apply(self, index, targets):
        return ((self.batch[index] @ targets.astype(np.int64)) % 3).astype(np.int8)

    def apply_all(self, targets):
        """All 480 images of the target columns: shape (count, dim, k)."""
        return (self.batch @ targets.astype(np.int64)) % 3


def objective(alg: ChevalleyAlgebra, targets) -> int:
    """Total count of zero root-space coordinates across the target columns."""
    t = np.asarray(targets)
    return int(np.count_nonzero(t[: alg.nroots] == 0))


def is_toral(alg: ChevalleyAlgebra, x, fieldobj: gf.GF = None) -> bool:
    """ad x semisimple with eigenvalues in GF(9): equivalent to the exact
    identity (ad x)^9 = ad x, since T^9 - T has every GF(9) scalar as a
    simple root."""
    fieldobj = fieldobj or alg.field
    A = alg.ad_matrix(np.asarray(x, dtype=np.int8))
    return fieldobj.mat_equal(fieldobj.mat_pow(A, 9), A)


def check_toral_basis(alg: ChevalleyAlgebra, targets, fieldobj: gf.GF = None):
    """Raise NotToralError unless all columns are toral and pairwise commute."""
    fieldobj = fieldobj or alg.field
    t = np.asarray(targets, dtype=np.int8)
    for j in range(t.shape[1]):
        if not is_toral(alg, t[:, j], fieldobj):
            raise NotToralError(f"column {j} is not toral")
    for i in range(t.shape[1]):
        ad = alg.ad_matrix(t[:, i])
        for j in range(i + 1, t.shape[1]):
            if np.any(fieldobj.mat_vec(ad, t[:, j])):
                raise NotToralError(f"columns {i} and {j} do not commute")
    return t


def scramble(gens: InnerGenerators, targets, steps: int, seed: int):
    """Apply a seeded random word of generators; returns (targets, word)."""
    rng = random.Random(seed)
    t = np.asarray(targets, dtype=np.int8)
    word = [rng.randrange(gens.count) for _ in range(steps)]
    for idx in word:
        t = gens.apply(idx, t)
    return t, word


def replay(gens: InnerGenerators, targets, history):
    """Re-apply a recorded history; used to verify determinism claims."""
    t = np.asarray(targets, dtype=np.int8)
    for idx in history:
        t = gens.apply(idx, t)
    return t


def _aligned_columns(alg: ChevalleyAlgebra, targets):
    return set(np.nonzero(~np.any(np.asarray(targets)[: alg.nroots] != 0, axis=0))[0])


def climb(
    gens: InnerGenerators,
    initial,
    kick_interval: int = 100,
    budget: int = 2000,
    seed: int = 0,
    keep_aligned: bool = False,
    check_input: bool = True,
) -> ClimbState:
    """Greedy zero-coefficient climb over the generator set.

    With keep_aligned, candidates that break a currently fully-aligned
    target column are filtered out (the second phase of the search).
    Terminates early once every root coordinate of every target is zero;
    raises BudgetExhaustedError (carrying the best state) otherwise.
    """
    alg = gens.alg
    targets = np.asarray(initial, dtype=np.int8)
    if targets.ndim == 1:
        targets = targets.reshape(-1, 1)
    if check_input:
        targets = check_toral_basis(alg, targets, gens.field)
    rng = random.Random(seed)
    goal = alg.nroots * targets.shape[1]
    state = ClimbState(targets, [], objective(alg, targets), seed)
    best = (state.objective, targets.copy(), list(state.history))
    stack = []  # (targets, history_len, ranked candidate indices, next ptr)

    def log(step, kind, move, obj):
        state.trace.append(
            {"step": step, "kind": kind, "move": gens.labels[move], "objective": obj}
        )

    step = 0
    while state.objective < goal and step < budget:
        step += 1
        if kick_interval and step % kick_interval == 0:
            move = rng.randrange(gens.count)
            state.targets = gens.apply(move, state.targets)
            state.history.append(move)
            state.objective = objective(alg, state.targets)
            stack.clear()
            log(step, "kick", move, state.objective)
            continue
        images = gens.apply_all(state.targets)
        zeros = np.count_nonzero(images[:, : alg.nroots, :] == 0, axis=(1, 2))
        order = np.argsort(-zeros, kind="stable")
        if keep_aligned:
            aligned = sorted(_aligned_columns(alg, state.targets))
            if aligned:
                ok = ~np.any(images[:, : alg.nroots, :][:, :, aligned] != 0, axis=(1, 2))
                order = order[ok[order]]
        improving = [int(i) for i in order if zeros[i] > state.objective]
        if improving:
            move = improving[0]
            stack.append((state.targets, len(state.history), improving, 1))
            state.targets = images[move].astype(np.int8)
            state.history.append(move)
            state.objective = int(zeros[move])
            log(step, "greedy", move, state.objective)
        elif stack:
            targets_b, hist_len, ranked, ptr = stack.pop()
            if ptr < len(ranked):
                move = ranked[ptr]
                stack.append((targets_b, hist_len, ranked, ptr + 1))
                del state.history[hist_len:]
                state.targets = gens.apply(move, targets_b)
                state.history.append(move)
                state.objective = objective(alg, state.targets)
                log(step, "backtrack", move, state.objective)
            else:
                step -= 1  # exhausted frame; popping is free
                continue
        else:
            # stuck with nothing to backtrack to: kick early
            move = rng.randrange(gens.count)
            state.targets = gens.apply(move, state.targets)
            state.history.append(move)
            state.objective = objective(alg, state.targets)
            log(step, "kick", move, state.objective)
        if state.objective > best[0]:
            best = (state.objective, state.targets.copy(), list(state.history))
    if state.objective < goal:
        state.targets, state.history = best[1], best[2]
        state.objective = best[0]
        raise BudgetExhaustedError(
            f"objective {state.objective}/{goal} after {step} steps", state
        )
    return state


def phase_two(gens: InnerGenerators, state: ClimbState, remaining, **config) -> ClimbState:
    """Continue on the joint objective over the first target and the
    remaining columns, keeping already-aligned columns aligned."""
    first = state.targets if state.targets.ndim == 2 else state.targets.reshape(-1, 1)
    rest = np.asarray(remaining, dtype=np.int8)
    if rest.ndim == 1:
        rest = rest.reshape(-1, 1)
    joint = np.hstack([first, rest])
    out = climb(gens, joint, keep_aligned=True, **config)
    out.history = state.history + out.history
    return out


def recover(
    gens: InnerGenerators,
    targets,
    kick_interval: int = 100,
    budget: int = 2000,
    seed: int = 0,
) -> ClimbState:
    """The full two-phase pipeline: climb on the first toral basis element
    alone, then on all of them jointly with alignment preserved.  The
    returned history maps the scrambled targets to the final ones."""
    targets = check_toral_basis(gens.alg, targets, gens.field)
    phase1 = climb(
        gens,
        targets[:, :1],
        kick_interval=kick_interval,
        budget=budget,
        seed=seed,
        check_input=False,
    )
    carried = replay(gens, targets[:, 1:], phase1.history)
    out = phase_two(
        gens,
        phase1,
        carried,
        kick_interval=kick_interval,
        budget=budget,
        seed=seed + 1,
        check_input=False,
    )
    out.trace = phase1.trace + out.trace
    out.rng_seed = seed
    return out
