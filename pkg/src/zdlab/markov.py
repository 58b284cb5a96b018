"""Long-run behaviour of the four-state chain induced by a strategy pair.

Deterministic strategies such as Tit-for-Tat create reducible and periodic
chains, so "the stationary distribution" is not always a single well-defined
object.  The canonical long-run quantity used throughout this package is the
Cesaro limit of the time-averaged state distribution from a declared initial
distribution (uniform unless stated otherwise): it exists for every finite
chain, it is a fixed point of the transition matrix, and it is the average
against which Press-Dyson vectors vanish.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import gcd, lcm

import numpy as np

from .game import MemoryOneStrategy, transition_matrix

__all__ = [
    "ChainStructure",
    "LimitResult",
    "as_distribution",
    "uniform_distribution",
    "point_mass",
    "evolve",
    "classify",
    "stationary_exact",
    "cesaro_limit",
    "perturbed_stationary",
]

N_STATES = 4

#: Default convergence tolerance for iterative limits.
DEFAULT_TOL = 1e-12
#: Default cap on the number of underlying chain steps.
DEFAULT_MAX_STEPS = 10**6
#: Relative singular-value threshold for rank decisions.
RANK_TOL = 1e-9


def as_distribution(pi, tol: float = 1e-12) -> np.ndarray:
    """Validate and return a probability vector over the four states."""
    pi = np.asarray(pi, dtype=float).reshape(-1)
    if pi.shape != (N_STATES,):
        raise ValueError(f"a state distribution has {N_STATES} entries, got {pi.shape}")
    if np.any(pi < -tol):
        raise ValueError(f"negative probability in {pi}")
    if abs(pi.sum() - 1.0) > tol:
        raise ValueError(f"probabilities sum to {pi.sum()!r}, not 1")
    return np.clip(pi, 0.0, None)


def uniform_distribution() -> np.ndarray:
    return np.full(N_STATES, 1.0 / N_STATES)


def point_mass(state: int) -> np.ndarray:
    pi = np.zeros(N_STATES)
    pi[int(state)] = 1.0
    return pi


def evolve(M, pi) -> np.ndarray:
    """One step of the chain: returns M @ pi."""
    return np.asarray(M, dtype=float) @ as_distribution(pi)


@dataclass(frozen=True)
class ChainStructure:
    """Communicating-class decomposition of a 4-state chain.

    ``classes`` partitions {0, 1, 2, 3}; ``recurrent[i]`` marks whether
    ``classes[i]`` is closed; ``periods[i]`` is the period of a recurrent
    class and None for a transient one.  ``ergodic`` is True when there is
    exactly one recurrent class and it is aperiodic (every state then leads
    to it, so the long-run distribution is unique and start-independent).
    """

    classes: tuple[tuple[int, ...], ...]
    recurrent: tuple[bool, ...]
    periods: tuple[int | None, ...]
    ergodic: bool

    @property
    def recurrent_classes(self) -> tuple[tuple[int, ...], ...]:
        return tuple(c for c, r in zip(self.classes, self.recurrent) if r)

    @property
    def transient_states(self) -> tuple[int, ...]:
        out: list[int] = []
        for c, r in zip(self.classes, self.recurrent):
            if not r:
                out.extend(c)
        return tuple(sorted(out))

    @property
    def cycle_window(self) -> int:
        """Least common multiple of the recurrent periods (>= 1).

        Averaging the chain over windows of this length removes every
        persistent oscillation, which is what the Cesaro solver exploits.
        """
        periods = [p for p in self.periods if p is not None]
        return lcm(*periods) if periods else 1


def classify(M) -> ChainStructure:
    """Exact structural classification of the chain's support graph.

    Entries > 0 are treated as edges.  Communicating classes are computed
    by reachability closure, recurrence by closedness, and the period of a
    recurrent class as the gcd of its short closed-walk lengths (cycles of
    length <= class size suffice on four states).
    """
    M = np.asarray(M, dtype=float)
    edge = (M.T > 0.0).astype(np.int8)  # edge[i, j]: one step i -> j
    reach = (edge | np.eye(N_STATES, dtype=np.int8)).astype(np.int8)
    for _ in range(2):  # path lengths double per squaring; 4 covers n=4
        reach = ((reach @ reach) > 0).astype(np.int8)
    mutual = (reach & reach.T) > 0

    seen = [False] * N_STATES
    classes: list[tuple[int, ...]] = []
    for i in range(N_STATES):
        if not seen[i]:
            members = tuple(j for j in range(N_STATES) if mutual[i, j])
            for j in members:
                seen[j] = True
            classes.append(members)

    recurrent: list[bool] = []
    periods: list[int | None] = []
    for members in classes:
        closed = all(
            all(j in members for j in np.nonzero(reach[i])[0]) for i in members
        )
        recurrent.append(closed)
        if not closed:
            periods.append(None)
            continue
        sub = edge[np.ix_(members, members)]
        walk = np.eye(len(members), dtype=np.int8)
        period = 0
        for t in range(1, len(members) + 1):
            walk = ((walk @ sub) > 0).astype(np.int8)
            if walk.diagonal().any():
                period = gcd(period, t)
        periods.append(period)

    n_recurrent = sum(recurrent)
    ergodic = n_recurrent == 1 and all(p in (None, 1) for p in periods)
    return ChainStructure(tuple(classes), tuple(recurrent), tuple(periods), ergodic)


@dataclass(frozen=True, eq=False)
class LimitResult:
    """A long-run distribution together with how it was obtained.

    ``residual`` is the fixed-point defect max|M pi - pi|; ``unique`` says
    whether the stationary distribution of the chain is unique (equivalently
    whether there is a single recurrent class), and ``converged`` is False
    only when an iterative method ran out of steps.
    """

    distribution: np.ndarray
    method: str
    unique: bool
    iterations: int
    residual: float
    converged: bool = True


def _freeze(pi: np.ndarray) -> np.ndarray:
    pi = np.clip(pi, 0.0, None)
    pi = pi / pi.sum()
    pi.flags.writeable = False
    return pi


def _solve_normalised(M: np.ndarray, states: tuple[int, ...]) -> np.ndarray:
    """Stationary distribution supported on a closed subset of states.

    Solves (M - I) pi = 0 augmented with sum(pi) = 1, restricted to the
    given states, as one least-squares system (the pivoting of the solver
    decides how the redundant row is absorbed).
    """
    sub = M[np.ix_(states, states)]
    n = len(states)
    A = np.vstack([sub - np.eye(n), np.ones((1, n))])
    b = np.zeros(n + 1)
    b[-1] = 1.0
    x, *_ = np.linalg.lstsq(A, b, rcond=None)
    pi = np.zeros(N_STATES)
    pi[list(states)] = x
    return pi


def stationary_exact(M, rank_tol: float = RANK_TOL) -> LimitResult:
    """Solve for a stationary distribution by direct linear algebra.

    The null space of M - I is measured by SVD at ``rank_tol`` relative to
    the largest singular value.  When it is one-dimensional the stationary
    distribution is unique and returned.  When it is larger (reducible
    chains carrying several invariant measures), the result is flagged
    ``unique=False`` and the distribution returned is the stationary
    distribution of the first recurrent class, which is one valid basis
    solution; callers wanting start-dependent limits should use
    :func:`cesaro_limit`.

    Returns
    -------
    LimitResult with ``method="exact-solve"``.
    """
    M = np.asarray(M, dtype=float)
    A = M - np.eye(N_STATES)
    singular_values = np.linalg.svd(A, compute_uv=False)
    largest = singular_values[0]
    if largest == 0.0:
        nullity = N_STATES
    else:
        nullity = int(np.sum(singular_values <= rank_tol * largest))
    if nullity <= 1:
        pi = _freeze(_solve_normalised(M, (0, 1, 2, 3)))
        unique = True
    else:
        structure = classify(M)
        first = structure.recurrent_classes[0]
        pi = _freeze(_solve_normalised(M, first))
        unique = False
    residual = float(np.max(np.abs(M @ pi - pi)))
    return LimitResult(pi, "exact-solve", unique, 0, residual)


def cesaro_limit(
    M,
    pi0=None,
    tol: float = DEFAULT_TOL,
    max_steps: int = DEFAULT_MAX_STEPS,
) -> LimitResult:
    """Cesaro (time-average) limit of the chain from a starting distribution.

    Computes lim_n (1/n) sum_{t<n} pi_t by running averages over windows
    whose length is the least common multiple of the recurrent periods:
    such a window average is free of persistent oscillation and settles
    geometrically.  The window position is advanced by repeated squaring of
    the window-step matrix, and the averages at positions n and 2n are
    compared in sup norm; convergence additionally requires the fixed-point
    residual max|M pi - pi| <= tol.

    Parameters
    ----------
    M : array_like, shape (4, 4)
        Column-stochastic transition matrix.
    pi0 : array_like or None
        Initial distribution; uniform when None.
    tol : float
        Sup-norm settling tolerance, also the residual bound.
    max_steps : int
        Cap on the number of underlying chain steps represented.

    Returns
    -------
    LimitResult with ``method="cesaro"`` (or ``"power-iteration"`` when the
    window degenerates to a single iterate), ``converged=False`` with the
    best estimate if the step cap is hit first.
    """
    if tol <= 0:
        raise ValueError(f"tolerance must be positive, got {tol!r}")
    M = np.asarray(M, dtype=float)
    pi = uniform_distribution() if pi0 is None else as_distribution(pi0)

    structure = classify(M)
    window = structure.cycle_window

    avg = np.zeros(N_STATES)
    cur = pi
    for _ in range(window):
        avg += cur
        cur = M @ cur
    avg /= window

    step = np.linalg.matrix_power(M, window)  # advances a window by `window` steps
    offset = 0
    stride = window
    converged = False
    while offset + stride + window <= max_steps:
        nxt = step @ avg
        offset += stride
        diff = float(np.max(np.abs(nxt - avg)))
        avg = nxt
        if diff < tol:
            converged = True
            break
        step = step @ step
        # keep the powered matrix exactly stochastic: squaring alone lets
        # roundoff compound once per doubling, which puts a growing floor
        # under the n-vs-2n comparison
        np.clip(step, 0.0, None, out=step)
        step /= step.sum(axis=0, keepdims=True)
        stride *= 2

    pi_limit = _freeze(avg)
    residual = float(np.max(np.abs(M @ pi_limit - pi_limit)))
    converged = converged and residual <= tol
    return LimitResult(
        distribution=pi_limit,
        method="power-iteration" if window == 1 else "cesaro",
        unique=len(structure.recurrent_classes) == 1,
        iterations=offset + window,
        residual=residual,
        converged=converged,
    )


def perturbed_stationary(
    s1: MemoryOneStrategy,
    s2: MemoryOneStrategy,
    eps: float,
    rank_tol: float = RANK_TOL,
) -> LimitResult:
    """Stationary distribution after trembling-hand regularisation.

    Both strategies are mixed with uniform noise (p <- (1-eps) p + eps/2)
    and the resulting chain, strictly positive for eps > 0, is solved
    exactly.  This is an analysis tool: for reducible chains its eps -> 0
    limit need not coincide with the Cesaro limit from a particular start,
    so no such identity is asserted anywhere.
    """
    M = transition_matrix(s1.with_noise(eps), s2.with_noise(eps))
    return stationary_exact(M, rank_tol=rank_tol)
