"""Core objects of the two-player repeated prisoner's dilemma.

Joint states are indexed in the fixed order CC=0, CD=1, DC=2, DD=3, with
player 1's action written first.  Every vector and matrix in this package
uses that order.  Memory-one strategies are stored from their owner's point
of view (own previous action first); operations that take a ``player``
argument translate to the global frame with the CD<->DC swap where needed.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from enum import IntEnum
from typing import Mapping

import numpy as np

__all__ = [
    "JointState",
    "PayoffMatrix",
    "PayoffVector",
    "MemoryOneStrategy",
    "DEFAULT_PAYOFFS",
    "payoff_vector",
    "ones_vector",
    "transform_power",
    "transform_exp",
    "pointwise_product",
    "named_strategy",
    "parse_strategy",
    "cooperation_probs",
    "transition_matrix",
]


class JointState(IntEnum):
    """Joint action of the two players in one round, player 1 first."""

    CC = 0
    CD = 1
    DC = 2
    DD = 3

    @classmethod
    def from_actions(cls, a1: str, a2: str) -> "JointState":
        return cls(2 * (a1.upper() == "D") + (a2.upper() == "D"))

    @property
    def actions(self) -> tuple[str, str]:
        return ("CD"[self.value >> 1], "CD"[self.value & 1])

    @property
    def swapped(self) -> "JointState":
        """The same outcome viewed from the other player's side (CD<->DC)."""
        return JointState(((self.value & 1) << 1) | (self.value >> 1))


# Index permutation mapping a global state to the opponent's viewpoint.
SWAP = (0, 2, 1, 3)


@dataclass(frozen=True)
class PayoffMatrix:
    """The four one-shot payoffs (R, S, T, P).

    The strict constructor enforces the prisoner's-dilemma ordering
    T > R > P > S together with 2R > T + S.  Passing ``permissive=True``
    relaxes this to T != S, which is the minimum needed for the
    normalising denominators T^k - S^k and e^{hT} - e^{hS} to have a
    chance of existing (individual operations still check their own
    denominator, since e.g. T = -S kills T^k - S^k for even k).
    """

    R: float
    S: float
    T: float
    P: float
    permissive: bool = False

    def __post_init__(self) -> None:
        for name in ("R", "S", "T", "P"):
            value = float(getattr(self, name))
            if not np.isfinite(value):
                raise ValueError(f"payoff {name} must be finite, got {value!r}")
            object.__setattr__(self, name, value)
        if self.permissive:
            if self.T == self.S:
                raise ValueError("even permissive payoffs require T != S")
        else:
            if not (self.T > self.R > self.P > self.S):
                raise ValueError(
                    f"payoff ordering T > R > P > S violated by {self.as_tuple()}"
                )
            if not (2 * self.R > self.T + self.S):
                raise ValueError(
                    f"payoffs {self.as_tuple()} violate 2R > T + S"
                )

    def as_tuple(self) -> tuple[float, float, float, float]:
        return (self.R, self.S, self.T, self.P)

    def max_abs(self) -> float:
        return max(abs(v) for v in self.as_tuple())


#: Conventional Axelrod payoffs, used whenever no payoffs are given.
DEFAULT_PAYOFFS = PayoffMatrix(R=3.0, S=0.0, T=5.0, P=1.0)


@dataclass(frozen=True)
class PayoffVector:
    """A real 4-vector indexed by JointState, tagged with a display label."""

    values: tuple[float, float, float, float]
    label: str

    def __post_init__(self) -> None:
        values = tuple(float(v) for v in self.values)
        if len(values) != 4:
            raise ValueError("a payoff vector has exactly four components")
        object.__setattr__(self, "values", values)

    @property
    def array(self) -> np.ndarray:
        return np.array(self.values, dtype=float)

    def __getitem__(self, state: int) -> float:
        return self.values[state]


def payoff_vector(m: PayoffMatrix, player: int) -> PayoffVector:
    """Per-state payoffs of one player: (R,S,T,P) for 1, (R,T,S,P) for 2."""
    if player == 1:
        return PayoffVector((m.R, m.S, m.T, m.P), "s1")
    if player == 2:
        return PayoffVector((m.R, m.T, m.S, m.P), "s2")
    raise ValueError(f"player must be 1 or 2, got {player!r}")


def ones_vector() -> PayoffVector:
    """The all-ones vector (the constant transform of any payoff vector)."""
    return PayoffVector((1.0, 1.0, 1.0, 1.0), "1")


def transform_power(v: PayoffVector, k: int) -> PayoffVector:
    """Componentwise k-th power, k >= 1.

    k = 0 is rejected on purpose: use :func:`ones_vector` explicitly when
    the constant vector is meant.
    """
    if not isinstance(k, (int, np.integer)) or isinstance(k, bool):
        raise ValueError(f"exponent must be an integer, got {k!r}")
    if k < 1:
        raise ValueError("exponent must be >= 1; use ones_vector() for k = 0")
    if k == 1:
        return v
    label = v.label if len(v.label) <= 2 else f"({v.label})"
    return PayoffVector(tuple(x**k for x in v.values), f"{label}^{k}")


def transform_exp(v: PayoffVector, h: float) -> PayoffVector:
    """Componentwise e^{h * v[i]} for h != 0.

    h = 0 is rejected: the result would be the all-ones vector and every
    normalising denominator of the form e^{hT} - e^{hS} degenerates there.
    Components may overflow to inf for very large |h| * |v|; the callers
    that must not overflow guard their own range.
    """
    h = float(h)
    if h == 0.0:
        raise ValueError("h = 0 is excluded; use ones_vector() instead")
    values = tuple(float(np.exp(h * x)) for x in v.values)
    return PayoffVector(values, f"exp({h:g}*{v.label})")


def pointwise_product(a: PayoffVector, b: PayoffVector) -> PayoffVector:
    """Componentwise product, e.g. the joint-payoff vector s1*s2."""
    values = tuple(x * y for x, y in zip(a.values, b.values))
    return PayoffVector(values, f"{a.label}*{b.label}")


@dataclass(frozen=True)
class MemoryOneStrategy:
    """Cooperation probabilities conditioned on the previous joint state.

    ``p[s]`` is the probability of cooperating when the previous state,
    seen from this strategy's own side (own action first), was ``s``.
    Defection probabilities are never stored; they are ``1 - p[s]`` by
    construction, so normalisation cannot be violated.
    """

    p: tuple[float, float, float, float]

    def __post_init__(self) -> None:
        p = tuple(float(x) for x in self.p)
        if len(p) != 4:
            raise ValueError("a memory-one strategy has exactly four probabilities")
        for x in p:
            if not (0.0 <= x <= 1.0):
                raise ValueError(f"cooperation probability {x!r} outside [0, 1]")
        object.__setattr__(self, "p", p)

    @property
    def array(self) -> np.ndarray:
        return np.array(self.p, dtype=float)

    def __getitem__(self, state: int) -> float:
        return self.p[state]

    def with_noise(self, eps: float) -> "MemoryOneStrategy":
        """Trembling-hand mixture: p <- (1 - eps) * p + eps / 2."""
        eps = float(eps)
        if not (0.0 <= eps <= 0.5):
            raise ValueError(f"noise level {eps!r} outside [0, 1/2]")
        if eps == 0.0:
            return self
        return MemoryOneStrategy(tuple((1.0 - eps) * x + eps / 2.0 for x in self.p))


_NAMED = {
    "tft": (1.0, 0.0, 1.0, 0.0),
    "wsls": (1.0, 0.0, 0.0, 1.0),
    "all_c": (1.0, 1.0, 1.0, 1.0),
    "all_d": (0.0, 0.0, 0.0, 0.0),
}


def named_strategy(name: str) -> MemoryOneStrategy:
    """Look up a strategy by name.

    Known names: ``tft``, ``wsls``, ``all_c``, ``all_d``, ``random:q``
    (cooperate with constant probability q) and ``custom:a,b,c,d``.
    """
    key = name.strip().lower()
    if key in _NAMED:
        return MemoryOneStrategy(_NAMED[key])
    if key.startswith("random:"):
        q = float(key.split(":", 1)[1])
        return MemoryOneStrategy((q, q, q, q))
    if key.startswith("custom:"):
        parts = key.split(":", 1)[1].split(",")
        if len(parts) != 4:
            raise ValueError(f"custom strategy needs four probabilities: {name!r}")
        return MemoryOneStrategy(tuple(float(x) for x in parts))
    raise ValueError(f"unknown strategy name {name!r}")


def parse_strategy(spec: str | Mapping[str, float]) -> MemoryOneStrategy:
    """Parse a strategy literal.

    Accepts a mapping (or JSON object string) with keys p_cc, p_cd, p_dc,
    p_dd; a named string as in :func:`named_strategy`; or an inline
    comma-separated list "p_cc,p_cd,p_dc,p_dd".
    """
    if isinstance(spec, Mapping):
        try:
            return MemoryOneStrategy(
                (spec["p_cc"], spec["p_cd"], spec["p_dc"], spec["p_dd"])
            )
        except KeyError as exc:
            raise ValueError(f"strategy object missing key {exc}") from None
    text = spec.strip()
    if text.startswith("{"):
        try:
            obj = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ValueError(f"bad strategy JSON: {exc}") from None
        return parse_strategy(obj)
    if "," in text and ":" not in text:
        parts = text.split(",")
        if len(parts) != 4:
            raise ValueError(f"inline strategy needs four probabilities: {spec!r}")
        return MemoryOneStrategy(tuple(float(x) for x in parts))
    return named_strategy(text)


def cooperation_probs(s: MemoryOneStrategy, player: int) -> np.ndarray:
    """Cooperation probabilities indexed by the *global* previous state.

    Player 1's own frame is the global frame; player 2 sees each state
    with the two actions swapped, so their vector is permuted by CD<->DC.
    """
    if player == 1:
        return s.array
    if player == 2:
        return s.array[list(SWAP)]
    raise ValueError(f"player must be 1 or 2, got {player!r}")


def transition_matrix(s1: MemoryOneStrategy, s2: MemoryOneStrategy) -> np.ndarray:
    """One-step transition matrix of a strategy pair.

    Returns the 4x4 column-stochastic matrix M with ``M[to, frm]`` equal
    to the product of the two players' independent action probabilities,
    rows and columns both indexed by JointState.

    Parameters
    ----------
    s1, s2 : MemoryOneStrategy
        Strategies of players 1 and 2, each in its own frame.

    Returns
    -------
    ndarray, shape (4, 4), read-only
    """
    c1 = cooperation_probs(s1, 1)
    c2 = cooperation_probs(s2, 2)
    M = np.empty((4, 4))
    M[JointState.CC] = c1 * c2
    M[JointState.CD] = c1 * (1.0 - c2)
    M[JointState.DC] = (1.0 - c1) * c2
    M[JointState.DD] = (1.0 - c1) * (1.0 - c2)
    M.flags.writeable = False
    return M
