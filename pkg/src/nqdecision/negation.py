"""Exponential negation of probability distributions and of amplitude vectors.

The negation ``p_i -> exp(-p_i) / sum_j exp(-p_j)`` raises Shannon entropy and,
when iterated, converges to the uniform distribution (including the binary
``(1, 0)`` case). The amplitude version keeps every negated amplitude real and
nonnegative, so its squared moduli reproduce the classical negation exactly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from numpy.typing import ArrayLike, NDArray

from nqdecision.errors import ValidationError
from nqdecision.qmath import NORM_TOL, QuantumState

PROB_TOL = 1e-10


def as_probability_vector(p: ArrayLike, *, tol: float = PROB_TOL) -> NDArray[np.float64]:
    """Validate ``p`` as a probability vector and return it as a float array."""
    arr = np.asarray(p, dtype=np.float64).reshape(-1)
    if arr.size == 0:
        raise ValidationError("probability vector is empty")
    if not np.all(np.isfinite(arr)):
        raise ValidationError("probabilities must be finite")
    if np.any(arr < 0) or np.any(arr > 1):
        raise ValidationError(f"probabilities must lie in [0, 1], got {arr.tolist()}")
    total = float(arr.sum())
    if abs(total - 1.0) > tol:
        raise ValidationError(f"probabilities sum to {total!r}, not 1")
    return arr


def _softmin(p: NDArray[np.float64]) -> NDArray[np.float64]:
    # Entries lie in [0, 1], so exp(-p) cannot underflow.
    w = np.exp(-p)
    return w / w.sum()


def negate_probabilities(p: ArrayLike) -> NDArray[np.float64]:
    probs = as_probability_vector(p)
    if probs.size < 2:
        raise ValidationError("negation needs at least two outcomes")
    return _softmin(probs)


def negate_amplitudes(psi: QuantumState) -> QuantumState:
    """Quantum negation: ``exp(-|psi_i|^2 / 2) / sqrt(sum_j exp(-|psi_j|^2))``.

    Phases of the input are discarded; the result is real and nonnegative.
    """
    if not psi.normalized:
        raise ValidationError(f"state is not normalized (norm {psi.norm()!r})")
    if len(psi) < 2:
        raise ValidationError("negation needs at least two basis states")
    bar = _negated_moduli(np.clip(psi.probabilities(), 0.0, 1.0))
    return QuantumState(bar.astype(np.complex128), psi.basis_labels)


def _negated_moduli(probs: NDArray[np.float64]) -> NDArray[np.float64]:
    half = np.exp(-0.5 * probs)
    return half / math.sqrt(float(np.dot(half, half)))


def iterate_negation(p: ArrayLike, k: int) -> list[NDArray[np.float64]]:
    """Return ``[N(p), N(N(p)), ...]``, ``k`` successive negations of ``p``."""
    if k < 0:
        raise ValidationError(f"iteration count must be nonnegative, got {k}")
    current = as_probability_vector(p)
    if current.size < 2:
        raise ValidationError("negation needs at least two outcomes")
    out = []
    for _ in range(k):
        current = _softmin(current)
        out.append(current)
    return out


def shannon_entropy(p: ArrayLike) -> float:
    """Shannon entropy in nats, with ``0 ln 0 = 0``."""
    probs = as_probability_vector(p)
    nz = probs[probs > 0]
    return float(max(0.0, -np.sum(nz * np.log(nz))))


@dataclass(frozen=True)
class NegationState:
    """Negated amplitudes of the six model basis states and their sum."""

    bar_psi: NDArray[np.float64]
    aggregate_B: float

    def __post_init__(self) -> None:
        bar = np.asarray(self.bar_psi, dtype=np.float64).reshape(-1)
        if bar.shape != (6,):
            raise ValidationError(f"expected six negated amplitudes, got {bar.shape}")
        if np.any(bar < 0):
            raise ValidationError("negated amplitudes must be nonnegative")
        if abs(float(np.sum(bar**2)) - 1.0) > NORM_TOL:
            raise ValidationError("negated amplitudes are not normalized")
        if abs(float(bar.sum()) - float(self.aggregate_B)) > 1e-12:
            raise ValidationError("aggregate_B must equal the sum of the negated amplitudes")
        bar.flags.writeable = False
        object.__setattr__(self, "bar_psi", bar)
        object.__setattr__(self, "aggregate_B", float(self.aggregate_B))

    @classmethod
    def from_state(cls, negated: QuantumState) -> NegationState:
        bar = np.abs(negated.amplitudes)
        return cls(bar, float(bar.sum()))
