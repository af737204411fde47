"""Negation quantum (NQ) categorization-decision model.

Pipeline for one parameter vector:

1. negate the uniform six-state distribution and rebuild the initial state
   from the complements ``(B - bar_psi_k) / 5``;
2. project onto the good (G) or bad (B) block and renormalize;
3. evolve each 3-level conditional state under its reward Hamiltonian;
4. read off the action masses and turn them into P(A|G) through the quantum
   negation, with hesitation split evenly between attack and withdraw;
5. obtain P(A|B) from P(A|G) by exponential negation with offset ``alpha``;
6. for the decision-alone condition, add the two measured conditional
   amplitude vectors before squaring, which produces the interference term.

Basis order is ``AG, HG, WG, AB, HB, WB``; within a block the action order is
attack, hesitate, withdraw.
"""

from __future__ import annotations

import cmath
import math
import warnings
from dataclasses import dataclass, fields
from enum import Enum
from functools import lru_cache
from typing import Literal

import numpy as np
from numpy.typing import ArrayLike, NDArray
from scipy.special import expit

from nqdecision.errors import DegenerateInputError, ValidationError
from nqdecision.negation import NegationState, _negated_moduli, negate_amplitudes
from nqdecision.qmath import (
    NORM_TOL,
    QuantumState,
    apply_unitary,
    hermitian_expm,
    normalize,
)

BASIS_LABELS = ("AG", "HG", "WG", "AB", "HB", "WB")
ACTION_LABELS = ("A", "H", "W")
DEFAULT_TIME = math.pi / 2

OBSERVABLES = ("p_g", "p_a_given_g", "p_b", "p_a_given_b", "p_t", "p_a")

# Decision-alone measurement: attack in full, hesitation at amplitude 1/sqrt(2).
DECISION_MEASURE = np.diag([1.0, 1.0 / math.sqrt(2.0), 0.0])


class BasisState(str, Enum):
    AG = "AG"
    HG = "HG"
    WG = "WG"
    AB = "AB"
    HB = "HB"
    WB = "WB"


class ClampWarning(RuntimeWarning):
    """A model probability fell outside [0, 1] and was clamped."""


def clamp_probability(x: float) -> tuple[float, bool]:
    if x < 0.0:
        return 0.0, True
    if x > 1.0:
        return 1.0, True
    return x, False


def _clamp_warn(x: float, what: str) -> float:
    value, clamped = clamp_probability(x)
    if clamped:
        warnings.warn(f"{what} = {x!r} clamped to {value}", ClampWarning, stacklevel=3)
    return value


@dataclass(frozen=True)
class ModelConfig:
    """Switches between the printed formulas and their alternative readings.

    hamiltonian_norm
        ``"paper"`` scales the reward Hamiltonian by ``1/(1+h^2)``,
        ``"sqrt"`` by ``1/sqrt(1+h^2)``.
    d_weighting
        ``"paper"`` weights the two decision-alone paths by ``P_G, P_B``;
        ``"sqrt"`` by ``sqrt(P) * sqrt(||Psi*||)`` of each projected block.
    pab_formula
        ``"paper"`` uses exponent ``-(P(A|G) + alpha)`` for the second term,
        ``"sum"`` uses ``-(alpha - P(A|G))``.
    negation_domain
        ``"conditional"`` negates the 3-action amplitudes of the G path alone;
        ``"joint"`` negates the 6-state evolved vector
        ``(sqrt(P_G) U_G Psi_G, sqrt(P_B) U_B Psi_B)`` and reads the G block.
    """

    hamiltonian_norm: Literal["paper", "sqrt"] = "paper"
    d_weighting: Literal["paper", "sqrt"] = "paper"
    pab_formula: Literal["paper", "sum"] = "paper"
    negation_domain: Literal["conditional", "joint"] = "conditional"

    _CHOICES = {
        "hamiltonian_norm": ("paper", "sqrt"),
        "d_weighting": ("paper", "sqrt"),
        "pab_formula": ("paper", "sum"),
        "negation_domain": ("conditional", "joint"),
    }

    def __post_init__(self) -> None:
        for name, allowed in self._CHOICES.items():
            value = getattr(self, name)
            if value not in allowed:
                raise ValidationError(f"{name} must be one of {allowed}, got {value!r}")

    def as_dict(self) -> dict[str, str]:
        return {f.name: getattr(self, f.name) for f in fields(self)}


@dataclass(frozen=True)
class ModelParams:
    h_G: float
    h_B: float
    alpha: float
    p_G: float
    t: float = DEFAULT_TIME

    def __post_init__(self) -> None:
        for name in ("h_G", "h_B", "alpha", "p_G", "t"):
            value = float(getattr(self, name))
            if not math.isfinite(value):
                raise ValidationError(f"{name} must be finite, got {value!r}")
            object.__setattr__(self, name, value)
        if not 0.0 < self.p_G < 1.0:
            raise ValidationError(f"p_G must lie in (0, 1), got {self.p_G!r}")
        if self.t <= 0.0:
            raise ValidationError(f"t must be positive, got {self.t!r}")

    @property
    def p_B(self) -> float:
        return 1.0 - self.p_G

    def as_dict(self) -> dict[str, float]:
        return {"h_G": self.h_G, "h_B": self.h_B, "alpha": self.alpha, "p_G": self.p_G, "t": self.t}


@dataclass(frozen=True)
class ConditionalAmplitudes:
    """Normalized (A, H, W) amplitudes given a categorization.

    ``projected_norm`` keeps ``||Psi*||`` of the block before renormalizing;
    it is only consumed by the ``sqrt`` decision-alone weighting.
    """

    category: Literal["G", "B"]
    amps: NDArray[np.complex128]
    projected_norm: float = 1.0

    def __post_init__(self) -> None:
        if self.category not in ("G", "B"):
            raise ValidationError(f"category must be 'G' or 'B', got {self.category!r}")
        amps = np.array(self.amps, dtype=np.complex128).reshape(-1)
        if amps.shape != (3,):
            raise ValidationError(f"expected three action amplitudes, got {amps.shape}")
        if abs(float(np.vdot(amps, amps).real) - 1.0) > NORM_TOL:
            raise ValidationError("conditional amplitudes are not normalized")
        amps.flags.writeable = False
        object.__setattr__(self, "amps", amps)

    def as_state(self) -> QuantumState:
        return QuantumState(self.amps, ACTION_LABELS)


@dataclass(frozen=True)
class MassFunctions:
    m_A: float
    m_H: float
    m_W: float

    def __post_init__(self) -> None:
        values = (self.m_A, self.m_H, self.m_W)
        if any(not (0.0 <= v <= 1.0) for v in values):
            raise ValidationError(f"masses must lie in [0, 1], got {values}")
        if abs(sum(values) - 1.0) > NORM_TOL:
            raise ValidationError(f"masses sum to {sum(values)!r}, not 1")

    def as_array(self) -> NDArray[np.float64]:
        return np.array([self.m_A, self.m_H, self.m_W])


@dataclass(frozen=True)
class Prediction:
    """The six observables reported for each experiment.

    ``clamped`` names the observables whose raw model value left [0, 1].
    """

    p_G: float
    p_A_given_G: float
    p_B: float
    p_A_given_B: float
    p_t: float
    p_A: float
    clamped: tuple[str, ...] = ()

    def as_array(self) -> NDArray[np.float64]:
        return np.array(
            [self.p_G, self.p_A_given_G, self.p_B, self.p_A_given_B, self.p_t, self.p_A]
        )

    def as_dict(self) -> dict[str, float]:
        return dict(zip(OBSERVABLES, self.as_array().tolist()))

    @property
    def interference_gap(self) -> float:
        """P(A) - P_t; positive means decision-alone attacks exceed total probability."""
        return self.p_A - self.p_t


@lru_cache(maxsize=1)
def _initial_pair() -> tuple[NegationState, QuantumState]:
    uniform = QuantumState(np.full(6, 1.0 / math.sqrt(6.0)), BASIS_LABELS)
    negated = negate_amplitudes(uniform)
    neg_state = NegationState.from_state(negated)
    psi0 = (neg_state.aggregate_B - neg_state.bar_psi) / 5.0
    return neg_state, QuantumState(psi0, BASIS_LABELS)


def initial_negation_state() -> tuple[NegationState, QuantumState]:
    """Negated uniform distribution and the initial state built from it."""
    return _initial_pair()


def _check_pg(p_G: float) -> float:
    p_G = float(p_G)
    if not 0.0 < p_G < 1.0:
        raise ValidationError(f"p_G must lie in (0, 1), got {p_G!r}")
    return p_G


def project_categorization(
    psi0: QuantumState, category: Literal["G", "B"], p_G: float
) -> ConditionalAmplitudes:
    """Collapse the six-state model state onto one categorization block."""
    p_G = _check_pg(p_G)
    if len(psi0) != 6:
        raise ValidationError(f"expected a six-state model state, got {len(psi0)}")
    if category == "G":
        block, prob = psi0.amplitudes[:3], p_G
    elif category == "B":
        block, prob = psi0.amplitudes[3:], 1.0 - p_G
    else:
        raise ValidationError(f"category must be 'G' or 'B', got {category!r}")
    projected = QuantumState(block / math.sqrt(prob), ACTION_LABELS)
    unit = normalize(projected)
    return ConditionalAmplitudes(category, unit.amplitudes, projected.norm())


def _hamiltonian_array(h: float, norm: str) -> NDArray[np.float64]:
    if norm == "paper":
        scale = 1.0 / (1.0 + h * h)
    elif norm == "sqrt":
        scale = 1.0 / math.sqrt(1.0 + h * h)
    else:
        raise ValidationError(f"unknown hamiltonian norm {norm!r}")
    return scale * np.array([[h, 0.0, 1.0], [0.0, 1.0, 0.0], [1.0, 0.0, -h]])


def build_hamiltonian(h: float, norm: Literal["paper", "sqrt"] = "paper") -> NDArray[np.float64]:
    """Reward Hamiltonian ``c(h) [[h, 0, 1], [0, 1, 0], [1, 0, -h]]``.

    ``c(h)`` is ``1/(1+h^2)`` for ``norm="paper"`` and ``1/sqrt(1+h^2)`` for
    ``norm="sqrt"``.
    """
    h = float(h)
    if not math.isfinite(h):
        raise ValidationError(f"h must be finite, got {h!r}")
    return _hamiltonian_array(h, norm)


def _evolve_array(amps: NDArray[np.complex128], h: float, t: float, norm: str) -> NDArray[np.complex128]:
    # Closed form of exp(-iHt) @ amps. On (A, W) the Hamiltonian is c*K with
    # K = [[h, 1], [1, -h]] and K^2 = s^2 I, s = sqrt(1 + h^2), so the block is
    # cos(c s t) I - i sin(c s t) K / s; the H level only picks up exp(-i c t).
    s = math.sqrt(1.0 + h * h)
    if norm == "paper":
        c = 1.0 / (s * s)
    elif norm == "sqrt":
        c = 1.0 / s
    else:
        raise ValidationError(f"unknown hamiltonian norm {norm!r}")
    angle = c * s * t
    co, si = math.cos(angle), math.sin(angle)
    a, m, w = complex(amps[0]), complex(amps[1]), complex(amps[2])
    ka, kw = (h * a + w) / s, (a - h * w) / s
    return np.array([co * a - 1j * si * ka, cmath.exp(-1j * c * t) * m, co * w - 1j * si * kw])


def evolve_conditional(
    cond: ConditionalAmplitudes,
    h: float,
    t: float,
    norm: Literal["paper", "sqrt"] = "paper",
) -> ConditionalAmplitudes:
    U = hermitian_expm(build_hamiltonian(h, norm), t)
    evolved = apply_unitary(U, cond.as_state())
    return ConditionalAmplitudes(cond.category, evolved.amplitudes, cond.projected_norm)


def mass_functions(evolved: ConditionalAmplitudes) -> MassFunctions:
    m = np.clip(np.abs(evolved.amps) ** 2, 0.0, 1.0)
    return MassFunctions(float(m[0]), float(m[1]), float(m[2]))


def _split_hesitation(bar: NDArray[np.float64]) -> float:
    # bar in action order (A, H, W)
    return float((bar[2] + 0.5 * bar[1]) ** 2)


def _attack_given_G_raw(masses: NDArray[np.float64]) -> float:
    return _split_hesitation(_negated_moduli(masses))


def _attack_given_G_joint_raw(
    masses_G: NDArray[np.float64], masses_B: NDArray[np.float64], p_G: float
) -> float:
    joint = np.concatenate([p_G * masses_G, (1.0 - p_G) * masses_B])
    return _split_hesitation(_negated_moduli(joint / joint.sum())[:3])


def attack_prob_given_G(masses: MassFunctions) -> float:
    """P(A|G) from the conditional masses via quantum negation.

    Negates ``(sqrt(m_A), sqrt(m_H), sqrt(m_W))`` and returns
    ``(bar_W + bar_H / 2)^2``, clamped to [0, 1] with a :class:`ClampWarning`.
    """
    amps = np.sqrt(masses.as_array())
    bar = np.abs(negate_amplitudes(QuantumState(amps, ACTION_LABELS)).amplitudes)
    return _clamp_warn(_split_hesitation(bar), "P(A|G)")


def attack_prob_given_G_joint(masses_G: MassFunctions, masses_B: MassFunctions, p_G: float) -> float:
    """P(A|G) when the negation runs over all six evolved basis states."""
    p_G = _check_pg(p_G)
    joint = np.concatenate([p_G * masses_G.as_array(), (1.0 - p_G) * masses_B.as_array()])
    state = normalize(QuantumState(np.sqrt(joint), BASIS_LABELS))
    bar = np.abs(negate_amplitudes(state).amplitudes)
    return _clamp_warn(_split_hesitation(bar[:3]), "P(A|G)")


def attack_prob_given_B(
    p_A_given_G: float, alpha: float, formula: Literal["paper", "sum"] = "paper"
) -> float:
    """P(A|B) as the two-term exponential negation of P(A|G).

    ``e^{-x} / (e^{-x} + e^{-y})`` with ``x = P(A|G)`` and ``y = x + alpha``
    (``"paper"``) or ``y = alpha - x`` (``"sum"``). The first reduces to the
    logistic ``1 / (1 + e^{-alpha})`` independent of ``x``.
    """
    x = float(p_A_given_G)
    if not 0.0 <= x <= 1.0:
        raise ValidationError(f"P(A|G) must lie in [0, 1], got {x!r}")
    if formula == "paper":
        y = x + alpha
    elif formula == "sum":
        y = alpha - x
    else:
        raise ValidationError(f"unknown P(A|B) formula {formula!r}")
    # e^{-x} / (e^{-x} + e^{-y}) = 1 / (1 + e^{x - y})
    return float(expit(y - x))


@lru_cache(maxsize=1)
def _initial_blocks() -> tuple[NDArray[np.complex128], NDArray[np.complex128], float, float]:
    # Unit G/B action vectors and the raw block norms of the initial state.
    # Rescaling by 1/sqrt(P) does not change the direction, so only the norms
    # depend on p_G.
    _, psi0 = initial_negation_state()
    blocks = psi0.amplitudes[:3], psi0.amplitudes[3:]
    norms = [float(np.linalg.norm(b)) for b in blocks]
    if min(norms) == 0.0:
        raise DegenerateInputError("initial state has an empty categorization block")
    return blocks[0] / norms[0], blocks[1] / norms[1], norms[0], norms[1]


def _evolved(params: ModelParams, config: ModelConfig) -> tuple[NDArray[np.complex128], NDArray[np.complex128]]:
    unit_G, unit_B, _, _ = _initial_blocks()
    norm = config.hamiltonian_norm
    return (
        _evolve_array(unit_G, params.h_G, params.t, norm),
        _evolve_array(unit_B, params.h_B, params.t, norm),
    )


def _path_weights(p_G: float, config: ModelConfig) -> tuple[float, float]:
    p_B = 1.0 - p_G
    if config.d_weighting == "paper":
        return p_G, p_B
    _, _, block_G, block_B = _initial_blocks()
    # ||Psi*|| = ||block|| / sqrt(P)
    return (
        math.sqrt(p_G) * math.sqrt(block_G / math.sqrt(p_G)),
        math.sqrt(p_B) * math.sqrt(block_B / math.sqrt(p_B)),
    )


def _measured_paths(
    params: ModelParams, config: ModelConfig, v_G: NDArray[np.complex128], v_B: NDArray[np.complex128]
) -> tuple[NDArray[np.complex128], NDArray[np.complex128]]:
    w_G, w_B = _path_weights(params.p_G, config)
    return w_G * (DECISION_MEASURE @ v_G), w_B * (DECISION_MEASURE @ v_B)


def _decision_alone_raw(
    params: ModelParams, config: ModelConfig, v_G: NDArray[np.complex128], v_B: NDArray[np.complex128]
) -> float:
    a_G, a_B = _measured_paths(params, config, v_G, v_B)
    total = a_G + a_B
    return float(np.vdot(total, total).real)


def predict_d(params: ModelParams, config: ModelConfig = ModelConfig()) -> float:
    """Decision-alone attack probability P(A), clamped with a warning.

    The two measured conditional amplitude vectors are added before taking
    the squared norm, so the G/B cross term survives.
    """
    v_G, v_B = _evolved(params, config)
    return _clamp_warn(_decision_alone_raw(params, config, v_G, v_B), "P(A)")


def interference_term(params: ModelParams, config: ModelConfig = ModelConfig()) -> float:
    """Cross term ``||a_G + a_B||^2 - ||a_G||^2 - ||a_B||^2`` of the two paths."""
    a_G, a_B = _measured_paths(params, config, *_evolved(params, config))
    total = a_G + a_B
    return float(np.vdot(total, total).real - np.vdot(a_G, a_G).real - np.vdot(a_B, a_B).real)


def _observables(
    h_G: float, h_B: float, alpha: float, p_G: float, t: float, config: ModelConfig
) -> tuple[list[float], tuple[str, ...]]:
    # Unvalidated scalar path shared by predict_cd and the fit loss.
    unit_G, unit_B, _, _ = _initial_blocks()
    v_G = _evolve_array(unit_G, h_G, t, config.hamiltonian_norm)
    v_B = _evolve_array(unit_B, h_B, t, config.hamiltonian_norm)
    p_B = 1.0 - p_G
    masses_G = np.minimum(np.abs(v_G) ** 2, 1.0)
    if config.negation_domain == "conditional":
        raw_pag = _attack_given_G_raw(masses_G)
    else:
        raw_pag = _attack_given_G_joint_raw(masses_G, np.minimum(np.abs(v_B) ** 2, 1.0), p_G)
    p_ag, clamped_ag = clamp_probability(raw_pag)
    p_ab = attack_prob_given_B(p_ag, alpha, config.pab_formula)
    p_t = p_G * p_ag + p_B * p_ab
    w_G, w_B = _path_weights(p_G, config)
    total = DECISION_MEASURE @ (w_G * v_G + w_B * v_B)
    p_a, clamped_a = clamp_probability(float(np.vdot(total, total).real))
    clamped = tuple(
        name for name, flag in (("p_a_given_g", clamped_ag), ("p_a", clamped_a)) if flag
    )
    return [p_G, p_ag, p_B, p_ab, p_t, p_a], clamped


def predict_cd(params: ModelParams, config: ModelConfig = ModelConfig()) -> Prediction:
    """Categorization-decision observables; ``p_A`` comes from the decision-alone path."""
    values, clamped = _observables(params.h_G, params.h_B, params.alpha, params.p_G, params.t, config)
    return Prediction(*values, clamped)


def predict(params: ModelParams, config: ModelConfig = ModelConfig()) -> Prediction:
    """All six observables for one parameter vector."""
    return predict_cd(params, config)


def prediction_from_array(values: ArrayLike) -> Prediction:
    arr = np.asarray(values, dtype=np.float64).reshape(-1)
    if arr.shape != (6,):
        raise ValidationError(f"expected six observables, got {arr.shape}")
    return Prediction(*arr.tolist())
