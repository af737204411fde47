"""Least-squares parameter estimation and the mean-bias correction.

The four free parameters are searched in an unconstrained space:
``(h_G, h_B, alpha, logit(p_G))``. Every restart is a Nelder-Mead run from a
point of a fixed grid; the seed only decides which grid points are used and in
what order, so results are reproducible bit for bit.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from typing import Literal, Sequence

import numpy as np
from numpy.typing import ArrayLike, NDArray
from scipy.optimize import minimize
from scipy.special import logit

from nqdecision.errors import ValidationError
from nqdecision.model import (
    DEFAULT_TIME,
    OBSERVABLES,
    ModelConfig,
    ModelParams,
    Prediction,
    _observables,
    clamp_probability,
    predict,
)

PAIR_TOL = 0.011

H_GRID = (-2.0, -1.0, 0.0, 1.0, 2.0)
ALPHA_GRID = (-1.0, 0.0, 1.0)
PG_GRID = (0.2, 0.5, 0.8)


@dataclass(frozen=True)
class ExperimentRecord:
    """One published row: face type plus the six observed probabilities.

    ``observed`` is ordered as P(G), P(A|G), P(B), P(A|B), P_t, P(A).
    """

    name: str
    face_type: Literal["narrow", "wide"]
    observed: tuple[float, ...]
    metadata: dict = field(default_factory=dict, compare=False)

    def __post_init__(self) -> None:
        if self.face_type not in ("narrow", "wide"):
            raise ValidationError(f"face_type must be 'narrow' or 'wide', got {self.face_type!r}")
        obs = tuple(float(v) for v in self.observed)
        if len(obs) != 6:
            raise ValidationError(f"expected six observed values, got {len(obs)}")
        for key, value in zip(OBSERVABLES, obs):
            if not (math.isfinite(value) and 0.0 <= value <= 1.0):
                raise ValidationError(f"{key} must lie in [0, 1], got {value!r}")
        if abs(obs[0] + obs[2] - 1.0) > PAIR_TOL:
            raise ValidationError(f"p_g + p_b = {obs[0] + obs[2]!r} is not 1 (tolerance {PAIR_TOL})")
        object.__setattr__(self, "observed", obs)

    @property
    def observed_array(self) -> NDArray[np.float64]:
        return np.array(self.observed)

    def as_dict(self) -> dict[str, object]:
        out: dict[str, object] = {"name": self.name, "face_type": self.face_type}
        out.update(zip(OBSERVABLES, self.observed))
        return out


@dataclass(frozen=True)
class FitConfig:
    seed: int = 0
    restarts: int = 32
    max_iter: int = 2000
    tol: float = 1e-9
    t: float = DEFAULT_TIME
    model: ModelConfig = ModelConfig()

    def __post_init__(self) -> None:
        if self.seed < 0:
            raise ValidationError(f"seed must be nonnegative, got {self.seed}")
        if self.restarts < 1:
            raise ValidationError(f"need at least one restart, got {self.restarts}")
        if self.max_iter < 1:
            raise ValidationError(f"iteration budget must be positive, got {self.max_iter}")
        if not self.tol > 0:
            raise ValidationError(f"tolerance must be positive, got {self.tol}")


@dataclass(frozen=True)
class FitResult:
    params: ModelParams
    objective_value: float
    prediction: Prediction
    restarts_used: int
    converged: bool


@dataclass(frozen=True)
class BiasCorrection:
    initial_error: NDArray[np.float64]
    mean_error: float
    corrected: NDArray[np.float64]
    clamped: bool = False


def objective(
    params: ModelParams, record: ExperimentRecord, config: ModelConfig = ModelConfig()
) -> float:
    """Euclidean distance between the predicted and observed six-vectors."""
    residual = predict(params, config).as_array() - record.observed_array
    return float(np.sqrt(np.sum(residual**2)))


def _decode(x: Sequence[float], t: float) -> ModelParams:
    h_G, h_B, alpha, z = (float(v) for v in x)
    return ModelParams(h_G, h_B, alpha, _inv_logit(z), t)


def _inv_logit(z: float) -> float:
    # keep p_G strictly inside (0, 1) when the simplex drifts far out in logit space
    z = min(max(z, -34.0), 34.0)
    return 1.0 / (1.0 + math.exp(-z))


def start_points(record: ExperimentRecord, restarts: int, seed: int) -> list[NDArray[np.float64]]:
    """Deterministic seeded selection of grid starts in the unconstrained space."""
    obs_pg = min(max(record.observed[0], 0.01), 0.99)
    pg_values = PG_GRID + ((obs_pg,) if obs_pg not in PG_GRID else ())
    grid = [
        np.array([h_G, h_B, alpha, float(logit(p_G))])
        for h_G, h_B, alpha, p_G in itertools.product(H_GRID, H_GRID, ALPHA_GRID, pg_values)
    ]
    order = np.random.default_rng(seed).permutation(len(grid))
    n = min(restarts, len(grid))
    return [grid[i] for i in order[:n]]


def fit(record: ExperimentRecord, config: FitConfig = FitConfig()) -> FitResult:
    """Minimize :func:`objective` with multi-start Nelder-Mead.

    The best restart wins; ties go to the lowest start index. ``converged`` is
    False only when every restart ran out of its iteration budget.
    """
    target = record.observed
    model_config = config.model

    def loss(x: NDArray[np.float64]) -> float:
        h_G, h_B, alpha, z = (float(v) for v in x)
        values, _ = _observables(h_G, h_B, alpha, _inv_logit(z), config.t, model_config)
        return math.dist(values, target)

    best_x: NDArray[np.float64] | None = None
    best_val = math.inf
    any_converged = False
    starts = start_points(record, config.restarts, config.seed)
    for x0 in starts:
        res = minimize(
            loss,
            x0,
            method="Nelder-Mead",
            options={"maxiter": config.max_iter, "xatol": config.tol, "fatol": config.tol},
        )
        any_converged = any_converged or bool(res.success)
        if res.fun < best_val:
            best_val = float(res.fun)
            best_x = np.asarray(res.x)
    assert best_x is not None
    params = _decode(best_x, config.t)
    prediction = predict(params, model_config)
    return FitResult(
        params=params,
        objective_value=objective(params, record, model_config),
        prediction=prediction,
        restarts_used=len(starts),
        converged=any_converged,
    )


def bias_correct(raw: ArrayLike, record: ExperimentRecord) -> BiasCorrection:
    """Subtract the mean signed error over the dataset's six quantities."""
    r0 = np.asarray(raw, dtype=np.float64).reshape(-1)
    if r0.shape != (6,):
        raise ValidationError(f"expected six model outputs, got {r0.shape}")
    errors = r0 - record.observed_array
    mean_error = float(np.mean(errors))
    corrected = r0 - mean_error
    flags = [clamp_probability(float(v)) for v in corrected]
    clamped_any = any(flag for _, flag in flags)
    corrected = np.array([v for v, _ in flags])
    return BiasCorrection(errors, mean_error, corrected, clamped_any)
