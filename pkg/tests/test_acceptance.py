"""Acceptance criteria, each checked at its stated tolerance.

Outcomes are summarized per criterion at the end of the run (see conftest).
"""

import math
import time

import numpy as np
import pytest

from nqdecision.cli import main
from nqdecision.datasets import narrow_records
from nqdecision.fit import ExperimentRecord, FitConfig, bias_correct, fit
from nqdecision.model import ModelParams, attack_prob_given_B, predict
from nqdecision.negation import iterate_negation, negate_amplitudes, negate_probabilities, shannon_entropy
from nqdecision.qmath import QuantumState, expm_taylor_oracle, hermitian_expm, is_unitary
from nqdecision.report import run_fits

# published model fits, (P(G), P(A|G), P(B), P(A|B), P_t, P(A))
RESULT_ROWS = {
    "busemeyer2009-narrow": (0.17, 0.41, 0.83, 0.63, 0.59, 0.68),
    "wang-exp1-narrow": (0.21, 0.41, 0.79, 0.60, 0.56, 0.64),
    "wang-exp2-narrow": (0.24, 0.37, 0.76, 0.61, 0.55, 0.64),
    "wang-exp3a-narrow": (0.24, 0.33, 0.76, 0.65, 0.57, 0.66),
    "wang-exp3b-narrow": (0.24, 0.33, 0.76, 0.65, 0.57, 0.66),
    "average-narrow": (0.22, 0.36, 0.78, 0.63, 0.57, 0.66),
}
NAMES = list(RESULT_ROWS)


@pytest.fixture(scope="module")
def fitted():
    start = time.perf_counter()
    results = run_fits(narrow_records(), FitConfig())
    elapsed = time.perf_counter() - start
    return {r.record.name: r for r in results}, elapsed


def _row(values):
    return "(" + ", ".join(f"{v:.3f}" for v in values) + ")"


@pytest.mark.parametrize("name", NAMES)
def test_criterion_1_result_row(fitted, name):
    results, _ = fitted
    got = results[name].fit.prediction.as_array()
    want = np.array(RESULT_ROWS[name])
    diff = np.abs(got - want)
    assert diff.max() <= 0.03, f"{name}: fitted {_row(got)} vs published {_row(want)}, max diff {diff.max():.3f}"


def test_criterion_1_runtime(fitted):
    _, elapsed = fitted
    assert elapsed < 30.0, f"six default fits took {elapsed:.1f} s"


@pytest.mark.parametrize("name", NAMES)
def test_criterion_2_objective(fitted, name):
    value = fitted[0][name].fit.objective_value
    assert value <= 0.05, f"{name}: objective {value:.4f}"


def test_criterion_3_average_mae(fitted):
    res = fitted[0]["average-narrow"]
    mae = float(np.mean(np.abs(res.correction.corrected - res.record.observed_array)))
    assert mae <= 0.02, f"modified-result MAE {mae:.4f}"


@pytest.mark.parametrize("name", NAMES)
def test_criterion_3_invariants(fitted, name):
    res = fitted[0][name]
    first = res.correction
    assert not first.clamped
    assert abs(float(np.mean(first.corrected - res.record.observed_array))) <= 1e-15
    second = bias_correct(first.corrected, res.record)
    np.testing.assert_allclose(second.corrected, first.corrected, rtol=0, atol=1e-15)


@pytest.mark.parametrize("name", NAMES)
def test_criterion_4_interference_sign(fitted, name):
    gap = fitted[0][name].fit.prediction.interference_gap
    assert gap > 0, f"{name}: P(A) - P_t = {gap:+.4f}"


def _symmetric(rng, scale):
    a = rng.uniform(-scale, scale, size=(3, 3))
    return np.triu(a) + np.triu(a, 1).T


def test_criterion_5_unitarity():
    rng = np.random.default_rng(501)
    for _ in range(1000):
        U = hermitian_expm(_symmetric(rng, 3.0), rng.uniform(0, math.pi))
        assert is_unitary(U, atol=1e-10)


def test_criterion_5_taylor_agreement():
    rng = np.random.default_rng(502)
    checked = 0
    while checked < 1000:
        H, t = _symmetric(rng, 1.0), rng.uniform(0, math.pi)
        if np.linalg.norm(H * t, 2) > 4:
            continue
        np.testing.assert_allclose(hermitian_expm(H, t), expm_taylor_oracle(H, t), rtol=0, atol=1e-9)
        checked += 1


def _distributions(seed):
    rng = np.random.default_rng(seed)
    for _ in range(1000):
        w = rng.exponential(size=int(rng.integers(2, 11)))
        yield w / w.sum()


def test_criterion_5_negation_normalization_and_entropy():
    for p in _distributions(503):
        q = negate_probabilities(p)
        assert abs(q.sum() - 1) <= 1e-12
        assert shannon_entropy(q) >= shannon_entropy(p) - 1e-12


def test_criterion_5_binary_iteration():
    np.testing.assert_allclose(iterate_negation([1.0, 0.0], 60)[-1], [0.5, 0.5], rtol=0, atol=1e-9)


def test_criterion_5_born_commutation():
    rng = np.random.default_rng(504)
    for p in _distributions(505):
        psi = QuantumState.from_amplitudes(np.sqrt(p) * np.exp(1j * rng.uniform(0, 2 * math.pi, p.size)))
        got = np.abs(negate_amplitudes(psi).amplitudes) ** 2
        np.testing.assert_allclose(got, negate_probabilities(psi.probabilities()), rtol=0, atol=1e-12)


def test_criterion_5_attack_given_bad():
    rng = np.random.default_rng(506)
    for _ in range(1000):
        alpha = rng.uniform(-10, 10)
        x1, x2 = rng.uniform(0, 1, size=2)
        expected = 1 / (1 + math.exp(-alpha))
        assert abs(attack_prob_given_B(x1, alpha) - expected) <= 1e-12
        assert abs(attack_prob_given_B(x1, alpha) - attack_prob_given_B(x2, alpha)) <= 1e-12


def test_criterion_5_parameter_recovery():
    rng = np.random.default_rng(2024)
    failures = []
    for trial in range(20):
        truth = ModelParams(rng.uniform(-2, 2), rng.uniform(-2, 2), rng.uniform(-1, 1), rng.uniform(0.1, 0.9))
        record = ExperimentRecord(f"synthetic-{trial}", "narrow", tuple(predict(truth).as_array()))
        value = fit(record, FitConfig()).objective_value
        if value > 1e-6:
            failures.append((trial, value))
    assert not failures, f"recovery failed in {len(failures)}/20 trials: {failures}"


def test_criterion_6_determinism(tmp_path):
    paths = [tmp_path / "first.json", tmp_path / "second.json"]
    codes = [
        main(["fit", "--dataset", "busemeyer2009-narrow", "--seed", "7", "--format", "json", "--out", str(p)])
        for p in paths
    ]
    assert codes[0] == codes[1]
    assert paths[0].read_bytes() == paths[1].read_bytes()
