"""Small dense complex linear algebra for 3- and 6-level systems.

Matrices are plain numpy arrays. Only the state vector carries its own type
because the basis labels travel with it through the model pipeline.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np
from numpy.typing import ArrayLike, NDArray
from scipy.linalg.lapack import dsyev

from nqdecision.errors import DegenerateInputError, NumericError, ValidationError

MAX_DIM = 8
NORM_TOL = 1e-10


@dataclass(frozen=True)
class QuantumState:
    """Complex amplitude vector over an ordered, labelled basis."""

    amplitudes: NDArray[np.complex128]
    basis_labels: tuple[str, ...]

    def __post_init__(self) -> None:
        amps = np.array(self.amplitudes, dtype=np.complex128).reshape(-1)
        labels = tuple(str(label) for label in self.basis_labels)
        if amps.shape[0] != len(labels):
            raise ValidationError(
                f"{amps.shape[0]} amplitudes but {len(labels)} basis labels"
            )
        if not np.all(np.isfinite(amps)):
            raise ValidationError("amplitudes must be finite")
        amps.flags.writeable = False
        object.__setattr__(self, "amplitudes", amps)
        object.__setattr__(self, "basis_labels", labels)

    @classmethod
    def from_amplitudes(
        cls, amplitudes: ArrayLike, basis_labels: Sequence[str] | None = None
    ) -> QuantumState:
        amps = np.asarray(amplitudes, dtype=np.complex128).reshape(-1)
        if basis_labels is None:
            basis_labels = [str(i) for i in range(amps.shape[0])]
        return cls(amps, tuple(basis_labels))

    def __len__(self) -> int:
        return self.amplitudes.shape[0]

    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))

    def probabilities(self) -> NDArray[np.float64]:
        """Born-rule probabilities |psi_i|^2."""
        return np.abs(self.amplitudes) ** 2

    @property
    def normalized(self) -> bool:
        return abs(float(np.sum(self.probabilities())) - 1.0) <= NORM_TOL

    def __getitem__(self, label: str) -> complex:
        return complex(self.amplitudes[self.basis_labels.index(label)])


def _as_symmetric(H: ArrayLike) -> NDArray[np.float64]:
    arr = np.asarray(H)
    if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
        raise ValidationError(f"expected a square matrix, got shape {arr.shape}")
    if arr.shape[0] > MAX_DIM:
        raise ValidationError(f"matrix dimension {arr.shape[0]} exceeds {MAX_DIM}")
    if np.iscomplexobj(arr):
        if np.any(arr.imag != 0):
            raise ValidationError("expected a real symmetric matrix")
        arr = arr.real
    arr = arr.astype(np.float64)
    if not np.all(np.isfinite(arr)):
        raise ValidationError("matrix entries must be finite")
    if not np.array_equal(arr, arr.T):
        raise ValidationError("matrix is not symmetric")
    return arr


def _check_time(t: float) -> float:
    t = float(t)
    if not np.isfinite(t) or t < 0:
        raise ValidationError(f"evolution time must be finite and nonnegative, got {t}")
    return t


def hermitian_expm(H: ArrayLike, t: float) -> NDArray[np.complex128]:
    """Return the unitary ``exp(-i H t)`` for a real symmetric ``H``.

    Computed from the eigendecomposition ``H = V diag(lam) V^T`` as
    ``V diag(exp(-i lam t)) V^T``, which is unitary to rounding error.
    """
    return _expm_symmetric(_as_symmetric(H), _check_time(t))


def _expm_symmetric(H: NDArray[np.float64], t: float) -> NDArray[np.complex128]:
    # Caller guarantees H is real symmetric and t >= 0.
    # Direct LAPACK call; numpy.linalg.eigh wrapper overhead dominates at n=3.
    eigvals, eigvecs, info = dsyev(H)
    if info != 0:
        raise NumericError(f"eigendecomposition failed (LAPACK dsyev info={info})")
    U = (eigvecs * np.exp(-1j * eigvals * t)) @ eigvecs.T
    if not np.isfinite(U).all():
        raise NumericError("matrix exponential produced non-finite entries")
    return U


def expm_taylor_oracle(H: ArrayLike, t: float, terms: int = 40) -> NDArray[np.complex128]:
    """Partial sum of the power series of ``exp(-i H t)``.

    Independent cross-check for :func:`hermitian_expm`; accurate to ~1e-9 for
    ``||H t|| <= 4`` with the default number of terms.
    """
    if terms < 30:
        raise ValidationError(f"need at least 30 series terms, got {terms}")
    Hs = _as_symmetric(H)
    t = _check_time(t)
    A = -1j * t * Hs
    n = Hs.shape[0]
    term = np.eye(n, dtype=np.complex128)
    total = term.copy()
    for k in range(1, terms):
        term = term @ A / k
        total = total + term
    return total


def apply_unitary(U: ArrayLike, psi: QuantumState) -> QuantumState:
    Um = np.asarray(U, dtype=np.complex128)
    if Um.ndim != 2 or Um.shape != (len(psi), len(psi)):
        raise ValidationError(
            f"operator shape {Um.shape} does not match state dimension {len(psi)}"
        )
    return QuantumState(Um @ psi.amplitudes, psi.basis_labels)


def normalize(psi: QuantumState) -> QuantumState:
    n = psi.norm()
    if n == 0.0:
        raise DegenerateInputError("cannot normalize the zero vector")
    return QuantumState(psi.amplitudes / n, psi.basis_labels)


def is_unitary(U: ArrayLike, atol: float = 1e-10) -> bool:
    Um = np.asarray(U, dtype=np.complex128)
    return bool(np.allclose(Um @ Um.conj().T, np.eye(Um.shape[0]), rtol=0, atol=atol))
