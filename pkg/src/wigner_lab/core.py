"""Dense complex statevector substrate: states, unitaries, basis and frame
expansions, Born-rule measurement, and separability testing.

Conventions
-----------
Qubit 0 (the first tensor factor) is the most significant: the amplitude of
basis ket ``|a b>`` sits at index ``2*a + b``.  Joint outcome labels join the
per-factor labels with ``_``.
"""

from __future__ import annotations

from dataclasses import InitVar, dataclass
from typing import Iterable, Mapping, Sequence

import numpy as np

TOL_NORM = 1e-10
TOL_UNITARY = 1e-12
TOL_RANK = 1e-9

LABEL_SEP = "_"


def _as_complex_vector(values) -> np.ndarray:
    vec = np.array(values, dtype=np.complex128).reshape(-1)
    if not np.all(np.isfinite(vec)):
        raise ValueError("amplitudes must be finite (no NaN/Inf)")
    return vec


def _as_complex_matrix(values) -> np.ndarray:
    mat = np.array(values, dtype=np.complex128)
    if mat.ndim != 2 or mat.shape[0] != mat.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {mat.shape}")
    if not np.all(np.isfinite(mat)):
        raise ValueError("matrix entries must be finite (no NaN/Inf)")
    return mat


def _freeze(arr: np.ndarray) -> np.ndarray:
    arr.flags.writeable = False
    return arr


@dataclass(frozen=True, eq=False)
class StateVector:
    """Normalized pure state of ``num_qubits`` qubits, 2**n complex amplitudes."""

    amplitudes: np.ndarray

    def __post_init__(self):
        amps = _as_complex_vector(self.amplitudes)
        n = amps.size.bit_length() - 1
        if amps.size < 2 or amps.size != 1 << n:
            raise ValueError(f"amplitude count must be a power of two >= 2, got {amps.size}")
        norm2 = float(np.sum(np.abs(amps) ** 2))
        if abs(norm2 - 1.0) > TOL_NORM:
            raise ValueError(f"state is not normalized: sum |a|^2 = {norm2!r}")
        object.__setattr__(self, "amplitudes", _freeze(amps))

    @property
    def num_qubits(self) -> int:
        return self.amplitudes.size.bit_length() - 1

    @property
    def dim(self) -> int:
        return self.amplitudes.size

    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))


@dataclass(frozen=True, eq=False)
class SquareUnitary:
    """d x d complex matrix validated unitary at construction."""

    matrix: np.ndarray
    tol: InitVar[float] = TOL_UNITARY

    def __post_init__(self, tol: float):
        mat = _as_complex_matrix(self.matrix)
        deviation = float(np.abs(mat.conj().T @ mat - np.eye(mat.shape[0])).max())
        if deviation > tol:
            raise ValueError(f"matrix is not unitary: max |U^H U - I| = {deviation!r} > {tol!r}")
        object.__setattr__(self, "matrix", _freeze(mat))

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    def adjoint(self) -> SquareUnitary:
        return SquareUnitary(self.matrix.conj().T)


@dataclass(frozen=True, eq=False)
class MeasurementBasis:
    """Ordered orthonormal basis; column k of ``vectors`` is the outcome ``labels[k]``."""

    vectors: np.ndarray
    labels: tuple[str, ...]

    def __post_init__(self):
        mat = _as_complex_matrix(self.vectors)
        labels = tuple(self.labels)
        if len(labels) != mat.shape[1]:
            raise ValueError("one label per basis vector required")
        deviation = float(np.abs(mat.conj().T @ mat - np.eye(mat.shape[0])).max())
        if deviation > TOL_UNITARY:
            raise ValueError(f"basis is not orthonormal: max |<b_i|b_j> - delta_ij| = {deviation!r}")
        object.__setattr__(self, "vectors", _freeze(mat))
        object.__setattr__(self, "labels", labels)

    @property
    def dim(self) -> int:
        return self.vectors.shape[0]


@dataclass(frozen=True, eq=False)
class Frame:
    """Ordered spanning set of d linearly independent, not necessarily
    orthogonal, columns.  Coefficient magnitudes in such a frame need not
    square-sum to the physical norm."""

    vectors: np.ndarray
    labels: tuple[str, ...]

    def __post_init__(self):
        mat = _as_complex_matrix(self.vectors)
        labels = tuple(self.labels)
        if len(labels) != mat.shape[1]:
            raise ValueError("one label per frame vector required")
        smallest = float(np.linalg.svd(mat, compute_uv=False)[-1])
        if smallest <= TOL_RANK:
            raise ValueError(f"frame vectors are linearly dependent: smallest singular value {smallest!r}")
        object.__setattr__(self, "vectors", _freeze(mat))
        object.__setattr__(self, "labels", labels)

    @property
    def dim(self) -> int:
        return self.vectors.shape[0]


def computational_basis(labels: Sequence[str] = ("0", "1")) -> MeasurementBasis:
    """Identity basis of dimension ``len(labels)``."""
    return MeasurementBasis(np.eye(len(labels)), tuple(labels))


def tensor_frame(a: Frame | MeasurementBasis, b: Frame | MeasurementBasis) -> Frame:
    """Kronecker product frame; labels join with ``_`` in (a, b) major order."""
    vectors = np.kron(a.vectors, b.vectors)
    labels = tuple(f"{la}{LABEL_SEP}{lb}" for la in a.labels for lb in b.labels)
    return Frame(vectors, labels)


@dataclass(frozen=True, eq=False)
class ExpansionCoefficients:
    """Coefficients of a state over an ordered basis or frame.

    ``naive_norm`` is the plain coefficient square-sum.  It equals the
    physical squared norm only when the expansion set is orthonormal.
    """

    labels: tuple[str, ...]
    coefficients: np.ndarray

    def __post_init__(self):
        coeffs = _as_complex_vector(self.coefficients)
        labels = tuple(self.labels)
        if len(labels) != coeffs.size:
            raise ValueError("one label per coefficient required")
        object.__setattr__(self, "coefficients", _freeze(coeffs))
        object.__setattr__(self, "labels", labels)

    @property
    def naive_norm(self) -> float:
        return float(np.sum(np.abs(self.coefficients) ** 2))

    def coefficient(self, label: str) -> complex:
        try:
            return complex(self.coefficients[self.labels.index(label)])
        except ValueError:
            raise KeyError(f"no coefficient labelled {label!r}") from None


@dataclass(frozen=True, eq=False)
class OutcomeDistribution:
    """Outcome label -> relative frequency, with counts when sampled.

    Analytic distributions carry ``counts=None`` and ``total=0``.
    """

    frequencies: dict[str, float]
    counts: dict[str, int] | None = None
    total: int = 0

    def __post_init__(self):
        freqs = dict(self.frequencies)
        if self.counts is not None:
            counts = dict(self.counts)
            if set(counts) != set(freqs):
                raise ValueError("counts and frequencies must share labels")
            if sum(counts.values()) != self.total:
                raise ValueError("counts must sum to total")
            object.__setattr__(self, "counts", counts)
        elif self.total != 0:
            raise ValueError("total requires counts")
        if self.total > 0 and abs(sum(freqs.values()) - 1.0) > 1e-12:
            raise ValueError("frequencies must sum to 1")
        for label, f in freqs.items():
            if not np.isfinite(f) or f < 0.0 or f > 1.0 + 1e-12:
                raise ValueError(f"frequency out of range for {label!r}: {f!r}")
        object.__setattr__(self, "frequencies", freqs)

    @classmethod
    def from_counts(cls, counts: Mapping[str, int]) -> OutcomeDistribution:
        total = int(sum(counts.values()))
        freqs = {k: (v / total if total else 0.0) for k, v in counts.items()}
        return cls(freqs, {k: int(v) for k, v in counts.items()}, total)

    @classmethod
    def from_probabilities(cls, probs: Mapping[str, float]) -> OutcomeDistribution:
        total = sum(probs.values())
        if abs(total - 1.0) > 1e-9:
            raise ValueError(f"probabilities must sum to 1, got {total!r}")
        return cls({k: float(v) for k, v in probs.items()})

    @property
    def labels(self) -> tuple[str, ...]:
        return tuple(self.frequencies)

    def probability(self, label: str) -> float:
        return self.frequencies[label]


@dataclass(frozen=True)
class UnitarityReport:
    ok: bool
    max_deviation: float


# ---------------------------------------------------------------------------
# Operations


def tensor(a: StateVector, b: StateVector) -> StateVector:
    """Tensor product with ``a`` as the most significant factor."""
    return StateVector(np.kron(a.amplitudes, b.amplitudes))


def inner(a: StateVector, b: StateVector) -> complex:
    """<a|b> with conjugation on the first argument."""
    if a.dim != b.dim:
        raise ValueError(f"dimension mismatch: {a.dim} vs {b.dim}")
    return complex(np.vdot(a.amplitudes, b.amplitudes))


def apply(u: SquareUnitary, v: StateVector) -> StateVector:
    """Evolve ``v`` by the unitary ``u``."""
    if u.dim != v.dim:
        raise ValueError(f"dimension mismatch: matrix is {u.dim}x{u.dim}, state has dim {v.dim}")
    return StateVector(u.matrix @ v.amplitudes)


def is_unitary(matrix, tol: float = TOL_UNITARY) -> UnitarityReport:
    """Check max-entry |U^H U - I| against ``tol``; accepts any square array."""
    if isinstance(matrix, SquareUnitary):
        mat = matrix.matrix
    else:
        mat = _as_complex_matrix(matrix)
    deviation = float(np.abs(mat.conj().T @ mat - np.eye(mat.shape[0])).max())
    return UnitarityReport(deviation <= tol, deviation)


def _product_columns(bases: Sequence[MeasurementBasis], dim: int) -> tuple[np.ndarray, tuple[str, ...]]:
    if not bases:
        raise ValueError("at least one basis required")
    matrix = bases[0].vectors
    labels: Iterable[tuple[str, ...]] = [(l,) for l in bases[0].labels]
    for basis in bases[1:]:
        matrix = np.kron(matrix, basis.vectors)
        labels = [parts + (l,) for parts in labels for l in basis.labels]
    if matrix.shape[0] != dim:
        raise ValueError(f"basis product has dim {matrix.shape[0]}, state has dim {dim}")
    return matrix, tuple(LABEL_SEP.join(parts) for parts in labels)


def change_basis(v: StateVector, per_qubit_bases: Sequence[MeasurementBasis]) -> ExpansionCoefficients:
    """Coefficients of ``v`` over the tensor product of orthonormal bases."""
    matrix, labels = _product_columns(per_qubit_bases, v.dim)
    coeffs = matrix.conj().T @ v.amplitudes
    return ExpansionCoefficients(labels, coeffs)


def expand_in_frame(v: StateVector, frame: Frame) -> ExpansionCoefficients:
    """Solve ``F c = v`` for the coefficients of ``v`` over a spanning frame."""
    if frame.dim != v.dim:
        raise ValueError(f"dimension mismatch: frame is dim {frame.dim}, state has dim {v.dim}")
    coeffs = np.linalg.solve(frame.vectors, v.amplitudes)
    return ExpansionCoefficients(frame.labels, coeffs)


def born_probabilities(v: StateVector, per_qubit_bases: Sequence[MeasurementBasis]) -> OutcomeDistribution:
    """Squared-magnitude outcome distribution of a projective product measurement."""
    expansion = change_basis(v, per_qubit_bases)
    probs = np.abs(expansion.coefficients) ** 2
    total = float(probs.sum())
    if abs(total - 1.0) > TOL_NORM:
        raise ValueError(f"basis is not complete: probabilities sum to {total!r}")
    return OutcomeDistribution.from_probabilities(dict(zip(expansion.labels, probs)))


def measure(
    v: StateVector,
    per_qubit_bases: Sequence[MeasurementBasis],
    rng: np.random.Generator,
) -> tuple[tuple[str, ...], StateVector]:
    """Sample one projective outcome; posterior collapses onto the product
    basis vector of the sampled outcome."""
    matrix, _ = _product_columns(per_qubit_bases, v.dim)
    probs = np.abs(matrix.conj().T @ v.amplitudes) ** 2
    index = min(int(np.searchsorted(np.cumsum(probs), rng.random(), side="right")), v.dim - 1)
    labels = []
    remainder = index
    for basis in reversed(per_qubit_bases):
        d = len(basis.labels)
        labels.append(basis.labels[remainder % d])
        remainder //= d
    posterior = StateVector(matrix[:, index])
    return tuple(reversed(labels)), posterior


def schmidt_values(v: StateVector, split: int) -> np.ndarray:
    """Descending singular values of the amplitude matrix reshaped at the
    bipartition after the first ``split`` qubits."""
    if not 1 <= split < v.num_qubits:
        raise ValueError(f"split must satisfy 1 <= split < {v.num_qubits}, got {split}")
    matrix = v.amplitudes.reshape(1 << split, -1)
    return np.linalg.svd(matrix, compute_uv=False)


def is_separable(v: StateVector, split: int, tol: float = TOL_RANK) -> bool:
    """True iff the state is a product across the bipartition (Schmidt rank 1)."""
    values = schmidt_values(v, split)
    return bool(np.all(values[1:] <= tol))
