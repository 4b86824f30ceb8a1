"""Two-document composite states, Bell states, collapse and Schmidt analysis.

Coefficients are always ordered ``(RR, RR_bar, R_barR, R_barR_bar)``, the
first letter referring to the first document.  Reshaped row-major this is
the 2x2 matrix ``M[i, j]`` with ``i`` indexing document one.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError
from .hilbert import BasisAngle, DocumentState, Modality, Outcome, rotation_matrix

COMPOSITE_NORM_TOLERANCE = 1e-9
DEFAULT_SCHMIDT_TOLERANCE = 1e-9
# Below this a conditional slice carries no probability and collapse is undefined.
_ZERO_PROBABILITY = 1e-30


class BellStateKind(enum.Enum):
    PHI_PLUS = "phi_plus"  # w|RR> + w'|R_bar R_bar>
    PSI_PLUS = "psi_plus"  # w|R R_bar> + w'|R_bar R>


@dataclass(frozen=True)
class CompositeState:
    coeffs: tuple[float, float, float, float]
    basis_modality: Modality = Modality.TEXT

    def __post_init__(self):
        coeffs = tuple(float(c) for c in self.coeffs)
        if len(coeffs) != 4:
            raise DomainError(f"composite state needs 4 coefficients, got {len(coeffs)}")
        if not all(math.isfinite(c) for c in coeffs):
            raise DomainError(f"coefficients must be finite, got {coeffs!r}")
        norm2 = math.fsum(c * c for c in coeffs)
        if abs(norm2 - 1.0) > COMPOSITE_NORM_TOLERANCE:
            raise DomainError(f"composite state is not normalized: sum of squares = {norm2!r}")
        object.__setattr__(self, "coeffs", coeffs)
        object.__setattr__(self, "basis_modality", Modality(self.basis_modality))

    @classmethod
    def normalized(cls, coeffs, basis_modality: Modality = Modality.TEXT) -> "CompositeState":
        """Build a state from arbitrary nonzero coefficients by rescaling them."""
        arr = np.asarray(coeffs, dtype=float)
        norm = math.sqrt(math.fsum(arr * arr))
        if norm == 0.0 or not math.isfinite(norm):
            raise DomainError("cannot normalize a zero or non-finite coefficient vector")
        return cls(tuple(arr / norm), basis_modality)

    def as_array(self) -> np.ndarray:
        return np.array(self.coeffs)

    def as_matrix(self) -> np.ndarray:
        return np.array(self.coeffs).reshape(2, 2)

    @property
    def norm_squared(self) -> float:
        return math.fsum(c * c for c in self.coeffs)


@dataclass(frozen=True)
class SchmidtDecomposition:
    singular_values: tuple[float, float]
    schmidt_number: int
    tolerance_used: float


def tensor_product(s1: DocumentState, s2: DocumentState) -> CompositeState:
    """Composite state ``s1 (x) s2`` of two same-modality document states."""
    if s1.modality is not s2.modality:
        raise DomainError(
            f"cannot compose states of different modalities: {s1.modality.value} and {s2.modality.value}"
        )
    a1, b1 = s1.amplitudes
    a2, b2 = s2.amplitudes
    return CompositeState((a1 * a2, a1 * b2, b1 * a2, b1 * b2), s1.modality)


def bell_state(
    kind: BellStateKind = BellStateKind.PHI_PLUS,
    weights: tuple[float, float] | None = None,
    modality: Modality = Modality.TEXT,
) -> CompositeState:
    """Bell-pattern state with the given (renormalized) weights.

    ``PHI_PLUS`` puts ``(w, w')`` on ``|RR>`` and ``|R_bar R_bar>``;
    ``PSI_PLUS`` on ``|R R_bar>`` and ``|R_bar R>``.  Both weights default to
    ``1/sqrt(2)``.  Weights such as the products ``(a1*a2, a1'*a2')`` are
    generally not normalized and are rescaled here.
    """
    if weights is None:
        w = w2 = 1.0 / math.sqrt(2.0)
    else:
        w, w2 = (float(x) for x in weights)
    if w == 0.0 and w2 == 0.0:
        raise DomainError("Bell state weights cannot both be zero")
    kind = BellStateKind(kind)
    if kind is BellStateKind.PHI_PLUS:
        coeffs = (w, 0.0, 0.0, w2)
    else:
        coeffs = (0.0, w, w2, 0.0)
    return CompositeState.normalized(coeffs, modality)


def _slice(first: Outcome) -> tuple[int, int]:
    return (0, 1) if Outcome(first) is Outcome.RELEVANT else (2, 3)


def measure_collapse(c: CompositeState, first_outcome: Outcome) -> tuple[float, CompositeState]:
    """Measure document one and return ``(probability, post-measurement state)``."""
    keep = _slice(first_outcome)
    prob = math.fsum(c.coeffs[i] ** 2 for i in keep)
    if prob <= _ZERO_PROBABILITY:
        raise DomainError(
            f"outcome {Outcome(first_outcome).value} has zero probability; collapse is undefined"
        )
    scale = 1.0 / math.sqrt(prob)
    collapsed = [0.0] * 4
    for i in keep:
        collapsed[i] = c.coeffs[i] * scale
    return prob, CompositeState(tuple(collapsed), c.basis_modality)


def marginal_probability(c: CompositeState, subsystem: int, outcome: Outcome = Outcome.RELEVANT) -> float:
    """Probability that document ``subsystem`` (1 or 2) shows ``outcome``."""
    if subsystem not in (1, 2):
        raise DomainError(f"subsystem must be 1 or 2, got {subsystem!r}")
    m = c.as_matrix()
    row = 0 if Outcome(outcome) is Outcome.RELEVANT else 1
    picked = m[row, :] if subsystem == 1 else m[:, row]
    return math.fsum(picked * picked)


def schmidt_decompose(c: CompositeState, tol: float = DEFAULT_SCHMIDT_TOLERANCE) -> SchmidtDecomposition:
    """Closed-form singular values of the 2x2 coefficient matrix.

    With ``F`` the squared Frobenius norm and ``d`` the determinant, the
    squared singular values are the roots of ``x**2 - F x + d**2``.  The
    larger root is taken from the quadratic formula and the smaller one as
    ``|d| / sigma_max`` to avoid cancellation for near-product states.
    """
    c0, c1, c2, c3 = c.coeffs
    frob = math.fsum((c0 * c0, c1 * c1, c2 * c2, c3 * c3))
    det = c0 * c3 - c1 * c2
    disc = max(frob * frob - 4.0 * det * det, 0.0)
    s_max = math.sqrt((frob + math.sqrt(disc)) / 2.0)
    s_min = abs(det) / s_max if s_max > 0.0 else 0.0
    s_min = min(s_min, s_max)
    number = sum(1 for s in (s_max, s_min) if s > tol)
    return SchmidtDecomposition((s_max, s_min), number, float(tol))


def is_entangled(c: CompositeState, tol: float = DEFAULT_SCHMIDT_TOLERANCE) -> bool:
    return schmidt_decompose(c, tol).schmidt_number > 1


def rotate_composite(c: CompositeState, angle: float | BasisAngle) -> CompositeState:
    """Express ``c`` with both documents' bases rotated by the same angle."""
    r = np.array(rotation_matrix(float(angle)))
    return CompositeState(tuple(np.kron(r, r) @ c.as_array()), c.basis_modality)


def check_rotation_invariance(c: CompositeState, angle: float | BasisAngle) -> float:
    """Largest componentwise change of ``c`` under a common basis rotation."""
    rotated = rotate_composite(c, angle)
    return float(np.max(np.abs(rotated.as_array() - c.as_array())))
