"""Single-modality relevance as a unit vector in a real 2-D Hilbert space.

A document's relevance for one modality is the superposition
``a|R> + a'|R_bar>`` with ``a**2 + a'**2 == 1``.  Probabilities follow the
Born rule: the probability of an outcome is the squared amplitude on it.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

from .errors import DomainError

#: Maximum norm deviation accepted by the checked ``DocumentState`` constructor.
NORM_TOLERANCE = 1e-9


class Modality(enum.Enum):
    TEXT = "text"
    IMAGE = "image"


class Outcome(enum.Enum):
    RELEVANT = "relevant"
    NON_RELEVANT = "non_relevant"


def check_probability(p: float, name: str = "probability") -> float:
    """Return ``p`` as a float, raising ``DomainError`` unless it lies in [0, 1]."""
    p = float(p)
    if not (0.0 <= p <= 1.0):
        raise DomainError(f"{name} must lie in [0, 1], got {p!r}")
    return p


@dataclass(frozen=True)
class BasisAngle:
    """Orientation of a measurement basis, normalized to [0, pi).

    A basis and its half-turn describe the same measurement, so angles are
    reduced modulo pi on construction.
    """

    theta: float

    def __post_init__(self):
        theta = float(self.theta)
        if not math.isfinite(theta):
            raise DomainError(f"basis angle must be finite, got {theta!r}")
        theta = math.fmod(theta, math.pi)
        if theta < 0.0:
            theta += math.pi
        if theta >= math.pi:
            theta = 0.0
        object.__setattr__(self, "theta", theta)

    def __float__(self):
        return self.theta


@dataclass(frozen=True)
class DocumentState:
    """Relevance state ``(amp_relevant, amp_nonrelevant)`` of one modality.

    Construction checks unit norm to within ``NORM_TOLERANCE``; all
    downstream math assumes normalized states.
    """

    amp_relevant: float
    amp_nonrelevant: float
    modality: Modality = Modality.TEXT

    def __post_init__(self):
        a, b = float(self.amp_relevant), float(self.amp_nonrelevant)
        if not (math.isfinite(a) and math.isfinite(b)):
            raise DomainError(f"amplitudes must be finite, got ({a!r}, {b!r})")
        norm2 = a * a + b * b
        if abs(norm2 - 1.0) > NORM_TOLERANCE:
            raise DomainError(
                f"state is not normalized: |a|^2 + |a'|^2 = {norm2!r}"
            )
        object.__setattr__(self, "amp_relevant", a)
        object.__setattr__(self, "amp_nonrelevant", b)
        object.__setattr__(self, "modality", Modality(self.modality))

    @property
    def amplitudes(self) -> tuple[float, float]:
        return (self.amp_relevant, self.amp_nonrelevant)

    @property
    def norm_squared(self) -> float:
        return self.amp_relevant**2 + self.amp_nonrelevant**2


def state_from_probability(p: float, modality: Modality = Modality.TEXT) -> DocumentState:
    """Build the nonnegative-amplitude state whose relevance probability is ``p``.

    >>> state_from_probability(0.25).amplitudes
    (0.5, 0.8660254037844386)
    """
    p = check_probability(p, "relevance probability")
    return DocumentState(math.sqrt(p), math.sqrt(1.0 - p), modality)


def born_probability(state: DocumentState, outcome: Outcome = Outcome.RELEVANT) -> float:
    """Squared amplitude of ``state`` on the requested outcome."""
    if abs(state.norm_squared - 1.0) > NORM_TOLERANCE:
        raise DomainError("born_probability requires a normalized state")
    if Outcome(outcome) is Outcome.RELEVANT:
        return state.amp_relevant**2
    return state.amp_nonrelevant**2


def rotation_matrix(theta: float) -> tuple[tuple[float, float], tuple[float, float]]:
    """Coordinate map into the basis rotated counter-clockwise by ``theta``.

    Row ``k`` is the k-th rotated basis vector, so applying the matrix to an
    amplitude vector yields its components in the rotated basis:
    ``|R'> = (cos, sin)`` and ``|R_bar'> = (-sin, cos)``.
    """
    c, s = math.cos(theta), math.sin(theta)
    return ((c, s), (-s, c))


def rotate_basis(state: DocumentState, angle: float | BasisAngle) -> DocumentState:
    """Express ``state`` in the measurement basis rotated by ``angle``.

    A plain float is used as given; a ``BasisAngle`` contributes its
    normalized value.  The two differ by an overall sign for angles past pi,
    which matters when composing rotations of a state vector.
    """
    theta = float(angle)
    (r00, r01), (r10, r11) = rotation_matrix(theta)
    a, b = state.amplitudes
    return DocumentState(r00 * a + r01 * b, r10 * a + r11 * b, state.modality)


def cross_basis_probability(angle: float | BasisAngle) -> float:
    """Probability ``cos(theta)**2`` of agreement between two bases at ``angle``."""
    return math.cos(float(angle)) ** 2
