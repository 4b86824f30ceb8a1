"""CHSH statistics for document pairs and a quantum oracle for contrast.

Document pairs use the independence model: the expectation of two +/-1
relevance variables is the product of their individual expectations.  Such
expectations can never push the CHSH combination past 2.  The quantum
oracle evaluates true expectations ``<c|A(a) (x) A(b)|c>`` on a composite
state and reaches ``2*sqrt(2)`` on the Bell state ``PHI_PLUS``.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass
from typing import Protocol

import numpy as np

from .composite import CompositeState
from .errors import DomainError
from .hilbert import BasisAngle, check_probability

CLASSICAL_BOUND = 2.0
TSIRELSON_BOUND = 2.0 * math.sqrt(2.0)
DEFAULT_VIOLATION_TOLERANCE = 1e-9
_EXPECTATION_SLACK = 1e-9

MeasurementSetting = BasisAngle

_PAULI_Z = np.array([[1.0, 0.0], [0.0, -1.0]])
_PAULI_X = np.array([[0.0, 1.0], [1.0, 0.0]])


@dataclass(frozen=True)
class ChshResult:
    """The four expectations, ``|e_tt + e_ti + e_it - e_ii|`` and the bound flags."""

    e_tt: float
    e_ti: float
    e_it: float
    e_ii: float
    s_value: float
    violates_classical: bool
    exceeds_tsirelson: bool

    def to_dict(self) -> dict:
        return asdict(self)


class _HasModalityScores(Protocol):
    doc_id: str
    p_text: float
    p_image: float


def expectation_independent(p_a: float, p_b: float) -> float:
    """Expectation of the product of two independent +/-1 variables.

    ``p_a`` and ``p_b`` are the probabilities of outcome +1.  Equal to the
    four-term sum ``P(++) - P(+-) - P(-+) + P(--)`` with factorized joints.
    """
    p_a = check_probability(p_a, "pA")
    p_b = check_probability(p_b, "pB")
    return (2.0 * p_a - 1.0) * (2.0 * p_b - 1.0)


def chsh_statistic(
    e_tt: float,
    e_ti: float,
    e_it: float,
    e_ii: float,
    tol: float = DEFAULT_VIOLATION_TOLERANCE,
) -> ChshResult:
    values = (e_tt, e_ti, e_it, e_ii)
    for name, e in zip(("e_tt", "e_ti", "e_it", "e_ii"), values):
        if not (math.isfinite(e) and -1.0 - _EXPECTATION_SLACK <= e <= 1.0 + _EXPECTATION_SLACK):
            raise DomainError(f"expectation {name}={e!r} lies outside [-1, 1]")
    s = abs(e_tt + e_ti + e_it - e_ii)
    return ChshResult(
        float(e_tt),
        float(e_ti),
        float(e_it),
        float(e_ii),
        s,
        s > CLASSICAL_BOUND + tol,
        s > TSIRELSON_BOUND + DEFAULT_VIOLATION_TOLERANCE,
    )


def _modality_score(doc, attr: str, label: str) -> float:
    doc_id = getattr(doc, "doc_id", "<unknown>")
    value = getattr(doc, attr, None)
    if value is None:
        raise DomainError(f"document {doc_id!r} has no {label} relevance score")
    return check_probability(value, f"{label} relevance of {doc_id!r}")


def chsh_from_document_pair(
    d1: _HasModalityScores,
    d2: _HasModalityScores,
    tol: float = DEFAULT_VIOLATION_TOLERANCE,
) -> ChshResult:
    """CHSH statistic of two scored documents under independence.

    Terms: ``<t1 t2> + <t2 i1> + <t1 i2> - <i1 i2>`` where ``t``/``i`` are
    text/image relevance variables of document 1 or 2.
    """
    pt1 = _modality_score(d1, "p_text", "text")
    pi1 = _modality_score(d1, "p_image", "image")
    pt2 = _modality_score(d2, "p_text", "text")
    pi2 = _modality_score(d2, "p_image", "image")
    return chsh_statistic(
        expectation_independent(pt1, pt2),
        expectation_independent(pt2, pi1),
        expectation_independent(pt1, pi2),
        expectation_independent(pi1, pi2),
        tol=tol,
    )


def chsh_s_values(p_t1, p_i1, p_t2, p_i2) -> np.ndarray:
    """Vectorized ``s`` for arrays of probability quadruples (independence model)."""
    xt1 = 2.0 * np.asarray(p_t1, dtype=float) - 1.0
    xi1 = 2.0 * np.asarray(p_i1, dtype=float) - 1.0
    xt2 = 2.0 * np.asarray(p_t2, dtype=float) - 1.0
    xi2 = 2.0 * np.asarray(p_i2, dtype=float) - 1.0
    return np.abs(xt1 * xt2 + xt2 * xi1 + xt1 * xi2 - xi1 * xi2)


def observable(angle: float | BasisAngle) -> np.ndarray:
    """+/-1 observable with eigenvectors ``(cos t, sin t)`` (+1) and ``(-sin t, cos t)`` (-1)."""
    t = 2.0 * float(angle)
    return math.cos(t) * _PAULI_Z + math.sin(t) * _PAULI_X


def quantum_expectation(c: CompositeState, a: float | BasisAngle, b: float | BasisAngle) -> float:
    """``<c| A(a) (x) A(b) |c>`` evaluated as ``tr(M^T A M B)`` on the coefficient matrix."""
    m = c.as_matrix()
    value = float(np.trace(m.T @ observable(a) @ m @ observable(b)))
    return min(1.0, max(-1.0, value))


def quantum_chsh(
    c: CompositeState,
    a: float | BasisAngle,
    a_prime: float | BasisAngle,
    b: float | BasisAngle,
    b_prime: float | BasisAngle,
    tol: float = DEFAULT_VIOLATION_TOLERANCE,
) -> ChshResult:
    """Quantum CHSH value ``|E(a,b) - E(a,b') + E(a',b) + E(a',b')|``.

    The settings map onto the document-pair pattern with observables
    ``t1 = a'``, ``i1 = a`` for document one and ``t2 = b``, ``i2 = b'``
    for document two, so the subtracted term is ``E(a, b')``.  With this
    labeling ``(0, pi/4, pi/8, 3pi/8)`` attains the Tsirelson bound.
    """
    e = quantum_expectation
    return chsh_statistic(
        e(c, a_prime, b),
        e(c, a, b),
        e(c, a_prime, b_prime),
        e(c, a, b_prime),
        tol=tol,
    )


def correlation_matrix(c: CompositeState) -> np.ndarray:
    """``T[j, k] = <sigma_j (x) sigma_k>`` over the real Paulis ``(Z, X)``."""
    m = c.as_matrix()
    paulis = (_PAULI_Z, _PAULI_X)
    return np.array([[np.trace(m.T @ p @ m @ q) for q in paulis] for p in paulis])


@dataclass(frozen=True)
class ChshMaximum:
    s_value: float
    a: float
    a_prime: float
    b: float
    b_prime: float


def maximize_quantum_chsh(c: CompositeState, steps: int = 720) -> ChshMaximum:
    """Exhaustive maximum of the quantum CHSH value over an angle grid.

    All four settings range over ``k*pi/steps`` for ``k < steps``.  For fixed
    ``(a, a')`` the value splits as ``f(b) + g(b')``, so each pair of
    first-document settings is maximized over the second document in
    linear time; the search is still exact over the full grid.
    """
    if steps < 1:
        raise DomainError(f"steps must be positive, got {steps!r}")
    angles = np.arange(steps) * (math.pi / steps)
    u = np.stack([np.cos(2 * angles), np.sin(2 * angles)], axis=1)
    table = u @ correlation_matrix(c) @ u.T  # table[x, y] = E(angle_x, angle_y)

    best = (-1.0, 0, 0, 0, 0)
    for ia_p in range(steps):
        f = table[ia_p][None, :] + table  # f[ia, b] = E(a', b) + E(a, b)
        g = table[ia_p][None, :] - table  # g[ia, b'] = E(a', b') - E(a, b')
        f_hi, g_hi = f.max(axis=1), g.max(axis=1)
        f_lo, g_lo = f.min(axis=1), g.min(axis=1)
        pos, neg = f_hi + g_hi, -(f_lo + g_lo)
        for cand, fa, ga in ((pos, f.argmax(axis=1), g.argmax(axis=1)),
                             (neg, f.argmin(axis=1), g.argmin(axis=1))):
            ia = int(np.argmax(cand))
            if cand[ia] > best[0]:
                best = (float(cand[ia]), ia, ia_p, int(fa[ia]), int(ga[ia]))
    s, ia, ia_p, ib, ib_p = best
    return ChshMaximum(s, float(angles[ia]), float(angles[ia_p]), float(angles[ib]), float(angles[ib_p]))

