"""BB84-type measurement sets: validation, observables, outcome statistics.

A measurement set has four elements indexed by basis r in {z, x} and bit
b in {0, 1}, each basis pair summing to the identity. The cyclic view
L_0..L_3 orders them as z0, x0, z1, x1.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import linalg
from .errors import DimensionMismatch, InvalidPovm, NotAState

#: Cyclic ordering of the four outcome labels (index c in the L_c view).
LABELS = ("z0", "x0", "z1", "x1")


def label(r: str, b: int) -> str:
    if r not in ("z", "x") or b not in (0, 1):
        raise ValueError(f"bad outcome label ({r!r}, {b!r})")
    return f"{r}{b}"


@dataclass(frozen=True)
class Bb84Povm:
    dim: int
    elements: dict  # label -> complex matrix

    def element(self, r: str, b: int) -> np.ndarray:
        return self.elements[label(r, b)]

    def l_element(self, c: int) -> np.ndarray:
        """Element at cyclic position c (z0, x0, z1, x1)."""
        return self.elements[LABELS[c % 4]]


def make_povm(elements: dict) -> Bb84Povm:
    """Build a measurement set from a label -> matrix mapping."""
    mats = {}
    dim = None
    for key in LABELS:
        if key not in elements:
            raise InvalidPovm(f"missing element {key!r}")
        m = linalg.as_matrix(elements[key])
        if dim is None:
            dim = m.shape[0]
        elif m.shape[0] != dim:
            raise DimensionMismatch("POVM elements have inconsistent dimensions")
        mats[key] = m
    return Bb84Povm(dim=dim, elements=mats)


def ideal_qubit_povm() -> Bb84Povm:
    """Projective qubit measurements of sigma_z and sigma_x."""
    eye = np.eye(2, dtype=complex)
    return make_povm(
        {
            "z0": (eye + linalg.PAULI_Z) / 2,
            "z1": (eye - linalg.PAULI_Z) / 2,
            "x0": (eye + linalg.PAULI_X) / 2,
            "x1": (eye - linalg.PAULI_X) / 2,
        }
    )


@dataclass(frozen=True)
class ValidationReport:
    psd_margins: dict  # label -> min eigenvalue
    completeness_residuals: dict  # basis -> Frobenius residual of sum vs identity
    tol: float
    passed: bool


def validate(p: Bb84Povm, tol: float = 1e-9) -> ValidationReport:
    """Check positivity of every element and per-basis completeness."""
    margins = {}
    residuals = {}
    ok = True
    eye = np.eye(p.dim, dtype=complex)
    for key in LABELS:
        m = p.elements[key]
        if not linalg.is_hermitian(m):
            margins[key] = float("-inf")
            ok = False
            continue
        margins[key] = linalg.min_eigenvalue((m + linalg.dagger(m)) / 2)
        if margins[key] < -tol:
            ok = False
    for r in ("z", "x"):
        res = linalg.frob(p.element(r, 0) + p.element(r, 1) - eye)
        residuals[r] = res
        if res > tol:
            ok = False
    return ValidationReport(
        psd_margins=margins, completeness_residuals=residuals, tol=tol, passed=ok
    )


@dataclass(frozen=True)
class Observable:
    r: str
    matrix: np.ndarray


def observable(p: Bb84Povm, r: str, tol: float = 1e-9) -> Observable:
    """Difference of the two outcome elements of one basis."""
    report = validate(p, tol)
    if not report.passed:
        raise InvalidPovm(f"measurement set fails validation at tol={tol}")
    m = p.element(r, 0) - p.element(r, 1)
    return Observable(r=r, matrix=m)


def _require_state(rho: np.ndarray, dim: int, tol: float) -> np.ndarray:
    m = linalg.as_matrix(rho)
    if m.shape[0] != dim:
        raise DimensionMismatch(f"state dim {m.shape[0]} vs POVM dim {dim}")
    if not linalg.is_hermitian(m):
        raise NotAState("density matrix must be Hermitian")
    if abs(np.trace(m).real - 1.0) > tol or abs(np.trace(m).imag) > tol:
        raise NotAState("density matrix must have unit trace")
    if linalg.min_eigenvalue((m + linalg.dagger(m)) / 2) < -tol:
        raise NotAState("density matrix must be positive semidefinite")
    return m


def outcome_probability(
    rho: np.ndarray, p: Bb84Povm, r: str, b: int, tol: float = 1e-9
) -> float:
    """Born-rule probability Tr(rho * M_(r,b)), clamped to [0, 1] near the edges."""
    m = _require_state(rho, p.dim, tol)
    prob = np.trace(m @ p.element(r, b)).real
    if prob < 0.0:
        if prob < -tol:
            raise NotAState(f"probability {prob} outside [0,1] beyond tolerance")
        prob = 0.0
    if prob > 1.0:
        if prob > 1.0 + tol:
            raise NotAState(f"probability {prob} outside [0,1] beyond tolerance")
        prob = 1.0
    return float(prob)


def povm_to_json(p: Bb84Povm) -> dict:
    return {
        "dim": int(p.dim),
        "elements": {key: linalg.matrix_to_json(p.elements[key]) for key in LABELS},
    }


def povm_from_json(obj: dict) -> Bb84Povm:
    elements = {key: linalg.matrix_from_json(obj["elements"][key]) for key in LABELS}
    p = make_povm(elements)
    if p.dim != int(obj["dim"]):
        raise DimensionMismatch("declared dim disagrees with element matrices")
    return p
