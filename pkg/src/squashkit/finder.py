"""Squash existence as convex feasibility over the Choi matrix.

A channel from dimension d to a qubit is encoded as its Choi matrix
J = sum_c vec(F_c) vec(F_c)+ with column-stacked vec, so J lives on the
composite (input x output) space of dimension 2d. Trace preservation and
the reproduction of both observables are affine constraints on J, each of
the form Tr(J * (E_ij x P)) = target with P one of identity, sigma_z,
sigma_x. Feasibility is then the intersection of that affine set with the
positive semidefinite cone, searched by alternating projections.

A cheap necessary condition runs first: the output Bloch vector of a qubit
has norm at most one, so max over angles of the top eigenvalue of
cos(t) M_z + sin(t) M_x above one certifies that no squash exists.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import linalg, povm
from .builder import SquashMap, verify_squash
from .errors import NotPsd, NotTracePreserving

GOLDEN = (np.sqrt(5.0) - 1.0) / 2.0


@dataclass(frozen=True)
class ChoiMatrix:
    d: int  # input dimension; the matrix lives on dimension 2d
    j: np.ndarray


def _vec(f: np.ndarray) -> np.ndarray:
    # column stacking: entry (a, b) of a 2 x d matrix lands at index b*2 + a
    return f.T.reshape(-1)


def _unvec(v: np.ndarray, d: int) -> np.ndarray:
    return v.reshape(d, 2).T


def choi_from_squash(f: SquashMap) -> ChoiMatrix:
    j = np.zeros((2 * f.in_dim, 2 * f.in_dim), dtype=complex)
    for k in f.kraus:
        vk = _vec(k)
        j += np.outer(vk, vk.conj())
    return ChoiMatrix(d=f.in_dim, j=j)


def squash_from_choi(c: ChoiMatrix, psd_tol: float = 1e-8, tp_tol: float = 1e-6) -> SquashMap:
    """Kraus operators from the spectral decomposition of a Choi matrix.

    Eigenvalue clipping can leave the recovered family preserving trace only
    as well as the input marginal does, so when the Kraus sum drifts from
    the identity beyond floating-point dust the family is renormalized by
    the inverse square root of its sum; that keeps trace preservation exact
    and moves the channel by at most the marginal defect.
    """
    eig = linalg.hermitian_eig(c.j)
    if eig.eigenvalues[0] < -psd_tol:
        raise NotPsd(f"Choi matrix has eigenvalue {eig.eigenvalues[0]}")
    marginal = linalg.partial_trace(c.j, (c.d, 2), keep="first")
    if linalg.frob(marginal - np.eye(c.d)) > tp_tol:
        raise NotTracePreserving("input marginal of the Choi matrix is not the identity")
    kraus = []
    for lam, u in zip(eig.eigenvalues, eig.eigenvectors.T):
        if lam >= 1e-10:
            kraus.append(np.sqrt(lam) * _unvec(u, c.d))
    total = sum(linalg.dagger(f) @ f for f in kraus)
    if linalg.frob(total - np.eye(c.d)) > 1e-10:
        teig = linalg.hermitian_eig(total)
        if teig.eigenvalues[0] <= 0.0:
            raise NotTracePreserving("Kraus sum is singular; cannot renormalize")
        inv_root = (teig.eigenvectors / np.sqrt(teig.eigenvalues)) @ linalg.dagger(
            teig.eigenvectors
        )
        kraus = [f @ inv_root for f in kraus]
    return SquashMap(in_dim=c.d, kraus=tuple(kraus))


# ---------------------------------------------------------------------------
# Affine constraint set

class AffineConstraints:
    """Orthonormalized Hermitian constraint functionals Tr(J B_k) = t_k."""

    def __init__(self, d: int, m_z: np.ndarray, m_x: np.ndarray):
        self.d = d
        raw, targets = [], []
        eye2 = np.eye(2, dtype=complex)
        pairs = [
            (eye2, np.eye(d, dtype=complex)),
            (linalg.PAULI_Z, m_z),
            (linalg.PAULI_X, m_x),
        ]
        for pauli, goal in pairs:
            for i in range(d):
                for j in range(i, d):
                    e = np.zeros((d, d), dtype=complex)
                    e[i, j] = 1.0
                    a = linalg.kron(e, pauli)
                    if i == j:
                        raw.append(a)
                        targets.append(goal[i, i].real)
                    else:
                        raw.append(a + linalg.dagger(a))
                        targets.append(2.0 * goal[i, j].real)
                        raw.append(1j * (a - linalg.dagger(a)))
                        targets.append(-2.0 * goal[i, j].imag)
        # Gram-Schmidt in the Hilbert-Schmidt inner product; the constraints
        # are independent by construction, but dependent directions would be
        # dropped here after a consistency check.
        self.basis, self.targets = [], []
        for mat, tgt in zip(raw, targets):
            w, t = mat.astype(complex), float(tgt)
            for b, tb in zip(self.basis, self.targets):
                coeff = np.real(np.vdot(b, w))
                w = w - coeff * b
                t = t - coeff * tb
            norm = np.sqrt(np.real(np.vdot(w, w)))
            if norm < 1e-12:
                if abs(t) > 1e-9:
                    raise NotTracePreserving(
                        "constraint set is inconsistent; the POVM admits no channel"
                    )
                continue
            self.basis.append(w / norm)
            self.targets.append(t / norm)

    def project(self, j: np.ndarray) -> np.ndarray:
        out = j.copy()
        for b, t in zip(self.basis, self.targets):
            out = out + (t - np.real(np.vdot(b, out))) * b
        return out

    def residual(self, j: np.ndarray) -> float:
        devs = [np.real(np.vdot(b, j)) - t for b, t in zip(self.basis, self.targets)]
        return float(np.sqrt(np.sum(np.square(devs))))


def project_psd(j: np.ndarray) -> np.ndarray:
    """Nearest positive semidefinite matrix in Frobenius norm."""
    sym = (j + linalg.dagger(j)) / 2.0
    eig = linalg.hermitian_eig(sym)
    clipped = np.clip(eig.eigenvalues, 0.0, None)
    return (eig.eigenvectors * clipped) @ linalg.dagger(eig.eigenvectors)


def affine_residual(c: ChoiMatrix, p: povm.Bb84Povm) -> float:
    """Distance of a Choi matrix from the constraint set of a measurement set."""
    m_z = p.element("z", 0) - p.element("z", 1)
    m_x = p.element("x", 0) - p.element("x", 1)
    return AffineConstraints(p.dim, m_z, m_x).residual(c.j)


# ---------------------------------------------------------------------------
# Bloch-norm witness

@dataclass(frozen=True)
class BlochWitness:
    theta: float
    state: np.ndarray  # pure state as a density matrix
    value: float


def _top_eigenpair(m: np.ndarray):
    eig = linalg.hermitian_eig(m)
    return float(eig.eigenvalues[-1]), eig.eigenvectors[:, -1]


def bloch_witness(
    m_z: povm.Observable, m_x: povm.Observable, grid: int = 720
) -> BlochWitness:
    """Maximize the top eigenvalue of cos(t) M_z + sin(t) M_x over directions.

    Scans a uniform angle grid, takes the earliest angle attaining the
    maximum (within numerical ties), and polishes it with a golden-section
    refinement. A value above one is a sound certificate that no squash
    reproduces both observables.
    """
    if grid < 8:
        raise ValueError(f"grid must be at least 8, got {grid}")
    mz, mx = m_z.matrix, m_x.matrix

    def top(theta: float) -> float:
        return _top_eigenpair(np.cos(theta) * mz + np.sin(theta) * mx)[0]

    thetas = 2.0 * np.pi * np.arange(grid) / grid
    values = np.array([top(t) for t in thetas])
    best = values.max()
    # earliest near-tie keeps the reported angle deterministic
    pick = int(np.nonzero(values >= best - 1e-9 * max(1.0, abs(best)))[0][0])
    step = 2.0 * np.pi / grid
    lo, hi = thetas[pick] - step, thetas[pick] + step
    a = hi - GOLDEN * (hi - lo)
    b = lo + GOLDEN * (hi - lo)
    fa, fb = top(a), top(b)
    while hi - lo > 1e-11:
        if fa < fb:
            lo, a, fa = a, b, fb
            b = lo + GOLDEN * (hi - lo)
            fb = top(b)
        else:
            hi, b, fb = b, a, fa
            a = hi - GOLDEN * (hi - lo)
            fa = top(a)
    theta = (lo + hi) / 2.0
    value, vector = _top_eigenpair(np.cos(theta) * mz + np.sin(theta) * mx)
    return BlochWitness(
        theta=float(theta), state=np.outer(vector, vector.conj()), value=value
    )


# ---------------------------------------------------------------------------
# Feasibility search

@dataclass(frozen=True)
class FeasibilityReport:
    verdict: str  # FEASIBLE | INFEASIBLE | UNDECIDED
    squash: SquashMap | None
    witness: BlochWitness | None
    gap: float
    iterations: int


def find_squash(
    p: povm.Bb84Povm, max_iter: int = 20000, tol: float = 1e-8
) -> FeasibilityReport:
    """Decide squash existence for a measurement set by alternating projections.

    Runs the Bloch-norm witness first; a value above 1 + 1e-9 settles the
    question as INFEASIBLE. Otherwise alternates projections between the
    affine constraint set and the PSD cone until the gap between the two
    projection iterates drops below ``tol`` (FEASIBLE, with the squash
    extracted from the converged Choi matrix and verified at 1e-6) or the
    iteration budget runs out (UNDECIDED).
    """
    m_z = p.element("z", 0) - p.element("z", 1)
    m_x = p.element("x", 0) - p.element("x", 1)
    witness = bloch_witness(
        povm.Observable("z", m_z), povm.Observable("x", m_x)
    )
    if witness.value > 1.0 + 1e-9:
        check = np.trace(
            witness.state @ (np.cos(witness.theta) * m_z + np.sin(witness.theta) * m_x)
        ).real
        if check <= 1.0 + 1e-9:
            raise RuntimeError("witness value failed its independent recomputation")
        return FeasibilityReport(
            verdict="INFEASIBLE", squash=None, witness=witness, gap=0.0, iterations=0
        )

    constraints = AffineConstraints(p.dim, m_z, m_x)
    j = constraints.project(np.eye(2 * p.dim, dtype=complex) / 2.0)
    gap = float("inf")
    for iteration in range(1, max_iter + 1):
        psd = project_psd(j)
        j = constraints.project(psd)
        gap = linalg.frob(j - psd)
        if gap <= tol:
            squash = squash_from_choi(ChoiMatrix(d=p.dim, j=j))
            report = verify_squash(squash, p, tol=1e-6)
            if not report.passed:
                raise RuntimeError(
                    "converged Choi matrix produced a map that fails verification"
                )
            return FeasibilityReport(
                verdict="FEASIBLE",
                squash=squash,
                witness=witness,
                gap=gap,
                iterations=iteration,
            )
    return FeasibilityReport(
        verdict="UNDECIDED", squash=None, witness=witness, gap=gap, iterations=max_iter
    )


def report_to_json(report: FeasibilityReport) -> dict:
    from .builder import squash_to_json

    return {
        "verdict": report.verdict,
        "gap": float(report.gap),
        "iterations": int(report.iterations),
        "witness": None
        if report.witness is None
        else {
            "theta": float(report.witness.theta),
            "value": float(report.witness.value),
            "state": linalg.matrix_to_json(report.witness.state),
        },
        "squash": None if report.squash is None else squash_to_json(report.squash),
    }
