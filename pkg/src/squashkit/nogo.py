"""Group symmetrization, squash pullback, and the zero-error attack demo.

Any measurement set can be made symmetric under a finite group by adjoining
an ancilla register that remembers which group element acted: the block at
ancilla position g carries the elements relabeled by g^-1, and conjugation
by identity x (regular representation) permutes the blocks. Measuring the
symmetrized set on rho x |e><e| reproduces the original statistics exactly,
so a squash for the symmetrized set pulls back to one for the original.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import groups, linalg, povm
from .builder import SquashMap, verify_squash
from .errors import DimensionMismatch, TildeNotVerified


@dataclass(frozen=True)
class SymmetrizedPovm:
    base: povm.Bb84Povm
    group: groups.FiniteGroup
    action: groups.LabelAction
    tilde: povm.Bb84Povm
    rep: dict  # g -> identity x R(g)


def symmetrize(
    p: povm.Bb84Povm, group: groups.FiniteGroup, action: groups.LabelAction
) -> SymmetrizedPovm:
    """Adjoin a group register so that the action becomes an exact symmetry."""
    groups.validate_action(group, action)
    n = group.order
    elements = {}
    for c, key in enumerate(povm.LABELS):
        total = np.zeros((p.dim * n, p.dim * n), dtype=complex)
        for g in range(n):
            marker = np.zeros((n, n), dtype=complex)
            marker[g, g] = 1.0
            source = p.l_element(action.apply(group.inverse(g), c))
            total += linalg.kron(source, marker)
        elements[key] = total
    tilde = povm.make_povm(elements)
    regular = groups.regular_representation(group)
    eye = np.eye(p.dim, dtype=complex)
    rep = {g: linalg.kron(eye, regular[g]) for g in range(n)}
    if not povm.validate(tilde).passed:
        raise DimensionMismatch("symmetrized set fails POVM validation")
    report = groups.check_definition2(rep, action, tilde, tol=1e-9)
    if not report.passed:
        raise DimensionMismatch(
            f"symmetrized set is not group-symmetric, residual {report.max_residual}"
        )
    return SymmetrizedPovm(base=p, group=group, action=action, tilde=tilde, rep=rep)


@dataclass(frozen=True)
class TraceIdentityReport:
    samples: int
    max_deviation: float


def verify_trace_identity(
    s: SymmetrizedPovm, samples: int = 100, seed: int = 97
) -> TraceIdentityReport:
    """Statistics on rho match statistics of the symmetrized set on rho x |e><e|."""
    rng = np.random.default_rng(seed)
    e = s.group.identity
    ancilla = np.zeros((s.group.order, s.group.order), dtype=complex)
    ancilla[e, e] = 1.0
    worst = 0.0
    for _ in range(samples):
        rho = linalg.random_density_matrix(s.base.dim, rng)
        lifted = linalg.kron(rho, ancilla)
        for r in ("z", "x"):
            m = s.base.element(r, 0) - s.base.element(r, 1)
            mt = s.tilde.element(r, 0) - s.tilde.element(r, 1)
            dev = abs(np.trace(m @ rho).real - np.trace(mt @ lifted).real)
            worst = max(worst, dev)
    return TraceIdentityReport(samples=samples, max_deviation=worst)


def pullback_squash(
    s: SymmetrizedPovm, f_tilde: SquashMap, tol: float = 1e-8
) -> SquashMap:
    """Restrict a squash of the symmetrized set to the identity-element block."""
    report = verify_squash(f_tilde, s.tilde, tol)
    if not report.passed:
        raise TildeNotVerified(
            f"map fails verification against the symmetrized set at tol={tol}"
        )
    n = s.group.order
    cols = [i * n + s.group.identity for i in range(s.base.dim)]
    kraus = tuple(f[:, cols] for f in f_tilde.kraus)
    return SquashMap(in_dim=s.base.dim, kraus=kraus)


def counterexample_m0() -> povm.Bb84Povm:
    """The qubit set whose z and x measurements are both sigma_z."""
    eye = np.eye(2, dtype=complex)
    plus = (eye + linalg.PAULI_Z) / 2
    minus = (eye - linalg.PAULI_Z) / 2
    return povm.make_povm({"z0": plus, "z1": minus, "x0": plus, "x1": minus})


@dataclass(frozen=True)
class AttackResult:
    qber: float
    eve_accuracy: float
    trials: int
    analytic_qber: float
    analytic_eve_accuracy: float

    @property
    def degenerate(self) -> bool:
        return self.trials == 0


def bbm92_attack(p: povm.Bb84Povm, trials: int, seed: int = 0) -> AttackResult:
    """Entangled-pair protocol with Eve as the source, sending |b>|b> pairs.

    Alice measures the ideal qubit set, Bob measures ``p``; only z-basis
    rounds are kept. Eve picks each round's bit, so her accuracy is the
    fraction of rounds where the sifted key equals her choice.
    """
    if p.dim != 2:
        raise DimensionMismatch(f"attack needs a qubit POVM, got dim {p.dim}")
    alice = povm.ideal_qubit_povm()
    basis_states = [np.diag([1.0, 0.0]).astype(complex), np.diag([0.0, 1.0]).astype(complex)]
    p_alice0 = [povm.outcome_probability(rho, alice, "z", 0) for rho in basis_states]
    p_bob0 = [povm.outcome_probability(rho, p, "z", 0) for rho in basis_states]

    analytic_qber = 0.5 * sum(
        p_alice0[b] * (1.0 - p_bob0[b]) + (1.0 - p_alice0[b]) * p_bob0[b]
        for b in (0, 1)
    )
    analytic_eve = 0.5 * (p_alice0[0] + (1.0 - p_alice0[1]))

    rng = np.random.default_rng(seed)
    errors = 0
    eve_hits = 0
    for _ in range(trials):
        b = int(rng.integers(0, 2))
        a_out = 0 if rng.random() < p_alice0[b] else 1
        b_out = 0 if rng.random() < p_bob0[b] else 1
        if a_out != b_out:
            errors += 1
        if a_out == b:
            eve_hits += 1
    if trials == 0:
        qber, eve_accuracy = 0.0, 1.0
    else:
        qber = errors / trials
        eve_accuracy = eve_hits / trials
    return AttackResult(
        qber=qber,
        eve_accuracy=eve_accuracy,
        trials=trials,
        analytic_qber=float(analytic_qber),
        analytic_eve_accuracy=float(analytic_eve),
    )


def attack_to_json(result: AttackResult) -> dict:
    return {
        "qber": result.qber,
        "eve_accuracy": result.eve_accuracy,
        "trials": result.trials,
        "analytic": {
            "qber": result.analytic_qber,
            "eve_accuracy": result.analytic_eve_accuracy,
        },
        "degenerate": result.degenerate,
    }
