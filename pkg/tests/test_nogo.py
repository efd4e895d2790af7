import numpy as np
import pytest

from squashkit import builder, finder, fock, groups, linalg, nogo, povm
from squashkit.errors import DimensionMismatch, TildeNotVerified


def c4_setup(p):
    return nogo.symmetrize(p, groups.cyclic_group(4), groups.canonical_c4_action())


def qubit_frame_unitary(shift: int) -> np.ndarray:
    """Output rotation matching a cyclic relabeling of the four outcomes."""
    return linalg.unitary_from_generator(linalg.PAULI_Y, shift * np.pi / 4.0)


def blockwise_tilde_squash(s: nogo.SymmetrizedPovm, base: builder.SquashMap) -> builder.SquashMap:
    """Assemble a squash for the symmetrized set from a base squash, block by
    block: ancilla position g routes through the base map followed by the
    qubit rotation matching the relabeling of g's inverse. Only available
    when every label permutation is a power of the four-cycle."""
    n = s.group.order
    d = s.base.dim
    kraus = []
    for g in range(n):
        perm = s.action.perms[s.group.inverse(g)]
        shift = perm[0]
        assert np.array_equal(perm, (np.arange(4) + shift) % 4), "not a cyclic shift"
        w = qubit_frame_unitary(int(shift))
        for f in base.kraus:
            k = np.zeros((2, d * n), dtype=complex)
            k[:, [i * n + g for i in range(d)]] = w @ f
            kraus.append(k)
    return builder.SquashMap(in_dim=d * n, kraus=tuple(kraus))


def test_trivial_group_symmetrization_is_identity():
    p = povm.ideal_qubit_povm()
    s = nogo.symmetrize(p, groups.cyclic_group(1), groups.make_action([[0, 1, 2, 3]]))
    assert s.tilde.dim == p.dim
    for key in povm.LABELS:
        assert np.array_equal(s.tilde.elements[key], p.elements[key])


def test_m0_symmetrization():
    s = c4_setup(nogo.counterexample_m0())
    assert s.tilde.dim == 8
    assert povm.validate(s.tilde).passed
    report = groups.check_definition2(s.rep, s.action, s.tilde)
    assert report.passed and report.max_residual <= 1e-9


def test_ideal_with_basis_swap():
    p = povm.ideal_qubit_povm()
    s = nogo.symmetrize(p, groups.cyclic_group(2), groups.c2_basis_swap_action())
    assert s.tilde.dim == 4
    report = groups.check_definition2(s.rep, s.action, s.tilde)
    assert report.passed


def test_blocks_are_bit_exact_copies():
    p = fock.build_detector(fock.fock_sector((2,))).povm
    s = c4_setup(p)
    n = s.group.order
    for c in range(4):
        for g in range(n):
            rows = [i * n + g for i in range(p.dim)]
            block = s.tilde.l_element(c)[np.ix_(rows, rows)]
            source = p.l_element(s.action.apply(s.group.inverse(g), c))
            assert np.array_equal(block, source)


def test_trace_identity_m0():
    s = c4_setup(nogo.counterexample_m0())
    report = nogo.verify_trace_identity(s, samples=100)
    assert report.max_deviation <= 1e-10


def test_trace_identity_two_photon():
    s = c4_setup(fock.build_detector(fock.fock_sector((2,))).povm)
    report = nogo.verify_trace_identity(s, samples=100)
    assert report.max_deviation <= 1e-10


def test_pullback_through_trivial_group():
    p = povm.ideal_qubit_povm()
    s = nogo.symmetrize(p, groups.cyclic_group(1), groups.make_action([[0, 1, 2, 3]]))
    f = builder.SquashMap(in_dim=2, kraus=(np.eye(2, dtype=complex),))
    pulled = nogo.pullback_squash(s, f)
    rng = np.random.default_rng(3)
    for _ in range(5):
        rho = linalg.random_density_matrix(2, rng)
        assert linalg.frob(pulled.apply(rho) - f.apply(rho)) <= 1e-12


def test_pullback_of_blockwise_squash():
    model = fock.build_detector(fock.fock_sector((2,)))
    base = builder.construct_theorem1(model.povm, fock.sector_symmetry(model))
    s = c4_setup(model.povm)
    tilde_squash = blockwise_tilde_squash(s, base)
    tilde_report = builder.verify_squash(tilde_squash, s.tilde, tol=1e-8)
    assert tilde_report.passed
    pulled = nogo.pullback_squash(s, tilde_squash, tol=1e-8)
    report = builder.verify_squash(pulled, model.povm, tol=1e-8)
    assert report.passed
    # pulling back cannot worsen the residuals
    assert report.max_residual <= tilde_report.max_residual + 1e-10


def test_pullback_of_found_squash():
    model = fock.build_detector(fock.fock_sector((1,)))
    s = c4_setup(model.povm)
    found = finder.find_squash(s.tilde)
    assert found.verdict == "FEASIBLE"
    pulled = nogo.pullback_squash(s, found.squash, tol=1e-6)
    assert builder.verify_squash(pulled, model.povm, tol=1e-6).passed


def test_pullback_rejects_unverified_map():
    s = c4_setup(nogo.counterexample_m0())
    constant = builder.complete_trace_preserving([], s.tilde.dim)
    with pytest.raises(TildeNotVerified):
        nogo.pullback_squash(s, constant)


def test_counterexample_observables():
    m0 = nogo.counterexample_m0()
    assert povm.validate(m0).passed
    assert np.allclose(povm.observable(m0, "z").matrix, linalg.PAULI_Z)
    assert np.allclose(povm.observable(m0, "x").matrix, linalg.PAULI_Z)


def test_attack_on_m0_is_invisible():
    result = nogo.bbm92_attack(nogo.counterexample_m0(), trials=10000, seed=7)
    assert result.qber == 0.0
    assert result.eve_accuracy == 1.0
    assert result.analytic_qber == pytest.approx(0.0, abs=1e-12)
    assert result.analytic_eve_accuracy == pytest.approx(1.0, abs=1e-12)


def test_attack_on_ideal_set():
    result = nogo.bbm92_attack(povm.ideal_qubit_povm(), trials=2000, seed=11)
    assert result.qber == 0.0
    assert result.eve_accuracy == 1.0


def test_attack_zero_trials_degenerate():
    result = nogo.bbm92_attack(nogo.counterexample_m0(), trials=0, seed=0)
    assert result.qber == 0.0
    assert result.eve_accuracy == 1.0
    assert result.degenerate


def test_attack_requires_qubit_povm():
    p = fock.build_detector(fock.fock_sector((2,))).povm
    with pytest.raises(DimensionMismatch):
        nogo.bbm92_attack(p, trials=10, seed=0)


def test_attack_is_seed_reproducible():
    noisy = povm.make_povm(
        {
            "z0": np.diag([0.9, 0.2]).astype(complex),
            "z1": np.diag([0.1, 0.8]).astype(complex),
            "x0": np.eye(2, dtype=complex) / 2,
            "x1": np.eye(2, dtype=complex) / 2,
        }
    )
    first = nogo.bbm92_attack(noisy, trials=5000, seed=42)
    second = nogo.bbm92_attack(noisy, trials=5000, seed=42)
    assert first == second
    assert 0.0 < first.qber < 1.0


def test_symmetrize_then_find_then_pull_back():
    # the reduction: a squash for the symmetrized set yields one for the base
    model = fock.build_detector(fock.fock_sector((1,)))
    s = nogo.symmetrize(model.povm, groups.cyclic_group(2), groups.c2_basis_swap_action())
    found = finder.find_squash(s.tilde)
    if found.verdict == "FEASIBLE":
        pulled = nogo.pullback_squash(s, found.squash, tol=1e-6)
        assert builder.verify_squash(pulled, model.povm, tol=1e-6).passed
    else:
        assert found.verdict == "UNDECIDED"


def test_attack_json_shape():
    blob = nogo.attack_to_json(nogo.bbm92_attack(nogo.counterexample_m0(), 100, seed=1))
    assert blob["qber"] == 0.0
    assert blob["analytic"] == {"qber": 0.0, "eve_accuracy": 1.0}
    assert blob["degenerate"] is False
