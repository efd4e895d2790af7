import numpy as np
import pytest

from squashkit import fock, groups, linalg, povm
from squashkit.errors import InvalidAction, InvalidGroup, KNotOne, NotUnitary


def test_cyclic_group_structure():
    g = groups.cyclic_group(4)
    assert g.order == 4 and g.identity == 0
    assert g.mult(3, 2) == 1
    assert g.inverse(3) == 1


def test_s3_structure():
    g = groups.symmetric_group_s3()
    assert g.order == 6
    for a in range(6):
        assert g.mult(a, g.inverse(a)) == g.identity


def test_rejects_non_latin_table():
    with pytest.raises(InvalidGroup):
        groups.make_group([[0, 0], [1, 1]])


def test_rejects_non_associative_quasigroup():
    # subtraction mod 5 is a Latin square but not associative
    table = [[(a - b) % 5 for b in range(5)] for a in range(5)]
    with pytest.raises(InvalidGroup):
        groups.make_group(table)


def test_action_must_be_homomorphism():
    g = groups.cyclic_group(4)
    bad = groups.make_action(
        [[0, 1, 2, 3], [1, 2, 3, 0], [0, 1, 2, 3], [1, 2, 3, 0]]
    )
    with pytest.raises(InvalidAction):
        groups.validate_action(g, bad)
    groups.validate_action(g, groups.canonical_c4_action())
    groups.validate_action(groups.cyclic_group(2), groups.c2_basis_swap_action())


def test_regular_representation_c2():
    reps = groups.regular_representation(groups.cyclic_group(2))
    assert np.array_equal(reps[1], np.array([[0, 1], [1, 0]], dtype=complex))


def test_regular_representation_c4_generator():
    reps = groups.regular_representation(groups.cyclic_group(4))
    shift = np.zeros((4, 4), dtype=complex)
    for h in range(4):
        shift[(h + 1) % 4, h] = 1.0
    assert np.array_equal(reps[1], shift)


def test_regular_representation_s3_homomorphism():
    g = groups.symmetric_group_s3()
    reps = groups.regular_representation(g)
    assert np.array_equal(reps[g.identity], np.eye(6, dtype=complex))
    for a in range(6):
        # exact 0/1 permutation matrices, no floating error tolerated
        assert set(np.unique(reps[a].real)) <= {0.0, 1.0}
        assert np.all(reps[a].imag == 0.0)
        for b in range(6):
            assert np.array_equal(reps[a] @ reps[b], reps[g.mult(a, b)])


def test_c4_symmetry_validation():
    with pytest.raises(NotUnitary):
        groups.C4Symmetry(u=np.diag([1.0, 2.0]).astype(complex), k=1)
    with pytest.raises(NotUnitary):
        # unitary but of order eight, so k=1 is wrong
        groups.C4Symmetry(u=linalg.unitary_from_generator(linalg.PAULI_Y, np.pi / 4), k=1)
    groups.C4Symmetry(u=linalg.unitary_from_generator(linalg.PAULI_Y, np.pi / 4), k=2)


def uniform_povm():
    half = np.eye(2, dtype=complex) / 2
    return povm.make_povm({key: half for key in povm.LABELS})


def test_definition1_uniform_set_trivial_unitary():
    sym = groups.C4Symmetry(u=np.eye(2, dtype=complex), k=1)
    report = groups.check_definition1(sym, uniform_povm())
    assert report.passed and report.max_residual <= 1e-12


def test_definition1_ideal_set_with_quarter_rotation():
    u = linalg.unitary_from_generator(linalg.PAULI_Y, -np.pi / 4)
    sym = groups.C4Symmetry(u=u, k=2)
    report = groups.check_definition1(sym, povm.ideal_qubit_povm())
    assert report.passed, report.residuals


def random_order_eight_unitary(rng):
    h = rng.standard_normal((2, 2)) + 1j * rng.standard_normal((2, 2))
    basis = linalg.hermitian_eig((h + h.conj().T) / 2).eigenvectors
    phases = np.exp(1j * np.pi / 4 * rng.integers(0, 8, size=2))
    return (basis * phases) @ linalg.dagger(basis)


def test_definition1_m0_fails_for_every_candidate():
    # the twin-observable set: no unitary can both fix the elements under
    # conjugation (z to x relation) and flip them (double rotation)
    from squashkit.nogo import counterexample_m0

    m0 = counterexample_m0()
    rng = np.random.default_rng(99)
    candidates = [np.eye(2, dtype=complex), linalg.unitary_from_generator(linalg.PAULI_Y, -np.pi / 4)]
    for theta in (np.pi / 4, np.pi / 2, 3 * np.pi / 4, np.pi):
        for pauli in (linalg.PAULI_X, linalg.PAULI_Y, linalg.PAULI_Z):
            candidates.append(linalg.unitary_from_generator(pauli, theta))
    for _ in range(50):
        candidates.append(random_order_eight_unitary(rng))
    for u in candidates:
        report = groups.check_definition1(groups.C4Symmetry(u=u, k=2), m0)
        assert not report.passed
        assert report.max_residual >= 0.5


def test_phase_normalize_fixed_point():
    u = np.diag([1.0, 1.0j, -1.0, -1.0j]).astype(complex)
    sym = groups.phase_normalize(groups.C4Symmetry(u=u, k=1))
    assert sym.k == 1
    assert np.allclose(sym.u, u, atol=1e-12)


def test_phase_normalize_eighth_root():
    u = linalg.unitary_from_generator(linalg.PAULI_Y, np.pi / 4)
    sym = groups.phase_normalize(groups.C4Symmetry(u=u, k=2))
    assert sym.k == 1
    assert linalg.frob(np.linalg.matrix_power(sym.u, 4) - np.eye(2)) <= 1e-10


def test_phase_normalize_odd_sector_rotation():
    model = fock.build_detector(fock.fock_sector((3,)))
    u4 = np.linalg.matrix_power(model.u_n, 4)
    assert linalg.frob(u4 + np.eye(4)) <= 1e-8
    sym = groups.phase_normalize(groups.C4Symmetry(u=model.u_n, k=2))
    assert sym.k == 1
    assert linalg.frob(np.linalg.matrix_power(sym.u, 4) - np.eye(4)) <= 1e-8


def test_phase_normalize_leaves_residuals_alone():
    model = fock.build_detector(fock.fock_sector((3,)))
    before = groups.check_definition1(groups.C4Symmetry(u=model.u_n, k=2), model.povm)
    after = groups.check_definition1(
        groups.phase_normalize(groups.C4Symmetry(u=model.u_n, k=2)), model.povm
    )
    for key in before.residuals:
        assert abs(before.residuals[key] - after.residuals[key]) <= 1e-12


def test_phase_normalize_keeps_non_scalar_fourth_power():
    u = np.diag([1.0, np.exp(1j * np.pi / 8)]).astype(complex)  # u^4 not scalar
    sym = groups.C4Symmetry(u=u, k=4)
    assert groups.phase_normalize(sym) is sym


def test_eigenprojectors_identity():
    projectors = groups.c4_eigenprojectors(groups.C4Symmetry(u=np.eye(3, dtype=complex), k=1))
    assert np.allclose(projectors[0], np.eye(3))
    for c in (1, 2, 3):
        assert np.allclose(projectors[c], 0.0, atol=1e-12)


def test_eigenprojectors_diagonal():
    u = np.diag([1.0, 1.0j, -1.0, -1.0j]).astype(complex)
    projectors = groups.c4_eigenprojectors(groups.C4Symmetry(u=u, k=1))
    for c in range(4):
        expected = np.zeros((4, 4), dtype=complex)
        expected[c, c] = 1.0
        assert np.allclose(projectors[c], expected, atol=1e-12)


def test_eigenprojector_identities_random_unitary():
    rng = np.random.default_rng(31)
    h = rng.standard_normal((6, 6)) + 1j * rng.standard_normal((6, 6))
    basis = linalg.hermitian_eig((h + h.conj().T) / 2).eigenvectors
    phases = np.array([1, 1j, -1, -1j, 1j, -1])
    u = (basis * phases) @ linalg.dagger(basis)
    projectors = groups.c4_eigenprojectors(groups.C4Symmetry(u=u, k=1))
    total = sum(projectors)
    assert linalg.frob(total - np.eye(6)) <= 1e-9
    for c in range(4):
        assert linalg.frob(projectors[c] @ projectors[c] - projectors[c]) <= 1e-9
        assert linalg.frob(u @ projectors[c] - (1j**c) * projectors[c]) <= 1e-9
        for cc in range(c + 1, 4):
            assert linalg.frob(projectors[c] @ projectors[cc]) <= 1e-9


def test_eigenprojectors_need_order_four():
    u = linalg.unitary_from_generator(linalg.PAULI_Y, np.pi / 4)  # order eight
    with pytest.raises(KNotOne):
        groups.c4_eigenprojectors(groups.C4Symmetry(u=u, k=2))


def test_definition2_trivial_group():
    g = groups.cyclic_group(1)
    action = groups.make_action([[0, 1, 2, 3]])
    rep = {0: np.eye(2, dtype=complex)}
    report = groups.check_definition2(rep, action, povm.ideal_qubit_povm())
    assert report.passed


def test_definition2_identity_rep_cannot_permute():
    g = groups.cyclic_group(4)
    action = groups.canonical_c4_action()
    rep = {gg: np.eye(2, dtype=complex) for gg in range(4)}
    report = groups.check_definition2(rep, action, povm.ideal_qubit_povm())
    assert not report.passed


def test_group_json_round_trip():
    g = groups.symmetric_group_s3()
    back = groups.group_from_json(groups.group_to_json(g))
    assert np.array_equal(back.cayley, g.cayley)


def test_action_json_round_trip():
    a = groups.canonical_c4_action()
    back = groups.action_from_json(groups.action_to_json(a))
    assert np.array_equal(back.perms, a.perms)
