"""Threshold-detector models on fixed photon-number sectors.

A sector fixes the photon count n_i of each propagation mode i. Its basis
enumerates the configurations (j_1, ..., j_m), where j_i counts the photons
of mode i in polarization z0 (the remaining n_i - j_i sit in z1). The
enumeration starts from the all-z0 configuration and descends
lexicographically, so the first basis vector is the state that always fires
the b=0 detector in the z basis.

The detector assigns a uniformly random bit to double clicks, which makes
the basis observables rank two: every configuration other than the two
single-click ones cancels in M(r,0) - M(r,1).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from math import comb, factorial, sqrt

import numpy as np

from . import groups, linalg, povm
from .errors import InvalidSector


@dataclass(frozen=True)
class FockSector:
    photons: tuple  # (n_1, ..., n_m)
    basis: tuple  # configurations (j_1, ..., j_m), all-z0 first

    @property
    def modes(self) -> int:
        return len(self.photons)

    @property
    def dim(self) -> int:
        return len(self.basis)

    def index(self, configuration) -> int:
        return self.basis.index(tuple(configuration))


def fock_sector(photons) -> FockSector:
    n = tuple(int(x) for x in photons)
    if len(n) < 1:
        raise InvalidSector("need at least one mode")
    if any(x < 0 for x in n):
        raise InvalidSector("photon counts must be nonnegative")
    if sum(n) < 1:
        raise InvalidSector("vacuum sector has no click statistics to model")
    ranges = [range(x, -1, -1) for x in n]
    basis = tuple(itertools.product(*ranges))
    return FockSector(photons=n, basis=basis)


def _x_mode_amplitude(n: int, j: int, b: int) -> float:
    """Weight of the j-photons-in-z0 configuration inside an n-photon x state."""
    return (
        2 ** (-n / 2.0)
        * comb(n, j)
        * (-1.0) ** (b * (n - j))
        * sqrt(factorial(j) * factorial(n - j))
        / sqrt(factorial(n))
    )


def state_nrb(sector: FockSector, r: str, b: int) -> np.ndarray:
    """The n-photon polarization state that fires only detector b of basis r."""
    if r not in ("z", "x") or b not in (0, 1):
        raise ValueError(f"bad outcome label ({r!r}, {b!r})")
    v = np.zeros(sector.dim, dtype=complex)
    if r == "z":
        target = tuple(n if b == 0 else 0 for n in sector.photons)
        v[sector.index(target)] = 1.0
        return v
    for idx, cfg in enumerate(sector.basis):
        amp = 1.0
        for n, j in zip(sector.photons, cfg):
            amp *= _x_mode_amplitude(n, j, b)
        v[idx] = amp
    return v / np.linalg.norm(v)


@dataclass(frozen=True)
class DetectorModel:
    sector: FockSector
    povm: povm.Bb84Povm
    m_z: povm.Observable
    m_x: povm.Observable
    u_n: np.ndarray
    states: dict  # label -> state vector


def build_detector(sector: FockSector) -> DetectorModel:
    """Threshold-detector POVM on a sector, double clicks randomized into b."""
    states = {
        povm.label(r, b): state_nrb(sector, r, b) for r in ("z", "x") for b in (0, 1)
    }
    eye = np.eye(sector.dim, dtype=complex)
    elements = {}
    for r in ("z", "x"):
        p0 = np.outer(states[f"{r}0"], states[f"{r}0"].conj())
        p1 = np.outer(states[f"{r}1"], states[f"{r}1"].conj())
        double = 0.5 * (eye - p0 - p1)
        elements[f"{r}0"] = p0 + double
        elements[f"{r}1"] = p1 + double
    p = povm.make_povm(elements)
    return DetectorModel(
        sector=sector,
        povm=p,
        m_z=povm.observable(p, "z"),
        m_x=povm.observable(p, "x"),
        u_n=build_u_n(sector),
        states=states,
    )


def _rotation_generator(sector: FockSector) -> np.ndarray:
    """Photon-number difference along the y polarization axis, as a matrix.

    Equals sum_i 1j*(a+_{i,z1} a_{i,z0} - a+_{i,z0} a_{i,z1}) restricted to
    the sector; a Hermitian hopping operator between adjacent configurations.
    """
    dim = sector.dim
    index = {cfg: i for i, cfg in enumerate(sector.basis)}
    g = np.zeros((dim, dim), dtype=complex)
    for cfg in sector.basis:
        col = index[cfg]
        for i, (n, j) in enumerate(zip(sector.photons, cfg)):
            if j >= 1:  # move one photon z0 -> z1
                moved = list(cfg)
                moved[i] = j - 1
                g[index[tuple(moved)], col] += 1j * sqrt(j * (n - j + 1))
            if j <= n - 1:  # move one photon z1 -> z0
                moved = list(cfg)
                moved[i] = j + 1
                g[index[tuple(moved)], col] += -1j * sqrt((j + 1) * (n - j))
    return g


def build_u_n(sector: FockSector) -> np.ndarray:
    """The 45-degree polarization rotation that cycles the detector outcomes.

    Exponentiates the y-axis photon-number difference with angle -pi/4; the
    sign is fixed by requiring that conjugation sends the z outcomes to the
    x outcomes (the opposite sign sends them to the flipped x outcomes).
    """
    gen = _rotation_generator(sector)
    return linalg.unitary_from_generator(gen, -np.pi / 4.0)


def sector_symmetry(model: DetectorModel) -> groups.C4Symmetry:
    """The four-cycle symmetry of a detector model; k follows photon parity."""
    k = 1 if sum(model.sector.photons) % 2 == 0 else 2
    return groups.C4Symmetry(u=model.u_n, k=k)


def verify_sector_symmetry(model: DetectorModel, tol: float = 1e-9) -> groups.SymmetryReport:
    """Phase-normalize the sector rotation and check the four-cycle relations."""
    sym = groups.phase_normalize(sector_symmetry(model))
    return groups.check_definition1(sym, model.povm, tol)


def enumerate_sectors(max_total: int, max_modes: int = 3) -> list:
    """All sectors with 1..max_modes modes and total photon number <= max_total."""
    out = []
    for m in range(1, max_modes + 1):
        for total in range(1, max_total + 1):
            for cfg in itertools.product(range(total + 1), repeat=m):
                if sum(cfg) == total:
                    out.append(fock_sector(cfg))
    return out


def detector_to_json(model: DetectorModel) -> dict:
    return {
        "N": [int(n) for n in model.sector.photons],
        "dim": int(model.sector.dim),
        "povm": povm.povm_to_json(model.povm),
        "U_N": linalg.matrix_to_json(model.u_n),
        "states": {
            key: linalg.vector_to_json(vec) for key, vec in sorted(model.states.items())
        },
    }
