"""Shared oracles and fixtures for the test suite."""

from __future__ import annotations

import itertools
from math import factorial, sqrt

import numpy as np

from squashkit import fock


def ladder_state_oracle(photons, r: str, b: int) -> np.ndarray:
    """Single-click state built from truncated creation-operator matrices.

    Constructs the full two-polarization Fock space of every mode (each slot
    truncated at its mode's photon count), applies the product of creation
    operators for basis r and bit b to the vacuum, normalizes, and reads the
    amplitudes back off in the sector's configuration ordering. Slow but
    entirely independent of the closed-form amplitudes under test.
    """
    n = tuple(photons)
    slot_dims = []
    for ni in n:
        slot_dims.extend([ni + 1, ni + 1])  # z0 and z1 occupation per mode
    total_dim = int(np.prod(slot_dims))

    def creation(dim):
        a = np.zeros((dim, dim), dtype=complex)
        for k in range(dim - 1):
            a[k + 1, k] = sqrt(k + 1)
        return a

    def embed(op, slot):
        mats = [np.eye(d, dtype=complex) for d in slot_dims]
        mats[slot] = op
        out = mats[0]
        for m in mats[1:]:
            out = np.kron(out, m)
        return out

    vac = np.zeros(total_dim, dtype=complex)
    vac[0] = 1.0
    state = vac
    for i, ni in enumerate(n):
        a_z0 = embed(creation(slot_dims[2 * i]), 2 * i)
        a_z1 = embed(creation(slot_dims[2 * i + 1]), 2 * i + 1)
        if r == "z":
            op = a_z0 if b == 0 else a_z1
        else:
            op = (a_z0 + (-1) ** b * a_z1) / sqrt(2)
        for _ in range(ni):
            state = op @ state
    state = state / np.linalg.norm(state)

    # read off amplitudes at the sector's configurations
    sector = fock.fock_sector(n)
    strides = np.cumprod([1] + slot_dims[::-1][:-1])[::-1]
    out = np.zeros(sector.dim, dtype=complex)
    for idx, cfg in enumerate(sector.basis):
        occupations = []
        for ni, j in zip(n, cfg):
            occupations.extend([j, ni - j])
        flat = int(sum(o * s for o, s in zip(occupations, strides)))
        out[idx] = state[flat]
    # everything outside the sector must be vacuum-padded zeros
    assert abs(np.linalg.norm(out) - 1.0) < 1e-12
    return out


def single_mode_sectors(max_n: int = 6):
    return [fock.fock_sector((n,)) for n in range(1, max_n + 1)]


def multi_mode_sectors(max_total: int = 4, modes=(2, 3)):
    out = []
    for m in modes:
        for total in range(1, max_total + 1):
            for cfg in itertools.product(range(total + 1), repeat=m):
                if sum(cfg) == total:
                    out.append(fock.fock_sector(cfg))
    return out


def acceptance_sectors():
    """Single-mode photon numbers 1..6 plus all 2- and 3-mode sectors up to 4."""
    return single_mode_sectors(6) + multi_mode_sectors(4)


def random_hermitian(dim: int, rng: np.random.Generator) -> np.ndarray:
    x = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    return (x + x.conj().T) / 2
