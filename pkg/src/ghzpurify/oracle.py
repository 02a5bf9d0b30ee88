"""Brute-force density-matrix verifier for the ensemble engine.

Everything here works on dense operators over the full joint space, one
4-dimensional factor per photon (2 polarization x 2 spatial/port labels),
basis ordered lexicographically photon by photon. The network unitary is
assembled from the individual optical elements (splitter, wave plates,
displacers) as matrix stages, deliberately not from the routing table the
engine uses, so the two implementations share no construction path.

Capacity is capped at 5 photons (dimension 1024); this module exists for
cross-validation, not performance.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from .protocol import (
    AcceptanceRule,
    Correction,
    CorrectionPlan,
    IDENTITY_CORRECTION,
    Pattern,
    all_patterns,
    phaseflip_plan,
)
from .states import Ensemble, PureState, make_ghz_pol

ORACLE_MAX_PHOTONS = 5

_H2 = np.array([[1.0, 1.0], [1.0, -1.0]]) / np.sqrt(2.0)
_X2 = np.array([[0.0, 1.0], [1.0, 0.0]])
_I2 = np.eye(2)


def _check_capacity(m: int) -> None:
    if m > ORACLE_MAX_PHOTONS:
        raise ValueError(f"oracle capacity is m <= {ORACLE_MAX_PHOTONS} photons, got m={m}")


def state_vector(state: PureState) -> np.ndarray:
    """Embed a PureState in the dense basis (photon-major, bits big-endian)."""
    width = len(state.dofs)
    local_dim = 2**width
    vec = np.zeros(local_dim**state.m, dtype=complex)
    for label, amp in state.terms.items():
        idx = 0
        for photon in label:
            local = 0
            for b in photon:
                local = 2 * local + b
            idx = idx * local_dim + local
        vec[idx] = amp
    return vec


def densify(ensemble: Ensemble) -> np.ndarray:
    """Density operator sum_k p_k |k><k| of an ensemble."""
    _check_capacity(ensemble.m)
    vectors = [(p, state_vector(s)) for p, s in ensemble.members]
    dim = vectors[0][1].shape[0]
    rho = np.zeros((dim, dim), dtype=complex)
    for p, v in vectors:
        rho += p * np.outer(v, v.conj())
    return rho


def _single_photon_network() -> np.ndarray:
    """One party's gate as chained element matrices on (pol, rail) spaces.

    Rails 0..3 hold, in order: transmitted-from-rail-1, reflected-from-rail-1,
    transmitted-from-rail-2, reflected-from-rail-2.
    """
    # splitter: H transmits, V reflects; isometry from 4 inputs to 8 rail slots
    splitter = np.zeros((8, 4))
    rail_of = {(0, 0): 0, (1, 0): 1, (0, 1): 2, (1, 1): 3}
    for pol in (0, 1):
        for mode in (0, 1):
            rail = rail_of[(pol, mode)]
            splitter[2 * rail + pol, 2 * pol + mode] = 1.0
    # half-wave plates at 45deg on the rails feeding the keep-side displacer
    plates = np.eye(8)
    for rail in (0, 3):
        plates[2 * rail : 2 * rail + 2, 2 * rail : 2 * rail + 2] = _X2
    # displacers: each admits one V rail and one H rail into one port
    merge = np.zeros((4, 8))
    merge[2 * 1 + 0, 2 * 0 + 1] = 1.0  # V on rail 0 -> (V, keep)
    merge[2 * 0 + 0, 2 * 3 + 0] = 1.0  # H on rail 3 -> (H, keep)
    merge[2 * 1 + 1, 2 * 1 + 1] = 1.0  # V on rail 1 -> (V, swap)
    merge[2 * 0 + 1, 2 * 2 + 0] = 1.0  # H on rail 2 -> (H, swap)
    net = merge @ plates @ splitter
    if not _is_permutation(net):
        raise AssertionError("element chain did not compose to a permutation")
    return net


def _is_permutation(mat: np.ndarray) -> bool:
    binary = np.isclose(mat, 0.0) | np.isclose(mat, 1.0)
    return bool(
        binary.all()
        and (np.abs(mat).sum(axis=0) == 1).all()
        and (np.abs(mat).sum(axis=1) == 1).all()
    )


def _kron_power(single: np.ndarray, m: int) -> np.ndarray:
    out = single
    for _ in range(m - 1):
        out = np.kron(out, single)
    return out


def network_unitary(m: int) -> np.ndarray:
    """Full-network permutation unitary on the 4^m joint space."""
    _check_capacity(m)
    return _kron_power(_single_photon_network(), m)


def hadamard_both_unitary(m: int) -> np.ndarray:
    """Hadamard on every photon's polarization and spatial bits."""
    _check_capacity(m)
    return _kron_power(np.kron(_H2, _H2), m)


def _pattern_indices(m: int, pattern: Pattern) -> np.ndarray:
    """Joint-basis indices whose port bits equal the pattern, ordered by pol bits."""
    idx = []
    for pol_bits in itertools.product((0, 1), repeat=m):
        g = 0
        for p, r in zip(pol_bits, pattern):
            g = 4 * g + 2 * p + r
        idx.append(g)
    return np.array(idx)


def _correction_unitary(m: int, corr: Correction) -> np.ndarray:
    factors = [_X2 if k in corr.flips else _I2 for k in range(m)]
    mat = factors[0]
    for f in factors[1:]:
        mat = np.kron(mat, f)
    if corr.hadamard:
        mat = _kron_power(_H2, m) @ mat
    return mat


@dataclass(frozen=True)
class OracleResult:
    """Same success/fidelity semantics as ProtocolResult, computed densely."""

    success_probability: float
    rejected_probability: float
    output_fidelity: float
    pattern_table: dict[Pattern, tuple[float, float]]


def oracle_run(
    dense: np.ndarray,
    m: int,
    rule: AcceptanceRule,
    corrections: CorrectionPlan | None = None,
    target: PureState | None = None,
) -> OracleResult:
    """Run a protocol mode on a dense joint-state density operator.

    Conjugates by the Hadamard layers (phase-flip mode) and the network
    unitary, projects onto each port pattern, applies the pattern's
    correction, and scores fidelity against the polarization target.
    """
    _check_capacity(m)
    dim = 4**m
    if dense.shape != (dim, dim):
        raise ValueError(f"expected a {dim}x{dim} operator for m={m}, got {dense.shape}")
    if target is None:
        target = make_ghz_pol(m, 0, +1)
    tvec = state_vector(target)

    rho = dense
    if rule.mode == "phaseflip":
        layer = hadamard_both_unitary(m)
        rho = layer @ rho @ layer.conj().T
        if corrections is None:
            corrections = phaseflip_plan(m)
    if corrections is None:
        corrections = {}

    U = network_unitary(m)
    rho = U @ rho @ U.conj().T

    table: dict[Pattern, tuple[float, float]] = {}
    success = 0.0
    fidelity_mass = 0.0
    for pattern in all_patterns(m):
        if not rule.accepts(pattern):
            continue
        idx = _pattern_indices(m, pattern)
        block = rho[np.ix_(idx, idx)]
        prob = max(float(np.trace(block).real), 0.0)
        if prob < 1e-15:
            continue
        cmat = _correction_unitary(m, corrections.get(pattern, IDENTITY_CORRECTION))
        corrected = cmat @ block @ cmat.conj().T
        fid = float(np.real(tvec.conj() @ corrected @ tvec)) / prob
        table[pattern] = (prob, fid)
        success += prob
        fidelity_mass += prob * fid

    if success <= 0.0:
        raise ValueError("no accepted port pattern carries probability; fidelity undefined")
    return OracleResult(
        success_probability=success,
        rejected_probability=1.0 - success,
        output_fidelity=fidelity_mass / success,
        pattern_table=table,
    )
