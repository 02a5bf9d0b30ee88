"""Purification protocol runs: post-selection on detector ports, corrections, fidelity.

Pipeline for every mode: (optional Hadamard layers) -> purification gate on
each photon -> group the outgoing amplitudes by detector-port pattern ->
keep the accepted patterns -> apply the pattern's correction -> report the
polarization mixture, its fidelity against the target GHZ state, and the
total accepted probability.

Port patterns are tuples with one bit per photon, 0 = KEEP group, 1 = SWAP
group. Bit-flip mode accepts the two unanimous patterns; phase-flip mode
accepts every pattern with an even number of SWAP photons; general mode
accepts everything and relies on per-pattern corrections.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from types import MappingProxyType
from typing import Mapping, Sequence

from .optics import GateTable, apply_network, bit_flip_pol, hadamard_pol, hadamard_spatial
from .states import (
    POL,
    SPATIAL,
    Ensemble,
    Label,
    PureState,
    complement,
    fidelity,
    make_ghz_pol,
)

Pattern = tuple[int, ...]


def all_patterns(m: int) -> list[Pattern]:
    return [tuple(bits) for bits in itertools.product((0, 1), repeat=m)]


def swap_count(pattern: Pattern) -> int:
    return sum(pattern)


@dataclass(frozen=True)
class AcceptanceRule:
    """Which port patterns count as success for a protocol mode."""

    mode: str

    _MODES = ("bitflip", "phaseflip", "general")

    def __post_init__(self):
        if self.mode not in self._MODES:
            raise ValueError(f"unknown acceptance mode {self.mode!r}")

    def accepts(self, pattern: Pattern) -> bool:
        count = swap_count(pattern)
        if self.mode == "bitflip":
            return count == 0 or count == len(pattern)
        if self.mode == "phaseflip":
            return count % 2 == 0
        return True


@dataclass(frozen=True)
class Correction:
    """Deterministic fix-up applied to a pattern's polarization state.

    Bit flips come first (0-based photon indices), then an optional
    Hadamard on every photon.
    """

    flips: frozenset[int] = frozenset()
    hadamard: bool = False

    def apply(self, state: PureState) -> PureState:
        out = bit_flip_pol(state, self.flips) if self.flips else state
        return hadamard_pol(out) if self.hadamard else out


IDENTITY_CORRECTION = Correction()

CorrectionPlan = Mapping[Pattern, Correction]


def phaseflip_plan(m: int) -> dict[Pattern, Correction]:
    """Flip every photon, then Hadamard every photon, on each accepted pattern."""
    everything = frozenset(range(m))
    return {
        pat: Correction(flips=everything, hadamard=True)
        for pat in all_patterns(m)
        if swap_count(pat) % 2 == 0
    }


def minority_flip_plan(m: int) -> dict[Pattern, Correction]:
    """Flip the polarization of whichever port group holds fewer photons.

    On a tie (even m, half the photons in each group) the KEEP group is
    flipped; the alternative differs by a full complement, which fixes any
    GHZ state up to global phase.
    """
    plan: dict[Pattern, Correction] = {}
    for pat in all_patterns(m):
        swap_group = frozenset(i for i, b in enumerate(pat) if b)
        flips = swap_group if 2 * len(swap_group) < m else frozenset(range(m)) - swap_group
        if flips:
            plan[pat] = Correction(flips=flips)
    return plan


def _ghz_product_parts(state: PureState) -> tuple[tuple[int, ...], tuple[int, ...]]:
    """Recover (pol flip pattern, spatial flip pattern) of a GHZ x GHZ product."""
    if state.dofs != (POL, SPATIAL):
        raise ValueError("expected a joint (pol, spatial) state")
    pol_kets = {tuple(ph[0] for ph in lab) for lab in state.terms}
    sp_kets = {tuple(ph[1] for ph in lab) for lab in state.terms}
    ok = (
        len(state.terms) == 4
        and len(pol_kets) == 2
        and len(sp_kets) == 2
        and complement(min(pol_kets)) == max(pol_kets)
        and complement(min(sp_kets)) == max(sp_kets)
    )
    if not ok:
        raise ValueError("member is not a product of two GHZ components; pass an explicit plan")
    return min(pol_kets), min(sp_kets)


def infer_flip_plan(ensemble: Ensemble) -> dict[Pattern, Correction]:
    """Derive the correction each port pattern needs from the noise support.

    The pattern produced by a (pol error e, spatial error f) branch is the
    photon-wise XOR of the two flip patterns, and the surviving polarization
    state is the GHZ component of f alone. Whenever a pattern identifies f
    unambiguously among the branches present in the input, flipping f's
    photons restores the reference GHZ state; ambiguous patterns are left
    uncorrected (they carry a genuine mixture that no unitary can unmix).
    """
    m = ensemble.m
    branches = [_ghz_product_parts(member) for _, member in ensemble.members]
    plan: dict[Pattern, Correction] = {}
    for pat in all_patterns(m):
        f_classes = set()
        for e, f in branches:
            u = tuple(a ^ b for a, b in zip(e, f))
            if pat in (u, complement(u)):
                f_classes.add(frozenset((f, complement(f))))
        if len(f_classes) != 1:
            continue
        (cls,) = f_classes
        rep = min(cls, key=lambda t: (sum(t), t))
        flips = frozenset(i for i, b in enumerate(rep) if b)
        if flips:
            plan[pat] = Correction(flips=flips)
    return plan


@dataclass(frozen=True)
class PatternOutcome:
    probability: float
    ensemble: Ensemble
    fidelity: float


@dataclass(frozen=True)
class ProtocolResult:
    """Accepted-pattern table plus the merged success/fidelity figures."""

    accepted: Mapping[Pattern, PatternOutcome]
    success_probability: float
    rejected_probability: float
    output_fidelity: float
    target: PureState

    def __post_init__(self):
        object.__setattr__(self, "accepted", MappingProxyType(dict(self.accepted)))

    def pattern_probability(self, pattern: Pattern) -> float:
        outcome = self.accepted.get(pattern)
        return outcome.probability if outcome else 0.0


def merged_fidelity(result: ProtocolResult, target: PureState) -> float:
    """Fidelity of the pattern-merged output mixture against any pol target."""
    mass = sum(
        outcome.probability * fidelity(outcome.ensemble, target)
        for outcome in result.accepted.values()
    )
    return mass / result.success_probability


def _split_by_pattern(state: PureState) -> dict[Pattern, tuple[float, PureState]]:
    """Marginalize a (pol, port) state over port patterns.

    Returns, per pattern with nonzero probability, the probability and the
    renormalized conditional polarization state.
    """
    groups: dict[Pattern, dict[Label, complex]] = {}
    for label, amp in state.terms.items():
        pattern = tuple(ph[1] for ph in label)
        pol_label = tuple((ph[0],) for ph in label)
        groups.setdefault(pattern, {})[pol_label] = amp
    out = {}
    for pattern, terms in groups.items():
        prob = sum(abs(a) ** 2 for a in terms.values())
        scale = prob**-0.5
        cond = PureState(state.m, (POL,), {lab: a * scale for lab, a in terms.items()})
        out[pattern] = (prob, cond)
    return out


def _execute(
    ensemble: Ensemble,
    rule: AcceptanceRule,
    plan: CorrectionPlan,
    target: PureState | None,
    hadamard_first: bool,
    gate_table: GateTable | None,
) -> ProtocolResult:
    if ensemble.dofs != (POL, SPATIAL):
        raise ValueError(f"protocol input must carry (pol, spatial) labels, got {ensemble.dofs}")
    m = ensemble.m
    if target is None:
        target = make_ghz_pol(m, 0, +1)
    if target.m != m or target.dofs != (POL,):
        raise ValueError("target must be a bare polarization state on the same photons")

    buckets: dict[Pattern, list[tuple[float, PureState]]] = {}
    for weight, member in ensemble.members:
        state = member
        if hadamard_first:
            state = hadamard_spatial(hadamard_pol(state))
        routed = apply_network(state, gate_table)
        for pattern, (cond_prob, cond_state) in _split_by_pattern(routed).items():
            if not rule.accepts(pattern):
                continue
            buckets.setdefault(pattern, []).append((weight * cond_prob, cond_state))

    # fsum reductions keep results independent of member order
    accepted_mass = math.fsum(w for entries in buckets.values() for w, _ in entries)
    if accepted_mass <= 0.0:
        raise ValueError("no accepted port pattern carries probability; fidelity undefined")

    accepted: dict[Pattern, PatternOutcome] = {}
    fidelity_terms = []
    for pattern in sorted(buckets):
        entries = buckets[pattern]
        pattern_prob = math.fsum(w for w, _ in entries)
        correction = plan.get(pattern, IDENTITY_CORRECTION)
        members = tuple((w / pattern_prob, correction.apply(s)) for w, s in entries)
        cond_ensemble = Ensemble(members)
        cond_fidelity = fidelity(cond_ensemble, target)
        accepted[pattern] = PatternOutcome(pattern_prob, cond_ensemble, cond_fidelity)
        fidelity_terms.append(pattern_prob * cond_fidelity)

    return ProtocolResult(
        accepted=accepted,
        success_probability=accepted_mass,
        rejected_probability=1.0 - accepted_mass,
        output_fidelity=math.fsum(fidelity_terms) / accepted_mass,
        target=target,
    )


def run_bitflip(
    ensemble: Ensemble,
    target: PureState | None = None,
    gate_table: GateTable | None = None,
) -> ProtocolResult:
    """Bit-flip purification: keep the unanimous port patterns, no corrections."""
    return _execute(ensemble, AcceptanceRule("bitflip"), {}, target, False, gate_table)


def run_phaseflip(
    ensemble: Ensemble,
    target: PureState | None = None,
    gate_table: GateTable | None = None,
) -> ProtocolResult:
    """Phase-flip purification via Hadamard layers on both degrees of freedom.

    Even-swap patterns are kept; each is corrected by flipping every photon
    and applying one more polarization Hadamard, which lands the surviving
    branches back on the reference GHZ state and its sign companion.
    """
    return _execute(
        ensemble,
        AcceptanceRule("phaseflip"),
        phaseflip_plan(ensemble.m),
        target,
        True,
        gate_table,
    )


def run_general(
    ensemble: Ensemble,
    corrections: CorrectionPlan | None = None,
    acceptance: AcceptanceRule | None = None,
    target: PureState | None = None,
    gate_table: GateTable | None = None,
) -> ProtocolResult:
    """General mode: accept everything (by default) and correct per pattern.

    With ``corrections=None`` the plan is inferred from the input's noise
    support (see infer_flip_plan); pass an explicit mapping, possibly empty,
    to override.
    """
    if acceptance is None:
        acceptance = AcceptanceRule("general")
    if corrections is None:
        corrections = infer_flip_plan(ensemble)
    return _execute(ensemble, acceptance, corrections, target, False, gate_table)


def closed_form_success_pair(fa: float, fb: float) -> float:
    """Accepted-probability formula for two-component mixtures: FaFb + (1-Fa)(1-Fb)."""
    _check_unit_interval(fa, fb)
    return fa * fb + (1.0 - fa) * (1.0 - fb)


def closed_form_fidelity_pair(fa: float, fb: float) -> float:
    """Post-selected fidelity for two-component mixtures: FaFb / (FaFb + (1-Fa)(1-Fb))."""
    _check_unit_interval(fa, fb)
    denom = closed_form_success_pair(fa, fb)
    if denom == 0.0:
        raise ValueError(f"degenerate pair ({fa}, {fb}): nothing is accepted")
    return fa * fb / denom


def closed_form_fidelity_general(
    pol_weights: Sequence[float], spatial_weights: Sequence[float]
) -> tuple[float, ...]:
    """Matched-pattern output weights for paired multi-component mixtures.

    Component i of the output carries weight w_i u_i / sum_j w_j u_j, where
    w and u are the polarization and spatial input weight vectors.
    """
    if len(pol_weights) != len(spatial_weights):
        raise ValueError("weight vectors differ in length")
    for vec in (pol_weights, spatial_weights):
        total = sum(vec)
        if abs(total - 1.0) > 1e-12:
            raise ValueError(f"weights sum to {total!r}, not 1")
    products = [w * u for w, u in zip(pol_weights, spatial_weights)]
    denom = sum(products)
    if denom == 0.0:
        raise ValueError("all matched products vanish; nothing is accepted")
    return tuple(p / denom for p in products)


def closed_form_success_general(
    pol_weights: Sequence[float], spatial_weights: Sequence[float]
) -> float:
    """Accepted probability on the unanimous patterns for paired mixtures."""
    if len(pol_weights) != len(spatial_weights):
        raise ValueError("weight vectors differ in length")
    return sum(w * u for w, u in zip(pol_weights, spatial_weights))


def _check_unit_interval(*values: float) -> None:
    for v in values:
        if not 0.0 <= v <= 1.0:
            raise ValueError(f"fidelity weight {v!r} outside [0, 1]")
