"""Symplectic Pauli propagation, fault sampling, and rate calculus.

Pauli frames are (x_mask, z_mask) bit vectors indexed by circuit site.
Propagation is linear over GF(2), which the exact fault enumerator exploits
by convolving single-fault effect distributions.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass

from .circuits import Circuit, CircuitError, Location

__all__ = [
    "PauliVec",
    "MeasRecord",
    "DecayRate",
    "FaultAssignment",
    "propagate_step",
    "simulate_faulty",
    "sample_circuit_faults",
    "compose_rates",
    "map_rate",
    "depth1_rate",
    "pround_bound",
    "enumerate_fault_distribution",
    "covering_probability",
    "distribution_to_csv",
    "single_qubit_paulis",
    "two_qubit_paulis",
]

# FaultAssignment: step index -> list of (location index, PauliVec on the
# location's support)
FaultAssignment = dict[int, list[tuple[int, "PauliVec"]]]


@dataclass(frozen=True, slots=True)
class PauliVec:
    """X/Z bit masks of a Pauli operator on `width` qubits (phases dropped)."""

    width: int
    x_mask: int = 0
    z_mask: int = 0

    def __post_init__(self):
        limit = 1 << self.width
        if self.x_mask >= limit or self.z_mask >= limit:
            raise CircuitError("mask bits beyond width")

    @staticmethod
    def zeros(width: int) -> "PauliVec":
        return PauliVec(width)

    def with_masks(self, x_mask: int, z_mask: int) -> "PauliVec":
        return PauliVec(self.width, x_mask, z_mask)

    def xor(self, other: "PauliVec") -> "PauliVec":
        return PauliVec(self.width, self.x_mask ^ other.x_mask, self.z_mask ^ other.z_mask)

    def x_bit(self, q: int) -> int:
        return (self.x_mask >> q) & 1

    def z_bit(self, q: int) -> int:
        return (self.z_mask >> q) & 1

    def support(self) -> int:
        return self.x_mask | self.z_mask

    def weight(self) -> int:
        return self.support().bit_count()


@dataclass(frozen=True, slots=True)
class MeasRecord:
    """Snapshot of a measured site just before readout."""

    step: int
    qubit: int
    tag: tuple | None
    flip: int
    x_bit: int
    z_bit: int


def _apply_gate(loc: Location, x: int, z: int) -> tuple[int, int]:
    kind = loc.kind
    if kind == "cnot":
        c, t = loc.qubits
        # X flows control -> target, Z flows target -> control
        if (x >> c) & 1:
            x ^= 1 << t
        if (z >> t) & 1:
            z ^= 1 << c
    elif kind == "cz":
        c, t = loc.qubits
        if (x >> t) & 1:
            z ^= 1 << c
        if (x >> c) & 1:
            z ^= 1 << t
    elif kind == "swap":
        a, b = loc.qubits
        xa, xb = (x >> a) & 1, (x >> b) & 1
        if xa != xb:
            x ^= (1 << a) | (1 << b)
        za, zb = (z >> a) & 1, (z >> b) & 1
        if za != zb:
            z ^= (1 << a) | (1 << b)
    elif kind in ("prep_plus", "prep_zero", "meas_x", "meas_z"):
        q = loc.qubits[0]
        x &= ~(1 << q)
        z &= ~(1 << q)
    # idle, pauli: identity on the frame
    return x, z


def propagate_step(step: list[Location], pauli: PauliVec) -> PauliVec:
    """Ideal action of one parallel step on a Pauli frame.

    CNOT copies X from control to target and Z from target to control; CZ
    maps X on either qubit to Z on the other; SWAP exchanges both masks;
    preparations and measurements clear the site; idle and fixed-Pauli
    locations leave the frame unchanged.
    """
    x, z = pauli.x_mask, pauli.z_mask
    for loc in step:
        for q in loc.qubits:
            if q >= pauli.width:
                raise CircuitError("location outside Pauli frame width")
        x, z = _apply_gate(loc, x, z)
    return PauliVec(pauli.width, x, z)


def _validate_fault(loc: Location, fault: PauliVec) -> None:
    support = 0
    for q in loc.qubits:
        support |= 1 << q
    if (fault.x_mask | fault.z_mask) & ~support:
        raise CircuitError("fault support exceeds its location's qubits")


def simulate_faulty(
    circ: Circuit,
    faults: FaultAssignment,
    input_pauli: PauliVec,
) -> tuple[PauliVec, list[MeasRecord]]:
    """Propagate an input frame through the circuit with injected faults.

    Gate faults land right after their location's ideal action; preparation
    faults right after the reset; measurement faults right before readout.
    The measurement record keeps the full site snapshot, with flip = the
    component anticommuting with the measured basis.
    """
    if input_pauli.width != circ.width:
        raise CircuitError("input width mismatch")
    x, z = input_pauli.x_mask, input_pauli.z_mask
    records: list[MeasRecord] = []
    for t, step in enumerate(circ.steps):
        step_faults = {i: f for i, f in faults.get(t, [])}
        for i, loc in enumerate(step):
            f = step_faults.get(i)
            if f is not None:
                _validate_fault(loc, f)
            if loc.kind in ("meas_x", "meas_z"):
                if f is not None:
                    x ^= f.x_mask
                    z ^= f.z_mask
                q = loc.qubits[0]
                xb, zb = (x >> q) & 1, (z >> q) & 1
                flip = zb if loc.kind == "meas_x" else xb
                records.append(MeasRecord(t, q, loc.tag, flip, xb, zb))
                x &= ~(1 << q)
                z &= ~(1 << q)
            else:
                x, z = _apply_gate(loc, x, z)
                if f is not None:
                    x ^= f.x_mask
                    z ^= f.z_mask
    return PauliVec(circ.width, x, z), records


def single_qubit_paulis(q: int, width: int) -> list[PauliVec]:
    """The three nontrivial Paulis on one qubit."""
    bit = 1 << q
    return [
        PauliVec(width, bit, 0),
        PauliVec(width, bit, bit),
        PauliVec(width, 0, bit),
    ]


def two_qubit_paulis(a: int, b: int, width: int) -> list[PauliVec]:
    """The fifteen nontrivial Paulis on an ordered pair of qubits."""
    out = []
    for xa, za, xb, zb in (
        (xa, za, xb, zb)
        for xa in (0, 1)
        for za in (0, 1)
        for xb in (0, 1)
        for zb in (0, 1)
    ):
        if xa == za == xb == zb == 0:
            continue
        out.append(
            PauliVec(width, (xa << a) | (xb << b), (za << a) | (zb << b))
        )
    return out


def _fault_choices(loc: Location, width: int) -> list[PauliVec]:
    if loc.kind == "prep_plus":
        return [PauliVec(width, 0, 1 << loc.qubits[0])]  # |+> flips to |->
    if loc.kind == "prep_zero":
        return [PauliVec(width, 1 << loc.qubits[0], 0)]
    if loc.kind == "meas_x":
        return [PauliVec(width, 0, 1 << loc.qubits[0])]
    if loc.kind == "meas_z":
        return [PauliVec(width, 1 << loc.qubits[0], 0)]
    if len(loc.qubits) == 1:
        return single_qubit_paulis(loc.qubits[0], width)
    return two_qubit_paulis(loc.qubits[0], loc.qubits[1], width)


def sample_circuit_faults(
    circ: Circuit,
    p: float,
    r_swap: float = 1.0,
    seed: int = 0,
) -> FaultAssignment:
    """Independently fault every location.

    Non-SWAP locations fault with probability p (uniform nontrivial Pauli on
    their support; preparations and measurements flip their basis state);
    SWAP locations fault with probability r_swap * p.
    """
    if not 0.0 <= p <= 1.0:
        raise CircuitError("p must be in [0, 1]")
    rng = random.Random(seed)
    out: FaultAssignment = {}
    for t, step in enumerate(circ.steps):
        for i, loc in enumerate(step):
            prob = r_swap * p if loc.kind == "swap" else p
            if rng.random() >= prob:
                continue
            choices = _fault_choices(loc, circ.width)
            fault = choices[rng.randrange(len(choices))]
            out.setdefault(t, []).append((i, fault))
    return out


@dataclass(frozen=True, slots=True)
class DecayRate:
    """Rate of a locally decaying distribution: Pr(E) <= p^{|E|}.

    Values above 1 are legitimate but vacuous upper bounds.
    """

    p: float

    def __post_init__(self):
        if self.p < 0:
            raise CircuitError("rate must be nonnegative")

    @property
    def vacuous(self) -> bool:
        return self.p > 1.0


def compose_rates(p1: DecayRate, p2: DecayRate) -> DecayRate:
    """Union of two independent locally decaying distributions."""
    return DecayRate(p1.p + p2.p)


def map_rate(p: DecayRate, delta: int) -> DecayRate:
    """Rate after a GF(2) linear map with row/column weight <= delta."""
    if delta < 1:
        raise CircuitError("delta must be >= 1")
    return DecayRate((2.0**delta) * p.p ** (1.0 / delta))


def depth1_rate(p_phys: DecayRate) -> DecayRate:
    """Induced error rate of one depth-1 layer of faulty 1- and 2-qubit gates."""
    return DecayRate(math.sqrt(p_phys.p))


def pround_bound(delta: int, depth: int, p_phys: DecayRate) -> DecayRate:
    """Accumulated per-round error rate of a two-phase extraction circuit."""
    if delta < 1 or depth < 0:
        raise CircuitError("need delta >= 1 and depth >= 0")
    return DecayRate(
        (2.0 ** (delta + 1)) * depth * p_phys.p ** (1.0 / (2 * delta + 2))
    )


def _single_fault_effect(circ: Circuit, t: int, i: int, fault: PauliVec) -> tuple[int, int]:
    final, records = simulate_faulty(
        circ, {t: [(i, fault)]}, PauliVec.zeros(circ.width)
    )
    ex, ez = final.x_mask, final.z_mask
    # measured sites report their pre-readout snapshot as the end-of-round
    # error on the ancilla
    for rec in records:
        ex ^= rec.x_bit << rec.qubit
        ez ^= rec.z_bit << rec.qubit
    return ex, ez


def enumerate_fault_distribution(
    circ: Circuit, p: float, r_swap: float = 1.0
) -> dict[tuple[int, int], float]:
    """Exact end-of-round error distribution of a small faulty circuit.

    Keys are (x_mask, z_mask) of the final error, where measured sites carry
    their pre-readout snapshot. Every location faults independently with a
    uniform Pauli choice, so the joint distribution is the XOR-convolution
    of per-location effect distributions (Pauli propagation is linear).
    """
    if circ.location_count() > 14:
        raise CircuitError("instance too large for exhaustive enumeration")
    if not 0.0 <= p <= 1.0:
        raise CircuitError("p must be in [0, 1]")
    dist: dict[tuple[int, int], float] = {(0, 0): 1.0}
    for t, step in enumerate(circ.steps):
        for i, loc in enumerate(step):
            prob = r_swap * p if loc.kind == "swap" else p
            choices = _fault_choices(loc, circ.width)
            local: dict[tuple[int, int], float] = {(0, 0): 1.0 - prob}
            share = prob / len(choices)
            for fault in choices:
                eff = _single_fault_effect(circ, t, i, fault)
                local[eff] = local.get(eff, 0.0) + share
            new: dict[tuple[int, int], float] = {}
            for (ax, az), pa in dist.items():
                if pa == 0.0:
                    continue
                for (bx, bz), pb in local.items():
                    if pb == 0.0:
                        continue
                    key = (ax ^ bx, az ^ bz)
                    new[key] = new.get(key, 0.0) + pa * pb
            dist = new
    return dist


def covering_probability(
    dist: dict[tuple[int, int], float], sector: str, support: int
) -> float:
    """Total probability that the given sector's error covers `support`."""
    if sector not in ("x", "z"):
        raise CircuitError("sector must be 'x' or 'z'")
    idx = 0 if sector == "x" else 1
    return sum(p for key, p in dist.items() if key[idx] & support == support)


def distribution_to_csv(dist: dict[tuple[int, int], float]) -> str:
    """CSV export: sorted qubit-id lists per sector plus the probability."""
    lines = ["x_support,z_support,probability"]
    def ids(mask: int) -> str:
        out = []
        while mask:
            low = mask & -mask
            out.append(str(low.bit_length() - 1))
            mask ^= low
        return " ".join(out)

    for (x, z) in sorted(dist):
        lines.append(f"{ids(x)},{ids(z)},{dist[(x, z)]!r}")
    return "\n".join(lines) + "\n"
