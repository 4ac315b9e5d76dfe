"""Circuit IR and the two syndrome-extraction compilers.

The ideal (nonlocal) circuit measures X-type then Z-type generators with
ancillas prepared in |+> and measured in X, one Tanner-coloring stage per
entangling layer. The geometry-constrained compiler places data on the
bottom layer of a bilayer grid, ancillas on top, and expands every
entangling stage into a SWAP-network permutation of the top layer followed
by one step of vertical gates.

Qubit ids are physical sites with static coordinates; SWAP gates move
logical content between sites, and the compiler tracks where each ancilla
currently lives.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .codes import CssCode
from .routing import Permutation, RoutingError, edge_color_bipartite, route_lattice

__all__ = [
    "Location",
    "Circuit",
    "StagePlan",
    "PhasePlan",
    "BilayerPlacement",
    "CircuitError",
    "tanner_stage_coloring",
    "build_ideal_sec",
    "place_bilayer",
    "build_local_sec",
    "verify_schedule",
    "noiseless_syndrome",
]

KINDS = ("prep_plus", "prep_zero", "meas_x", "meas_z", "cnot", "cz", "swap", "idle", "pauli")
_TOKEN = {
    "prep_plus": "PX",
    "prep_zero": "PZ",
    "meas_x": "MX",
    "meas_z": "MZ",
    "cnot": "CNOT",
    "cz": "CZ",
    "swap": "SWAP",
    "idle": "I",
    "pauli": "PAULI",
}
_KIND_OF_TOKEN = {v: k for k, v in _TOKEN.items()}


class CircuitError(ValueError):
    """Invalid circuit construction or verification input."""


@dataclass(frozen=True, slots=True)
class Location:
    """One gate/prep/measure/idle slot; for cnot/cz qubits = (control, target)."""

    kind: str
    qubits: tuple[int, ...]
    tag: tuple | None = None

    def __post_init__(self):
        if self.kind not in KINDS:
            raise CircuitError(f"unknown location kind {self.kind!r}")
        two_qubit = self.kind in ("cnot", "cz", "swap")
        if two_qubit and (len(self.qubits) != 2 or self.qubits[0] == self.qubits[1]):
            raise CircuitError("two-qubit location needs two distinct qubits")
        if not two_qubit and len(self.qubits) != 1:
            raise CircuitError("one-qubit location needs exactly one qubit")


@dataclass
class Circuit:
    width: int
    steps: list[list[Location]] = field(default_factory=list)
    placement: dict[int, tuple[int, int, int]] | None = None
    role: dict[int, str] | None = None

    @property
    def depth(self) -> int:
        return len(self.steps)

    def location_count(self) -> int:
        return sum(len(s) for s in self.steps)

    def to_text(self) -> str:
        lines = [f"circuit {self.width} {self.depth}"]
        if self.placement:
            for q in sorted(self.placement):
                layer, x, y = self.placement[q]
                role = self.role.get(q, "buffer") if self.role else "buffer"
                lines.append(f"placement {q} {layer} {x} {y} {role}")
        for step in self.steps:
            lines.append("step")
            for loc in sorted(step, key=lambda l: l.qubits):
                lines.append(" ".join([_TOKEN[loc.kind], *map(str, loc.qubits)]))
        return "\n".join(lines) + "\n"

    @staticmethod
    def from_text(text: str) -> "Circuit":
        lines = [ln for ln in text.splitlines() if ln.strip()]
        head = lines[0].split()
        width = int(head[1])
        placement: dict[int, tuple[int, int, int]] = {}
        role: dict[int, str] = {}
        steps: list[list[Location]] = []
        for ln in lines[1:]:
            parts = ln.split()
            if parts[0] == "placement":
                q = int(parts[1])
                placement[q] = (int(parts[2]), int(parts[3]), int(parts[4]))
                role[q] = parts[5]
            elif parts[0] == "step":
                steps.append([])
            else:
                kind = _KIND_OF_TOKEN[parts[0]]
                qubits = tuple(int(x) for x in parts[1:])
                steps[-1].append(Location(kind, qubits))
        return Circuit(
            width,
            steps,
            placement or None,
            role or None,
        )


@dataclass(frozen=True)
class PhasePlan:
    """One measurement phase: prep, entangling matchings, measure."""

    basis: str  # "X" or "Z"
    gate_kind: str  # cnot or cz
    check_count: int
    stages: tuple[tuple[tuple[int, int], ...], ...]  # per stage: (check, qubit) pairs


@dataclass(frozen=True)
class StagePlan:
    x_phase: PhasePlan
    z_phase: PhasePlan

    @property
    def total_stages(self) -> int:
        extra = (2 if self.x_phase.check_count else 0) + (
            2 if self.z_phase.check_count else 0
        )
        return len(self.x_phase.stages) + len(self.z_phase.stages) + extra


def _phase_plan(h, basis: str, gate_kind: str) -> PhasePlan:
    m = h.rows
    if m == 0:
        return PhasePlan(basis, gate_kind, 0, ())
    edges = []
    for b in range(m):
        r = h.bits[b]
        while r:
            low = r & -r
            edges.append((b, low.bit_length() - 1))
            r ^= low
    degree = max(max(h.row_weights()), max(h.col_weights()))
    colors = edge_color_bipartite(edges, m, h.cols, degree)
    stages: list[list[tuple[int, int]]] = [[] for _ in range(degree)]
    for (b, a), c in zip(edges, colors):
        stages[c].append((b, a))
    packed = tuple(tuple(sorted(st)) for st in stages if st)
    return PhasePlan(basis, gate_kind, m, packed)


def tanner_stage_coloring(code: CssCode) -> StagePlan:
    """Stage plan: one entangling stage per color of each Tanner graph.

    Each stage's pairs are disjoint on both sides (color classes are
    matchings); stage counts per phase never exceed max(delta_q, delta_g).
    """
    return StagePlan(
        x_phase=_phase_plan(code.hx, "X", "cnot"),
        z_phase=_phase_plan(code.hz, "Z", "cz"),
    )


def _pad_with_idles(locs: list[Location], width: int) -> list[Location]:
    busy = {q for loc in locs for q in loc.qubits}
    out = list(locs)
    for q in range(width):
        if q not in busy:
            out.append(Location("idle", (q,)))
    return out


def build_ideal_sec(code: CssCode) -> Circuit:
    """Nonlocal syndrome-extraction circuit with width n + max(m_X, m_Z).

    Ancilla sites are reused across the X and Z phases; every stage is one
    step. Untouched qubits carry explicit idle locations so the circuit's
    fault locations are complete.
    """
    n = code.n
    m0 = max(code.m_x, code.m_z)
    width = n + m0
    plan = tanner_stage_coloring(code)
    steps: list[list[Location]] = []
    for phase in (plan.x_phase, plan.z_phase):
        if phase.check_count == 0:
            continue
        prep = [Location("prep_plus", (n + b,)) for b in range(phase.check_count)]
        steps.append(_pad_with_idles(prep, width))
        for stage in phase.stages:
            gates = [
                Location(phase.gate_kind, (n + b, a)) for b, a in stage
            ]
            steps.append(_pad_with_idles(gates, width))
        meas = [
            Location("meas_x", (n + b,), tag=(phase.basis, b))
            for b in range(phase.check_count)
        ]
        steps.append(_pad_with_idles(meas, width))
    roles = {q: "data" for q in range(n)}
    for b in range(m0):
        roles[n + b] = "ancilla_x" if b < code.m_x else "ancilla_z"
    return Circuit(width, steps, placement=None, role=roles)


@dataclass(frozen=True)
class BilayerPlacement:
    side: int
    width: int
    placement: dict[int, tuple[int, int, int]]
    role: dict[int, str]

    def top_site(self, slot: int) -> int:
        return self.side * self.side + slot


def place_bilayer(code: CssCode) -> BilayerPlacement:
    """All data on the bottom layer, all ancillas on top, rest buffer.

    side = ceil(sqrt(max(n, m0))); width is accounted as both full layers.
    Data qubit a occupies bottom slot a; ancilla b starts at top slot b.
    """
    n = code.n
    m0 = max(code.m_x, code.m_z)
    side = max(1, math.isqrt(max(n, m0) - 1) + 1) if max(n, m0) > 0 else 1
    slots = side * side
    placement = {}
    role = {}
    for s in range(slots):
        x, y = divmod(s, side)
        placement[s] = (0, x, y)
        role[s] = "data" if s < n else "buffer"
        placement[slots + s] = (1, x, y)
        if s < code.m_x:
            role[slots + s] = "ancilla_x"
        elif s < m0:
            role[slots + s] = "ancilla_z"
        else:
            role[slots + s] = "buffer"
    return BilayerPlacement(side, 2 * slots, placement, role)


def _stage_permutation(
    pairs: tuple[tuple[int, int], ...],
    ancilla_pos: list[int],
    side: int,
) -> Permutation:
    """Top-layer permutation sending each stage ancilla above its data.

    Unclaimed slots keep their content; displaced content goes to the
    nearest free slot (deterministic tie-break by slot index).
    """
    slots = side * side
    alpha = [-1] * slots
    taken = [False] * slots
    for b, a in pairs:
        src = ancilla_pos[b]
        if alpha[src] != -1:
            raise CircuitError("stage pairs reuse an ancilla")
        if taken[a]:
            raise CircuitError("stage pairs reuse a data qubit")
        alpha[src] = a
        taken[a] = True
    # fixable slots stay put
    deferred = []
    for s in range(slots):
        if alpha[s] != -1:
            continue
        if not taken[s]:
            alpha[s] = s
            taken[s] = True
        else:
            deferred.append(s)
    free = [s for s in range(slots) if not taken[s]]
    for s in deferred:
        sx, sy = divmod(s, side)
        best = min(
            free,
            key=lambda f: ((f // side - sx) ** 2 + (f % side - sy) ** 2, f),
        )
        alpha[s] = best
        free.remove(best)
        taken[best] = True
    return Permutation(tuple(alpha))


def build_local_sec(
    code: CssCode,
    reach: int = 1,
    mode: str = "unit",
    seed: int = 0,
) -> Circuit:
    """Geometry-constrained syndrome extraction on the bilayer grid.

    Every entangling stage first routes the top layer so each ancilla of the
    stage sits directly above its data partner, then applies one step of
    vertical gates. Prep and measure stages are single steps.
    """
    layout = place_bilayer(code)
    side = layout.side
    slots = side * side
    width = layout.width
    plan = tanner_stage_coloring(code)
    m0 = max(code.m_x, code.m_z)

    ancilla_pos = list(range(m0))  # ancilla b -> current top slot
    slot_content = [-1] * slots  # top slot -> ancilla id or -1
    for b in range(m0):
        slot_content[b] = b

    steps: list[list[Location]] = []
    for phase in (plan.x_phase, plan.z_phase):
        if phase.check_count == 0:
            continue
        prep = [
            Location("prep_plus", (layout.top_site(ancilla_pos[b]),))
            for b in range(phase.check_count)
        ]
        steps.append(_pad_with_idles(prep, width))
        for stage in phase.stages:
            alpha = _stage_permutation(stage, ancilla_pos, side)
            sched = route_lattice(alpha, side, reach, mode, seed)
            for sp in sched.steps:
                swaps = [
                    Location("swap", (layout.top_site(u), layout.top_site(v)))
                    for u, v in sorted(sp.transpositions)
                ]
                steps.append(_pad_with_idles(swaps, width))
            # update tracked content
            new_content = [-1] * slots
            for s in range(slots):
                if slot_content[s] != -1:
                    new_content[alpha[s]] = slot_content[s]
            slot_content = new_content
            for s, b in enumerate(slot_content):
                if b != -1:
                    ancilla_pos[b] = s
            gates = [
                Location(phase.gate_kind, (layout.top_site(ancilla_pos[b]), a))
                for b, a in stage
            ]
            steps.append(_pad_with_idles(gates, width))
        meas = [
            Location(
                "meas_x",
                (layout.top_site(ancilla_pos[b]),),
                tag=(phase.basis, b),
            )
            for b in range(phase.check_count)
        ]
        steps.append(_pad_with_idles(meas, width))
    return Circuit(width, steps, placement=layout.placement, role=layout.role)


def verify_schedule(
    circ: Circuit,
    reach: int,
    max_partners: int | None = None,
) -> tuple[bool, dict]:
    """Static validity scan of a compiled circuit.

    Checks per-step qubit exclusivity; for placed circuits also that SWAPs
    are intra-layer with length <= reach and entangling gates are vertical
    or unit-distance intra-layer. Reports the largest number of distinct
    interaction partners any site accumulates; when max_partners is given,
    exceeding it fails the check.
    """
    report: dict = {"max_partner_count": 0, "geometry_checked": circ.placement is not None}
    for t, step in enumerate(circ.steps):
        seen: set[int] = set()
        for loc in step:
            for q in loc.qubits:
                if q in seen:
                    report["violation"] = f"step {t}: qubit {q} used twice"
                    return False, report
                seen.add(q)
                if q >= circ.width:
                    report["violation"] = f"step {t}: qubit {q} outside width"
                    return False, report
    if circ.placement is None:
        return True, report

    partners: dict[int, set[int]] = {}
    for t, step in enumerate(circ.steps):
        for loc in step:
            if loc.kind not in ("swap", "cnot", "cz"):
                continue
            a, b = loc.qubits
            (la, xa, ya) = circ.placement[a]
            (lb, xb, yb) = circ.placement[b]
            d2 = (xa - xb) ** 2 + (ya - yb) ** 2
            if loc.kind == "swap":
                if la != lb:
                    report["violation"] = f"step {t}: inter-layer SWAP {a}-{b}"
                    return False, report
                if d2 > reach * reach:
                    report["violation"] = (
                        f"step {t}: range violation, SWAP {a}-{b} length^2 {d2}"
                    )
                    return False, report
            else:
                vertical = la != lb and d2 == 0
                planar = la == lb and d2 == 1
                if not (vertical or planar):
                    report["violation"] = (
                        f"step {t}: entangling gate {a}-{b} neither vertical nor unit"
                    )
                    return False, report
            partners.setdefault(a, set()).add(b)
            partners.setdefault(b, set()).add(a)
    if partners:
        report["max_partner_count"] = max(len(v) for v in partners.values())
    if max_partners is not None and report["max_partner_count"] > max_partners:
        report["violation"] = (
            f"partner count {report['max_partner_count']} exceeds {max_partners}"
        )
        return False, report
    return True, report


def noiseless_syndrome(circ: Circuit, code: CssCode, error) -> tuple[int, int]:
    """Measurement record of the fault-free circuit on a corrupted input.

    `error` is a PauliVec on the data qubits (sites 0..n-1). Returns packed
    syndrome bit vectors (sigma_x, sigma_z) that equal H_X . e_z and
    H_Z . e_x for a correct compiler.
    """
    from .pauli import PauliVec, simulate_faulty

    full = PauliVec.zeros(circ.width)
    full = full.with_masks(
        x_mask=error.x_mask,
        z_mask=error.z_mask,
    )
    _final, records = simulate_faulty(circ, {}, full)
    sigma_x = 0
    sigma_z = 0
    for rec in records:
        if rec.tag is None:
            continue
        basis, idx = rec.tag
        if rec.flip:
            if basis == "X":
                sigma_x |= 1 << idx
            else:
                sigma_z |= 1 << idx
    return sigma_x, sigma_z
