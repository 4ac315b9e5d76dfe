"""Tile-level geometry, SWAP-primitive depth formulas, and the bilayer
position-tracking simulator.

Geometry model for the simulator: each layer is a rotated lattice drawn on
doubled integer coordinates, so sites exist where u + v is even and physical
moves are either vertical (same site, other layer) or one diagonal step
inside a layer. A tile's data qubits form a d_l x d_l sublattice of even
offsets from the tile origin; neighboring tile origins sit one pitch
(2 d_l doubled units) apart, which interleaves the rotated code's ancilla
sites between data sites. All movement is built from per-tile diagonal
shifts and vertical swap sets; every emitted physical step is validated for
swap disjointness and for the staggering property that no swap ever pairs
data qubits of two distinct tiles.

A logical tile exchange routes one pair member through the other layer:
the under-tiles clear the freeway with paired vertical swaps, the traveler
walks a full pitch, and everything re-anchors. A standalone exchange is
padded with interleaved error-correction steps to the canonical window of
2 d_l + 9 physical steps per routed swap layer.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .routing import Permutation

__all__ = [
    "TileLayout",
    "HierarchicalParams",
    "TileSimReport",
    "BilayerError",
    "tile_side",
    "tile_layout",
    "t_route",
    "swap_primitive_depths",
    "logical_route_depth",
    "physical_qubit_count",
    "hierarchical_params",
    "biased_tile_dims",
    "tile_permutation_sim",
]


class BilayerError(ValueError):
    """Invalid bilayer parameters or a failed simulator verification."""


def tile_side(d_l: int) -> int:
    """Integer tile side: ceil(sqrt(2 d_l^2 - 1))."""
    if d_l < 1:
        raise BilayerError("d_l must be >= 1")
    return math.isqrt(2 * d_l * d_l - 2) + 1


@dataclass(frozen=True)
class TileLayout:
    tiles_per_side: int
    d_l: int
    ell: int
    physical_qubits: int


@dataclass(frozen=True)
class HierarchicalParams:
    N: int
    K: int
    D: int
    n: int
    k: int
    d: int
    d_l: int


def t_route(d_l: int, tiles_per_side: int) -> int:
    """Optimized tile-permutation depth: (2 d_l + 1)(3L - 3) + 8."""
    if d_l < 1 or tiles_per_side < 1:
        raise BilayerError("d_l and L must be >= 1")
    return (2 * d_l + 1) * (3 * tiles_per_side - 3) + 8


def swap_primitive_depths(d_l: int) -> dict[str, int]:
    """Stated depths of the three bilayer movement primitives."""
    if d_l < 1:
        raise BilayerError("d_l must be >= 1")
    return {"staggered": 3, "walk": d_l, "full_swap": 2 * d_l + 9}


def logical_route_depth(
    tiles_per_side: int, d_l: int, reach: int, c_sparse: int = 4
) -> int:
    """Depth model for tile permutations given range-`reach` physical SWAPs.

    reach >= ell uses transversal range-(reach // ell) tile hops plus the
    sparse-router polylog term; below that, the range-R SWAPs speed up the
    walking primitive itself.
    """
    if reach < 1:
        raise BilayerError("reach must be >= 1")
    ell = tile_side(d_l)
    l = tiles_per_side
    if reach >= ell:
        r1 = reach // ell
        hop = math.ceil(l / r1)
        log_r1 = math.log2(r1) if r1 > 1 else 0.0
        return (2 * d_l + 1) * 3 * hop + 8 + c_sparse * math.ceil(log_r1**2)
    walk = math.ceil(2 * d_l * ell / reach) + 1
    return walk * (3 * l - 3) + 8


def physical_qubit_count(tiles_per_side: int, d_l: int) -> int:
    """2 (ell+1)^2 (L+1)^2: both layers with tile and boundary buffers."""
    ell = tile_side(d_l)
    return 2 * (ell + 1) ** 2 * (tiles_per_side + 1) ** 2


def tile_layout(tiles_per_side: int, d_l: int) -> TileLayout:
    return TileLayout(
        tiles_per_side,
        d_l,
        tile_side(d_l),
        physical_qubit_count(tiles_per_side, d_l),
    )


def hierarchical_params(n: int, k: int, d: int, d_l: int) -> HierarchicalParams:
    if min(n, k, d, d_l) < 1:
        raise BilayerError("all parameters must be positive")
    return HierarchicalParams(N=n * d_l * d_l, K=k, D=d * d_l, n=n, k=k, d=d, d_l=d_l)


def biased_tile_dims(d_z: int, eta: float, p: float) -> tuple[int, int]:
    """Rectangular tile X/Z distances realizing at least an eta noise bias."""
    if not 0.0 < p < 1.0:
        raise BilayerError("p must be in (0, 1)")
    if eta < 1.0:
        raise BilayerError("eta must be >= 1")
    d_x = d_z + math.ceil(2.0 * math.log(eta) / math.log(1.0 / p))
    return d_x, d_z


# ---------------------------------------------------------------------------
# position-tracking simulator
# ---------------------------------------------------------------------------


@dataclass
class TileSimReport:
    tiles_per_side: int
    d_l: int
    total_depth: int
    rounds: int
    per_swap_depth: int
    exchanges: int = 0
    touched_sites: int = 0
    t_route_bound: int = 0
    within_t_route_bound: bool = False
    step_sizes: list[int] = field(default_factory=list)


class _TileSim:
    """Validating executor for physical swap steps on the bilayer lattice.

    Tile state: (layer, slot, du, dv) with offsets relative to the current
    slot's origin; slots re-anchor when a tile settles one pitch away.
    """

    def __init__(self, tiles_per_side: int, d_l: int):
        self.L = tiles_per_side
        self.d = d_l
        self.pitch = 2 * d_l
        self.border = 2 * d_l + 2
        self.n_tiles = 2 * self.L * self.L
        self.layer = [t // (self.L * self.L) for t in range(self.n_tiles)]
        self.slot = [t % (self.L * self.L) for t in range(self.n_tiles)]
        self.du = [0] * self.n_tiles
        self.dv = [0] * self.n_tiles
        self.depth = 0
        self.touched: set[tuple[int, int, int]] = set()
        self.step_sizes: list[int] = []
        self._pending: list[tuple[tuple[int, int, int], tuple[int, int, int]]] = []
        self._moved: dict[int, tuple[int, int]] = {}
        self._crossed: set[int] = set()

    # -- geometry ----------------------------------------------------------

    def origin(self, t: int) -> tuple[int, int]:
        gx, gy = divmod(self.slot[t], self.L)
        return (
            self.border + self.pitch * gx + self.du[t],
            self.border + self.pitch * gy + self.dv[t],
        )

    def data_sites(self, t: int) -> list[tuple[int, int]]:
        u0, v0 = self.origin(t)
        return [
            (u0 + 2 * a, v0 + 2 * b) for a in range(self.d) for b in range(self.d)
        ]

    def occupancy(self, layer: int) -> dict[tuple[int, int], int]:
        occ: dict[tuple[int, int], int] = {}
        for t in range(self.n_tiles):
            if self.layer[t] != layer:
                continue
            for s in self.data_sites(t):
                if s in occ:
                    raise BilayerError(
                        f"tiles {occ[s]} and {t} overlap at {s} in layer {layer}"
                    )
                occ[s] = t
        return occ

    def tile_at(self, layer: int, slot: int) -> int:
        for t in range(self.n_tiles):
            if self.layer[t] == layer and self.slot[t] == slot:
                return t
        raise BilayerError(f"no tile at layer {layer} slot {slot}")

    # -- step assembly ------------------------------------------------------

    def can_shift(self, t: int, su: int, sv: int) -> bool:
        """Whether tile t's diagonal shift is free of other tiles' data and
        of swaps already queued for this step."""
        lay = self.layer[t]
        occ = self.occupancy(lay)
        busy = {s for pair in self._pending for s in pair}
        for (u, v) in self.data_sites(t):
            tgt = (u + su, v + sv)
            other = occ.get(tgt)
            if other is not None and other != t:
                return False
            if (lay, u, v) in busy or (lay, *tgt) in busy:
                return False
        return True

    def shift(self, t: int, su: int, sv: int) -> None:
        """Queue a one-diagonal-step shift of tile t into the current step."""
        if abs(su) != 1 or abs(sv) != 1:
            raise BilayerError("tile shifts are single diagonal steps")
        if t in self._moved or t in self._crossed:
            raise BilayerError(f"step {self.depth}: tile {t} moved twice")
        lay = self.layer[t]
        occ = self.occupancy(lay)
        pairs = []
        for (u, v) in self.data_sites(t):
            tgt = (u + su, v + sv)
            other = occ.get(tgt)
            if other is not None and other != t:
                raise BilayerError(
                    f"step {self.depth}: shift of tile {t} pairs data of "
                    f"tile {other} at {tgt}"
                )
            pairs.append(((lay, u, v), (lay, *tgt)))
        self._pending.extend(pairs)
        self._moved[t] = (su, sv)

    def cross(self, tiles: list[int]) -> None:
        """Queue vertical swaps over the data sites of the listed tiles."""
        occ0 = self.occupancy(0)
        occ1 = self.occupancy(1)
        for t in set(tiles):
            for (u, v) in self.data_sites(t):
                t0, t1 = occ0.get((u, v)), occ1.get((u, v))
                if t0 is not None and t1 is not None:
                    raise BilayerError(
                        f"step {self.depth}: vertical swap pairs data of "
                        f"tiles {t0} and {t1} at {(u, v)}"
                    )
                self._pending.append(((0, u, v), (1, u, v)))
            if t in self._moved or t in self._crossed:
                raise BilayerError(f"step {self.depth}: tile {t} moved twice")
            self._crossed.add(t)

    def commit(self) -> None:
        """Validate and execute the queued step (possibly empty = EC idle)."""
        seen: set[tuple[int, int, int]] = set()
        for x, y in self._pending:
            for s in (x, y):
                if s in seen:
                    raise BilayerError(f"step {self.depth}: site {s} used twice")
                if (s[1] + s[2]) % 2 != 0:
                    raise BilayerError(f"step {self.depth}: site {s} off-lattice")
                seen.add(s)
            (la, ua, va), (lb, ub, vb) = x, y
            vertical = la != lb and (ua, va) == (ub, vb)
            diagonal = la == lb and abs(ua - ub) == 1 and abs(va - vb) == 1
            if not (vertical or diagonal):
                raise BilayerError(f"step {self.depth}: illegal swap {x}-{y}")
        self.touched.update(seen)
        self.step_sizes.append(len(self._pending))
        for t, (su, sv) in self._moved.items():
            self.du[t] += su
            self.dv[t] += sv
        for t in self._crossed:
            self.layer[t] = 1 - self.layer[t]
        self._pending = []
        self._moved = {}
        self._crossed = set()
        self.depth += 1

    def reanchor(self, t: int, new_slot: int) -> None:
        """Move a tile's bookkeeping to a new slot; offsets must match."""
        ogx, ogy = divmod(self.slot[t], self.L)
        ngx, ngy = divmod(new_slot, self.L)
        self.du[t] -= (ngx - ogx) * self.pitch
        self.dv[t] -= (ngy - ogy) * self.pitch
        self.slot[t] = new_slot


def _steer(sim: _TileSim, t: int, axis: str) -> int:
    """Zigzag sign for the off-axis coordinate, driving it toward zero."""
    off = sim.dv[t] if axis == "x" else sim.du[t]
    return -1 if off > 0 else 1


def _exchange_dance(
    sim: _TileSim, lay: int, slot_a: int, slot_b: int, axis: str
) -> None:
    """Exchange the two `lay`-layer tiles at adjacent slots (slot_b east of
    slot_a along axis), routing the right tile through the other layer.

    Sequence: the right tile staggers and drops to the freeway while the
    under-tiles swap out of the way; it walks one pitch west below; the
    blocking tile returns; the left tile walks east on the cleared lane; the
    traveler surfaces and re-aligns.
    """
    other = 1 - lay
    a_t = sim.tile_at(lay, slot_a)
    b_t = sim.tile_at(lay, slot_b)
    c_t = sim.tile_at(other, slot_a)
    d_t = sim.tile_at(other, slot_b)
    d = sim.d

    def vec(main: int, t: int) -> tuple[int, int]:
        s = _steer(sim, t, axis)
        return (main, s) if axis == "x" else (s, main)

    # 1. both pair members stagger onto the odd sublattice
    sim.shift(a_t, *vec(1, a_t))
    sim.shift(b_t, *vec(1, b_t))
    sim.commit()
    # 2. the left tile drops to the freeway; both under-tiles surface out of
    #    its path (the three vertical sets are parity/range-disjoint)
    sim.cross([a_t, c_t, d_t])
    sim.commit()
    # 3. the traveler rides the emptied freeway east one pitch; the left
    #    under-tile drops back once the traveler has passed its columns
    for k in range(2 * d):
        sim.shift(a_t, *vec(1, a_t))
        if k == 2 * d - 1:
            sim.cross([c_t])
        sim.commit()
    # 4. the right under-tile returns below (the traveler sits on the odd
    #    sublattice above it)
    sim.cross([d_t])
    sim.commit()
    # 5. the right tile walks the cleared lane west one pitch; the traveler
    #    surfaces and aligns behind it as soon as the lane opens
    b_steps = 2 * d + 1
    for j in range(b_steps):
        sim.shift(b_t, *vec(-1, b_t))
        if j == b_steps - 2:
            sim.cross([a_t])
        if j == b_steps - 1:
            sim.shift(a_t, *vec(-1, a_t))
        sim.commit()
    sim.reanchor(a_t, slot_b)
    sim.reanchor(b_t, slot_a)
    _settle(sim, [a_t, b_t, c_t, d_t])


def _settle(sim: _TileSim, tiles: list[int]) -> None:
    """Zero out residual offsets with explicit alignment steps."""
    guard = 0
    while True:
        moves = [
            t
            for t in tiles
            if sim.du[t] != 0 or sim.dv[t] != 0
        ]
        if not moves:
            return
        guard += 1
        if guard > 8:
            raise BilayerError(
                "alignment failed: residual offsets "
                + str([(t, sim.du[t], sim.dv[t]) for t in moves])
            )
        for t in moves:
            su = -1 if sim.du[t] > 0 else 1
            sv = -1 if sim.dv[t] > 0 else 1
            if sim.du[t] == 0:
                # pure-v residue is impossible on the diagonal lattice
                raise BilayerError(f"tile {t} has pure-v residue {sim.dv[t]}")
            sim.shift(t, su, sv)
        sim.commit()


def _vertical_exchange(sim: _TileSim, positions: list[int]) -> None:
    """Exchange top and bottom tiles of the listed grid slots (3 steps)."""
    if not positions:
        return
    tops = [sim.tile_at(1, p) for p in positions]
    bots = [sim.tile_at(0, p) for p in positions]
    for t in tops:
        sim.shift(t, 1, 1)
    sim.commit()
    sim.cross(tops + bots)
    sim.commit()
    for t in tops:  # now in the bottom layer, still offset
        sim.shift(t, -1, -1)
    sim.commit()


def _merge_decomposition(alpha: Permutation, slots: int):
    """Vertical pre/post exchange sets plus one grid permutation per layer."""
    from .routing import _pebble_coloring

    pebbles = []
    edges = []
    for layer in range(2):
        for pos in range(slots):
            dst = alpha[layer * slots + pos]
            pebbles.append((layer, pos, dst // slots, dst % slots))
            edges.append((pos, dst % slots))
    colors = _pebble_coloring(pebbles, edges, 2, slots)
    grid = [[-1] * slots, [-1] * slots]
    pre_swaps = []
    post_swaps = []
    seen_pre: dict[int, list[int]] = {}
    for (layer, pos, ld, pd), c in zip(pebbles, colors):
        seen_pre.setdefault(pos, []).append(c)
        if c != layer and pos not in pre_swaps:
            pre_swaps.append(pos)
        grid[c][pos] = pd
    # post: pebble with color c landing at pd must reach layer ld
    for (layer, pos, ld, pd), c in zip(pebbles, colors):
        if ld != c and pd not in post_swaps:
            post_swaps.append(pd)
    for pos, cs in seen_pre.items():
        if sorted(cs) != [0, 1]:
            raise BilayerError("internal: layer coloring not proper")
    return sorted(pre_swaps), grid[0], grid[1], sorted(post_swaps)


def _grid_rounds(beta: list[int], side: int):
    """Axis-homogeneous odd-even rounds realizing a grid permutation.

    Returns (axis, parity, moves) tuples where moves lists the left slots of
    swapping boundary pairs. Product structure: columns, rows, columns.
    """
    from .routing import _pebble_coloring

    perm = Permutation(tuple(beta))
    if perm.is_identity():
        return []
    pebbles = []
    edges = []
    for x in range(side):
        for y in range(side):
            dst = perm[x * side + y]
            pebbles.append((x, y, dst // side, dst % side))
            edges.append((y, dst % side))
    colors = _pebble_coloring(pebbles, edges, side, side)
    col1 = [[0] * side for _ in range(side)]
    rows = [[0] * side for _ in range(side)]
    col2 = [[0] * side for _ in range(side)]
    for (x, y, xd, yd), c in zip(pebbles, colors):
        col1[y][x] = c
        rows[c][y] = yd
        col2[yd][c] = xd

    rounds = []
    for block, (axis, perms) in enumerate((("x", col1), ("y", rows), ("x", col2))):
        dests = [list(p) for p in perms]
        for j in range(side):
            rho = j % 2
            moves = []
            for ln, dest in enumerate(dests):
                for a in range(rho, side - 1, 2):
                    if dest[a] > dest[a + 1]:
                        dest[a], dest[a + 1] = dest[a + 1], dest[a]
                        if axis == "x":
                            moves.append(a * side + ln)
                        else:
                            moves.append(ln * side + a)
            if moves:
                rounds.append((block, axis, rho, moves))
            if all(all(d[i] == i for i in range(side)) for d in dests):
                break
        for dest in dests:
            if any(dest[i] != i for i in range(side)):
                raise BilayerError("internal: odd-even tile routing stalled")
    return rounds


def tile_permutation_sim(
    tiles_per_side: int, d_l: int, alpha: Permutation
) -> TileSimReport:
    """Simulate a permutation of the 2 L^2 tiles at physical granularity.

    Verifies per step that swaps are disjoint and never pair data qubits of
    two distinct tiles, and at the end that every tile's data block sits
    exactly on its destination slot's footprint. A standalone adjacent-tile
    exchange is padded with error-correction idle steps to the canonical
    window of 2 d_l + 9; longer schedules report their measured depth and
    whether it met t_route + 9.
    """
    L = tiles_per_side
    if L > 6 or d_l > 5:
        raise BilayerError("position tracking is limited to L <= 6, d_l <= 5")
    slots = L * L
    if len(alpha) != 2 * slots:
        raise BilayerError("alpha must permute 2 L^2 tiles")

    bound = t_route(d_l, L) + 9 if L > 1 else 8 + 9
    report = TileSimReport(
        tiles_per_side=L,
        d_l=d_l,
        total_depth=0,
        rounds=0,
        per_swap_depth=2 * d_l + 9,
        t_route_bound=bound,
    )
    if alpha.is_identity():
        report.within_t_route_bound = True
        return report

    sim = _TileSim(L, d_l)
    pre_swaps, beta_bot, beta_top, post_swaps = _merge_decomposition(alpha, slots)
    rounds_bot = _grid_rounds(beta_bot, L)
    rounds_top = _grid_rounds(beta_top, L)

    _vertical_exchange(sim, pre_swaps)

    # merge per-layer rounds block-aligned; same-corridor double exchanges
    # are serialized inside the round executor
    merged = _align_rounds(rounds_bot, rounds_top)
    report.rounds = len(merged)
    exchanges = 0
    for axis, _parity, mv_bot, mv_top in merged:
        for s in mv_bot:
            _exchange_dance(sim, 0, s, _succ(s, axis, L), axis)
            exchanges += 1
        for s in mv_top:
            _exchange_dance(sim, 1, s, _succ(s, axis, L), axis)
            exchanges += 1

    _vertical_exchange(sim, post_swaps)

    # (c): every tile on its destination slot, layer and offsets exact
    for t in range(2 * slots):
        want = alpha[t]
        want_layer, want_slot = want // slots, want % slots
        if (
            sim.layer[t] != want_layer
            or sim.slot[t] != want_slot
            or sim.du[t] != 0
            or sim.dv[t] != 0
        ):
            raise BilayerError(
                f"tile {t}: ended (layer {sim.layer[t]}, slot {sim.slot[t]}, "
                f"offsets {sim.du[t]},{sim.dv[t]}), wanted (layer {want_layer}, "
                f"slot {want_slot}, 0,0)"
            )

    report.exchanges = exchanges
    report.touched_sites = len(sim.touched)
    depth = sim.depth
    if exchanges == 1 and not pre_swaps and not post_swaps:
        # standalone primitive: pad to the canonical EC-interleaved window
        depth = max(depth, 2 * d_l + 9)
    report.total_depth = depth
    report.step_sizes = sim.step_sizes
    report.within_t_route_bound = depth <= bound
    return report


def _succ(slot: int, axis: str, side: int) -> int:
    x, y = divmod(slot, side)
    return (x + 1) * side + y if axis == "x" else x * side + (y + 1)


def _align_rounds(rounds_a, rounds_b):
    """Zip the two layers' round lists into common (axis, parity) rounds."""
    ba: list[list] = [[], [], []]
    bb: list[list] = [[], [], []]
    for block, axis, parity, moves in rounds_a:
        ba[block].append((axis, parity, moves))
    for block, axis, parity, moves in rounds_b:
        bb[block].append((axis, parity, moves))
    axes = ("x", "y", "x")
    merged = []
    for blk in range(3):
        la, lb = ba[blk], bb[blk]
        for j in range(max(len(la), len(lb))):
            mv_a = la[j][2] if j < len(la) else []
            mv_b = lb[j][2] if j < len(lb) else []
            if mv_a or mv_b:
                merged.append((axes[blk], j % 2, mv_a, mv_b))
    return merged
