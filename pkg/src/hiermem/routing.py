"""Permutation routing: the pebble-exchange game on graphs.

Routers for paths (odd-even transposition), complete graphs (two-involution
cycle decomposition), Cartesian products (pre-route via bipartite edge
coloring), expanders (verified heuristics), and the range-R lattice, plus an
independent schedule verifier.

Permutations use one-line notation with 0-indexed storage: ``alpha[u]`` is
the destination of the pebble that starts on vertex u.
"""

from __future__ import annotations

import hashlib
import random
from collections import deque
from dataclasses import dataclass, field

from .graphs import (
    Graph,
    GraphError,
    build_sparse_router_graph,
    cartesian_product,
    lattice_index,
    make_complete,
    make_nn2,
    make_path,
    sample_expander,
)

__all__ = [
    "Permutation",
    "SimplePermutation",
    "RoutingSchedule",
    "RoutingError",
    "route_path",
    "route_complete",
    "edge_color_bipartite",
    "route_product",
    "route_expander",
    "route_lattice",
    "verify_routing",
    "identity_permutation",
    "random_permutation",
]


class RoutingError(ValueError):
    """Invalid routing input (size mismatch, bad mode, disconnected graph)."""


@dataclass(frozen=True)
class Permutation:
    """Bijection on [n]; map[u] = destination of the pebble starting at u."""

    map: tuple[int, ...]

    def __post_init__(self):
        n = len(self.map)
        if sorted(self.map) != list(range(n)):
            raise RoutingError("not a bijection")

    def __len__(self) -> int:
        return len(self.map)

    def __getitem__(self, u: int) -> int:
        return self.map[u]

    def inverse(self) -> "Permutation":
        inv = [0] * len(self.map)
        for u, v in enumerate(self.map):
            inv[v] = u
        return Permutation(tuple(inv))

    def compose(self, other: "Permutation") -> "Permutation":
        """self after other: (self . other)[u] = self[other[u]]."""
        return Permutation(tuple(self.map[other.map[u]] for u in range(len(self))))

    def is_identity(self) -> bool:
        return all(v == u for u, v in enumerate(self.map))

    @staticmethod
    def from_one_line_1indexed(values) -> "Permutation":
        return Permutation(tuple(v - 1 for v in values))


def identity_permutation(n: int) -> Permutation:
    return Permutation(tuple(range(n)))


def random_permutation(n: int, seed: int) -> Permutation:
    vals = list(range(n))
    random.Random(seed).shuffle(vals)
    return Permutation(tuple(vals))


@dataclass(frozen=True)
class SimplePermutation:
    """Pairwise-disjoint transpositions executable in one parallel step."""

    transpositions: frozenset[tuple[int, int]]

    def __post_init__(self):
        seen = set()
        for u, v in self.transpositions:
            if u == v:
                raise RoutingError("transposition must move two vertices")
            if u in seen or v in seen:
                raise RoutingError("non-disjoint transpositions in one step")
            seen.add(u)
            seen.add(v)

    def __len__(self) -> int:
        return len(self.transpositions)

    def apply_to(self, labels: list[int]) -> None:
        for u, v in self.transpositions:
            labels[u], labels[v] = labels[v], labels[u]


def _step(pairs) -> SimplePermutation:
    return SimplePermutation(frozenset((min(u, v), max(u, v)) for u, v in pairs))


@dataclass
class RoutingSchedule:
    """Ordered simple permutations realizing a target on a routing graph."""

    graph: Graph
    steps: list[SimplePermutation] = field(default_factory=list)

    @property
    def depth(self) -> int:
        return len(self.steps)

    def final_positions(self, n: int | None = None) -> list[int]:
        """final[u] = where the pebble that started at u ends up."""
        n = self.graph.vertex_count if n is None else n
        pos = list(range(n))  # pos_of_pebble inverse: slot -> pebble
        slot_holds = list(range(n))
        for step in self.steps:
            step.apply_to(slot_holds)
        final = [0] * n
        for slot, pebble in enumerate(slot_holds):
            final[pebble] = slot
        del pos
        return final

    def graph_hash(self) -> str:
        return hashlib.sha256(self.graph.to_edge_list_text().encode()).hexdigest()[:16]

    def to_text(self) -> str:
        lines = [f"route {self.graph_hash()} {self.depth}"]
        for step in self.steps:
            toks = [f"{u}-{v}" for u, v in sorted(step.transpositions)]
            lines.append(" ".join(toks))
        return "\n".join(lines) + "\n"

    @staticmethod
    def steps_from_text(text: str) -> list[SimplePermutation]:
        lines = text.splitlines()
        if not lines or not lines[0].startswith("route "):
            raise RoutingError("missing route header")
        steps = []
        for ln in lines[1:]:
            if not ln.strip():
                continue
            pairs = []
            for tok in ln.split():
                u, v = tok.split("-")
                pairs.append((int(u), int(v)))
            steps.append(_step(pairs))
        return steps


def _drop_empty(steps: list[SimplePermutation]) -> list[SimplePermutation]:
    # empty steps are identity layers; depth counts executed swap layers only
    return [s for s in steps if len(s) > 0]


def route_path(alpha: Permutation, length: int) -> RoutingSchedule:
    """Odd-even transposition routing on the path graph.

    Swaps whenever the left pebble's destination exceeds the right one's
    (ascending sort of destinations). Runs at most `length` phases with
    trailing empty phases trimmed; see the module tests for why length-1
    phases do not always suffice.
    """
    if len(alpha) != length:
        raise RoutingError(f"alpha has size {len(alpha)}, expected {length}")
    g = make_path(length)
    dest = list(alpha.map)  # dest[slot] = destination of pebble at slot
    steps: list[SimplePermutation] = []
    for phase in range(length):
        if all(dest[i] == i for i in range(length)):
            break
        offset = phase % 2
        pairs = []
        for a in range(offset, length - 1, 2):
            if dest[a] > dest[a + 1]:
                pairs.append((a, a + 1))
                dest[a], dest[a + 1] = dest[a + 1], dest[a]
        steps.append(_step(pairs))
    if any(dest[i] != i for i in range(length)):
        raise RoutingError("odd-even routing did not converge within L phases")
    return RoutingSchedule(g, _drop_empty(steps))


def route_complete(alpha: Permutation, m: int) -> RoutingSchedule:
    """Depth <= 2 routing on K_m: each cycle as a product of two involutions."""
    if len(alpha) != m:
        raise RoutingError(f"alpha has size {len(alpha)}, expected {m}")
    g = make_complete(m)
    seen = [False] * m
    step1, step2 = [], []
    for start in range(m):
        if seen[start]:
            continue
        cyc = []
        u = start
        while not seen[u]:
            seen[u] = True
            cyc.append(u)
            u = alpha[u]
        k = len(cyc)
        if k == 1:
            continue
        # rho1 reverses the cycle, rho2 reverses it shifted by one;
        # alpha restricted to the cycle equals rho2 . rho1.
        for i in range(k // 2):
            step1.append((cyc[i], cyc[k - 1 - i]))
        for i in range(1, (k + 1) // 2):
            step2.append((cyc[i], cyc[k - i]))
    steps = [_step(step1), _step(step2)]
    return RoutingSchedule(g, _drop_empty(steps))


def edge_color_bipartite(
    edges: list[tuple[int, int]], left: int, right: int, colors: int
) -> list[int]:
    """Properly edge-color a bipartite multigraph with at most `colors` colors.

    ``edges[i] = (u, v)`` with u in [left], v in [right]; parallel edges
    allowed. Pads to a colors-regular multigraph with dummy edges and peels
    one perfect matching per color via augmenting paths.

    Returns the color of each input edge.
    """
    deg_l = [0] * left
    deg_r = [0] * right
    for u, v in edges:
        deg_l[u] += 1
        deg_r[v] += 1
    if max(deg_l, default=0) > colors or max(deg_r, default=0) > colors:
        raise RoutingError("degree exceeds available colors")

    # Pad with dummy edges until colors-regular on both sides. Dummy slots
    # are consumed greedily; total deficiency is equal on both sides once the
    # sides are padded to a common size.
    size = max(left, right)
    work_edges = list(edges)
    deg_l += [0] * (size - left)
    deg_r += [0] * (size - right)
    li = ri = 0
    while True:
        while li < size and deg_l[li] >= colors:
            li += 1
        while ri < size and deg_r[ri] >= colors:
            ri += 1
        if li >= size or ri >= size:
            break
        work_edges.append((li, ri))
        deg_l[li] += 1
        deg_r[ri] += 1

    color = [-1] * len(work_edges)
    remaining = set(range(len(work_edges)))
    for c in range(colors):
        if not remaining:
            break
        match = _perfect_matching([work_edges[i] for i in sorted(remaining)], size)
        chosen_ids = []
        by_pair: dict[tuple[int, int], list[int]] = {}
        for i in sorted(remaining):
            by_pair.setdefault(work_edges[i], []).append(i)
        for u, v in match:
            chosen_ids.append(by_pair[(u, v)].pop())
        for i in chosen_ids:
            color[i] = c
            remaining.discard(i)
    if remaining:
        raise RoutingError("internal: matching peel left uncolored edges")
    return color[: len(edges)]


def _perfect_matching(edges: list[tuple[int, int]], size: int) -> list[tuple[int, int]]:
    """Perfect matching of a regular bipartite multigraph (augmenting paths)."""
    adj: dict[int, list[int]] = {u: [] for u in range(size)}
    for u, v in edges:
        adj[u].append(v)
    match_l = [-1] * size
    match_r = [-1] * size

    def augment(u: int, seen: list[bool]) -> bool:
        for v in adj[u]:
            if seen[v]:
                continue
            seen[v] = True
            if match_r[v] == -1 or augment(match_r[v], seen):
                match_l[u] = v
                match_r[v] = u
                return True
        return False

    for u in range(size):
        if match_l[u] == -1:
            if not augment(u, [False] * size):
                raise RoutingError("internal: no perfect matching in regular graph")
    return [(u, match_l[u]) for u in range(size)]


def _pebble_coloring(pebbles, edges, n1: int, n2: int) -> list[int]:
    """Color the column-to-column multigraph, preferring pebbles' own rows.

    Coloring an edge with its pebble's source row keeps the pre-routing
    column permutation trivial; that choice is proper exactly when no two
    pebbles of one row share a destination column, which covers identity,
    row-only and column-only permutations. Otherwise fall back to the
    matching-peel coloring and relabel colors to maximize stay-in-place
    pebbles.
    """
    natural_ok = True
    seen_r: set[tuple[int, int]] = set()
    for v1, _u2, _v1d, u2d in pebbles:
        if (u2d, v1) in seen_r:
            natural_ok = False
            break
        seen_r.add((u2d, v1))
    if natural_ok:
        return [v1 for v1, _, _, _ in pebbles]

    colors = edge_color_bipartite(edges, n2, n2, n1)
    # greedy color -> row relabeling maximizing pebbles whose pre-route is a
    # no-op (color assigned to their own source row)
    stay = [[0] * n1 for _ in range(n1)]  # stay[color][row]
    for (v1, _, _, _), c in zip(pebbles, colors):
        stay[c][v1] += 1
    options = sorted(
        ((-stay[c][r], c, r) for c in range(n1) for r in range(n1))
    )
    row_of_color = [-1] * n1
    used_rows = [False] * n1
    for _neg, c, r in options:
        if row_of_color[c] == -1 and not used_rows[r]:
            row_of_color[c] = r
            used_rows[r] = True
    return [row_of_color[c] for c in colors]


def route_product(
    alpha: Permutation,
    g1: Graph,
    g2: Graph,
    router1,
    router2,
) -> RoutingSchedule:
    """Route on the Cartesian product G1 x G2.

    Vertices are indexed v1 * |V2| + u2. Columns (fixed u2) are copies of G1
    routed by router1; rows (fixed v1) are copies of G2 routed by router2.
    A proper edge coloring of the column-to-column bipartite multigraph picks
    the intermediate row of every pebble, after which the route is a column
    permutation, a row permutation, and a final column permutation.
    """
    n1, n2 = g1.vertex_count, g2.vertex_count
    if len(alpha) != n1 * n2:
        raise RoutingError("alpha size does not match the product graph")
    prod = cartesian_product(g1, g2)

    pebbles = []  # (v1, u2, v1_dst, u2_dst)
    edges = []
    for v1 in range(n1):
        for u2 in range(n2):
            dst = alpha[v1 * n2 + u2]
            pebbles.append((v1, u2, dst // n2, dst % n2))
            edges.append((u2, dst % n2))
    colors = _pebble_coloring(pebbles, edges, n1, n2)

    # alpha1p: within each column, send the pebble to its color's row.
    # alpha2: within each row, send it to its destination column.
    # alpha1: within each column, send it to its destination row.
    col_perm_1 = [[0] * n1 for _ in range(n2)]  # per column u2: row -> row
    row_perm = [[0] * n2 for _ in range(n1)]
    col_perm_2 = [[0] * n1 for _ in range(n2)]
    for (v1, u2, v1d, u2d), c in zip(pebbles, colors):
        col_perm_1[u2][v1] = c
        row_perm[c][u2] = u2d
        col_perm_2[u2d][c] = v1d

    def column_steps(perms: list[list[int]]) -> list[SimplePermutation]:
        scheds = [router1(Permutation(tuple(p)), g1) for p in perms]
        depth = max((s.depth for s in scheds), default=0)
        out = []
        for t in range(depth):
            pairs = []
            for u2, s in enumerate(scheds):
                if t < s.depth:
                    for a, b in s.steps[t].transpositions:
                        pairs.append((a * n2 + u2, b * n2 + u2))
            out.append(_step(pairs))
        return out

    def row_steps(perms: list[list[int]]) -> list[SimplePermutation]:
        scheds = [router2(Permutation(tuple(p)), g2) for p in perms]
        depth = max((s.depth for s in scheds), default=0)
        out = []
        for t in range(depth):
            pairs = []
            for v1, s in enumerate(scheds):
                if t < s.depth:
                    for a, b in s.steps[t].transpositions:
                        pairs.append((v1 * n2 + a, v1 * n2 + b))
            out.append(_step(pairs))
        return out

    steps = column_steps(col_perm_1) + row_steps(row_perm) + column_steps(col_perm_2)
    return RoutingSchedule(prod, _drop_empty(steps))


def _bfs_tree(g: Graph, root: int = 0) -> dict[int, list[int]]:
    adj = g.adjacency()
    parent = {root: root}
    order = [root]
    dq = deque([root])
    while dq:
        u = dq.popleft()
        for v in adj[u]:
            if v not in parent:
                parent[v] = u
                order.append(v)
                dq.append(v)
    if len(parent) != g.vertex_count:
        raise RoutingError("graph is disconnected")
    tree_adj: dict[int, list[int]] = {u: [] for u in range(g.vertex_count)}
    for v, p in parent.items():
        if v != p:
            tree_adj[v].append(p)
            tree_adj[p].append(v)
    return tree_adj


def _tree_route(alpha: Permutation, g: Graph) -> list[SimplePermutation]:
    """Fix BFS-tree leaves one by one, greedily packing the walk swaps."""
    n = g.vertex_count
    tree = _bfs_tree(g)
    # Peeling order: repeatedly remove leaves of the shrinking tree.
    alive = {u: set(vs) for u, vs in tree.items()}
    peel: list[int] = []
    frontier = deque(u for u in range(n) if len(alive[u]) <= 1)
    removed = set()
    while frontier:
        u = frontier.popleft()
        if u in removed:
            continue
        removed.add(u)
        peel.append(u)
        for v in list(alive[u]):
            alive[v].discard(u)
            alive[u].discard(v)
            if len(alive[v]) == 1 and v not in removed:
                frontier.append(v)
    # Walk each target's pebble home through the unfixed subtree, recording
    # the swap sequence, then compact it: disjoint swaps commute, so each
    # swap floats up to the first step after its last vertex conflict.
    slot_holds = list(range(n))
    seq: list[list[tuple[int, int]]] = []
    fixed: set[int] = set()
    for target in peel:
        pebble = None
        for u in range(n):
            if alpha[slot_holds[u]] == target:
                pebble = u
                break
        assert pebble is not None
        path = _tree_path(tree, pebble, target, fixed)
        for a, b in zip(path, path[1:]):
            slot_holds[a], slot_holds[b] = slot_holds[b], slot_holds[a]
            seq.append([(a, b)])
        fixed.add(target)
    return _pack_asap(seq, n)


def _tree_path(tree: dict[int, list[int]], src: int, dst: int, blocked: set[int]) -> list[int]:
    if src == dst:
        return [src]
    prev = {src: src}
    dq = deque([src])
    while dq:
        u = dq.popleft()
        for v in tree[u]:
            if v in prev or (v in blocked and v != dst):
                continue
            prev[v] = u
            if v == dst:
                path = [v]
                while path[-1] != src:
                    path.append(prev[path[-1]])
                return path[::-1]
            dq.append(v)
    raise RoutingError("internal: tree path not found")


def _greedy_route(alpha: Permutation, g: Graph, seed: int) -> list[SimplePermutation]:
    """Potential-descent matching heuristic with seeded deadlock breaking.

    Descends Phi = sum of pebble distances to destinations with maximal
    improving matchings. On a plateau the unsatisfied pebble nearest its
    destination walks home along a seeded-random shortest path; single
    non-worsening kick swaps turned out to ping-pong on plateaus, so the
    full walk is used instead. The swap stream is then compacted into
    parallel layers.
    """
    n = g.vertex_count
    adj = g.adjacency()
    dist = _all_pairs_bfs(g)
    rng = random.Random(seed)
    slot_holds = list(range(n))

    def phi_term(slot: int) -> int:
        return dist[slot][alpha[slot_holds[slot]]]

    groups: list[list[tuple[int, int]]] = []
    guard = 0
    while any(phi_term(s) for s in range(n)):
        guard += 1
        if guard > 50 * n + 1000:
            raise RoutingError("greedy expander routing failed to terminate")
        improving = []
        for u, v in sorted(g.edges):
            du = dist[u][alpha[slot_holds[u]]] + dist[v][alpha[slot_holds[v]]]
            ds = dist[v][alpha[slot_holds[u]]] + dist[u][alpha[slot_holds[v]]]
            if ds < du:
                improving.append((ds - du, u, v))
        if improving:
            improving.sort()
            used = set()
            pairs = []
            for _, u, v in improving:
                if u in used or v in used:
                    continue
                used.add(u)
                used.add(v)
                pairs.append((u, v))
                slot_holds[u], slot_holds[v] = slot_holds[v], slot_holds[u]
            groups.append(pairs)
        else:
            # Plateau: walk the unsatisfied pebble nearest its destination
            # all the way home along a seeded-random shortest path. Each hop
            # is non-worsening; the walk always fixes one pebble, which keeps
            # the plateau escape from ping-ponging.
            cands = sorted((phi_term(s), s) for s in range(n) if phi_term(s) > 0)
            _, cur = cands[0]
            target = alpha[slot_holds[cur]]
            while cur != target:
                toward = [v for v in adj[cur] if dist[v][target] < dist[cur][target]]
                v = toward[rng.randrange(len(toward))]
                slot_holds[cur], slot_holds[v] = slot_holds[v], slot_holds[cur]
                groups.append([(cur, v)])
                cur = v
    return _pack_asap(groups, n)


def _pack_asap(groups: list[list[tuple[int, int]]], n: int) -> list[SimplePermutation]:
    """Compact a swap sequence: disjoint swaps commute, so every swap floats
    up to the first step after its latest vertex conflict."""
    last_use = [-1] * n
    packed: list[list[tuple[int, int]]] = []
    for grp in groups:
        for u, v in grp:
            t = max(last_use[u], last_use[v]) + 1
            if t == len(packed):
                packed.append([])
            packed[t].append((u, v))
            last_use[u] = t
            last_use[v] = t
    return [_step(pairs) for pairs in packed]


def _all_pairs_bfs(g: Graph) -> list[list[int]]:
    adj = g.adjacency()
    n = g.vertex_count
    out = []
    for s in range(n):
        d = [-1] * n
        d[s] = 0
        dq = deque([s])
        while dq:
            u = dq.popleft()
            for v in adj[u]:
                if d[v] == -1:
                    d[v] = d[u] + 1
                    dq.append(v)
        if any(x == -1 for x in d):
            raise RoutingError("graph is disconnected")
        out.append(d)
    return out


def route_expander(
    alpha: Permutation, g: Graph, strategy: str = "greedy", seed: int = 0
) -> RoutingSchedule:
    """Route on a connected (expander) graph with a verified heuristic.

    `tree` fixes leaves of a BFS spanning tree; `greedy` descends the total
    distance-to-destination potential with maximal improving matchings and a
    seeded deadlock-breaking swap.
    """
    if len(alpha) != g.vertex_count:
        raise RoutingError("alpha size does not match graph")
    if alpha.is_identity():
        return RoutingSchedule(g, [])
    if strategy == "tree":
        steps = _tree_route(alpha, g)
    elif strategy == "greedy":
        steps = _greedy_route(alpha, g, seed)
    else:
        raise RoutingError(f"unknown strategy {strategy!r}")
    sched = RoutingSchedule(g, _drop_empty(steps))
    ok, why = verify_routing(alpha, sched)
    if not ok:
        raise RoutingError(f"internal: expander routing invalid: {why}")
    return sched


def _eta_block_perm_router(reach: int, seed: int):
    """Router for the within-block factor: K_R or a seeded expander."""
    if reach >= 6:
        inner, _ = sample_expander(reach, 4, 0.5, seed)

        def rt(beta: Permutation, _g: Graph) -> RoutingSchedule:
            return route_expander(beta, inner, "greedy", seed)

        return rt, inner

    inner = make_complete(reach)

    def rt(beta: Permutation, _g: Graph) -> RoutingSchedule:
        return route_complete(beta, reach)

    return rt, inner


def route_lattice(
    alpha: Permutation,
    side: int,
    reach: int = 1,
    mode: str = "unit",
    seed: int = 0,
) -> RoutingSchedule:
    """Route a permutation of the [side]x[side] lattice.

    unit:   product of two paths (nearest-neighbor swaps only).
    dense:  product of two (path x K_R) factor graphs; needs reach even,
            reach | side.
    sparse: as dense with a certified expander replacing K_R; every swap is
            an edge of the degree-12 router subgraph.

    The returned schedule's graph is nn2(side, reach); every transposition is
    additionally validated against it.
    """
    n = side * side
    if len(alpha) != n:
        raise RoutingError("alpha size does not match lattice")
    if mode == "unit":
        path = make_path(side)

        def pr(beta: Permutation, _g: Graph) -> RoutingSchedule:
            return route_path(beta, side)

        sched = route_product(alpha, path, path, pr, pr)
        lattice = make_nn2(side, 1)
        out = RoutingSchedule(lattice, sched.steps)
    elif mode in ("dense", "sparse"):
        if reach % 2 != 0 or side % reach != 0:
            raise RoutingError("dense/sparse modes need even reach dividing side")
        blocks = side // reach

        if mode == "dense":
            def block_router(beta: Permutation, _g: Graph) -> RoutingSchedule:
                return route_complete(beta, reach)

            inner = make_complete(reach)
        else:
            block_router, inner = _eta_block_perm_router(reach, seed)

        path = make_path(blocks)

        def path_router(beta: Permutation, _g: Graph) -> RoutingSchedule:
            return route_path(beta, blocks)

        # Axis vertices are indexed (b, a) -> b * blocks + a to match the
        # inner-first product used by axis_router.
        axis = cartesian_product(inner, path)

        def axis_router(beta: Permutation, _g: Graph) -> RoutingSchedule:
            return route_product(beta, inner, path, block_router, path_router)

        # Axis factor vertices are ordered (b, a) with index b * blocks + a;
        # eta maps (a, b) -> a * reach + b on the axis line. Build alpha in
        # product coordinates, route, then map steps back to lattice indices.
        def axis_pos_of_line(x: int) -> int:
            a, b = divmod(x, reach)
            return b * blocks + a

        def line_of_axis_pos(p: int) -> int:
            b, a = divmod(p, blocks)
            return a * reach + b

        m = side  # vertices per axis
        prod_alpha = [0] * n
        for x in range(side):
            for y in range(side):
                dst = alpha[lattice_index(x, y, side)]
                dx, dy = divmod(dst, side)
                prod_alpha[axis_pos_of_line(x) * m + axis_pos_of_line(y)] = (
                    axis_pos_of_line(dx) * m + axis_pos_of_line(dy)
                )
        sched = route_product(
            Permutation(tuple(prod_alpha)), axis, axis, axis_router, axis_router
        )

        def to_lattice(v: int) -> int:
            p1, p2 = divmod(v, m)
            return lattice_index(line_of_axis_pos(p1), line_of_axis_pos(p2), side)

        lattice = make_nn2(side, reach)
        steps = []
        for st in sched.steps:
            steps.append(
                _step((to_lattice(u), to_lattice(v)) for u, v in st.transpositions)
            )
        out = RoutingSchedule(lattice, steps)
    else:
        raise RoutingError(f"unknown mode {mode!r}")

    ok, why = verify_routing(alpha, out)
    if not ok:
        raise RoutingError(f"internal: lattice routing invalid: {why}")
    return out


def verify_routing(alpha: Permutation, schedule: RoutingSchedule) -> tuple[bool, str]:
    """Independent check of a routing schedule.

    True iff every transposition is an edge of the schedule's graph, each
    step's transpositions are disjoint (enforced structurally), and applying
    the steps to the identity labeling realizes alpha.
    """
    g = schedule.graph
    n = g.vertex_count
    if len(alpha) != n:
        return False, "size mismatch"
    for t, st in enumerate(schedule.steps):
        seen = set()
        for u, v in st.transpositions:
            if not g.has_edge(u, v):
                return False, f"step {t}: ({u},{v}) is not an edge"
            if u in seen or v in seen:
                return False, f"step {t}: non-disjoint transpositions"
            seen.add(u)
            seen.add(v)
    slot_holds = list(range(n))
    for st in schedule.steps:
        st.apply_to(slot_holds)
    for slot, pebble in enumerate(slot_holds):
        if alpha[pebble] != slot:
            return False, "wrong permutation"
    return True, "ok"
