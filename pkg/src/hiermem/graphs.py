"""Graph families used as routing substrates.

Builders for paths, range-R nearest-neighbor lattices, complete graphs,
certified random-regular expanders, Cartesian products, and the sparse
(degree <= 12) spanning subgraph of the range-R lattice that the SWAP
router runs on.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field

import numpy as np

__all__ = [
    "Graph",
    "ExpanderCertificate",
    "GraphError",
    "CertificationError",
    "make_path",
    "make_nn1",
    "make_nn2",
    "make_complete",
    "cartesian_product",
    "spectral_lambda",
    "sample_expander",
    "build_sparse_router_graph",
    "lattice_index",
    "lattice_coord",
]

# Exact eigensolvers are used up to this vertex count; beyond it we switch
# to deflated power iteration.
_DENSE_EIG_LIMIT = 4096


class GraphError(ValueError):
    """Invalid graph parameters or graph-structure violation."""


class CertificationError(RuntimeError):
    """Expander sampling failed to certify within the allowed tries."""


@dataclass(frozen=True)
class Graph:
    """Undirected simple graph on vertices 0..vertex_count-1.

    ``coords`` optionally places every vertex on the integer lattice; when
    present it must be total and injective.
    """

    vertex_count: int
    edges: frozenset[tuple[int, int]]
    coords: dict[int, tuple[int, int]] | None = field(default=None)

    def __post_init__(self):
        if self.vertex_count < 0:
            raise GraphError("vertex_count must be nonnegative")
        for u, v in self.edges:
            if u == v:
                raise GraphError(f"self-loop at vertex {u}")
            if not (0 <= u < v < self.vertex_count):
                raise GraphError(f"edge ({u},{v}) not canonical or out of range")
        if self.coords is not None:
            if set(self.coords) != set(range(self.vertex_count)):
                raise GraphError("coords must cover every vertex exactly once")
            if len(set(self.coords.values())) != self.vertex_count:
                raise GraphError("coords must be distinct")

    @property
    def edge_count(self) -> int:
        return len(self.edges)

    def has_edge(self, u: int, v: int) -> bool:
        return (min(u, v), max(u, v)) in self.edges

    def degrees(self) -> list[int]:
        deg = [0] * self.vertex_count
        for u, v in self.edges:
            deg[u] += 1
            deg[v] += 1
        return deg

    def neighbors(self, u: int) -> list[int]:
        out = []
        for a, b in self.edges:
            if a == u:
                out.append(b)
            elif b == u:
                out.append(a)
        return sorted(out)

    def adjacency(self) -> dict[int, list[int]]:
        adj: dict[int, list[int]] = {u: [] for u in range(self.vertex_count)}
        for u, v in self.edges:
            adj[u].append(v)
            adj[v].append(u)
        for u in adj:
            adj[u].sort()
        return adj

    def is_connected(self) -> bool:
        if self.vertex_count == 0:
            return True
        adj = self.adjacency()
        seen = {0}
        stack = [0]
        while stack:
            u = stack.pop()
            for v in adj[u]:
                if v not in seen:
                    seen.add(v)
                    stack.append(v)
        return len(seen) == self.vertex_count

    def to_edge_list_text(self) -> str:
        """Serialize: header, sorted `u v` lines, optional coords section."""
        lines = [f"graph {self.vertex_count}"]
        for u, v in sorted(self.edges):
            lines.append(f"{u} {v}")
        if self.coords is not None:
            lines.append("coords")
            for u in range(self.vertex_count):
                x, y = self.coords[u]
                lines.append(f"{u} {x} {y}")
        return "\n".join(lines) + "\n"

    @staticmethod
    def from_edge_list_text(text: str) -> "Graph":
        lines = [ln for ln in text.splitlines() if ln.strip()]
        if not lines or not lines[0].startswith("graph "):
            raise GraphError("missing graph header")
        n = int(lines[0].split()[1])
        edges = set()
        coords: dict[int, tuple[int, int]] | None = None
        in_coords = False
        for ln in lines[1:]:
            if ln.strip() == "coords":
                in_coords = True
                coords = {}
                continue
            parts = ln.split()
            if in_coords:
                assert coords is not None
                coords[int(parts[0])] = (int(parts[1]), int(parts[2]))
            else:
                u, v = int(parts[0]), int(parts[1])
                edges.add((min(u, v), max(u, v)))
        return Graph(n, frozenset(edges), coords)


@dataclass(frozen=True)
class ExpanderCertificate:
    """Spectral certificate: all non-principal eigenvalues within lambda."""

    degree: int
    lam: float
    epsilon: float

    def __post_init__(self):
        if not self.lam < self.degree:
            raise CertificationError(
                f"lambda={self.lam} not below degree {self.degree}"
            )
        bound = 2.0 * np.sqrt(self.degree - 1) + self.epsilon
        if not self.lam <= bound:
            raise CertificationError(f"lambda={self.lam} exceeds bound {bound}")


def _edges(pairs) -> frozenset[tuple[int, int]]:
    return frozenset((min(u, v), max(u, v)) for u, v in pairs)


def make_path(length: int) -> Graph:
    """Path graph on `length` vertices; coords on a horizontal line."""
    if length < 1:
        raise GraphError("path length must be >= 1")
    edges = _edges((i, i + 1) for i in range(length - 1))
    coords = {i: (i + 1, 1) for i in range(length)}
    return Graph(length, edges, coords)


def make_nn1(length: int, reach: int) -> Graph:
    """1D lattice: vertices 0..L-1, edge iff 0 < |u-v| <= reach."""
    if length < 1 or reach < 1:
        raise GraphError("length and reach must be >= 1")
    edges = _edges(
        (u, v)
        for u in range(length)
        for v in range(u + 1, min(length, u + reach + 1))
    )
    coords = {i: (i + 1, 1) for i in range(length)}
    return Graph(length, edges, coords)


def lattice_index(x: int, y: int, side: int) -> int:
    """Row-major vertex index of lattice point (x, y), 0-indexed."""
    return x * side + y


def lattice_coord(v: int, side: int) -> tuple[int, int]:
    return divmod(v, side)


def make_nn2(side: int, reach: int) -> Graph:
    """2D lattice [side]x[side]: edge iff Euclidean distance <= reach."""
    if side < 1 or reach < 1:
        raise GraphError("side and reach must be >= 1")
    r2 = reach * reach
    edges = []
    for x in range(side):
        for y in range(side):
            u = lattice_index(x, y, side)
            # scan the forward half-window to emit each edge once
            for dx in range(0, reach + 1):
                for dy in range(-reach, reach + 1):
                    if dx == 0 and dy <= 0:
                        continue
                    if dx * dx + dy * dy > r2:
                        continue
                    nx, ny = x + dx, y + dy
                    if 0 <= nx < side and 0 <= ny < side:
                        edges.append((u, lattice_index(nx, ny, side)))
    coords = {lattice_index(x, y, side): (x, y) for x in range(side) for y in range(side)}
    return Graph(side * side, _edges(edges), coords)


def make_complete(m: int) -> Graph:
    if m < 1:
        raise GraphError("m must be >= 1")
    edges = _edges((u, v) for u in range(m) for v in range(u + 1, m))
    return Graph(m, edges)


def cartesian_product(g1: Graph, g2: Graph) -> Graph:
    """Cartesian product; vertex (u1, u2) gets index u1 * |V2| + u2."""
    n2 = g2.vertex_count
    edges = []
    for u1, v1 in g1.edges:
        for u2 in range(n2):
            edges.append((u1 * n2 + u2, v1 * n2 + u2))
    for u2, v2 in g2.edges:
        for u1 in range(g1.vertex_count):
            edges.append((u1 * n2 + u2, u1 * n2 + v2))
    return Graph(g1.vertex_count * n2, _edges(edges))


def _adjacency_matrix(g: Graph) -> np.ndarray:
    a = np.zeros((g.vertex_count, g.vertex_count), dtype=float)
    for u, v in g.edges:
        a[u, v] = 1.0
        a[v, u] = 1.0
    return a


def spectral_lambda(g: Graph, tol: float = 1e-8) -> float:
    """Largest |eigenvalue| of the adjacency matrix over the non-principal
    eigenvectors of a regular graph.

    Exact symmetric eigendecomposition up to 4096 vertices; deflated power
    iteration beyond that.
    """
    degs = g.degrees()
    if len(set(degs)) > 1:
        raise GraphError("spectral_lambda requires a regular graph")
    n = g.vertex_count
    if n <= 1:
        return 0.0
    if n <= _DENSE_EIG_LIMIT:
        eig = np.linalg.eigvalsh(_adjacency_matrix(g))
        # For a connected regular graph the principal eigenvalue is the
        # degree; drop one copy of the maximum and take max |.| of the rest.
        idx = int(np.argmax(eig))
        rest = np.delete(eig, idx)
        return float(np.max(np.abs(rest)))
    return _power_lambda(g, tol)


def _power_lambda(g: Graph, tol: float) -> float:
    # Deflate the uniform principal eigenvector, then power-iterate on
    # B = A - (d/n) J whose largest |eigenvalue| is the wanted lambda.
    n = g.vertex_count
    d = g.degrees()[0]
    adj = g.adjacency()
    rng = np.random.default_rng(12345)
    x = rng.standard_normal(n)
    x -= x.mean()
    x /= np.linalg.norm(x)
    lam = 0.0
    for _ in range(10000):
        y = np.zeros(n)
        for u, nbrs in adj.items():
            y[u] = sum(x[v] for v in nbrs)
        y -= y.mean()
        nrm = np.linalg.norm(y)
        if nrm == 0:
            return 0.0
        y /= nrm
        new_lam = abs(float(y @ _apply_adj(adj, y, n)))
        if abs(new_lam - lam) < tol:
            return new_lam
        lam = new_lam
        x = y
    return lam


def _apply_adj(adj: dict[int, list[int]], x: np.ndarray, n: int) -> np.ndarray:
    y = np.zeros(n)
    for u, nbrs in adj.items():
        y[u] = sum(x[v] for v in nbrs)
    return y


def _pairing_model_regular(m: int, d: int, rng: random.Random) -> frozenset[tuple[int, int]] | None:
    """One configuration-model draw; None if it has loops or multi-edges."""
    points = list(range(m * d))
    rng.shuffle(points)
    edges = set()
    for i in range(0, len(points), 2):
        u, v = points[i] // d, points[i + 1] // d
        if u == v:
            return None
        e = (min(u, v), max(u, v))
        if e in edges:
            return None
        edges.add(e)
    return frozenset(edges)


def sample_expander(
    m: int,
    d: int = 4,
    epsilon: float = 0.5,
    seed: int = 0,
    max_tries: int = 5000,
) -> tuple[Graph, ExpanderCertificate]:
    """Sample a certified (m, d, lambda)-spectral expander.

    Uses the configuration (pairing) model, rejecting draws with self-loops
    or multi-edges, and certifies lambda <= 2*sqrt(d-1) + epsilon by
    eigendecomposition. Resamples until the certificate holds.
    """
    if m % 2 != 0:
        raise GraphError("m must be even for a d-regular pairing")
    if d % 2 != 0 or d < 4:
        raise GraphError("d must be even and >= 4")
    if m <= d:
        raise GraphError("need m > d")
    rng = random.Random(seed)
    bound = 2.0 * np.sqrt(d - 1) + epsilon
    for _ in range(max_tries):
        edges = _pairing_model_regular(m, d, rng)
        if edges is None:
            continue
        g = Graph(m, edges)
        lam = spectral_lambda(g)
        if lam <= bound and lam < d:
            return g, ExpanderCertificate(degree=d, lam=lam, epsilon=epsilon)
    raise CertificationError(
        f"no certified ({m},{d})-expander with eps={epsilon} in {max_tries} tries"
    )


def _eta_axis_graph(side: int, reach: int, seed: int) -> Graph:
    """Row graph on [side]: the Lemma-style embedding of expander x path.

    Vertices 0..side-1 where position p = a*reach + b maps block index a in
    [side/reach] and within-block index b in [reach]. Edges are path edges
    between consecutive blocks (same b) plus intra-block expander (or small
    complete-graph fallback) edges.
    """
    blocks = side // reach
    if reach >= 6:
        inner, _cert = sample_expander(reach, 4, 0.5, seed)
    else:
        # R in {2, 4}: no simple 4-regular graph exists; fall back to K_R.
        inner = make_complete(reach)
    edges = []
    for a in range(blocks):
        for u, v in inner.edges:
            edges.append((a * reach + u, a * reach + v))
    for a in range(blocks - 1):
        for b in range(reach):
            edges.append((a * reach + b, (a + 1) * reach + b))
    coords = {i: (i + 1, 1) for i in range(side)}
    return Graph(side, _edges(edges), coords)


def build_sparse_router_graph(side: int, reach: int, seed: int = 0) -> Graph:
    """Degree <= 12 spanning subgraph of nn2(side, reach).

    Product of two per-axis graphs, each an expander-times-path embedded so
    every edge has Euclidean length <= reach.
    """
    if reach % 2 != 0:
        raise GraphError("reach must be even")
    if side % reach != 0:
        raise GraphError("reach must divide side")
    ax_x = _eta_axis_graph(side, reach, seed)
    ax_y = _eta_axis_graph(side, reach, seed + 1)
    prod = cartesian_product(ax_x, ax_y)
    coords = {
        lattice_index(x, y, side): (x, y) for x in range(side) for y in range(side)
    }
    return Graph(prod.vertex_count, prod.edges, coords)
