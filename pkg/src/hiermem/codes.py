"""GF(2) linear algebra and CSS code constructors.

Bit-packed binary matrices, sampled regular classical parity checks,
hypergraph-product quantum codes, and rotated surface codes with planar
layout. Rows are stored as Python ints (bit j of row i = entry (i, j)).
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from itertools import combinations

__all__ = [
    "BinaryMatrix",
    "CssCode",
    "CodeParams",
    "CodeError",
    "rank_f2",
    "sample_regular_parity_check",
    "hypergraph_product",
    "hgp_params",
    "rotated_surface_code",
    "code_params",
    "distance_bruteforce",
]


class CodeError(ValueError):
    """Invalid code parameters or construction failure."""


@dataclass(frozen=True)
class BinaryMatrix:
    """Immutable bit matrix over GF(2); row i is the int bits[i]."""

    rows: int
    cols: int
    bits: tuple[int, ...]

    def __post_init__(self):
        if len(self.bits) != self.rows:
            raise CodeError("row count mismatch")
        mask = (1 << self.cols) - 1
        for r in self.bits:
            if r & ~mask:
                raise CodeError("row has bits beyond cols")

    @staticmethod
    def from_rows(rows: list[list[int]]) -> "BinaryMatrix":
        nr = len(rows)
        nc = len(rows[0]) if rows else 0
        bits = []
        for row in rows:
            acc = 0
            for j, x in enumerate(row):
                if x & 1:
                    acc |= 1 << j
            bits.append(acc)
        return BinaryMatrix(nr, nc, tuple(bits))

    @staticmethod
    def zeros(rows: int, cols: int) -> "BinaryMatrix":
        return BinaryMatrix(rows, cols, tuple(0 for _ in range(rows)))

    @staticmethod
    def identity(n: int) -> "BinaryMatrix":
        return BinaryMatrix(n, n, tuple(1 << i for i in range(n)))

    def get(self, i: int, j: int) -> int:
        return (self.bits[i] >> j) & 1

    def row_weight(self, i: int) -> int:
        return self.bits[i].bit_count()

    def col_weights(self) -> list[int]:
        w = [0] * self.cols
        for r in self.bits:
            while r:
                low = r & -r
                w[low.bit_length() - 1] += 1
                r ^= low
        return w

    def row_weights(self) -> list[int]:
        return [r.bit_count() for r in self.bits]

    def transpose(self) -> "BinaryMatrix":
        out = [0] * self.cols
        for i, r in enumerate(self.bits):
            while r:
                low = r & -r
                out[low.bit_length() - 1] |= 1 << i
                r ^= low
        return BinaryMatrix(self.cols, self.rows, tuple(out))

    def matvec(self, v: int) -> int:
        """Matrix-vector product over GF(2); v packs the input bits."""
        out = 0
        for i, r in enumerate(self.bits):
            if (r & v).bit_count() & 1:
                out |= 1 << i
        return out

    def matmul(self, other: "BinaryMatrix") -> "BinaryMatrix":
        if self.cols != other.rows:
            raise CodeError("dimension mismatch")
        ot = other.transpose()
        out = []
        for r in self.bits:
            acc = 0
            for j, c in enumerate(ot.bits):
                if (r & c).bit_count() & 1:
                    acc |= 1 << j
            out.append(acc)
        return BinaryMatrix(self.rows, other.cols, tuple(out))

    def hstack(self, other: "BinaryMatrix") -> "BinaryMatrix":
        if self.rows != other.rows:
            raise CodeError("row mismatch in hstack")
        bits = tuple(
            a | (b << self.cols) for a, b in zip(self.bits, other.bits)
        )
        return BinaryMatrix(self.rows, self.cols + other.cols, bits)

    def kron(self, other: "BinaryMatrix") -> "BinaryMatrix":
        out = []
        for a in self.bits:
            for b in other.bits:
                acc = 0
                aa = a
                while aa:
                    low = aa & -aa
                    j = low.bit_length() - 1
                    acc |= b << (j * other.cols)
                    aa ^= low
                out.append(acc)
        return BinaryMatrix(self.rows * other.rows, self.cols * other.cols, tuple(out))

    def is_zero(self) -> bool:
        return all(r == 0 for r in self.bits)

    def row_span_contains(self, v: int) -> bool:
        basis = _row_reduce(list(self.bits))
        return _reduce_against(basis, v) == 0

    def to_alist(self) -> str:
        """MacKay alist text (1-indexed, zero-padded entries)."""
        colw = self.col_weights()
        roww = self.row_weights()
        maxc = max(colw, default=0)
        maxr = max(roww, default=0)
        lines = [f"{self.cols} {self.rows}", f"{maxc} {maxr}"]
        lines.append(" ".join(str(w) for w in colw))
        lines.append(" ".join(str(w) for w in roww))
        t = self.transpose()
        for j in range(self.cols):
            idx = []
            r = t.bits[j]
            while r:
                low = r & -r
                idx.append(low.bit_length())
                r ^= low
            idx += [0] * (maxc - len(idx))
            lines.append(" ".join(str(i) for i in idx))
        for i in range(self.rows):
            idx = []
            r = self.bits[i]
            while r:
                low = r & -r
                idx.append(low.bit_length())
                r ^= low
            idx += [0] * (maxr - len(idx))
            lines.append(" ".join(str(i) for i in idx))
        return "\n".join(lines) + "\n"

    @staticmethod
    def from_alist(text: str) -> "BinaryMatrix":
        toks = text.split("\n")
        n, m = (int(x) for x in toks[0].split())
        rows = [0] * m
        # row adjacency lines are the last m nonempty lines
        lines = [ln for ln in toks if ln.strip()]
        row_lines = lines[4 + n : 4 + n + m]
        for i, ln in enumerate(row_lines):
            for tok in ln.split():
                j = int(tok)
                if j:
                    rows[i] |= 1 << (j - 1)
        return BinaryMatrix(m, n, tuple(rows))

    def to_pbm(self) -> str:
        """Dense portable-bitmap-style text (P1 header, 0/1 grid)."""
        lines = [f"P1 {self.cols} {self.rows}"]
        for i in range(self.rows):
            lines.append("".join(str(self.get(i, j)) for j in range(self.cols)))
        return "\n".join(lines) + "\n"

    @staticmethod
    def from_pbm(text: str) -> "BinaryMatrix":
        lines = [ln for ln in text.splitlines() if ln.strip()]
        _, c, r = lines[0].split()
        rows, cols = int(r), int(c)
        bits = []
        for ln in lines[1 : 1 + rows]:
            acc = 0
            for j, ch in enumerate(ln.strip()):
                if ch == "1":
                    acc |= 1 << j
            bits.append(acc)
        return BinaryMatrix(rows, cols, tuple(bits))


def _row_reduce(rows: list[int]) -> list[int]:
    """Row-echelon basis (list of pivot rows, pivot = lowest set bit kept)."""
    basis: list[int] = []
    for r in rows:
        r = _reduce_against(basis, r)
        if r:
            basis.append(r)
            basis.sort(key=lambda x: x & -x)
    return basis


def _reduce_against(basis: list[int], v: int) -> int:
    for b in basis:
        if v & (b & -b):
            v ^= b
    return v


def rank_f2(mat: BinaryMatrix) -> int:
    """GF(2) rank via bit-packed Gaussian elimination on a private copy."""
    work = list(mat.bits)
    rank = 0
    row_idx = 0
    nrows = len(work)
    for col in range(mat.cols):
        pivot = None
        bit = 1 << col
        for r in range(row_idx, nrows):
            if work[r] & bit:
                pivot = r
                break
        if pivot is None:
            continue
        work[row_idx], work[pivot] = work[pivot], work[row_idx]
        for r in range(nrows):
            if r != row_idx and (work[r] & bit):
                work[r] ^= work[row_idx]
        rank += 1
        row_idx += 1
        if row_idx == nrows:
            break
    return rank


def sample_regular_parity_check(
    n: int,
    col_w: int,
    row_w: int,
    seed: int = 0,
    max_tries: int = 200,
    full_rank: bool = False,
) -> BinaryMatrix:
    """Sample an exactly (col_w, row_w)-regular m x n parity check matrix.

    Configuration model: column and row sockets are paired by a seeded
    shuffle; pairings that place two sockets on the same matrix cell are
    repaired by re-pairing the colliding sockets with randomly chosen
    partners (whole-matrix rejection never succeeds at the block lengths
    used here). With full_rank=True, resamples until rank == m.
    """
    if (n * col_w) % row_w != 0:
        raise CodeError("n*col_w must be divisible by row_w")
    m = n * col_w // row_w
    rng = random.Random(seed)
    for _ in range(max_tries):
        mat = _configuration_sample(n, m, col_w, row_w, rng)
        if mat is None:
            continue
        if full_rank and rank_f2(mat) != m:
            continue
        return mat
    raise CodeError(f"sampling failed after {max_tries} tries")


def _configuration_sample(
    n: int, m: int, col_w: int, row_w: int, rng: random.Random
) -> BinaryMatrix | None:
    col_sockets = [j for j in range(n) for _ in range(col_w)]
    row_sockets = [i for i in range(m) for _ in range(row_w)]
    rng.shuffle(col_sockets)
    # repair pass: re-pair collided sockets with random partners
    for _ in range(200):
        cells: dict[tuple[int, int], int] = {}
        collided = []
        for k, (i, j) in enumerate(zip(row_sockets, col_sockets)):
            if (i, j) in cells:
                collided.append(k)
            else:
                cells[(i, j)] = k
        if not collided:
            rows = [0] * m
            for i, j in zip(row_sockets, col_sockets):
                rows[i] |= 1 << j
            return BinaryMatrix(m, n, tuple(rows))
        for k in collided:
            other = rng.randrange(len(col_sockets))
            col_sockets[k], col_sockets[other] = col_sockets[other], col_sockets[k]
    return None


@dataclass(frozen=True)
class CssCode:
    """CSS code given by X- and Z-check matrices with hx . hz^T = 0."""

    hx: BinaryMatrix
    hz: BinaryMatrix
    qubit_coords: dict[int, tuple[int, int]] | None = field(default=None)

    def __post_init__(self):
        if self.hx.cols != self.hz.cols:
            raise CodeError("hx and hz must act on the same qubits")
        if not self.hx.matmul(self.hz.transpose()).is_zero():
            raise CodeError("CSS orthogonality violated: hx . hz^T != 0")

    @property
    def n(self) -> int:
        return self.hx.cols

    @property
    def m_x(self) -> int:
        return self.hx.rows

    @property
    def m_z(self) -> int:
        return self.hz.rows


@dataclass(frozen=True)
class CodeParams:
    n: int
    k: int
    delta_q: int
    delta_g: int
    d: int | None = None


def code_params(code: CssCode, d: int | None = None) -> CodeParams:
    k = code.n - rank_f2(code.hx) - rank_f2(code.hz)
    col_w = [a + b for a, b in zip(code.hx.col_weights(), code.hz.col_weights())]
    row_w = code.hx.row_weights() + code.hz.row_weights()
    return CodeParams(
        n=code.n,
        k=k,
        delta_q=max(col_w, default=0),
        delta_g=max(row_w, default=0),
        d=d,
    )


def hypergraph_product(h1: BinaryMatrix, h2: BinaryMatrix) -> CssCode:
    """Standard two-block hypergraph product of two classical checks.

    hx = [h1 (x) I_n2 | I_m1 (x) h2^T], hz = [I_n1 (x) h2 | h1^T (x) I_m2];
    orthogonality holds by construction and is re-verified.
    """
    i_n1 = BinaryMatrix.identity(h1.cols)
    i_n2 = BinaryMatrix.identity(h2.cols)
    i_m1 = BinaryMatrix.identity(h1.rows)
    i_m2 = BinaryMatrix.identity(h2.rows)
    hx = h1.kron(i_n2).hstack(i_m1.kron(h2.transpose()))
    hz = i_n1.kron(h2).hstack(h1.transpose().kron(i_m2))
    return CssCode(hx, hz)


def hgp_params(h1: BinaryMatrix, h2: BinaryMatrix) -> CodeParams:
    """Hypergraph-product parameters from the classical inputs alone.

    k comes from the classical ranks (k_i = n_i - rank, k_i^T = m_i - rank);
    degrees from the classical row/column weights. Use for instances too
    large to materialize.
    """
    r1, r2 = rank_f2(h1), rank_f2(h2)
    k1, k2 = h1.cols - r1, h2.cols - r2
    k1t, k2t = h1.rows - r1, h2.rows - r2
    n = h1.cols * h2.cols + h1.rows * h2.rows
    k = k1 * k2 + k1t * k2t
    cw1, cw2 = h1.col_weights(), h2.col_weights()
    rw1, rw2 = h1.row_weights(), h2.row_weights()
    delta_q = max(
        max(cw1, default=0) + max(cw2, default=0),
        max(rw1, default=0) + max(rw2, default=0),
    )
    delta_g = max(
        max(rw1, default=0) + max(cw2, default=0),
        max(cw1, default=0) + max(rw2, default=0),
    )
    return CodeParams(n=n, k=k, delta_q=delta_q, delta_g=delta_g)


def rotated_surface_code(d: int) -> CssCode:
    """Distance-d rotated surface code.

    d^2 data qubits on a square grid with (d^2-1)/2 checks of each type;
    bulk checks have weight 4, boundary checks weight 2. Data qubit (r, c)
    sits at doubled coordinates (2c+1, 2r+1); the check for face (i, j)
    sits at (2j, 2i).
    """
    if d % 2 == 0 or d < 1:
        raise CodeError("distance must be odd")
    n = d * d

    def qubit(r: int, c: int) -> int:
        return r * d + c

    x_rows, z_rows = [], []
    x_coords, z_coords = [], []
    for i in range(d + 1):
        for j in range(d + 1):
            support = 0
            for r, c in ((i - 1, j - 1), (i - 1, j), (i, j - 1), (i, j)):
                if 0 <= r < d and 0 <= c < d:
                    support |= 1 << qubit(r, c)
            w = support.bit_count()
            if w < 2:
                continue
            is_x_parity = (i + j) % 2 == 0
            interior = 1 <= i <= d - 1 and 1 <= j <= d - 1
            top_bottom = i in (0, d) and 1 <= j <= d - 1
            left_right = j in (0, d) and 1 <= i <= d - 1
            if interior:
                if is_x_parity:
                    x_rows.append(support)
                    x_coords.append((2 * j, 2 * i))
                else:
                    z_rows.append(support)
                    z_coords.append((2 * j, 2 * i))
            elif top_bottom and is_x_parity:
                x_rows.append(support)
                x_coords.append((2 * j, 2 * i))
            elif left_right and not is_x_parity:
                z_rows.append(support)
                z_coords.append((2 * j, 2 * i))
    hx = BinaryMatrix(len(x_rows), n, tuple(x_rows))
    hz = BinaryMatrix(len(z_rows), n, tuple(z_rows))
    coords = {qubit(r, c): (2 * c + 1, 2 * r + 1) for r in range(d) for c in range(d)}
    code = CssCode(hx, hz, coords)
    if code.m_x != (n - 1) // 2 or code.m_z != (n - 1) // 2:
        raise CodeError("internal: rotated layout produced wrong check counts")
    return code


def distance_bruteforce(code: CssCode, w_max: int) -> int | None:
    """Minimum-weight logical operator up to w_max, or None if none found.

    For a CSS code the minimum over all Paulis is attained by a pure-X or
    pure-Z operator, so both sectors are enumerated separately.
    """
    if code.n > 30 and w_max > 4:
        raise CodeError("instance too large for brute force")

    def sector_min(h_other: BinaryMatrix, h_same: BinaryMatrix) -> int | None:
        # vectors v with h_other . v = 0 and v not in rowspan(h_same)
        basis = _row_reduce(list(h_same.bits))
        for w in range(1, w_max + 1):
            for supp in combinations(range(code.n), w):
                v = 0
                for q in supp:
                    v |= 1 << q
                if h_other.matvec(v) == 0 and _reduce_against(basis, v) != 0:
                    return w
        return None

    dz = sector_min(code.hx, code.hz)  # Z-type logicals commute with X checks
    dx = sector_min(code.hz, code.hx)
    cands = [x for x in (dx, dz) if x is not None]
    return min(cands) if cands else None
