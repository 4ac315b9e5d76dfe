"""Closed-form logical-failure-rate models for hierarchical memories.

Evaluates the surface-code word-error-rate fit, the effective Level-1 gate
error after SWAP routing, the hierarchical word error rate (plain and
noise-biased variants), the qubit-matched plain-surface-code baseline,
crossover finding, and resource-ratio sweeps.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .bilayer import physical_qubit_count, t_route

__all__ = [
    "EstimatorConfig",
    "EstimateRow",
    "EstimatorError",
    "p_surf",
    "p_level1",
    "hook_exponent",
    "wer_hier",
    "wer_hier_biased",
    "hier_cycle_rounds",
    "wer_basic",
    "match_surface_distance",
    "find_crossover",
    "resource_ratio",
    "sweep",
    "rows_to_csv",
    "sweep_svg",
    "paper_58_config",
    "family_48_config",
]


class EstimatorError(ValueError):
    """Invalid estimator configuration or an unsatisfiable target."""


@dataclass(frozen=True)
class EstimatorConfig:
    """Outer-code parameters plus the physical-model knobs of the WER model.

    `tiles_per_side` defaults to the all-data-bottom placement side
    ceil(sqrt(max(n, m0))); m0 defaults to the balanced-CSS check count
    (n - k) / 2.
    """

    n: int
    k: int
    d: int
    delta_q: int
    delta_g: int
    d_l: int
    r_swap: float = 1.0
    surface_threshold: float = 1e-2
    ldpc_threshold: float = 1e-3
    surface_prefactor: float = 0.1
    m0: int | None = None
    tiles_per_side: int | None = None
    eta: float | None = None
    d_x: int | None = None

    def __post_init__(self):
        if not (0 < self.surface_threshold < 1 and 0 < self.ldpc_threshold < 1):
            raise EstimatorError("thresholds must lie in (0, 1)")
        if self.r_swap <= 0:
            raise EstimatorError("r_swap must be positive")

    @property
    def checks(self) -> int:
        if self.m0 is not None:
            return self.m0
        return (self.n - self.k + 1) // 2

    @property
    def side(self) -> int:
        if self.tiles_per_side is not None:
            return self.tiles_per_side
        m = max(self.n, self.checks)
        return math.isqrt(m - 1) + 1 if m > 1 else 1

    @property
    def delta(self) -> int:
        return max(self.delta_q, self.delta_g)

    @property
    def qubits_hier(self) -> int:
        return physical_qubit_count(self.side, self.d_l)


@dataclass(frozen=True)
class EstimateRow:
    p: float
    d_l: int
    r_swap: float
    wer_hier: float
    wer_basic: float
    d_m: int
    qubits_hier: int
    qubits_basic: int


def _clamp(x: float) -> float:
    return min(1.0, x)


def _pow_clamped(base: float, exponent: float) -> float:
    """base**exponent clamped to <= 1, safe against overflow."""
    if base <= 0.0:
        return 0.0
    log10 = exponent * math.log10(base)
    if log10 >= 0.0:
        return 1.0
    if log10 < -320.0:
        return 0.0
    return 10.0**log10


def p_surf(p: float, d: int, cfg: EstimatorConfig) -> float:
    """Surface-code failure rate per code cycle:
    prefactor * (p / threshold)^ceil(d/2), clamped to 1."""
    if p <= 0:
        return 0.0
    exp = (d + 1) // 2
    return _clamp(cfg.surface_prefactor * (p / cfg.surface_threshold) ** exp)


def _p_level1_from_surf(ps: float, cfg: EstimatorConfig) -> float:
    exponent = cfg.r_swap * t_route(cfg.d_l, cfg.side) / cfg.d_l + 1.0
    if ps <= 0.0:
        return 0.0
    if ps >= 1.0:
        return 1.0
    return -math.expm1(exponent * math.log1p(-ps))


def p_level1(p: float, cfg: EstimatorConfig, d_surf: int | None = None) -> float:
    """Effective Level-1 entangling-gate error after one routed long-range
    gate: 1 - (1 - p_surf)^(r_swap * t_route / d_l + 1)."""
    d_eff = cfg.d_l if d_surf is None else d_surf
    return _p_level1_from_surf(p_surf(p, d_eff, cfg), cfg)


def hook_exponent(d: int, delta_g: int) -> int:
    """Smallest number of hook faults that defeats distance d:
    ceil(ceil(d/2) / floor(delta_g/2))."""
    if delta_g < 2:
        raise EstimatorError("delta_g must be >= 2")
    return math.ceil(((d + 1) // 2) / (delta_g // 2))


def wer_hier(p: float, cfg: EstimatorConfig) -> float:
    """Hierarchical WER per syndrome-extraction cycle:
    (p_level1 / ldpc_threshold)^hook_exponent, clamped."""
    base = p_level1(p, cfg) / cfg.ldpc_threshold
    return _pow_clamped(base, hook_exponent(cfg.d, cfg.delta_g))


def wer_hier_biased(p: float, cfg: EstimatorConfig) -> float:
    """Biased-tile hierarchical WER: a Z-type term with the full distance
    exponent plus a hook term computed from the elongated X distance."""
    if cfg.d_x is None:
        raise EstimatorError("biased model needs cfg.d_x")
    if cfg.d_x < cfg.d_l:
        raise EstimatorError("d_x must be >= d_z")
    term_z = _pow_clamped(
        p_level1(p, cfg, d_surf=cfg.d_l) / cfg.ldpc_threshold, (cfg.d + 1) // 2
    )
    term_x = _pow_clamped(
        p_level1(p, cfg, d_surf=cfg.d_x) / cfg.ldpc_threshold,
        hook_exponent(cfg.d, cfg.delta_g),
    )
    return _clamp(term_z + term_x)


def hier_cycle_rounds(cfg: EstimatorConfig) -> int:
    """Physical syndrome-extraction rounds per hierarchical cycle:
    2 Delta (r_swap t_route + 1) + 4."""
    rounds = 2 * cfg.delta * (cfg.r_swap * t_route(cfg.d_l, cfg.side) + 1) + 4
    return math.ceil(rounds)


def wer_basic(
    p: float, k_logical: int, d_m: int, t_rounds: int, cfg: EstimatorConfig
) -> float:
    """Qubit-matched plain-surface-code WER over t_rounds physical rounds:
    1 - (1 - p_surf(d_M))^(K * T / d_M)."""
    ps = p_surf(p, d_m, cfg)
    if ps <= 0.0:
        return 0.0
    if ps >= 1.0:
        return 1.0
    exponent = k_logical * t_rounds / d_m
    return _clamp(-math.expm1(exponent * math.log1p(-ps)))


def match_surface_distance(qubits_hier: int, k_logical: int) -> int:
    """Smallest odd d_M with K (2 d_M^2 - 1) >= qubits_hier."""
    if k_logical < 1:
        raise EstimatorError("need at least one logical qubit")
    d_m = 1
    while k_logical * (2 * d_m * d_m - 1) < qubits_hier:
        d_m += 2
    return d_m


def _wer_gap(p: float, cfg: EstimatorConfig, d_m: int, t_rounds: int) -> float:
    return wer_hier(p, cfg) - wer_basic(p, cfg.k, d_m, t_rounds, cfg)


def find_crossover(
    cfg: EstimatorConfig,
    p_lo: float,
    p_hi: float,
    rel_tol: float = 1e-3,
    grid: int = 60,
) -> float | None:
    """Bisect log p for the crossover where the hierarchical WER drops below
    the qubit-matched baseline; None when no sign change is bracketed."""
    if not 0 < p_lo < p_hi:
        raise EstimatorError("need 0 < p_lo < p_hi")
    d_m = match_surface_distance(cfg.qubits_hier, cfg.k)
    t_rounds = hier_cycle_rounds(cfg)

    xs = [
        p_lo * (p_hi / p_lo) ** (i / (grid - 1)) for i in range(grid)
    ]
    vals = [_wer_gap(x, cfg, d_m, t_rounds) for x in xs]
    bracket = None
    for a, b, fa, fb in zip(xs, xs[1:], vals, vals[1:]):
        if fa < 0 <= fb or fa <= 0 < fb:
            bracket = (a, b)
            break
    if bracket is None:
        return None
    lo, hi = bracket
    while hi / lo > 1 + rel_tol:
        mid = math.sqrt(lo * hi)
        if _wer_gap(mid, cfg, d_m, t_rounds) <= 0:
            lo = mid
        else:
            hi = mid
    return math.sqrt(lo * hi)


def resource_ratio(
    target_wer: float, p: float, cfg_family: list[EstimatorConfig]
) -> float:
    """Footprint ratio of the basic encoding to the smallest family member
    meeting the target WER at gate error p."""
    member = None
    for cfg in sorted(cfg_family, key=lambda c: c.n):
        if wer_hier(p, cfg) <= target_wer:
            member = cfg
            break
    if member is None:
        raise EstimatorError("no family member meets the target WER")
    t_rounds = hier_cycle_rounds(member)
    d_m = 1
    while True:
        if wer_basic(p, member.k, d_m, t_rounds, member) <= target_wer:
            break
        d_m += 2
        if d_m > 20001:
            raise EstimatorError("no surface distance meets the target WER")
    qubits_basic = member.k * (2 * d_m * d_m - 1)
    return qubits_basic / member.qubits_hier


def sweep(cfg: EstimatorConfig, p_grid: list[float]) -> list[EstimateRow]:
    """Evaluate the full comparison at each gate error rate."""
    d_m = match_surface_distance(cfg.qubits_hier, cfg.k)
    t_rounds = hier_cycle_rounds(cfg)
    qubits_basic = cfg.k * (2 * d_m * d_m - 1)
    rows = []
    for p in p_grid:
        rows.append(
            EstimateRow(
                p=p,
                d_l=cfg.d_l,
                r_swap=cfg.r_swap,
                wer_hier=wer_hier(p, cfg),
                wer_basic=wer_basic(p, cfg.k, d_m, t_rounds, cfg),
                d_m=d_m,
                qubits_hier=cfg.qubits_hier,
                qubits_basic=qubits_basic,
            )
        )
    return rows


def rows_to_csv(rows: list[EstimateRow]) -> str:
    lines = ["p,d_l,r_swap,wer_hier,wer_basic,d_M,qubits_hier,qubits_basic"]
    for r in rows:
        lines.append(
            f"{r.p!r},{r.d_l},{r.r_swap!r},{r.wer_hier!r},{r.wer_basic!r},"
            f"{r.d_m},{r.qubits_hier},{r.qubits_basic}"
        )
    return "\n".join(lines) + "\n"


def sweep_svg(rows: list[EstimateRow], width: int = 640, height: int = 480) -> str:
    """Minimal self-contained log-log SVG plot of both WER curves."""
    pts = [r for r in rows if r.p > 0]
    if not pts:
        return f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}"/>\n'
    floor = 1e-40

    def coords(values):
        xs = [math.log10(r.p) for r in pts]
        ys = [math.log10(max(v, floor)) for v in values]
        x0, x1 = min(xs), max(xs)
        y0, y1 = min(ys + [-2.0]), max(ys + [0.0])
        sx = (width - 80) / (x1 - x0 or 1.0)
        sy = (height - 80) / (y1 - y0 or 1.0)
        return [
            (40 + (x - x0) * sx, height - 40 - (y - y0) * sy)
            for x, y in zip(xs, ys)
        ]

    def path(values):
        cs = coords(values)
        return "M" + " L".join(f"{x:.2f},{y:.2f}" for x, y in cs)

    hier = path([r.wer_hier for r in pts])
    basic = path([r.wer_basic for r in pts])
    return (
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}">\n'
        f'<rect width="{width}" height="{height}" fill="white"/>\n'
        f'<path d="{hier}" stroke="crimson" fill="none" stroke-width="2"/>\n'
        f'<path d="{basic}" stroke="steelblue" fill="none" stroke-width="2" '
        f'stroke-dasharray="6 3"/>\n'
        f'<text x="45" y="20" font-size="13">hierarchical (solid) vs basic '
        f"(dashed), log-log</text>\n"
        f"</svg>\n"
    )


def paper_58_config(d_l: int = 3, r_swap: float = 1.0, **over) -> EstimatorConfig:
    """The (5,8) quantum expander code instance used in the comparisons."""
    return EstimatorConfig(
        n=1_116_416,
        k=112_896,
        d=119,
        delta_q=16,
        delta_g=13,
        d_l=d_l,
        r_swap=r_swap,
        **over,
    )


def family_48_config(
    m_exp: int, d_l: int = 3, r_swap: float = 0.1, **over
) -> EstimatorConfig:
    """(4,8) family member built from a classical code of length 512 * 2^m."""
    n_c = 512 * (2**m_exp)
    m_c = n_c // 2
    return EstimatorConfig(
        n=n_c * n_c + m_c * m_c,
        k=(n_c - m_c) ** 2,
        d=32 * 2**m_exp if m_exp >= 0 else 32,
        delta_q=max(4 + 4, 8 + 8),
        delta_g=8 + 4,
        d_l=d_l,
        r_swap=r_swap,
        **over,
    )
