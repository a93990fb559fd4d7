"""The four-stroke quantum Otto cycle of the coupled pair.

Stage 1 thermalizes the pair at field B1 with the hot bath T1, stage 2 drives
the field to B2 with level occupations frozen, stage 3 thermalizes at B2 with
the cold bath T2, stage 4 drives the field back. Heats follow from the
occupation changes at fixed spectrum,

    Q1 = sum_n E_n (P_n - P'_n),      Q2 = sum_n E'_n (P'_n - P_n),

with W = Q1 + Q2 the net output. Levels keep their (sector, magnetization)
labels along the field strokes, so level n at B1 maps to level n at B2 in the
fixed enumeration order of `level_labels`; occupations are attached to those
labels, not to the energy-sorted order, which matters once levels cross.

Operating modes: engine (W > 0, Q1 > 0, Q2 < 0), refrigerator (W < 0,
Q2 > 0, Q1 < 0), idle (|W| below tolerance), heater otherwise. Efficiency
W/Q1 is reported only in engine mode, where it obeys

    eta <= (1 - B2/B1) / (1 - 4J/B1)        (only meaningful for 4J < B1),

a bound that a spin-1/2 partner respects and larger partners can beat.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import NamedTuple

import numpy as np

from .spin_algebra import (
    Spin,
    build_hamiltonian,
    diagonalize,
    level_energies,
    match_levels,
)
from .thermal import boltzmann_weights

__all__ = [
    "IDLE_TOLERANCE",
    "EngineConfig",
    "CycleResult",
    "StrongCouplingLimits",
    "run_cycle",
    "classify_mode",
    "efficiency_bound",
    "strong_coupling_limits",
    "critical_coupling",
]

# |W| below this counts as no work exchanged at all
IDLE_TOLERANCE = 1e-13


@dataclass(frozen=True)
class EngineConfig:
    """One cycle's parameters: spin of the partner, fixed coupling J, the two
    field values B1 > B2 > 0 and bath temperatures T1 > T2 > 0.

    strict=False relaxes the two orderings to >=, for degenerate test cycles;
    positivity is always enforced.
    """

    spin: Spin
    J: float
    B1: float
    B2: float
    T1: float
    T2: float
    strict: bool = field(default=True, repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "spin", Spin.coerce(self.spin))
        for name in ("J", "B1", "B2", "T1", "T2"):
            object.__setattr__(self, name, float(getattr(self, name)))
        if not np.isfinite([self.J, self.B1, self.B2, self.T1, self.T2]).all():
            raise ValueError("cycle parameters must be finite")
        if self.J < 0:
            raise ValueError(f"exchange coupling must satisfy J >= 0, got {self.J}")
        if self.strict:
            if not (self.B1 > self.B2 > 0):
                raise ValueError(f"need B1 > B2 > 0, got B1={self.B1}, B2={self.B2}")
            if not (self.T1 > self.T2 > 0):
                raise ValueError(f"need T1 > T2 > 0, got T1={self.T1}, T2={self.T2}")
        else:
            if not (self.B1 >= self.B2 > 0):
                raise ValueError(f"need B1 >= B2 > 0, got B1={self.B1}, B2={self.B2}")
            if not (self.T1 >= self.T2 > 0):
                raise ValueError(f"need T1 >= T2 > 0, got T1={self.T1}, T2={self.T2}")


@dataclass(frozen=True)
class CycleResult:
    """Global energy bookkeeping of one cycle. eta and eta_bound are nan
    when undefined (not an engine / bound out of its 4J < B1 domain)."""

    config: EngineConfig
    W: float
    Q1: float
    Q2: float
    eta: float
    eta_carnot: float
    eta_bound: float
    eta_uncoupled: float
    mode: str


class StrongCouplingLimits(NamedTuple):
    eta_limit: float
    work_ratio_A: float  # W/wA as J -> infinity
    work_ratio_B: float  # W/wB as J -> infinity


def classify_mode(W: float, Q1: float, Q2: float, tol: float = IDLE_TOLERANCE) -> str:
    """Mode taxonomy from the signs of the global work and heats."""
    if W > tol and Q1 > 0 and Q2 < 0:
        return "engine"
    if W < -tol and Q2 > 0 and Q1 < 0:
        return "refrigerator"
    if abs(W) <= tol:
        return "idle"
    return "heater"


def run_cycle(cfg: EngineConfig, levels: str = "numeric") -> CycleResult:
    """Work, heats, efficiency and mode of one cycle.

    levels = "numeric" diagonalizes the Hamiltonian at both fields and pairs
    the eigenvalues through their (sector, m) labels; levels = "analytic"
    takes the closed-form energies directly in the same label order. The two
    routes agree to ~1e-12 and exist to cross-check each other.
    """
    if levels == "analytic":
        e_hot = level_energies(cfg.spin, cfg.J, cfg.B1)
        e_cold = level_energies(cfg.spin, cfg.J, cfg.B2)
    elif levels == "numeric":
        h_hot = build_hamiltonian(cfg.spin, cfg.J, cfg.B1)
        h_cold = build_hamiltonian(cfg.spin, cfg.J, cfg.B2)
        e_hot = match_levels(h_hot, diagonalize(h_hot))
        e_cold = match_levels(h_cold, diagonalize(h_cold))
    else:
        raise ValueError(f"levels must be 'numeric' or 'analytic', got {levels!r}")
    return cycle_from_energies(cfg, e_hot, e_cold)


def cycle_from_energies(cfg: EngineConfig, e_hot, e_cold) -> CycleResult:
    """Cycle bookkeeping from level energies already in paired label order."""
    p_hot = boltzmann_weights(e_hot, cfg.T1)
    p_cold = boltzmann_weights(e_cold, cfg.T2)
    Q1 = float(e_hot @ (p_hot - p_cold))
    Q2 = float(e_cold @ (p_cold - p_hot))
    W = Q1 + Q2
    mode = classify_mode(W, Q1, Q2)
    eta = W / Q1 if mode == "engine" else float("nan")
    if 4.0 * cfg.J < cfg.B1:
        eta_bound = efficiency_bound(cfg.J, cfg.B1, cfg.B2)
    else:
        eta_bound = float("nan")
    return CycleResult(
        config=cfg,
        W=W,
        Q1=Q1,
        Q2=Q2,
        eta=eta,
        eta_carnot=1.0 - cfg.T2 / cfg.T1,
        eta_bound=eta_bound,
        eta_uncoupled=1.0 - cfg.B2 / cfg.B1,
        mode=mode,
    )


def efficiency_bound(J, B1, B2) -> float:
    """Coupling-corrected engine efficiency bound (1 - B2/B1)/(1 - 4J/B1).

    Defined only for 4J < B1; outside that domain the expression loses its
    meaning as a bound and a ValueError is raised instead.
    """
    J, B1, B2 = float(J), float(B1), float(B2)
    if 4.0 * J >= B1:
        raise ValueError(f"bound requires 4J < B1, got 4J={4 * J}, B1={B1}")
    return (1.0 - B2 / B1) / (1.0 - 4.0 * J / B1)


def strong_coupling_limits(s, B1, B2) -> StrongCouplingLimits:
    """Limiting engine characteristics as J -> infinity.

    Only the lower total-spin multiplet stays populated, a ladder of 2s
    levels spaced 2B: a spin-1/2 partner is left with a single level and a
    dead engine (eta -> 0), larger partners give eta -> 1 - B2/B1 with
    W/wA -> -(2s+1) and W/wB -> (2s+1)/(2s+2).
    """
    s = Spin.coerce(s)
    n = s.two_s + 1  # 2s + 1
    eta_limit = 0.0 if s.two_s == 1 else 1.0 - float(B2) / float(B1)
    return StrongCouplingLimits(eta_limit, -float(n), n / (n + 1.0))


def critical_coupling(
    cfg: EngineConfig, j_low: float, j_high: float, tol: float = 1e-6
) -> float:
    """Bisect a sign change of W(J) between j_low and j_high to width tol.

    The endpoints must bracket the change (W > 0 on one side, W <= 0 on the
    other); closed-form level energies keep the scan exact and fast.
    """

    def work_at(j):
        return run_cycle(replace(cfg, J=j), levels="analytic").W

    w_low, w_high = work_at(j_low), work_at(j_high)
    if (w_low > 0) == (w_high > 0):
        raise ValueError(
            f"W does not change sign on [{j_low}, {j_high}] "
            f"(W={w_low:.3e} and {w_high:.3e})"
        )
    lo, hi = float(j_low), float(j_high)
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if (work_at(mid) > 0) == (w_low > 0):
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)
