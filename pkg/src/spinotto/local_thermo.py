"""Per-spin energy bookkeeping and effective temperatures of the halves.

Each spin couples to the field through its own Zeeman term H_X = 2 B S_X^z,
so its share of the bath heats follows from the reduced states alone:

    q1X = Tr[(rho_X - rho'_X) 2 B1 S_X^z],
    q2X = Tr[(rho'_X - rho_X) 2 B2 S_X^z],      wX = q1X + q2X.

Both shares are proportional to the same magnetization change, which forces
q1X = -(B1/B2) q2X, a working-spin efficiency wX/q1X = 1 - B2/B1 for either
spin, and a refrigerating spin-1/2 COP of B2/(B1 - B2). The global heats
exceed the local sums by the exchange part 8 J Ps, where Ps is the
expectation change of s_A . S_B between the two thermal endpoints.

Reduced states are diagonal in the local magnetization basis, so adjacent
level pairs define temperatures T = dE / d(ln P); the spin-1/2 always has
exactly one such pair (hence always a temperature, possibly negative), while
a partner with s >= 1 generally has inconsistent pairs at J > 0 and no
temperature at all.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .otto_cycle import IDLE_TOLERANCE, EngineConfig
from .spin_algebra import Spin, build_hamiltonian, spin_operators
from .thermal import ReducedState, ThermalState, equilibrium, partial_trace

__all__ = [
    "THERMAL_SPREAD_TOLERANCE",
    "LocalResult",
    "TemperatureAssessment",
    "local_analysis",
    "local_efficiency",
    "effective_temperature",
    "adiabatic_temperature_map",
]

# pairwise temperatures agreeing to this relative spread count as one
THERMAL_SPREAD_TOLERANCE = 1e-9

# populations below this give no usable log-ratio
POPULATION_FLOOR = 1e-300


@dataclass(frozen=True)
class LocalResult:
    """Per-spin heats, works, modes and figures of merit for one cycle.

    etaA/etaB are nan unless that spin runs as an engine; copA is nan unless
    spin A runs as a refrigerator. Ps is the correlation term separating the
    global heats from the local sums.
    """

    config: EngineConfig
    q1A: float
    q2A: float
    q1B: float
    q2B: float
    wA: float
    wB: float
    Ps: float
    mode_A: str
    mode_B: str
    etaA: float
    etaB: float
    copA: float


@dataclass(frozen=True)
class TemperatureAssessment:
    """Adjacent-pair temperatures of a reduced state and their verdict.

    temperature is the common value when all pairs agree (is_thermal), nan
    otherwise; exactly flat adjacent populations give the infinite marker.
    """

    pairwise: np.ndarray
    temperature: float
    spread: float
    is_thermal: bool


def _spin_mode(w: float) -> str:
    if abs(w) <= IDLE_TOLERANCE:
        return "idle"
    return "engine" if w > 0 else "refrigerator"


def local_analysis(
    cfg: EngineConfig,
    states: tuple[ThermalState, ThermalState] | None = None,
) -> LocalResult:
    """Split one cycle's energy flows between the two spins.

    states can carry the two endpoint ThermalStates when the caller already
    diagonalized at (J, B1) and (J, B2); otherwise they are built here.
    """
    spin = cfg.spin
    if states is None:
        _, hot = equilibrium(spin, cfg.J, cfg.B1, cfg.T1)
        _, cold = equilibrium(spin, cfg.J, cfg.B2, cfg.T2)
    else:
        hot, cold = states
    sz_a = spin_operators(Spin(1))[0]
    sz_b = spin_operators(spin)[0]
    dz_a = float(np.trace(
        (partial_trace(hot.rho, spin, "A").rho_loc
         - partial_trace(cold.rho, spin, "A").rho_loc) @ sz_a))
    dz_b = float(np.trace(
        (partial_trace(hot.rho, spin, "B").rho_loc
         - partial_trace(cold.rho, spin, "B").rho_loc) @ sz_b))
    q1A, q2A = 2.0 * cfg.B1 * dz_a, -2.0 * cfg.B2 * dz_a
    q1B, q2B = 2.0 * cfg.B1 * dz_b, -2.0 * cfg.B2 * dz_b
    wA, wB = q1A + q2A, q1B + q2B
    exchange = build_hamiltonian(spin, 0.0, 0.0).interaction
    Ps = float(np.trace((hot.rho - cold.rho) @ exchange))

    mode_A, mode_B = _spin_mode(wA), _spin_mode(wB)
    eta_shared = 1.0 - cfg.B2 / cfg.B1
    etaA = etaB = copA = float("nan")
    if mode_A == "engine":
        etaA = wA / q1A
        assert abs(etaA - eta_shared) < 1e-9
    elif mode_A == "refrigerator":
        copA = q2A / abs(wA)
        assert abs(copA - cfg.B2 / (cfg.B1 - cfg.B2)) < 1e-9
    if mode_B == "engine":
        etaB = wB / q1B
        assert abs(etaB - eta_shared) < 1e-9
    return LocalResult(
        config=cfg,
        q1A=q1A, q2A=q2A, q1B=q1B, q2B=q2B,
        wA=wA, wB=wB, Ps=Ps,
        mode_A=mode_A, mode_B=mode_B,
        etaA=etaA, etaB=etaB, copA=copA,
    )


def local_efficiency(result: LocalResult, B1, B2) -> tuple[float, float]:
    """(figure of merit of spin A, efficiency of spin B).

    An engine spin reports w/q1 (equal to 1 - B2/B1 for any spin and any
    coupling); a refrigerating spin A reports its COP q2A/|wA| (equal to
    B2/(B1 - B2)); idle spins report nan.
    """
    first = result.copA if result.mode_A == "refrigerator" else result.etaA
    return first, result.etaB


def effective_temperature(reduced: ReducedState, B) -> TemperatureAssessment:
    """Read temperatures off the adjacent-level population ratios.

    The reduced state is diagonal in its magnetization basis with level
    energies 2 B m, so each adjacent pair gives T = 2B / ln(P_below/P_above):
    negative under population inversion, the infinite marker when the two
    populations are exactly equal, nan when either underflows. The state
    counts as thermal when every pair agrees to a relative spread of 1e-9.
    """
    B = float(B)
    if B == 0:
        raise ValueError("effective temperature needs B != 0")
    populations = np.diag(reduced.rho_loc)
    values = []
    for above, below in zip(populations[:-1], populations[1:]):
        # adjacent m and m-1: energy gap E(m) - E(m-1) = 2B
        if not (above > POPULATION_FLOOR and below > POPULATION_FLOOR):
            values.append(float("nan"))
        elif above == below:
            values.append(float("inf"))
        else:
            values.append(2.0 * B / (np.log(below) - np.log(above)))
    pairwise = np.array(values)

    if np.isnan(pairwise).any():
        spread, is_thermal, temperature = float("nan"), False, float("nan")
    elif np.isinf(pairwise).all():
        spread, is_thermal, temperature = 0.0, True, float("inf")
    elif np.isinf(pairwise).any():
        spread, is_thermal, temperature = float("inf"), False, float("nan")
    else:
        spread = float(np.ptp(pairwise) / np.max(np.abs(pairwise)))
        is_thermal = spread <= THERMAL_SPREAD_TOLERANCE
        temperature = float(np.mean(pairwise)) if is_thermal else float("nan")
    return TemperatureAssessment(
        pairwise=pairwise, temperature=temperature,
        spread=spread, is_thermal=is_thermal,
    )


def adiabatic_temperature_map(T_A, B_from, B_to) -> float:
    """Spin-1/2 temperature after an occupation-preserving field stroke.

    Frozen populations with a gap rescaled from 2 B_from to 2 B_to mean the
    temperature rescales by the same factor: T -> T * B_to / B_from.
    """
    if B_from == 0:
        raise ValueError("field stroke must start at B != 0")
    return float(T_A) * (float(B_to) / float(B_from))
