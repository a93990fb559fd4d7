"""Generalized cycles that drive the coupling, and the cooperative work split.

When the strokes change both the field (B1 -> B2) and the coupling
(J1 -> J2), the local Zeeman works no longer exhaust the output:

    W = wA + wB + 8 (J1 - J2) Ps,

with Ps the expectation change of s_A . S_B between the endpoints. A
mean-field reading assigns each spin half of the factorized part of the
exchange work, leaving a genuinely cooperative remainder driven by the
covariance <s_A . S_B> - <s_A> . <S_B>:

    wX_mf  = wX + 4 (J1 - J2) (<s_A>.<S_B>|_hot - <s_A>.<S_B>|_cold),
    w_coop = 8 (J1 - J2) (cov_hot - cov_cold),

so W = wA_mf + wB_mf + w_coop identically. The differential forms behind
these are evaluated as endpoint differences: each stroke contributes its
parameter change times the expectation in that stroke's frozen state. The
ratio W / (wA_mf + wB_mf) measures how much the correlations help; for a
coupling-only cycle it equals 1 + (cov_hot - cov_cold) / (prod_hot -
prod_cold) in terms of the factorized product, and it is undefined (nan)
when the mean-field works cancel exactly.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from .spin_algebra import Spin, build_hamiltonian, diagonalize, spin_operators
from .thermal import ThermalState, gibbs_state, partial_trace

__all__ = [
    "GeneralizedConfig",
    "CoopResult",
    "MeanFieldSplit",
    "run_generalized_cycle",
    "mean_field_split",
    "cooperativity_ratio",
]


@dataclass(frozen=True)
class GeneralizedConfig:
    """Cycle parameters when both knobs move: hot stroke at (J1, B1, T1),
    cold stroke at (J2, B2, T2). Fields and couplings must be non-negative
    and the baths ordered T1 > T2 > 0; B1 = B2 (coupling-only cycles) and
    J1 = J2 (plain field cycles) are both allowed."""

    spin: Spin
    J1: float
    J2: float
    B1: float
    B2: float
    T1: float
    T2: float

    def __post_init__(self):
        object.__setattr__(self, "spin", Spin.coerce(self.spin))
        for name in ("J1", "J2", "B1", "B2", "T1", "T2"):
            object.__setattr__(self, name, float(getattr(self, name)))
        values = [self.J1, self.J2, self.B1, self.B2, self.T1, self.T2]
        if not np.isfinite(values).all():
            raise ValueError("cycle parameters must be finite")
        if self.J1 < 0 or self.J2 < 0:
            raise ValueError("couplings must satisfy J >= 0")
        if self.B1 < 0 or self.B2 < 0:
            raise ValueError("fields must be non-negative")
        if not (self.T1 > self.T2 > 0):
            raise ValueError(f"need T1 > T2 > 0, got T1={self.T1}, T2={self.T2}")


@dataclass(frozen=True)
class MeanFieldSplit:
    """Single-spin vector expectations, the exchange expectation, and their
    covariance <s_A . S_B> - <s_A> . <S_B> in one pair state."""

    vector_A: np.ndarray
    vector_B: np.ndarray
    exchange: float
    covariance: float

    @property
    def product(self) -> float:
        """Factorized part <s_A> . <S_B> of the exchange expectation."""
        return float(self.vector_A @ self.vector_B)


@dataclass(frozen=True)
class CoopResult:
    """Work decompositions of one generalized cycle: the simple local works
    and their exchange residual, and the mean-field split with its
    cooperative remainder and ratio (nan when wA_mf + wB_mf = 0)."""

    config: GeneralizedConfig
    W: float
    wA_simple: float
    wB_simple: float
    Ps: float
    residual: float
    wA_mf: float
    wB_mf: float
    w_coop: float
    cov1: float
    cov2: float
    ratio: float


def _vector_expectation(rho_loc: np.ndarray, spin: Spin) -> np.ndarray:
    sz, sp, sm = spin_operators(spin)
    sx = 0.5 * (sp + sm)
    sy = (sp - sm) / 2j
    return np.array([
        float(np.trace(rho_loc @ sx)),
        float(np.real(np.trace(rho_loc @ sy))),
        float(np.trace(rho_loc @ sz)),
    ])


def mean_field_split(rho, s) -> MeanFieldSplit:
    """Expectations entering the mean-field work split, for one pair state.

    The transverse (x, y) components vanish for any thermal state of the
    pair; they are computed rather than assumed so that tests can check it.
    """
    s = Spin.coerce(s)
    vec_a = _vector_expectation(partial_trace(rho, s, "A").rho_loc, Spin(1))
    vec_b = _vector_expectation(partial_trace(rho, s, "B").rho_loc, s)
    exchange = float(np.trace(np.asarray(rho) @ build_hamiltonian(s, 0.0, 0.0).interaction))
    covariance = exchange - float(vec_a @ vec_b)
    return MeanFieldSplit(
        vector_A=vec_a, vector_B=vec_b, exchange=exchange, covariance=covariance
    )


def run_generalized_cycle(
    cfg: GeneralizedConfig,
    states: tuple[ThermalState, ThermalState] | None = None,
) -> CoopResult:
    """All work decompositions of one cycle between the thermal endpoints
    (J1, B1, T1) and (J2, B2, T2).

    W comes from Tr[(rho - rho')(H - H')], which equals the occupation-sum
    form because the eigenbasis is shared between the endpoints. states may
    carry the two endpoint ThermalStates to reuse diagonalizations.
    """
    spin = cfg.spin
    h_hot = build_hamiltonian(spin, cfg.J1, cfg.B1)
    h_cold = build_hamiltonian(spin, cfg.J2, cfg.B2)
    if states is None:
        hot = gibbs_state(diagonalize(h_hot), cfg.T1)
        cold = gibbs_state(diagonalize(h_cold), cfg.T2)
    else:
        hot, cold = states
    delta_rho = hot.rho - cold.rho
    W = float(np.trace(delta_rho @ (h_hot.matrix - h_cold.matrix)))

    sz_a = spin_operators(Spin(1))[0]
    sz_b = spin_operators(spin)[0]
    dz_a = float(np.trace(
        (partial_trace(hot.rho, spin, "A").rho_loc
         - partial_trace(cold.rho, spin, "A").rho_loc) @ sz_a))
    dz_b = float(np.trace(
        (partial_trace(hot.rho, spin, "B").rho_loc
         - partial_trace(cold.rho, spin, "B").rho_loc) @ sz_b))
    dB = cfg.B1 - cfg.B2
    dJ = cfg.J1 - cfg.J2
    wA_simple = 2.0 * dB * dz_a
    wB_simple = 2.0 * dB * dz_b
    Ps = float(np.trace(delta_rho @ h_hot.interaction))
    residual = 8.0 * dJ * Ps

    split_hot = mean_field_split(hot.rho, spin)
    split_cold = mean_field_split(cold.rho, spin)
    mean_field_work = 4.0 * dJ * (split_hot.product - split_cold.product)
    wA_mf = wA_simple + mean_field_work
    wB_mf = wB_simple + mean_field_work
    w_coop = 8.0 * dJ * (split_hot.covariance - split_cold.covariance)

    result = CoopResult(
        config=cfg,
        W=W,
        wA_simple=wA_simple,
        wB_simple=wB_simple,
        Ps=Ps,
        residual=residual,
        wA_mf=wA_mf,
        wB_mf=wB_mf,
        w_coop=w_coop,
        cov1=split_hot.covariance,
        cov2=split_cold.covariance,
        ratio=float("nan"),
    )
    return replace(result, ratio=cooperativity_ratio(result))


def cooperativity_ratio(result: CoopResult) -> float:
    """W / (wA_mf + wB_mf): how far correlations push the output beyond the
    mean-field works. nan when the denominator vanishes exactly (degenerate
    cycles, or a purely cooperative one)."""
    denominator = result.wA_mf + result.wB_mf
    if denominator == 0.0:
        return float("nan")
    return result.W / denominator
