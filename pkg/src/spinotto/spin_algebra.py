"""Spin operators, the exchange-coupled pair Hamiltonian, and its spectrum.

The working medium is a spin-1/2 (subsystem A) coupled to a spin s
(subsystem B) by isotropic exchange in a uniform field along z, with
hbar = mu_B = k_B = 1 and gyromagnetic factor 2:

    H = 8 J s_A . S_B + 2 B (s_A^z + S_B^z),        J >= 0.

Written with ladder operators, s_A . S_B = s^z S^z + (s^+ S^- + s^- S^+)/2,
every matrix here is real symmetric, so no complex arithmetic is needed
anywhere. H commutes with the total magnetization and with the total spin,
which yields the closed-form spectrum

    E(j = s + 1/2, m) =  4 J s        + 2 B m,
    E(j = s - 1/2, m) = -4 J (s + 1)  + 2 B m,

with m running over -j ... j in each sector, and eigenvectors that do not
depend on J or B at all. The fixed (sector, m) enumeration order defined by
`level_labels` is what the cycle modules use to pair levels across a change
of field or coupling.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import NamedTuple

import numpy as np

__all__ = [
    "DiagonalizationError",
    "Spin",
    "PairHamiltonian",
    "Spectrum",
    "Level",
    "spin_operators",
    "build_hamiltonian",
    "level_labels",
    "level_energies",
    "analytic_spectrum",
    "match_levels",
    "jacobi_eigh",
    "diagonalize",
]

# off-diagonal target for the Jacobi iteration, relative to the Frobenius norm
JACOBI_RELATIVE_THRESHOLD = 1e-14
JACOBI_MAX_SWEEPS = 100


class DiagonalizationError(RuntimeError):
    """Jacobi sweep budget exhausted before reaching the off-diagonal target."""


@dataclass(frozen=True)
class Spin:
    """Half-integer spin quantum number, stored exactly as the integer 2s."""

    two_s: int

    def __post_init__(self):
        if not isinstance(self.two_s, int) or self.two_s < 1:
            raise ValueError(f"2s must be a positive integer, got {self.two_s!r}")

    @classmethod
    def coerce(cls, value) -> "Spin":
        """Accept a Spin, a number, or a string like "3/2" or "1.5"."""
        if isinstance(value, Spin):
            return value
        try:
            frac = Fraction(value)
        except (ValueError, TypeError) as exc:
            raise ValueError(f"cannot read a spin value from {value!r}") from exc
        twice = 2 * frac
        if twice.denominator != 1 or twice <= 0:
            raise ValueError(f"spin must be a positive half-integer, got {value!r}")
        return cls(int(twice))

    @property
    def s(self) -> float:
        return self.two_s / 2.0

    @property
    def dim(self) -> int:
        """Dimension 2s + 1 of the single-spin Hilbert space."""
        return self.two_s + 1

    @property
    def pair_dim(self) -> int:
        """Dimension 2(2s + 1) of the coupled pair."""
        return 2 * self.dim

    def __str__(self):
        return str(Fraction(self.two_s, 2))


@dataclass(frozen=True)
class PairHamiltonian:
    """H = 8 J * interaction + 2 B * zeeman with the bare pieces kept around.

    interaction = s_A . S_B and zeeman = s_A^z + S_B^z in the product basis
    (A factor slowest, magnetization descending within each factor).
    """

    spin: Spin
    J: float
    B: float
    matrix: np.ndarray
    interaction: np.ndarray
    zeeman: np.ndarray

    def __post_init__(self):
        for name in ("matrix", "interaction", "zeeman"):
            a = getattr(self, name)
            if not np.array_equal(a, a.T):
                raise ValueError(f"{name} must be exactly symmetric")


@dataclass(frozen=True)
class Spectrum:
    """Eigenvalues (ascending) and orthonormal eigenvector columns."""

    energies: np.ndarray
    eigenvectors: np.ndarray

    def __post_init__(self):
        if np.any(np.diff(self.energies) < 0):
            raise ValueError("energies must be sorted ascending")
        v = self.eigenvectors
        gram_defect = np.max(np.abs(v.T @ v - np.eye(v.shape[1])))
        if gram_defect > 1e-12:
            raise ValueError(f"eigenvectors not orthonormal (defect {gram_defect:.2e})")

    @property
    def dimension(self) -> int:
        return len(self.energies)


class Level(NamedTuple):
    """One exact level: total-spin sector j, magnetization m, energy."""

    j: float
    m: float
    energy: float


def spin_operators(s) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """(S^z, S^+, S^-) for one spin in the basis |m> with m = s ... -s.

    S^z is diagonal; S^+ carries sqrt(s(s+1) - m(m+1)) one place above the
    diagonal (raising |m> to |m+1>); S^- is its transpose.
    """
    s = Spin.coerce(s)
    m = np.arange(s.two_s, -s.two_s - 1, -2) / 2.0
    sz = np.diag(m)
    sp = np.zeros((s.dim, s.dim))
    src = m[1:]  # every state but the top one can be raised
    sp[np.arange(s.dim - 1), np.arange(1, s.dim)] = np.sqrt(
        s.s * (s.s + 1.0) - src * (src + 1.0)
    )
    return sz, sp, sp.T


def build_hamiltonian(s, J, B) -> PairHamiltonian:
    """Assemble the pair Hamiltonian at coupling J >= 0 and field B."""
    s = Spin.coerce(s)
    J, B = float(J), float(B)
    if J < 0:
        raise ValueError(f"exchange coupling must satisfy J >= 0, got {J}")
    sz_a, sp_a, sm_a = spin_operators(Spin(1))
    sz_b, sp_b, sm_b = spin_operators(s)
    eye_a, eye_b = np.eye(2), np.eye(s.dim)
    interaction = np.kron(sz_a, sz_b) + 0.5 * (
        np.kron(sp_a, sm_b) + np.kron(sm_a, sp_b)
    )
    zeeman = np.kron(sz_a, eye_b) + np.kron(eye_a, sz_b)
    matrix = 8.0 * J * interaction + 2.0 * B * zeeman
    return PairHamiltonian(
        spin=s, J=J, B=B, matrix=matrix, interaction=interaction, zeeman=zeeman
    )


def level_labels(s) -> list[tuple[float, float]]:
    """(j, m) labels in the fixed enumeration order used for level pairing:
    j = s + 1/2 sector with m descending, then j = s - 1/2 with m descending."""
    s = Spin.coerce(s)
    j_plus = (s.two_s + 1) / 2.0
    labels = [(j_plus, j_plus - k) for k in range(s.two_s + 2)]
    j_minus = (s.two_s - 1) / 2.0
    labels += [(j_minus, j_minus - k) for k in range(s.two_s)]
    return labels


def level_energies(s, J, B) -> np.ndarray:
    """Closed-form energies in the `level_labels` enumeration order."""
    s = Spin.coerce(s)
    J, B = float(J), float(B)
    out = np.empty(s.pair_dim)
    for i, (j, m) in enumerate(level_labels(s)):
        sector = 4.0 * J * s.s if j > s.s else -4.0 * J * (s.s + 1.0)
        out[i] = sector + 2.0 * B * m
    return out


def analytic_spectrum(s, J, B) -> list[Level]:
    """All 2(2s+1) labeled levels, sorted by energy (stable in the
    enumeration order on ties)."""
    s = Spin.coerce(s)
    energies = level_energies(s, J, B)
    levels = [Level(j, m, e) for (j, m), e in zip(level_labels(s), energies)]
    return sorted(levels, key=lambda lv: lv.energy)


def jacobi_eigh(matrix, max_sweeps: int = JACOBI_MAX_SWEEPS):
    """Cyclic Jacobi diagonalization of a real symmetric matrix.

    Returns (eigenvalues ascending, eigenvector columns in the same order)
    with matrix = V diag(E) V^T. Rotations stop once every off-diagonal
    entry is below 1e-14 times the Frobenius norm of the input; failure to
    get there within the sweep budget raises DiagonalizationError. Chosen
    for robustness over speed: the pair space never exceeds dimension 14.
    """
    a = np.array(matrix, dtype=float)
    n = a.shape[0]
    if a.shape != (n, n) or not np.array_equal(a, a.T):
        raise ValueError("jacobi_eigh needs a square symmetric matrix")
    v = np.eye(n)
    threshold = JACOBI_RELATIVE_THRESHOLD * np.linalg.norm(a)
    for _ in range(max_sweeps):
        rotated = False
        for p in range(n - 1):
            for q in range(p + 1, n):
                if abs(a[p, q]) <= threshold:
                    continue
                rotated = True
                tau = (a[q, q] - a[p, p]) / (2.0 * a[p, q])
                if tau == 0.0:
                    t = 1.0
                else:
                    t = np.sign(tau) / (abs(tau) + np.hypot(tau, 1.0))
                c = 1.0 / np.sqrt(t * t + 1.0)
                sn = t * c
                col_p, col_q = a[:, p].copy(), a[:, q].copy()
                a[:, p] = c * col_p - sn * col_q
                a[:, q] = sn * col_p + c * col_q
                row_p, row_q = a[p, :].copy(), a[q, :].copy()
                a[p, :] = c * row_p - sn * row_q
                a[q, :] = sn * row_p + c * row_q
                a[p, q] = a[q, p] = 0.0
                vec_p, vec_q = v[:, p].copy(), v[:, q].copy()
                v[:, p] = c * vec_p - sn * vec_q
                v[:, q] = sn * vec_p + c * vec_q
        if not rotated:
            break
    else:
        raise DiagonalizationError(
            f"no convergence within {max_sweeps} Jacobi sweeps (n = {n})"
        )
    order = np.argsort(np.diag(a), kind="stable")
    return np.diag(a)[order].copy(), v[:, order]


def diagonalize(h: PairHamiltonian) -> Spectrum:
    """Numerical spectrum of a pair Hamiltonian."""
    energies, vectors = jacobi_eigh(h.matrix)
    return Spectrum(energies=energies, eigenvectors=vectors)


def match_levels(h: PairHamiltonian, spectrum: Spectrum) -> np.ndarray:
    """Numerical eigenvalues rearranged into the `level_labels` order.

    The magnetization expectation of each eigenvector identifies m exactly
    (H is block diagonal in total magnetization and the blocks have size at
    most two); within a block the exchange expectation separates the two
    sectors, larger in j = s + 1/2. When a block is degenerate (J = 0) the
    assignment inside it is arbitrary, and also irrelevant: both labels then
    carry the same energy and the same thermal weight.
    """
    v = spectrum.eigenvectors
    m_exp = np.einsum("ij,ij->j", v, h.zeeman @ v)
    v_exp = np.einsum("ij,ij->j", v, h.interaction @ v)
    two_m = np.rint(2.0 * m_exp).astype(int)
    by_label: dict[tuple[bool, int], float] = {}
    for tm in np.unique(two_m):
        idx = np.flatnonzero(two_m == tm)
        if len(idx) == 1:
            # |m| = s + 1/2 happens only in the upper sector
            by_label[(True, int(tm))] = spectrum.energies[idx[0]]
        else:
            first, second = idx
            if v_exp[first] < v_exp[second]:
                first, second = second, first
            by_label[(True, int(tm))] = spectrum.energies[first]
            by_label[(False, int(tm))] = spectrum.energies[second]
    s = h.spin
    return np.array(
        [by_label[(j > s.s, round(2 * m))] for j, m in level_labels(s)]
    )
