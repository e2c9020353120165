"""Transfer operator R_W, its adjoint subdivision operator, truncated spectra,
and the periodization diagnostics that decide ONB versus mere tight frame.

For a Laurent-polynomial weight W with coefficients c_k, the transfer
operator acts on Fourier coefficients as (R_W f)_n = sum_k c_{N n - k} f_k
and its adjoint as (R_W* f)_n = sum_k conj(c_{N k - n}) f_k.  With
D = max(|min_deg|, max_deg) of W, the mode window |n| <= ceil(D/(N-1)) is
invariant under R_W (|N n - k| <= D and |k| <= m force |n| <= m), so the
finite matrix on that window represents R_W without truncation leakage.

The orthogonality diagnostic: translates of the scaling function are
orthonormal exactly when PER(|phihat|^2)(t) = sum_n |phihat(t + 2*pi*n)|^2
is identically 1, and equivalently (generically) when the truncated
transfer matrix of W = |m_0|^2 has peripheral spectrum {1} with a simple
eigenvalue 1.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .cascade import fourier_infinite_product
from .defaults import K_TERMS, N_MAX, PF_TOL
from .filterbank import FilterBank
from .laurent import DEFAULT_GRID, LaurentPoly


def weight_from_lowpass(m0: LaurentPoly) -> LaurentPoly:
    """W = |m_0|^2 = m_0 * adjoint(m_0), the orthogonal-type transfer weight."""
    return m0 * m0.adjoint()


def min_band(w: LaurentPoly, scale_n: int) -> int:
    """Smallest invariant mode window for weight w under scaling by N."""
    if w.is_zero:
        return 1
    d = max(abs(w.min_deg), abs(w.max_deg))
    return max(math.ceil(d / (scale_n - 1)), 1)


@dataclass(frozen=True)
class TransferSpec:
    """Weight, scale number, and Fourier-mode cutoff for the truncated operator."""

    w: LaurentPoly
    scale_n: int
    band_m: int

    def __post_init__(self):
        if self.scale_n < 2:
            raise ValueError("scale number must be >= 2")
        required = min_band(self.w, self.scale_n)
        if self.band_m < required:
            raise ValueError(
                f"band_m {self.band_m} too small; the invariant window needs "
                f"band_m >= {required}"
            )

    @staticmethod
    def from_weight(
        w: LaurentPoly,
        scale_n: int,
        band_m: Optional[int] = None,
        require_nonnegative: bool = False,
        grid_size: int = DEFAULT_GRID,
    ) -> "TransferSpec":
        if require_nonnegative:
            low = float(np.min(w.eval_grid(grid_size).real))
            if low < -1e-9:
                raise ValueError(f"weight is not nonnegative on the torus (min {low:.3e})")
        if band_m is None:
            band_m = min_band(w, scale_n)
        return TransferSpec(w, scale_n, band_m)

    @staticmethod
    def for_bank(bank: FilterBank, band_m: Optional[int] = None) -> "TransferSpec":
        """Spec with W = |m_0|^2; nonnegativity holds by construction."""
        return TransferSpec.from_weight(
            weight_from_lowpass(bank.lowpass), bank.scale_n, band_m
        )


def transfer_apply(spec: TransferSpec, f: LaurentPoly) -> LaurentPoly:
    """(R_W f)_n = sum_k c_{N n - k} f_k, exact in coefficients.

    Sampled on the torus this equals (1/N) sum_{w^N = z} W(w) f(w).
    """
    if spec.w.is_zero or f.is_zero:
        return LaurentPoly.zero()
    c, g, n = spec.w, f, spec.scale_n
    lo = math.ceil((c.min_deg + g.min_deg) / n)
    hi = math.floor((c.max_deg + g.max_deg) / n)
    if lo > hi:
        return LaurentPoly.zero()
    out = [
        sum(c.coeff(n * m - k) * g.coeff(k) for k in range(g.min_deg, g.max_deg + 1))
        for m in range(lo, hi + 1)
    ]
    return LaurentPoly.from_coeffs(lo, out)


def subdivision_apply(spec: TransferSpec, f: LaurentPoly) -> LaurentPoly:
    """(R_W* f)(z) = conj-poly(W)(z) * f(z**N), the subdivision operator."""
    if spec.w.is_zero or f.is_zero:
        return LaurentPoly.zero()
    return spec.w.adjoint() * f.compose_power(spec.scale_n)


def transfer_matrix(spec: TransferSpec) -> np.ndarray:
    """Matrix of R_W on modes -band_m..band_m: entry (n, k) = c_{N n - k}."""
    m = spec.band_m
    modes = np.arange(-m, m + 1)
    out = np.zeros((len(modes), len(modes)), dtype=complex)
    for i, row_mode in enumerate(modes):
        for j, col_mode in enumerate(modes):
            out[i, j] = spec.w.coeff(spec.scale_n * row_mode - col_mode)
    return out


@dataclass(frozen=True)
class SpectrumReport:
    """Eigenvalues (descending modulus), peripheral subset, and the
    Perron-Frobenius verdict for the truncated transfer matrix."""

    eigenvalues: tuple
    peripheral: tuple
    pf_holds: bool
    fixed_vector: tuple

    def to_json(self) -> dict:
        return {
            "eigenvalues": [[l.real, l.imag] for l in self.eigenvalues],
            "peripheral": [[l.real, l.imag] for l in self.peripheral],
            "pf_holds": self.pf_holds,
            "fixed_vector": [[v.real, v.imag] for v in self.fixed_vector],
        }


def spectrum(spec: TransferSpec, tol: float = PF_TOL) -> SpectrumReport:
    """Eigen-decomposition of the truncated matrix and the PF condition.

    pf_holds is true iff every eigenvalue of modulus >= 1 - tol lies within
    tol of 1 and there is exactly one such (the fixed space is simple).  The
    fixed vector is normalized so its value at z = 1 (the sum of its mode
    coefficients) equals 1 when that value is nonzero.
    """
    mat = transfer_matrix(spec)
    try:
        values, vectors = np.linalg.eig(mat)
    except np.linalg.LinAlgError as exc:  # pragma: no cover - numpy rarely fails here
        raise RuntimeError(f"eigen-solve failed: {exc}") from exc
    order = np.argsort(-np.abs(values))
    values = values[order]
    vectors = vectors[:, order]
    peripheral = tuple(complex(l) for l in values if abs(l) >= 1.0 - tol)
    pf = len(peripheral) == 1 and abs(peripheral[0] - 1.0) <= tol
    idx = int(np.argmin(np.abs(values - 1.0)))
    vec = vectors[:, idx]
    at_one = np.sum(vec)
    if abs(at_one) > 1e-12:
        vec = vec / at_one
    return SpectrumReport(
        tuple(complex(l) for l in values),
        peripheral,
        bool(pf),
        tuple(complex(v) for v in vec),
    )


def per_samples(
    bank: FilterBank,
    t: np.ndarray,
    n_max: int = N_MAX,
    k_terms: int = K_TERMS,
) -> np.ndarray:
    """Truncated periodization sum_{|n| <= n_max} |phihat(t + 2*pi*n)|^2."""
    t = np.asarray(t, dtype=float)
    shifts = 2 * np.pi * np.arange(-n_max, n_max + 1)
    args = t[..., None] + shifts
    vals = fourier_infinite_product(bank, args.ravel(), k_terms=k_terms)
    vals = np.abs(vals.reshape(args.shape)) ** 2
    return np.sum(vals, axis=-1)


@dataclass(frozen=True)
class PerReport:
    max_dev_from_1: float
    is_constant_1: bool
    tail_estimate: float
    n_max: int

    def to_json(self) -> dict:
        return {
            "max_dev_from_1": self.max_dev_from_1,
            "is_constant_1": self.is_constant_1,
            "tail_estimate": self.tail_estimate,
            "n_max": self.n_max,
        }


def per_check(
    bank: FilterBank,
    t_points: int = 64,
    n_max: int = N_MAX,
    k_terms: int = K_TERMS,
    flat_tol: float = 1e-2,
) -> PerReport:
    """Max deviation of the truncated periodization from 1 over a t-grid.

    The reported tail estimate is the O(1/n_max) bound coming from the
    1/|t| decay of the transform of an FIR low-pass filter.
    """
    t = 2 * np.pi * np.arange(t_points) / t_points
    per = per_samples(bank, t, n_max=n_max, k_terms=k_terms)
    dev = float(np.max(np.abs(per - 1.0)))
    tail = float(bank.scale_n) / (math.pi**2 * n_max)
    return PerReport(dev, dev <= flat_tol, tail, n_max)


def fixed_point_check(
    bank: FilterBank, f_fine: Sequence[float], grid_points: Optional[int] = None
) -> float:
    """Residual of the transfer fixed-point equation R_{|m0|^2} f = f.

    `f_fine` holds samples of f on the fine angle grid u_j = 2*pi*j/(N*M),
    j = 0..N*M-1, where M = grid_points (default: len(f_fine)//N).  R f is
    evaluated on the coarse grid t_i = 2*pi*i/M by the torus-sum formula
    (R f)(t) = (1/N) sum_k W((t + 2*pi*k)/N) f((t + 2*pi*k)/N), every needed
    angle being a fine-grid point; the result is max_i |(R f)(t_i) - f(t_i)|.
    """
    f_fine = np.asarray(f_fine, dtype=float)
    n = bank.scale_n
    if grid_points is None:
        if len(f_fine) % n:
            raise ValueError("fine sample count must be a multiple of the scale number")
        grid_points = len(f_fine) // n
    if len(f_fine) != n * grid_points:
        raise ValueError(f"expected {n * grid_points} fine samples, got {len(f_fine)}")
    m = grid_points
    u = 2 * np.pi * np.arange(n * m) / (n * m)
    w_vals = np.abs(bank.lowpass.eval_angle(u)) ** 2
    rf = np.zeros(m)
    for k in range(n):
        idx = np.arange(m) + k * m
        rf += w_vals[idx] * f_fine[idx]
    rf /= n
    coarse = f_fine[np.arange(m) * n]
    return float(np.max(np.abs(rf - coarse)))
