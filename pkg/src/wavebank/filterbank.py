"""Subband filter systems and their polyphase matrix representation.

A bank of N filters (m_0, ..., m_{N-1}) corresponds to an N x N matrix
Laurent polynomial A(z) by the exact coefficient rearrangement

    A[i, j] coefficient k   <->   coefficient (N*k + j) of m_i,

equivalently A[i, j](z) = (1/N) * sum_{w^N = z} m_i(w) w**(-j) and
m_i(z) = sum_j z**j A[i, j](z**N).  Orthogonality (the quadrature
conditions) of the bank is equivalent to unitarity of A on the torus; both
sides of that equivalence are implemented independently so they can be
checked against each other.

Filter normalization follows the sqrt(N) convention: a low-pass filter has
m_0(1) = sqrt(N), i.e. its coefficients sum to sqrt(N).  Banks built from the
classical h-convention (coefficients summing to 2 for N = 2) are bridged by
a_n = h_n / sqrt(2).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .laurent import (
    DEFAULT_GRID,
    DEFAULT_TOL,
    LaurentPoly,
    MatLaurentPoly,
    SingularOnTorusError,
)


class NonPolynomialInverseError(ValueError):
    """det A is not a monomial, so (A*)^{-1} is not a Laurent polynomial."""

    def __init__(self, message: str, determinant: LaurentPoly):
        super().__init__(message)
        self.determinant = determinant


@dataclass(frozen=True)
class FilterBank:
    """N subband filters; filters[0] is the low-pass slot."""

    scale_n: int
    filters: tuple

    def __post_init__(self):
        if self.scale_n < 2:
            raise ValueError("scale number must be >= 2")
        if len(self.filters) != self.scale_n:
            raise ValueError(
                f"expected {self.scale_n} filters, got {len(self.filters)}"
            )

    @property
    def lowpass(self) -> LaurentPoly:
        return self.filters[0]

    def coefficients(self, band: int) -> np.ndarray:
        return self.filters[band].coeff_array()

    @staticmethod
    def haar() -> "FilterBank":
        m0 = LaurentPoly.from_coeffs(0, [1 / math.sqrt(2), 1 / math.sqrt(2)])
        m1 = LaurentPoly.from_coeffs(0, [1 / math.sqrt(2), -1 / math.sqrt(2)])
        return FilterBank(2, (m0, m1))

    @staticmethod
    def from_lowpass(m0: LaurentPoly) -> "FilterBank":
        """Complete a two-band bank from its low-pass filter.

        Requires m0 supported on 0..2n+1 (an even tap count); the high-pass
        is the standard completion b_k = (-1)**k * conj(a_{2n+1-k}).
        """
        if m0.is_zero or m0.min_deg != 0 or len(m0.coeffs) % 2 != 0:
            raise ValueError("low-pass filter must have support 0..2n+1")
        a = m0.coeff_array()
        top = len(a) - 1
        b = np.array(
            [(-1) ** k * np.conj(a[top - k]) for k in range(len(a))], dtype=complex
        )
        return FilterBank(2, (m0, LaurentPoly.from_coeffs(0, b)))

    def to_json(self) -> dict:
        return {
            "N": self.scale_n,
            "filters": [f.to_json() for f in self.filters],
            "convention": "sqrtN",
        }

    @staticmethod
    def from_json(obj: dict) -> "FilterBank":
        n = int(obj["N"])
        filters = tuple(LaurentPoly.from_json(f) for f in obj["filters"])
        return FilterBank(n, filters)


@dataclass(frozen=True)
class BiorthPair:
    """Primal/dual filter banks satisfying the biorthogonal duality relations."""

    primal: FilterBank
    dual: FilterBank

    def __post_init__(self):
        if self.primal.scale_n != self.dual.scale_n:
            raise ValueError("primal and dual banks must share the scale number")


@dataclass(frozen=True)
class QmfReport:
    passed: bool
    max_residual: float
    lowpass_ok: bool


def _root_values(bank: FilterBank, grid_size: int) -> np.ndarray:
    """Filter values at the N-th roots of every grid point.

    Returns shape (N_filters, N_roots, grid_size): entry (i, k, j) is
    m_i(w_{k,j}) where {w_{k,j}}_k are the N-th roots of z_j.
    """
    n = bank.scale_n
    fine = np.exp(2j * np.pi * np.arange(n * grid_size) / (n * grid_size))
    vals = np.stack([f.eval(fine) for f in bank.filters])
    return vals.reshape(len(bank.filters), n, grid_size)


def check_qmf(
    bank: FilterBank, grid_size: int = DEFAULT_GRID, tol: float = DEFAULT_TOL
) -> QmfReport:
    """Verify the quadrature conditions on a torus grid.

    The residual is the max over the grid and over filter pairs (j, k) of
    |(1/N) * sum_{w^N=z} conj(m_j(w)) m_k(w) - delta_jk|; lowpass_ok records
    whether |m_0(1) - sqrt(N)| <= tol.  Failures are reported, not raised.
    """
    n = bank.scale_n
    roots = _root_values(bank, grid_size)
    gram = np.einsum("ikg,jkg->ijg", np.conj(roots), roots) / n
    gram -= np.eye(n)[:, :, None]
    residual = float(np.max(np.abs(gram)))
    lowpass_ok = abs(bank.lowpass.eval(1.0) - math.sqrt(n)) <= tol
    return QmfReport(residual <= tol, residual, lowpass_ok)


def polyphase_from_filters(bank: FilterBank) -> MatLaurentPoly:
    """Exact index rearrangement of filter coefficients into A(z)."""
    n = bank.scale_n
    entries = []
    for i in range(n):
        row = []
        f = bank.filters[i]
        for j in range(n):
            coeffs = {}
            if not f.is_zero:
                for deg in range(f.min_deg, f.max_deg + 1):
                    if (deg - j) % n == 0:
                        c = f.coeff(deg)
                        if c != 0:
                            coeffs[(deg - j) // n] = c
            if coeffs:
                lo = min(coeffs)
                hi = max(coeffs)
                row.append(
                    LaurentPoly.from_coeffs(
                        lo, [coeffs.get(k, 0.0) for k in range(lo, hi + 1)]
                    )
                )
            else:
                row.append(LaurentPoly.zero())
        entries.append(row)
    return MatLaurentPoly.from_entries(entries)


def filters_from_polyphase(A: MatLaurentPoly) -> FilterBank:
    """m_i(z) = sum_j z**j A[i, j](z**N); exact inverse of polyphase_from_filters."""
    n = A.n
    filters = []
    for i in range(n):
        f = LaurentPoly.zero()
        for j in range(n):
            f = f + A.entry(i, j).compose_power(n).shift(j)
        filters.append(f)
    return FilterBank(n, tuple(filters))


def _as_monomial(p: LaurentPoly) -> tuple[int, complex]:
    """Interpret p as a monomial, tolerating coefficient dust below 1e-12 relative."""
    if p.is_zero:
        raise SingularOnTorusError("determinant is identically zero")
    arr = np.abs(p.coeff_array())
    k = int(np.argmax(arr))
    if np.any(np.delete(arr, k) > 1e-12 * arr[k]):
        raise NonPolynomialInverseError(
            "determinant is not a monomial; the inverse polyphase matrix "
            "is not FIR",
            p,
        )
    return p.min_deg + k, p.coeffs[k]


def inverse_of_monomial_det(A: MatLaurentPoly) -> MatLaurentPoly:
    """A^{-1} = adj(A) / det(A), valid when det A is a (nonzero) monomial."""
    det = A.determinant()
    deg, c = _as_monomial(det)
    n = A.n
    if n == 1:
        entries = [[LaurentPoly.one()]]
    else:
        entries = [[None] * n for _ in range(n)]
        for i in range(n):
            for j in range(n):
                rows = [r for r in range(n) if r != j]
                cols = [s for s in range(n) if s != i]
                minor = [[A.entry(r, s) for s in cols] for r in rows]
                cof = _det(minor)
                entries[i][j] = cof if (i + j) % 2 == 0 else -cof
    adj = MatLaurentPoly.from_entries(entries)
    return (adj * (1.0 / c)) * LaurentPoly.monomial(-deg)


def _det(entries: list) -> LaurentPoly:
    if len(entries) == 1:
        return entries[0][0]
    total = LaurentPoly.zero()
    for j in range(len(entries)):
        minor = [row[:j] + row[j + 1 :] for row in entries[1:]]
        term = entries[0][j] * _det(minor)
        total = total + (term if j % 2 == 0 else -term)
    return total


def dual_filters(A: MatLaurentPoly, grid_size: int = DEFAULT_GRID) -> BiorthPair:
    """Primal bank of A together with the dual bank of (A*)^{-1}.

    Only FIR duals are supported: det A must be a monomial (then the adjugate
    divided by the determinant is again a Laurent polynomial).  det A must
    also be bounded away from zero on the torus.
    """
    det = A.determinant()
    if det.is_zero or np.min(np.abs(det.eval_grid(grid_size))) <= 1e-9:
        raise SingularOnTorusError("det A (nearly) vanishes on the torus")
    _as_monomial(det)  # raises with det A attached when the inverse is not FIR
    dual_mat = inverse_of_monomial_det(A.adjoint())
    return BiorthPair(filters_from_polyphase(A), filters_from_polyphase(dual_mat))


def biorthogonality_residual(pair: BiorthPair, grid_size: int = DEFAULT_GRID) -> float:
    """Max deviation of (1/N) sum_{w^N=z} conj(m_i(w)) mdual_j(w) from delta_ij."""
    n = pair.primal.scale_n
    prim = _root_values(pair.primal, grid_size)
    dual = _root_values(pair.dual, grid_size)
    gram = np.einsum("ikg,jkg->ijg", np.conj(prim), dual) / n
    gram -= np.eye(n)[:, :, None]
    return float(np.max(np.abs(gram)))
