"""Period-matrix data for a complex torus and its mirror symplectic forms."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import TYPE_CHECKING

import numpy as np

if TYPE_CHECKING:
    from .bundle import RankData

DEFAULT_TOL = 1e-9


class InvalidTorus(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class TorusData:
    """A complex torus C^n / 2pi(Z^n + T Z^n) with z = x + T y.

    ``omega`` and ``bfield`` are the symplectic form and B-field of the mirror,
    the imaginary and real parts of ``(-T^{-1})^t``.
    """

    T: np.ndarray
    omega: np.ndarray = field(repr=False)
    bfield: np.ndarray = field(repr=False)
    tol: float = DEFAULT_TOL

    @property
    def n(self) -> int:
        return self.T.shape[0]

    def same_as(self, other: "TorusData") -> bool:
        return self.T.shape == other.T.shape and np.allclose(self.T, other.T, rtol=0, atol=self.tol)


def make_torus(T, tol: float = DEFAULT_TOL) -> TorusData:
    """Validate a period matrix and derive the mirror forms.

    Raises :class:`InvalidTorus` if ``Im T`` is not symmetric positive
    definite or if ``T`` is (numerically) singular.
    """
    T = np.array(T, dtype=complex)
    if T.ndim != 2 or T.shape[0] != T.shape[1] or T.shape[0] == 0:
        raise InvalidTorus(f"period matrix must be square, got shape {T.shape}")
    if not tol > 0:
        raise InvalidTorus("tolerance must be positive")
    im = T.imag
    if np.max(np.abs(im - im.T)) > tol:
        raise InvalidTorus("Im T is not symmetric")
    eig = np.linalg.eigvalsh((im + im.T) / 2)
    if eig.min() <= tol:
        raise InvalidTorus(f"Im T is not positive definite (min eigenvalue {eig.min():.3g})")
    if abs(np.linalg.det(T)) <= tol:
        raise InvalidTorus("T is singular; the det T = 0 case is not supported")
    mirror = -np.linalg.inv(T).T
    return TorusData(T=T, omega=mirror.imag.copy(), bfield=mirror.real.copy(), tol=tol)


def t_decompose(v, torus: TorusData) -> tuple[np.ndarray, np.ndarray]:
    """Split a complex vector as ``v = alpha + T^t beta`` with real alpha, beta."""
    v = np.asarray(v, dtype=complex)
    Tt = torus.T.T
    beta = np.linalg.solve(Tt.imag, v.imag)
    alpha = v.real - Tt.real @ beta
    return alpha, beta


def in_divisor_lattice(m, rank: "RankData", tol: float = DEFAULT_TOL) -> bool:
    """Membership in Z/r_1' x ... x Z/r_s' x Z x ... x Z.

    Tested in scaled form: ``r_i' * m_i`` must be within ``tol`` of an integer.
    """
    m = np.asarray(m, dtype=float)
    scaled = m * np.asarray(rank.lattice_scales, dtype=float)
    return bool(np.all(np.abs(scaled - np.round(scaled)) <= tol))
