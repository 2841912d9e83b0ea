"""Affine Lagrangian multi-sections with flat unitary line bundles on the mirror torus."""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import cached_property
from typing import Optional

import numpy as np

from .bundle import TWO_PI, RankData, primitive_form, rank_data
from .exactmat import IntMatrix
from .torus import DEFAULT_TOL, TorusData, in_divisor_lattice


class InvalidBrane(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class LagrangianBrane:
    """The pair (L(r,A,p), local system with holonomy q).

    L is the image of the graph ycheck = (1/r) A xcheck + (1/r) p.
    """

    r: int
    A: IntMatrix
    p: np.ndarray
    q: np.ndarray
    rank: RankData

    @property
    def n(self) -> int:
        return len(self.A)

    @cached_property
    def A_float(self) -> np.ndarray:
        return np.array(self.A, dtype=float)


def make_brane(r: int, A, p, q) -> LagrangianBrane:
    rank = rank_data(r, A)
    p = np.array(p, dtype=float).reshape(-1)
    q = np.array(q, dtype=float).reshape(-1)
    if p.shape != (rank.n,) or q.shape != (rank.n,):
        raise InvalidBrane(f"p and q must have length {rank.n}")
    return LagrangianBrane(r=rank.r, A=rank.A, p=p, q=q, rank=rank)


def is_brane(A, torus: TorusData, tol: Optional[float] = None) -> bool:
    """Lagrangian condition (omega A symmetric) and flatness (B A symmetric)."""
    tol = torus.tol if tol is None else tol
    A = np.array(A, dtype=float)
    wa = torus.omega @ A
    ba = torus.bfield @ A
    return bool(np.max(np.abs(wa - wa.T)) <= tol and np.max(np.abs(ba - ba.T)) <= tol)


def canonical_angles(points: np.ndarray) -> np.ndarray:
    """Reduce to [0, 2pi), folding values within 1e-12 of 2pi onto 0."""
    out = np.mod(points, TWO_PI)
    out[np.isclose(out, TWO_PI, rtol=0, atol=1e-12)] = 0.0
    return out


def torus_distance(a: np.ndarray, b: np.ndarray) -> float:
    """Max-coordinate distance on R^n / 2pi Z^n."""
    d = np.mod(np.asarray(a) - np.asarray(b), TWO_PI)
    return float(np.max(np.minimum(d, TWO_PI - d)))


def fiber_points(brane: LagrangianBrane, xcheck) -> np.ndarray:
    """The r' points of the multi-section over ``xcheck``, as rows in [0, 2pi)^n.

    They are (1/r) A x + (1/r) p + (2 pi / r) A right M for
    M = (m_1, ..., m_s, 0, ..., 0) with 0 <= m_i < r_i'.
    """
    rank = brane.rank
    base = (brane.A_float @ np.asarray(xcheck, dtype=float) + brane.p) / brane.r
    AB = brane.A_float @ rank.right
    ranges = [range(f.denominator) for f in rank.fracs]
    pts = []
    for ms in itertools.product(*ranges):
        M = np.zeros(brane.n)
        M[: rank.s] = ms
        pts.append(base + (TWO_PI / brane.r) * (AB @ M))
    return canonical_angles(np.array(pts).reshape(-1, brane.n))


@dataclass(frozen=True, eq=False)
class BraneComparison:
    isomorphic: bool
    reason: str
    p_coords: Optional[np.ndarray] = None
    q_coords: Optional[np.ndarray] = None

    @property
    def holonomy_witness(self) -> Optional[np.ndarray]:
        """N_{r'} with right^t (q' - q) = 2 pi r N_{r'}, when isomorphic."""
        if not self.isomorphic:
            return None
        return -self.q_coords


def compare_branes(L1: LagrangianBrane, L2: LagrangianBrane, tol: float = DEFAULT_TOL) -> BraneComparison:
    """p and q congruences modulo 2 pi r left^{-1} D and 2 pi r (right^{-1})^t D."""
    if L1.n != L2.n:
        raise InvalidBrane("branes live on tori of different dimension")
    f1 = primitive_form(L1.r, L1.A, L1.p, L1.q)
    f2 = primitive_form(L2.r, L2.A, L2.p, L2.q)
    if f1.key != f2.key:
        return BraneComparison(False, "slopes (r, A) differ")
    rank = rank_data(f1.r, f1.A)
    mp = rank.left @ (f1.p - f2.p) / (TWO_PI * f1.r)
    mq = rank.right.T @ (f1.q - f2.q) / (TWO_PI * f1.r)
    iso = in_divisor_lattice(mp, rank, tol) and in_divisor_lattice(mq, rank, tol)
    reason = "congruent modulo the divisor lattice" if iso else "not congruent modulo the divisor lattice"
    return BraneComparison(iso, reason, mp, mq)


def brane_iso(L1: LagrangianBrane, L2: LagrangianBrane, tol: float = DEFAULT_TOL) -> bool:
    return compare_branes(L1, L2, tol).isomorphic
