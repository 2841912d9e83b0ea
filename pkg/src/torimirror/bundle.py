"""Simple projectively flat bundles E(r, A, r', U, p, q) on a complex torus.

A bundle is fixed by an integer pair ``(r, A)``, real shift vectors ``p`` and
``q`` and a set of unitary transition matrices ``{V_j, U_k}`` of order
``r'``.  The rank ``r'`` comes from the elementary divisors of ``A``.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property, lru_cache, reduce
from math import gcd, prod
from typing import Optional, Sequence

import numpy as np

from .exactmat import IntMatrix, ReducedFraction, SnfCertificate, as_int_matrix, reduce_fraction, snf
from .torus import DEFAULT_TOL, TorusData, in_divisor_lattice, t_decompose

TWO_PI = 2.0 * np.pi


class CocycleError(ValueError):
    """Transition matrices violate the cocycle relations."""


class NotHolomorphic(ValueError):
    """AT is not symmetric for the torus at hand."""


@dataclass(frozen=True)
class RankData:
    r: int
    A: IntMatrix
    cert: SnfCertificate
    fracs: tuple[ReducedFraction, ...]

    @property
    def n(self) -> int:
        return len(self.A)

    @property
    def s(self) -> int:
        return self.cert.s

    @property
    def rprime(self) -> int:
        return prod(f.denominator for f in self.fracs)

    @property
    def lattice_scales(self) -> tuple[int, ...]:
        """``r_i'`` for the first s coordinates, 1 after that."""
        return tuple(f.denominator for f in self.fracs) + (1,) * (self.n - self.s)

    @cached_property
    def left(self) -> np.ndarray:
        return np.array(self.cert.left, dtype=float)

    @cached_property
    def right(self) -> np.ndarray:
        return np.array(self.cert.right, dtype=float)

    @cached_property
    def left_inv(self) -> np.ndarray:
        return np.array(self.cert.left_inv, dtype=float)

    @cached_property
    def right_inv(self) -> np.ndarray:
        return np.array(self.cert.right_inv, dtype=float)


def rank_data(r: int, A: Sequence[Sequence[int]]) -> RankData:
    """Elementary divisors of A and the reduced fractions a_i~/r = a_i'/r_i'."""
    r = int(r)
    if r < 1:
        raise ValueError("r must be a positive integer")
    return _rank_data(r, as_int_matrix(A))


@lru_cache(maxsize=4096)
def _rank_data(r: int, A: IntMatrix) -> RankData:
    cert = snf(A)
    fracs = tuple(reduce_fraction(d, r) for d in cert.divisors)
    return RankData(r=r, A=A, cert=cert, fracs=fracs)


def _wrap_phase(z: complex, tol: float) -> float:
    if abs(abs(z) - 1.0) > tol * max(1.0, 10 * abs(z)):
        raise CocycleError(f"|det| = {abs(z):.12g} differs from 1")
    phi = float(np.angle(z)) % TWO_PI
    # snap the 2pi wrap-around so numerically-real dets land on 0, not 2pi
    if TWO_PI - phi <= tol:
        phi = 0.0
    return phi


def det_phases(V: Sequence[np.ndarray], U: Sequence[np.ndarray], tol: float = DEFAULT_TOL):
    """Principal-branch phases (xi, theta) in [0, 2pi) of det V_j and det U_j."""
    xi = np.array([_wrap_phase(np.linalg.det(m), tol) for m in V])
    theta = np.array([_wrap_phase(np.linalg.det(m), tol) for m in U])
    return xi, theta


@dataclass(frozen=True, eq=False)
class UnitarySet:
    V: tuple[np.ndarray, ...]
    U: tuple[np.ndarray, ...]
    xi: np.ndarray
    theta: np.ndarray

    @property
    def order(self) -> int:
        return self.V[0].shape[0]

    @property
    def n(self) -> int:
        return len(self.V)

    def matrices(self) -> tuple[np.ndarray, ...]:
        return self.V + self.U


def make_unitary_set(V, U, tol: float = DEFAULT_TOL) -> UnitarySet:
    V = tuple(np.array(m, dtype=complex) for m in V)
    U = tuple(np.array(m, dtype=complex) for m in U)
    if not V or len(V) != len(U):
        raise ValueError("need n matrices V_j and n matrices U_k")
    m = V[0].shape[0]
    for mat in V + U:
        if mat.shape != (m, m):
            raise ValueError("all transition matrices must be square of equal order")
        if np.max(np.abs(mat.conj().T @ mat - np.eye(m))) > tol * 10 * m:
            raise CocycleError("transition matrix is not unitary")
    xi, theta = det_phases(V, U, tol)
    return UnitarySet(V=V, U=U, xi=xi, theta=theta)


def _kron_all(factors: list[np.ndarray]) -> np.ndarray:
    return reduce(np.kron, factors, np.eye(1, dtype=complex))


def standard_unitary_set(rank: RankData) -> UnitarySet:
    """Shift/clock tensor construction, in the coordinates where A is diagonal.

    For i <= s the i-th factor is the cyclic shift (for V_i) or the clock
    matrix raised to the power -a_i' (for U_i) of order r_i'; every other
    factor is an identity.  Directions past s get identities.
    """
    sizes = [f.denominator for f in rank.fracs]
    eyes = [np.eye(k, dtype=complex) for k in sizes]
    V, U = [], []
    for i in range(rank.n):
        if i < rank.s:
            k = sizes[i]
            shift = np.roll(np.eye(k, dtype=complex), 1, axis=1)
            zeta = np.exp(2j * np.pi / k)
            clock_pow = np.diag(zeta ** (-rank.fracs[i].numerator * np.arange(k)))
            V.append(_kron_all(eyes[:i] + [shift] + eyes[i + 1:]))
            U.append(_kron_all(eyes[:i] + [clock_pow] + eyes[i + 1:]))
        else:
            V.append(_kron_all(eyes))
            U.append(_kron_all(eyes))
    return make_unitary_set(V, U)


def _unitary_power(m: np.ndarray, k: int) -> np.ndarray:
    if k < 0:
        m, k = m.conj().T, -k
    return np.linalg.matrix_power(m, k)


def pullback_unitary_set(uset: UnitarySet, rank: RankData) -> UnitarySet:
    """Express a set valid for the diagonal form of A in the original coordinates.

    A translation x -> x + 2pi e_j is a combination of the diagonal-frame
    translations with coefficients from column j of right^{-1}; y -> y + 2pi e_k
    uses row k of left^{-1}.  With identity certificates the set is unchanged.
    """
    binv, ainv = rank.cert.right_inv, rank.cert.left_inv
    n, m = rank.n, uset.order
    V, U = [], []
    for j in range(n):
        mat = np.eye(m, dtype=complex)
        for l in range(n):
            mat = mat @ _unitary_power(uset.V[l], binv[l][j])
        V.append(mat)
    for k in range(n):
        mat = np.eye(m, dtype=complex)
        for l in range(n):
            mat = mat @ _unitary_power(uset.U[l], ainv[k][l])
        U.append(mat)
    return make_unitary_set(V, U)


def check_cocycle(uset: UnitarySet, r: int, A, tol: float = DEFAULT_TOL) -> bool:
    """V_j V_k = V_k V_j, U_j U_k = U_k U_j and zeta^{-a_kj} U_k V_j = V_j U_k.

    zeta is the primitive r-th root of unity exp(2 pi i / r).
    """
    A = as_int_matrix(A)
    n = len(A)
    if uset.n != n:
        raise ValueError(f"unitary set has {uset.n} directions, A has {n}")
    order = uset.order
    if any(m.shape != (order, order) for m in uset.matrices()):
        raise ValueError("transition matrices have mismatched orders")
    zeta = np.exp(2j * np.pi / r)
    V, U = uset.V, uset.U

    def close(x, y):
        return np.max(np.abs(x - y)) <= tol * 10 * order

    for j in range(n):
        for k in range(n):
            if not close(V[j] @ V[k], V[k] @ V[j]):
                return False
            if not close(U[j] @ U[k], U[k] @ U[j]):
                return False
            if not close(zeta ** (-A[k][j]) * (U[k] @ V[j]), V[j] @ U[k]):
                return False
    return True


def commutant_dimension(uset: UnitarySet, tol: float = 1e-8) -> int:
    """Dimension of the space of matrices commuting with every V_j and U_k."""
    m = uset.order
    eye = np.eye(m)
    # row-major vec: vec(M X) = (I kron X^T) vec M, vec(X M) = (X kron I) vec M
    system = np.vstack([np.kron(eye, X.T) - np.kron(X, eye) for X in uset.matrices()])
    sv = np.linalg.svd(system, compute_uv=False)
    return m * m - int(np.sum(sv > tol * max(1.0, sv[0])))


@dataclass(frozen=True, eq=False)
class FactorizedBundle:
    r: int
    A: IntMatrix
    p: np.ndarray
    q: np.ndarray
    uset: UnitarySet
    rank: RankData

    @property
    def n(self) -> int:
        return len(self.A)

    @property
    def rprime(self) -> int:
        return self.rank.rprime

    @cached_property
    def A_float(self) -> np.ndarray:
        return np.array(self.A, dtype=float)


def make_bundle(r: int, A, p, q, uset: Optional[UnitarySet] = None, tol: float = DEFAULT_TOL) -> FactorizedBundle:
    """Assemble a bundle; without ``uset`` the standard set is pulled back to A's frame."""
    rank = rank_data(r, A)
    n = rank.n
    p = np.array(p, dtype=float).reshape(-1)
    q = np.array(q, dtype=float).reshape(-1)
    if p.shape != (n,) or q.shape != (n,):
        raise ValueError(f"p and q must have length {n}")
    if uset is None:
        uset = pullback_unitary_set(standard_unitary_set(rank), rank)
    if uset.order != rank.rprime:
        raise CocycleError(f"transition matrices have order {uset.order}, rank is {rank.rprime}")
    if not check_cocycle(uset, rank.r, rank.A, tol):
        raise CocycleError("transition matrices violate the cocycle condition")
    return FactorizedBundle(r=rank.r, A=rank.A, p=p, q=q, uset=uset, rank=rank)


def is_holomorphic(A, torus: TorusData, tol: Optional[float] = None) -> bool:
    """AT == (AT)^t within tol (max-abs entry)."""
    tol = torus.tol if tol is None else tol
    AT = np.array(A, dtype=float) @ torus.T
    return bool(np.max(np.abs(AT - AT.T)) <= tol)


def curvature_02(A, r: int, torus: TorusData) -> np.ndarray:
    """Coefficient matrix M of the (0,2) curvature, dzbar^t M dzbar.

    M = (i / 2 pi r) {T (T - Tbar)^{-1}}^t A^t (T - Tbar)^{-1}.  The form
    vanishes exactly when M is symmetric.
    """
    T = torus.T
    W = np.linalg.inv(T - T.conj())
    At = np.array(A, dtype=float).T
    return (1j / (TWO_PI * r)) * (T @ W).T @ At @ W


def antisymmetric_norm(M: np.ndarray) -> float:
    return float(np.max(np.abs(M - M.T)) / 2)


def connection_coefficient(bundle: FactorizedBundle, torus: TorusData, x, y=None) -> np.ndarray:
    """dy-coefficient -(i / 2 pi r)(x^t A^t + p^t + q^t T) of the connection.

    Independent of y; the argument is accepted so callers can pass a point.
    """
    x = np.asarray(x, dtype=float)
    row = x @ bundle.A_float.T + bundle.p + bundle.q @ torus.T
    return -(1j / (TWO_PI * bundle.r)) * row


def tensor_line(bundle: FactorizedBundle, tau, sigma, u, v, tol: float = DEFAULT_TOL) -> FactorizedBundle:
    """Tensor with the line bundle E(1, 0, 1, {e^{i tau}, e^{i sigma}}, u, v).

    (p, q) moves to (p + r u, q + r v) and each V_j, U_k picks up the scalar
    e^{i tau_j}, e^{i sigma_k}.  Phases are re-read from the new determinants.
    """
    tau, sigma = np.asarray(tau, dtype=float), np.asarray(sigma, dtype=float)
    u, v = np.asarray(u, dtype=float), np.asarray(v, dtype=float)
    if not (tau.any() or sigma.any()):
        uset = bundle.uset
    else:
        V = [np.exp(1j * t) * m for t, m in zip(tau, bundle.uset.V)]
        U = [np.exp(1j * s) * m for s, m in zip(sigma, bundle.uset.U)]
        uset = make_unitary_set(V, U, tol)
    return FactorizedBundle(
        r=bundle.r,
        A=bundle.A,
        p=bundle.p + bundle.r * u,
        q=bundle.q + bundle.r * v,
        uset=uset,
        rank=bundle.rank,
    )


@dataclass(frozen=True)
class PrimitiveForm:
    r: int
    A: IntMatrix
    p: np.ndarray
    q: np.ndarray
    k: int

    @property
    def key(self) -> tuple[int, IntMatrix]:
        return (self.r, self.A)


def primitive_form(r: int, A, p, q) -> PrimitiveForm:
    """Divide (r, A, p, q) by k = gcd(r, entries of A)."""
    A = as_int_matrix(A)
    k = gcd(int(r), *(x for row in A for x in row))
    return PrimitiveForm(
        r=int(r) // k,
        A=tuple(tuple(x // k for x in row) for row in A),
        p=np.asarray(p, dtype=float) / k,
        q=np.asarray(q, dtype=float) / k,
        k=k,
    )


@dataclass(frozen=True, eq=False)
class BundleComparison:
    isomorphic: bool
    reason: str
    alpha: Optional[np.ndarray] = None
    beta: Optional[np.ndarray] = None
    alpha_coords: Optional[np.ndarray] = None
    beta_coords: Optional[np.ndarray] = None


def compare_bundles(E1: FactorizedBundle, E2: FactorizedBundle, torus: TorusData,
                    tol: Optional[float] = None) -> BundleComparison:
    """Isomorphism test with the witness decomposition.

    After reducing both bundles to primitive (r, A), the difference
    (p + T^t q) - (p' + T^t q') - (r/r')(theta - theta') - T^t (r/r')(xi' - xi)
    is split as alpha + T^t beta; the bundles are isomorphic iff
    left @ alpha / (2 pi r) and right^t @ beta / (2 pi r) lie in the divisor
    lattice.
    """
    tol = torus.tol if tol is None else tol
    if E1.n != torus.n or E2.n != torus.n:
        raise ValueError("bundle dimension does not match the torus")
    for E in (E1, E2):
        if not is_holomorphic(E.A, torus, tol):
            raise NotHolomorphic("AT is not symmetric; bundle is not holomorphic")
    f1 = primitive_form(E1.r, E1.A, E1.p, E1.q)
    f2 = primitive_form(E2.r, E2.A, E2.p, E2.q)
    if f1.key != f2.key:
        return BundleComparison(False, "rank or first Chern class differ")
    rank = rank_data(f1.r, f1.A)
    c = f1.r / rank.rprime
    Tt = torus.T.T
    w = (f1.p + Tt @ f1.q) - (f2.p + Tt @ f2.q) \
        - c * (E1.uset.theta - E2.uset.theta) - Tt @ (c * (E2.uset.xi - E1.uset.xi))
    alpha, beta = t_decompose(w, torus)
    ma = rank.left @ alpha / (TWO_PI * f1.r)
    mb = rank.right.T @ beta / (TWO_PI * f1.r)
    iso = in_divisor_lattice(ma, rank, tol) and in_divisor_lattice(mb, rank, tol)
    reason = "congruent modulo the divisor lattice" if iso else "not congruent modulo the divisor lattice"
    return BundleComparison(iso, reason, alpha, beta, ma, mb)


def bundle_iso(E1: FactorizedBundle, E2: FactorizedBundle, torus: TorusData,
               tol: Optional[float] = None) -> bool:
    return compare_bundles(E1, E2, torus, tol).isomorphic
