"""Both sides of the torus mirror correspondence and the map between them.

Complex side: simple projectively flat bundles E(r, A, r', U, p, q) on
C^n / 2pi(Z^n + T Z^n).  Symplectic side: affine Lagrangian multi-sections
with flat line bundles L(r, A, p, q) on the mirror torus.
"""

from .bundle import (
    CocycleError,
    FactorizedBundle,
    NotHolomorphic,
    RankData,
    UnitarySet,
    bundle_iso,
    check_cocycle,
    commutant_dimension,
    compare_bundles,
    connection_coefficient,
    curvature_02,
    det_phases,
    is_holomorphic,
    make_bundle,
    make_unitary_set,
    primitive_form,
    pullback_unitary_set,
    rank_data,
    standard_unitary_set,
    tensor_line,
)
from .exactmat import ReducedFraction, SnfCertificate, reduce_fraction, snf
from .lagrangian import InvalidBrane, LagrangianBrane, brane_iso, compare_branes, fiber_points, is_brane, make_brane
from .mirror import (
    Family,
    IsoClassReport,
    apply_functor,
    inverse_representative,
    make_family,
    naive_map,
    verify_bijection,
)
from .torus import DEFAULT_TOL, InvalidTorus, TorusData, in_divisor_lattice, make_torus, t_decompose

__version__ = "0.1.0"
