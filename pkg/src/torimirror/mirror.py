"""The mirror map F on objects and a finite-family bijectivity check.

F sends E(r, A, r', U, p, q) to the brane L(r, A, p - (r/r') theta, q + (r/r') xi)
where xi, theta are the determinant phases of U.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Optional, Sequence

import numpy as np

from .bundle import (
    FactorizedBundle,
    NotHolomorphic,
    UnitarySet,
    bundle_iso,
    is_holomorphic,
    make_bundle,
    tensor_line,
)
from .exactmat import as_int_matrix
from .jsonio import brane_to_json, bundle_to_json, compact_key
from .lagrangian import LagrangianBrane, brane_iso, make_brane
from .torus import TorusData

BIJECTION = "bijection"
NOT_INJECTIVE = "not_injective"
NOT_SURJECTIVE = "not_surjective"
NOT_WELL_DEFINED = "not_well_defined"


def _require_holomorphic(E: FactorizedBundle, torus: Optional[TorusData]) -> None:
    if torus is not None and not is_holomorphic(E.A, torus):
        raise NotHolomorphic(f"AT != (AT)^t for A = {[list(r) for r in E.A]}; bundle is not holomorphic")


def apply_functor(E: FactorizedBundle, torus: Optional[TorusData] = None) -> LagrangianBrane:
    """F(E); pass ``torus`` to enforce holomorphicity first."""
    _require_holomorphic(E, torus)
    c = E.r / E.rprime
    return make_brane(E.r, E.A, E.p - c * E.uset.theta, E.q + c * E.uset.xi)


def naive_map(E: FactorizedBundle, torus: Optional[TorusData] = None) -> LagrangianBrane:
    """Forget the transition matrices: E(r, A, r', U, p, q) -> L(r, A, p, q).

    Not injective on isomorphism classes; kept to reproduce that failure.
    """
    return make_brane(E.r, E.A, E.p, E.q)


def inverse_representative(L: LagrangianBrane, uset: Optional[UnitarySet] = None) -> FactorizedBundle:
    """A bundle whose image under F is isomorphic to ``L``."""
    probe = make_bundle(L.r, L.A, L.p, L.q, uset)
    c = L.r / probe.rprime
    return make_bundle(L.r, L.A, L.p + c * probe.uset.theta, L.q - c * probe.uset.xi, probe.uset)


# ------------------------------------------------------------------ families

@dataclass(frozen=True, eq=False)
class Family:
    """Finite test family: pairs (r, A), a (p, q) grid and phase twists.

    The grid covers [0, 2 pi r)^n in steps of ``grid_step_pi * pi`` for both p
    and q.  Each twist multiplies the U-matrix in ``twist_direction`` by
    e^{i pi t}.
    """

    torus: TorusData
    pairs: tuple
    grid_step_pi: Fraction
    twists_pi: tuple = (Fraction(0),)
    twist_direction: int = 0

    def __post_init__(self):
        if not self.pairs:
            raise ValueError("family has no (r, A) pairs")
        if self.grid_step_pi <= 0:
            raise ValueError("grid step must be positive")
        if not 0 <= self.twist_direction < self.torus.n:
            raise ValueError("twist direction out of range")
        for r, A in self.pairs:
            if len(A) != self.torus.n:
                raise ValueError("pair dimension does not match the torus")
            if not is_holomorphic(A, self.torus):
                raise NotHolomorphic(f"pair (r={r}, A={[list(x) for x in A]}) is not holomorphic for this torus")

    def grid(self, r: int) -> list[float]:
        count = math.ceil(Fraction(2 * r) / self.grid_step_pi)
        return [float(k * self.grid_step_pi) * math.pi for k in range(count)]


def make_family(torus, pairs, grid_step_pi, twists_pi=(0,), twist_direction=0) -> Family:
    pairs = tuple((int(r), as_int_matrix(A)) for r, A in pairs)
    return Family(
        torus=torus,
        pairs=pairs,
        grid_step_pi=Fraction(grid_step_pi),
        twists_pi=tuple(Fraction(t) for t in twists_pi),
        twist_direction=int(twist_direction),
    )


def family_bundles(family: Family) -> list[FactorizedBundle]:
    n = family.torus.n
    out = []
    for r, A in family.pairs:
        g = family.grid(r)
        for p in itertools.product(g, repeat=n):
            for q in itertools.product(g, repeat=n):
                base = make_bundle(r, A, p, q)
                for t in family.twists_pi:
                    sigma = np.zeros(n)
                    sigma[family.twist_direction] = float(t) * math.pi
                    out.append(tensor_line(base, np.zeros(n), sigma, np.zeros(n), np.zeros(n)))
    return out


def family_branes(family: Family) -> list[LagrangianBrane]:
    n = family.torus.n
    out = []
    for r, A in family.pairs:
        g = family.grid(r)
        for p in itertools.product(g, repeat=n):
            for q in itertools.product(g, repeat=n):
                out.append(make_brane(r, A, p, q))
    return out


def partition(objs: Sequence, same: Callable, key: Callable) -> list[list[int]]:
    """Group indices into classes, comparing only against class representatives.

    Valid because ``same`` is an equivalence relation; ``key`` buckets objects
    that can never be equivalent (different primitive slope).
    """
    classes: list[list[int]] = []
    buckets: dict = {}
    for i, obj in enumerate(objs):
        bucket = buckets.setdefault(key(obj), [])
        for ci in bucket:
            if same(objs[classes[ci][0]], obj):
                classes[ci].append(i)
                break
        else:
            bucket.append(len(classes))
            classes.append([i])
    return classes


def _slope_key(obj) -> tuple:
    k = math.gcd(obj.r, *(x for row in obj.A for x in row))
    return (obj.r // k, tuple(tuple(x // k for x in row) for row in obj.A))


@dataclass
class IsoClassReport:
    mapping: str
    bundles: dict
    branes: dict
    classes_bundle: list
    classes_brane: list
    map: list
    verdict: str
    witnesses: list = field(default_factory=list)
    round_trip_failures: list = field(default_factory=list)

    def to_json(self) -> dict:
        return {
            "mapping": self.mapping,
            "objects": {"bundles": self.bundles, "branes": self.branes},
            "classes_bundle": self.classes_bundle,
            "classes_brane": self.classes_brane,
            "map": self.map,
            "verdict": self.verdict,
            "witnesses": self.witnesses,
            "round_trip_failures": self.round_trip_failures,
        }


def verify_bijection(family: Family, naive: bool = False) -> IsoClassReport:
    """Classify a finite family on both sides and test the induced class map."""
    torus = family.torus
    tol = torus.tol
    mapper = naive_map if naive else apply_functor

    def biso(a, b):
        return bundle_iso(a, b, torus, tol)

    def liso(a, b):
        return brane_iso(a, b, tol)

    bundles = sorted(family_bundles(family), key=lambda E: compact_key(bundle_to_json(E)))
    bundle_ids = [f"E{i:04d}" for i in range(len(bundles))]
    images = [mapper(E, torus) for E in bundles]

    # brane side: the grid branes plus every image, deduplicated by encoding
    pool = {}
    for L in family_branes(family) + images:
        pool.setdefault(compact_key(brane_to_json(L)), L)
    brane_keys = sorted(pool)
    branes = [pool[k] for k in brane_keys]
    brane_ids = [f"L{i:04d}" for i in range(len(branes))]
    position = {k: i for i, k in enumerate(brane_keys)}
    image_index = [position[compact_key(brane_to_json(L))] for L in images]

    bclasses = partition(bundles, biso, _slope_key)
    lclasses = partition(branes, liso, _slope_key)
    brane_class_of = {}
    for ci, members in enumerate(lclasses):
        for i in members:
            brane_class_of[i] = ci

    bundle_class_of = {i: ci for ci, members in enumerate(bclasses) for i in members}

    def witness(kind, a, b):
        return {
            "kind": kind,
            "bundles": [bundle_ids[a], bundle_ids[b]],
            "images": [brane_ids[image_index[a]], brane_ids[image_index[b]]],
            "bundle_iso": biso(bundles[a], bundles[b]),
            "brane_iso": liso(images[a], images[b]),
        }

    # injective: bundles whose images are isomorphic must be isomorphic
    witnesses = []
    by_image: dict = {}
    for i in range(len(bundles)):
        by_image.setdefault(brane_class_of[image_index[i]], {}).setdefault(bundle_class_of[i], i)
    for group in by_image.values():
        firsts = list(group.values())
        for a, b in itertools.combinations(firsts, 2):
            witnesses.append(witness(NOT_INJECTIVE, a, b))
    injective = not witnesses

    # well defined: isomorphic bundles must have isomorphic images
    class_map = []
    for ci, members in enumerate(bclasses):
        targets: dict = {}
        for i in members:
            targets.setdefault(brane_class_of[image_index[i]], i)
        firsts = list(targets.values())
        for b in firsts[1:]:
            witnesses.append(witness(NOT_WELL_DEFINED, firsts[0], b))
        class_map.append([ci, brane_class_of[image_index[members[0]]]])
    well_defined = all(w["kind"] != NOT_WELL_DEFINED for w in witnesses)
    hit = {lc for _, lc in class_map}

    surjective = True
    round_trip_failures = []
    for lc, members in enumerate(lclasses):
        rep = branes[members[0]]
        if not naive:
            back = inverse_representative(rep)
            if not liso(apply_functor(back, torus), rep):
                round_trip_failures.append(brane_ids[members[0]])
        if lc not in hit:
            surjective = False
            back = inverse_representative(rep)
            witnesses.append({
                "kind": NOT_SURJECTIVE,
                "branes": [brane_ids[members[0]]],
                "preimage_outside_family": bundle_to_json(back),
                "preimage_in_family": any(biso(back, bundles[bclasses[c][0]]) for c in range(len(bclasses))),
            })

    if not injective:
        verdict = NOT_INJECTIVE
    elif not well_defined:
        verdict = NOT_WELL_DEFINED
    elif not surjective:
        verdict = NOT_SURJECTIVE
    else:
        verdict = BIJECTION

    return IsoClassReport(
        mapping="naive" if naive else "functor",
        bundles={bid: bundle_to_json(E) for bid, E in zip(bundle_ids, bundles)},
        branes={lid: brane_to_json(L) for lid, L in zip(brane_ids, branes)},
        classes_bundle=[[bundle_ids[i] for i in c] for c in bclasses],
        classes_brane=[[brane_ids[i] for i in c] for c in lclasses],
        map=class_map,
        verdict=verdict,
        witnesses=witnesses,
        round_trip_failures=round_trip_failures,
    )
