"""Built-in, self-validating bundles of varieties and vector fields.

Each bundle packages a variety with named certified fields, overshear
samples, verified unit witnesses, candidate ideal generators, designated
compatible-pair candidates, and exact sample points on the variety.
Construction re-runs every check (tangency, nilpotency chains, unit
equations, overshear conditions, point membership); a bundle that fails
any of them aborts naming the offending item.

Bundles are addressable by name: cn:2, danielewski:p=<poly>:n=<k>, sl2,
gl2, koras-russell.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Optional, Tuple

from .denslab import verify_unit_witness
from .errors import LndLabError
from .fields import (
    AffineVariety,
    Inconclusive,
    LNDCertificate,
    OvershearField,
    affine_variety_cn,
    check_lnd,
    make_derivation,
    make_overshear,
)
from .idealquot import RingElement
from .polyalg import GaussianRational, Polynomial, Ring, parse_poly

ExactPoint = Tuple[GaussianRational, ...]


@dataclass(frozen=True)
class VarietyBundle:
    name: str
    variety: AffineVariety
    lnds: Dict[str, LNDCertificate]
    overshears: Dict[str, OvershearField]
    units: Tuple[Tuple[RingElement, RingElement], ...]
    ideal_candidates: Tuple[RingElement, ...]
    pair_candidates: Tuple[Tuple[str, str], ...]
    sample_points: Tuple[ExactPoint, ...]
    notes: str = ""

    def __post_init__(self):
        self._validate()

    def _validate(self):
        for label, cert in self.lnds.items():
            if not isinstance(cert, LNDCertificate):
                raise LndLabError(f"bundle {self.name}: field {label} is not certified")
            if cert.variety != self.variety:
                raise LndLabError(f"bundle {self.name}: field {label} lives elsewhere")
            if not cert.replay():
                raise LndLabError(f"bundle {self.name}: certificate for {label} does not replay")
        for label, over in self.overshears.items():
            residue = over.base.derivation.apply(over.a)
            if not residue.is_zero():
                raise LndLabError(f"bundle {self.name}: overshear {label} fails D(a) = 0")
        for f, g in self.units:
            if not verify_unit_witness(self.variety, f, g):
                raise LndLabError(f"bundle {self.name}: unit witness ({f}, {g}) fails")
        for left, right in self.pair_candidates:
            if left not in self.lnds or right not in self.lnds:
                raise LndLabError(f"bundle {self.name}: pair ({left}, {right}) unresolved")
        for point in self.sample_points:
            if not self.variety.contains_point(point):
                raise LndLabError(f"bundle {self.name}: sample point {point} is off the variety")

    def lnd(self, label: str) -> LNDCertificate:
        try:
            return self.lnds[label]
        except KeyError:
            raise LndLabError(
                f"bundle {self.name} has no field {label!r}; available: {sorted(self.lnds)}"
            ) from None

    def overshear(self, label: str) -> OvershearField:
        try:
            return self.overshears[label]
        except KeyError:
            raise LndLabError(
                f"bundle {self.name} has no overshear {label!r}; available: {sorted(self.overshears)}"
            ) from None

    def to_json_dict(self) -> dict:
        from .fields import variety_to_json

        return {
            "name": self.name,
            "variety": variety_to_json(self.variety),
            "lnds": {
                label: {
                    "images": {
                        v: str(img)
                        for v, img in zip(
                            self.variety.ambient.vars, cert.derivation.images
                        )
                    },
                    "nilpotency_indices": dict(
                        zip(self.variety.ambient.vars, cert.indices)
                    ),
                }
                for label, cert in sorted(self.lnds.items())
            },
            "overshears": {
                label: {"base": str(over.base.derivation), "f": str(over.f), "a": str(over.a)}
                for label, over in sorted(self.overshears.items())
            },
            "units": [[str(f), str(g)] for f, g in self.units],
            "ideal_candidates": [str(g) for g in self.ideal_candidates],
            "pair_candidates": [list(p) for p in self.pair_candidates],
            "sample_points": [
                [str(Polynomial.constant(Ring(("q",)), c)) for c in point]
                for point in self.sample_points
            ],
            "notes": self.notes,
        }


def _certify(variety, images, label, bundle):
    verdict = check_lnd(make_derivation(variety, images))
    if isinstance(verdict, Inconclusive):
        raise LndLabError(f"bundle {bundle}: field {label} did not certify")
    return verdict


def _exact(point) -> ExactPoint:
    return tuple(
        c if isinstance(c, GaussianRational) else GaussianRational(c) for c in point
    )


def affine_space(n: int) -> VarietyBundle:
    """C^n with its coordinate fields and standard overshear samples."""
    if n < 1:
        raise LndLabError("affine space needs n >= 1")
    variety = affine_variety_cn(n)
    names = variety.ambient.vars
    lnds = {
        f"d{v}": _certify(variety, [1 if i == j else 0 for j in range(n)], f"d{v}", f"cn:{n}")
        for i, v in enumerate(names)
    }
    overshears: Dict[str, OvershearField] = {}
    if n == 1:
        overshears["z_dz"] = make_overshear(lnds["dz"], "z")
    else:
        first, last = names[0], names[-1]
        overshears[f"{first}2_d{last}"] = make_overshear(
            lnds[f"d{last}"], Polynomial.variable(variety.ambient, first) ** 2
        )
        overshears[f"{first}{last}_d{last}"] = make_overshear(
            lnds[f"d{last}"],
            Polynomial.variable(variety.ambient, first)
            * Polynomial.variable(variety.ambient, last),
        )
    points = [
        _exact([0] * n),
        _exact([1] * n),
        _exact([Fraction(1, 2) if i % 2 == 0 else Fraction(-2, 3) for i in range(n)]),
    ]
    return VarietyBundle(
        name=f"cn:{n}",
        variety=variety,
        lnds=lnds,
        overshears=overshears,
        units=(),
        ideal_candidates=(variety.element(1),),
        pair_candidates=((f"d{names[0]}", f"d{names[1]}"),) if n >= 2 else (),
        sample_points=tuple(points),
        notes="affine space; coordinate fields plus sample shear/overshear multipliers",
    )


def danielewski(p: Polynomial, n: Optional[int] = None) -> VarietyBundle:
    """The hypersurface u*v = p(z) with its 2n triangular fields.

    The field often written as p'(z_i) d/du - u d/dz_i is not tangent to
    uv - p (its Leibniz residue is (u+v) * dp/dz_i); the bundle carries
    the tangent variant z_i -> u, v -> dp/dz_i (and its u/v mirror).
    """
    if n is None:
        n = p.ring.arity
    if p.ring.arity != n:
        raise LndLabError(f"p has {p.ring.arity} variables, expected n={n}")
    if p.is_constant():
        raise LndLabError("danielewski needs a nonconstant p")
    z_names = p.ring.vars
    ambient = Ring(z_names + ("u", "v"))
    p_amb = p.in_ring(ambient)
    u = Polynomial.variable(ambient, "u")
    v = Polynomial.variable(ambient, "v")
    variety = AffineVariety(ambient, [u * v - p_amb], name=f"danielewski:n={n}")
    zero = Polynomial.zero(ambient)

    lnds: Dict[str, LNDCertificate] = {}
    for i, z in enumerate(z_names):
        dp = p_amb.partial(z)
        suffix = str(i + 1) if n > 1 else ""
        up_images = [zero] * ambient.arity
        up_images[i] = u
        up_images[ambient.index("v")] = dp
        lnds[f"theta{suffix}_u"] = _certify(variety, up_images, f"theta{suffix}_u", "danielewski")
        vp_images = [zero] * ambient.arity
        vp_images[i] = v
        vp_images[ambient.index("u")] = dp
        lnds[f"theta{suffix}_v"] = _certify(variety, vp_images, f"theta{suffix}_v", "danielewski")

    first = "theta1_u" if n > 1 else "theta_u"
    overshears = {
        "z_theta_u": make_overshear(
            lnds[first], Polynomial.variable(ambient, z_names[0])
        )
    }
    pair_candidates = tuple(
        (f"theta{i + 1}_u", f"theta{j + 1}_v")
        for i in range(n)
        for j in range(n)
        if i != j
    )
    ideal_candidates: Tuple[RingElement, ...] = ()
    if n >= 2:
        ideal_candidates = (
            variety.element(u * Polynomial.variable(ambient, z_names[0])),
        )

    points: List[ExactPoint] = []
    for z_vals in ([0] * n, [1] * n, [Fraction(1, 2)] + [0] * (n - 1)):
        pz = p.evaluate(tuple(z_vals))
        points.append(_exact(list(z_vals) + [1, pz]))
        points.append(_exact(list(z_vals) + [2, pz / 2]))
    notes = (
        "hypersurface u*v = p(z); fields are the tangent triangular variant "
        "z_i -> u, v -> dp/dz_i (the u d/dz_i version fails tangency with "
        "residue (u+v)*dp/dz_i). For n = 1 the absence of compatible pairs "
        "is a non-existence claim over all field pairs and is not testable here."
    )
    return VarietyBundle(
        name=f"danielewski:p={p}:n={n}",
        variety=variety,
        lnds=lnds,
        overshears=overshears,
        units=(),
        ideal_candidates=ideal_candidates,
        pair_candidates=pair_candidates,
        sample_points=tuple(points),
        notes=notes,
    )


def sl2() -> VarietyBundle:
    """SL_2 as {ad - bc = 1} with one-sided unipotent fields and a
    conjugate nilpotent field that restores full tangent rank."""
    ring = Ring(("a", "b", "c", "d"))
    variety = AffineVariety(ring, [parse_poly("a*d - b*c - 1", ring)], name="sl2")
    lnds = {
        "right_e12": _certify(variety, ["0", "a", "0", "c"], "right_e12", "sl2"),
        "right_e21": _certify(variety, ["b", "0", "d", "0"], "right_e21", "sl2"),
        "left_e12": _certify(variety, ["c", "d", "0", "0"], "left_e12", "sl2"),
        "left_e21": _certify(variety, ["0", "0", "a", "b"], "left_e21", "sl2"),
        "left_eprime": _certify(
            variety, ["a - c", "b - d", "a - c", "b - d"], "left_eprime", "sl2"
        ),
    }
    overshears = {
        "b_right_e12": make_overshear(lnds["right_e12"], "b"),
    }
    points = [
        _exact((1, 0, 0, 1)),
        _exact((2, 1, 1, 1)),
        _exact((1, 3, 0, 1)),
        _exact((0, 1, -1, 0)),
    ]
    return VarietyBundle(
        name="sl2",
        variety=variety,
        lnds=lnds,
        overshears=overshears,
        units=(),
        ideal_candidates=(variety.element(1),),
        pair_candidates=(),
        sample_points=tuple(points),
        notes=(
            "one-sided unipotent multiplications; at the identity the four "
            "standard fields span rank 2 of the 3-dimensional tangent space, "
            "adding the nilpotent-conjugate field raises it to 3"
        ),
    )


def gl2() -> VarietyBundle:
    """GL_2 modelled as {w*(ad - bc) = 1}; the determinant is a nonconstant
    invertible function, the obstruction every bundled field annihilates."""
    ring = Ring(("a", "b", "c", "d", "w"))
    variety = AffineVariety(
        ring, [parse_poly("w*(a*d - b*c) - 1", ring)], name="gl2"
    )
    lnds = {
        "right_e12": _certify(variety, ["0", "a", "0", "c", "0"], "right_e12", "gl2"),
        "right_e21": _certify(variety, ["b", "0", "d", "0", "0"], "right_e21", "gl2"),
        "left_e12": _certify(variety, ["c", "d", "0", "0", "0"], "left_e12", "gl2"),
        "left_e21": _certify(variety, ["0", "0", "a", "b", "0"], "left_e21", "gl2"),
    }
    overshears = {
        "b_right_e12": make_overshear(lnds["right_e12"], "b"),
    }
    points = [
        _exact((1, 0, 0, 1, 1)),
        _exact((2, 0, 0, 1, Fraction(1, 2))),
        _exact((3, 1, 2, 1, 1)),
        _exact((1, 2, 0, 3, Fraction(1, 3))),
    ]
    return VarietyBundle(
        name="gl2",
        variety=variety,
        lnds=lnds,
        overshears=overshears,
        units=((variety.element("a*d - b*c"), variety.element("w")),),
        ideal_candidates=(),
        pair_candidates=(),
        sample_points=tuple(points),
        notes="the unit (ad - bc, w) certifies a nontrivial invertible function",
    )


def koras_russell() -> VarietyBundle:
    """The cubic {x + x^2 y + u^2 + v^3 = 0} with two fields fixing x.

    Both bundled fields annihilate x, a desk-scale witness of the known
    obstruction; this does not prove the statement for all such fields.
    """
    ring = Ring(("x", "y", "u", "v"))
    variety = AffineVariety(
        ring, [parse_poly("x + x^2*y + u^2 + v^3", ring)], name="koras-russell"
    )
    lnds = {
        "d1": _certify(variety, ["0", "-3*v^2", "0", "x^2"], "d1", "koras-russell"),
        "d2": _certify(variety, ["0", "-2*u", "x^2", "0"], "d2", "koras-russell"),
    }
    for label, cert in lnds.items():
        if not cert.derivation.apply("x").is_zero():
            raise LndLabError(f"bundle koras-russell: field {label} moves x")
    overshears = {
        "v_d1": make_overshear(lnds["d1"], "v"),
    }
    points = [
        _exact((0, 0, 0, 0)),
        _exact((0, 5, 0, 0)),
        _exact((-1, -1, 1, 1)),
        _exact((-1, 0, 1, 0)),
        _exact((-2, 0, 1, 1)),
    ]
    return VarietyBundle(
        name="koras-russell",
        variety=variety,
        lnds=lnds,
        overshears=overshears,
        units=(),
        ideal_candidates=(),
        pair_candidates=(),
        sample_points=tuple(points),
        notes="both bundled fields fix the x axis (kill x); witness only, not a classification",
    )


BUNDLE_PREFIXES = ("cn", "danielewski", "sl2", "gl2", "koras-russell")


def bundle_names() -> List[str]:
    return ["cn:<n>", "danielewski:p=<poly>:n=<k>", "sl2", "gl2", "koras-russell"]


def bundle_by_name(name: str) -> VarietyBundle:
    """Resolve a bundle address like cn:2 or danielewski:p=z^2:n=1."""
    if name == "sl2":
        return sl2()
    if name == "gl2":
        return gl2()
    if name == "koras-russell":
        return koras_russell()
    if name.startswith("cn:"):
        try:
            n = int(name.split(":", 1)[1])
        except ValueError:
            raise LndLabError(f"bad affine-space bundle name {name!r}") from None
        return affine_space(n)
    if name.startswith("danielewski:"):
        parts = name.split(":")[1:]
        p_src = None
        n = 1
        for part in parts:
            if part.startswith("p="):
                p_src = part[2:]
            elif part.startswith("n="):
                n = int(part[2:])
            else:
                raise LndLabError(f"bad danielewski bundle field {part!r}")
        if p_src is None:
            raise LndLabError("danielewski bundle needs p=<poly>")
        z_ring = Ring(("z",) if n == 1 else tuple(f"z{i}" for i in range(1, n + 1)))
        return danielewski(parse_poly(p_src, z_ring), n)
    raise LndLabError(
        f"unknown bundle {name!r}; known: {', '.join(bundle_names())}"
    )
