"""Derivations on affine coordinate rings and their flows.

An AffineVariety is an ambient ring plus defining polynomials with a
cached Groebner basis.  A Derivation is given by one image per ambient
variable; construction verifies tangency (the Leibniz extension maps the
defining ideal into itself), which is the computable meaning of "vector
field on X".  Smoothness of X is not checked.

A derivation D is certified locally nilpotent by iterating it on each
coordinate until the result vanishes in the quotient; since locally
nilpotent elements form a subalgebra, annihilating the generators is
enough.  Certified derivations get exact polynomial flows
x_i -> sum_k t^k D^k(x_i)/k!.  A multiplier f with D(f) = 0 produces a
shear f*D (again certified); D^2(f) = 0 produces an overshear, whose
flow is the base flow run for the reparametrized time
s = f(x) * t * phi1(a(x) * t) with a = D(f) and phi1(w) = (e^w - 1)/w.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple, Union

from .errors import (
    ArityMismatch,
    InternalInvariantError,
    LndLabError,
    OvershearConditionViolated,
    ShearConditionViolated,
    TangencyError,
    UncertifiedDerivation,
)
from .idealquot import GroebnerBasis, MonomialOrder, RingElement, grevlex, groebner
from .polyalg import (
    GaussianRational,
    Polynomial,
    Ring,
    iter_exponents,
    parse_poly,
)

# `t` is the flow time of polynomial flows, `s` the internal time of the
# base flow inside a hybrid flow; neither may name an ambient variable.
RESERVED_TIME_SYMBOLS = ("t", "s")


class AffineVariety:
    """Ambient ring + defining polynomials + cached Groebner basis."""

    __slots__ = ("ambient", "defining", "order", "gb", "name")

    def __init__(
        self,
        ambient: Ring,
        defining: Sequence[Polynomial] = (),
        order: Optional[MonomialOrder] = None,
        name: Optional[str] = None,
    ):
        for reserved in RESERVED_TIME_SYMBOLS:
            if reserved in ambient:
                raise LndLabError(
                    f"variable {reserved!r} is reserved for flow time and may not "
                    "name an ambient coordinate"
                )
        defining = tuple(q for q in defining if not q.is_zero())
        for q in defining:
            if q.ring != ambient:
                raise LndLabError("defining polynomial lives outside the ambient ring")
        if order is None:
            order = grevlex(ambient)
        if defining:
            gb = groebner(defining, order)
        else:
            gb = GroebnerBasis(ambient, order, ())
        object.__setattr__(self, "ambient", ambient)
        object.__setattr__(self, "defining", defining)
        object.__setattr__(self, "order", order)
        object.__setattr__(self, "gb", gb)
        object.__setattr__(self, "name", name)

    def __setattr__(self, name, value):
        raise AttributeError("AffineVariety is immutable")

    def __eq__(self, other):
        if not isinstance(other, AffineVariety):
            return NotImplemented
        return (
            self.ambient == other.ambient
            and self.defining == other.defining
            and self.order == other.order
        )

    def __hash__(self):
        return hash((self.ambient, self.defining))

    def __repr__(self):
        eqs = ", ".join(f"{q} = 0" for q in self.defining) or "affine space"
        return f"AffineVariety({list(self.ambient.vars)}; {eqs})"

    def normal_form(self, f: Polynomial) -> Polynomial:
        return self.gb.normal_form(f)

    def element(self, f: Union[Polynomial, str, int, Fraction, GaussianRational]) -> RingElement:
        if isinstance(f, str):
            f = parse_poly(f, self.ambient)
        elif isinstance(f, (int, Fraction, GaussianRational)):
            f = Polynomial.constant(self.ambient, f)
        return RingElement(self, self.normal_form(f))

    def zero(self) -> RingElement:
        return RingElement(self, Polynomial.zero(self.ambient))

    def coordinates(self) -> Tuple[RingElement, ...]:
        return tuple(self.element(Polynomial.variable(self.ambient, v)) for v in self.ambient.vars)

    def in_ideal(self, f: Polynomial) -> bool:
        return self.gb.contains(f)

    def standard_monomials(self, max_deg: int) -> List[Tuple[int, ...]]:
        """Exponent vectors of quotient-basis monomials of degree <= max_deg,
        ascending grevlex."""
        leads = self.gb.leading_exponents()
        out = []
        for exps in iter_exponents(self.ambient.arity, max_deg):
            if any(all(l <= e for l, e in zip(lead, exps)) for lead in leads):
                continue
            out.append(exps)
        return out

    def contains_point(self, point: Sequence) -> bool:
        """Exact membership test; point components must be exact scalars."""
        for comp in point:
            if not isinstance(comp, (int, Fraction, GaussianRational)):
                raise LndLabError("contains_point needs exact point components")
        if len(point) != self.ambient.arity:
            raise ArityMismatch(
                f"point has {len(point)} components, ambient has {self.ambient.arity}"
            )
        return all(not q.evaluate(point) for q in self.defining)


def affine_variety_cn(n: int, var_names: Optional[Sequence[str]] = None) -> AffineVariety:
    """Affine n-space with no defining equations."""
    if var_names is None:
        if n == 1:
            var_names = ("z",)
        elif n <= 3:
            var_names = ("x", "y", "z")[:n]
        else:
            var_names = tuple(f"z{i}" for i in range(1, n + 1))
    return AffineVariety(Ring(tuple(var_names)), (), name=f"cn:{n}")


class Derivation:
    """A tangent derivation, stored as normal-form images of the coordinates."""

    __slots__ = ("variety", "images")

    def __init__(self, variety: AffineVariety, images: Tuple[RingElement, ...]):
        object.__setattr__(self, "variety", variety)
        object.__setattr__(self, "images", tuple(images))

    def __setattr__(self, name, value):
        raise AttributeError("Derivation is immutable")

    def __eq__(self, other):
        if not isinstance(other, Derivation):
            return NotImplemented
        return self.variety == other.variety and self.images == other.images

    def __hash__(self):
        return hash(self.images)

    def __repr__(self):
        pairs = ", ".join(
            f"{v}->{img}" for v, img in zip(self.variety.ambient.vars, self.images)
        )
        return f"Derivation({pairs})"

    def is_zero(self) -> bool:
        return all(img.is_zero() for img in self.images)

    def image_degree(self) -> int:
        """Max total degree over the coordinate images (normal forms)."""
        return max((img.total_degree() for img in self.images if not img.is_zero()), default=0)

    def apply(self, f: Union[RingElement, Polynomial, str]) -> RingElement:
        """Leibniz extension: D(f) = sum_j df/dx_j * D(x_j), reduced."""
        if isinstance(f, str):
            f = self.variety.element(f)
        if isinstance(f, Polynomial):
            f = self.variety.element(f)
        if f.space != self.variety:
            raise LndLabError("element lives on a different variety")
        total = Polynomial.zero(self.variety.ambient)
        for var, img in zip(self.variety.ambient.vars, self.images):
            if img.is_zero():
                continue
            d = f.rep.partial(var)
            if not d.is_zero():
                total = total + d * img.rep
        return self.variety.element(total)

    def values_at(self, point: Sequence):
        return tuple(img.evaluate(point) for img in self.images)

    def scale(self, factor: Union[RingElement, Polynomial, int, Fraction, GaussianRational]) -> "Derivation":
        """The derivation f*D (images multiplied by f)."""
        if isinstance(factor, RingElement):
            if factor.space != self.variety:
                raise LndLabError("multiplier lives on a different variety")
            factor = factor.rep
        if isinstance(factor, (int, Fraction, GaussianRational)):
            factor = Polynomial.constant(self.variety.ambient, factor)
        return Derivation(
            self.variety,
            tuple(self.variety.element(factor * img.rep) for img in self.images),
        )

    def __add__(self, other: "Derivation") -> "Derivation":
        if not isinstance(other, Derivation):
            return NotImplemented
        if other.variety != self.variety:
            raise LndLabError("derivations live on different varieties")
        return Derivation(
            self.variety, tuple(a + b for a, b in zip(self.images, other.images))
        )

    def __sub__(self, other: "Derivation") -> "Derivation":
        if not isinstance(other, Derivation):
            return NotImplemented
        return self + other.scale(-1)

    def __neg__(self) -> "Derivation":
        return self.scale(-1)


def make_derivation(
    variety: AffineVariety,
    images: Sequence[Union[Polynomial, RingElement, str, int]],
) -> Derivation:
    """Build a derivation from coordinate images, verifying tangency."""
    if len(images) != variety.ambient.arity:
        raise ArityMismatch(
            f"got {len(images)} images for {variety.ambient.arity} ambient variables"
        )
    reduced: List[RingElement] = []
    for img in images:
        if isinstance(img, RingElement):
            if img.space != variety:
                raise LndLabError("image lives on a different variety")
            reduced.append(img)
        else:
            reduced.append(variety.element(img))
    d = Derivation(variety, tuple(reduced))
    for q in variety.defining:
        residue = Polynomial.zero(variety.ambient)
        for var, img in zip(variety.ambient.vars, d.images):
            if img.is_zero():
                continue
            dq = q.partial(var)
            if not dq.is_zero():
                residue = residue + dq * img.rep
        if not variety.in_ideal(residue):
            raise TangencyError(q, variety.normal_form(residue))
    return d


def lie_bracket(d1: Derivation, d2: Derivation) -> Derivation:
    """[D1, D2](x_i) = D1(D2(x_i)) - D2(D1(x_i)); tangency is asserted."""
    if d1.variety != d2.variety:
        raise LndLabError("derivations live on different varieties")
    images = tuple(
        d1.apply(img2) - d2.apply(img1) for img1, img2 in zip(d1.images, d2.images)
    )
    try:
        return make_derivation(d1.variety, images)
    except TangencyError as exc:  # mathematically impossible for tangent inputs
        raise InternalInvariantError(f"bracket lost tangency: {exc}") from exc


@dataclass(frozen=True)
class LNDCertificate:
    """Witness that a derivation is locally nilpotent on the generators.

    indices[i] is the smallest k with D^k(x_i) = 0 in the quotient.
    """

    derivation: Derivation
    indices: Tuple[int, ...]

    @property
    def variety(self) -> AffineVariety:
        return self.derivation.variety

    def max_index(self) -> int:
        return max(self.indices, default=0)

    def replay(self) -> bool:
        """Re-run the nilpotency chains; True iff the indices are exact."""
        d = self.derivation
        for var, n in zip(d.variety.coordinates(), self.indices):
            g = var
            for _ in range(n):
                if g.is_zero():
                    return False  # index not minimal
                g = d.apply(g)
            if not g.is_zero():
                return False
        return True


@dataclass(frozen=True)
class Inconclusive:
    """Nilpotency was not observed within the iteration bound."""

    max_iter: int


LNDVerdict = Union[LNDCertificate, Inconclusive]


def check_lnd(d: Derivation, max_iter: int = 64) -> LNDVerdict:
    """Iterate D on every coordinate; certify if every chain reaches zero."""
    if max_iter < 1:
        raise LndLabError("max_iter must be positive")
    indices: List[int] = []
    for var in d.variety.coordinates():
        g = var
        n = 0
        while not g.is_zero():
            if n >= max_iter:
                return Inconclusive(max_iter)
            g = d.apply(g)
            n += 1
        indices.append(n)
    return LNDCertificate(d, tuple(indices))


def require_certificate(cert) -> LNDCertificate:
    if isinstance(cert, LNDCertificate):
        return cert
    raise UncertifiedDerivation(
        f"expected an LNDCertificate, got {type(cert).__name__}; run check_lnd first"
    )


def make_shear(cert: LNDCertificate, f: Union[RingElement, Polynomial, str]) -> LNDCertificate:
    """f*D for f in ker D; the result carries a fresh certificate."""
    cert = require_certificate(cert)
    d = cert.derivation
    f = d.variety.element(f) if not isinstance(f, RingElement) else f
    residue = d.apply(f)
    if not residue.is_zero():
        raise ShearConditionViolated(residue)
    scaled = d.scale(f)
    verdict = check_lnd(scaled, max_iter=max(cert.max_index(), 1))
    if not isinstance(verdict, LNDCertificate):
        raise InternalInvariantError("shear of a certified LND failed to certify")
    return verdict


@dataclass(frozen=True)
class OvershearField:
    """f*D with D^2(f) = 0; a = D(f) satisfies D(a) = 0."""

    base: LNDCertificate
    f: RingElement
    a: RingElement

    @property
    def variety(self) -> AffineVariety:
        return self.base.variety

    def is_shear(self) -> bool:
        return self.a.is_zero()

    def field(self) -> Derivation:
        return self.base.derivation.scale(self.f)

    def __repr__(self):
        return f"OvershearField(f={self.f}, a={self.a}, base={self.base.derivation!r})"


def make_overshear(cert: LNDCertificate, f: Union[RingElement, Polynomial, str]) -> OvershearField:
    """f*D for f in ker D^2."""
    cert = require_certificate(cert)
    d = cert.derivation
    f = d.variety.element(f) if not isinstance(f, RingElement) else f
    a = d.apply(f)
    residue = d.apply(a)
    if not residue.is_zero():
        raise OvershearConditionViolated(residue)
    return OvershearField(cert, f, a)


class PolynomialFlow:
    """Exact flow of a certified LND: x_i -> sum_k time^k D^k(x_i)/k!.

    Images live in the ambient ring extended by the formal time variable.
    At time 0 the flow is the identity; composing q with the flow keeps q
    in the (extended) defining ideal, which is asserted symbolically at
    construction.
    """

    __slots__ = ("variety", "time_var", "ring", "images")

    def __init__(self, variety: AffineVariety, time_var: str, images: Tuple[Polynomial, ...]):
        object.__setattr__(self, "variety", variety)
        object.__setattr__(self, "time_var", time_var)
        object.__setattr__(self, "ring", images[0].ring)
        object.__setattr__(self, "images", tuple(images))

    def __setattr__(self, name, value):
        raise AttributeError("PolynomialFlow is immutable")

    def __eq__(self, other):
        if not isinstance(other, PolynomialFlow):
            return NotImplemented
        return (
            self.variety == other.variety
            and self.time_var == other.time_var
            and self.images == other.images
        )

    def __repr__(self):
        pairs = ", ".join(
            f"{v}->{img}" for v, img in zip(self.variety.ambient.vars, self.images)
        )
        return f"PolynomialFlow[{self.time_var}]({pairs})"

    def at_time(self, value: Union[int, Fraction, GaussianRational]) -> Tuple[Polynomial, ...]:
        """Substitute an exact time; images come back in the ambient ring."""
        ambient = self.variety.ambient
        images = {v: Polynomial.variable(ambient, v) for v in ambient.vars}
        images[self.time_var] = Polynomial.constant(ambient, value)
        return tuple(img.substitute(images) for img in self.images)

    def eval(self, time, point: Sequence):
        if len(point) != self.variety.ambient.arity:
            raise ArityMismatch("point arity differs from ambient arity")
        return tuple(img.evaluate(tuple(point) + (time,)) for img in self.images)

    def jacobian_at(self, time, point: Sequence):
        """Space Jacobian of the time-`time` map, evaluated at `point`."""
        full = tuple(point) + (time,)
        return [
            [img.partial(v).evaluate(full) for v in self.variety.ambient.vars]
            for img in self.images
        ]


class HybridFlow:
    """Flow of a genuine overshear: the base LND flow in formal time s,
    entered at s = f(x) * t * phi1(a(x) * t)."""

    __slots__ = ("poly_flow_in_s", "f", "a")

    def __init__(self, poly_flow_in_s: PolynomialFlow, f: RingElement, a: RingElement):
        object.__setattr__(self, "poly_flow_in_s", poly_flow_in_s)
        object.__setattr__(self, "f", f)
        object.__setattr__(self, "a", a)

    def __setattr__(self, name, value):
        raise AttributeError("HybridFlow is immutable")

    @property
    def variety(self) -> AffineVariety:
        return self.poly_flow_in_s.variety

    def __repr__(self):
        return f"HybridFlow(s = ({self.f})*t*phi1(({self.a})*t); base {self.poly_flow_in_s!r})"

    def eval(self, time, point: Sequence):
        if len(point) != self.variety.ambient.arity:
            raise ArityMismatch("point arity differs from ambient arity")
        t = complex(time)
        fval = complex(self.f.evaluate(point))
        aval = complex(self.a.evaluate(point))
        s = fval * t * phi1(aval * t)
        return self.poly_flow_in_s.eval(s, point)


FlowMap = Union[PolynomialFlow, HybridFlow]


def _expm1_complex(w: complex) -> complex:
    # e^w - 1 without cancellation: split into real/imaginary parts
    x, y = w.real, w.imag
    real = math.expm1(x) * math.cos(y) - 2.0 * math.sin(y / 2.0) ** 2
    imag = math.exp(x) * math.sin(y)
    return complex(real, imag)


def phi1(w: complex) -> complex:
    """(e^w - 1)/w with phi1(0) = 1, numerically stable near 0."""
    w = complex(w)
    if abs(w) < 1e-8:
        return 1.0 + w / 2.0 + w * w / 6.0 + w * w * w / 24.0
    return _expm1_complex(w) / w


def flow_lnd(cert: LNDCertificate, time_var: str = "t") -> PolynomialFlow:
    """Exact polynomial flow of a certified LND."""
    cert = require_certificate(cert)
    if time_var not in RESERVED_TIME_SYMBOLS:
        raise LndLabError(f"flow time must be one of {RESERVED_TIME_SYMBOLS}")
    variety = cert.variety
    d = cert.derivation
    flow_ring = variety.ambient.extend(time_var)
    t = Polynomial.variable(flow_ring, time_var)
    images: List[Polynomial] = []
    for var, n in zip(variety.coordinates(), cert.indices):
        acc = Polynomial.zero(flow_ring)
        g = var
        factorial = 1
        for k in range(n):
            if k:
                factorial *= k
            acc = acc + g.rep.in_ring(flow_ring) * (t ** k) * Fraction(1, factorial)
            g = d.apply(g)
        images.append(acc)
    flow = PolynomialFlow(variety, time_var, tuple(images))
    _assert_flow_preserves_ideal(flow)
    return flow


def _assert_flow_preserves_ideal(flow: PolynomialFlow):
    variety = flow.variety
    if not variety.defining:
        return
    # the defining ideal extended to the flow ring (the ring carries the
    # reserved time variable, so work with a bare basis, not a variety)
    extended_gb = groebner(
        [q.in_ring(flow.ring) for q in variety.defining], grevlex(flow.ring)
    )
    images = {v: img for v, img in zip(variety.ambient.vars, flow.images)}
    images[flow.time_var] = Polynomial.variable(flow.ring, flow.time_var)
    for q in variety.defining:
        composed = q.in_ring(flow.ring).substitute(images)
        if not extended_gb.contains(composed - q.in_ring(flow.ring)):
            raise InternalInvariantError(
                f"flow does not preserve the ideal: {q} moves off the variety"
            )


def flow_overshear(overshear: OvershearField) -> FlowMap:
    """Hybrid flow of an overshear; shears degrade to the polynomial flow."""
    if overshear.is_shear():
        return flow_lnd(make_shear(overshear.base, overshear.f), time_var="t")
    base_flow = flow_lnd(overshear.base, time_var="s")
    return HybridFlow(base_flow, overshear.f, overshear.a)


def eval_flow(flow: FlowMap, time, point: Sequence):
    """Numeric image of a point under the time-`time` flow map."""
    return flow.eval(time, point)


# -- serialization ---------------------------------------------------------


def variety_to_json(variety: AffineVariety) -> dict:
    return {
        "vars": list(variety.ambient.vars),
        "defining": [str(q) for q in variety.defining],
    }


def variety_from_json(obj: dict) -> AffineVariety:
    ring = Ring(tuple(obj["vars"]))
    defining = [parse_poly(src, ring) for src in obj.get("defining", [])]
    return AffineVariety(ring, defining)


def derivation_to_json(d: Derivation, variety_name: Optional[str] = None) -> dict:
    variety = variety_name or d.variety.name or variety_to_json(d.variety)
    return {
        "variety": variety,
        "images": {v: str(img) for v, img in zip(d.variety.ambient.vars, d.images)},
    }


def derivation_from_json(obj: dict, resolve_variety=None) -> Derivation:
    spec = obj["variety"]
    if isinstance(spec, str):
        if resolve_variety is None:
            raise LndLabError(f"cannot resolve variety name {spec!r}")
        variety = resolve_variety(spec)
    else:
        variety = variety_from_json(spec)
    images = [
        parse_poly(obj["images"][v], variety.ambient) for v in variety.ambient.vars
    ]
    return make_derivation(variety, images)
