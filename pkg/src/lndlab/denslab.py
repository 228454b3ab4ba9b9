"""Bounded-degree linear algebra on coordinate rings.

Everything here reduces a geometric question to an exact linear system
over Q(i) in monomial coefficients: kernels of derivation powers,
tangent spaces and flexibility at a point, Lie-saturation certificates
for density of overshear fields up to a degree bound, compatible-pair
checks, and the invertible-function obstruction.

All certificates are honest about their scope: a `certified`/`spans`/
`is_compatible_at_bound` value of True is exact at the stated bound,
while False only means "not verified at these bounds", never a
disproof.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple, Union

from . import linalg
from .errors import (
    InternalInvariantError,
    LndLabError,
    PointNotOnVariety,
)
from .fields import (
    AffineVariety,
    Derivation,
    LNDCertificate,
    OvershearField,
    lie_bracket,
    make_derivation,
    make_overshear,
    require_certificate,
)
from .idealquot import RingElement
from .polyalg import (
    GaussianRational,
    Polynomial,
    coeff_to_str,
    grevlex_key,
)

ExactPoint = Tuple[GaussianRational, ...]


def _exact_point(variety: AffineVariety, point: Sequence) -> ExactPoint:
    coerced = []
    for comp in point:
        if isinstance(comp, (int, Fraction)):
            comp = GaussianRational(comp)
        if not isinstance(comp, GaussianRational):
            raise LndLabError("points must have exact components (int/Fraction/Q(i))")
        coerced.append(comp)
    if len(coerced) != variety.ambient.arity:
        raise PointNotOnVariety(
            f"point arity {len(coerced)} differs from ambient arity {variety.ambient.arity}"
        )
    for q in variety.defining:
        if q.evaluate(tuple(coerced)):
            raise PointNotOnVariety(f"point fails {q} = 0")
    return tuple(coerced)


def _coordinate_rows(polys: Sequence[Polynomial]) -> Tuple[List[Tuple[int, ...]], List[List[GaussianRational]]]:
    """Common monomial coordinates for a family of polynomials."""
    monos = sorted({e for p in polys for e in p.terms}, key=grevlex_key)
    rows = [[p.coefficient(e) for e in monos] for p in polys]
    return monos, rows


def kernel_basis(
    d: Union[Derivation, LNDCertificate], power: int, deg_bound: int
) -> List[RingElement]:
    """Exact basis of {f : D^power(f) = 0 in C[X], deg(normal form) <= deg_bound}.

    Solved as a linear system in the coefficients of the quotient-basis
    monomials; the returned elements come back in ascending monomial
    order with unit leading entries.
    """
    if isinstance(d, LNDCertificate):
        d = d.derivation
    if power not in (1, 2):
        raise LndLabError("kernel power must be 1 or 2")
    if deg_bound < 0:
        raise LndLabError("deg_bound must be nonnegative")
    variety = d.variety
    monos = variety.standard_monomials(deg_bound)
    images = []
    for exps in monos:
        g = variety.element(Polynomial.monomial(variety.ambient, exps))
        for _ in range(power):
            g = d.apply(g)
        images.append(g.rep)
    appearing = sorted({e for img in images for e in img.terms}, key=grevlex_key)
    rows = [[img.coefficient(e) for img in images] for e in appearing]
    combos = linalg.kernel(rows, len(monos))
    out = []
    for vec in combos:
        poly = Polynomial(
            variety.ambient, {m: c for m, c in zip(monos, vec) if c}
        )
        out.append(variety.element(poly))
    return out


def tangent_basis(variety: AffineVariety, point: Sequence) -> List[List[GaussianRational]]:
    """Exact kernel of the Jacobian of the defining polynomials at the point."""
    point = _exact_point(variety, point)
    rows = [
        [q.partial(v).evaluate(point) for v in variety.ambient.vars]
        for q in variety.defining
    ]
    return linalg.kernel(rows, variety.ambient.arity)


@dataclass(frozen=True)
class FlexReport:
    """Do the given certified fields span the tangent space at the point?"""

    point: ExactPoint
    lnd_values: Tuple[Tuple[GaussianRational, ...], ...]
    tangent_dim: int
    rank: int
    spans: bool

    def to_json_dict(self) -> dict:
        return {
            "point": [coeff_to_str(c) for c in self.point],
            "lnd_values": [[coeff_to_str(c) for c in row] for row in self.lnd_values],
            "tangent_dim": self.tangent_dim,
            "rank": self.rank,
            "spans": self.spans,
        }


def flexible_at(
    variety: AffineVariety,
    lnds: Sequence[LNDCertificate],
    point: Sequence,
) -> FlexReport:
    certs = [require_certificate(c) for c in lnds]
    for cert in certs:
        if cert.variety != variety:
            raise LndLabError("certified field lives on a different variety")
    exact = _exact_point(variety, point)
    tangent = tangent_basis(variety, exact)
    values = tuple(tuple(cert.derivation.values_at(exact)) for cert in certs)
    r = linalg.rank(list(values))
    # tangency puts every value vector inside the tangent space
    if values and linalg.rank([list(v) for v in tangent] + [list(v) for v in values]) != len(tangent):
        raise InternalInvariantError("field value escaped the tangent space")
    return FlexReport(exact, values, len(tangent), r, r == len(tangent))


# -- Lie saturation ---------------------------------------------------------

# A Lie word is ("gen", index) or ("bracket", word, word).
LieWord = tuple


def word_length(word: LieWord) -> int:
    if word[0] == "gen":
        return 1
    return word_length(word[1]) + word_length(word[2])


def word_to_json(word: LieWord):
    if word[0] == "gen":
        return ["gen", word[1]]
    return ["bracket", word_to_json(word[1]), word_to_json(word[2])]


def word_from_json(obj) -> LieWord:
    if obj[0] == "gen":
        return ("gen", int(obj[1]))
    return ("bracket", word_from_json(obj[1]), word_from_json(obj[2]))


def evaluate_word(word: LieWord, generators: Sequence[Derivation]) -> Derivation:
    if word[0] == "gen":
        return generators[word[1]]
    return lie_bracket(
        evaluate_word(word[1], generators), evaluate_word(word[2], generators)
    )


@dataclass(frozen=True)
class SaturationWitness:
    """One target basis field with the combination of Lie words producing it."""

    target_images: Tuple[RingElement, ...]
    combination: Tuple[Tuple[GaussianRational, LieWord], ...]

    def to_json_dict(self, variety: AffineVariety) -> dict:
        return {
            "target": {
                v: str(img)
                for v, img in zip(variety.ambient.vars, self.target_images)
            },
            "combination": [
                {"coeff": coeff_to_str(c), "word": word_to_json(w)}
                for c, w in self.combination
            ],
        }


@dataclass(frozen=True)
class SaturationReport:
    """Bounded-degree density certificate for a set of overshear fields."""

    variety: AffineVariety
    generators: Tuple[OvershearField, ...]
    target_deg: int
    work_deg: int
    max_len: int
    span_dim: int
    target_dim: int
    certified: bool
    witnesses: Tuple[SaturationWitness, ...]
    collected_words: Tuple[LieWord, ...]

    def to_json_dict(self) -> dict:
        from .fields import variety_to_json

        return {
            "variety": variety_to_json(self.variety),
            "generators": [
                {"f": str(g.f), "base_images": {
                    v: str(img)
                    for v, img in zip(self.variety.ambient.vars, g.base.derivation.images)
                }}
                for g in self.generators
            ],
            "target_deg": self.target_deg,
            "work_deg": self.work_deg,
            "max_len": self.max_len,
            "span_dim": self.span_dim,
            "target_dim": self.target_dim,
            "certified": self.certified,
            "witnesses": [w.to_json_dict(self.variety) for w in self.witnesses],
        }

    def replay_witnesses(self) -> bool:
        """Re-evaluate every witness word; True iff all reproduce their targets."""
        gen_fields = [g.field() for g in self.generators]
        for witness in self.witnesses:
            total = None
            for coeff, word in witness.combination:
                part = evaluate_word(word, gen_fields).scale(coeff)
                total = part if total is None else total + part
            if total is None:
                total = Derivation(
                    self.variety,
                    tuple(self.variety.zero() for _ in self.variety.ambient.vars),
                )
            if tuple(total.images) != tuple(witness.target_images):
                return False
        return True


def tangent_field_basis(variety: AffineVariety, deg: int) -> List[Derivation]:
    """Basis of all tangent derivations with image degree <= deg,
    solved from the tangency linear system."""
    monos = variety.standard_monomials(deg)
    nvars = variety.ambient.arity
    unknowns = [(j, m) for j in range(nvars) for m in monos]
    if not variety.defining:
        basis_vectors = None  # free module: unit vectors
    else:
        contributions: List[List[Polynomial]] = []
        for q in variety.defining:
            partials = [q.partial(v) for v in variety.ambient.vars]
            row = []
            for j, m in unknowns:
                prod = partials[j] * Polynomial.monomial(variety.ambient, m)
                row.append(variety.normal_form(prod))
            contributions.append(row)
        rows: List[List[GaussianRational]] = []
        for row in contributions:
            appearing = sorted({e for p in row for e in p.terms}, key=grevlex_key)
            for e in appearing:
                rows.append([p.coefficient(e) for p in row])
        basis_vectors = linalg.kernel(rows, len(unknowns))
    fields = []
    if basis_vectors is None:
        for j, m in unknowns:
            images = [Polynomial.zero(variety.ambient) for _ in range(nvars)]
            images[j] = Polynomial.monomial(variety.ambient, m)
            fields.append(make_derivation(variety, images))
    else:
        for vec in basis_vectors:
            images = [Polynomial.zero(variety.ambient) for _ in range(nvars)]
            for (j, m), c in zip(unknowns, vec):
                if c:
                    images[j] = images[j] + Polynomial.monomial(variety.ambient, m, c)
            fields.append(make_derivation(variety, images))
    return fields


def _field_vector(
    images: Sequence[RingElement], monos: Sequence[Tuple[int, ...]]
) -> List[GaussianRational]:
    vec = []
    for img in images:
        vec.extend(img.rep.coefficient(m) for m in monos)
    return vec


def lie_saturate(
    gens: Sequence[OvershearField],
    target_deg: int,
    work_deg: Optional[int] = None,
    max_len: int = 2,
    variety: Optional[AffineVariety] = None,
) -> SaturationReport:
    """Close the generators under brackets (word length <= max_len,
    discarding results of image degree > work_deg), then compare the
    exact span of the fields of image degree <= target_deg against all
    tangent derivations of that degree.

    Discarding high-degree brackets only shrinks the span, so
    certified=True is sound; False is inconclusive at these bounds.
    """
    if work_deg is None:
        work_deg = target_deg
    if work_deg < target_deg:
        raise LndLabError("work_deg must be at least target_deg")
    if max_len < 1:
        raise LndLabError("max_len must be positive")
    gens = tuple(gens)
    if gens:
        variety = gens[0].variety
        for g in gens:
            if g.variety != variety:
                raise LndLabError("generators live on different varieties")
    elif variety is None:
        raise LndLabError("an empty generator list needs an explicit variety")

    collected: List[Tuple[LieWord, Derivation]] = []
    seen: set = set()
    for i, g in enumerate(gens):
        fld = g.field()
        if fld.is_zero():
            continue
        key = fld.images
        if key not in seen:
            seen.add(key)
            collected.append((("gen", i), fld))

    by_length: Dict[int, List[int]] = {}
    for idx, (word, _) in enumerate(collected):
        by_length.setdefault(1, []).append(idx)
    for length in range(2, max_len + 1):
        fresh: List[Tuple[LieWord, Derivation]] = []
        for l1 in range(1, length):
            l2 = length - l1
            if l1 > l2:
                continue
            for ia in by_length.get(l1, []):
                for ib in by_length.get(l2, []):
                    if l1 == l2 and ib <= ia:
                        continue
                    word_a, fld_a = collected[ia]
                    word_b, fld_b = collected[ib]
                    bracket = lie_bracket(fld_a, fld_b)
                    if bracket.is_zero():
                        continue
                    if bracket.image_degree() > work_deg:
                        continue
                    key = bracket.images
                    if key in seen:
                        continue
                    seen.add(key)
                    fresh.append((("bracket", word_a, word_b), bracket))
        start = len(collected)
        collected.extend(fresh)
        by_length[length] = list(range(start, len(collected)))

    monos = variety.standard_monomials(target_deg)
    span_entries = [
        (word, fld)
        for word, fld in collected
        if fld.image_degree() <= target_deg
    ]
    span_vectors = [_field_vector(fld.images, monos) for _, fld in span_entries]
    span_dim = linalg.rank(span_vectors)

    target_fields = tangent_field_basis(variety, target_deg)
    target_dim = len(target_fields)
    certified = span_dim == target_dim

    witnesses: List[SaturationWitness] = []
    if certified:
        # express each target basis field in the collected fields
        columns = span_vectors
        ncols = len(columns)
        nrows = len(monos) * variety.ambient.arity
        matrix = [[columns[j][i] for j in range(ncols)] for i in range(nrows)]
        for target in target_fields:
            rhs = _field_vector(target.images, monos)
            solution = linalg.solve(matrix, rhs)
            if solution is None:
                raise InternalInvariantError("span certificate failed to solve a witness")
            combo = tuple(
                (c, span_entries[j][0]) for j, c in enumerate(solution) if c
            )
            witnesses.append(SaturationWitness(tuple(target.images), combo))

    report = SaturationReport(
        variety=variety,
        generators=gens,
        target_deg=target_deg,
        work_deg=work_deg,
        max_len=max_len,
        span_dim=span_dim,
        target_dim=target_dim,
        certified=certified,
        witnesses=tuple(witnesses),
        collected_words=tuple(word for word, _ in collected),
    )
    if certified and not report.replay_witnesses():
        raise InternalInvariantError("saturation witness failed to replay")
    return report


def overshear_generators(cert: LNDCertificate, multiplier_deg: int) -> List[OvershearField]:
    """All overshears of a certified LND with multipliers from the
    degree-bounded kernel of D^2 (one per kernel basis element)."""
    cert = require_certificate(cert)
    return [make_overshear(cert, f) for f in kernel_basis(cert, 2, multiplier_deg)]


# -- compatible pairs -------------------------------------------------------


@dataclass(frozen=True)
class PairReport:
    """Compatible-pair evidence at a degree bound."""

    h: Optional[RingElement]
    h_nondegenerate: bool
    ideal_gens: Tuple[RingElement, ...]
    containment_verified_to: int
    ideal_contained: bool
    is_compatible_at_bound: bool

    def to_json_dict(self) -> dict:
        return {
            "h": None if self.h is None else str(self.h),
            "h_nondegenerate": self.h_nondegenerate,
            "ideal_gens": [str(g) for g in self.ideal_gens],
            "containment_verified_to": self.containment_verified_to,
            "ideal_contained": self.ideal_contained,
            "is_compatible_at_bound": self.is_compatible_at_bound,
        }


def check_compatible_pair(
    theta: LNDCertificate,
    xi: LNDCertificate,
    ideal_gens: Sequence[Union[RingElement, Polynomial, str]],
    deg_bound: int,
) -> PairReport:
    """Search ker(theta^2) /\\ ker(xi) for h with theta(h) != 0, and verify
    that span{ker theta * ker xi} absorbs every (monomial of degree <=
    bound) * (candidate ideal generator).  False means "not verified at
    this bound", never a disproof.
    """
    theta = require_certificate(theta)
    xi = require_certificate(xi)
    variety = theta.variety
    if xi.variety != variety:
        raise LndLabError("the two fields live on different varieties")
    gens: List[RingElement] = []
    for g in ideal_gens:
        elem = g if isinstance(g, RingElement) else variety.element(g)
        if elem.is_zero():
            raise LndLabError(f"candidate ideal generator {g} is zero in the quotient")
        gens.append(elem)
    if not gens:
        raise LndLabError("at least one candidate ideal generator is required")

    # (1) h in ker theta^2 with xi(h) = 0 and theta(h) != 0
    k2 = kernel_basis(theta, 2, deg_bound)
    xi_images = [xi.derivation.apply(k).rep for k in k2]
    appearing = sorted({e for img in xi_images for e in img.terms}, key=grevlex_key)
    rows = [[img.coefficient(e) for img in xi_images] for e in appearing]
    combos = linalg.kernel(rows, len(k2))
    candidates = []
    for vec in combos:
        total = variety.zero()
        for c, k in zip(vec, k2):
            if c:
                total = total + k * c
        if not total.is_zero():
            candidates.append(total)
    candidates.sort(key=lambda e: (e.total_degree(), grevlex_key(max(e.rep.terms, key=grevlex_key))))
    h: Optional[RingElement] = None
    for cand in candidates:
        if not theta.derivation.apply(cand).is_zero():
            h = cand
            break

    # (2) products of the two kernels absorb monomial multiples of the gens
    ker_theta = kernel_basis(theta, 1, deg_bound)
    ker_xi = kernel_basis(xi, 1, deg_bound)
    products = []
    seen = set()
    for a in ker_theta:
        for b in ker_xi:
            prod = (a * b).rep
            if prod.is_zero():
                continue
            if prod in seen:
                continue
            seen.add(prod)
            products.append(prod)
    targets = []
    for exps in variety.standard_monomials(deg_bound):
        mono = Polynomial.monomial(variety.ambient, exps)
        for g in gens:
            t = variety.normal_form(mono * g.rep)
            if not t.is_zero():
                targets.append(t)
    monos, all_rows = _coordinate_rows(products + targets)
    product_rows, target_rows = all_rows[: len(products)], all_rows[len(products) :]
    span = linalg.Span(product_rows)
    contained = all(span.contains(t) for t in target_rows)

    return PairReport(
        h=h,
        h_nondegenerate=h is not None,
        ideal_gens=tuple(gens),
        containment_verified_to=deg_bound,
        ideal_contained=contained,
        is_compatible_at_bound=(h is not None) and contained,
    )


# -- unit obstruction -------------------------------------------------------


def verify_unit_witness(
    variety: AffineVariety,
    f: Union[RingElement, Polynomial, str],
    g: Union[RingElement, Polynomial, str],
) -> bool:
    """True iff f*g = 1 in C[X] and f is nonconstant as a normal form.

    A passing pair certifies a nontrivial invertible function, the
    obstruction to overshear density on homogeneous spaces.
    """
    f = f if isinstance(f, RingElement) else variety.element(f)
    g = g if isinstance(g, RingElement) else variety.element(g)
    if (f * g - 1).is_zero():
        return not f.is_constant()
    return False


def lnd_annihilates_units(
    cert: LNDCertificate,
    f: Union[RingElement, Polynomial, str],
    g: Union[RingElement, Polynomial, str],
) -> bool:
    """True iff the certified field kills the unit f (flow curves must
    then stay inside the unit's level sets).

    Requires the unit equation f*g = 1 in C[X]; constant units are
    allowed here and are annihilated vacuously.  Nonconstancy only
    matters for `verify_unit_witness`, which certifies the obstruction.
    """
    cert = require_certificate(cert)
    variety = cert.variety
    f = f if isinstance(f, RingElement) else variety.element(f)
    g = g if isinstance(g, RingElement) else variety.element(g)
    if not (f * g - 1).is_zero():
        raise LndLabError("f has no verified unit partner on this variety")
    return cert.derivation.apply(f).is_zero()
