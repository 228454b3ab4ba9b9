"""Polynomial maps, plane automorphism decomposition, and numeric shadows.

A PolyMap is a tuple of image polynomials.  `compose_maps` composes a
list left to right in application order: compose_maps([e, s]) applies e
first, so it equals s o e.  A FactorList is written in composition
notation instead (leftmost factor outermost); `FactorList.compose`
reconciles the two conventions.

`jvdk_decompose` peels a two-variable map into elementary and affine
factors by degree reduction: while some component has degree > 1, the
leading form of the higher-degree component must be a scalar multiple of
a power of the other's leading form, and subtracting that power is an
elementary move.  Failure to reduce is reported as Inconclusive, never
as a disproof of invertibility.  Recomposition is checked exactly before
returning.
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple, Union

from .errors import (
    ArityMismatch,
    InternalInvariantError,
    LndLabError,
    UncertifiedDerivation,
)
from .fields import Derivation, LNDCertificate, flow_lnd, lie_bracket, require_certificate
from .polyalg import GaussianRational, Polynomial, QI_ONE, QI_ZERO, Ring


class PolyMap:
    """A polynomial self-map of affine space, one image per variable."""

    __slots__ = ("ring", "images")

    def __init__(self, ring: Ring, images: Sequence[Polynomial]):
        images = tuple(images)
        if len(images) != ring.arity:
            raise ArityMismatch(
                f"{len(images)} images for a ring of arity {ring.arity}"
            )
        for img in images:
            if img.ring != ring:
                raise LndLabError("image lives in a different ring")
        object.__setattr__(self, "ring", ring)
        object.__setattr__(self, "images", images)

    def __setattr__(self, name, value):
        raise AttributeError("PolyMap is immutable")

    @classmethod
    def identity(cls, ring: Ring) -> "PolyMap":
        return cls(ring, tuple(Polynomial.variable(ring, v) for v in ring.vars))

    def is_identity(self) -> bool:
        return self == PolyMap.identity(self.ring)

    def after(self, inner: "PolyMap") -> "PolyMap":
        """self o inner (apply inner first)."""
        if inner.ring != self.ring:
            raise LndLabError("maps live in different rings")
        substitution = dict(zip(self.ring.vars, inner.images))
        return PolyMap(self.ring, tuple(img.substitute(substitution) for img in self.images))

    def eval_point(self, point: Sequence):
        return tuple(img.evaluate(point) for img in self.images)

    def __eq__(self, other):
        if not isinstance(other, PolyMap):
            return NotImplemented
        return self.ring == other.ring and self.images == other.images

    def __hash__(self):
        return hash(self.images)

    def __repr__(self):
        body = "; ".join(str(img) for img in self.images)
        return f"PolyMap({body})"


def compose_maps(maps: Sequence[PolyMap]) -> PolyMap:
    """Compose left to right in application order: [m1, m2] -> m2 o m1."""
    maps = list(maps)
    if not maps:
        raise LndLabError("compose_maps needs at least one map")
    acc = maps[0]
    for m in maps[1:]:
        acc = m.after(acc)
    return acc


@dataclass(frozen=True)
class AffineFactor:
    """x -> M x + b with det M != 0."""

    matrix: Tuple[Tuple[GaussianRational, ...], ...]
    translation: Tuple[GaussianRational, ...]

    def determinant(self) -> GaussianRational:
        ((a, b), (c, d)) = self.matrix
        return a * d - b * c

    def as_map(self, ring: Ring) -> PolyMap:
        xs = [Polynomial.variable(ring, v) for v in ring.vars]
        images = []
        for row, t in zip(self.matrix, self.translation):
            img = Polynomial.constant(ring, t)
            for coeff, x in zip(row, xs):
                img = img + x * coeff
            images.append(img)
        return PolyMap(ring, tuple(images))

    def to_json_dict(self) -> dict:
        from .polyalg import coeff_to_str

        return {
            "kind": "affine",
            "matrix": [[coeff_to_str(c) for c in row] for row in self.matrix],
            "translation": [coeff_to_str(c) for c in self.translation],
        }


@dataclass(frozen=True)
class ElementaryFactor:
    """Adds a polynomial in the other variable to one coordinate.

    axis is 1-based: axis 2 with poly p means (x, y) -> (x, y + p(x)).
    """

    axis: int
    poly: Polynomial

    def as_map(self, ring: Ring) -> PolyMap:
        xs = [Polynomial.variable(ring, v) for v in ring.vars]
        images = list(xs)
        images[self.axis - 1] = xs[self.axis - 1] + self.poly
        return PolyMap(ring, tuple(images))

    def to_json_dict(self) -> dict:
        return {"kind": "elementary", "axis": self.axis, "add": str(self.poly)}


Factor = Union[AffineFactor, ElementaryFactor]


@dataclass(frozen=True)
class FactorList:
    """Factors in composition notation: factors[0] is applied last."""

    ring: Ring
    factors: Tuple[Factor, ...]

    def compose(self) -> PolyMap:
        if not self.factors:
            return PolyMap.identity(self.ring)
        application_order = [f.as_map(self.ring) for f in reversed(self.factors)]
        return compose_maps(application_order)

    def to_json_list(self) -> list:
        return [f.to_json_dict() for f in self.factors]


@dataclass(frozen=True)
class DecompositionInconclusive:
    """Degree reduction got stuck; the map may not be a tame automorphism."""

    steps: int
    reason: str


def _leading_coeff(poly: Polynomial) -> GaussianRational:
    lead = max(poly.terms, key=lambda e: (sum(e), e))
    return poly.terms[lead]


def _proportionality(target: Polynomial, base_power: Polynomial) -> Optional[GaussianRational]:
    """Scalar c with target == c * base_power, if one exists."""
    if target.is_zero() or base_power.is_zero():
        return None
    probe = next(iter(base_power.terms))
    c = target.coefficient(probe) / base_power.terms[probe]
    if not c:
        return None
    if target == base_power * c:
        return c
    return None


def jvdk_decompose(
    f: PolyMap, max_steps: int = 64
) -> Union[FactorList, DecompositionInconclusive]:
    """Decompose a two-variable polynomial map into elementary and affine
    factors; invertibility is discovered, not assumed."""
    ring = f.ring
    if ring.arity != 2:
        raise LndLabError("decomposition works on two-variable maps")
    factors: List[Factor] = []
    current = f
    steps = 0
    while True:
        d1 = current.images[0].total_degree() if not current.images[0].is_zero() else 0
        d2 = current.images[1].total_degree() if not current.images[1].is_zero() else 0
        if current.images[0].is_zero() or current.images[1].is_zero():
            return DecompositionInconclusive(steps, "a component is zero")
        if max(d1, d2) <= 1:
            break
        if steps >= max_steps:
            return DecompositionInconclusive(steps, "step bound exhausted")
        steps += 1
        high, low = (2, 1) if d2 >= d1 else (1, 2)
        f_low = current.images[low - 1]
        f_high = current.images[high - 1]
        deg_low = f_low.total_degree()
        deg_high = f_high.total_degree()
        if deg_low == 0:
            return DecompositionInconclusive(steps, "constant component")
        if deg_high % deg_low != 0:
            return DecompositionInconclusive(steps, "degrees do not divide")
        k = deg_high // deg_low
        c = _proportionality(f_high.leading_form(), f_low.leading_form() ** k)
        if c is None:
            return DecompositionInconclusive(steps, "leading forms not proportional")
        # post-compose with E = (x, y - c*x^k) (axis roles per `high`):
        # the high component drops degree, everything else is unchanged
        new_high = f_high - f_low ** k * c
        if not new_high.is_zero() and new_high.total_degree() >= deg_high:
            return DecompositionInconclusive(steps, "no degree reduction")
        images = list(current.images)
        images[high - 1] = new_high
        current = PolyMap(ring, tuple(images))
        add_poly = Polynomial.variable(ring, ring.vars[low - 1]) ** k * c
        factors.append(ElementaryFactor(high, add_poly))

    tail = _affine_from_map(current)
    if tail is None:
        return DecompositionInconclusive(steps, "final linear part is singular")
    if not tail.as_map(ring).is_identity():
        factors.append(tail)

    factors = _merge_same_axis(factors)
    factors = _monic_normalize(ring, factors)
    result = FactorList(ring, tuple(factors))
    if result.compose() != f:
        raise InternalInvariantError("decomposition failed to recompose exactly")
    return result


def _affine_from_map(m: PolyMap) -> Optional[AffineFactor]:
    matrix = []
    translation = []
    for img in m.images:
        if img.total_degree() > 1:
            return None
        row = []
        for i in range(m.ring.arity):
            exps = [0] * m.ring.arity
            exps[i] = 1
            row.append(img.coefficient(tuple(exps)))
        matrix.append(tuple(row))
        translation.append(img.coefficient((0,) * m.ring.arity))
    factor = AffineFactor(tuple(matrix), tuple(translation))
    if not factor.determinant():
        return None
    return factor


def _merge_same_axis(factors: List[Factor]) -> List[Factor]:
    merged: List[Factor] = []
    for f in factors:
        if (
            merged
            and isinstance(f, ElementaryFactor)
            and isinstance(merged[-1], ElementaryFactor)
            and merged[-1].axis == f.axis
        ):
            merged[-1] = ElementaryFactor(f.axis, merged[-1].poly + f.poly)
        else:
            merged.append(f)
    return [
        f
        for f in merged
        if not (isinstance(f, ElementaryFactor) and f.poly.is_zero())
    ]


def _monic_normalize(ring: Ring, factors: List[Factor]) -> List[Factor]:
    """Rewrite non-monic elementary factors as affine * monic * affine,
    then fuse adjacent affine factors."""
    expanded: List[Factor] = []
    for f in factors:
        if isinstance(f, ElementaryFactor):
            c = _leading_coeff(f.poly)
            if c != QI_ONE:
                scale = _diagonal_affine(ring, f.axis, c)
                unscale = _diagonal_affine(ring, f.axis, QI_ONE / c)
                expanded.extend([scale, ElementaryFactor(f.axis, f.poly / c), unscale])
                continue
        expanded.append(f)
    fused: List[Factor] = []
    for f in expanded:
        if fused and isinstance(f, AffineFactor) and isinstance(fused[-1], AffineFactor):
            fused[-1] = _compose_affine(fused[-1], f)
        else:
            fused.append(f)
    return [
        f
        for f in fused
        if not (isinstance(f, AffineFactor) and f.as_map(ring).is_identity())
    ]


def _diagonal_affine(ring: Ring, axis: int, scale: GaussianRational) -> AffineFactor:
    diag = [[QI_ONE, QI_ZERO], [QI_ZERO, QI_ONE]]
    diag[axis - 1][axis - 1] = scale
    return AffineFactor(tuple(tuple(row) for row in diag), (QI_ZERO, QI_ZERO))


def _compose_affine(outer: AffineFactor, inner: AffineFactor) -> AffineFactor:
    # composition-notation adjacency: outer o inner (inner applied first)
    m1, m2 = outer.matrix, inner.matrix
    matrix = tuple(
        tuple(
            m1[i][0] * m2[0][j] + m1[i][1] * m2[1][j] for j in range(2)
        )
        for i in range(2)
    )
    translation = tuple(
        m1[i][0] * inner.translation[0]
        + m1[i][1] * inner.translation[1]
        + outer.translation[i]
        for i in range(2)
    )
    return AffineFactor(matrix, translation)


# -- numeric comparison grids ------------------------------------------------


@dataclass(frozen=True)
class Grid:
    """A real sampling grid: center, half-width, samples per axis."""

    center: Tuple[float, ...]
    radius: float = 1.0
    samples: int = 5

    def points(self):
        axes = []
        for c in self.center:
            if self.samples == 1:
                axes.append([c])
            else:
                step = 2.0 * self.radius / (self.samples - 1)
                axes.append([c - self.radius + step * i for i in range(self.samples)])
        idx = [0] * len(axes)
        while True:
            yield tuple(axes[d][idx[d]] for d in range(len(axes)))
            d = len(axes) - 1
            while d >= 0:
                idx[d] += 1
                if idx[d] < self.samples:
                    break
                idx[d] = 0
                d -= 1
            if d < 0:
                return


def default_grid(arity: int) -> Grid:
    return Grid(center=(0.0,) * arity, radius=1.0, samples=5)


@dataclass(frozen=True)
class FixedTimeFlow:
    """Adapter: a flow map frozen at one time, usable on a grid."""

    flow: object  # PolynomialFlow | HybridFlow
    time: complex

    def eval_point(self, point: Sequence):
        return self.flow.eval(self.time, point)


def worker_count() -> int:
    raw = os.environ.get("LND_LAB_THREADS", "1")
    try:
        return max(1, int(raw))
    except ValueError:
        return 1


def compare_on_grid(f, g, grid: Optional[Grid] = None) -> float:
    """Max over grid points of the max-norm difference of images.

    f and g are anything with eval_point (PolyMap, FixedTimeFlow).
    """
    if grid is None:
        if isinstance(f, PolyMap):
            arity = f.ring.arity
        elif isinstance(g, PolyMap):
            arity = g.ring.arity
        elif isinstance(f, FixedTimeFlow):
            arity = f.flow.variety.ambient.arity
        else:
            raise LndLabError("a grid is required for this comparison")
        grid = default_grid(arity)
    points = list(grid.points())

    def deviation(point):
        fv = f.eval_point(point)
        gv = g.eval_point(point)
        if len(fv) != len(gv):
            raise ArityMismatch("maps have different arities")
        return max(abs(a - b) for a, b in zip(fv, gv))

    workers = worker_count()
    if workers > 1:
        from concurrent.futures import ThreadPoolExecutor

        with ThreadPoolExecutor(max_workers=workers) as pool:
            return max(pool.map(deviation, points))
    return max(deviation(p) for p in points)


# -- finite-difference bracket check ----------------------------------------


@dataclass(frozen=True)
class BracketFlowReport:
    """Pushforward difference quotient against the exact bracket."""

    fd_vector: Tuple[complex, ...]
    exact_vector: Tuple[complex, ...]
    abs_error: float

    def to_json_dict(self) -> dict:
        return {
            "fd_vector": [[v.real, v.imag] for v in self.fd_vector],
            "exact_vector": [[v.real, v.imag] for v in self.exact_vector],
            "abs_error": self.abs_error,
        }


def bracket_flow_check(
    theta: LNDCertificate,
    theta_tilde: Derivation,
    point: Sequence,
    t: float,
) -> BracketFlowReport:
    """Compare (dphi_{-t} applied to theta_tilde at phi_t(x), minus
    theta_tilde at x) / t with the exact bracket at x.

    Only theta needs a certificate: its flow is the exact one being
    differentiated; theta_tilde is an arbitrary tangent field.
    """
    theta = require_certificate(theta)
    if t == 0:
        raise LndLabError("t must be nonzero")
    if not isinstance(theta_tilde, Derivation):
        raise UncertifiedDerivation("theta_tilde must be a Derivation")
    if theta_tilde.variety != theta.variety:
        raise LndLabError("fields live on different varieties")
    flow = flow_lnd(theta)
    moved = flow.eval(t, point)
    tilde_at_moved = [complex(v) for v in theta_tilde.values_at(moved)]
    jac = flow.jacobian_at(-t, moved)
    pushed = [
        sum(complex(jac[i][j]) * tilde_at_moved[j] for j in range(len(tilde_at_moved)))
        for i in range(len(tilde_at_moved))
    ]
    tilde_here = [complex(v) for v in theta_tilde.values_at(point)]
    fd = tuple((p - h) / t for p, h in zip(pushed, tilde_here))
    exact = tuple(
        complex(v) for v in lie_bracket(theta.derivation, theta_tilde).values_at(point)
    )
    err = max(abs(a - b) for a, b in zip(fd, exact))
    return BracketFlowReport(fd, exact, err)
