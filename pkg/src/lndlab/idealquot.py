"""Monomial orders, multivariate division, and a desk-scale Buchberger engine.

Together these give computable arithmetic in coordinate rings
C[x1..xn]/I: `normal_form` produces the canonical representative of a
residue class, `in_ideal` is membership, and `RingElement` wraps a
normal form together with the quotient structure it lives in.

Bases are reduced and monic, so for a fixed ideal and order the output
of `groebner` is the unique reduced Groebner basis; in particular it
does not depend on the order in which generators are supplied.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Tuple

from .errors import InternalInvariantError, LndLabError, RingMismatch
from .polyalg import (
    GaussianRational,
    Polynomial,
    QI_ONE,
    QI_ZERO,
    Ring,
    grevlex_key,
)


@dataclass(frozen=True)
class MonomialOrder:
    """A grevlex or lex order with an explicit variable precedence.

    `precedence` lists the ring variables from most to least significant;
    it must be a permutation of the ring's variables.
    """

    kind: str
    precedence: Tuple[str, ...]

    def __post_init__(self):
        if self.kind not in ("grevlex", "lex"):
            raise LndLabError(f"unknown monomial order {self.kind!r}")
        object.__setattr__(self, "precedence", tuple(self.precedence))

    def permutation(self, ring: Ring) -> Tuple[int, ...]:
        if sorted(self.precedence) != sorted(ring.vars):
            raise LndLabError(
                f"order precedence {list(self.precedence)} does not match ring {list(ring.vars)}"
            )
        return tuple(ring.index(name) for name in self.precedence)

    def key_function(self, ring: Ring):
        """Ascending sort key on exponent vectors of this ring."""
        perm = self.permutation(ring)
        if self.kind == "grevlex":
            def key(exps, _perm=perm):
                return grevlex_key(tuple(exps[i] for i in _perm))
        else:
            def key(exps, _perm=perm):
                return tuple(exps[i] for i in _perm)
        return key


def grevlex(ring: Ring, precedence: Optional[Sequence[str]] = None) -> MonomialOrder:
    return MonomialOrder("grevlex", tuple(precedence) if precedence else ring.vars)


def lex(ring: Ring, precedence: Optional[Sequence[str]] = None) -> MonomialOrder:
    return MonomialOrder("lex", tuple(precedence) if precedence else ring.vars)


def _leading(poly: Polynomial, key) -> Tuple[Tuple[int, ...], GaussianRational]:
    exps = max(poly.terms, key=key)
    return exps, poly.terms[exps]


def _divides(a: Tuple[int, ...], b: Tuple[int, ...]) -> bool:
    return all(x <= y for x, y in zip(a, b))


def _sub_scaled_shifted(work: Dict, g: Polynomial, shift, scale: GaussianRational):
    # work -= scale * x^shift * g, in place on a raw term dict
    for exps, coeff in g.terms.items():
        key = tuple(a + b for a, b in zip(exps, shift))
        new = work.get(key, QI_ZERO) - scale * coeff
        if new:
            work[key] = new
        else:
            work.pop(key, None)


def _divide_terms(f: Polynomial, gens: Sequence[Polynomial], key) -> Polynomial:
    """Remainder of f on division by gens; no remainder term is divisible
    by any generator's leading monomial."""
    leads = [_leading(g, key) for g in gens]
    work = dict(f.terms)
    remainder: Dict[Tuple[int, ...], GaussianRational] = {}
    while work:
        m = max(work, key=key)
        c = work.pop(m)
        for g, (lead_exps, lead_coeff) in zip(gens, leads):
            if _divides(lead_exps, m):
                shift = tuple(a - b for a, b in zip(m, lead_exps))
                scale = c / lead_coeff
                work[m] = c
                _sub_scaled_shifted(work, g, shift, scale)
                break
        else:
            remainder[m] = c
    return Polynomial(f.ring, remainder)


@dataclass(frozen=True)
class GroebnerBasis:
    """A reduced, monic Groebner basis (possibly empty, for the zero ideal)."""

    ring: Ring
    order: MonomialOrder
    gens: Tuple[Polynomial, ...]

    def __post_init__(self):
        object.__setattr__(self, "gens", tuple(self.gens))

    def normal_form(self, f: Polynomial) -> Polynomial:
        if f.ring != self.ring:
            raise RingMismatch("polynomial ring differs from basis ring")
        if not self.gens or f.is_zero():
            return f
        return _divide_terms(f, self.gens, self.order.key_function(self.ring))

    def contains(self, f: Polynomial) -> bool:
        return self.normal_form(f).is_zero()

    def leading_exponents(self) -> List[Tuple[int, ...]]:
        key = self.order.key_function(self.ring)
        return [max(g.terms, key=key) for g in self.gens]


def _lcm(a: Tuple[int, ...], b: Tuple[int, ...]) -> Tuple[int, ...]:
    return tuple(max(x, y) for x, y in zip(a, b))


def _coprime(a: Tuple[int, ...], b: Tuple[int, ...]) -> bool:
    return all(x == 0 or y == 0 for x, y in zip(a, b))


def _s_poly(f: Polynomial, g: Polynomial, key) -> Polynomial:
    lf, cf = _leading(f, key)
    lg, cg = _leading(g, key)
    lcm = _lcm(lf, lg)
    mf = Polynomial.monomial(f.ring, tuple(a - b for a, b in zip(lcm, lf)), QI_ONE / cf)
    mg = Polynomial.monomial(g.ring, tuple(a - b for a, b in zip(lcm, lg)), QI_ONE / cg)
    return mf * f - mg * g


def groebner(gens: Sequence[Polynomial], order: MonomialOrder) -> GroebnerBasis:
    """Buchberger with coprime-lead and chain pruning, then auto-reduction."""
    gens = [g for g in gens if not g.is_zero()]
    if not gens:
        raise LndLabError("groebner requires at least one nonzero generator")
    ring = gens[0].ring
    for g in gens[1:]:
        if g.ring != ring:
            raise RingMismatch("generators live in different rings")
    key = order.key_function(ring)

    def monic(p: Polynomial) -> Polynomial:
        _, c = _leading(p, key)
        return p / c

    basis: List[Polynomial] = []
    for g in gens:
        r = _divide_terms(g, basis, key) if basis else g
        if not r.is_zero():
            basis.append(monic(r))

    pairs = {(i, j) for i in range(len(basis)) for j in range(i + 1, len(basis))}
    leads = [_leading(g, key)[0] for g in basis]

    def chain_prunable(i: int, j: int) -> bool:
        # Gebauer-Moeller style: some k whose lead divides lcm(i, j) and
        # whose pairs with both i and j are already gone.
        lij = _lcm(leads[i], leads[j])
        for k in range(len(basis)):
            if k in (i, j):
                continue
            if _divides(leads[k], lij):
                pik = (min(i, k), max(i, k))
                pjk = (min(j, k), max(j, k))
                if pik not in pairs and pjk not in pairs:
                    return True
        return False

    while pairs:
        i, j = min(pairs, key=lambda p: (grevlex_key(_lcm(leads[p[0]], leads[p[1]])), p))
        pairs.discard((i, j))
        if _coprime(leads[i], leads[j]):
            continue
        if chain_prunable(i, j):
            continue
        r = _divide_terms(_s_poly(basis[i], basis[j], key), basis, key)
        if r.is_zero():
            continue
        r = monic(r)
        basis.append(r)
        leads.append(_leading(r, key)[0])
        new = len(basis) - 1
        for k in range(new):
            pairs.add((k, new))

    # auto-reduce: drop generators whose lead another lead divides, then
    # reduce every tail against the rest until stable
    minimal: List[Polynomial] = []
    for i, g in enumerate(basis):
        li = leads[i]
        redundant = False
        for j in range(len(basis)):
            if j == i:
                continue
            lj = leads[j]
            if _divides(lj, li) and (lj != li or j < i):
                redundant = True
                break
        if not redundant:
            minimal.append(g)
    reduced = True
    while reduced:
        reduced = False
        for i in range(len(minimal)):
            others = minimal[:i] + minimal[i + 1 :]
            if not others:
                continue
            r = _divide_terms(minimal[i], others, key)
            if r.is_zero():
                minimal.pop(i)
                reduced = True
                break
            r = monic(r)
            if r != minimal[i]:
                minimal[i] = r
                reduced = True
                break
    minimal.sort(key=lambda g: key(_leading(g, key)[0]))
    result = GroebnerBasis(ring, order, tuple(minimal))
    # self-certification: catch any pruning subtlety loudly instead of
    # ever returning a basis that is not one
    for g in gens:
        if not result.contains(g):
            raise InternalInvariantError("groebner output does not reduce an input generator")
    for i in range(len(minimal)):
        for j in range(i + 1, len(minimal)):
            if not result.contains(_s_poly(minimal[i], minimal[j], key)):
                raise InternalInvariantError("groebner output fails the S-polynomial criterion")
    return result


def normal_form(f: Polynomial, gb: GroebnerBasis) -> Polynomial:
    return gb.normal_form(f)


def in_ideal(f: Polynomial, gb: GroebnerBasis) -> bool:
    return gb.contains(f)


class RingElement:
    """An element of a quotient ring, stored as its normal form.

    `space` is any structure exposing `normal_form(Polynomial)`,
    `ambient` (a Ring) and equality; in practice an AffineVariety.
    """

    __slots__ = ("space", "rep")

    def __init__(self, space, rep: Polynomial):
        object.__setattr__(self, "space", space)
        object.__setattr__(self, "rep", rep)

    def __setattr__(self, name, value):
        raise AttributeError("RingElement is immutable")

    def _check(self, other: "RingElement"):
        if self.space != other.space:
            raise RingMismatch("elements live on different varieties")

    def _wrap(self, poly: Polynomial) -> "RingElement":
        return RingElement(self.space, self.space.normal_form(poly))

    def __add__(self, other):
        if isinstance(other, RingElement):
            self._check(other)
            return self._wrap(self.rep + other.rep)
        return self._wrap(self.rep + other)

    __radd__ = __add__

    def __sub__(self, other):
        if isinstance(other, RingElement):
            self._check(other)
            return self._wrap(self.rep - other.rep)
        return self._wrap(self.rep - other)

    def __rsub__(self, other):
        return (-self) + other

    def __neg__(self):
        return RingElement(self.space, -self.rep)

    def __mul__(self, other):
        if isinstance(other, RingElement):
            self._check(other)
            return self._wrap(self.rep * other.rep)
        return self._wrap(self.rep * other)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        return self._wrap(self.rep ** k)

    def __eq__(self, other):
        if not isinstance(other, RingElement):
            return NotImplemented
        return self.space == other.space and self.rep == other.rep

    def __hash__(self):
        return hash(self.rep)

    def is_zero(self) -> bool:
        return self.rep.is_zero()

    def is_constant(self) -> bool:
        return self.rep.is_constant()

    def total_degree(self) -> int:
        return self.rep.total_degree()

    def evaluate(self, point):
        return self.rep.evaluate(point)

    def __str__(self):
        return str(self.rep)

    def __repr__(self):
        return f"RingElement({str(self.rep)!r})"
