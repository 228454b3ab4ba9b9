"""Sparse multivariate polynomials over the Gaussian rationals Q(i).

Coefficients are exact: a Gaussian rational is a pair of
`fractions.Fraction` values (real and imaginary part), so polynomial
equality is a decision, never a tolerance.  A polynomial is a map from
exponent vectors to nonzero coefficients, kept canonical at all times:
no zero terms, exponent vectors of full ring arity, printing sorted by
graded reverse lexicographic order so that print -> parse -> print is
the identity.

Text grammar (accepted by `parse_poly`, produced by `str()`):

    identifiers  [A-Za-z][A-Za-z0-9_]*   (ring variables; `I` is reserved)
    integers     123        fractions   1/2
    imaginary    I
    operators    + - * ^    (no implicit multiplication: `2*x`, never `2x`)
    parentheses  ( )

Whitespace is insignificant.  `^` takes a nonnegative integer literal.
`/` divides by a nonzero constant, which covers fraction literals.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Iterator, Mapping, Sequence, Tuple, Union

from .errors import ArityMismatch, LndLabError, PolyParseError, RingMismatch

# Exponents are machine nonnegative integers; anything past this bound is
# treated as a runaway computation rather than a meaningful polynomial.
MAX_EXPONENT = 2**31 - 1

ExactScalar = Union[int, Fraction, "GaussianRational"]


class GaussianRational:
    """An element a + b*I of Q(i) with exact rational parts.

    Fractions keep themselves in lowest terms with positive denominator,
    so equality and hashing are structural.
    """

    __slots__ = ("re", "im")

    def __init__(self, re: Union[int, Fraction] = 0, im: Union[int, Fraction] = 0):
        if isinstance(re, float) or isinstance(im, float):
            raise TypeError("GaussianRational parts must be exact (int or Fraction)")
        object.__setattr__(self, "re", Fraction(re))
        object.__setattr__(self, "im", Fraction(im))

    def __setattr__(self, name, value):
        raise AttributeError("GaussianRational is immutable")

    @staticmethod
    def _coerce(value) -> "GaussianRational":
        if isinstance(value, GaussianRational):
            return value
        if isinstance(value, (int, Fraction)):
            return GaussianRational(value)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return GaussianRational(self.re + other.re, self.im + other.im)

    __radd__ = __add__

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return GaussianRational(self.re - other.re, self.im - other.im)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return other - self

    def __neg__(self):
        return GaussianRational(-self.re, -self.im)

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return GaussianRational(
            self.re * other.re - self.im * other.im,
            self.re * other.im + self.im * other.re,
        )

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        norm = other.re * other.re + other.im * other.im
        if norm == 0:
            raise ZeroDivisionError("division by zero in Q(i)")
        return GaussianRational(
            (self.re * other.re + self.im * other.im) / norm,
            (self.im * other.re - self.re * other.im) / norm,
        )

    def __rtruediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return other / self

    def __pow__(self, k: int):
        if not isinstance(k, int) or k < 0:
            raise ValueError("exponent must be a nonnegative integer")
        result = GaussianRational(1)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def __eq__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self.re == other.re and self.im == other.im

    def __hash__(self):
        return hash((self.re, self.im))

    def __bool__(self):
        return self.re != 0 or self.im != 0

    def __complex__(self):
        return complex(float(self.re), float(self.im))

    def conjugate(self) -> "GaussianRational":
        return GaussianRational(self.re, -self.im)

    def is_rational(self) -> bool:
        return self.im == 0

    def __str__(self):
        return coeff_to_str(self)

    def __repr__(self):
        return f"GaussianRational({self.re!r}, {self.im!r})"


QI_ZERO = GaussianRational(0)
QI_ONE = GaussianRational(1)
QI_I = GaussianRational(0, 1)

_IDENT_RE = re.compile(r"[A-Za-z][A-Za-z0-9_]*\Z")


@dataclass(frozen=True)
class Ring:
    """An ordered tuple of distinct variable names."""

    vars: Tuple[str, ...]

    def __post_init__(self):
        if not isinstance(self.vars, tuple):
            object.__setattr__(self, "vars", tuple(self.vars))
        seen = set()
        for name in self.vars:
            if not _IDENT_RE.match(name):
                raise LndLabError(f"invalid variable name {name!r}")
            if name == "I":
                raise LndLabError("variable name 'I' collides with the imaginary unit")
            if name in seen:
                raise LndLabError(f"duplicate variable name {name!r}")
            seen.add(name)

    @property
    def arity(self) -> int:
        return len(self.vars)

    def index(self, name: str) -> int:
        try:
            return self.vars.index(name)
        except ValueError:
            raise LndLabError(f"unknown variable {name!r} in ring {list(self.vars)}") from None

    def __contains__(self, name: str) -> bool:
        return name in self.vars

    def extend(self, *names: str) -> "Ring":
        return Ring(self.vars + names)


def grevlex_key(exps: Sequence[int]) -> tuple:
    """Sort key: ascending graded reverse lexicographic order."""
    return (sum(exps), tuple(-e for e in reversed(exps)))


def iter_exponents(nvars: int, max_deg: int) -> Iterator[Tuple[int, ...]]:
    """All exponent vectors of total degree <= max_deg, ascending grevlex."""
    if nvars == 0:
        yield ()
        return

    def rec(prefix, remaining, slots):
        if slots == 1:
            yield prefix + (remaining,)
            return
        for e in range(remaining + 1):
            yield from rec(prefix + (e,), remaining - e, slots - 1)

    bucket = []
    for deg in range(max_deg + 1):
        bucket.extend(rec((), deg, nvars))
    bucket.sort(key=grevlex_key)
    for exps in bucket:
        yield exps


class Polynomial:
    """Immutable sparse polynomial: {exponent vector: nonzero coefficient}."""

    __slots__ = ("ring", "terms", "_hash")

    def __init__(self, ring: Ring, terms: Mapping[Tuple[int, ...], ExactScalar]):
        canonical: Dict[Tuple[int, ...], GaussianRational] = {}
        arity = ring.arity
        for exps, coeff in terms.items():
            exps = tuple(exps)
            if len(exps) != arity:
                raise LndLabError(
                    f"exponent vector {exps} has length {len(exps)}, expected {arity}"
                )
            for e in exps:
                if not isinstance(e, int) or e < 0:
                    raise LndLabError(f"exponents must be nonnegative integers, got {e!r}")
                if e > MAX_EXPONENT:
                    raise OverflowError(f"exponent {e} exceeds the 2^31-1 degree bound")
            if not isinstance(coeff, GaussianRational):
                coeff = GaussianRational(coeff)
            if coeff:
                canonical[exps] = coeff
        object.__setattr__(self, "ring", ring)
        object.__setattr__(self, "terms", canonical)
        object.__setattr__(self, "_hash", None)

    def __setattr__(self, name, value):
        raise AttributeError("Polynomial is immutable")

    # -- constructors -------------------------------------------------

    @classmethod
    def zero(cls, ring: Ring) -> "Polynomial":
        return cls(ring, {})

    @classmethod
    def constant(cls, ring: Ring, value: ExactScalar) -> "Polynomial":
        return cls(ring, {(0,) * ring.arity: value})

    @classmethod
    def variable(cls, ring: Ring, name: str) -> "Polynomial":
        i = ring.index(name)
        exps = [0] * ring.arity
        exps[i] = 1
        return cls(ring, {tuple(exps): QI_ONE})

    @classmethod
    def monomial(cls, ring: Ring, exps: Sequence[int], coeff: ExactScalar = 1) -> "Polynomial":
        return cls(ring, {tuple(exps): coeff})

    # -- predicates and views -----------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def is_constant(self) -> bool:
        return all(sum(e) == 0 for e in self.terms)

    def constant_value(self) -> GaussianRational:
        if not self.is_constant():
            raise LndLabError(f"{self} is not constant")
        return self.terms.get((0,) * self.ring.arity, QI_ZERO)

    def total_degree(self) -> int:
        """Max total degree of a term; 0 for the zero polynomial."""
        if not self.terms:
            return 0
        return max(sum(e) for e in self.terms)

    def coefficient(self, exps: Sequence[int]) -> GaussianRational:
        return self.terms.get(tuple(exps), QI_ZERO)

    def sorted_terms(self, reverse: bool = True):
        return sorted(self.terms.items(), key=lambda kv: grevlex_key(kv[0]), reverse=reverse)

    def leading_form(self) -> "Polynomial":
        """Homogeneous part of maximal total degree (zero poly -> zero)."""
        if not self.terms:
            return self
        d = self.total_degree()
        return Polynomial(self.ring, {e: c for e, c in self.terms.items() if sum(e) == d})

    # -- arithmetic ----------------------------------------------------

    def _check_ring(self, other: "Polynomial"):
        if self.ring != other.ring:
            raise RingMismatch(
                f"cannot combine polynomials over {list(self.ring.vars)} and {list(other.ring.vars)}"
            )

    def _lift_scalar(self, value) -> "Polynomial":
        return Polynomial.constant(self.ring, value)

    def __add__(self, other):
        if isinstance(other, (int, Fraction, GaussianRational)):
            other = self._lift_scalar(other)
        if not isinstance(other, Polynomial):
            return NotImplemented
        self._check_ring(other)
        out = dict(self.terms)
        for exps, coeff in other.terms.items():
            out[exps] = out.get(exps, QI_ZERO) + coeff
        return Polynomial(self.ring, out)

    __radd__ = __add__

    def __sub__(self, other):
        if isinstance(other, (int, Fraction, GaussianRational)):
            other = self._lift_scalar(other)
        if not isinstance(other, Polynomial):
            return NotImplemented
        self._check_ring(other)
        out = dict(self.terms)
        for exps, coeff in other.terms.items():
            out[exps] = out.get(exps, QI_ZERO) - coeff
        return Polynomial(self.ring, out)

    def __rsub__(self, other):
        return (-self) + other

    def __neg__(self):
        return Polynomial(self.ring, {e: -c for e, c in self.terms.items()})

    def __mul__(self, other):
        if isinstance(other, (int, Fraction, GaussianRational)):
            coeff = GaussianRational._coerce(other)
            return Polynomial(self.ring, {e: c * coeff for e, c in self.terms.items()})
        if not isinstance(other, Polynomial):
            return NotImplemented
        self._check_ring(other)
        out: Dict[Tuple[int, ...], GaussianRational] = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                exps = tuple(a + b for a, b in zip(e1, e2))
                prev = out.get(exps)
                out[exps] = c1 * c2 if prev is None else prev + c1 * c2
        return Polynomial(self.ring, out)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, Polynomial):
            if not other.is_constant():
                raise LndLabError("polynomial division only by nonzero constants")
            other = other.constant_value()
        coeff = GaussianRational._coerce(other)
        if coeff is NotImplemented:
            return NotImplemented
        if not coeff:
            raise ZeroDivisionError("division by zero polynomial")
        return self * (QI_ONE / coeff)

    def __pow__(self, k: int):
        if not isinstance(k, int) or k < 0:
            raise LndLabError("polynomial exponent must be a nonnegative integer")
        result = Polynomial.constant(self.ring, 1)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base if k > 1 else base
            k >>= 1
        return result

    def __eq__(self, other):
        if isinstance(other, (int, Fraction, GaussianRational)):
            other = self._lift_scalar(other)
        if not isinstance(other, Polynomial):
            return NotImplemented
        return self.ring == other.ring and self.terms == other.terms

    def __hash__(self):
        h = self._hash
        if h is None:
            h = hash((self.ring, frozenset(self.terms.items())))
            object.__setattr__(self, "_hash", h)
        return h

    # -- calculus and composition --------------------------------------

    def partial(self, var: str) -> "Polynomial":
        i = self.ring.index(var)
        out: Dict[Tuple[int, ...], GaussianRational] = {}
        for exps, coeff in self.terms.items():
            e = exps[i]
            if e == 0:
                continue
            lowered = exps[:i] + (e - 1,) + exps[i + 1 :]
            prev = out.get(lowered)
            bumped = coeff * e
            out[lowered] = bumped if prev is None else prev + bumped
        return Polynomial(self.ring, out)

    def substitute(self, images: Mapping[str, "Polynomial"]) -> "Polynomial":
        """Exact composition: replace every ring variable by its image.

        All images must live in one common target ring, and every
        variable of this ring needs an image.
        """
        target: Ring = None
        for name in self.ring.vars:
            if name not in images:
                raise LndLabError(f"no image supplied for variable {name!r}")
            img = images[name]
            if target is None:
                target = img.ring
            elif img.ring != target:
                raise RingMismatch("substitution images live in different rings")
        if target is None:  # 0-variable ring
            target = self.ring
        power_cache: Dict[Tuple[str, int], Polynomial] = {}

        def power(name: str, e: int) -> Polynomial:
            key = (name, e)
            got = power_cache.get(key)
            if got is None:
                got = images[name] ** e
                power_cache[key] = got
            return got

        result = Polynomial.zero(target)
        for exps, coeff in self.terms.items():
            term = Polynomial.constant(target, coeff)
            for name, e in zip(self.ring.vars, exps):
                if e:
                    term = term * power(name, e)
            result = result + term
        return result

    def in_ring(self, new_ring: Ring) -> "Polynomial":
        """Reinterpret in a ring that contains all used variables by name."""
        positions = [new_ring.index(v) if v in new_ring else None for v in self.ring.vars]
        out: Dict[Tuple[int, ...], GaussianRational] = {}
        for exps, coeff in self.terms.items():
            new_exps = [0] * new_ring.arity
            for pos, e in zip(positions, exps):
                if e and pos is None:
                    raise LndLabError("variable missing from target ring")
                if e:
                    new_exps[pos] = e
            key = tuple(new_exps)
            prev = out.get(key)
            out[key] = coeff if prev is None else prev + coeff
        return Polynomial(new_ring, out)

    def evaluate(self, point: Sequence):
        """Evaluate at a point, Horner-style per variable.

        Exact Gaussian-rational arithmetic when every component is exact
        (int, Fraction, GaussianRational); binary64 complex otherwise.
        """
        if len(point) != self.ring.arity:
            raise ArityMismatch(
                f"point has {len(point)} components, ring has {self.ring.arity}"
            )
        exact = all(isinstance(p, (int, Fraction, GaussianRational)) for p in point)
        if exact:
            vals = [GaussianRational._coerce(p) for p in point]
            zero = QI_ZERO
            items = list(self.terms.items())
        else:
            vals = [complex(p) for p in point]
            zero = 0j
            items = [(e, complex(c)) for e, c in self.terms.items()]
        return _horner(items, 0, self.ring.arity, vals, zero)

    # -- printing -------------------------------------------------------

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for exps, coeff in self.sorted_terms():
            parts.append(_term_to_str(self.ring, exps, coeff))
        text = parts[0]
        for part in parts[1:]:
            if part.startswith("-"):
                text += " - " + part[1:]
            else:
                text += " + " + part
        return text

    def __repr__(self):
        return f"Polynomial({str(self)!r}, vars={list(self.ring.vars)})"


def _horner(items, i, nvars, vals, zero):
    if not items:
        return zero
    if i == nvars:
        # at most one term can remain at full depth
        total = zero
        for _, c in items:
            total = total + c
        return total
    by_exp: Dict[int, list] = {}
    for exps, c in items:
        by_exp.setdefault(exps[i], []).append((exps, c))
    acc = zero
    prev = None
    for e in sorted(by_exp, reverse=True):
        inner = _horner(by_exp[e], i + 1, nvars, vals, zero)
        if prev is None:
            acc = inner
        else:
            acc = acc * vals[i] ** (prev - e) + inner
        prev = e
    if prev:
        acc = acc * vals[i] ** prev
    return acc


def coeff_to_str(c: GaussianRational) -> str:
    """Canonical scalar rendering: 3, -1/2, I, -2*I, (1/2+3*I)."""
    if c.im == 0:
        return str(c.re)
    if c.re == 0:
        if c.im == 1:
            return "I"
        if c.im == -1:
            return "-I"
        return f"{c.im}*I"
    im = c.im
    if im > 0:
        im_part = "I" if im == 1 else f"{im}*I"
        return f"({c.re}+{im_part})"
    im_part = "I" if im == -1 else f"{-im}*I"
    return f"({c.re}-{im_part})"


def _term_to_str(ring: Ring, exps, coeff: GaussianRational) -> str:
    factors = []
    for name, e in zip(ring.vars, exps):
        if e == 1:
            factors.append(name)
        elif e > 1:
            factors.append(f"{name}^{e}")
    mono = "*".join(factors)
    if not mono:
        return coeff_to_str(coeff)
    if coeff == QI_ONE:
        return mono
    if coeff == -QI_ONE:
        return "-" + mono
    return coeff_to_str(coeff) + "*" + mono


# -- parser -------------------------------------------------------------

_TOKEN_RE = re.compile(
    r"\s*(?:(?P<int>\d+)|(?P<ident>[A-Za-z][A-Za-z0-9_]*)|(?P<op>[-+*^/()]))"
)


class _Parser:
    def __init__(self, src: str, ring: Ring):
        self.src = src
        self.ring = ring
        self.tokens = []
        pos = 0
        while pos < len(src):
            m = _TOKEN_RE.match(src, pos)
            if m is None or m.end() == pos:
                stripped = src[pos:].lstrip()
                if not stripped:
                    break
                bad_at = len(src) - len(stripped)
                raise PolyParseError(f"unexpected character {src[bad_at]!r}", bad_at)
            kind = m.lastgroup
            self.tokens.append((kind, m.group(kind), m.start(kind)))
            pos = m.end()
        self.tokens.append(("end", "", len(src)))
        self.i = 0

    def peek(self):
        return self.tokens[self.i]

    def advance(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def parse(self) -> Polynomial:
        value = self.expr()
        kind, text, pos = self.peek()
        if kind != "end":
            raise PolyParseError(f"unexpected token {text!r}", pos)
        return value

    def expr(self) -> Polynomial:
        value = self.term()
        while True:
            kind, text, _ = self.peek()
            if kind == "op" and text in "+-":
                self.advance()
                rhs = self.term()
                value = value + rhs if text == "+" else value - rhs
            else:
                return value

    def term(self) -> Polynomial:
        value = self.unary()
        while True:
            kind, text, pos = self.peek()
            if kind == "op" and text == "*":
                self.advance()
                value = value * self.unary()
            elif kind == "op" and text == "/":
                self.advance()
                divisor = self.unary()
                if not divisor.is_constant() or divisor.is_zero():
                    raise PolyParseError("division only by a nonzero constant", pos)
                value = value / divisor
            elif kind in ("int", "ident") or (kind == "op" and text == "("):
                raise PolyParseError(
                    "implicit multiplication is not allowed; write '*'", pos
                )
            else:
                return value

    def unary(self) -> Polynomial:
        kind, text, _ = self.peek()
        if kind == "op" and text == "-":
            self.advance()
            return -self.unary()
        if kind == "op" and text == "+":
            self.advance()
            return self.unary()
        return self.power()

    def power(self) -> Polynomial:
        base = self.atom()
        kind, text, pos = self.peek()
        if kind == "op" and text == "^":
            self.advance()
            kind, text, pos = self.advance()
            if kind != "int":
                raise PolyParseError("exponent must be a nonnegative integer", pos)
            return base ** int(text)
        return base

    def atom(self) -> Polynomial:
        kind, text, pos = self.advance()
        if kind == "int":
            return Polynomial.constant(self.ring, int(text))
        if kind == "ident":
            if text == "I":
                return Polynomial.constant(self.ring, QI_I)
            if text not in self.ring:
                raise PolyParseError(f"unknown variable {text!r}", pos)
            return Polynomial.variable(self.ring, text)
        if kind == "op" and text == "(":
            value = self.expr()
            kind, text, pos = self.advance()
            if not (kind == "op" and text == ")"):
                raise PolyParseError("expected ')'", pos)
            return value
        raise PolyParseError(f"unexpected token {text!r}" if text else "unexpected end of input", pos)


def parse_poly(src: str, ring: Ring) -> Polynomial:
    """Parse polynomial text over the given ring (grammar in module docstring)."""
    return _Parser(src, ring).parse()


def poly_arith(op: str, f: Polynomial, g_or_k) -> Polynomial:
    """Named arithmetic dispatch: op in {add, sub, mul, pow}."""
    if op == "add":
        return f + g_or_k
    if op == "sub":
        return f - g_or_k
    if op == "mul":
        return f * g_or_k
    if op == "pow":
        return f ** g_or_k
    raise LndLabError(f"unknown operation {op!r}")


def partial(f: Polynomial, var: str) -> Polynomial:
    """Formal partial derivative with respect to one ring variable."""
    return f.partial(var)


def evaluate(f: Polynomial, point: Sequence):
    return f.evaluate(point)


def substitute(f: Polynomial, images: Mapping[str, Polynomial]) -> Polynomial:
    return f.substitute(images)
