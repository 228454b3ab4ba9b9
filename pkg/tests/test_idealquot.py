"""Groebner bases, normal forms, and ideal membership."""

import random

import pytest

from lndlab.errors import LndLabError
from lndlab.idealquot import grevlex, groebner, in_ideal, lex, normal_form
from lndlab.polyalg import Polynomial, Ring, parse_poly

UVZ = Ring(("u", "v", "z"))
X = Ring(("x",))
SL2 = Ring(("a", "b", "c", "d"))


def p(src, ring):
    return parse_poly(src, ring)


class TestGroebner:
    def test_single_generator_is_basis(self):
        gb = groebner([p("u*v - z^2", UVZ)], grevlex(UVZ))
        assert gb.gens == (p("u*v - z^2", UVZ),)

    def test_hand_buchberger_oracle(self):
        # oracle by hand: x^2-1 = (x+1)(x-1) reduces to 0 modulo x-1,
        # so the reduced basis is {x-1}
        gb = groebner([p("x^2 - 1", X), p("x - 1", X)], grevlex(X))
        assert gb.gens == (p("x - 1", X),)

    def test_sl2_relation(self):
        gb = groebner([p("a*d - b*c - 1", SL2)], grevlex(SL2))
        # monic under grevlex a>b>c>d, where b*c is the leading monomial
        assert gb.gens == (p("b*c - a*d + 1", SL2),)
        assert in_ideal(p("a*d - b*c - 1", SL2), gb)

    def test_input_order_invariance(self):
        gens = [p("x^2 - 1", X), p("x - 1", X)]
        forward = groebner(gens, grevlex(X))
        backward = groebner(list(reversed(gens)), grevlex(X))
        assert forward.gens == backward.gens

    def test_lex_elimination(self):
        ring = Ring(("x", "y"))
        gb = groebner([p("x - y^2", ring), p("x*y - 1", ring)], lex(ring))
        assert gb.gens == (p("y^3 - 1", ring), p("x - y^2", ring))

    def test_empty_input_rejected(self):
        with pytest.raises(LndLabError):
            groebner([], grevlex(X))

    def test_every_generator_lands_in_ideal(self):
        rng = random.Random(4242)
        ring = Ring(("x", "y"))
        for _ in range(15):
            gens = []
            for _ in range(rng.randint(1, 3)):
                terms = {}
                for _ in range(rng.randint(1, 3)):
                    exps = (rng.randint(0, 2), rng.randint(0, 2))
                    terms[exps] = rng.randint(-3, 3)
                poly = Polynomial(ring, terms)
                if not poly.is_zero():
                    gens.append(poly)
            if not gens:
                continue
            gb = groebner(gens, grevlex(ring))
            for g in gens:
                assert in_ideal(g, gb)

    def test_s_polynomials_reduce_to_zero(self):
        # self-certification of the basis property
        from lndlab.idealquot import _s_poly

        ring = Ring(("x", "y", "z"))
        gens = [p("x*y - z", ring), p("y*z - x", ring), p("x*z - y", ring)]
        gb = groebner(gens, grevlex(ring))
        key = gb.order.key_function(ring)
        for i in range(len(gb.gens)):
            for j in range(i + 1, len(gb.gens)):
                s = _s_poly(gb.gens[i], gb.gens[j], key)
                assert gb.normal_form(s).is_zero()

    def test_against_sympy_on_random_ideals(self):
        sympy = pytest.importorskip("sympy")
        rng = random.Random(11)
        ring = Ring(("x", "y"))
        sx, sy = sympy.symbols("x y")
        for _ in range(10):
            gens = []
            for _ in range(2):
                terms = {}
                for _ in range(rng.randint(1, 4)):
                    exps = (rng.randint(0, 3), rng.randint(0, 3))
                    terms[exps] = rng.randint(-4, 4)
                poly = Polynomial(ring, terms)
                if not poly.is_zero():
                    gens.append(poly)
            if not gens:
                continue
            ours = groebner(gens, grevlex(ring))
            s_gens = [
                sympy.Poly(str(g).replace("^", "**"), sx, sy, domain="QQ")
                for g in gens
            ]
            theirs = sympy.groebner(s_gens, sx, sy, order="grevlex", domain="QQ")
            ours_terms = {
                frozenset(
                    (e, (c.re.numerator, c.re.denominator)) for e, c in g.terms.items()
                )
                for g in ours.gens
            }
            theirs_terms = {
                frozenset(
                    (tuple(mono), (sympy.Rational(c).p, sympy.Rational(c).q))
                    for mono, c in sympy.Poly(e, sx, sy).terms()
                )
                for e in theirs.exprs
            }
            assert ours_terms == theirs_terms


class TestNormalForm:
    def test_division_step_oracle(self):
        # one division step by hand: uv -> z^2 under grevlex u>v>z
        gb = groebner([p("u*v - z^2", UVZ)], grevlex(UVZ))
        assert normal_form(p("u*v", UVZ), gb) == p("z^2", UVZ)

    def test_sl2_determinant_reduces_to_one(self):
        gb = groebner([p("a*d - b*c - 1", SL2)], grevlex(SL2))
        assert normal_form(p("a*d - b*c", SL2), gb) == Polynomial.constant(SL2, 1)

    def test_zero(self):
        gb = groebner([p("u*v - z^2", UVZ)], grevlex(UVZ))
        assert normal_form(Polynomial.zero(UVZ), gb).is_zero()

    def test_idempotent_random(self):
        rng = random.Random(5)
        gb = groebner([p("u*v - z^2", UVZ)], grevlex(UVZ))
        for _ in range(60):
            terms = {}
            for _ in range(rng.randint(0, 5)):
                exps = (rng.randint(0, 3), rng.randint(0, 3), rng.randint(0, 3))
                terms[exps] = rng.randint(-5, 5)
            f = Polynomial(UVZ, terms)
            nf = normal_form(f, gb)
            assert normal_form(nf, gb) == nf

    def test_projection_is_ring_morphism(self):
        rng = random.Random(6)
        gb = groebner([p("u*v - z^2", UVZ)], grevlex(UVZ))

        def rand():
            terms = {}
            for _ in range(rng.randint(0, 4)):
                exps = (rng.randint(0, 2), rng.randint(0, 2), rng.randint(0, 2))
                terms[exps] = rng.randint(-4, 4)
            return Polynomial(UVZ, terms)

        for _ in range(60):
            f, g = rand(), rand()
            nf = lambda q: normal_form(q, gb)
            assert nf(f + g) == nf(nf(f) + nf(g))
            assert nf(f * g) == nf(nf(f) * nf(g))


class TestInIdeal:
    def test_examples(self):
        gb = groebner([p("u*v - z^2", UVZ)], grevlex(UVZ))
        assert in_ideal(p("(u+v)*(u*v - z^2)", UVZ), gb)
        assert not in_ideal(p("u", UVZ), gb)
        assert in_ideal(Polynomial.zero(UVZ), gb)


class TestPrecedence:
    def test_non_default_precedence_changes_leads(self):
        # same ring, two precedences: the division direction flips
        ring = Ring(("z", "u", "v"))
        gen = p("u*v - z^2", ring)
        default = groebner([gen], grevlex(ring))  # z > u > v
        assert normal_form(p("z^2", ring), default) == p("u*v", ring)
        flipped = groebner([gen], grevlex(ring, precedence=("u", "v", "z")))
        assert normal_form(p("u*v", ring), flipped) == p("z^2", ring)

    def test_precedence_must_match_ring(self):
        ring = Ring(("x", "y"))
        with pytest.raises(LndLabError):
            groebner([p("x*y - 1", ring)], grevlex(ring, precedence=("x", "q")))


class TestPermutationStability:
    def test_random_generator_permutations(self):
        rng = random.Random(1618)
        ring = Ring(("x", "y", "z"))
        for _ in range(8):
            gens = []
            for _ in range(3):
                terms = {}
                for _ in range(rng.randint(1, 3)):
                    exps = (rng.randint(0, 2), rng.randint(0, 2), rng.randint(0, 2))
                    terms[exps] = rng.randint(-3, 3)
                poly = Polynomial(ring, terms)
                if not poly.is_zero():
                    gens.append(poly)
            if len(gens) < 2:
                continue
            reference = groebner(gens, grevlex(ring)).gens
            for _ in range(4):
                shuffled = gens[:]
                rng.shuffle(shuffled)
                assert groebner(shuffled, grevlex(ring)).gens == reference
