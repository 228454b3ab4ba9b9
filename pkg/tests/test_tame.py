"""Map composition, plane decomposition, grids, and the bracket limit."""

import random

import pytest

from lndlab.errors import LndLabError
from lndlab.fields import affine_variety_cn, check_lnd, flow_lnd, make_derivation, make_shear
from lndlab.polyalg import GaussianRational, Polynomial, Ring, parse_poly
from lndlab.tame import (
    AffineFactor,
    DecompositionInconclusive,
    ElementaryFactor,
    FactorList,
    FixedTimeFlow,
    Grid,
    PolyMap,
    bracket_flow_check,
    compare_on_grid,
    compose_maps,
    jvdk_decompose,
)

XY = Ring(("x", "y"))
C2 = affine_variety_cn(2)


def pmap(*sources):
    return PolyMap(XY, tuple(parse_poly(s, XY) for s in sources))


class TestCompose:
    def test_identity(self):
        ident = PolyMap.identity(XY)
        assert compose_maps([ident, ident]) == ident

    def test_application_order(self):
        # substitute by hand: apply e first, then the swap
        e = pmap("x", "y + x^2")
        s = pmap("y", "x")
        assert compose_maps([e, s]) == pmap("y + x^2", "x")
        assert compose_maps([s, e]) == pmap("y", "x + y^2")

    def test_flow_at_inverse_times_cancels(self):
        dy = check_lnd(make_derivation(C2, ["0", "1"]))
        flow = flow_lnd(make_shear(dy, "x^2"))
        forward = PolyMap(C2.ambient, flow.at_time(1))
        backward = PolyMap(C2.ambient, flow.at_time(-1))
        assert compose_maps([forward, backward]).is_identity()


class TestJvdk:
    def test_henon_shape(self):
        h = pmap("y", "x + y^2")
        result = jvdk_decompose(h)
        assert isinstance(result, FactorList)
        assert len(result.factors) == 2
        first, second = result.factors
        assert isinstance(first, ElementaryFactor)
        assert first.axis == 2 and first.poly == parse_poly("x^2", XY)
        assert isinstance(second, AffineFactor)
        assert second.matrix == (
            (GaussianRational(0), GaussianRational(1)),
            (GaussianRational(1), GaussianRational(0)),
        )
        assert result.compose() == h

    def test_affine_map_single_factor(self):
        m = pmap("2*x + y + 1", "x - y")
        result = jvdk_decompose(m)
        assert isinstance(result, FactorList)
        assert len(result.factors) == 1
        assert isinstance(result.factors[0], AffineFactor)
        assert result.compose() == m

    def test_identity_empty(self):
        result = jvdk_decompose(PolyMap.identity(XY))
        assert isinstance(result, FactorList)
        assert result.factors == ()

    def test_non_automorphism_inconclusive(self):
        result = jvdk_decompose(pmap("x^2", "y"))
        assert isinstance(result, DecompositionInconclusive)
        result = jvdk_decompose(pmap("x", "x^2 + y^2"))
        assert isinstance(result, DecompositionInconclusive)

    def test_singular_affine_inconclusive(self):
        result = jvdk_decompose(pmap("x + y", "x + y"))
        assert isinstance(result, DecompositionInconclusive)

    def test_monic_normalization(self):
        m = pmap("x", "y + 3*x^2")
        result = jvdk_decompose(m)
        assert isinstance(result, FactorList)
        for factor in result.factors:
            if isinstance(factor, ElementaryFactor):
                lead = max(factor.poly.terms, key=lambda e: sum(e))
                assert factor.poly.terms[lead] == GaussianRational(1)
        assert result.compose() == m

    def test_degree_formula_on_triangular_chains(self):
        # fixture family: (x, y + x^k) composed with swaps
        swap = pmap("y", "x")
        for ks in [(2,), (3,), (2, 3), (4, 2), (2, 2, 3)]:
            chain = []
            for k in ks:
                chain.append(pmap("x", f"y + x^{k}"))
                chain.append(swap)
            composed = compose_maps(chain)
            result = jvdk_decompose(composed, max_steps=128)
            assert isinstance(result, FactorList)
            assert result.compose() == composed
            elementary_degrees = [
                f.poly.total_degree()
                for f in result.factors
                if isinstance(f, ElementaryFactor)
            ]
            product = 1
            for d in elementary_degrees:
                product *= d
            map_degree = max(img.total_degree() for img in composed.images)
            assert product == map_degree

    def test_random_compositions_round_trip(self):
        rng = random.Random(0xBEEF)
        for _ in range(20):
            chain = []
            for _ in range(rng.randint(1, 4)):
                if rng.random() < 0.5:
                    axis = rng.choice([1, 2])
                    other = "y" if axis == 1 else "x"
                    deg = rng.randint(1, 3)
                    coeffs = [rng.randint(-2, 2) for _ in range(deg + 1)]
                    coeffs[deg] = rng.choice([1, 2, -1])
                    poly = sum(
                        (Polynomial.variable(XY, other) ** i * c for i, c in enumerate(coeffs)),
                        Polynomial.zero(XY),
                    )
                    chain.append(ElementaryFactor(axis, poly).as_map(XY))
                else:
                    while True:
                        a, b, c, d = (rng.randint(-2, 2) for _ in range(4))
                        if a * d - b * c != 0:
                            break
                    factor = AffineFactor(
                        (
                            (GaussianRational(a), GaussianRational(b)),
                            (GaussianRational(c), GaussianRational(d)),
                        ),
                        (GaussianRational(rng.randint(-2, 2)), GaussianRational(rng.randint(-2, 2))),
                    )
                    chain.append(factor.as_map(XY))
            composed = compose_maps(chain)
            result = jvdk_decompose(composed, max_steps=256)
            assert isinstance(result, FactorList), (composed, result)
            assert result.compose() == composed


class TestCompareOnGrid:
    def test_map_vs_itself(self):
        m = pmap("x + y^2", "y")
        assert compare_on_grid(m, m) == 0.0

    def test_recomposed_factors_close(self):
        h = pmap("y", "x + y^2")
        result = jvdk_decompose(h)
        assert compare_on_grid(result.compose(), h) <= 1e-12

    def test_flow_vs_elementary_map(self):
        dy = check_lnd(make_derivation(C2, ["0", "1"]))
        flow = flow_lnd(make_shear(dy, "x^2"))
        target = pmap("x", "y + x^2")
        deviation = compare_on_grid(FixedTimeFlow(flow, 1.0), target)
        assert deviation == 0.0

    def test_custom_grid(self):
        m = pmap("x", "y")
        shifted = pmap("x + 1/1000000", "y")
        grid = Grid(center=(2.0, 2.0), radius=0.5, samples=3)
        got = compare_on_grid(m, shifted, grid)
        assert abs(got - 1e-6) < 1e-12


class TestBracketFlowCheck:
    def test_commuting_fields_zero_error(self):
        dx = check_lnd(make_derivation(C2, ["1", "0"]))
        dy = make_derivation(C2, ["0", "1"])
        report = bracket_flow_check(dx, dy, (0.3, -0.7), 1e-3)
        assert report.abs_error == 0.0
        assert all(v == 0 for v in report.fd_vector)

    def test_linear_pair_error_linear_in_t(self):
        # first-order Taylor remainder: error is exactly t at (1, 1)
        theta = check_lnd(make_derivation(C2, ["y", "0"]))
        tilde = make_derivation(C2, ["0", "x"])
        report = bracket_flow_check(theta, tilde, (1.0, 1.0), 1e-4)
        assert report.exact_vector == (complex(-1), complex(1))
        assert report.abs_error <= 1e-3
        smaller = bracket_flow_check(theta, tilde, (1.0, 1.0), 5e-5)
        assert smaller.abs_error <= 0.6 * report.abs_error

    def test_danielewski_pair(self):
        ring = Ring(("z1", "z2", "u", "v"))
        from lndlab.fields import AffineVariety

        variety = AffineVariety(ring, [parse_poly("u*v - z1^2 - z2^2 + 1", ring)])
        theta = check_lnd(make_derivation(variety, ["u", "0", "0", "2*z1"]))
        xi = make_derivation(variety, ["0", "v", "2*z2", "0"])
        point = (1, 0, 1, 0)
        errors = [bracket_flow_check(theta, xi, point, t).abs_error for t in (1e-3, 5e-4)]
        assert errors[1] <= 0.6 * errors[0]

    def test_zero_time_rejected(self):
        dx = check_lnd(make_derivation(C2, ["1", "0"]))
        dy = make_derivation(C2, ["0", "1"])
        with pytest.raises(LndLabError):
            bracket_flow_check(dx, dy, (0, 0), 0)


class TestStepBound:
    def test_zero_budget_is_inconclusive(self):
        h = pmap("y", "x + y^2")
        result = jvdk_decompose(h, max_steps=0)
        assert isinstance(result, DecompositionInconclusive)
        assert result.reason == "step bound exhausted"
        assert isinstance(jvdk_decompose(h, max_steps=1), FactorList)
