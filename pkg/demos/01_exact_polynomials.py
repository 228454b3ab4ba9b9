"""Exact polynomials, the text grammar, and quotient-ring arithmetic.

Everything in this package runs over the Gaussian rationals Q(i), so
every equality you see printed here is a theorem, not a float that
happens to be small.  Run with:  python3 demos/01_exact_polynomials.py
"""

from fractions import Fraction

from lndlab import (
    GaussianRational,
    Polynomial,
    Ring,
    grevlex,
    groebner,
    normal_form,
    parse_poly,
)

# -- scalars: exact complex rationals ---------------------------------------

i = GaussianRational(0, 1)
half = GaussianRational(Fraction(1, 2))
print("i^2 =", (i * i))
print("(1/2 + i)(1/2 - i) =", (half + i) * (half - i))

# -- the text grammar ---------------------------------------------------------

xy = Ring(("x", "y"))
f = parse_poly("(x + y)^2 - 1/2", xy)
print("\nparsed:", f)

# Printing is canonical: parse(str(f)) reproduces f term for term.
assert parse_poly(str(f), xy) == f

# No implicit multiplication, ever: "2x" is a syntax error, "2*x" is fine.
try:
    parse_poly("2x", xy)
except Exception as exc:
    print("rejected as expected:", exc)

# -- exact arithmetic ---------------------------------------------------------

x = Polynomial.variable(xy, "x")
y = Polynomial.variable(xy, "y")
print("\n(x + y)(x - y) =", (x + y) * (x - y))
print("d/dx of x^2*y  =", (x**2 * y).partial("x"))
print("x^2*y at (2,3) =", (x**2 * y).evaluate((2, 3)))

# -- Groebner bases and normal forms ------------------------------------------

# The surface u*v = z^2 in coordinates (u, v, z): its single equation is
# already a basis, and dividing by it produces canonical representatives.
uvz = Ring(("u", "v", "z"))
surface = parse_poly("u*v - z^2", uvz)
basis = groebner([surface], grevlex(uvz))
print("\nbasis for (u*v - z^2):", [str(g) for g in basis.gens])
print("normal form of u*v:   ", normal_form(parse_poly("u*v", uvz), basis))
print("normal form of u*v*z: ", normal_form(parse_poly("u*v*z", uvz), basis))

# Membership in the ideal is a decision: zero normal form, nothing else.
multiple = parse_poly("(u + v)*(u*v - z^2)", uvz)
print("(u+v)*(uv - z^2) reduces to:", normal_form(multiple, basis))
