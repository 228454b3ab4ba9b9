"""Derivations on varieties, nilpotency certificates, and their flows.

A derivation is given by one image per coordinate; building one checks
tangency against the defining equations.  Certified locally nilpotent
derivations get exact polynomial flows; multipliers from ker D give
shears, from ker D^2 overshears, whose flow runs the base flow for an
exponentially reparametrized time.
Run with:  python3 demos/02_derivations_and_flows.py
"""

import math

from lndlab import (
    AffineVariety,
    Ring,
    check_lnd,
    eval_flow,
    flow_lnd,
    flow_overshear,
    make_derivation,
    make_overshear,
    make_shear,
    parse_poly,
)
from lndlab.errors import ShearConditionViolated, TangencyError

# -- a surface and a tangent field -------------------------------------------

ring = Ring(("z", "u", "v"))
surface = AffineVariety(ring, [parse_poly("u*v - z^2", ring)])

# z -> u, u -> 0, v -> 2z is tangent: Leibniz gives u*2z - 2z*u = 0.
theta = make_derivation(surface, ["u", "0", "2*z"])
print("theta(v)     =", theta.apply("v"))
print("theta(uv-z^2)=", theta.apply("u*v - z^2"))

# The variant u -> 2z, z -> -u is NOT tangent; its residue is (u+v)*2z.
try:
    make_derivation(surface, ["-u", "2*z", "0"])
except TangencyError as exc:
    print("rejected:", exc)

# -- nilpotency certification --------------------------------------------------

cert = check_lnd(theta)
print("\nnilpotency indices:", dict(zip(ring.vars, cert.indices)))

# The scaling field z d/dz never terminates; the verdict stays honest.
line = AffineVariety(Ring(("z",)))
euler = make_derivation(line, ["z"])
print("euler field:", check_lnd(euler, max_iter=64))

# -- exact flows ---------------------------------------------------------------

flow = flow_lnd(cert)
print("\nflow images:", {v: str(img) for v, img in zip(ring.vars, flow.images)})
print("at t = 1:", [str(p) for p in flow.at_time(1)])
# the flow stays on the surface: u(v + 2tz + t^2 u) - (z + tu)^2 = uv - z^2

# -- shears and overshears -----------------------------------------------------

c2 = AffineVariety(Ring(("x", "y")))
dy = check_lnd(make_derivation(c2, ["0", "1"]))

shear = make_shear(dy, "x^2")
print("\nshear flow:", [str(p) for p in flow_lnd(shear).at_time(1)])

try:
    make_shear(check_lnd(theta), "z")   # theta(z) = u, not a shear multiplier
except ShearConditionViolated as exc:
    print("shear rejected:", exc)

# x*y is an overshear multiplier for d/dy: D(xy) = x, D(x) = 0.
over = make_overshear(dy, "x*y")
hybrid = flow_overshear(over)
print("overshear flow of x*y*d/dy: f =", over.f, ", a =", over.a)

# Its time-t map sends y to y*e^(x t); at t = ln 2 the point (1,1) doubles.
image = eval_flow(hybrid, math.log(2), (1.0, 1.0))
print("(1,1) at t = ln 2 ->", tuple(round(c.real, 12) for c in image))
