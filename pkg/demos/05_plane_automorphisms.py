"""Plane polynomial automorphisms: composition, decomposition, and the
bracket flow limit.

Two-variable maps decompose into elementary and affine factors by
degree reduction; the factor list recomposes exactly.  The last section
checks the flow-limit formula for the bracket at finite t: the error is
first order in t.
Run with:  python3 demos/05_plane_automorphisms.py
"""

from lndlab import check_lnd, flow_lnd, make_derivation, make_shear
from lndlab.fields import affine_variety_cn
from lndlab.polyalg import Ring, parse_poly
from lndlab.tame import (
    FixedTimeFlow,
    PolyMap,
    bracket_flow_check,
    compare_on_grid,
    compose_maps,
    jvdk_decompose,
)

ring = Ring(("x", "y"))


def pmap(*sources):
    return PolyMap(ring, tuple(parse_poly(s, ring) for s in sources))


# -- composition runs left to right in application order ------------------------

e = pmap("x", "y + x^2")
s = pmap("y", "x")
print("e then s:", compose_maps([e, s]))
print("s then e:", compose_maps([s, e]))

# -- decomposition ----------------------------------------------------------------

henon = pmap("y", "x + y^2")
factors = jvdk_decompose(henon)
print("\nHenon-type map", henon, "factors as:")
for factor in factors.factors:
    print("  ", factor.to_json_dict())
print("recomposes exactly:", factors.compose() == henon)

# Non-automorphisms come back Inconclusive, never a wrong factor list.
print("x -> x^2:", jvdk_decompose(pmap("x^2", "y")))

# -- a flow is a map --------------------------------------------------------------

c2 = affine_variety_cn(2)
dy = check_lnd(make_derivation(c2, ["0", "1"]))
flow = flow_lnd(make_shear(dy, "x^2"))
deviation = compare_on_grid(FixedTimeFlow(flow, 1.0), pmap("x", "y + x^2"))
print("\ntime-1 shear flow vs elementary map, max grid deviation:", deviation)

# -- the bracket as a flow limit ----------------------------------------------------

theta = check_lnd(make_derivation(c2, ["y", "0"]))
tilde = make_derivation(c2, ["0", "x"])
print("\n[y d/dx, x d/dy] via pushforward difference quotients at (1,1):")
for t in (1e-2, 1e-3, 1e-4):
    report = bracket_flow_check(theta, tilde, (1.0, 1.0), t)
    print(f"  t = {t:g}: abs error {report.abs_error:.3e}")
print("exact value:", report.exact_vector)
