"""Compatible pairs of fields and the invertible-function obstruction.

A compatible pair needs an h killed by theta^2 and by xi but not by
theta, plus a candidate ideal whose monomial multiples land in the span
of kernel products -- all checked exactly up to a degree bound.  A
nonconstant invertible function is an obstruction: every locally
nilpotent field must annihilate it.
Run with:  python3 demos/04_pairs_and_obstructions.py
"""

from lndlab.catalog import affine_space, bundle_by_name, gl2, sl2
from lndlab.denslab import check_compatible_pair, lnd_annihilates_units, verify_unit_witness

# -- the model pair on C^2 ------------------------------------------------------

c2 = affine_space(2)
dx, dy = c2.lnds["dx"], c2.lnds["dy"]
report = check_compatible_pair(dx, dy, ["1"], deg_bound=3)
print("C^2, pair (d/dx, d/dy), bound 3:")
print(f"  h = {report.h}  (dx^2 h = 0, dy h = 0, dx h != 0)")
print(f"  ideal containment: {report.ideal_contained}")
print(f"  compatible at bound: {report.is_compatible_at_bound}")

# A degenerate pair fails: products of ker(dy) with itself never reach x*y.
bad = check_compatible_pair(dy, dy, ["x"], deg_bound=2)
print(f"degenerate pair (d/dy, d/dy): compatible = {bad.is_compatible_at_bound}")

# -- a surface pair --------------------------------------------------------------

surface = bundle_by_name("danielewski:p=z1^2+z2^2-1:n=2")
theta = surface.lnds["theta1_u"]
xi = surface.lnds["theta2_v"]
report = check_compatible_pair(theta, xi, list(surface.ideal_candidates), 2)
print(f"\nDanielewski n=2 pair: h = {report.h}")
print(f"  containment of u*z1 multiples at bound 2: {report.ideal_contained}")
print("  (False here means: not verified at this bound, nothing more)")

# -- units: GL2 versus SL2 --------------------------------------------------------

general = gl2()
(f, g), = general.units
print(f"\nGL2 unit witness ({f}) * ({g}) = 1:", verify_unit_witness(general.variety, f, g))
for name, cert in sorted(general.lnds.items()):
    print(f"  {name} annihilates the unit:", lnd_annihilates_units(cert, f, g))

special = sl2()
print("\nSL2 candidates never verify (the determinant is constant here):")
for f_src, g_src in [("a*d - b*c", "1"), ("a", "d")]:
    print(f"  ({f_src}, {g_src}):", verify_unit_witness(special.variety, f_src, g_src))
