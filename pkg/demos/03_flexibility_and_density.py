"""Flexibility at points and bounded-degree density certificates.

Flexibility asks whether certified fields span the tangent space at a
point.  The saturation report asks a bounded version of the density
question: do brackets of overshear fields span all tangent fields up to
a degree bound?  certified=True is exact at the bound; False only means
"not verified here".
Run with:  python3 demos/03_flexibility_and_density.py
"""

from lndlab.catalog import affine_space, sl2
from lndlab.denslab import flexible_at, lie_saturate, overshear_generators

# -- flexibility on SL2 --------------------------------------------------------

bundle = sl2()
identity = (1, 0, 0, 1)

four = [bundle.lnds[k] for k in ("right_e12", "right_e21", "left_e12", "left_e21")]
report = flexible_at(bundle.variety, four, identity)
print("SL2, four one-sided fields at the identity:")
print(f"  rank {report.rank} of tangent dimension {report.tangent_dim}; spans: {report.spans}")

five = four + [bundle.lnds["left_eprime"]]
report = flexible_at(bundle.variety, five, identity)
print("adding the nilpotent-conjugate field:")
print(f"  rank {report.rank} of tangent dimension {report.tangent_dim}; spans: {report.spans}")

# -- density certificate on C^2 -------------------------------------------------

c2 = affine_space(2)
gens = []
for cert in c2.lnds.values():
    gens.extend(overshear_generators(cert, 3))
print(f"\nC^2: {len(gens)} overshear generators with multiplier degree <= 3")

report = lie_saturate(gens, target_deg=1, work_deg=3, max_len=2)
print(f"span {report.span_dim} of {report.target_dim} -> certified: {report.certified}")
print("witnesses replay exactly:", report.replay_witnesses())

# Show one witness: a target field written as a combination of Lie words.
witness = report.witnesses[0]
target = {v: str(img) for v, img in zip("xy", witness.target_images)}
print("first witness target:", target)

# -- the line is different -------------------------------------------------------

c1 = affine_space(1)
gens1 = overshear_generators(c1.lnds["dz"], 2)
print(f"\nC^1: generators {[str(g.f) for g in gens1]} times d/dz")
report1 = lie_saturate(gens1, target_deg=2, max_len=4)
print(f"span {report1.span_dim} of {report1.target_dim} -> certified: {report1.certified}")
print("(z^2 d/dz is out of reach of brackets of d/dz and z d/dz)")
