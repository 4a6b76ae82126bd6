"""
Residues on a generalized annulus
=================================

Laurent polynomials in a bounded window, logarithmic forms and the top
residue.
"""

from phinforge.residue import (
    LaurentWindow,
    LogForm,
    annulus_top_cohomology_dim,
    dform,
    residue,
    twist_coordinates,
)

d, W = 2, 3
top = LogForm.dlog_wedge(d, W)
print("residue of dlog T1 ^ dlog T2:", residue(top))

# Exact forms never reach the constant term of the top component.
eta = LogForm(d, W, 1, {
    (1,): LaurentWindow(d, W, {(0, 2): 5, (1, -1): 3}),
    (2,): LaurentWindow(d, W, {(-2, 0): 1, (0, 0): 7}),
})
print("residue of d(eta):", residue(dform(eta)))

# Changing coordinates by units leaves the residue untouched.
f = LaurentWindow(d, W, {(0, 0): 4, (1, -1): 2, (-1, 0): 1})
omega = top.multiply(f)
units = [LaurentWindow(d, W, {(0, 0): 2, (1, 0): 1}), LaurentWindow(d, W, {(0, 0): -1, (0, 1): 3})]
print("before:", residue(omega), " after:", residue(twist_coordinates(omega, units)))

for dim in (1, 2):
    print(f"d = {dim}: top cohomology of the window", [annulus_top_cohomology_dim(dim, w) for w in range(1, 5)])
