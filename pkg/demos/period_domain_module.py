"""
Filtered (phi, N)-modules from a highest weight
===============================================

Build the module attached to a weight of GL(3), then look at its
invariants and filtrations.
"""

from phinforge.drinfeld import DrinfeldParams, build_D, verify_dual_pair, verify_module
from phinforge.phin import is_weakly_admissible, monodromy_graded_dims, t_H, t_N
from phinforge.repbuilder import build_irrep, weight_grading
from phinforge.scalars import FieldParams
from phinforge.weights import HighestWeight, hodge_jumps, mu_of, weight_from_mu

lam = HighestWeight((2, 1, 0))

# The irreducible representation sits inside the third tensor power of Q^3.
rep = build_irrep(lam)
print("dimension", rep.dim, "grading", weight_grading(rep))
print("Hodge jumps", hodge_jumps(lam))

# Every (weight, index) pair has a dictionary image that can be inverted.
for j in range(lam.d + 1):
    mu = mu_of(lam, j)
    print("j =", j, "->", mu.mu, "->", weight_from_mu(mu))

# Unramified quadratic base field over Q_2, multiplicity two.
dp = DrinfeldParams(FieldParams(p=2, e=1, f=2), lam, mu_value=2)
module = build_D(dp)
print("module dimension", module.dim)
print("t_H =", t_H(module), " t_N =", t_N(module))
print("monodromy graded dims", monodromy_graded_dims(module.n_lists()))

ok, witness = is_weakly_admissible(module)
print("weakly admissible:", ok, witness)

# Raising the filtration by one breaks the balance of the polygons.
shifted = module.with_hodge([h + 1 for h in module.hodge])
print("after shifting:", is_weakly_admissible(shifted))

for name, result in verify_module(module).items():
    print(f"{name:>18}: {result.ok}")
print("duality pairing:", verify_dual_pair(dp).ok)
