"""
Cochains on a truncated building
================================

Balls in the building of PGL(3) over Q_2, and harmonic cochains on small
graphs.
"""

from fractions import Fraction

from phinforge.building import (
    Cochain,
    ball,
    cycle_graph,
    hodge_decompose,
    interior_faces,
    is_harmonic,
    res_gamma_is_bijective,
    standard_vertex,
)

# Vertices are homothety classes of lattices, kept in Hermite normal form.
b = ball(d=2, p=2, radius=1)
print("simplex counts", b.counts())
print("faces with a full star", len(interior_faces(b)))

# On the tree of PGL(2) the centre of a radius-one ball has three edges.
tree = ball(d=1, p=2, radius=1)
centre = standard_vertex(1)
star = Cochain.from_pointed(tree, 1, {(e, centre): x for e, x in zip(tree.simplices[1], [1, 2, -3])})
print("harmonic at the centre:", is_harmonic(star, tree, faces=[(centre,)]))

# A cycle carries one harmonic class, and every 1-cochain splits uniquely.
for n in range(3, 7):
    dec = hodge_decompose(cycle_graph(n))
    print(n, "harmonic", len(dec.harmonic), "exact", len(dec.exact), "direct", dec.is_direct_sum())

weights = [[Fraction(k + 1) if i == k else Fraction(0) for i in range(5)] for k in range(5)]
print("weighted inner product:", len(hodge_decompose(cycle_graph(5), weights).harmonic))
print("quotient map bijective:", res_gamma_is_bijective(cycle_graph(6), coeff_dim=2))
