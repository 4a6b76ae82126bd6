"""
Monodromy of a cycle of rational curves
=======================================

The weight double complex of a degenerating elliptic curve whose special
fibre is an n-gon, compared with the connecting homomorphism.
"""

from phinforge.steenbrink import (
    build_A,
    cech_e1_dims,
    monodromy_via_connecting,
    nu_induced,
    ss_degenerates_by_count,
    tate_datum,
    torus_datum,
    total_cohomology_dims,
    verify_resmono,
)

for n in range(3, 7):
    datum = tate_datum(n)
    b = build_A(datum)
    n_conn = monodromy_via_connecting(datum)[1]
    n_nu = nu_induced(datum)[1]
    report = verify_resmono(datum)
    shown = [[str(x) for x in row] for row in n_conn]
    print(f"n = {n}: H = {total_cohomology_dims(datum)}, N = {shown}, nu agrees: {n_conn == n_nu}, "
          f"residue sign {report.sign}, total dims {[b.total_dim(k) for k in b.total_degrees()]}")

# The Cech page of the cycle is larger than its abutment.
datum = tate_datum(4)
print("E1 degenerates:", ss_degenerates_by_count(cech_e1_dims(datum), total_cohomology_dims(datum)))

# A triangulated torus gives a two-dimensional example with N^2 != 0.
torus = torus_datum(3, 3)
report = verify_resmono(torus)
print("torus H =", total_cohomology_dims(torus), "sign", report.sign)
