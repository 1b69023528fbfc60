"""
Hirzebruch surfaces
===================

The surfaces H_a have four facets and two minimal non-faces.  This script
prints the critical values of |Phi|^2 with their negative coordinate sets,
and shows how the pairings of xi_A with the weights alpha_i behave on the
complement of each non-face.
"""
from ktoric import build_delzant_data, critical_values_Z, verify_presentation
from ktoric.fixtures import hirzebruch
from ktoric.kirwan import nonface_duality

for a in (0, 1, 2, 3):
    P = hirzebruch(a)
    D = build_delzant_data(P)
    print(f"H_{a}: alphas {D.alphas}, iota^T eta = {tuple(map(str, D.iota_star_eta))}")
    for c in critical_values_Z(D):
        print(f"   xi = {tuple(map(str, c.xi))}  S = {sorted(i + 1 for i in c.negative_set)}")
    for row in nonface_duality(D):
        pairs = [str(row["pairings"][i]) for i in range(D.N)]
        print(f"   non-face {sorted(i + 1 for i in row['S'])}: pairings {pairs}")
    print("   fixed-point cross-check passes:", verify_presentation(P).passed)
