"""
K-theory of projective spaces
=============================

Builds the presentation for CP^1..CP^4 from their simplices, eliminates the
linear relations and compares with the classical answer Z[x^±]/(1 - x^-1)^(n+1).
"""
from ktoric import eliminate_J, ordinary_k_rank, presentation
from ktoric.fixtures import projective_space

for n in range(1, 5):
    P = projective_space(n)
    pres = presentation(P)
    red = eliminate_J(pres)
    print(f"CP^{n}: {P.nfacets} facets, non-face {[sorted(i + 1 for i in S) for S in pres.nonfaces]}")
    print("   I =", pres.I_gens[0].render())
    print("   after J:", red.to_dict()["relations"][0])
    print("   rank K^0 =", ordinary_k_rank(P))
