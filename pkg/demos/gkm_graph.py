"""
GKM graphs and Morse bases
==========================

Restricts Kirwan classes of CP^2 to its three fixed points, checks the edge
congruences, and prints the triangular restriction matrix of the Morse
basis that certifies the rank.
"""
from ktoric import build_gkm_graph, equivariant_rank_certificate, gamma_subring_contains, restrict_class
from ktoric.fixtures import projective_space
from ktoric.ring import monomial

P = projective_space(2)
graph = build_gkm_graph(P)
print("vertices:", {v: tuple(map(str, graph.points[v])) for v in graph.vertices})
print("edges:", graph.edges)

for exp in [(1, 0, 0), (0, 2, -1), (-1, -1, 3)]:
    h = restrict_class(P, monomial(exp))
    print(f"x^{exp} restricts to", h.to_dict(), "| in Gamma:", gamma_subring_contains(graph, h))

cert = equivariant_rank_certificate(P)
print("order:", cert.order)
for row in cert.to_dict()["matrix"]:
    print("   ", row)
print("valid certificate, rank", cert.rank, ":", cert.valid)
