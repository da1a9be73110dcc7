"""Acyclic networks: topological order, min cuts, error-pattern ranks and path families."""

from lnec import fixtures
from lnec.network import Target, disjoint_path_family, enumerate_R, min_cut, pattern_rank

net = fixtures.three_path()
print("three disjoint two-hop paths from s to t, rate", net.rate)
print("canonical channel order:", net.order)
print("min cut to t:", min_cut(net, "t"))

# a pattern's rank counts how many independent error sources it really injects
print("rank of {e11, e12} at t:", pattern_rank(net, ["e11", "e12"], "t"))
print("rank of {e11, e21} at t:", pattern_rank(net, ["e11", "e21"], "t"))

R = enumerate_R(net, "t", 2)
print(f"{len(R)} patterns of size and rank 2, e.g.", R[:3])

family = disjoint_path_family(net, "t", ["e11", "e21"])
print("disjoint paths for that pattern:", family.paths)

bf = fixtures.butterfly()
print("butterfly cuts:", {t: min_cut(bf, t) for t in bf.non_source})
print("cut to the sink pair:", min_cut(bf, Target.nodes(["t1", "t2"])))
