"""Deterministic and randomized construction of a multicast MDS code."""

import warnings

from lnec import fixtures
from lnec.analyze import certify_mds, min_distance
from lnec.construct import FieldTooSmall, construct_multicast_mds, field_size_bounds
from lnec.galois import FieldSpec

net = fixtures.three_path()
bounds = field_size_bounds(net)
print("sufficient multicast field size: more than", bounds["multicast"].tight)

code = construct_multicast_mds(net, FieldSpec(2, 4))
for e in net.order:
    print(f"  extended kernel of {e}: {code.kernel(e)}")
rep = min_distance(code, "t")
print(f"distance at t: {rep.d} (Singleton bound {rep.bound})")
print("certified multicast MDS:", certify_mds(code, "multicast")[0])

rand = construct_multicast_mds(net, FieldSpec(2, 8), method="random", seed=3)
print("random-choice variant certified:", certify_mds(rand, "multicast")[0])

# too small a field: the choice step runs out of candidates and says where
with warnings.catch_warnings():
    warnings.simplefilter("ignore")
    try:
        construct_multicast_mds(fixtures.combination(), FieldSpec(2))
    except FieldTooSmall as exc:
        print("GF(2) on the combination network:", exc)
