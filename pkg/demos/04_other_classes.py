"""Broadcast, dispersion and generic MDS codes via network transforms."""

import warnings

from lnec import fixtures
from lnec.analyze import certify_mds
from lnec.construct import (
    broadcast_transform,
    construct_broadcast_mds,
    construct_dispersion_mds,
    construct_generic_mds,
    construct_multicast_mds,
)
from lnec.galois import FieldSpec

warnings.simplefilter("ignore")
F = FieldSpec(2, 4)

big, helpers = broadcast_transform(fixtures.butterfly())
print("broadcast transform adds helper nodes:", helpers)

stub = fixtures.stub()
m = construct_multicast_mds(stub, FieldSpec(3))
print("stub, multicast code: multicast MDS", certify_mds(m, "multicast")[0],
      "/ broadcast MDS", certify_mds(m, "broadcast")[0])
b = construct_broadcast_mds(stub, FieldSpec(3))
print("stub, broadcast code: broadcast MDS", certify_mds(b, "broadcast")[0])

diamond = fixtures.diamond()
d = construct_dispersion_mds(diamond, F)
print("diamond, dispersion code over all node collections:", certify_mds(d, "dispersion")[0])

g = construct_generic_mds(diamond, F)
print("diamond, generic code:")
for kind in ["multicast", "broadcast", "dispersion", "generic"]:
    print(f"  {kind:10s} MDS: {certify_mds(g, kind)[0]}")
