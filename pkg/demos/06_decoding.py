"""Sending a message through a noisy network and decoding it at the sink."""

import warnings

import numpy as np

from lnec import fixtures
from lnec.construct import construct_multicast_mds
from lnec.decode import correction_capability, decode_min_distance, transmit
from lnec.galois import FieldSpec

net = fixtures.three_path()
# GF(5) is below the sufficient size but happens to work here
warnings.simplefilter("ignore")
code = construct_multicast_mds(net, FieldSpec(5))
print("sink t corrects", correction_capability(code, "t"), "error(s)")

Z = np.zeros(len(net.order), dtype=int)
Z[net.index["e21"]] = 3
tx = transmit(code, [4], Z)
print("received at t:", tx.received("t"))
res = decode_min_distance(code, "t", tx.received("t"))
print("decoded:", res.status, res.message, "error located on", res.pattern)

Z[net.index["e31"]] = 1
res = decode_min_distance(code, "t", transmit(code, [4], Z).received("t"))
print("with two errors:", res.status, res.message)
