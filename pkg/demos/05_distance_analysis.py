"""Regularity, minimum distance and Singleton slack for random codes."""

from collections import Counter

from lnec import fixtures
from lnec.analyze import classify, min_distance
from lnec.construct import construct_random
from lnec.galois import FieldSpec

net = fixtures.three_path()
for spec in [FieldSpec(2), FieldSpec(2, 8)]:
    slack = Counter()
    for seed in range(100):
        code = construct_random(net, spec, seed)
        if classify(code, levels=["nodes"]).regular:
            slack[min_distance(code, "t").slack] += 1
        else:
            slack["irregular"] += 1
    print(f"GF({spec.order}) slack histogram over 100 codes:", dict(slack))

code = construct_random(fixtures.butterfly(), FieldSpec(5), 1)
rep = min_distance(code, "t1")
print("butterfly t1:", rep.to_json())
