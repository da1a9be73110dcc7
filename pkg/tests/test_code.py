import itertools

import numpy as np
import pytest

from lnec import fixtures
from lnec.code import (
    LnecCode,
    error_space,
    extend_kernels,
    message_space,
    restrict_pattern,
    transfer_matrix,
    zero_kernels,
)
from lnec.construct import construct_multicast_mds, construct_random
from lnec.decode import transmit
from lnec.galois import FieldSpec, get_field
from lnec.network import Network, Target

F5 = get_field(FieldSpec(5))


def all_ones(net, field=F5):
    coeffs = {}
    for v in net.nodes:
        K = zero_kernels(net)
        if v in K:
            from lnec.code import kernel_rows
            for d in kernel_rows(net, v):
                for e in net.out_channels(v):
                    coeffs[(d, e)] = 1
    return LnecCode.from_coefficients(net, field, coeffs)


def unit(net, name):
    v = np.zeros(net.rate + len(net.order), dtype=np.int64)
    v[int(name[1:-1]) - 1 if name.endswith("'") else net.rate + net.index[name]] = 1
    return v


def test_zero_kernels_give_unit_vectors():
    net = fixtures.butterfly()
    code = LnecCode.zero(net, F5)
    assert np.array_equal(code.extended, np.vstack([np.zeros((2, 8), int), np.eye(8, dtype=int)]))
    assert np.array_equal(transfer_matrix(net, code.kernels, F5), code.extended)


def test_single_channel_kernel():
    net = Network(["s", "t"], [("e", "s", "t")], "s")
    code = LnecCode.from_coefficients(net, F5, {("d1'", "e"): 1})
    assert code.kernel("e").tolist() == [1, 1]


def test_three_path_all_ones():
    tp = fixtures.three_path()
    code = all_ones(tp)
    for i in (1, 2, 3):
        want = unit(tp, "d1'") + unit(tp, f"e{i}1") + unit(tp, f"e{i}2")
        assert code.kernel(f"e{i}2").tolist() == want.tolist()
    view = code.view("t")
    assert message_space(view).tolist() == [[1, 1, 1]]
    assert F5.rank(message_space(view)) == 1
    assert error_space(view, ["e11"]).tolist() == [[1, 0, 0]]
    assert error_space(view, []).shape == (0, 3)
    assert restrict_pattern(tp, code.kernel("e12"), ["e11"], "proj").tolist() == [1, 1]
    xi = code.view(Target.channels(["e11", "e21", "e31"]))
    assert xi.F.tolist() == [[1, 1, 1]]


def test_chain_transfer_example():
    net = fixtures.chain(2)
    code = all_ones(net)
    M = transfer_matrix(net, code.kernels, F5)
    assert M[:, 1].tolist() == [1, 1, 1]


def test_view_shapes():
    bf = fixtures.butterfly()
    code = all_ones(bf, get_field(FieldSpec(3)))
    assert code.view(["t1", "t2"]).matrix.shape == (10, 4)
    assert code.view(Target.channels(["e5"])).matrix[:, 0].tolist() == code.kernel("e5").tolist()
    with pytest.raises(KeyError):
        code.view("nope")
    with pytest.raises(ValueError):
        code.view(Target.channels([]))


def test_restrict_identities():
    tp = fixtures.three_path()
    code = construct_random(tp, FieldSpec(7), seed=3)
    for e in tp.order:
        v = code.kernel(e)
        for rho in [(), ("e11",), ("e21", "e32"), tuple(tp.order)]:
            keep = restrict_pattern(tp, v, rho, "keep")
            comp = restrict_pattern(tp, v, rho, "complement")
            assert np.array_equal(get_field(FieldSpec(7)).add(keep, comp), v)
        assert np.array_equal(restrict_pattern(tp, v, tp.order, "keep"), v)
        assert not restrict_pattern(tp, v, tp.order, "complement").any()
    with pytest.raises(ValueError):
        restrict_pattern(tp, code.kernel("e11"), [], "bogus")


@pytest.mark.parametrize("name", ["three_path", "butterfly", "diamond", "stub", "combination"])
def test_extend_matches_transfer_on_random_codes(name):
    net = fixtures.ALL[name]()
    for seed, spec in enumerate([FieldSpec(2), FieldSpec(3), FieldSpec(2, 4), FieldSpec(251)] * 3):
        code = construct_random(net, spec, seed)
        assert np.array_equal(extend_kernels(net, code.kernels, code.field),
                              transfer_matrix(net, code.kernels, code.field))


@pytest.mark.parametrize("name", ["three_path", "butterfly", "diamond", "stub"])
def test_kernel_support_invariant(name):
    net = fixtures.ALL[name]()
    code = construct_random(net, FieldSpec(2, 4), 11)
    for e in net.order:
        up = set(net.upstream_channels([e]))
        k = code.kernel(e)
        assert k[net.rate + net.index[e]] == 1
        for d in net.order:
            if d not in up:
                assert k[net.rate + net.index[d]] == 0


@pytest.mark.parametrize("name", ["three_path", "diamond", "stub"])
@pytest.mark.parametrize("spec", [FieldSpec(2), FieldSpec(3), FieldSpec(2, 2)], ids=str)
def test_decoding_equation_exhaustive(name, spec):
    net = fixtures.ALL[name]()
    code = construct_random(net, spec, 5)
    F = code.field
    n = len(net.order)
    for X in itertools.product(range(F.q), repeat=net.rate):
        for Z in itertools.product(range(F.q), repeat=n):
            tr = transmit(code, X, Z)
            for t in net.non_source:
                view = code.view(t)
                want = F.matmul(np.array(X + Z)[None, :], view.matrix)[0]
                assert np.array_equal(tr.received(t), want)


def test_dimension_bounds_hold():
    from lnec.network import min_cut, pattern_rank
    for name in ["three_path", "butterfly", "diamond"]:
        net = fixtures.ALL[name]()
        code = construct_random(net, FieldSpec(3), 1)
        for t in net.non_source:
            view = code.view(t)
            assert code.field.rank(view.F) <= min(net.rate, min_cut(net, t))
            for rho in itertools.combinations(net.order, 2):
                assert code.field.rank(error_space(view, rho)) <= min(2, pattern_rank(net, rho, t))


def test_constructed_codes_satisfy_kernel_invariants():
    code = construct_multicast_mds(fixtures.butterfly(), FieldSpec(3))
    net = code.network
    for e in net.order:
        assert code.kernel(e)[net.rate + net.index[e]] == 1
    assert np.array_equal(code.extended, transfer_matrix(net, code.kernels, code.field))


def test_kernels_are_validated():
    tp = fixtures.three_path()
    with pytest.raises(ValueError):
        LnecCode(tp, F5, {"s": [[7, 0, 0]]})
    with pytest.raises(KeyError):
        LnecCode(tp, F5, {"zz": [[1]]})
    code = all_ones(tp)
    with pytest.raises(ValueError):
        code.extended[0, 0] = 3
