import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import SMALL_FIELDS, rowspace
from lnec.galois import (
    GF,
    FieldError,
    FieldSpec,
    field_op,
    get_field,
    is_irreducible_gf2,
    mat_rank,
    member_of_subspace_sum,
    spaces_intersect_nontrivially,
    supported_orders,
)


def schoolbook(a, b, modulus):
    """Carry-less multiply then reduce; independent of the table implementation."""
    r = 0
    while b:
        if b & 1:
            r ^= a
        a <<= 1
        b >>= 1
    deg = modulus.bit_length() - 1
    while r.bit_length() - 1 >= deg:
        r ^= modulus << (r.bit_length() - 1 - deg)
    return r


def test_prime_field_examples():
    F = get_field(FieldSpec(5))
    assert field_op(3, 4, "mul", F) == 2
    assert field_op(1, 2, "div", F) == 3


def test_gf16_example_against_schoolbook():
    F = get_field(FieldSpec(2, 4, 0b10011))
    assert field_op(0x02, 0x08, "mul", F) == 0x03
    assert schoolbook(0x02, 0x08, 0b10011) == 0x03


@pytest.mark.parametrize("m", [2, 3, 4, 8])
def test_binary_tables_match_schoolbook(m):
    F = get_field(FieldSpec(2, m))
    rng = np.random.default_rng(m)
    a = rng.integers(0, F.q, 300)
    b = rng.integers(0, F.q, 300)
    got = F.mul(a, b)
    want = [schoolbook(int(x), int(y), F.spec.modulus) for x, y in zip(a, b)]
    assert got.tolist() == want


def test_division_by_zero_is_an_error():
    F = get_field(FieldSpec(7))
    with pytest.raises(FieldError):
        field_op(3, 0, "div", F)
    with pytest.raises(FieldError):
        field_op(9, 1, "add", F)
    with pytest.raises(FieldError):
        field_op(1, 1, "pow", F)


@pytest.mark.parametrize("spec", SMALL_FIELDS + [FieldSpec(2, 4, 0b11001)], ids=str)
def test_field_axioms_exhaustive(spec):
    F = GF(spec)
    q = F.q
    a, b, c = np.meshgrid(np.arange(q), np.arange(q), np.arange(q), indexing="ij")
    assert np.array_equal(F.add(a, b), F.add(b, a))
    assert np.array_equal(F.mul(a, b), F.mul(b, a))
    assert np.array_equal(F.add(F.add(a, b), c), F.add(a, F.add(b, c)))
    assert np.array_equal(F.mul(F.mul(a, b), c), F.mul(a, F.mul(b, c)))
    assert np.array_equal(F.mul(a, F.add(b, c)), F.add(F.mul(a, b), F.mul(a, c)))
    x = np.arange(q)
    assert np.all(F.add(x, F.neg(x)) == 0)
    assert np.all(F.sub(F.add(x, 5 % q), 5 % q) == x)
    nz = np.arange(1, q)
    assert np.all(F.mul(nz, F.inv(nz)) == 1)
    num, den = np.meshgrid(x, nz, indexing="ij")
    assert np.array_equal(F.mul(F.div(num, den), den), num)
    assert np.array_equal(F.div(num, den), F.mul(num, F.inv(den)))


def test_rank_examples():
    F2, F5 = get_field(FieldSpec(2)), get_field(FieldSpec(5))
    assert mat_rank(F2, np.eye(3, dtype=int)) == 3
    assert mat_rank(F5, [[1, 1, 1]]) == 1
    assert mat_rank(F2, [[1, 1, 0], [0, 1, 1], [1, 0, 1]]) == 2


def test_intersection_examples():
    F2, F3, F5 = (get_field(FieldSpec(p)) for p in (2, 3, 5))
    assert not spaces_intersect_nontrivially(F2, [[1, 0]], [[0, 1]])
    assert spaces_intersect_nontrivially(F5, [[1, 1, 1]], np.eye(3, dtype=int))
    A, B = [[1, 1, 0]], [[1, 0, 0], [0, 1, 0]]
    assert spaces_intersect_nontrivially(F3, A, B)
    # oracle: enumerate rowspace(A) \ {0} and test membership in rowspace(B)
    assert any(v in rowspace(F3, B) for v in rowspace(F3, A) - {(0, 0, 0)})
    with pytest.raises(FieldError):
        spaces_intersect_nontrivially(F3, [[1, 0]], [[1, 0, 0]])


def test_member_examples():
    F2, F3 = get_field(FieldSpec(2)), get_field(FieldSpec(3))
    assert member_of_subspace_sum(F2, [0, 0, 0], [[1, 0, 1]], [[0, 1, 1]])
    assert not member_of_subspace_sum(F2, [0, 0, 1], [[1, 0, 0]], [[0, 1, 0]])
    assert member_of_subspace_sum(F3, [1, 2, 0], [[1, 0, 0]], [[0, 1, 0]])
    with pytest.raises(FieldError):
        member_of_subspace_sum(F3, [1, 2], [[1, 0, 0]], [[0, 1, 0]])


small = st.sampled_from([FieldSpec(2), FieldSpec(3), FieldSpec(5), FieldSpec(2, 2)])


@st.composite
def matrices(draw, spec=None, max_rows=4, max_cols=4):
    spec = spec or draw(small)
    q = spec.order
    r = draw(st.integers(1, max_rows))
    c = draw(st.integers(1, max_cols))
    vals = draw(st.lists(st.integers(0, q - 1), min_size=r * c, max_size=r * c))
    return spec, np.array(vals, dtype=np.int64).reshape(r, c)


@settings(max_examples=150, deadline=None)
@given(matrices(max_rows=5, max_cols=5))
def test_rank_transpose(sm):
    spec, M = sm
    F = get_field(spec)
    assert F.rank(M) == F.rank(M.T) <= min(M.shape)


@settings(max_examples=100, deadline=None)
@given(small, st.data())
def test_intersection_agrees_with_enumeration(spec, data):
    F = get_field(spec)
    cols = data.draw(st.integers(1, 4))
    _, A = data.draw(matrices(spec, max_rows=2, max_cols=cols).filter(lambda x: x[1].shape[1] == cols))
    _, B = data.draw(matrices(spec, max_rows=2, max_cols=cols).filter(lambda x: x[1].shape[1] == cols))
    zero = tuple([0] * cols)
    want = bool((rowspace(F, A) & rowspace(F, B)) - {zero})
    assert spaces_intersect_nontrivially(F, A, B) == want


@settings(max_examples=100, deadline=None)
@given(small, st.data())
def test_member_agrees_with_enumeration(spec, data):
    F = get_field(spec)
    cols = data.draw(st.integers(1, 4))
    U = data.draw(matrices(spec, max_rows=2, max_cols=cols).filter(lambda x: x[1].shape[1] == cols))[1]
    W = data.draw(matrices(spec, max_rows=2, max_cols=cols).filter(lambda x: x[1].shape[1] == cols))[1]
    v = np.array(data.draw(st.lists(st.integers(0, spec.order - 1), min_size=cols, max_size=cols)))
    want = tuple(int(x) for x in v) in rowspace(F, np.vstack([U, W]))
    assert member_of_subspace_sum(F, v, U, W) == want


@pytest.mark.parametrize("spec", [FieldSpec(2), FieldSpec(7), FieldSpec(2, 4), FieldSpec(2, 8)], ids=str)
def test_rank_batch_matches_rank(spec):
    F = get_field(spec)
    rng = np.random.default_rng(1)
    S = rng.integers(0, F.q, (300, 4, 5))
    S[::4, 3] = S[::4, 0]
    S[::7] = 0
    assert F.rank_batch(S).tolist() == [F.rank(m) for m in S]


def test_solve_left_and_nullspace():
    F = get_field(FieldSpec(7))
    A = np.array([[1, 2, 3], [2, 4, 6], [0, 1, 5]])
    b = F.matmul(np.array([[1, 0, 1]]), A)[0]
    y, kernel = F.solve_left(A, b)
    assert np.array_equal(F.matmul(y[None, :], A)[0], b)
    assert kernel.shape[0] == 1 and not F.matmul(kernel, A).any()
    y, _ = F.solve_left(A, [0, 0, 1])
    assert y is None
    N = F.nullspace(A)
    assert not F.matmul(A, N.T).any() and N.shape[0] == 1


def test_fieldspec_validation_and_json():
    assert FieldSpec.of_order(16) == FieldSpec(2, 4)
    assert FieldSpec(2, 4).to_json() == {"p": 2, "m": 4, "modulus": [1, 1, 0, 0, 1]}
    assert FieldSpec(2, 8).modulus == 0x11B
    spec = FieldSpec(2, 4, 0b11001)
    assert FieldSpec.from_json(spec.to_json()) == spec
    for bad in [dict(p=4), dict(p=3, m=2), dict(p=2, m=4, modulus=0b10101), dict(p=2, m=17),
                dict(p=65537)]:
        with pytest.raises(FieldError):
            FieldSpec(**bad)
    with pytest.raises(FieldError):
        FieldSpec.of_order(6)


def test_irreducibility_check():
    # degree-4 irreducibles over GF(2): x^4+x+1, x^4+x^3+1, x^4+x^3+x^2+x+1
    irreducible = {m for m in range(16, 32) if is_irreducible_gf2(m)}
    assert irreducible == {0b10011, 0b11001, 0b11111}


def test_supported_orders():
    orders = supported_orders(16)
    assert orders == [2, 3, 4, 5, 7, 8, 11, 13, 16]
    assert 65521 in supported_orders()
