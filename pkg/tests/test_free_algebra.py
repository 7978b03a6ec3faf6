import numpy as np
import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st
from sympy.polys.matrices import DomainMatrix

from gstower.errors import CapacityError, NonUnitError, ParameterError
from gstower.free_algebra import (
    AboveTruncation,
    FpSubspace,
    TruncatedSeries,
    lowest_degree,
    monomial_basis,
    rref_mod_p,
    series_add,
    series_inverse,
    series_mul,
    subspace_insert,
)

from .oracles import dict_add, dict_mul


def S(coeffs, d=2, N=4, p=3):
    return TruncatedSeries(d, N, p, coeffs)


def series_dicts(d, N, p, unit=False):
    mono = st.lists(st.integers(0, d - 1), max_size=N).map(tuple)
    body = st.dictionaries(mono, st.integers(0, p - 1), max_size=8)
    if unit:
        return body.map(lambda m: {**m, (): (m.get((), 0) % p) or 1})
    return body


def clean(m, p):
    return {k: v % p for k, v in m.items() if v % p}


# monomial basis ------------------------------------------------------------------

def test_basis_is_degree_major_lex():
    b = monomial_basis(2, 3)
    monos = [b.monomial(i) for i in range(b.dim)]
    assert monos[:7] == [(), (0,), (1,), (0, 0), (0, 1), (1, 0), (1, 1)]
    assert monos == sorted(monos, key=lambda m: (len(m), m))
    assert all(b.index(m) == i for i, m in enumerate(monos))


@pytest.mark.parametrize("d,N,dim", [(2, 12, 8191), (3, 8, 9841), (1, 5, 6)])
def test_ambient_dimensions(d, N, dim):
    assert monomial_basis(d, N).dim == dim


@pytest.mark.parametrize("d,N", [(2, 13), (3, 9), (4, 2)])
def test_capacity_rejected(d, N):
    with pytest.raises(CapacityError):
        TruncatedSeries.one(d, N, 3)


@pytest.mark.parametrize("p", [2, 9, 1, -3])
def test_bad_prime(p):
    with pytest.raises(ParameterError):
        TruncatedSeries.one(2, 3, p)


# arithmetic examples -------------------------------------------------------------

def test_add_examples():
    x = S({(): 1, (0,): 1})
    assert (x + x * 2).is_zero()
    assert series_add(x, TruncatedSeries.zero(2, 4, 3)) == x
    s = S({(0,): 1}) + S({(1,): 1})
    assert s.coeffs == {(0,): 1, (1,): 1}


def test_zero_series_has_empty_map():
    assert TruncatedSeries.zero(2, 4, 3).coeffs == {}
    assert S({(0,): 3}).coeffs == {}


def test_mul_examples():
    a = S({(): 1, (0,): 1})
    b = S({(): 1, (1,): 1})
    assert series_mul(a, b).coeffs == {(): 1, (0,): 1, (1,): 1, (0, 1): 1}
    top = S({(0,) * 4: 1})
    assert (top * S({(0,): 1})).is_zero()
    assert (a**3).coeffs == {(): 1, (0, 0, 0): 1}
    assert (a * a * a).coeffs == {(): 1, (0, 0, 0): 1}


def test_mismatched_parameters():
    with pytest.raises(ParameterError):
        S({(): 1}) + S({(): 1}, N=5)
    with pytest.raises(ParameterError):
        S({(): 1}) * S({(): 1}, p=5)


def test_inverse_examples():
    one = TruncatedSeries.one(2, 4, 3)
    assert series_inverse(one) == one
    inv = series_inverse(S({(): 1, (0,): 1}))
    assert inv.coeffs == {(0,) * k: (-1) ** k % 3 for k in range(5)}
    with pytest.raises(NonUnitError):
        S({(0,): 1}).inverse()


def test_lowest_degree_examples():
    assert lowest_degree(S({(0, 1): 1, (0, 0, 0): 1})) == 2
    assert lowest_degree(TruncatedSeries.zero(2, 4, 3)) == AboveTruncation(5)
    x = S({(): 1, (0,): 1}) ** 3 - TruncatedSeries.one(2, 4, 3)
    assert lowest_degree(x) == 3


# properties against the dict oracle ------------------------------------------------

@settings(max_examples=60, deadline=None)
@given(series_dicts(2, 5, 5), series_dicts(2, 5, 5))
def test_mul_matches_dict_oracle(a, b):
    x, y = TruncatedSeries(2, 5, 5, a), TruncatedSeries(2, 5, 5, b)
    assert (x * y).coeffs == dict_mul(clean(a, 5), clean(b, 5), 5, 5)
    assert (x + y).coeffs == dict_add(clean(a, 5), clean(b, 5), 5)


@settings(max_examples=40, deadline=None)
@given(series_dicts(3, 4, 3), series_dicts(3, 4, 3), series_dicts(3, 4, 3))
def test_associative_and_distributive(a, b, c):
    x, y, z = (TruncatedSeries(3, 4, 3, m) for m in (a, b, c))
    assert (x * y) * z == x * (y * z)
    assert x * (y + z) == x * y + x * z
    assert (x + y) * z == x * z + y * z


@settings(max_examples=40, deadline=None)
@given(series_dicts(2, 6, 3), series_dicts(2, 6, 3), st.integers(1, 5))
def test_truncation_coherence(a, b, M):
    x, y = TruncatedSeries(2, 6, 3, a), TruncatedSeries(2, 6, 3, b)
    assert (x * y).truncate(M) == x.truncate(M) * y.truncate(M)


@settings(max_examples=200, deadline=None)
@given(series_dicts(2, 5, 7, unit=True))
def test_inverse_round_trip(a):
    x = TruncatedSeries(2, 5, 7, a)
    one = TruncatedSeries.one(2, 5, 7)
    inv = x.inverse()
    assert x * inv == one and inv * x == one
    assert inv.inverse() == x


@settings(max_examples=80, deadline=None)
@given(series_dicts(2, 6, 3), series_dicts(2, 6, 3))
def test_lowest_degree_of_product(a, b):
    x, y = TruncatedSeries(2, 6, 3, a), TruncatedSeries(2, 6, 3, b)
    lx, ly, lxy = lowest_degree(x), lowest_degree(y), lowest_degree(x * y)
    if isinstance(lx, AboveTruncation) or isinstance(ly, AboveTruncation) or lx + ly > 6:
        assert isinstance(lxy, AboveTruncation)
        return
    # leading forms live in a free algebra (no zero divisors), so equality holds
    assert lxy == lx + ly


def test_lowest_degree_lower_bound_branch():
    # product of leading forms vanishes only through truncation here
    x = S({(0, 0): 1}, N=3)
    y = S({(1, 1): 1}, N=3)
    assert isinstance(lowest_degree(x * y), AboveTruncation)


# rank engine -----------------------------------------------------------------------

def sympy_rank(m, p):
    if len(m) == 0:
        return 0
    dm = DomainMatrix([[sympy.GF(p)(int(v)) for v in row] for row in m], np.shape(m), sympy.GF(p))
    return dm.rank()


def test_subspace_insert_examples():
    space = FpSubspace(100, 3)
    e1 = np.zeros(100, dtype=np.int64)
    e1[1] = 1
    space2, ins = subspace_insert(space, e1)
    assert ins and space2.rank == 1 and space.rank == 0
    space3, ins = subspace_insert(space2, e1)
    assert not ins and space3.rank == 1
    rng = np.random.default_rng(7)
    vecs = rng.integers(0, 3, size=(300, 100))
    for v in vecs:
        space3, _ = subspace_insert(space3, v)
    assert space3.rank == 100 == sympy_rank(np.vstack([vecs, e1]), 3)


def test_dimension_mismatch():
    with pytest.raises(ParameterError):
        FpSubspace(10, 3).insert(np.ones(9, dtype=np.int64))


@pytest.mark.parametrize("shape,p,density", [((60, 40), 3, 0.3), ((130, 90), 5, 0.05), ((200, 64), 7, 0.5)])
def test_rref_matches_sympy(shape, p, density):
    rng = np.random.default_rng(sum(shape) + p)
    m = rng.integers(0, p, size=shape) * (rng.random(shape) < density)
    E, piv, rest = rref_mod_p(m, p)
    assert len(piv) == sympy_rank(m, p)
    assert rest.shape[0] == 0
    assert np.all(np.diff(piv) > 0)
    assert np.array_equal(E[:, piv], np.eye(len(piv)))
    # every input row is in the row space of E
    space = FpSubspace.from_rref(E, piv, p)
    assert not space.reduce(m).any()


def test_rref_respects_limit():
    rng = np.random.default_rng(3)
    m = rng.integers(0, 3, size=(120, 30))
    m[:, :5] = 0
    m[:50, :5] = rng.integers(0, 3, size=(50, 5))
    E, piv, rest = rref_mod_p(m, 3, limit=5)
    assert np.all(piv < 5)
    assert not np.mod(rest[:, :5], 3).any()
    assert len(piv) + sympy_rank(rest, 3) == sympy_rank(m, 3)


@settings(max_examples=30, deadline=None)
@given(st.lists(st.lists(st.integers(0, 4), min_size=12, max_size=12), min_size=1, max_size=30))
def test_membership_stable(vectors):
    space = FpSubspace(12, 5)
    for v in vectors:
        first = space.insert(v)
        assert not space.insert(v)
        assert space.contains(v)
        assert isinstance(first, bool)
    assert space.rank == sympy_rank(vectors, 5)
    rows = space.rows
    assert np.all(np.diff(space.pivots) > 0)
    assert np.array_equal(rows[:, space.pivots], np.eye(space.rank, dtype=np.int64))
