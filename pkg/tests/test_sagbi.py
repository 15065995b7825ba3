import random

import pytest
from hypothesis import given, strategies as st

from quiver_sagbi.algebra import Variable, leading_monomial
from quiver_sagbi.sagbi import (
    KroneckerContext,
    PrimitivityTable,
    Subductor,
    enumerate_ss_pairs,
    exact_leading_terms,
    exponents_of_pair,
    is_primitive,
    kronecker22_family,
    leading_monomial_of_pair,
    max_degree_for_a,
    primitive_generators,
    subduce,
)
from quiver_sagbi.semiinvariants import semi_invariant
from quiver_sagbi.tableaux import LinkedPair, arrow_diagram, canonical_semistandard_link, has_backwards_arrow, has_downwards_arrow

from helpers import brute_force_ss_exponents

SHAPES = [(1, 2, 2, 1), (3, 2, 3, 1), (3, 3, 3, 1), (2, 2, 3, 2), (4, 2, 3, 1), (3, 2, 3, 2), (3, 3, 3, 2), (4, 2, 2, 3), (2, 1, 2, 2), (2, 2, 4, 1)]


def test_context_shapes():
    ctx = KroneckerContext(3, 2, 3, 2)
    assert (ctx.plus_cols, ctx.minus_cols, ctx.weight) == (4, 6, (-6, 4))
    assert KroneckerContext.from_a(3, 2, 2, "3/2").d == 3
    with pytest.raises(ValueError):
        KroneckerContext.from_a(3, 2, 2, "1/3")
    with pytest.raises(ValueError):
        KroneckerContext(0, 2, 2)
    assert max_degree_for_a(2, 2, "5/2") == 5 and max_degree_for_a(2, 3, 2) == 2


@pytest.mark.parametrize("shape", SHAPES)
def test_enumeration_matches_brute_force(shape):
    ctx = KroneckerContext(*shape)
    pairs = enumerate_ss_pairs(ctx)
    got = [exponents_of_pair(p) for p in pairs]
    assert len(set(got)) == len(got)
    assert set(got) == brute_force_ss_exponents(*shape)


@pytest.mark.parametrize("shape", SHAPES[:6])
def test_enumerated_pairs_are_semistandard_with_order_preserving_link(shape):
    for pair in enumerate_ss_pairs(KroneckerContext(*shape)):
        assert pair.is_semistandard()
        assert pair.link() == canonical_semistandard_link(pair.tplus_all(), pair.tminus_all())
        assert pair.weight.w == KroneckerContext(*shape).weight


def test_single_determinant_pair():
    pairs = enumerate_ss_pairs(KroneckerContext(1, 2, 2))
    assert len(pairs) == 1
    assert pairs[0].tplus(1).shorthand() == [[11], [12]]
    ring = pairs[0].space.ring
    expected = ring.var(Variable(1, 1, 1)) * ring.var(Variable(1, 2, 2))
    assert leading_monomial_of_pair(pairs[0]) == leading_monomial(expected)[0]


def test_unique_generator_of_two_arrows():
    ctx = KroneckerContext(2, 2, 3)
    target = ([[11, 11], [12, 21], [22, 22]], [[11, 11, 22], [12, 23, 23]])
    shorthand = [(p.tplus(1).shorthand(), p.tminus(0).shorthand()) for p in enumerate_ss_pairs(ctx)]
    assert target in shorthand
    pair = LinkedPair.kronecker(ctx.space, *target)
    ring = ctx.space.ring
    x = lambda a, r, c: ring.var(Variable(a, r, c))
    expected = x(1, 1, 1) ** 2 * x(1, 2, 2) * x(2, 2, 1) * x(2, 3, 2) ** 2
    m = leading_monomial_of_pair(pair)
    assert m == leading_monomial(expected)[0]
    assert leading_monomial(semi_invariant(pair))[0] == m


def test_leading_monomials_distinct():
    pairs = enumerate_ss_pairs(KroneckerContext(3, 2, 3))
    assert len(pairs) == 20
    assert len({leading_monomial_of_pair(p) for p in pairs}) == 20


def test_leading_monomial_requires_semistandard():
    ctx = KroneckerContext(2, 2, 2)
    pair = LinkedPair.kronecker(ctx.space, [[21], [12]], [[21], [12]])
    with pytest.raises(ValueError):
        leading_monomial_of_pair(pair)


@pytest.mark.parametrize("shape", [(3, 2, 3, 1), (2, 2, 2, 2), (3, 3, 3, 1), (2, 2, 3, 2)])
def test_exact_leading_terms_match_expansion(shape):
    pairs = enumerate_ss_pairs(KroneckerContext(*shape))
    sample = pairs if len(pairs) <= 25 else random.Random(7).sample(pairs, 25)
    for (m, c), pair in zip(exact_leading_terms(sample), sample):
        lm, lc = leading_monomial(semi_invariant(pair))
        assert m == lm == leading_monomial_of_pair(pair)
        assert c == lc != 0


# primitivity


def _six_arrow_pair(plus, minus):
    return LinkedPair.kronecker(KroneckerContext(6, 2, 2).space, plus, minus)


def test_factoring_leading_term():
    pair = _six_arrow_pair([[11, 31, 52], [21, 42, 62]], [[11, 22, 31], [42, 51, 62]])
    prim, split = is_primitive(pair)
    assert not prim
    freeze = lambda t: tuple(map(tuple, t.shorthand()))
    parts = {(freeze(p.tplus(1)), freeze(p.tminus(0))) for p in (split.left, split.right)}
    assert parts == {
        (((11, 52), (21, 62)), ((11, 22), (51, 62))),
        (((31,), (42,)), ((31,), (42,))),
    }
    assert leading_monomial_of_pair(split.left) + leading_monomial_of_pair(split.right) == leading_monomial_of_pair(pair)


def test_primitive_three_column_pair():
    pair = _six_arrow_pair([[11, 32, 52], [21, 41, 62]], [[11, 22, 42], [31, 51, 62]])
    assert is_primitive(pair) == (True, None)


def test_single_columns_are_primitive():
    table = PrimitivityTable(3, 2, 2, 1)
    for pair in enumerate_ss_pairs(KroneckerContext(3, 2, 2)):
        assert is_primitive(pair, table)[0]


@pytest.mark.parametrize("K,r0,r1,max_d", [(3, 2, 2, 3), (2, 3, 3, 2), (3, 2, 3, 2)])
def test_primitivity_against_brute_force(K, r0, r1, max_d):
    ss = {d: brute_force_ss_exponents(K, r0, r1, d) for d in range(1, max_d + 1)}
    report = primitive_generators(K, r0, r1, max_d)
    got = {exponents_of_pair(p) for p in report.generators}
    expected = set()
    for d in range(1, max_d + 1):
        products = {tuple(a + b for a, b in zip(u, v)) for d1 in range(1, d) for u in ss[d1] for v in ss[d - d1]}
        expected |= ss[d] - products
    assert got == expected


def test_small_counts():
    assert primitive_generators(2, 2, 3, 2).counts == {(-3, 2): 1, (-6, 4): 0}
    assert primitive_generators(3, 2, 3, 2).counts == {(-3, 2): 20, (-6, 4): 0}


def test_report_json_shape():
    data = primitive_generators(2, 2, 3, 2).to_dict()
    assert data["counts"] == [
        {"weight": [-3, 2], "primitive": 1, "semistandard": len(brute_force_ss_exponents(2, 2, 3, 1))},
        {"weight": [-6, 4], "primitive": 0, "semistandard": len(brute_force_ss_exponents(2, 2, 3, 2))},
    ]
    assert len(data["generators"]) == 1


# the (2,2) family


def test_family_single_arrow():
    fam = kronecker22_family(1)
    assert len(fam) == 1 and fam[0].tplus(1).shorthand() == [[11], [12]]


@pytest.mark.parametrize("K", [2, 3, 4, 5])
def test_family_equals_primitive_generators(K):
    fam = kronecker22_family(K)
    gens = primitive_generators(K, 2, 2, max(1, K - 1) + 1).generators
    assert set(fam) == set(gens)
    assert len(fam) == len(set(fam))


@pytest.mark.parametrize("K", [2, 3, 4, 5])
def test_family_shape_and_arrows(K):
    for pair in kronecker22_family(K):
        assert pair.is_semistandard()
        assert pair.plus_shape[1] <= max(1, K - 1)
        for side in "+-":
            arrows = arrow_diagram(pair, side)
            assert not has_backwards_arrow(arrows) and not has_downwards_arrow(arrows)


# subduction


@pytest.fixture(scope="module")
def k3_subductor():
    gens = primitive_generators(3, 2, 3, 2).generators
    return gens, Subductor(gens)


def test_product_of_generators_subduces(k3_subductor):
    gens, sub = k3_subductor
    f = sub.polys[0] * sub.polys[7]
    res = sub.subduce(f)
    assert not res.remainder.terms and len(res.trace) >= 1
    assert res.trace[0][2] == (0, 7)


def test_non_primitive_pair_subduces_with_factorization():
    pair = _six_arrow_pair([[11, 31, 52], [21, 42, 62]], [[11, 22, 31], [42, 51, 62]])
    gens = kronecker22_family(6)
    res = subduce(semi_invariant(pair), gens)
    assert not res.remainder.terms
    assert len(res.trace[0][2]) == 2


def test_subduction_leaves_non_members():
    ctx = KroneckerContext(3, 2, 3)
    gens = primitive_generators(3, 2, 3, 1).generators
    x = ctx.space.ring.var(0)
    res = subduce(x * x, gens)
    assert res.remainder == x * x and not res.trace


@given(st.lists(st.integers(0, 19), min_size=1, max_size=2), st.integers(-3, 3).filter(bool))
def test_scaled_products_subduce(k3_subductor, idx, scale):
    _, sub = k3_subductor
    f = sub.polys[idx[0]] * scale
    for i in idx[1:]:
        f = f * sub.polys[i]
    assert not sub.subduce(f).remainder.terms
