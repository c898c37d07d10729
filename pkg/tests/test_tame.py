import pytest
from hypothesis import given
from hypothesis import strategies as st

from tamegauge.core import Params, Weight, bc_weight, is_regular_weight, jset, size
from tamegauge.errors import (
    InvalidIndexError,
    KindError,
    NormFactorError,
    ScalarTypeError,
    UnsupportedError,
)
from tamegauge.tame import (
    CUSP,
    PS,
    all_cuspidal_types,
    all_types,
    bc_jset,
    bc_type,
    classify_cuspidal,
    iota,
    iota_p_tau,
    j_base,
    jh_factor,
    jh_factors,
    make_cuspidal_type,
    make_ps_type,
    p_tau,
    parse_type,
)


def cusp(params, c_digits, b=0):
    c = sum(ci * params.p**i for i, ci in enumerate(c_digits))
    return make_cuspidal_type(params, (params.q + 1) * b + 1 + c)


def p_tau_oracle(tau):
    """The two defining conditions, read off index by index on Python sets."""
    f, p, c = tau.f, tau.p, tau.c_digits
    out = []
    for bits in range(1 << f):
        J = {i for i in range(f) if bits >> i & 1}
        J0 = J ^ {f - 1} if tau.kind == CUSP else J
        bad = any(
            (j in J and (j - 1) % f not in J0 and c[j] == p - 1)
            or (j not in J and (j - 1) % f in J0 and c[j] == 0)
            for j in range(f)
        )
        if not bad:
            out.append(bits)
    return out


def central_exponent(w: Weight) -> int:
    """Exponent of the central character z -> z^k of a Serre weight."""
    q = w.p**w.f
    return (sum(s * w.p**j for j, s in enumerate(w.s)) + 2 * w.d) % (q - 1)


# -- construction ----------------------------------------------------------------


def test_ps_examples():
    assert make_ps_type(Params(5, 2), 7, 0).c_digits == (2, 1)
    assert make_ps_type(Params(5, 1), 2, 0).c_digits == (2,)
    with pytest.raises(ScalarTypeError):
        make_ps_type(Params(5, 2), 3, 3)


def test_cuspidal_examples():
    P = Params(5, 1)
    t = make_cuspidal_type(P, 3)
    assert (t.b, t.c, t.c_digits) == (0, 2, (2,))
    t = make_cuspidal_type(P, 1)
    assert (t.b, t.c) == (0, 0)
    with pytest.raises(NormFactorError):
        make_cuspidal_type(P, 6)


@pytest.mark.parametrize("p, f", [(3, 1), (3, 2), (5, 1), (5, 2), (7, 1), (7, 2), (5, 3)])
def test_cuspidal_decomposition_matches_search(p, f):
    params = Params(p, f, allow_p3=True)
    q = params.q
    table = {}
    for b in range(q - 1):
        for c in range(q):
            a = ((q + 1) * b + 1 + c) % (q * q - 1)
            assert a not in table, "decomposition not unique"
            table[a] = (b, c)
    assert len(table) == q * q - q
    for a in range(q * q - 1):
        if a % (q + 1) == 0:
            assert a not in table
            continue
        t = make_cuspidal_type(params, a)
        assert (t.b, t.c) == table[a]


def test_parse_type():
    P = Params(5, 2)
    assert parse_type("ps:7,0", P) == make_ps_type(P, 7, 0)
    assert parse_type("cusp:8", P) == make_cuspidal_type(P, 8)


# -- P_tau -------------------------------------------------------------------


def test_p_tau_examples():
    P = Params(5, 2)
    assert p_tau(make_ps_type(P, 7, 0)) == [0, 1, 2, 3]
    for c in (1, 2, 3):
        assert p_tau(make_ps_type(Params(5, 1), c, 0)) == [0, 1]
    # c = (0, 1): J = {1} fails the second condition at j = 0
    assert p_tau(make_ps_type(P, 5, 0)) == [jset([]), jset([0]), jset([0, 1])]


@pytest.mark.parametrize("p, f", [(5, 1), (5, 2), (7, 2), (5, 3)])
def test_p_tau_matches_oracle(p, f):
    for tau in all_types(Params(p, f)):
        assert p_tau(tau) == p_tau_oracle(tau)


# -- JH factors --------------------------------------------------------------


def test_jh_examples():
    tau = make_ps_type(Params(5, 2), 7, 0)
    assert jh_factor(tau, 0) == Weight(5, (2, 1), 0)
    assert jh_factor(tau, jset([0])) == Weight(5, (1, 0), 3)
    tau = make_ps_type(Params(5, 1), 2, 0)
    assert jh_factor(tau, 1) == Weight(5, (2,), 2)


def test_jh_rejects_index_outside_p_tau():
    tau = make_ps_type(Params(5, 2), 5, 0)
    with pytest.raises(InvalidIndexError):
        jh_factor(tau, jset([1]))


@pytest.mark.parametrize("p, f", [(5, 1), (5, 2), (7, 1), (7, 2)])
def test_jh_multiplicity_free(p, f):
    for tau in all_types(Params(p, f)):
        ws = list(jh_factors(tau).values())
        assert len(set(ws)) == len(ws) == len(p_tau(tau))


def type_strategy():
    @st.composite
    def build(draw):
        p = draw(st.sampled_from([5, 7]))
        f = draw(st.integers(1, 3))
        params = Params(p, f)
        q = params.q
        if draw(st.booleans()):
            a = draw(st.integers(0, q - 2))
            a2 = draw(st.integers(0, q - 2).filter(lambda x: x != a))
            return make_ps_type(params, a, a2)
        a = draw(st.integers(1, q * q - 2).filter(lambda x: x % (q + 1)))
        return make_cuspidal_type(params, a)

    return build()


@given(type_strategy())
def test_jh_factors_share_the_central_character(tau):
    q = tau.params.q
    if tau.kind == PS:
        expected = sum(tau.exponents) % (q - 1)
    else:
        expected = tau.exponents[0] % (q - 1)
    for w in jh_factors(tau).values():
        assert central_exponent(w) == expected


@given(type_strategy())
def test_jh_dimensions_add_up(tau):
    # PS types have dimension q + 1 and cuspidal types q - 1
    q = tau.params.q
    total = sum(w.dim for w in jh_factors(tau).values())
    assert total == (q + 1 if tau.kind == PS else q - 1)


# -- regularity and J_base ---------------------------------------------------


def test_classify_cuspidal_examples():
    P = Params(5, 2)
    assert classify_cuspidal(cusp(P, (2, 0))).regular
    irr = classify_cuspidal(cusp(P, (0, 4)))
    assert not irr.regular
    tau = cusp(P, (0, 4))
    regular = [J for J in p_tau(tau) if is_regular_weight(jh_factor(tau, J))]
    assert regular == [irr.unique_regular_j]
    assert not classify_cuspidal(cusp(Params(5, 1), (0,))).regular
    with pytest.raises(KindError):
        classify_cuspidal(make_ps_type(P, 7, 0))


def test_j_base_examples():
    P = Params(5, 2)
    assert j_base(make_ps_type(P, 7, 0)) == 0
    assert j_base(cusp(P, (2, 1))) == jset([0, 1])
    assert j_base(cusp(P, (0, 2))) == jset([1])
    with pytest.raises(UnsupportedError):
        j_base(cusp(P, (0, 4)))


@pytest.mark.parametrize("p, f", [(5, 2), (7, 2), (5, 3)])
def test_j_base_and_complement_in_p_tau(p, f):
    for tau in all_types(Params(p, f)):
        if tau.kind == CUSP and not classify_cuspidal(tau).regular:
            continue
        base = j_base(tau)
        P = set(p_tau(tau))
        assert base in P and ((1 << f) - 1) ^ base in P
        assert iota(tau, 0) == base
        assert sorted(iota(tau, K) for K in iota_p_tau(tau)) == sorted(P)


@pytest.mark.parametrize("p, f", [(5, 1), (5, 2), (7, 1), (7, 2)])
def test_irregular_cuspidals_have_one_regular_factor(p, f):
    for tau in all_cuspidal_types(Params(p, f)):
        if not classify_cuspidal(tau).regular:
            regular = [J for J in p_tau(tau) if is_regular_weight(jh_factor(tau, J))]
            assert len(regular) == 1


# -- base change -------------------------------------------------------------


def test_bc_type_examples():
    assert bc_type(make_ps_type(Params(5, 1), 2, 0)).c_digits == (2, 2)
    assert bc_type(cusp(Params(5, 1), (2,))).c_digits == (2, 2)
    assert bc_type(cusp(Params(5, 2), (1, 3))).c_digits == (1, 3, 3, 1)
    assert bc_type(cusp(Params(5, 1), (2,))).kind == PS


def test_bc_jset_examples():
    ps = make_ps_type(Params(5, 2), 7, 0)
    cu = cusp(Params(5, 2), (2, 1))
    assert bc_jset(ps, jset([0])) == jset([0, 2])
    assert bc_jset(cu, jset([0])) == jset([0, 3])
    assert bc_jset(cu, 0) == jset([2, 3])


@given(type_strategy())
def test_base_change_of_jh_factors(tau):
    big = bc_type(tau)
    for J in p_tau(tau):
        J2 = bc_jset(tau, J)
        assert J2 in p_tau(big)
        assert bc_weight(jh_factor(tau, J)) == jh_factor(big, J2)
    assert size(bc_jset(tau, (1 << tau.f) - 1)) in (tau.f, 2 * tau.f)
