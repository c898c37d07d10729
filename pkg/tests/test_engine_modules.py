from collections import Counter

import numpy as np
from hypothesis import given, settings
from hypothesis import strategies as st

from tamegauge.core import Weight
from tamegauge.engine.modules import (
    check_relations,
    cosocle_weights,
    direct_sum,
    dual,
    dual_weight,
    hom_dim,
    is_semisimple,
    jh_multiset,
    radical_series,
    simple_module,
    socle_weights,
    spin,
)

W_TRIV = Weight(5, (0,), 0)
W_SYM2 = Weight(5, (2,), 0)


def fq_dim(M):
    return M.dim // M.f


def test_simple_module_examples():
    assert fq_dim(simple_module(5, 1, W_TRIV)) == 1
    S = simple_module(5, 1, W_SYM2)
    assert fq_dim(S) == 3
    # u(1) on X^2, XY, Y^2 with Y -> X + Y
    assert np.array_equal(S.gens[1], [[1, 1, 1], [0, 1, 2], [0, 0, 1]])
    assert fq_dim(simple_module(5, 2, Weight(5, (2, 1), 0))) == 6


weights = st.sampled_from([(5, 1), (5, 2), (7, 1)]).flatmap(
    lambda pf: st.builds(
        lambda s, d: Weight(pf[0], tuple(s), d),
        st.lists(st.integers(0, pf[0] - 1), min_size=pf[1], max_size=pf[1]),
        st.integers(0, pf[0] ** pf[1] - 2),
    )
)


@settings(max_examples=25)
@given(weights)
def test_simple_modules_are_simple(w):
    S = simple_module(w.p, w.f, w)
    assert check_relations(S)
    assert fq_dim(S) == w.dim
    assert hom_dim(w, S) == 1
    assert socle_weights(S) == cosocle_weights(S) == Counter({w: 1})
    assert radical_series(S) == [Counter({w: 1})]
    # a nonzero vector spins to the whole module
    v = np.zeros((1, S.dim), dtype=np.int64)
    v[0, -1] = 1
    assert spin(S, v).shape[0] == S.dim


@settings(max_examples=25)
@given(weights)
def test_dual_weight_matches_dual_module(w):
    D = dual(simple_module(w.p, w.f, w))
    assert socle_weights(D) == Counter({dual_weight(w): 1})
    assert dual_weight(dual_weight(w)) == w


def test_hom_between_distinct_simples_vanishes():
    assert hom_dim(W_TRIV, simple_module(5, 1, W_SYM2)) == 0
    assert hom_dim(Weight(5, (2,), 1), simple_module(5, 1, W_SYM2)) == 0


def test_direct_sum_is_semisimple():
    M = direct_sum(simple_module(5, 1, W_TRIV), simple_module(5, 1, W_SYM2))
    assert is_semisimple(M)
    assert radical_series(M) == [Counter({W_TRIV: 1, W_SYM2: 1})]
    assert jh_multiset(M) == Counter({W_TRIV: 1, W_SYM2: 1})
    assert hom_dim(W_SYM2, M) == 1
