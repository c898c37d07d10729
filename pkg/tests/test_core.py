import pytest
from hypothesis import given
from hypothesis import strategies as st

from tamegauge.core import (
    Params,
    Weight,
    all_weights,
    bc_weight,
    complement,
    digits,
    from_digits,
    is_regular_weight,
    jset,
    jset_to_json,
    members,
    normalize_weight,
    size,
    subsets_between,
)
from tamegauge.errors import ParameterError


@pytest.mark.parametrize("n, expected", [(7, (2, 1)), (0, (0, 0)), (23, (3, 4))])
def test_digits_examples(n, expected):
    assert digits(n, 5, 2) == expected
    assert from_digits(expected, 5) == n


@given(st.sampled_from([3, 5, 7]), st.integers(1, 4), st.data())
def test_digits_round_trip(p, f, data):
    n = data.draw(st.integers(0, p**f - 1))
    ds = digits(n, p, f)
    assert len(ds) == f and all(0 <= d < p for d in ds)
    assert from_digits(ds, p) == n


def test_digits_rejects_out_of_range():
    with pytest.raises(ParameterError):
        digits(25, 5, 2)
    with pytest.raises(ParameterError):
        digits(-1, 5, 2)


def test_from_digits_allows_carries():
    # t-vectors can carry a digit equal to p
    assert from_digits((5, 0), 5) == 5


@pytest.mark.parametrize(
    "t, s, expected",
    [
        ((0, 0), (2, 1), Weight(5, (2, 1), 0)),
        ((3, 0), (1, 0), Weight(5, (1, 0), 3)),
        ((4, 3), (0, 0), Weight(5, (0, 0), 19)),
    ],
)
def test_normalize_weight(t, s, expected):
    assert normalize_weight(t, s, 5) == expected


@pytest.mark.parametrize(
    "w, regular",
    [(Weight(5, (2, 1), 0), True), (Weight(5, (4, 1), 0), False), (Weight(5, (0, 0), 7), True)],
)
def test_regularity(w, regular):
    assert is_regular_weight(w) is regular


@pytest.mark.parametrize(
    "w, expected",
    [
        (Weight(5, (2,), 1), Weight(5, (2, 2), 6)),
        (Weight(5, (2, 1), 0), Weight(5, (2, 1, 2, 1), 0)),
        (Weight(5, (3,), 3), Weight(5, (3, 3), 18)),
    ],
)
def test_bc_weight_examples(w, expected):
    assert bc_weight(w) == expected


@given(st.sampled_from([5, 7]), st.integers(1, 3), st.data())
def test_bc_weight_doubles_digits_and_dimension(p, f, data):
    s = tuple(data.draw(st.lists(st.integers(0, p - 1), min_size=f, max_size=f)))
    d = data.draw(st.integers(0, p**f - 2))
    w2 = bc_weight(Weight(p, s, d))
    assert w2.s == s + s
    assert w2.dim == Weight(p, s, d).dim ** 2
    assert w2.d == d * (p**f + 1) % (p ** (2 * f) - 1)


def test_weight_validation():
    with pytest.raises(ParameterError):
        Weight(5, (5,), 0)
    with pytest.raises(ParameterError):
        Weight(5, (1,), 4)


def test_params_validation():
    with pytest.raises(ParameterError):
        Params(4, 1)
    with pytest.raises(ParameterError):
        Params(3, 1)
    assert Params(3, 1, allow_p3=True).q == 3
    assert Params(5, 2).e == 24


def test_all_weights_count():
    assert sum(1 for _ in all_weights(Params(5, 2))) == 25 * 24


@given(st.integers(1, 5), st.data())
def test_jset_helpers(f, data):
    J = data.draw(st.integers(0, (1 << f) - 1))
    assert jset(members(J), f) == J
    assert size(J) + size(complement(J, f)) == f
    assert jset_to_json(J, f) == {"width": f, "bits": J}
    between = list(subsets_between(J & 1, J))
    assert len(between) == 2 ** (size(J) - size(J & 1))
    assert all(K & ~J == 0 and K & (J & 1) == (J & 1) for K in between)
