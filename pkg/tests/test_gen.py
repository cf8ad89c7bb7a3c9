"""Random instance generator: determinism, corners, growth stability."""

import pytest
from hypothesis import given, strategies as st

from critmatch import GenParams, random_instance, serialize_instance, validate
from critmatch.model import Side


def params(**kw) -> GenParams:
    base = dict(n_a=5, n_b=5, edge_probability=0.6, tie_density=0.4,
                critical_fraction_a=0.3, critical_fraction_b=0.3, seed=11)
    base.update(kw)
    return GenParams(**base)


def test_same_params_byte_identical():
    a = serialize_instance(random_instance(params()))
    b = serialize_instance(random_instance(params()))
    assert a == b


def test_different_seeds_differ():
    a = serialize_instance(random_instance(params(seed=1)))
    b = serialize_instance(random_instance(params(seed=2)))
    assert a != b


def test_empty_corner():
    inst = random_instance(params(n_a=0, n_b=0))
    assert inst.n_a == 0 and inst.n_b == 0 and not inst.edges


def test_complete_strict_corner():
    inst = random_instance(params(
        n_a=4, n_b=4, edge_probability=1.0, tie_density=0.0,
        critical_fraction_a=0.0, critical_fraction_b=0.0,
    ))
    assert len(inst.edges) == 16
    assert inst.s == 0 and inst.t == 0
    for a in range(4):
        groups = inst.pref_list(Side.A, a).groups
        assert all(len(g) == 1 for g in groups)
    for b in range(4):
        groups = inst.pref_list(Side.B, b).groups
        assert all(len(g) == 1 for g in groups)


def test_full_tie_corner():
    inst = random_instance(params(n_a=4, n_b=4, edge_probability=1.0, tie_density=1.0))
    for a in range(4):
        lst = inst.pref_list(Side.A, a)
        assert len(lst.groups) == 1 and lst.ranks == (1,)


def test_all_critical_corner():
    inst = random_instance(params(critical_fraction_a=1.0, critical_fraction_b=1.0))
    assert inst.critical_a == frozenset(range(5))
    assert inst.critical_b == frozenset(range(5))


def test_seed_wraps_to_64_bits():
    p = params(seed=-1)
    assert p.seed == 2**64 - 1
    random_instance(p)


@pytest.mark.parametrize(
    "kw",
    [
        {"n_a": -1},
        {"edge_probability": 1.5},
        {"tie_density": -0.1},
        {"critical_fraction_a": 2.0},
        {"critical_fraction_b": -1.0},
    ],
)
def test_invalid_params(kw):
    with pytest.raises(ValueError):
        params(**kw)


@given(
    seed=st.integers(min_value=0, max_value=2**64 - 1),
    n_a=st.integers(min_value=0, max_value=8),
    n_b=st.integers(min_value=0, max_value=8),
    ep=st.floats(min_value=0.0, max_value=1.0),
    td=st.floats(min_value=0.0, max_value=1.0),
)
def test_generated_instances_always_validate(seed, n_a, n_b, ep, td):
    inst = random_instance(GenParams(
        n_a=n_a, n_b=n_b, edge_probability=ep, tie_density=td,
        critical_fraction_a=0.5, critical_fraction_b=0.5, seed=seed,
    ))
    assert validate(inst).ok


@given(seed=st.integers(min_value=0, max_value=2**32))
def test_growth_preserves_strict_order(seed):
    """Adding vertices may split ties but never reorders strict preferences."""
    small = random_instance(params(n_a=4, n_b=4, seed=seed))
    grown = random_instance(params(n_a=6, n_b=7, seed=seed))

    small_pairs = {(a, b) for a, b, _, _ in small.sorted_edges}
    grown_pairs = {(a, b) for a, b, _, _ in grown.sorted_edges}
    # per-pair coins: every old pair survives growth
    assert small_pairs <= grown_pairs

    for a in range(4):
        nbrs = [b for b in small.adj_a[a]]
        for i, b1 in enumerate(nbrs):
            for b2 in nbrs[i + 1:]:
                r_small = small.rank_at_a(a, b1) - small.rank_at_a(a, b2)
                r_grown = grown.rank_at_a(a, b1) - grown.rank_at_a(a, b2)
                if r_small < 0:
                    assert r_grown < 0
                elif r_small > 0:
                    assert r_grown > 0
    for b in range(4):
        nbrs = [a for a in small.adj_b[b]]
        for i, a1 in enumerate(nbrs):
            for a2 in nbrs[i + 1:]:
                r_small = small.rank_at_b(a1, b) - small.rank_at_b(a2, b)
                r_grown = grown.rank_at_b(a1, b) - grown.rank_at_b(a2, b)
                if r_small < 0:
                    assert r_grown < 0
                elif r_small > 0:
                    assert r_grown > 0
