"""Brute-force oracle: enumeration, scan backends, popularity comparator."""

import dataclasses

import pytest
from hypothesis import given, settings, strategies as st

from critmatch import (
    GenParams,
    PopularityVerdict,
    critical_coverage,
    enumerate_matchings,
    exhaustive_scan,
    is_rsm,
    make_instance,
    max_critical_rsm,
    meets_two_thirds,
    more_popular,
    parse_instance,
    random_instance,
)
from critmatch.backend import resolve_backend

from conftest import read_fixture

BACKENDS = ["numpy", "numba"]


@pytest.fixture
def tied_3x4():
    return parse_instance(read_fixture("tied_3x4.inst"))


@pytest.fixture
def no_crit_2x2():
    return parse_instance(read_fixture("no_crit_2x2.inst"))


@pytest.fixture
def one_a_crit_bs():
    return parse_instance(read_fixture("one_a_crit_bs.inst"))


# ----------------------------------------------------------- enumeration


def test_enumerate_single_edge():
    inst = make_instance(1, 1, [(0, 0, 1, 1)])
    assert list(enumerate_matchings(inst)) == [frozenset(), frozenset({(0, 0)})]


def test_enumerate_empty_instance():
    assert list(enumerate_matchings(make_instance(0, 0, []))) == [frozenset()]


def test_enumerate_tied_3x4(tied_3x4):
    mats = list(enumerate_matchings(tied_3x4))
    assert len(mats) == 19
    assert len(set(mats)) == 19
    # canonical order: skip-first, then neighbours ascending, deepest last
    assert mats[0] == frozenset()
    assert mats[1] == frozenset({(2, 2)})
    assert mats[2] == frozenset({(1, 0)})


def test_enumerate_complete_3x3():
    inst = make_instance(3, 3, [(a, b, 1, 1) for a in range(3) for b in range(3)])
    assert sum(1 for _ in enumerate_matchings(inst)) == 34


def test_size_guard():
    wide = make_instance(11, 3, [])
    tall = make_instance(3, 11, [])
    for inst in (wide, tall):
        with pytest.raises(ValueError, match="exceeds"):
            list(enumerate_matchings(inst))
        with pytest.raises(ValueError, match="exceeds"):
            exhaustive_scan(inst)
        with pytest.raises(ValueError, match="exceeds"):
            max_critical_rsm(inst)


# ------------------------------------------------------------------ scan


@pytest.mark.parametrize("backend", BACKENDS)
def test_scan_tied_3x4_frozen_values(tied_3x4, backend):
    res = exhaustive_scan(tied_3x4, backend=backend)
    assert res.total_matchings == 19
    assert res.max_critical_coverage == 2
    assert res.num_critical == 5
    assert res.num_critical_rsm == 2
    assert res.max_critical_rsm_size == 3
    assert res.witness == ((0, 1), (1, 3), (2, 2))
    assert res.critical_a_range == (1, 1)
    assert res.critical_b_range == (1, 1)
    assert res.backend == backend


def _reference_scan(inst):
    """Independent aggregate over the pure-python enumeration."""
    mats = list(enumerate_matchings(inst))
    cov = [critical_coverage(inst, m) for m in mats]
    best_cov = max(cov)
    crit = [m for m, c in zip(mats, cov) if c == best_cov]
    cr = [m for m in crit if is_rsm(inst, m)[0]]
    best_size = max(len(m) for m in cr)
    witness = next(m for m in mats
                   if critical_coverage(inst, m) == best_cov
                   and len(m) == best_size and is_rsm(inst, m)[0])
    ca = sorted(sum(1 for a, _ in m if a in inst.critical_a) for m in crit)
    cb = sorted(sum(1 for _, b in m if b in inst.critical_b) for m in crit)
    return {
        "total_matchings": len(mats),
        "max_critical_coverage": best_cov,
        "num_critical": len(crit),
        "num_critical_rsm": len(cr),
        "max_critical_rsm_size": best_size,
        "witness": tuple(sorted(witness)),
        "critical_a_range": (ca[0], ca[-1]),
        "critical_b_range": (cb[0], cb[-1]),
    }


@settings(max_examples=40)
@given(seed=st.integers(min_value=0, max_value=2**32))
def test_scan_backends_match_reference(seed):
    inst = random_instance(GenParams(
        n_a=2 + seed % 4, n_b=2 + (seed // 4) % 4,
        edge_probability=[0.4, 0.7, 1.0][seed % 3],
        tie_density=[0.0, 0.5, 1.0][(seed // 3) % 3],
        critical_fraction_a=[0.0, 0.5][seed % 2],
        critical_fraction_b=[0.0, 0.6][(seed // 2) % 2],
        seed=seed,
    ))
    ref = _reference_scan(inst)
    for backend in BACKENDS:
        got = dataclasses.asdict(exhaustive_scan(inst, backend=backend))
        got.pop("backend")
        assert got == ref, backend


def test_scan_empty_instance():
    for backend in BACKENDS:
        res = exhaustive_scan(make_instance(0, 0, []), backend=backend)
        assert res.total_matchings == 1
        assert res.max_critical_rsm_size == 0
        assert res.witness == ()
        assert res.num_critical_rsm == 1


# ---------------------------------------------------------------- oracle


def test_max_critical_rsm_tied_3x4(tied_3x4):
    res = max_critical_rsm(tied_3x4)
    assert res.max_critical_rsm_size == 3
    assert res.witness == ((0, 1), (1, 3), (2, 2))
    assert res.num_critical_rsm == 2
    assert res.per_side_critical_counts == (1, 1)
    assert set(res.to_dict()) == {
        "max_critical_rsm_size", "witness", "num_critical_rsm",
        "per_side_critical_counts",
    }


def test_max_critical_rsm_no_criticals_equals_max_stable(no_crit_2x2):
    # without critical vertices the target degenerates to stable matchings:
    # here only {(0,0)} is stable
    res = max_critical_rsm(no_crit_2x2)
    assert res.max_critical_rsm_size == 1
    assert res.num_critical_rsm == 1
    assert res.witness == ((0, 0),)
    assert res.per_side_critical_counts == (0, 0)


def test_max_critical_rsm_empty_instance():
    res = max_critical_rsm(make_instance(0, 0, []))
    assert res.max_critical_rsm_size == 0 and res.witness == ()


# -------------------------------------------------------------- backends


def test_resolve_backend_env(monkeypatch):
    monkeypatch.setenv("CRITICAL_MATCH_BACKEND", "numpy")
    assert resolve_backend(None)[0] == "numpy"
    monkeypatch.setenv("CRITICAL_MATCH_BACKEND", "bogus")
    with pytest.raises(ValueError, match="unknown backend"):
        resolve_backend(None)
    # an explicit argument wins over the environment
    assert resolve_backend("numba")[0] == "numba"
    monkeypatch.delenv("CRITICAL_MATCH_BACKEND")
    assert resolve_backend(None)[0] in ("numba", "numpy")


# ------------------------------------------------------------ popularity


def test_more_popular_one_a_crit_bs(one_a_crit_bs):
    m3, m2 = [(0, 0)], [(0, 1)]
    assert more_popular(one_a_crit_bs, m3, m2) is PopularityVerdict.FIRST
    assert more_popular(one_a_crit_bs, m2, m3) is PopularityVerdict.SECOND


def test_more_popular_identity_is_tie(tied_3x4):
    assert more_popular(tied_3x4, M := [(0, 1), (1, 3)], M) is PopularityVerdict.TIE


def test_more_popular_no_crit_2x2_perfect_never_loses(no_crit_2x2):
    m1 = [(0, 1), (1, 0)]
    for other in enumerate_matchings(no_crit_2x2):
        assert more_popular(no_crit_2x2, m1, other) is not PopularityVerdict.SECOND


def test_more_popular_rejects_non_matchings(tied_3x4):
    with pytest.raises(ValueError):
        more_popular(tied_3x4, [(0, 0), (0, 1)], [])


def test_more_popular_abstains_on_tied_ranks():
    # a0 is indifferent, so only the b side votes and they cancel out
    inst = make_instance(1, 2, [(0, 0, 1, 1), (0, 1, 1, 1)])
    assert more_popular(inst, [(0, 0)], [(0, 1)]) is PopularityVerdict.TIE


# -------------------------------------------------------------- the bound


def test_meets_two_thirds_exact_arithmetic():
    assert meets_two_thirds(2, 3)
    assert not meets_two_thirds(1, 2)
    assert meets_two_thirds(0, 0)
    assert meets_two_thirds(4, 6)
    assert not meets_two_thirds(3, 5)
