import os
import subprocess
import sys

import pytest
from hypothesis import given, settings, strategies as st

from formaldual import _pykernels as py
from formaldual import kernels
from formaldual.profiles import admissible_profiles
from formaldual.sets import Subset, canonical_form, symmetry_multipliers

try:
    from formaldual import _kernels as cy
except ImportError:  # extension not built
    cy = None

needs_ext = pytest.mark.skipif(cy is None, reason="compiled extension not built")


@st.composite
def realizable_targets(draw):
    n = draw(st.integers(2, 22))
    rest = draw(st.sets(st.integers(1, n - 1), max_size=min(n - 1, 7)))
    members = sorted({0} | rest)
    return n, members, py.weight_counts(n, members)


def norm(res):
    status, found, nodes, prunes, children, trace = res
    return (status, [tuple(x) for x in found], nodes, list(prunes),
            None if children is None else list(children),
            [(tuple(m), tuple(map(tuple, o))) for m, o in trace])


def run(mod, n, target, size, prune=True, split=False, budget=10**7, mult=None, prefix=(0,)):
    mult = mult if mult is not None else symmetry_multipliers(n)
    return mod.explore(n, target, size, list(prefix), budget, prune, split, 50, mult, 0.0)


def test_selected_backend():
    assert kernels.BACKEND in ("cython", "python")
    if cy is not None and not os.environ.get("FORMALDUAL_PURE_PYTHON"):
        assert kernels.BACKEND == "cython"
    assert kernels.PRUNE_REASONS == py.PRUNE_REASONS


def test_pure_python_switch():
    out = subprocess.run(
        [sys.executable, "-c", "from formaldual import kernels; print(kernels.BACKEND)"],
        env={**os.environ, "FORMALDUAL_PURE_PYTHON": "1"}, capture_output=True, text=True,
        check=True)
    assert out.stdout.strip() == "python"


def test_weight_counts_python():
    assert py.weight_counts(4, [0, 1]) == [2, 1, 0, 1]
    assert py.canonical_members(4, [0, 3], [1, 3]) == [0, 1]


def test_explore_rejects_bad_prefix():
    with pytest.raises(ValueError):
        py.explore(4, [2, 1, 0, 1], 2, [], 100, True, False, 0, [1, 3], 0.0)


@given(realizable_targets())
@settings(max_examples=150, deadline=None)
def test_prune_matches_plain(case):
    n, members, target = case
    a = run(py, n, target, len(members), prune=True)
    b = run(py, n, target, len(members), prune=False)
    assert a[0] == b[0] == py.STATUS_COMPLETE
    assert a[1] == b[1]
    canon = tuple(canonical_form(Subset.of(n, members)).members)
    assert canon in {tuple(x) for x in a[1]}


@needs_ext
@given(realizable_targets(), st.booleans(), st.booleans())
@settings(max_examples=150, deadline=None)
def test_backends_identical(case, prune, split):
    n, members, target = case
    a = run(py, n, target, len(members), prune=prune, split=split)
    b = run(cy, n, target, len(members), prune=prune, split=split)
    assert norm(a) == norm(b)


@needs_ext
@pytest.mark.parametrize("n,size", [(16, 4), (16, 8), (36, 6), (64, 8)])
def test_backends_identical_on_profiles(n, size):
    for prof in admissible_profiles(n, size, primitive_required=True)[:20]:
        target = list(prof.expand())
        for budget in (10**6, 37):
            for split in (False, True):
                a = run(py, n, target, size, budget=budget, split=split)
                b = run(cy, n, target, size, budget=budget, split=split)
                assert norm(a) == norm(b)


@needs_ext
def test_backends_identical_helpers():
    for n in range(1, 30):
        S = [x for x in range(n) if (x * x + 3 * x) % 5 < 2] or [0]
        assert list(cy.weight_counts(n, S)) == list(py.weight_counts(n, S))
        for units in (False, True):
            mult = symmetry_multipliers(n, units)
            assert list(cy.canonical_members(n, S, mult)) == list(py.canonical_members(n, S, mult))


def test_node_budget_status():
    prof = admissible_profiles(64, 8, primitive_required=True)[0]
    status, found, nodes, *_ = run(py, 64, list(prof.expand()), 8, budget=5)
    assert status == py.STATUS_NODE_LIMIT and nodes <= 5


def test_split_children_cover_tree():
    prof = admissible_profiles(16, 4)[0]
    target = list(prof.expand())
    whole = run(py, 16, target, 4)
    status, found, nodes, prunes, children, trace = run(py, 16, target, 4, split=True)
    assert status == py.STATUS_COMPLETE and children is not None
    merged = list(found)
    for child in children:
        merged.extend(run(py, 16, target, 4, prefix=(0, child))[1])
    assert sorted(map(tuple, merged)) == sorted(map(tuple, whole[1]))
