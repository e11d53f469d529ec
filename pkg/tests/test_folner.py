import itertools
import random
from fractions import Fraction

import pytest

from cayleyiso.balls import INFINITE, enumerate_ball
from cayleyiso.errors import BadParams, NoFamilyForKind
from cayleyiso.folner import (
    LowerBound,
    connected_subsets,
    folner_exact,
    folner_family_upper,
    min_ratio_table,
)
from cayleyiso.groups import make_group
from cayleyiso.isoperimetry import FiniteSubset, boundary_ratio

from conftest import BUILTIN_DESCRIPTORS


# ------------------------------------------------------- connected_subsets

def test_connected_subsets_line_size3_exact_order():
    z = make_group("z:1")
    got = [s.elements for s in connected_subsets(z, 3)]
    expected = [
        {(0,)},
        {(0,), (1,)},
        {(-1,), (0,)},
        {(0,), (1,), (2,)},
        {(-1,), (0,), (1,)},
        {(-2,), (-1,), (0,)},
    ]
    assert got == [frozenset(e) for e in expected]


def test_connected_subsets_size_one():
    for desc in ("z:2", "lamplighter"):
        g = make_group(desc)
        sets = list(connected_subsets(g, 1))
        assert len(sets) == 1
        assert sets[0].elements == frozenset({g.identity})


def test_connected_subsets_z2_size2():
    z2 = make_group("z:2")
    sets = list(connected_subsets(z2, 2))
    assert len(sets) == 5
    assert sets[0].elements == frozenset({(0, 0)})
    for s in sets[1:]:
        assert (0, 0) in s.elements and len(s) == 2


def _uf_connected(group, elements):
    elements = list(elements)
    parent = {x: x for x in elements}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    inside = set(elements)
    for x in elements:
        for s in group.generators:
            y = group.mul(x, s)
            if y in inside:
                rx, ry = find(x), find(y)
                if rx != ry:
                    parent[rx] = ry
    return len({find(x) for x in elements}) == 1


@pytest.mark.parametrize("desc,size", [("z:2", 4), ("dinf", 5), ("lamplighter", 3)])
def test_connected_subsets_match_brute_force(desc, size):
    group = make_group(desc)
    emitted = [s.elements for s in connected_subsets(group, size)]
    # no duplicates, all connected (independent union-find), all contain e
    assert len(emitted) == len(set(emitted))
    for elems in emitted:
        assert group.identity in elems
        assert _uf_connected(group, elems)
    # brute force: every subset of B(size-1) containing e, filtered connected
    ball = enumerate_ball(group, size).members(size - 1)
    rest = [x for x in ball if x != group.identity]
    brute = set()
    for k in range(0, size):
        for combo in itertools.combinations(rest, k):
            cand = frozenset(combo) | {group.identity}
            if _uf_connected(group, cand):
                brute.add(cand)
    assert set(emitted) == brute


def test_connected_counts_known_sequences():
    # rooted square-lattice animal counts and the 4-regular-tree closed form
    z2 = min_ratio_table(make_group("z:2"), 7, use_cache=False)
    assert z2.count == [0, 1, 4, 18, 76, 315, 1296, 5320]
    free = min_ratio_table(make_group("free:2"), 6, use_cache=False)
    assert free.count == [0, 1, 4, 18, 88, 455, 2448]
    line = min_ratio_table(make_group("z:1"), 10, use_cache=False)
    assert line.count == [0] + list(range(1, 11))


def test_min_ratio_witness_attains_minimum():
    for desc in ("z:1", "z:2", "dinf"):
        table = min_ratio_table(make_group(desc), 6, use_cache=False)
        for m in range(1, 7):
            witness = table.witness_subset(m)
            assert len(witness) == m
            assert boundary_ratio(witness) == table.min_ratio(m)


def test_min_ratio_line_values():
    table = min_ratio_table(make_group("z:1"), 8, use_cache=False)
    assert table.min_boundary[1] == 1
    for m in range(2, 9):
        assert table.min_boundary[m] == 2
    assert table.min_ratio(4) == Fraction(1, 2)


# ------------------------------------------------------------ folner_exact

def test_folner_n1_everywhere():
    for desc in BUILTIN_DESCRIPTORS:
        record = folner_exact(make_group(desc), 1, 3)
        assert record.value == 1
        assert record.witness.elements == frozenset({make_group(desc).identity})
        assert record.kind == "exact"


def test_folner_line_small_values():
    z = make_group("z:1")
    record = folner_exact(z, 2, 8)
    assert record.value == 4
    assert boundary_ratio(record.witness) <= Fraction(1, 2)
    assert record.witness.elements == frozenset({(0,), (1,), (2,), (3,)})
    for n in range(2, 7):
        assert folner_exact(z, n, 14).value == 2 * n


def test_folner_dinf_matches_line():
    d = make_group("dinf")
    assert folner_exact(d, 3, 14).value == 6
    for n in range(2, 7):
        rec = folner_exact(d, n, 14)
        assert rec.value == 2 * n
        assert boundary_ratio(rec.witness) <= Fraction(1, n)


def test_folner_lower_bound_when_cap_too_small():
    record = folner_exact(make_group("z:1"), 3, 4)  # true value 6
    assert record.kind == "lower"
    assert record.value == LowerBound(5)
    assert record.witness is None


def test_folner_nonamenable_configuration():
    f2 = make_group("free:2")
    assert folner_exact(f2, 1, 3).value == 1
    record = folner_exact(f2, 2, 3)
    assert record.value is INFINITE
    assert record.kind == "infinite"
    # rank 1 is the infinite cyclic group: amenable, never infinite
    f1 = make_group("free:1")
    assert not f1.is_nonamenable
    assert folner_exact(f1, 2, 8).value == 4


def test_folner_record_serialization():
    record = folner_exact(make_group("z:1"), 2, 8)
    assert record.csv_row() == (2, "4", "exact", 4, 4)
    payload = record.to_json_dict()
    assert payload["value_or_bound"] == "4"
    assert payload["kind"] == "exact"
    assert payload["witness"] == ["0", "1", "2", "3"]
    assert payload["family_upper"] == 4


def test_folner_bad_params():
    z = make_group("z:1")
    with pytest.raises(BadParams):
        folner_exact(z, 0, 5)
    with pytest.raises(BadParams):
        folner_exact(z, 2, 0)
    with pytest.raises(BadParams):
        min_ratio_table(z, 0)


# ------------------------------------------------------ folner_family_upper

def test_family_upper_examples():
    assert folner_family_upper(make_group("z:1"), 5) == 10
    assert folner_family_upper(make_group("z:2"), 2) == 49
    assert folner_family_upper(make_group("dinf"), 4) == 8
    assert folner_family_upper(make_group("lamplighter"), 2) == 64
    for desc in ("z:1", "z:2", "dinf", "lamplighter"):
        assert folner_family_upper(make_group(desc), 1) == 1


def test_family_upper_no_family():
    with pytest.raises(NoFamilyForKind):
        folner_family_upper(make_group("free:2"), 2)
    with pytest.raises(NoFamilyForKind):
        folner_family_upper(make_group("heis"), 1)


def test_family_upper_dominates_exact_values():
    z = make_group("z:1")
    for n in range(1, 7):
        record = folner_exact(z, n, 14)
        assert record.family_upper is not None
        assert record.value <= record.family_upper


def test_folner_monotone_in_n():
    z = make_group("z:1")
    values = [folner_exact(z, n, 14).value for n in range(1, 7)]
    assert values == sorted(values)


# ------------------------------------------- reduction soundness, spot check

def test_component_reduction_spot_check():
    rng = random.Random(77)
    z2 = make_group("z:2")
    t = enumerate_ball(z2, 4)
    pool = t.members(4)
    for _ in range(100):
        omega = FiniteSubset(z2, rng.sample(pool, rng.randint(1, 10)))
        ratio = boundary_ratio(omega)
        # split into graph components by flooding
        remaining = set(omega.elements)
        best = None
        while remaining:
            seed = remaining.pop()
            comp = {seed}
            stack = [seed]
            while stack:
                x = stack.pop()
                for s in z2.generators:
                    y = z2.mul(x, s)
                    if y in remaining:
                        remaining.discard(y)
                        comp.add(y)
                        stack.append(y)
            part = FiniteSubset(z2, comp)
            if best is None or boundary_ratio(part) < boundary_ratio(best):
                best = part
        assert boundary_ratio(best) <= ratio
        assert len(best) <= len(omega)
