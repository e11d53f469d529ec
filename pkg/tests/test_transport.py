import itertools
import json
import random
from fractions import Fraction

import pytest

from cayleyiso.balls import enumerate_ball, phi
from cayleyiso.errors import BadParams, EmptySet, HorizonExceeded, PreconditionUnmet
from cayleyiso.groups import make_group
from cayleyiso.isoperimetry import FiniteSubset, boundary_ratio
from cayleyiso.transport import (
    build_ledger,
    geodesic_word,
    verify_lemma,
)

from conftest import BUILTIN_DESCRIPTORS


def z_subset(group, values):
    return FiniteSubset(group, [(v,) for v in values])


# ------------------------------------------------------------ geodesic_word

def test_geodesic_z_positive():
    z = make_group("z:1")
    t = enumerate_ball(z, 5)
    word = geodesic_word(t, (3,))
    assert word.letters == (0, 0, 0)  # three copies of +1
    assert word.prefixes == ((0,), (1,), (2,), (3,))


def test_geodesic_dinf_translation():
    d = make_group("dinf")
    t = enumerate_ball(d, 5)
    word = geodesic_word(t, (1, 0))  # the translation a = x*y
    assert len(word) == 2
    assert word.letters == (0, 1)
    assert word.prefixes[-1] == (1, 0)


def test_geodesic_identity_empty():
    for desc in ("z:1", "lamplighter"):
        g = make_group(desc)
        t = enumerate_ball(g, 2)
        word = geodesic_word(t, g.identity)
        assert word.letters == ()
        assert word.prefixes == (g.identity,)


def test_geodesic_outside_table():
    z = make_group("z:1")
    t = enumerate_ball(z, 2)
    with pytest.raises(HorizonExceeded):
        geodesic_word(t, (5,))


@pytest.mark.parametrize("desc", ("z:2", "dinf", "heis"))
def test_geodesic_is_lexicographically_smallest(desc):
    group = make_group(desc)
    t = enumerate_ball(group, 3)
    for g in t.members(3):
        n = t.norm_of[g]
        word = geodesic_word(t, g)
        assert len(word.letters) == n
        # brute force every generator word of length n reaching g
        best = None
        for letters in itertools.product(range(len(group.generators)), repeat=n):
            x = group.identity
            for j in letters:
                x = group.mul(x, group.generators[j])
            if x == g and (best is None or letters < best):
                best = letters
        assert word.letters == best


def test_geodesic_prefix_norms_increase():
    g = make_group("lamplighter")
    t = enumerate_ball(g, 4)
    for target in t.members(3):
        word = geodesic_word(t, target)
        norms = [t.norm_of[p] for p in word.prefixes]
        assert norms == list(range(len(word) + 1))


# ------------------------------------------------------------- build_ledger

def test_ledger_small_z_example():
    z = make_group("z:1")
    t = enumerate_ball(z, 5)
    ledger = build_ledger(z_subset(z, [0, 1]), t, 1)
    assert ledger.rays[(0,)] == ((-1,),)
    assert ledger.rays[(1,)] == ((1,),)
    assert ledger.omega_g[(0,)] == ()
    assert ledger.omega_g[(1,)] == ((1,),)
    assert ledger.omega_g[(-1,)] == ((0,),)
    assert ledger.sum_rays == ledger.sum_omega_g == 2


def test_ledger_identity_translate_empty(groups):
    rng = random.Random(3)
    for g in groups.values():
        t = enumerate_ball(g, 3)
        pool = t.members(2)
        omega = FiniteSubset(g, rng.sample(pool, min(5, len(pool))))
        ledger = build_ledger(omega, t, 2)
        assert ledger.omega_g[g.identity] == ()


def test_ledger_interval_shift_bound():
    z = make_group("z:1")
    t = enumerate_ball(z, 5)
    ledger = build_ledger(z_subset(z, range(5)), t, 2)
    moved = ledger.omega_g[(2,)]
    assert set(moved) == {(3,), (4,)}
    bd = len(z_subset(z, range(5)).boundary_set())
    assert len(moved) <= 2 * bd


def test_ledger_requires_nonempty_and_radius():
    z = make_group("z:1")
    t = enumerate_ball(z, 3)
    with pytest.raises(EmptySet):
        build_ledger(FiniteSubset(z, []), t, 1)
    with pytest.raises(BadParams):
        build_ledger(z_subset(z, [0]), t, 0)
    with pytest.raises(HorizonExceeded):
        build_ledger(z_subset(z, [0]), t, 4)


def test_ledger_caps_default_and_override():
    z = make_group("z:1")
    t = enumerate_ball(z, 8)
    big = z_subset(z, range(70))
    with pytest.raises(BadParams):
        build_ledger(big, t, 1)
    assert build_ledger(big, t, 1, size_cap=100).sum_rays == 2
    with pytest.raises(BadParams):
        build_ledger(z_subset(z, [0]), t, 7)
    assert build_ledger(z_subset(z, [0]), t, 7, radius_cap=8).r == 7


def test_ledger_deterministic_rebuild():
    g = make_group("lamplighter")
    t = enumerate_ball(g, 3)
    omega = FiniteSubset(g, t.members(2))
    a = build_ledger(omega, t, 2)
    b = build_ledger(omega, t, 2)
    assert list(a.omega_g) == list(b.omega_g)
    assert a.omega_g == b.omega_g
    assert a.rays == b.rays
    assert a.exit_fibers == b.exit_fibers
    assert json.dumps(a.to_json_dict()) == json.dumps(b.to_json_dict())


# ------------------------------------------------------------- verify_lemma

def test_lemma_spheres_equality_on_line():
    z = make_group("z:1")
    t = enumerate_ball(z, 10)
    report = verify_lemma("spheres", table=t)
    assert report.holds
    # on the line the sphere bound is met with equality
    for r in range(2, 11):
        assert t.s[r] == (len(z.generators) - 1) * t.s[r - 1]


@pytest.mark.parametrize("desc", BUILTIN_DESCRIPTORS)
def test_lemma_spheres_and_balls_all_groups(desc):
    t = enumerate_ball(make_group(desc), 5)
    assert verify_lemma("spheres", table=t).holds
    assert verify_lemma("balls", table=t).holds


def test_lemma_counting_example():
    z = make_group("z:1")
    t = enumerate_ball(z, 5)
    ledger = build_ledger(z_subset(z, [0, 1]), t, 1)
    report = verify_lemma("counting", ledger=ledger)
    assert report.holds
    assert "2" in report.detail


def test_lemma_ray_lower_example():
    z = make_group("z:1")
    t = enumerate_ball(z, 6)
    omega = z_subset(z, [0, 1, 2])
    assert phi(t, 6) == 3
    ledger = build_ledger(omega, t, 3)
    report = verify_lemma("ray-lower", ledger=ledger, alpha=1)
    assert report.holds
    for x in omega.elements:
        assert len(ledger.rays[x]) >= 3


def test_lemma_ray_lower_precondition():
    z = make_group("z:1")
    t = enumerate_ball(z, 6)
    ledger = build_ledger(z_subset(z, [0, 1, 2]), t, 1)
    with pytest.raises(PreconditionUnmet):
        verify_lemma("ray-lower", ledger=ledger, alpha=10)


def test_lemma_conclude():
    z = make_group("z:1")
    t = enumerate_ball(z, 6)
    omega = z_subset(z, [0, 1, 2])
    ledger = build_ledger(omega, t, 3)
    report = verify_lemma("conclude", ledger=ledger, alpha=1)
    assert report.holds
    wrong_radius = build_ledger(omega, t, 2)
    with pytest.raises(PreconditionUnmet):
        verify_lemma("conclude", ledger=wrong_radius, alpha=1)


def test_lemma_transport_and_fiber_random(groups):
    rng = random.Random(5)
    for g in groups.values():
        t = enumerate_ball(g, 3)
        pool = t.members(3)
        for _ in range(12):
            omega = FiniteSubset(g, rng.sample(pool, rng.randint(1, min(8, len(pool)))))
            ledger = build_ledger(omega, t, rng.randint(1, 3))
            assert verify_lemma("transport", ledger=ledger).holds
            assert verify_lemma("counting", ledger=ledger).holds
            assert verify_lemma("fiber", ledger=ledger).holds


def test_lemma_dispatch_errors():
    z = make_group("z:1")
    t = enumerate_ball(z, 3)
    with pytest.raises(BadParams):
        verify_lemma("bogus", table=t)
    with pytest.raises(BadParams):
        verify_lemma("counting", table=t)  # needs a ledger
    with pytest.raises(BadParams):
        verify_lemma("ray-lower", ledger=build_ledger(z_subset(z, [0]), t, 1))


# ----------------------------------------------- the full inequality chain

@pytest.mark.parametrize("desc", ("z:1", "z:2"))
def test_average_length_chain_reconstruction(desc):
    """Each link of the chain behind the averaged inequality, separately:
    length_sum(r) |bd W| >= sum_g |W_g| = sum_x |rays(x)| >= a/(1+a) |W| b_(r-1)."""
    group = make_group(desc)
    t = enumerate_ball(group, 12)
    rng = random.Random(9)
    pool = t.members(2)
    for _ in range(10):
        omega = FiniteSubset(group, rng.sample(pool, rng.randint(1, min(6, len(pool)))))
        for alpha in (Fraction(1, 2), Fraction(1)):
            r = phi(t, (1 + alpha) * len(omega))
            ledger = build_ledger(omega, t, r)
            bd = len(omega.boundary_set())
            lhs = t.length_sum[r] * bd
            mid = ledger.sum_omega_g
            assert lhs >= mid
            assert mid == ledger.sum_rays
            assert ledger.sum_rays >= alpha / (1 + alpha) * len(omega) * t.b[r - 1]
