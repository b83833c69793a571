import itertools

import pytest

import semimod as sm
from semimod import Flavor

from conftest import chain_module, diamond_m3


def D(n):
    return sm.construct_Dn(n)


def test_identity_is_hom():
    d5 = D(5).module
    assert sm.identity_hom(d5).is_hom


def test_constant_zero_is_hom_both_flavors():
    d2 = D(2).module
    zmap = sm.Hom(d2, d2, tuple(d2.zero for _ in range(d2.size)))
    assert zmap.is_hom
    free1 = sm.free_module(Flavor.FINF, 1)
    e2 = sm.construct_En(2).module
    zmap_f = sm.Hom(free1, e2, tuple(e2.zero for _ in range(free1.size)))
    assert zmap_f.is_hom  # absorbing zero makes the constant map a hom


def test_diamond_swap_is_hom_and_transposition_is_not():
    lat = D(2)
    mod = lat.module
    a11, a12, a21, a22 = (lat.label(*p) for p in ((1, 1), (1, 2), (2, 1), (2, 2)))
    swap = list(range(mod.size))
    swap[a12], swap[a21] = a21, a12
    assert sm.Hom(mod, mod, tuple(swap)).is_hom

    trans = list(range(mod.size))
    trans[a12], trans[a22] = a22, a12
    chk = sm.check_hom(sm.Hom(mod, mod, tuple(trans)))
    assert not chk.ok
    assert chk.kind == "add"
    assert chk.witness == (a12, a21)


def test_check_hom_rejects_flavor_mismatch():
    with pytest.raises(sm.FlavorMismatchError):
        sm.check_hom(sm.Hom(sm.scalar_module(Flavor.B), sm.scalar_module(Flavor.FINF), (0, 0)))


def test_compose_and_identity_unit():
    g, h = sm.canonical_section(3, Flavor.B)
    mod = g.target
    assert sm.compose(g, h).is_identity()
    for f in sm.enumerate_homs(mod, mod)[:10]:
        assert sm.compose(sm.identity_hom(mod), f).map == f.map
        assert sm.compose(f, sm.identity_hom(mod)).map == f.map


def test_compose_requires_matching_endpoints():
    b = sm.scalar_module(Flavor.B)
    d2 = D(2).module
    f = sm.Hom(b, b, (0, 1))
    g = sm.Hom(d2, d2, tuple(range(d2.size)))
    with pytest.raises(ValueError):
        sm.compose(g, f)


def test_composition_associative_on_sampled_triples():
    d3 = D(3).module
    homs = sm.enumerate_homs(d3, d3)[:12]
    for f, g, h in itertools.islice(itertools.product(homs, repeat=3), 60):
        left = sm.compose(sm.compose(f, g), h)
        right = sm.compose(f, sm.compose(g, h))
        assert left.map == right.map


def test_composition_of_injections_is_injective():
    i4 = sm.corner_embedding(4, Flavor.B)
    inj45 = sm.enumerate_homs(
        D(4).module, D(5).module, sm.HomConstraints(require_injective=True)
    )
    for q in inj45[:5]:
        assert sm.compose(q, i4).injective


def test_hom_b_scalars_has_two_maps():
    b = sm.scalar_module(Flavor.B)
    homs = sm.enumerate_homs(b, b)
    assert [h.map for h in homs] == [(0, 0), (0, 1)]
    brute = sm.brute_force_homs(b, b)
    assert [h.map for h in brute] == [(0, 0), (0, 1)]


def test_fully_pinned_e2_brute_force_within_budget():
    e2 = sm.construct_En(2).module
    pins = {e: e2.zero for e in range(e2.size)}
    homs = sm.brute_force_homs(e2, e2, sm.HomConstraints(pinned=pins))
    assert len(homs) == 1  # the constant zero map is the only candidate


def test_brute_force_budget_error():
    e2 = sm.construct_En(2).module
    with pytest.raises(sm.BudgetExceededError):
        sm.brute_force_homs(e2, e2, budget=10 ** 6)


def test_enumeration_budget_error():
    d4, d5 = D(4).module, D(5).module
    with pytest.raises(sm.BudgetExceededError):
        sm.enumerate_homs(d4, d5, budget=10)


ORACLE_OBJECTS_B = [
    lambda: sm.scalar_module(Flavor.B),
    lambda: D(2).module,
    lambda: sm.free_module(Flavor.B, 1),
    lambda: sm.free_module(Flavor.B, 2),
    lambda: sm.submodule_on(
        sm.construct_D0().module,
        sm.generated_submodule(
            sm.construct_D0().module,
            {sm.construct_D0().label(1, 2), sm.construct_D0().label(2, 1)},
        ),
    )[0],
    lambda: sm.submodule_on(
        sm.construct_D0().module,
        sm.generated_submodule(sm.construct_D0().module, {sm.construct_D0().label(3, 4)}),
    )[0],
]

ORACLE_OBJECTS_F = [
    lambda: sm.scalar_module(Flavor.FINF),
    lambda: sm.construct_En(2).module,
    lambda: sm.free_module(Flavor.FINF, 1),
]


def _oracle_pairs():
    bmods = [f() for f in ORACLE_OBJECTS_B]
    fmods = [f() for f in ORACLE_OBJECTS_F]
    for group in (bmods, fmods):
        for M in group:
            for N in group:
                if N.size ** M.size <= 10 ** 7:
                    yield M, N


@pytest.mark.parametrize("injective", [False, True])
def test_enumerate_agrees_with_brute_force(injective):
    cons = sm.HomConstraints(require_injective=injective)
    checked = 0
    for M, N in _oracle_pairs():
        fast = sm.enumerate_homs(M, N, cons)
        slow = sm.brute_force_homs(M, N, cons)
        assert [h.map for h in fast] == [h.map for h in slow], (M.names, N.names)
        checked += 1
    assert checked >= 20


@pytest.mark.parametrize("flavor", [Flavor.B, Flavor.FINF])
def test_enumerate_agrees_on_random_quotients(flavor):
    # random quotients of free modules give a wide space of valid modules
    import random as _random

    rng = _random.Random(99 if flavor is Flavor.B else 77)
    free = sm.free_module(flavor, 2)
    mods = []
    for _ in range(6):
        pairs = [
            (rng.randrange(free.size), rng.randrange(free.size))
            for _ in range(rng.randint(1, 2))
        ]
        q = sm.quotient_by_congruence(free, sm.generated_congruence(free, pairs))
        mods.append(q)
    for M in mods:
        for N in mods:
            if N.size ** M.size > 10 ** 6:
                continue
            fast = [h.map for h in sm.enumerate_homs(M, N)]
            slow = [h.map for h in sm.brute_force_homs(M, N)]
            assert fast == slow, (M.names, N.names)


def test_enumerate_with_pins_agrees_with_brute_force():
    d2 = D(2).module
    lat = D(2)
    pins = {lat.label(1, 2): lat.label(2, 2)}
    cons = sm.HomConstraints(pinned=pins)
    fast = sm.enumerate_homs(d2, d2, cons)
    slow = sm.brute_force_homs(d2, d2, cons)
    assert [h.map for h in fast] == [h.map for h in slow]
    assert all(h.map[lat.label(1, 2)] == lat.label(2, 2) for h in fast)


def test_enumerate_with_allowed_sets_agrees_with_brute_force():
    import random as _random

    rng = _random.Random(5)
    d2 = D(2).module
    for _ in range(15):
        allowed = {
            e: rng.sample(range(d2.size), rng.randint(1, d2.size))
            for e in rng.sample(range(d2.size), rng.randint(0, d2.size))
        }
        cons = sm.HomConstraints(allowed=allowed)
        fast = [h.map for h in sm.enumerate_homs(d2, d2, cons)]
        slow = [h.map for h in sm.brute_force_homs(d2, d2, cons)]
        assert fast == slow, allowed


def test_enumeration_is_deterministic():
    d0 = sm.construct_D0().module
    first = sm.enumerate_homs(d0, d0, sm.HomConstraints(require_injective=True))
    second = sm.enumerate_homs(d0, d0, sm.HomConstraints(require_injective=True))
    assert [h.map for h in first] == [h.map for h in second]
    assert [h.map for h in first] == sorted(h.map for h in first)


def test_every_enumerated_hom_passes_check():
    d0 = sm.construct_D0().module
    d4 = D(4).module
    for h in sm.enumerate_homs(d0, d4, sm.HomConstraints(require_injective=True)):
        assert h.is_hom and h.injective


def test_rigidity_pin_conflict_gives_empty():
    assert sm.rigidity_check(2, 3, Flavor.B) == []


def test_find_right_inverse_of_canonical_surjection():
    for n in range(2, 7):
        g, _ = sm.canonical_section(n, Flavor.B)
        h = sm.find_right_inverse(g)
        assert h is not None
        assert sm.compose(g, h).is_identity()


def test_find_left_inverse_of_corner_embedding():
    emb = sm.corner_embedding(4, Flavor.B)
    w = sm.find_left_inverse(emb)
    assert w is not None
    assert sm.compose(w, emb).is_identity()
    # the printed case-formula retraction is among the valid answers
    j = sm.corner_retraction(4, Flavor.B)
    assert sm.compose(j, emb).is_identity()


def test_find_left_inverse_finf_corner_embedding():
    emb = sm.corner_embedding(4, Flavor.FINF)
    assert emb.injective
    w = sm.find_left_inverse(emb)
    assert w is not None
    assert sm.compose(w, emb).is_identity()


def test_chain_into_m3_has_a_retraction():
    # the collapse-to-top retraction exists; the search must find one
    m3 = diamond_m3()
    ch = chain_module(3)
    incl = sm.Hom(ch, m3, (m3.index_of_name["0"], m3.index_of_name["a"], m3.index_of_name["1"]))
    assert incl.is_hom and incl.injective
    w = sm.find_left_inverse(incl)
    assert w is not None
    assert sm.compose(w, incl).is_identity()


def test_m3_into_free_has_no_left_inverse():
    # retracts of distributive lattices are distributive, so none can exist
    m3 = diamond_m3()
    free = sm.free_module(Flavor.B, 3)
    img = {
        "0": [],
        "a": [(0, 1), (1, 1)],
        "b": [(1, 1), (2, 1)],
        "c": [(0, 1), (2, 1)],
        "1": [(0, 1), (1, 1), (2, 1)],
    }
    emb = sm.Hom(
        m3, free, tuple(sm.element_of_support(free, img[m3.name(e)]) for e in range(m3.size))
    )
    assert emb.is_hom and emb.injective
    assert sm.find_left_inverse(emb) is None


def test_find_left_inverse_of_noninjective_is_none():
    d2 = D(2).module
    zmap = sm.Hom(d2, d2, tuple(d2.zero for _ in range(d2.size)))
    assert sm.find_left_inverse(zmap) is None


def test_split_witnesses_imply_flags():
    g, h = sm.canonical_section(2, Flavor.B)
    assert g.surjective  # has a right inverse h
    assert h.injective  # has a left inverse g
    assert sm.compose(g, h).is_identity()
