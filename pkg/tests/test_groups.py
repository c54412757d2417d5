import itertools

import numpy as np
import pytest
from hypothesis import given, strategies as st

from symrigid.errors import ContainsInversion, NotIndex2
from symrigid.groups import (
    augment,
    deaugment,
    direct_product_with_inversion,
    from_generators,
    index2_subgroups,
    involution_group,
    involution_pairings,
    make_schoenflies,
    pair_representation,
    parse_schoenflies,
    schoenflies_string,
    sphere_pairings,
)

ORDERS = [
    ("Cs", 1, 2), ("Ci", 1, 2), ("Cn", 1, 1), ("Cn", 5, 5), ("Cnv", 3, 6), ("Cnh", 4, 8),
    ("S2n", 3, 6), ("Dn", 4, 8), ("Dnh", 3, 12), ("Dnd", 2, 8), ("Dnd", 3, 12), ("Td", 1, 24), ("O", 1, 24),
]

catalog = st.sampled_from([(lab, n) for lab, n, _ in ORDERS] + [("Cnv", 6), ("Dnd", 4), ("Cnh", 5)])


@pytest.mark.parametrize("label,n,order", ORDERS)
def test_catalog_orders(label, n, order):
    G = make_schoenflies(3, label, n)
    assert G.order == order
    G.check()


@pytest.mark.parametrize("label,n,order", [("Cs", 1, 2), ("Cn", 4, 4), ("Cnv", 3, 6)])
def test_planar_catalog(label, n, order):
    G = make_schoenflies(2, label, n)
    assert G.order == order and G.dim == 2


@given(catalog)
def test_tables_match_matrix_products(params):
    G = make_schoenflies(3, *params)
    for g, h in itertools.product(range(G.order), repeat=2):
        assert np.allclose(G.rep[g] @ G.rep[h], G.rep[G.mult[g, h]])
    for g in range(G.order):
        assert np.allclose(G.rep[G.inv[g]], G.rep[g].T)


def test_dihedral_families_are_distinct():
    # D2d has no inversion, D2h does; D3d has it because n is odd
    assert not make_schoenflies(3, "Dnd", 2).contains_inversion()
    assert make_schoenflies(3, "Dnh", 2).contains_inversion()
    assert make_schoenflies(3, "Dnd", 3).contains_inversion()
    assert not make_schoenflies(3, "Dnd", 2).same_matrices(make_schoenflies(3, "Dnh", 2))


def test_generator_ids_follow_input_order():
    a, b = np.diag([-1.0, 1.0, 1.0]), np.diag([1.0, -1.0, 1.0])
    G = from_generators([a, b])
    assert G.generators == (1, 2)
    assert np.allclose(G.rep[1], a) and np.allclose(G.rep[2], b)
    assert G.order == 4


def test_from_generators_rejects_bad_input():
    with pytest.raises(ValueError):
        from_generators([np.array([[1.0, 1.0], [0.0, 1.0]])])
    with pytest.raises(ValueError):
        from_generators([np.eye(2), np.eye(2)])


@pytest.mark.parametrize("label,n,count", [("Cn", 4, 1), ("Cnv", 2, 3), ("Cn", 3, 0), ("Td", 1, 1), ("Cnv", 3, 1)])
def test_index2_subgroup_counts(label, n, count):
    G = make_schoenflies(3, label, n)
    subs = index2_subgroups(G)
    assert len(subs) == count
    for h in subs:
        assert 2 * h.order == G.order
        assert all(G.mult[a, b] in h.members for a in h.members for b in h.members)


def test_pair_representation_errors():
    c4 = make_schoenflies(3, "Cn", 4)
    with pytest.raises(NotIndex2):
        pair_representation(c4, c4.subgroup({0}))
    ci = make_schoenflies(3, "Ci")
    with pytest.raises(ContainsInversion):
        pair_representation(ci, ci.subgroup({0}))


def test_sphere_pairings_match_catalog():
    pairs = sphere_pairings()
    tags = {p.tag for p in pairs}
    required = {"C2~Cs", "C2~C1h", "C6~C3h", "C10~C5h", "C4~S4", "C8~S8", "Td~O",
                "C4v~D2d", "C8v~D4d", "C2v~D1h", "C6v~D3h"} | {f"C{n}v~D{n}" for n in range(2, 7)}
    assert required <= tags
    assert len(pairs) == 17
    for p in pairs:
        twisted = pair_representation(p.left, p.subgroup)
        assert twisted.conjugate(p.conj).same_matrices(p.right), p.tag


def test_involution_pairings_on_three_sphere():
    pairs = involution_pairings(4)
    assert len(pairs) == 14
    for p in pairs:
        tw = pair_representation(p.left, p.subgroup)
        assert tw.same_matrices(p.right)
        # fixed axes are complementary
        assert np.allclose(np.diag(p.left.rep[1]), -np.diag(p.right.rep[1]))


def test_involution_group_rejects_identity():
    with pytest.raises(ValueError):
        involution_group(3, [1, 2, 3])


@given(catalog)
def test_augment_roundtrip(params):
    G = make_schoenflies(3, *params)
    A = augment(G)
    assert A.dim == 4 and deaugment(A).same_matrices(G)


def test_direct_product_with_inversion():
    G = make_schoenflies(3, "Cnv", 3)
    H = direct_product_with_inversion(G)
    assert H.order == 12 and H.contains_inversion()
    H.check()
    with pytest.raises(ContainsInversion):
        direct_product_with_inversion(H)


@pytest.mark.parametrize("text,parsed", [("D3h", ("Dnh", 3)), ("S4", ("S2n", 2)), ("Cs", ("Cs", 1)), ("C5v", ("Cnv", 5))])
def test_schoenflies_names(text, parsed):
    assert parse_schoenflies(text) == parsed
    assert schoenflies_string(*parsed) == text
