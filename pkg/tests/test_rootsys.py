"""Root system construction, reflections, and the invariant form."""

import json
from fractions import Fraction

import pytest

from weylcensus.rootsys import (
    CartanMatrix,
    NotFiniteTypeError,
    build_root_system,
    pairing,
    parse_label,
    positive_root_count,
    positive_roots_json,
    reflect,
    root_system,
    weyl_group_order,
)

ALL_LABELS = (
    [f"A{n}" for n in range(1, 9)]
    + [f"B{n}" for n in range(2, 8)]
    + [f"C{n}" for n in range(2, 8)]
    + [f"D{n}" for n in range(4, 8)]
    + ["E6", "E7", "F4", "G2"]
)


@pytest.mark.parametrize("label", ALL_LABELS)
def test_root_count_matches_closed_form(label):
    family, rank = parse_label(label)
    rs = root_system(label)
    assert rs.nroots == positive_root_count(family, rank)
    assert rs.rank == rank


def test_a2_roots():
    rs = root_system("A2")
    assert rs.positive_roots == ((1, 0), (0, 1), (1, 1))


def test_b2_roots():
    rs = root_system("B2")
    assert rs.positive_roots == ((1, 0), (0, 1), (1, 1), (1, 2))


def test_g2_roots():
    rs = root_system("G2")
    assert rs.positive_roots == ((1, 0), (0, 1), (1, 1), (2, 1), (3, 1), (3, 2))


@pytest.mark.parametrize("label", ["A3", "B4", "D4", "F4"])
def test_root_ordering(label):
    """Simple roots first in Cartan order, then by height, then lex."""
    rs = root_system(label)
    n = rs.rank
    for i in range(n):
        assert rs.positive_roots[i] == tuple(int(j == i) for j in range(n))
    rest = rs.positive_roots[n:]
    keys = [(sum(r), r) for r in rest]
    assert keys == sorted(keys)
    assert all(sum(r) >= 2 for r in rest)
    assert rs.root_index == {r: k for k, r in enumerate(rs.positive_roots)}


def test_reflect_simple_cases():
    a2 = root_system("A2")
    assert reflect(a2, 1, (1, 0)) == (-1, 0)
    assert reflect(a2, 1, (0, 1)) == (1, 1)
    assert reflect(a2, 2, (1, 1)) == (1, 0)
    g2 = root_system("G2")
    assert reflect(g2, 1, (0, 1)) == (3, 1)
    assert reflect(g2, 2, (1, 0)) == (1, 1)


@pytest.mark.parametrize("label", ["A3", "B3", "G2"])
def test_reflect_is_an_involution(label):
    rs = root_system(label)
    for r in rs.positive_roots:
        for signed in (r, tuple(-c for c in r)):
            for i in range(1, rs.rank + 1):
                assert reflect(rs, i, reflect(rs, i, signed)) == signed


@pytest.mark.parametrize("label", ["A3", "B3", "G2"])
def test_reflect_permutes_other_positive_roots(label):
    # s_i sends a_i to -a_i and permutes the remaining positive roots.
    rs = root_system(label)
    for i in range(1, rs.rank + 1):
        alpha = rs.positive_roots[i - 1]
        images = set()
        for r in rs.positive_roots:
            img = reflect(rs, i, r)
            if r == alpha:
                assert img == tuple(-c for c in r)
            else:
                assert img in rs.root_index
            images.add(img)
        assert len(images) == rs.nroots


def test_reflect_rejects_bad_input():
    rs = root_system("A2")
    with pytest.raises(ValueError):
        reflect(rs, 0, (1, 0))
    with pytest.raises(ValueError):
        reflect(rs, 3, (1, 0))
    with pytest.raises(ValueError):
        reflect(rs, 1, (2, 0))


def test_simple_perms_match_reflect():
    for label in ("B3", "G2"):
        rs = root_system(label)
        for i in range(rs.rank):
            for j, r in enumerate(rs.positive_roots):
                v = int(rs.simple_perms[i, j])
                img = reflect(rs, i + 1, r)
                if v < 0:
                    assert j == i and img == tuple(-c for c in r)
                else:
                    assert rs.positive_roots[v - 1] == img


def test_pairing_values():
    a2 = root_system("A2")
    assert pairing(a2, (1, 0), (1, 0)) == 2
    assert pairing(a2, (1, 0), (0, 1)) == -1
    b2 = root_system("B2")
    assert pairing(b2, (1, 0), (1, 0)) == 4
    assert pairing(b2, (0, 1), (0, 1)) == 2
    assert pairing(b2, (1, 0), (0, 1)) == -2
    g2 = root_system("G2")
    assert pairing(g2, (1, 0), (1, 0)) == 2
    assert pairing(g2, (0, 1), (0, 1)) == 6
    assert pairing(g2, (1, 0), (0, 1)) == -3
    f4 = root_system("F4")
    diag = [pairing(f4, r, r) for r in f4.positive_roots[:4]]
    assert diag == [4, 4, 2, 2]


@pytest.mark.parametrize("label", ["B2", "G2", "A3"])
def test_pairing_symmetric_and_reflection_invariant(label):
    rs = root_system(label)
    for b in rs.positive_roots:
        for g in rs.positive_roots:
            v = pairing(rs, b, g)
            assert v == pairing(rs, g, b)
            for i in range(1, rs.rank + 1):
                assert pairing(rs, reflect(rs, i, b), reflect(rs, i, g)) == v


@pytest.mark.parametrize("label", ["A3", "B3", "C3", "G2"])
def test_reflection_coefficient_is_cartan_pairing(label):
    # s_i(b) = b - <b, a_i^v> a_i with <b, a_i^v> = 2(b,a_i)/(a_i,a_i).
    rs = root_system(label)
    for b in rs.positive_roots:
        for i in range(1, rs.rank + 1):
            alpha = rs.positive_roots[i - 1]
            c = 2 * pairing(rs, b, alpha) / pairing(rs, alpha, alpha)
            assert c.denominator == 1
            expected = tuple(x - int(c) * a for x, a in zip(b, alpha))
            assert reflect(rs, i, b) == expected


@pytest.mark.parametrize(
    "label,lengths",
    [("A3", {2}), ("B3", {2, 4}), ("C3", {2, 4}), ("F4", {2, 4}), ("G2", {2, 6})],
)
def test_squared_lengths(label, lengths):
    rs = root_system(label)
    assert {pairing(rs, r, r) for r in rs.positive_roots} == set(
        Fraction(v) for v in lengths
    )


def test_not_finite_type_rejected():
    with pytest.raises(NotFiniteTypeError):
        CartanMatrix.from_matrix([[2, -2], [-2, 2]])  # affine A1
    with pytest.raises(NotFiniteTypeError):
        CartanMatrix.from_matrix([[2, -1], [-4, 2]])
    with pytest.raises(NotFiniteTypeError):
        CartanMatrix.from_matrix([[2, -3], [-2, 2]])


def test_e8_exceeds_fingerprint_width():
    # 120 positive roots do not fit the 64-bit inversion encoding.
    with pytest.raises(NotFiniteTypeError, match="64"):
        root_system("E8")


def test_invalid_matrices_rejected():
    with pytest.raises(ValueError):
        CartanMatrix.from_matrix([[1, -1], [-1, 2]])
    with pytest.raises(ValueError):
        CartanMatrix.from_matrix([[2, 1], [-1, 2]])
    with pytest.raises(ValueError):
        CartanMatrix.from_matrix([[2, -1, 0], [-1, 2, -1]])
    with pytest.raises(ValueError):
        CartanMatrix.from_matrix([[2, 0], [-1, 2]])  # asymmetric zero pattern


def test_parse_label():
    assert parse_label("A1") == ("A", 1)
    assert parse_label("B12") == ("B", 12)
    for bad in ("H3", "b2", "A", "12", "A-1", ""):
        with pytest.raises(ValueError):
            parse_label(bad)
    for unsupported in ("A0", "B1", "D3", "E9", "F5", "G3"):
        with pytest.raises(ValueError):
            CartanMatrix.from_label(unsupported)


def test_weyl_group_order_closed_forms():
    assert weyl_group_order("A", 3) == 24
    assert weyl_group_order("B", 4) == 384
    assert weyl_group_order("D", 4) == 192
    assert weyl_group_order("E", 6) == 51840
    assert weyl_group_order("F", 4) == 1152
    assert weyl_group_order("G", 2) == 12


def test_positive_roots_json():
    rs = root_system("A2")
    assert positive_roots_json(rs) == "[[1, 0], [0, 1], [1, 1]]"
    rs = root_system("B4")
    parsed = json.loads(positive_roots_json(rs))
    assert [tuple(r) for r in parsed] == list(rs.positive_roots)


def test_custom_matrix_matches_builtin():
    custom = CartanMatrix.from_matrix([[2, -1], [-1, 2]])
    assert custom.label == "custom"
    assert build_root_system(custom).positive_roots == root_system("A2").positive_roots


def test_reducible_systems():
    rs = build_root_system(CartanMatrix.from_matrix([[2, 0], [0, 2]]))
    assert rs.positive_roots == ((1, 0), (0, 1))
    # Form is normalized per component: B2 x A1 has diagonal (4, 2, 2).
    rs = build_root_system(CartanMatrix.from_matrix([[2, -1, 0], [-2, 2, 0], [0, 0, 2]]))
    assert rs.nroots == 5
    assert [pairing(rs, r, r) for r in rs.positive_roots[:3]] == [4, 2, 2]
