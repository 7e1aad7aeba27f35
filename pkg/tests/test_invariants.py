"""Finite signed-permutation actions, Reynolds averaging, invariant rings."""

from fractions import Fraction

import pytest

from chowcheck.exprparser import parse_polynomial
from chowcheck.groebner import subalgebra_member
from chowcheck.invariants import (
    Character,
    GroupAction,
    InvariantError,
    algebra_generators,
    invariant_basis,
    invariant_presentation,
    isotypic_component,
)
from chowcheck.polyarith import Polynomial, VarTable


def swap_action():
    table = VarTable(["t1", "t2"])
    return table, GroupAction(table, [{"t1": "t2", "t2": "t1"}])


def signed_pair_action():
    """(t1, t2, r) -> (t2, t1, -r): the two-node stratum symmetry."""
    table = VarTable(["t1", "t2", "r"])
    return table, GroupAction(table, [{"t1": "t2", "t2": "t1", "r": "-r"}])


def s3_action():
    table = VarTable(["w1", "w2", "w3"])
    return table, GroupAction(
        table,
        [
            {"w1": "w2", "w2": "w1", "w3": "w3"},
            {"w1": "w2", "w2": "w3", "w3": "w1"},
        ],
    )


def test_group_closure_and_order():
    _, c2 = swap_action()
    assert c2.order == 2
    _, s3 = s3_action()
    assert s3.order == 6
    _, signed = signed_pair_action()
    assert signed.order == 2


def test_group_generator_validation():
    table = VarTable(["x", "y"], [1, 2])
    with pytest.raises(InvariantError):
        GroupAction(table, [{"x": "y", "y": "x"}])  # weights differ
    with pytest.raises(InvariantError):
        GroupAction(VarTable(["x", "y"]), [{"x": "y"}])  # not total
    with pytest.raises(InvariantError):
        GroupAction(VarTable(["x", "y"]), [{"x": "y", "y": "y"}])  # not bijective


def test_action_is_a_ring_map():
    table, s3 = s3_action()
    f = parse_polynomial("w1^2*w2 - w3", table)
    g = parse_polynomial("w1 + 2*w2*w3", table)
    for element in s3.elements:
        act = lambda h: s3.act(element, h)  # noqa: E731
        assert act(f * g) == act(f) * act(g)
        assert act(f + g) == act(f) + act(g)


def test_signed_action_tracks_parity():
    table, signed = signed_pair_action()
    r = Polynomial.variable(table, "r")
    flip = next(e for e in signed.elements if signed.act(e, r) == -r)
    assert signed.act(flip, r**2) == r**2
    t1 = Polynomial.variable(table, "t1")
    assert signed.act(flip, t1 * r) == -(Polynomial.variable(table, "t2") * r)


def test_reynolds_laws():
    table, signed = signed_pair_action()
    probes = [
        parse_polynomial("t1^2*r + t2", table),
        parse_polynomial("r^3 - t1*t2*r", table),
        parse_polynomial("t1 + t2 + r", table),
    ]
    for f in probes:
        rf = signed.reynolds(f)
        assert signed.reynolds(rf) == rf  # projector
        assert signed.is_invariant(rf)  # lands in the invariants
        assert signed.transfer(f) == signed.order * rf  # transfer = |G| R
    inv = parse_polynomial("t1*t2", table)
    assert signed.reynolds(inv) == inv  # identity on invariants


def test_invariant_basis_dimensions_c2():
    _, c2 = swap_action()
    # symmetric polynomials in two letters: dims 1, 1, 2, 2, 3 in degrees 0..4
    assert [len(invariant_basis(c2, d)) for d in range(5)] == [1, 1, 2, 2, 3]


def test_algebra_generators_c2_swap():
    table, c2 = swap_action()
    gens = algebra_generators(c2)
    expected = [
        parse_polynomial("t1 + t2", table),
        parse_polynomial("t1^2 + t2^2", table),
    ]
    named = lambda fs: [(f"z{i+1}", f) for i, f in enumerate(fs)]  # noqa: E731
    for f in expected:
        assert subalgebra_member(f, named(gens)) is not None
    for f in gens:
        assert subalgebra_member(f, named(expected)) is not None


def test_algebra_generators_signed_pair():
    """The sign flip pairs the odd powers of r with the alternating letters."""
    table, signed = signed_pair_action()
    gens = algebra_generators(signed)
    degs = sorted(g.total_degree() for g in gens)
    assert degs == [1, 2, 2, 2]  # Noether bound |G| = 2
    for g in gens:
        assert signed.is_invariant(g)


def test_invariant_presentation_principal_kernel():
    table, signed = signed_pair_action()
    pres = invariant_presentation(signed)
    assert pres.table.weights == (1, 2, 2, 2)
    rels = pres.relations.groebner(pres.order)
    assert len(rels) == 1
    # z3^2 = z4*(2*z2 - z1^2) in the canonical generators
    expected = parse_polynomial("z3^2 - z4*(2*z2 - z1^2)", pres.table)
    assert pres.relations.member(expected)
    assert [str(r) for r in rels] == ["z1^2*z4 + z3^2 - 2*z2*z4"]


def test_invariant_presentation_rejects_insufficient_generators():
    table, c2 = swap_action()
    only_linear = [parse_polynomial("t1 + t2", table)]
    with pytest.raises(InvariantError):
        invariant_presentation(c2, names=["z1"], generators=only_linear)


def test_invariant_presentation_rejects_non_invariant():
    table, c2 = swap_action()
    with pytest.raises(InvariantError):
        invariant_presentation(
            c2,
            names=["z1", "z2"],
            generators=[
                parse_polynomial("t1", table),
                parse_polynomial("t1*t2", table),
            ],
        )


def test_s3_power_sums_generate():
    table, s3 = s3_action()
    power_sums = [
        parse_polynomial("w1 + w2 + w3", table),
        parse_polynomial("w1^2 + w2^2 + w3^2", table),
        parse_polynomial("w1^3 + w2^3 + w3^3", table),
    ]
    pres = invariant_presentation(s3, names=["p1", "p2", "p3"],
                                  generators=power_sums)
    assert pres.is_free()
    assert pres.table.weights == (1, 2, 3)


def test_character_isotypic_component():
    table, s3 = s3_action()
    sign = Character.determinant(s3)
    vandermonde = parse_polynomial("(w1 - w2)*(w1 - w3)*(w2 - w3)", table)
    assert isotypic_component(s3, sign, vandermonde) == vandermonde
    proj = isotypic_component(s3, sign, parse_polynomial("w1^2*w2", table))
    assert not proj.is_zero()
    for g in s3.elements:
        assert s3.act(g, proj) == sign(g) * proj
    # the alternating degree-3 polynomials are spanned by the Vandermonde
    assert len(invariant_basis(s3, 3, character=sign)) == 1


def test_determinant_character_of_signed_swap_is_trivial():
    """Swapping two letters and flipping one sign has determinant +1."""
    _, signed = signed_pair_action()
    det = Character.determinant(signed)
    assert all(det(g) == 1 for g in signed.elements)
