"""Group models, sparse group-ring arithmetic, and the z-expansion."""

import pytest

from biaslab.groupring import (FiniteGroupModel, GroupMismatch,
                               GroupRingElement, ZGMatrix, augment,
                               format_element, involute, multiply,
                               norm_element, parse_element, sigma, z_expand)
from biaslab.intlin import IntMatrix


def test_q8_model_laws():
    G = FiniteGroupModel(True, ())
    els = G.elements()
    assert len(els) == 8
    for g in els:
        assert G.mul(g, G.inv(g)) == G.identity()
        for h in els:
            for k in els:
                assert G.mul(G.mul(g, h), k) == G.mul(g, G.mul(h, k))
    x, y = G.generators()
    x2 = G.mul(x, x)
    assert x2 == G.mul(y, y)                      # x^2 = y^2
    assert G.mul(G.mul(y, x), G.inv(y)) == G.inv(x)   # y x y^-1 = x^-1


def test_ring_arithmetic_and_involution():
    G = FiniteGroupModel(False, (4,))
    a = GroupRingElement.of(G, G.generators()[0]) + GroupRingElement.one(G)
    b = sigma(GroupRingElement.of(G, G.generators()[0]), 3)
    assert augment(multiply(a, b)) == augment(a) * augment(b)
    assert involute(involute(a)).terms == a.terms
    assert multiply(norm_element(G), a).terms == \
        norm_element(G).scale(augment(a)).terms


def test_z_expand_is_multiplicative():
    G = FiniteGroupModel(False, (3, 3))
    x, y = (GroupRingElement.of(G, g) for g in G.generators())
    one = GroupRingElement.one(G)
    A = ZGMatrix.from_rows(G, [[x - one, y], [one, x + y.scale(-2)]])
    B = ZGMatrix.from_rows(G, [[y, one], [x, x - y]])
    assert z_expand(A * B) == z_expand(A) * z_expand(B)
    assert z_expand(A).rows == 2 * G.order


def test_augmentation_of_matrix():
    G = FiniteGroupModel(False, (3,))
    g = GroupRingElement.of(G, G.generators()[0])
    M = ZGMatrix.from_rows(G, [[sigma(g, 3)]])
    assert M.augmentation() == IntMatrix.from_rows([[3]])


def test_text_round_trip():
    G = FiniteGroupModel(True, (5, 5, 5))
    x, y, a, b, c = G.generators()
    e = (GroupRingElement.of(G, G.mul(x, a), 3)
         - GroupRingElement.one(G))
    text = format_element(e)
    assert parse_element(G, text).terms == e.terms


def test_group_mismatch_detected():
    G1 = FiniteGroupModel(False, (3,))
    G2 = FiniteGroupModel(False, (5,))
    with pytest.raises(GroupMismatch):
        multiply(GroupRingElement.one(G1), GroupRingElement.one(G2))
