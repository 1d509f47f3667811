import json

from tlfunctor.scalars import RingTag, quantum_int
from tlfunctor.tangles import (
    Tangle,
    TLMorphism,
    catalan,
    compose,
    enumerate_tangles,
    tensor,
)


def test_catalan_counts_up_to_ten_points():
    for m in range(11):
        for mp in range(11 - m):
            want = catalan((m + mp) // 2) if (m + mp) % 2 == 0 else 0
            assert len(enumerate_tangles(m, mp)) == want


def test_loop_and_snake():
    ring = RingTag.generic()
    cup, cap = TLMorphism.cup(ring), TLMorphism.cap(ring)
    one = TLMorphism.identity(1, ring)
    assert compose(cap, cup) == -quantum_int(2, ring) * TLMorphism.identity(0, ring)
    assert compose(tensor(one, cap), tensor(cup, one)) == one


def test_composition_is_associative_on_basis_tangles():
    ring = RingTag.root(5)
    a = enumerate_tangles(2, 4)
    b = enumerate_tangles(4, 2)
    c = enumerate_tangles(2, 4)
    for x, y, z in zip(a, b, c):
        X, Y, Z = (TLMorphism.from_tangle(t, ring) for t in (x, y, z))
        assert compose(Z, compose(Y, X)) == compose(compose(Z, Y), X)


def test_text_and_json_round_trip():
    t = Tangle.from_text("3->1:[(0,3),(1,2)]")
    assert Tangle.from_text(t.to_text()) == t
    assert Tangle.from_json(json.loads(json.dumps(t.to_json()))) == t
    f = TLMorphism.from_tangle(t, RingTag.generic(), quantum_int(3, RingTag.generic()))
    assert TLMorphism.from_json(json.loads(json.dumps(f.to_json()))) == f


def test_cup_and_cap_positions():
    assert Tangle.cap_at(4, 2).source == 4 and Tangle.cap_at(4, 2).target == 2
    assert Tangle.cup_at(2, 1).target == 4
