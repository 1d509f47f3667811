import json

import pytest

from tlfunctor.errors import PoleAtRootOfUnity
from tlfunctor.scalars import (
    CyclotomicScalar,
    GenericScalar,
    RingTag,
    quantum_factorial,
    quantum_int,
    scalar_from_json,
    specialize,
)

G = RingTag.generic()


@pytest.mark.parametrize("r", [3, 5, 7])
def test_quantum_integers_vanish_exactly_at_multiples_of_r(r):
    R = RingTag.root(r)
    for k in range(-2 * r, 2 * r + 1):
        assert quantum_int(k, R).is_zero() == (k % r == 0)


@pytest.mark.parametrize("r", [3, 5])
def test_reflection_and_periodicity(r):
    R = RingTag.root(r)
    for k in range(1, r):
        assert quantum_int(r - k, R) == -quantum_int(k, R)
        assert quantum_int(k + r, R) == quantum_int(k, R)


def test_loop_value_is_minus_quantum_two():
    q = CyclotomicScalar.q(5)
    assert -quantum_int(2, RingTag.root(5)) == -(q + q.inverse())


def test_specialization_agrees_with_root_arithmetic():
    for k in range(1, 5):
        assert specialize(quantum_int(k, G), 5) == quantum_int(k, RingTag.root(5))
    assert specialize(quantum_factorial(4, G), 5) == quantum_factorial(4, RingTag.root(5))


def test_specializing_a_pole_raises():
    with pytest.raises(PoleAtRootOfUnity):
        specialize(1 / quantum_int(3, G), 3)


def test_json_round_trips():
    x = quantum_int(3, G) / quantum_int(4, G)
    assert scalar_from_json(json.loads(json.dumps(x.to_json()))) == x
    y = quantum_factorial(3, RingTag.root(7)) / quantum_int(2, RingTag.root(7))
    assert scalar_from_json(json.loads(json.dumps(y.to_json()))) == y


def test_field_operations():
    a = CyclotomicScalar.q(5, 2) + 3
    assert a * a.inverse() == CyclotomicScalar.from_fraction(5, 1)
    assert isinstance(quantum_int(2, G), GenericScalar)
