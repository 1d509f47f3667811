import pytest

from tlfunctor.cycmat import CycMatrix
from tlfunctor.functor import (
    context,
    slice_tangle,
    verify_basics,
    verify_generators,
    verify_idempotent_images,
)
from tlfunctor.scalars import CyclotomicScalar, RingTag, quantum_int
from tlfunctor.tangles import Tangle


def test_cup_image():
    ctx = context(3)
    q = CyclotomicScalar.q(3)
    want = CycMatrix.from_entries(3, 4, 1, [(1, 0, q), (2, 0, -1)])
    assert ctx.tangle(Tangle.cup()) == want


def test_loop_maps_to_delta():
    ctx = context(5)
    loop = ctx.tangle(Tangle.cap()) @ ctx.tangle(Tangle.cup())
    assert loop == CycMatrix.scalar(5, -quantum_int(2, RingTag.root(5)))


def test_slicing_is_deterministic_and_complete():
    t = Tangle.from_text("3->1:[(0,3),(1,2)]")
    layers = slice_tangle(t)
    assert layers == slice_tangle(t)
    assert sum(1 for l in layers if l.kind == "cap") == 1


def test_extended_generators_split_f_top():
    ctx = context(3)
    total = ctx.I("+") @ ctx.P("+") + ctx.I("-") @ ctx.P("-")
    assert total == ctx.phi(5)
    assert (ctx.P("+") @ ctx.I("-")).is_zero()


@pytest.mark.parametrize("check", [verify_basics, verify_idempotent_images, verify_generators])
def test_functor_checks_at_level_three(check):
    rep = check(3)
    assert rep.ok, rep.to_text()
