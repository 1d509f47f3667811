import pytest

from tlfunctor import jw
from tlfunctor.errors import PoleAtRootOfUnity
from tlfunctor.scalars import RingTag
from tlfunctor.tangles import compose, tensor
from tlfunctor.verify import suite_jw_generic, suite_jw_recursions, suite_jw_root


def test_f2_has_two_terms():
    assert len(jw.build_f(2, RingTag.generic())) == 2


def test_f_specializes_exactly_outside_the_middle_range():
    R = RingTag.root(3)
    for m in range(6):
        if 3 <= m <= 4:
            with pytest.raises(PoleAtRootOfUnity):
                jw.build_f(m, R)
        else:
            jw.build_f(m, R)


def test_g_r_is_f_r_minus_one_tensor_f_one():
    R = RingTag.root(3)
    assert jw.build_g(3, R) == tensor(jw.build_f(2, R), jw.build_f(1, R))


def test_g_is_idempotent_at_the_root():
    R = RingTag.root(5)
    for m in range(5, 9):
        g = jw.build_g(m, R)
        assert compose(g, g) == g


@pytest.mark.parametrize("suite", [suite_jw_generic, suite_jw_recursions, suite_jw_root])
def test_suites_at_level_three(suite):
    rep = suite(3)
    assert rep.ok, rep.to_text()
