import pytest

from tlfunctor.appendix import projector_simple, projector_top
from tlfunctor.uq import (
    hom_dimension,
    named_morphism,
    projective_module,
    simple_module,
    tensor_power,
)
from tlfunctor.verify import suite_appendix, suite_uq


def test_small_hom_spaces():
    assert hom_dimension(tensor_power(2, 3), tensor_power(2, 3)) == 2
    assert hom_dimension(tensor_power(1, 3), tensor_power(0, 3)) == 0
    assert hom_dimension(projective_module(3, 3), projective_module(3, 3)) == 2


def test_modules_satisfy_the_defining_relations():
    for M in (simple_module(2, 5), projective_module(6, 5), tensor_power(3, 5)):
        assert all(M.hopf_checks().values())


def test_gamma_maps_are_intertwiners():
    for s in "+-":
        assert named_morphism("gamma", 4, 3, s).is_intertwiner()


def test_kernel_projectors_are_idempotent():
    P = projector_simple(2, 3)
    assert P @ P == P
    T = projector_top(3, "+")
    assert T @ T == T and (T @ projector_top(3, "-")).is_zero()


@pytest.mark.parametrize("suite", [suite_uq, suite_appendix])
def test_suites_at_level_three(suite):
    rep = suite(3)
    assert rep.ok, rep.to_text()
