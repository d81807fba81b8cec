import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from brauer_y02.cohomology import (
    CyclicModule,
    S3Representation,
    annihilated_by,
    brute_force_cohomology,
    builtin_rep,
    cohomology,
    parse_module_fixture,
    tensor_with,
    trivial_module,
    units_sequence_check,
)
from brauer_y02.errors import DegreeOutOfRange, InvalidModule, MatrixParseError, TooLarge
from brauer_y02.intlinalg import FinAbGroup, IntMatrix
from oracles import c2_cohomology_closed_form

Z = FinAbGroup((), 1)
REPS = ("triv", "sgn", "rho_tilde_restricted")

small_groups = st.lists(st.sampled_from([0, 2, 3, 4, 6, 8]), max_size=3).map(FinAbGroup.from_orders)
finite_small_groups = st.lists(st.sampled_from([2, 3, 4, 5, 6, 8]), max_size=3).map(FinAbGroup.from_orders)


@pytest.mark.parametrize("rep", REPS)
@pytest.mark.parametrize("orders", [[0], [2], [3], [4], [6], [0, 2]])
def test_closed_form_table(rep, orders):
    M = FinAbGroup.from_orders(orders)
    mod = tensor_with(builtin_rep(rep), M)
    for i in range(5):
        assert cohomology(mod, i) == c2_cohomology_closed_form(rep, M, i)


@settings(max_examples=60, deadline=None)
@given(st.sampled_from(REPS), small_groups, st.integers(0, 8))
def test_closed_form_property(rep, M, i):
    assert cohomology(tensor_with(builtin_rep(rep), M), i) == c2_cohomology_closed_form(rep, M, i)


@settings(max_examples=40, deadline=None)
@given(st.sampled_from(REPS), small_groups, st.integers(1, 6))
def test_periodicity_and_annihilation(rep, M, i):
    mod = tensor_with(builtin_rep(rep), M)
    H = cohomology(mod, i)
    assert H == cohomology(mod, i + 2)
    assert annihilated_by(H, 2)


@settings(max_examples=40, deadline=None)
@given(st.sampled_from(["triv", "sgn"]), finite_small_groups, st.integers(0, 2))
def test_brute_force_agrees(rep, M, i):
    mod = tensor_with(builtin_rep(rep), M)
    assert brute_force_cohomology(mod, i) == cohomology(mod, i)


def test_brute_force_on_regular_representation():
    for orders in ([2], [3], [4], [2, 2]):
        mod = tensor_with(builtin_rep("rho_tilde_restricted"), FinAbGroup.from_orders(orders))
        for i in range(3):
            assert brute_force_cohomology(mod, i) == cohomology(mod, i)


def test_brute_force_on_cyclic_group_of_order_three():
    # Z/7 with s acting by 2 (2^3 = 8 = 1 mod 7)
    mod = CyclicModule(3, IntMatrix.from_rows([[7]]), IntMatrix.from_rows([[2]]))
    for i in range(3):
        assert brute_force_cohomology(mod, i) == cohomology(mod, i)
    # trivial Z/3 over C_3: H^1 = H^2 = Z/3
    triv3 = trivial_module(FinAbGroup((3,)), n=3)
    assert brute_force_cohomology(triv3, 2) == cohomology(triv3, 2) == FinAbGroup((3,))


def test_permutation_fast_path_matches_matrix_action():
    import numpy as np
    from brauer_y02.cohomology import _FiniteModel

    for rep in ("sgn", "rho_tilde_restricted"):
        model = _FiniteModel(tensor_with(builtin_rep(rep), FinAbGroup((2, 6))))
        assert model.perm is not None
        fast = model.act(model.elements)
        model.perm = None
        assert np.array_equal(fast, model.act(model.elements))


def test_brute_force_limits():
    with pytest.raises(TooLarge):
        brute_force_cohomology(tensor_with(builtin_rep("triv"), Z), 0)
    with pytest.raises(DegreeOutOfRange):
        brute_force_cohomology(tensor_with(builtin_rep("triv"), FinAbGroup((2,))), 3)
    with pytest.raises(DegreeOutOfRange):
        cohomology(tensor_with(builtin_rep("triv"), Z), 13)


def test_restricted_representations():
    rho = builtin_rep("rho")
    assert isinstance(rho, S3Representation)
    res = rho.restrict_to_c2()
    # the permutation module restricted to C_2 is triv (+) regular
    split = builtin_rep("triv").direct_sum(builtin_rep("rho_tilde_restricted"))
    for i in range(4):
        assert cohomology(res, i) == cohomology(split, i)
    assert cohomology(res, 0) == FinAbGroup((), 2)
    rt = builtin_rep("rho_tilde")
    assert rt.sigma ** 3 == IntMatrix.identity(2)
    assert rt.tau ** 2 == IntMatrix.identity(2)
    # braid relation tau sigma tau = sigma^-1
    assert rt.tau @ rt.sigma @ rt.tau == rt.sigma ** 2


def test_invalid_modules_rejected():
    with pytest.raises(InvalidModule):
        CyclicModule(2, IntMatrix.zeros(1, 0), IntMatrix.from_rows([[2]]))
    with pytest.raises(InvalidModule):
        # Z/4 with s = 2 does not come from an automorphism of order 2
        CyclicModule(2, IntMatrix.from_rows([[4]]), IntMatrix.from_rows([[2]]))
    with pytest.raises(InvalidModule):
        CyclicModule(2, IntMatrix.from_rows([[3, 0], [0, 1]]), IntMatrix.from_rows([[0, 1], [1, 0]]))


def test_units_sequence_check():
    report = units_sequence_check(FinAbGroup((2,), 1))
    assert report.passed
    assert report.degrees[2][0] == FinAbGroup((2, 2))


def test_parse_module_fixture(tmp_path):
    text = "# Z/4 with s = -1\n2\n\n4\n\n-1\n"
    mod = parse_module_fixture(text)
    assert cohomology(mod, 1) == FinAbGroup((2,))
    with pytest.raises(MatrixParseError, match="line"):
        parse_module_fixture("2\n\n4\n")
    with pytest.raises(MatrixParseError, match="line 1"):
        parse_module_fixture("two\n\n4\n\n1\n")
