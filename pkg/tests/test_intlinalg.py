from itertools import combinations
from math import gcd

import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from brauer_y02.errors import ContainmentViolation, MatrixParseError
from brauer_y02.intlinalg import (
    FinAbGroup,
    IntMatrix,
    cokernel,
    is_unimodular,
    kernel_basis,
    lattice_coordinates,
    lattice_quotient,
    parse_matrix,
    smith_normal_form,
    subquotient,
)


def matrices(max_rows=4, max_cols=4, bound=12):
    return st.integers(1, max_rows).flatmap(
        lambda m: st.integers(1, max_cols).flatmap(
            lambda n: st.lists(
                st.lists(st.integers(-bound, bound), min_size=n, max_size=n),
                min_size=m,
                max_size=m,
            )
        )
    )


def determinantal_divisors(rows):
    """Invariant factors from gcds of k x k minors, using sympy determinants."""
    A = sympy.Matrix(rows)
    m, n = A.shape
    divisors = [1]
    for k in range(1, min(m, n) + 1):
        g = 0
        for r in combinations(range(m), k):
            for c in combinations(range(n), k):
                g = gcd(g, int(A.extract(list(r), list(c)).det()))
        if g == 0:
            break
        divisors.append(g)
    return [divisors[i] // divisors[i - 1] for i in range(1, len(divisors))]


def test_snf_small_example():
    A = IntMatrix.from_rows([[2, 4, 4], [-6, 6, 12], [10, -4, -16]])
    res = smith_normal_form(A)
    assert res.diagonal == [2, 6, 12]
    assert res.U @ A @ res.V == res.D


def test_snf_zero_and_empty():
    assert smith_normal_form(IntMatrix.zeros(2, 3)).diagonal == [0, 0]
    assert cokernel(IntMatrix.zeros(3, 0)) == FinAbGroup((), 3)


@settings(max_examples=150, deadline=None)
@given(matrices())
def test_snf_certificate(rows):
    A = IntMatrix.from_rows(rows)
    res = smith_normal_form(A)
    assert res.U @ A @ res.V == res.D
    assert is_unimodular(res.U) and is_unimodular(res.V)
    d = res.diagonal
    for i in range(len(d)):
        assert d[i] >= 0
        if i + 1 < len(d) and d[i + 1]:
            assert d[i] and d[i + 1] % d[i] == 0
    for i in range(A.rows):
        for j in range(A.cols):
            if i != j:
                assert res.D[i, j] == 0


@settings(max_examples=80, deadline=None)
@given(matrices(3, 3, 9))
def test_snf_matches_determinantal_divisors(rows):
    nonzero = [d for d in smith_normal_form(IntMatrix.from_rows(rows)).diagonal if d]
    assert nonzero == determinantal_divisors(rows)


@settings(max_examples=80, deadline=None)
@given(matrices())
def test_kernel_basis_is_kernel(rows):
    A = IntMatrix.from_rows(rows)
    K = kernel_basis(A)
    assert K.cols == A.cols - smith_normal_form(A).rank
    if K.cols:
        assert (A @ K).is_zero()
        # saturated: the kernel lattice has torsion-free cokernel
        assert cokernel(K).invariant_factors == ()


@settings(max_examples=80, deadline=None)
@given(matrices(3, 3, 6), st.lists(st.integers(-5, 5), min_size=3, max_size=3))
def test_lattice_coordinates_roundtrip(rows, coeffs):
    B = IntMatrix.from_rows(rows)
    n = B.cols
    c = IntMatrix.from_columns([coeffs[:n]], n)
    v = B @ c
    C = lattice_coordinates(B, v)
    assert B @ C == v


def test_lattice_coordinates_rejects_outside_vector():
    B = IntMatrix.from_rows([[2, 0], [0, 2]])
    with pytest.raises(ContainmentViolation):
        lattice_coordinates(B, IntMatrix.from_rows([[1], [0]]))


def test_lattice_quotient_and_subquotient():
    L = IntMatrix.identity(2)
    J = IntMatrix.from_rows([[2, 0], [0, 6]])
    assert lattice_quotient(L, J) == FinAbGroup((2, 6))
    K = IntMatrix.from_rows([[1, -1]])
    I = IntMatrix.from_rows([[4], [4]])
    assert subquotient(K, I) == FinAbGroup((4,))
    with pytest.raises(ContainmentViolation):
        subquotient(K, IntMatrix.from_rows([[1], [0]]))


def test_finabgroup_operations():
    G = FinAbGroup.from_orders([4, 6, 0])
    assert str(G) == "Z (+) Z/2 (+) Z/12"
    assert G.torsion(2) == FinAbGroup((2, 2))
    assert G.mod(4) == FinAbGroup((2, 4, 4))
    assert G.primary_part(3) == FinAbGroup((3,))
    assert G.order() == float("inf")
    assert FinAbGroup.from_orders([2, 3]).order() == 6
    with pytest.raises(ValueError):
        FinAbGroup((4, 2))


@given(st.lists(st.integers(0, 30), max_size=5))
def test_from_orders_preserves_order(orders):
    G = FinAbGroup.from_orders(orders)
    finite = [n for n in orders if n > 0]
    expected = 1
    for n in finite:
        expected *= n
    if 0 in orders:
        assert G.free_rank == orders.count(0)
    else:
        assert G.order() == expected


def test_parse_matrix_reports_line():
    assert parse_matrix("# comment\n1 2\n\n3 4\n") == IntMatrix.from_rows([[1, 2], [3, 4]])
    with pytest.raises(MatrixParseError, match="line 3"):
        parse_matrix("1 2\n3 4\n5\n")
    with pytest.raises(MatrixParseError, match="line 1"):
        parse_matrix("1 x\n")
