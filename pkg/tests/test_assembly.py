import pytest
from hypothesis import given
from hypothesis import strategies as st

from brauer_y02.assembly import (
    AbGroupExpr,
    BaseDescriptor,
    apply_differentials,
    audit_table,
    brauer_report,
    class_field_entries,
    compute_G_and_Gprime,
    e2_page,
    exact_sequence_order_check,
    full_brauer,
    gprime_order_by_enumeration,
    local_sums,
    p_primary_brauer,
    parse_base,
    picard_group,
    supported_prime_sets,
    two_primary_brauer,
)
from brauer_y02.errors import (
    BadP,
    InfiniteTerm,
    MissingTableEntry,
    SymbolicTerm,
    UnsupportedBase,
    UnsupportedP,
)

E = AbGroupExpr.parse
Z2 = BaseDescriptor.zp([2])
ALG = BaseDescriptor.alg_closed(0)

exprs = st.builds(
    AbGroupExpr,
    st.integers(0, 2),
    st.lists(st.sampled_from([2, 3, 4, 6, 8, 9, 12]), max_size=5).map(tuple),
    st.lists(st.tuples(st.sampled_from([2, 3, 5]), st.integers(0, 2)), max_size=3).map(tuple),
    st.lists(st.sampled_from(["Br(Q)", "H1(Q, Q/Z)"]), max_size=2).map(tuple),
)


@given(exprs)
def test_parse_str_roundtrip(G):
    assert E(str(G)) == G


@given(exprs, exprs)
def test_sum_commutes_and_remove_inverts(G, H):
    assert G + H == H + G
    assert (G + H).remove(H) == G


def test_normalisation():
    assert E("Z/6") == E("Z/3 (+) Z/2")
    assert E("Q_2/Z_2 (+) Q_2/Z_2") == AbGroupExpr.prufer(2, 2)
    assert str(E("Z/4 (+) Z/2 (+) Q_2/Z_2 (+) Z/2")) == "Q_2/Z_2 (+) (Z/2)^2 (+) Z/4"
    assert str(AbGroupExpr()) == "0"
    assert E("Br(Q) (+) Z/2") != E("Z/2")


def test_torsion_and_order():
    G = E("Q_2/Z_2 (+) (Z/2)^4 (+) Z/4")
    assert G.torsion(2) == E("(Z/2)^6")
    assert G.torsion(8) == E("Z/8 (+) (Z/2)^4 (+) Z/4")
    assert G.order() == float("inf")
    assert E("Z/2 (+) Z/4").order() == 8
    with pytest.raises(SymbolicTerm):
        E("Br(Q)").torsion(2)


@pytest.mark.parametrize("n", range(1, 9))
def test_truncated_order_of_the_main_group(n):
    order = full_brauer(Z2).torsion(2 ** n).order()
    assert order == (2 ** (n + 6) if n >= 2 else 2 ** 6)


@pytest.mark.parametrize(
    "P, expected",
    [
        ((2,), "Q_2/Z_2 (+) (Z/2)^4 (+) Z/4"),
        ((2, 3), "(Q_2/Z_2)^2 (+) (Z/2)^6 (+) Z/4"),
        ((2, 5), "(Q_2/Z_2)^2 (+) (Z/2)^4 (+) (Z/4)^3"),
        ((2, 3, 5, 7), "(Q_2/Z_2)^4 (+) (Z/2)^8 (+) (Z/4)^3"),
    ],
)
def test_two_primary_values(P, expected):
    assert two_primary_brauer(P) == E(expected)
    assert str(two_primary_brauer(P)) == expected


def test_local_sums_grow_by_one_summand():
    for P in supported_prime_sets():
        for q in (3, 5, 7, 11, 13):
            if q in P:
                continue
            bigger = tuple(sorted(P + (q,)))
            diff = local_sums(bigger).remove(local_sums(P))
            assert diff == AbGroupExpr.cyclic_group(2 if q % 4 == 3 else 4)


def test_full_brauer_values():
    assert full_brauer(Z2) == E("Q_2/Z_2 (+) (Z/2)^4 (+) Z/4")
    assert full_brauer(BaseDescriptor.alg_closed(5)) == E("Z/2")
    assert full_brauer(ALG) == E("Z/2")
    Q = full_brauer(BaseDescriptor.rationals())
    assert {"Br(Q)", "H1(Q, Q/Z)"} <= set(Q.atoms)
    assert Q.finite_part() == E("(Z/2)^2 (+) Z/4")
    with pytest.raises(UnsupportedBase):
        full_brauer(BaseDescriptor.zp([2, 3]))
    with pytest.raises(UnsupportedBase):
        full_brauer(BaseDescriptor.alg_closed(2))


@pytest.mark.parametrize("p", [3, 5, 7])
def test_p_primary_values(p):
    assert p_primary_brauer(BaseDescriptor.zp([2, p]), p) == AbGroupExpr.prufer(p, 2)
    assert p_primary_brauer(Z2, p).is_zero()
    assert p_primary_brauer(BaseDescriptor.rationals(), p).atoms == tuple(sorted([f"H1(Q, Q_{p}/Z_{p})", f"{p}Br(Q)"]))
    assert p_primary_brauer(BaseDescriptor.alg_closed(0), p).is_zero()


def test_p_primary_errors():
    with pytest.raises(UnsupportedBase):
        p_primary_brauer(BaseDescriptor.zp([2, 3]), 5)
    with pytest.raises(UnsupportedBase):
        p_primary_brauer(BaseDescriptor.alg_closed(5), 5)
    with pytest.raises(ValueError):
        p_primary_brauer(Z2, 2)


def test_table_agrees_with_recipe():
    assert audit_table() == []
    # cited values for Z[1/2] and Z[1/2p]
    assert Z2.value("h1_2") == E("Z/2 (+) Q_2/Z_2")
    assert Z2.value("br_2") == E("Z/2")
    for p in (3, 5, 7, 11, 13):
        base = BaseDescriptor.zp([2, p])
        assert base.value("h1_odd", p) == AbGroupExpr.prufer(p)
        assert base.value("br_odd", p) == AbGroupExpr.prufer(p)
    assert Z2.entry("br_2").citation


def test_recipe_example():
    d = class_field_entries([2, 3, 7])
    assert d["h1_odd"][3] == E("Q_3/Z_3 (+) Z/3")
    assert d["h1_2"] == E("Q_2/Z_2 (+) (Z/2)^3")


def test_prime_set_errors():
    with pytest.raises(BadP):
        BaseDescriptor.zp([3])
    with pytest.raises(BadP):
        BaseDescriptor.zp([2, 4])
    with pytest.raises(BadP):
        BaseDescriptor.zp([])
    with pytest.raises(UnsupportedP):
        compute_G_and_Gprime([2, 17])
    with pytest.raises(UnsupportedP):
        BaseDescriptor.zp([2, 17]).value("units")
    with pytest.raises(MissingTableEntry):
        Z2.value("gprime")


def test_parse_base():
    assert parse_base("ZP:2").primes == (2,)
    assert parse_base("zp:5,2").key == "ZP:2,5"
    assert parse_base("Q").kind == "Q"
    assert parse_base("algclosed:0").char == 0
    with pytest.raises(ValueError):
        parse_base("R")
    with pytest.raises(ValueError):
        parse_base("algclosed:4")


def test_G_and_Gprime_over_Z_half():
    G, Gp = compute_G_and_Gprime([2])
    assert G.group == E("Z/2") and G.generators == [2]
    assert Gp.group == E("(Z/2)^2")
    G, _ = compute_G_and_Gprime([2, 3])
    assert 3 not in G.generators and G.group == E("Z/2")
    G, _ = compute_G_and_Gprime([2, 5])
    assert G.group == E("(Z/2)^2")


@pytest.mark.parametrize("P", supported_prime_sets())
def test_Gprime_splits_for_every_supported_set(P):
    G, Gp = compute_G_and_Gprime(P)
    assert Gp.group == G.group + AbGroupExpr.cyclic_group(2)
    assert gprime_order_by_enumeration(P) == Gp.group.order()


@pytest.mark.parametrize("P", supported_prime_sets())
def test_cokernel_identity(P):
    base = BaseDescriptor.zp(P)
    G, _ = compute_G_and_Gprime(P)
    coker = e2_page(base)[(0, 2)].remove(base.value("br_2")).remove(G.group)
    assert coker == base.value("h1_2") + AbGroupExpr.cyclic_group(2)


def test_e2_page_over_Z_half():
    page = e2_page(Z2)
    assert page[(1, 0)] == E("Z/2")
    assert page[(2, 0)] == E("(Z/2)^2")
    assert page[(3, 0)] == E("Z/2")
    assert page[(1, 1)] == E("Z/2")
    assert page[(0, 2)] == E("Z/2") + E("Z/2 (+) Q_2/Z_2") + E("(Z/2)^2")
    einf = apply_differentials(page)
    assert einf.pieces[(2, 0)] == E("(Z/2)^2")
    assert einf.pieces[(1, 1)].is_zero()
    assert einf.pieces[(0, 2)] == page[(0, 2)]


def test_e2_page_over_closed_field_and_Z6():
    page = e2_page(ALG)
    assert page[(0, 2)] == E("Z/2")
    assert page[(2, 0)].is_zero()
    assert apply_differentials(page).associated_graded() == full_brauer(ALG)
    einf = apply_differentials(e2_page(BaseDescriptor.zp([2, 3])))
    assert einf.pieces[(2, 0)] == E("(Z/2)^3")
    for base in (ALG, Z2, BaseDescriptor.rationals()):
        assert e2_page(base)[(1, 1)] == E("Z/2")


def test_graded_pieces_account_for_the_two_primary_group():
    for P in supported_prime_sets():
        graded = apply_differentials(e2_page(BaseDescriptor.zp(P))).associated_graded()
        two = two_primary_brauer(P)
        assert graded.divisible == two.divisible
        assert graded.finite_part().order() == two.finite_part().order()


def test_exact_sequence_checks():
    assert exact_sequence_order_check([("Z/4", "Z/2 (+) Z/4", "Z/2")]).passed
    assert exact_sequence_order_check([("Z/2", "(Z/2)^2", "Z/2")]).passed
    assert not exact_sequence_order_check([("Z/4", "Z/4", "Z/2")]).passed
    assert exact_sequence_order_check([("Z/2", "Q_2/Z_2", "Q_2/Z_2")], level=8).passed is False
    with pytest.raises(InfiniteTerm):
        exact_sequence_order_check([("Z", "Z", "0")])
    with pytest.raises(InfiniteTerm):
        exact_sequence_order_check([("Br(Q)", "Z/2", "0")])


def test_picard():
    for base in (ALG, Z2, BaseDescriptor.rationals()):
        assert picard_group(base) == E("Z/4")


@pytest.mark.parametrize("key", ["ZP:2", "ZP:2,3", "ZP:2,5,13", "Q", "algclosed:0", "algclosed:7"])
def test_brauer_report_checks_pass(key):
    report = brauer_report(parse_base(key))
    assert report["passed"], report["checks"]
