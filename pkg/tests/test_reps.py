import pytest

from qtoda.cartan import build_root_system
from qtoda.reps import rep_exterior_square, rep_first_fundamental
from qtoda.scalars import ScalarField

ALL = ("A1", "A2", "A4", "B2", "B3", "C2", "C3", "D3", "D4", "G2")


def _field(rs):
    return ScalarField(("q",), rs.qscale)


@pytest.mark.parametrize("tag", ALL)
def test_first_fundamental_relations(tag):
    rs = build_root_system(tag)
    rep = rep_first_fundamental(rs, _field(rs))  # checks relations on build
    dims = {"A": rs.rank + 1, "B": 2 * rs.rank + 1, "C": 2 * rs.rank,
            "D": 2 * rs.rank, "G": 7}
    assert rep.dim == dims[rs.family]


def test_a_type_matrix_entries():
    rs = build_root_system("A2")
    rep = rep_first_fundamental(rs, _field(rs))
    # E_i(w_j) = delta_{j,i+1} w_{j-1}
    assert rep.e_mat(1) == {(0, 1): rep.field.one()}
    assert rep.f_mat(2) == {(2, 1): rep.field.one()}


def test_g2_two_factor():
    rs = build_root_system("G2")
    F = _field(rs)
    rep = rep_first_fundamental(rs, F)
    two = F.v_power(1) + F.v_power(-1)
    assert rep.e_mat(1)[(2, 0)] == two  # w_0 -> (v + v^{-1}) w_2


def test_self_dual_weights():
    for tag in ("B3", "C3", "D4"):
        rs = build_root_system(tag)
        rep = rep_first_fundamental(rs, _field(rs))
        weights = sorted(rep.weights)
        negs = sorted(tuple(-x for x in w) for w in rep.weights)
        assert weights == negs


def test_nilpotency():
    for tag, expect in (("B3", [1, 1, 2]), ("G2", [2, 1]), ("C3", [1, 1, 1])):
        rs = build_root_system(tag)
        rep = rep_first_fundamental(rs, _field(rs))
        assert [rep.nilpotency(i) for i in range(1, rs.rank + 1)] == expect


def test_exterior_square():
    rs = build_root_system("A2")
    F = _field(rs)
    v1 = rep_first_fundamental(rs, F)
    w2 = rep_exterior_square(v1)  # relations checked on build
    assert w2.dim == 3
    # highest weight of w_1 ^ w_2 is omega_2
    assert w2.weights[0] == (0, 1)
    rs3 = build_root_system("A3")
    w23 = rep_exterior_square(rep_first_fundamental(rs3, _field(rs3)))
    assert w23.dim == 6


def test_exterior_square_rejects_non_a():
    rs = build_root_system("C2")
    v1 = rep_first_fundamental(rs, _field(rs))
    with pytest.raises(ValueError):
        rep_exterior_square(v1)
