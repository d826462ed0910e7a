from fractions import Fraction

import pytest

from qtoda.cartan import build_root_system

ALL_TAGS = ("A1", "A2", "A3", "A5", "B2", "B3", "C2", "C3", "D3", "D4", "G2")


def test_rho_in_varpi_coordinates():
    c3 = build_root_system("C3")
    assert c3.omega_to_varpi(c3.rho) == (3, 2, 1)
    b3 = build_root_system("B3")
    assert b3.omega_to_varpi(b3.rho) == (Fraction(5, 2), Fraction(3, 2),
                                         Fraction(1, 2))
    d4 = build_root_system("D4")
    assert d4.omega_to_varpi(d4.rho) == (3, 2, 1, 0)
    g2 = build_root_system("G2")
    assert g2.omega_to_varpi(g2.rho) == (2, 3)


def test_varpi_gram_tables():
    b3 = build_root_system("B3")
    for i in range(1, 4):
        for j in range(1, 4):
            assert b3.pairing(b3.varpi_unit(i), b3.varpi_unit(j)) == \
                (2 if i == j else 0)
    g2 = build_root_system("G2")
    assert g2.pairing(g2.varpi_unit(1), g2.varpi_unit(2)) == -1
    a2 = build_root_system("A2")
    for i in range(1, 4):
        for j in range(1, 4):
            assert a2.pairing(a2.varpi_unit(i), a2.varpi_unit(j)) == \
                (1 if i == j else 0) - Fraction(1, 3)


def test_simple_roots_in_varpi():
    d4 = build_root_system("D4")
    assert d4.alpha_omega(4) == d4.varpi([0, 0, 1, 1])
    c2 = build_root_system("C2")
    assert c2.alpha_omega(2) == c2.varpi([0, 2])
    b2 = build_root_system("B2")
    assert b2.alpha_omega(2) == b2.varpi([0, 1])
    g2 = build_root_system("G2")
    assert g2.alpha_omega(1) == g2.varpi([1, 0])
    assert g2.alpha_omega(2) == g2.varpi([-1, 1])


def test_denominator_bound():
    assert build_root_system("A1").nn == 2
    assert build_root_system("A2").nn == 3
    assert build_root_system("C3").nn == 1
    assert build_root_system("D5").nn == 4
    assert build_root_system("G2").nn == 1


@pytest.mark.parametrize("tag", ALL_TAGS)
def test_cartan_recoverable_and_pairing(tag):
    rs = build_root_system(tag)
    for i in range(1, rs.rank + 1):
        ai = rs.alpha_omega(i)
        assert rs.pairing(ai, ai) == 2 * rs.d[i - 1]
        for j in range(1, rs.rank + 1):
            aj = rs.alpha_omega(j)
            assert rs.cartan[i - 1][j - 1] == \
                2 * rs.pairing(ai, aj) / rs.pairing(ai, ai)
            unit = tuple(Fraction(1 if t == j - 1 else 0)
                         for t in range(rs.rank))
            assert rs.pairing(ai, unit) == (rs.d[j - 1] if i == j else 0)
    for i in range(rs.rank):
        for j in range(rs.rank):
            assert (rs.nn * rs.gram_omega[i][j]).denominator == 1


def test_rho_alpha_example():
    a2 = build_root_system("A2")
    assert a2.pairing(a2.rho, a2.alpha_omega(1)) == 1


def test_unsupported():
    with pytest.raises(ValueError):
        build_root_system("G3")
    with pytest.raises(ValueError):
        build_root_system("D2")
    with pytest.raises(ValueError):
        build_root_system("E6")
