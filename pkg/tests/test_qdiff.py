from fractions import Fraction

from qtoda.cartan import build_root_system
from qtoda.qdiff import (DifferenceOperator, FormalSeries, commutator,
                         commutator_is_zero)
from qtoda.scalars import ScalarField

from conftest import field_for


def _setup(tag="A2"):
    rs = build_root_system(tag)
    F = ScalarField(("q",), rs.qscale)
    return rs, F


def test_commutation_rule():
    rs, F = _setup()
    omega1 = (Fraction(1), Fraction(0))
    t = DifferenceOperator.shift(rs, F, omega1)
    e = DifferenceOperator.term(rs, F, F.one(), (1, 0), rs.zero_weight())
    prod = t * e
    # T_{w1} e^{-a1} = v^{-(a1, w1)} e^{-a1} T_{w1}
    expect = e * t
    ((beta, mu), coeff), = prod.terms.items()
    assert beta == (1, 0) and mu == omega1
    assert coeff == F.v_power(-rs.pairing(rs.alpha_omega(1), omega1))
    assert prod == expect.scale(F.v_power(-1))


def test_unit_and_shift_commutators():
    rs, F = _setup()
    one = DifferenceOperator.one(rs, F)
    a = DifferenceOperator.term(rs, F, F.q_power(3), (1, 1),
                                (Fraction(1), Fraction(-2)))
    assert a * one == a and one * a == a
    t1 = DifferenceOperator.shift(rs, F, (Fraction(1), Fraction(0)))
    t2 = DifferenceOperator.shift(rs, F, (Fraction(0), Fraction(1, 2)))
    assert commutator_is_zero(t1, t2)
    assert commutator_is_zero(a, a)
    assert not commutator_is_zero(a, t1)


def test_action_and_associativity():
    rs, F = _setup()
    f = FormalSeries.delta(rs, F, 3)
    e1 = DifferenceOperator.term(rs, F, F.one(), (1, 0), rs.zero_weight())
    t = DifferenceOperator.shift(rs, F, (Fraction(2), Fraction(1)))
    out = e1.apply_to_series(f)
    assert out.coeffs == {(1, 0): F.one()}
    # T_mu on the lowest cell is the lambda-character (trivial by default)
    assert t.apply_to_series(f).coeffs == {(0, 0): F.one()}

    def character(mu):
        return F.v_power(rs.pairing(mu, rs.rho))  # a sample lambda = rho

    lhs = (t * e1).apply_to_series(f, character)
    rhs = t.apply_to_series(e1.apply_to_series(f, character), character)
    assert lhs == rhs


def test_faithfulness_up_to_cutoff():
    rs, F = _setup()
    a = DifferenceOperator.term(rs, F, F.one(), (1, 0),
                                (Fraction(1), Fraction(0)))
    b = DifferenceOperator.term(rs, F, F.one(), (1, 0),
                                (Fraction(0), Fraction(1)))
    probe = FormalSeries(rs, F, 3, {(0, 1): F.one()})
    assert a.apply_to_series(probe, lambda mu: F.one()) != \
        b.apply_to_series(probe, lambda mu: F.one())


def test_upper_triangularity():
    rs, F = _setup()
    op = DifferenceOperator.term(rs, F, F.one(), (1, 1), rs.zero_weight()) \
        + DifferenceOperator.one(rs, F)
    f = FormalSeries(rs, F, 4, {(1, 0): F.one(), (2, 1): F.q_power(2)})
    out = op.apply_to_series(f)
    for beta in out.coeffs:
        assert any(beta == tuple(x + y for x, y in zip(g, d))
                   for g in f.coeffs for d in ((0, 0), (1, 1)))


def test_lower_subalgebra_flag():
    rs, F = _setup()
    good = DifferenceOperator.term(rs, F, F.one(), (2, 0), rs.zero_weight())
    bad = DifferenceOperator.term(rs, F, F.one(), (-1, 2), rs.zero_weight())
    assert good.is_lower() and not bad.is_lower()
    try:
        bad.apply_to_series(FormalSeries.delta(rs, F, 2))
    except ValueError:
        pass
    else:  # pragma: no cover
        raise AssertionError("expected rejection outside the lower algebra")


def test_json_round_trip_and_latex():
    rs, F = field_for("C2")[0], None
    rs, F = _setup("C2")
    op = DifferenceOperator.term(rs, F, F.q_power(-1) + F.one(), (0, 1),
                                 (Fraction(1, 2), Fraction(-1)))
    data = op.to_json_obj()
    back = DifferenceOperator.from_json_obj(rs, F, data)
    assert back == op
    text = op.to_latex()
    assert "e^{" in text and "T_{" in text


def test_e_rho_conjugation_round_trip():
    rs, F = _setup("B2")
    op = DifferenceOperator.term(rs, F, F.one(), (1, 1),
                                 (Fraction(1), Fraction(1, 2)))
    conj = op.conjugate_by_e_rho()
    assert conj.conjugate_by_e_rho(inverse=True) == op
