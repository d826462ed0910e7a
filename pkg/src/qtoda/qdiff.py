"""The q-difference-operator algebra on the adjoint torus and its action on
truncated formal modules.

Operators are finite normal-ordered sums of terms  s * e^{-beta} * T_mu  with
beta in the root lattice (alpha-coordinates) and mu a weight (rational
omega-coordinates); multiplication uses  T_mu e^lambda = v^{(lambda,mu)}
e^lambda T_mu.  Operators whose beta all lie in Q_+ form the lower subalgebra
that acts degree-by-degree on truncated series.
"""

from __future__ import annotations

import json
from fractions import Fraction
from typing import Callable, Dict, Optional, Tuple

from .cartan import RootSystem, Weight
from .scalars import Scalar, ScalarField

BetaKey = Tuple[int, ...]
TermKey = Tuple[BetaKey, Tuple[Fraction, ...]]


class DifferenceOperator:
    """Finite sum of terms scalar * e^{-beta} * T_mu, normal form e-part left."""

    __slots__ = ("rs", "field", "terms")

    def __init__(self, rs: RootSystem, field: ScalarField,
                 terms: Optional[Dict[TermKey, Scalar]] = None):
        self.rs = rs
        self.field = field
        self.terms = {} if terms is None else {k: s for k, s in terms.items()
                                               if not s.is_zero()}

    # -- constructors --------------------------------------------------------

    @classmethod
    def zero(cls, rs, field):
        return cls(rs, field)

    @classmethod
    def term(cls, rs, field, coeff: Scalar, beta, mu) -> "DifferenceOperator":
        beta = tuple(int(b) for b in beta)
        mu = tuple(Fraction(m) for m in mu)
        return cls(rs, field, {(beta, mu): coeff})

    @classmethod
    def shift(cls, rs, field, mu, coeff=None) -> "DifferenceOperator":
        """T_mu (mu in omega-coordinates)."""
        c = field.one() if coeff is None else coeff
        return cls.term(rs, field, c, (0,) * rs.rank, mu)

    @classmethod
    def one(cls, rs, field):
        return cls.shift(rs, field, (0,) * rs.rank)

    # -- structure -----------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def is_lower(self) -> bool:
        """True when every e-exponent beta lies in Q_+."""
        return all(all(b >= 0 for b in beta) for beta, _ in self.terms)

    def degree_zero_part(self) -> "DifferenceOperator":
        zero = (0,) * self.rs.rank
        return DifferenceOperator(self.rs, self.field,
                                  {k: s for k, s in self.terms.items()
                                   if k[0] == zero})

    def __eq__(self, other):
        return (isinstance(other, DifferenceOperator) and self.rs == other.rs
                and self.terms == other.terms)

    def __hash__(self):
        raise TypeError("DifferenceOperator is not hashable")

    # -- algebra -------------------------------------------------------------

    def _check(self, other):
        if self.rs != other.rs or self.field != other.field:
            raise ValueError("operators live on different algebras")

    def __add__(self, other):
        self._check(other)
        out = dict(self.terms)
        for k, s in other.terms.items():
            t = out.get(k)
            s2 = s if t is None else t + s
            if s2.is_zero():
                out.pop(k, None)
            else:
                out[k] = s2
        return DifferenceOperator(self.rs, self.field, out)

    def __neg__(self):
        return DifferenceOperator(self.rs, self.field,
                                  {k: -s for k, s in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c: Scalar) -> "DifferenceOperator":
        if not isinstance(c, Scalar):
            c = self.field.rational(c)
        return DifferenceOperator(self.rs, self.field,
                                  {k: s * c for k, s in self.terms.items()})

    def __mul__(self, other):
        """(s1 e^{-b1} T_m1)(s2 e^{-b2} T_m2)
           = s1 s2 v^{-(b2, m1)} e^{-b1-b2} T_{m1+m2}."""
        self._check(other)
        rs, field = self.rs, self.field
        out: Dict[TermKey, Scalar] = {}
        for (b1, m1), s1 in self.terms.items():
            for (b2, m2), s2 in other.terms.items():
                exp = -rs.pairing_root_weight(b2, m1)
                coeff = s1 * s2 * field.v_power(exp)
                key = (tuple(x + y for x, y in zip(b1, b2)),
                       tuple(x + y for x, y in zip(m1, m2)))
                t = out.get(key)
                coeff = coeff if t is None else t + coeff
                if coeff.is_zero():
                    out.pop(key, None)
                else:
                    out[key] = coeff
        return DifferenceOperator(rs, field, out)

    def conjugate_by_e_rho(self, inverse: bool = False) -> "DifferenceOperator":
        """e^rho X e^{-rho}: each term picks up v^{-(rho, mu)} (inverse flips
        the sign)."""
        rs, field = self.rs, self.field
        sign = 1 if inverse else -1
        out = {}
        for (b, mu), s in self.terms.items():
            out[(b, mu)] = s * field.v_power(sign * rs.pairing(rs.rho, mu))
        return DifferenceOperator(rs, field, out)

    # -- module action -------------------------------------------------------

    def apply_to_series(self, f: "FormalSeries",
                        character: Optional[Callable[[Weight], Scalar]] = None
                        ) -> "FormalSeries":
        """Action on a truncated Q_+-graded series: e^{-b} T_mu sends
        a_g y^{g-lambda} to a_g v^{(mu,lambda)} v^{-(mu,g)} y^{g+b-lambda}.
        ``character`` supplies v^{(mu,lambda)} (defaults to 1, i.e. lambda=0);
        requires a lower operator."""
        if not self.is_lower():
            raise ValueError("operator is not in the lower subalgebra")
        rs, field = self.rs, self.field
        out: Dict[BetaKey, Scalar] = {}
        for (b, mu), s in self.terms.items():
            lam = field.one() if character is None else character(mu)
            step = sum(b)
            for g, a in f.coeffs.items():
                if sum(g) + step > f.cutoff:
                    continue
                tgt = tuple(x + y for x, y in zip(g, b))
                val = a * s * lam * field.v_power(-rs.pairing_root_weight(list(g), mu))
                t = out.get(tgt)
                val = val if t is None else t + val
                if val.is_zero():
                    out.pop(tgt, None)
                else:
                    out[tgt] = val
        return FormalSeries(rs, field, f.cutoff, out)

    # -- io -------------------------------------------------------------------

    def sorted_terms(self):
        return sorted(self.terms.items(), key=lambda kv: (sum(kv[0][0]), kv[0]))

    def to_json_obj(self):
        return [{"beta": list(b),
                 "mu": [[m.numerator, m.denominator] for m in mu],
                 "coeff": s.to_text()}
                for (b, mu), s in self.sorted_terms()]

    @classmethod
    def from_json_obj(cls, rs, field, data):
        terms = {}
        for item in data:
            beta = tuple(int(x) for x in item["beta"])
            mu = tuple(Fraction(num, den) for num, den in item["mu"])
            terms[(beta, mu)] = field.parse(item["coeff"])
        return cls(rs, field, terms)

    def to_json(self) -> str:
        return json.dumps(self.to_json_obj(), indent=1)

    def to_latex(self) -> str:
        """Mirror the e^{-alpha} T_mu notation, mu written in varpi's."""
        if not self.terms:
            return "0"
        parts = []
        for (b, mu), s in self.sorted_terms():
            piece = []
            coeff = s.to_text()
            if coeff != "1":
                piece.append(f"\\left({coeff}\\right)")
            if any(b):
                exps = "".join(_latex_term(-x, f"\\alpha_{{{i+1}}}")
                               for i, x in enumerate(b) if x)
                piece.append(f"e^{{{exps.lstrip('+')}}}")
            varpi = self.rs.omega_to_varpi(mu)
            if any(varpi):
                exps = "".join(_latex_term(x, f"\\varpi_{{{j+1}}}")
                               for j, x in enumerate(varpi) if x)
                piece.append(f"T_{{{exps.lstrip('+')}}}")
            elif not any(b) and coeff == "1":
                piece.append("1")
            elif not piece or (not any(b) and coeff != "1"):
                piece.append("T_{0}")
            parts.append("".join(piece) if piece else "1")
        return " + ".join(parts)

    def __repr__(self):
        items = ", ".join(f"{s.to_text()} e^-{b} T{tuple(str(m) for m in mu)}"
                          for (b, mu), s in self.sorted_terms())
        return f"DiffOp[{items}]"


def _latex_term(c: Fraction, sym: str) -> str:
    c = Fraction(c)
    if c == 1:
        return f"+{sym}"
    if c == -1:
        return f"-{sym}"
    sign = "+" if c > 0 else "-"
    return f"{sign}{abs(c)}{sym}"


class FormalSeries:
    """Truncated Q_+-graded series sum a_beta y^{beta-lambda}."""

    __slots__ = ("rs", "field", "cutoff", "coeffs")

    def __init__(self, rs: RootSystem, field: ScalarField, cutoff: int,
                 coeffs: Optional[Dict[BetaKey, Scalar]] = None):
        self.rs = rs
        self.field = field
        self.cutoff = cutoff
        self.coeffs = {} if coeffs is None else {k: v for k, v in coeffs.items()
                                                 if not v.is_zero()}

    @classmethod
    def delta(cls, rs, field, cutoff):
        """The series with a_0 = 1."""
        return cls(rs, field, cutoff, {(0,) * rs.rank: field.one()})

    def __eq__(self, other):
        return (isinstance(other, FormalSeries) and self.rs == other.rs
                and self.cutoff == other.cutoff and self.coeffs == other.coeffs)

    def scale(self, c: Scalar) -> "FormalSeries":
        return FormalSeries(self.rs, self.field, self.cutoff,
                            {k: v * c for k, v in self.coeffs.items()})

    def __sub__(self, other):
        out = dict(self.coeffs)
        for k, v in other.coeffs.items():
            s = out.get(k)
            s2 = -v if s is None else s - v
            if s2.is_zero():
                out.pop(k, None)
            else:
                out[k] = s2
        return FormalSeries(self.rs, self.field, self.cutoff, out)

    def __repr__(self):
        return f"FormalSeries(cutoff={self.cutoff}, {len(self.coeffs)} coeffs)"


def commutator(a: DifferenceOperator, b: DifferenceOperator) -> DifferenceOperator:
    return a * b - b * a


def commutator_is_zero(a: DifferenceOperator, b: DifferenceOperator) -> bool:
    """Exact algebraic check: [a, b] is the zero operator in normal form."""
    return commutator(a, b).is_zero()
