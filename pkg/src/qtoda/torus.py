"""Quantized tori and the anti-isomorphisms onto difference operators.

The ambient algebra has generators w_1..w_n, D_1..D_n with D_i w_j =
v^{e(i,j)} w_j D_i where e is the commutation-exponent table ("A": e = delta;
"G2": the four displayed exponents).  Three variants are used:

* kind "A"    -- the full torus;
* kind "Abar" -- the w-determinant quotient on the sum-zero D-sublattice
                 (w-exponents reduced so the last entry is 0);
* kind "C"    -- the sublattice of even total D-degree (generated by
                 D_i/D_{i+1} and D_n^2);
* kind "G2"   -- rank-2 torus with the G2 exponents.

The type-specific anti-isomorphisms send w_j -> T_{-varpi_j} and the
D-sublattice generators to e^{-root} factors.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Dict, Optional, Sequence, Tuple

def _wkey(vec) -> Tuple[Fraction, ...]:
    return tuple(Fraction(x) for x in vec)

from .cartan import RootSystem
from .qdiff import DifferenceOperator
from .scalars import Scalar, ScalarField

ExpVec = Tuple[int, ...]
WVec = Tuple[Fraction, ...]  # w-exponents may be half-integers in type D
TermKey = Tuple[WVec, ExpVec]


class TorusSpec:
    """Commutation data e(i,j) plus the variant tag."""

    def __init__(self, n: int, kind: str = "A"):
        if kind not in ("A", "Abar", "B", "C", "G2"):
            raise ValueError(f"unknown torus kind {kind!r}")
        if kind == "G2" and n != 2:
            raise ValueError("G2 torus has rank 2")
        self.n = n
        self.kind = kind
        if kind == "G2":
            self.etable = ((2, -1), (-3, 3))
        elif kind == "B":
            # the anti-isomorphism w_j -> T_{-varpi_j}, D_j -> e^{-varpi_j}
            # forces D_j w_l = v^{(varpi_j, varpi_l)} w_l D_j = v^{2 delta}
            self.etable = tuple(tuple(2 if i == j else 0 for j in range(n))
                                for i in range(n))
        else:
            self.etable = tuple(tuple(1 if i == j else 0 for j in range(n))
                                for i in range(n))

    def exponent(self, dvec: Sequence[int], j: int) -> int:
        """e-pairing of a D-monomial with w_j (0-based j)."""
        return sum(dvec[i] * self.etable[i][j] for i in range(self.n))

    def pairing_w(self, dvec: Sequence[int], wvec: Sequence) -> Fraction:
        """Commutation exponent of D^dvec past w^wvec."""
        return sum(Fraction(wvec[j]) * self.exponent(dvec, j)
                   for j in range(self.n) if wvec[j])

    def in_sublattice(self, dvec: Sequence[int]) -> bool:
        if self.kind == "C":
            return sum(dvec) % 2 == 0
        if self.kind == "Abar":
            return sum(dvec) == 0
        return True

    def reduce_w(self, wvec: ExpVec) -> ExpVec:
        """Canonical w-exponent: for Abar subtract a multiple of (1,..,1) so
        the last entry vanishes."""
        if self.kind != "Abar":
            return wvec
        t = wvec[-1]
        return tuple(x - t for x in wvec)

    def __eq__(self, other):
        return (isinstance(other, TorusSpec) and self.n == other.n
                and self.kind == other.kind)

    def __hash__(self):
        return hash((self.n, self.kind))

    def __repr__(self):
        return f"TorusSpec(n={self.n}, kind={self.kind!r})"


class TorusElement:
    """Finite sum of scalar * w^a D^b in normal form (w-part left)."""

    __slots__ = ("spec", "field", "terms")

    def __init__(self, spec: TorusSpec, field: ScalarField,
                 terms: Optional[Dict[TermKey, Scalar]] = None):
        self.spec = spec
        self.field = field
        self.terms = {}
        if terms:
            for (a, b), s in terms.items():
                if s.is_zero():
                    continue
                if not spec.in_sublattice(b):
                    raise ValueError(f"D-exponent {b} outside the sublattice")
                key = (spec.reduce_w(_wkey(a)), b)
                t = self.terms.get(key)
                s2 = s if t is None else t + s
                if s2.is_zero():
                    self.terms.pop(key, None)
                else:
                    self.terms[key] = s2

    @classmethod
    def zero(cls, spec, field):
        return cls(spec, field)

    @classmethod
    def monomial(cls, spec, field, coeff, wvec, dvec) -> "TorusElement":
        return cls(spec, field, {(_wkey(wvec),
                                  tuple(int(x) for x in dvec)): coeff})

    @classmethod
    def one(cls, spec, field):
        z = (0,) * spec.n
        return cls.monomial(spec, field, field.one(), z, z)

    @classmethod
    def w(cls, spec, field, j, power=1):
        a = [0] * spec.n
        a[j - 1] = power
        return cls.monomial(spec, field, field.one(), a, (0,) * spec.n)

    @classmethod
    def d(cls, spec, field, j, power=1):
        b = [0] * spec.n
        b[j - 1] = power
        return cls.monomial(spec, field, field.one(), (0,) * spec.n, b)

    def is_zero(self):
        return not self.terms

    def _check(self, other):
        if self.spec != other.spec or self.field != other.field:
            raise ValueError("torus elements from different algebras")

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
        el = TorusElement(self.spec, self.field)
        el.terms = out
        return el

    def __neg__(self):
        el = TorusElement(self.spec, self.field)
        el.terms = {k: -s for k, s in self.terms.items()}
        return el

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c: Scalar) -> "TorusElement":
        if not isinstance(c, Scalar):
            c = self.field.rational(c)
        el = TorusElement(self.spec, self.field)
        if not c.is_zero():
            el.terms = {k: s * c for k, s in self.terms.items()}
        return el

    def __mul__(self, other):
        """(w^a D^b)(w^c D^e) = v^{sum b_i c_j e(i,j)} w^{a+c} D^{b+e}."""
        self._check(other)
        spec, field = self.spec, self.field
        out: Dict[TermKey, Scalar] = {}
        for (a1, b1), s1 in self.terms.items():
            for (a2, b2), s2 in other.terms.items():
                exp = spec.pairing_w(b1, a2)
                coeff = s1 * s2 * field.v_power(exp)
                key = (spec.reduce_w(tuple(x + y for x, y in zip(a1, a2))),
                       tuple(x + y for x, y in zip(b1, b2)))
                t = out.get(key)
                coeff = coeff if t is None else t + coeff
                if coeff.is_zero():
                    out.pop(key, None)
                else:
                    out[key] = coeff
        el = TorusElement(spec, field)
        el.terms = out
        return el

    def __eq__(self, other):
        return (isinstance(other, TorusElement) and self.spec == other.spec
                and self.terms == other.terms)

    def __hash__(self):
        raise TypeError("TorusElement is not hashable")

    def commutes_with(self, other) -> bool:
        return (self * other - other * self).is_zero()

    def d_exponents(self):
        return sorted({b for (_, b) in self.terms})

    def group_by_d(self) -> Dict[ExpVec, Dict[ExpVec, Scalar]]:
        out: Dict[ExpVec, Dict[ExpVec, Scalar]] = {}
        for (a, b), s in self.terms.items():
            out.setdefault(b, {})[a] = s
        return out

    def sorted_terms(self):
        return sorted(self.terms.items())

    def to_text(self) -> str:
        if not self.terms:
            return "0"
        bits = []
        for (a, b), s in self.sorted_terms():
            factors = [f"({s.to_text()})"]
            factors += [f"w{j+1}^{x}" for j, x in enumerate(a) if x]
            factors += [f"D{j+1}^{x}" for j, x in enumerate(b) if x]
            bits.append("*".join(factors))
        return " + ".join(bits)

    def to_json_obj(self):
        return [{"w": [[x.numerator, x.denominator] for x in a],
                 "D": list(b), "coeff": s.to_text()}
                for (a, b), s in self.sorted_terms()]

    @classmethod
    def from_json_obj(cls, spec, field, data):
        terms = {}
        for item in data:
            key = (tuple(Fraction(x[0], x[1]) if isinstance(x, (list, tuple))
                         else Fraction(x) for x in item["w"]),
                   tuple(int(x) for x in item["D"]))
            terms[key] = field.parse(item["coeff"])
        return cls(spec, field, terms)

    def __repr__(self):
        return f"Torus[{self.to_text()}]"


# ---------------------------------------------------------------------------
# D-sublattice bases and the anti-isomorphisms
# ---------------------------------------------------------------------------

def d_generators(rs: RootSystem, spec: TorusSpec):
    """Basis of the D-sublattice used for type rs.family, as exponent
    vectors, aligned with e^{-alpha_i} images (index i = 1..n)."""
    n = rs.rank

    def unit(*pairs):
        v = [0] * spec.n
        for idx, val in pairs:
            v[idx - 1] += val
        return tuple(v)

    fam = rs.family
    if fam == "A":
        return [unit((i, 1), (i + 1, -1)) for i in range(1, n + 1)]
    if fam == "C":
        return ([unit((i, 1), (i + 1, -1)) for i in range(1, n)]
                + [unit((n, 2))])
    if fam == "D":
        return ([unit((i, 1), (i + 1, -1)) for i in range(1, n)]
                + [unit((n, 2))])
    if fam == "B":
        return [unit((i, 1)) for i in range(1, n + 1)]
    return [unit((1, 1)), unit((2, 1))]  # G2


def d_root_image(rs: RootSystem, gen_index: int) -> Tuple[int, ...]:
    """Root-lattice vector beta with generator |-> e^{-beta}; gen_index is
    the position in d_generators (0-based)."""
    n = rs.rank
    fam = rs.family
    beta = [0] * n
    if fam in ("A", "C", "G") or (fam == "D" and gen_index < n - 1):
        if fam in ("A", "G") or gen_index < n - 1:
            beta[gen_index] = 1
            return tuple(beta)
        beta[n - 1] = 1  # C: D_n^2 -> e^{-alpha_n}
        return tuple(beta)
    if fam == "D":
        # D_n^2 -> e^{alpha_{n-1} - alpha_n}
        beta[n - 2] = -1
        beta[n - 1] = 1
        return tuple(beta)
    # B: D_j -> e^{-(alpha_j + ... + alpha_n)}
    for k in range(gen_index, n):
        beta[k] = 1
    return tuple(beta)


def decompose_d(rs: RootSystem, spec: TorusSpec, dvec: Sequence[int]):
    """Integer coordinates of dvec in the d_generators basis."""
    gens = d_generators(rs, spec)
    n = spec.n
    # solve sum lambda_l gens[l] = dvec over Z (n small; do exact Gauss)
    mat = [[Fraction(gens[l][r]) for l in range(len(gens))] for r in range(n)]
    rhs = [Fraction(x) for x in dvec]
    # gaussian elimination with partial pivoting over Q
    m = len(gens)
    aug = [mat[r] + [rhs[r]] for r in range(n)]
    piv_cols = []
    row = 0
    for col in range(m):
        sel = next((r for r in range(row, n) if aug[r][col]), None)
        if sel is None:
            continue
        aug[row], aug[sel] = aug[sel], aug[row]
        pv = aug[row][col]
        aug[row] = [x / pv for x in aug[row]]
        for r in range(n):
            if r != row and aug[r][col]:
                f = aug[r][col]
                aug[r] = [x - f * y for x, y in zip(aug[r], aug[row])]
        piv_cols.append(col)
        row += 1
    for r in range(row, n):
        if aug[r][m]:
            raise ValueError(f"{dvec} not in the D-sublattice")
    lam = [Fraction(0)] * m
    for r, col in enumerate(piv_cols):
        lam[col] = aug[r][m]
    out = []
    for x in lam:
        if x.denominator != 1:
            raise ValueError(f"{dvec} not in the D-sublattice")
        out.append(int(x))
    return out


def torus_spec_for(rs: RootSystem, reduced: bool = False) -> TorusSpec:
    if rs.family == "G":
        return TorusSpec(2, "G2")
    n = rs.rank + 1 if rs.family == "A" else rs.rank
    if rs.family == "A":
        return TorusSpec(n, "Abar" if reduced else "A")
    if rs.family in ("C", "D"):
        return TorusSpec(n, "C")
    return TorusSpec(n, "B")


def to_quotient(x: TorusElement, spec: TorusSpec) -> TorusElement:
    """Push an element of the full torus into a quotient/sublattice spec
    (w-exponents reduced; D-exponents must lie in the target sublattice)."""
    out = TorusElement.zero(spec, x.field)
    for (a, b), s in x.terms.items():
        out = out + TorusElement.monomial(spec, x.field, s, a, b)
    return out


def to_difference_operator(x: TorusElement, rs: RootSystem) -> DifferenceOperator:
    """Anti-isomorphism: w_j -> T_{-varpi_j}, D-sublattice generators to the
    type-specific e^{-root} factors; products are reversed."""
    spec = x.spec
    field = x.field
    gens = d_generators(rs, spec)
    out = DifferenceOperator.zero(rs, field)
    for (a, b), s in x.terms.items():
        lam = decompose_d(rs, spec, b)
        beta = [0] * rs.rank
        for l, mult in enumerate(lam):
            if mult:
                img = d_root_image(rs, l)
                beta = [x0 + mult * y0 for x0, y0 in zip(beta, img)]
        mu = rs.varpi([-ai for ai in a])
        out = out + DifferenceOperator.term(rs, field, s, tuple(beta), mu)
    return out


def from_difference_operator(op: DifferenceOperator, rs: RootSystem,
                             spec: Optional[TorusSpec] = None) -> TorusElement:
    """Inverse of the anti-isomorphism on its image (type A lands in the
    determinant quotient, where the w-representative is canonical)."""
    from .cartan import _solve
    if spec is None:
        spec = torus_spec_for(rs, reduced=True)
    field = op.field
    gens = d_generators(rs, spec)
    imgs = [d_root_image(rs, l) for l in range(len(gens))]
    n = rs.rank
    mat = [[Fraction(imgs[l][r]) for l in range(len(imgs))] for r in range(n)]
    out = TorusElement.zero(spec, field)
    for (beta, mu), s in op.terms.items():
        lam = _solve(mat, [Fraction(x) for x in beta])
        dvec = [0] * spec.n
        for l, x in enumerate(lam):
            if x.denominator != 1:
                raise ValueError("operator outside the torus image")
            for r in range(spec.n):
                dvec[r] += int(x) * gens[l][r]
        wv = [Fraction(-x) for x in rs.omega_to_varpi(mu)]
        if any(x.denominator not in (1, 2) for x in wv):
            raise ValueError("weight outside the half-integer varpi lattice")
        out = out + TorusElement.monomial(spec, field, s, tuple(wv), tuple(dvec))
    return out
