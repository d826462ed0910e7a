"""Twist automorphisms of the quantized tori and the linear-system solvers
that conjugate hamiltonians into each other.

A twist fixes every w_j and multiplies each D-sublattice basis generator by a
w-monomial and a scalar; this is the computable form of conjugation by the
formal function exp(sum r_ij log w_i log w_j + sum r_i log w_i).  The data
stored per basis generator b_l is its w-shift Delta_l and the full scalar
factor g_l; the quadratic form is implicit in the shifts (well-definedness is
the symmetry c_m . Delta_l = c_l . Delta_m of the cross pairings, which is
checked at construction).  The rational exponents x_ij themselves can be
recovered for reporting.

Solvers match the w-polynomials multiplying the always-present single-root
D-monomials of the two hamiltonians and verify the resulting twist on the
full elements; free choices are pinned (shifts are canonical in the
determinant quotient, the multiplier normalization is fixed by the matched
terms).
"""

from __future__ import annotations

from fractions import Fraction
from itertools import product as iproduct
from typing import Dict, List, Optional, Sequence, Tuple

from .cartan import RootSystem
from .scalars import Scalar, ScalarField
from .torus import TorusElement, TorusSpec, torus_spec_for


class TwistError(ValueError):
    pass


def twist_basis(rs: RootSystem, spec: TorusSpec) -> List[Tuple[int, ...]]:
    """Basis of the D-sublattice given by the D-parts of the single-root
    terms of the first hamiltonian (always present with nonzero coefficient)."""
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
        return [unit((i, 1), (i + 1, -1)) for i in range(1, n)] + [unit((n, 2))]
    if fam == "D":
        return ([unit((i, 1), (i + 1, -1)) for i in range(1, n)]
                + [unit((n - 1, 1), (n, 1))])
    if fam == "B":
        return [unit((i, 1), (i + 1, -1)) for i in range(1, n)] + [unit((n, 1))]
    return [unit((1, 1)), unit((2, 1))]


def _decompose(basis: Sequence[Tuple[int, ...]], dvec) -> List[int]:
    n = len(dvec)
    m = len(basis)
    aug = [[Fraction(basis[l][r]) for l in range(m)] + [Fraction(dvec[r])]
           for r in range(n)]
    piv = []
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
        piv.append(col)
        row += 1
    for r in range(row, n):
        if aug[r][m]:
            raise TwistError(f"D-exponent {tuple(dvec)} outside the sublattice")
    lam = [Fraction(0)] * m
    for r, col in enumerate(piv):
        lam[col] = aug[r][m]
    out = []
    for x in lam:
        if x.denominator != 1:
            raise TwistError(f"D-exponent {tuple(dvec)} not integral in basis")
        out.append(int(x))
    return out


class TwistAutomorphism:
    """w_j |-> w_j and D^{b_l} |-> D^{b_l} * g_l * w^{Delta_l} on the basis,
    extended multiplicatively (cross v-powers follow from the shifts)."""

    def __init__(self, rs: RootSystem, spec: TorusSpec, field: ScalarField,
                 deltas: Sequence[Sequence[Fraction]], gscals: Sequence[Scalar],
                 basis: Optional[List[Tuple[int, ...]]] = None):
        self.rs = rs
        self.spec = spec
        self.field = field
        self.basis = basis if basis is not None else twist_basis(rs, spec)
        self.deltas = [tuple(Fraction(x) for x in d) for d in deltas]
        self.gscals = list(gscals)
        if not (len(self.deltas) == len(self.gscals) == len(self.basis)):
            raise TwistError("one (shift, scalar) pair per basis generator")
        n = spec.n
        self._cvecs = [tuple(Fraction(spec.exponent(b, j)) for j in range(n))
                       for b in self.basis]
        m = len(self.basis)
        self._bmat = [[self._pair(self._cvecs[l], self.deltas[k])
                       for k in range(m)] for l in range(m)]
        for l in range(m):
            for k in range(m):
                if self._bmat[l][k] != self._bmat[k][l]:
                    raise TwistError(
                        "shift data is not symmetric: no quadratic form "
                        f"realizes it (generators {l+1}, {k+1})")

    @staticmethod
    def _pair(c, delta) -> Fraction:
        return sum(a * b for a, b in zip(c, delta))

    @classmethod
    def identity(cls, rs, spec, field):
        basis = twist_basis(rs, spec)
        zero = tuple(Fraction(0) for _ in range(spec.n))
        return cls(rs, spec, field, [zero] * len(basis),
                   [field.one()] * len(basis), basis)

    def _gb(self, dvec) -> TorusElement:
        """The commuting factor G(b) = g * w^{X(b)} for D^b."""
        lam = _decompose(self.basis, dvec)
        n = self.spec.n
        X = [Fraction(0)] * n
        scal = self.field.one()
        expo = Fraction(0)
        for l, e in enumerate(lam):
            if not e:
                continue
            for j in range(n):
                X[j] += e * self.deltas[l][j]
            scal = scal * self.gscals[l] ** e
            expo -= Fraction(e * (e - 1), 2) * self._bmat[l][l]
            for m in range(l + 1, len(self.basis)):
                if lam[m]:
                    expo -= e * lam[m] * self._bmat[m][l]
        scal = scal * self.field.v_power(expo)
        return TorusElement.monomial(self.spec, self.field, scal,
                                     tuple(X), (0,) * n)

    def apply(self, x: TorusElement) -> TorusElement:
        out = TorusElement.zero(self.spec, self.field)
        cache: Dict[Tuple[int, ...], TorusElement] = {}
        zeroD = (0,) * self.spec.n
        for (a, b), s in x.terms.items():
            g = cache.get(b)
            if g is None:
                g = (TorusElement.monomial(self.spec, self.field,
                                           self.field.one(), (0,) * self.spec.n,
                                           b)
                     * self._gb(b))
                cache[b] = g
            out = out + TorusElement.monomial(self.spec, self.field, s, a,
                                              zeroD) * g
        return out

    def compose(self, other: "TwistAutomorphism") -> "TwistAutomorphism":
        """self after other; shifts add, generator scalars multiply."""
        deltas = [tuple(a + b for a, b in zip(d1, d2))
                  for d1, d2 in zip(self.deltas, other.deltas)]
        gs = [g1 * g2 for g1, g2 in zip(self.gscals, other.gscals)]
        return TwistAutomorphism(self.rs, self.spec, self.field, deltas, gs,
                                 self.basis)

    def inverse(self) -> "TwistAutomorphism":
        deltas = [tuple(-x for x in d) for d in self.deltas]
        gs = [self.field.one() / g for g in self.gscals]
        return TwistAutomorphism(self.rs, self.spec, self.field, deltas, gs,
                                 self.basis)

    def x_report(self, pin: Fraction = Fraction(0)):
        """Recover upper-triangular rationals x_ij of the generating
        quadratic form, with the free choice x_11 pinned to ``pin``; in the
        determinant quotient the shifts are matched up to the all-ones
        direction."""
        n = self.spec.n
        idx = {}
        for i in range(n):
            for j in range(i, n):
                idx[(i, j)] = len(idx)
        nx = len(idx)
        reduced = self.spec.kind == "Abar"
        nt = len(self.basis) if reduced else 0
        rows, rhs = [], []
        for l, c in enumerate(self._cvecs):
            for j in range(n):
                row = [Fraction(0)] * (nx + nt)
                for t in range(n):
                    if not c[t]:
                        continue
                    key = (j, t) if j <= t else (t, j)
                    row[idx[key]] += c[t]
                if reduced:
                    row[nx + l] = Fraction(-1)
                rows.append(row)
                rhs.append(self.deltas[l][j])
        # pin the free choice x_11 when it is genuinely free (type A); in the
        # other types the shift data already determines it
        row0 = [Fraction(0)] * (nx + nt)
        row0[idx[(0, 0)]] = Fraction(1)
        sol = _gauss_solve(rows + [row0], rhs + [2 * pin], nx + nt)
        if sol is None:
            sol = _gauss_solve(rows, rhs, nx + nt)
        if sol is None:
            raise TwistError("shift data admits no quadratic form")
        out = {}
        for (i, j), k in idx.items():
            out[(i + 1, j + 1)] = sol[k] / 2 if i == j else sol[k]
        return out

    def to_json_obj(self):
        return {"basis": [list(b) for b in self.basis],
                "shifts": [[[x.numerator, x.denominator] for x in d]
                           for d in self.deltas],
                "multipliers": [g.to_text() for g in self.gscals]}


def _gauss_solve(rows, rhs, nvars):
    m = len(rows)
    aug = [list(rows[r]) + [rhs[r]] for r in range(m)]
    piv = []
    row = 0
    for col in range(nvars):
        sel = next((r for r in range(row, m) if aug[r][col]), None)
        if sel is None:
            continue
        aug[row], aug[sel] = aug[sel], aug[row]
        pv = aug[row][col]
        aug[row] = [x / pv for x in aug[row]]
        for r in range(m):
            if r != row and aug[r][col]:
                f = aug[r][col]
                aug[r] = [x - f * y for x, y in zip(aug[r], aug[row])]
        piv.append(col)
        row += 1
    for r in range(row, m):
        if aug[r][nvars]:
            return None
    sol = [Fraction(0)] * nvars
    for r, col in enumerate(piv):
        sol[col] = aug[r][nvars]
    return sol


# ---------------------------------------------------------------------------
# solving
# ---------------------------------------------------------------------------

def _candidate_shifts(pa: Dict, pb: Dict):
    """Possible (w-shift, scalar ratio) turning polynomial pa into pb."""
    if len(pa) != len(pb):
        return
    a0 = sorted(pa)[0]
    s0 = pa[a0]
    for bkey in sorted(pb):
        delta = tuple(x - y for x, y in zip(bkey, a0))
        ratio = pb[bkey] / s0
        ok = True
        for a, s in pa.items():
            tgt = tuple(x + y for x, y in zip(a, delta))
            t = pb.get(tgt)
            if t is None or t != s * ratio:
                ok = False
                break
        if ok:
            yield delta, ratio


def solve_twist(rs: RootSystem, spec: TorusSpec, field: ScalarField,
                source: TorusElement, target: TorusElement
                ) -> TwistAutomorphism:
    """Twist with apply(source) == target, determined on the single-root
    basis terms and verified on everything."""
    basis = twist_basis(rs, spec)
    ga = source.group_by_d()
    gb = target.group_by_d()
    zero_d = (0,) * spec.n
    if ga.get(zero_d) != gb.get(zero_d):
        raise TwistError("D-free parts differ; no twist can match them")
    cands = []
    for b in basis:
        pa, pb = ga.get(b), gb.get(b)
        if pa is None or pb is None:
            raise TwistError(f"generator term {b} missing "
                             f"({'source' if pa is None else 'target'})")
        cc = list(_candidate_shifts(pa, pb))
        if not cc:
            raise TwistError(f"no monomial match for generator term {b}")
        cands.append(cc)
    for choice in iproduct(*cands):
        deltas = []
        gs = []
        feasible = True
        for l, b in enumerate(basis):
            delta, ratio = choice[l]
            c = [Fraction(spec.exponent(b, j)) for j in range(spec.n)]
            cd = sum(x * y for x, y in zip(c, delta))
            try:
                gs.append(ratio * field.v_power(-cd))
            except ValueError:
                feasible = False
                break
            deltas.append(delta)
        if not feasible:
            continue
        try:
            tw = TwistAutomorphism(rs, spec, field, deltas, gs, basis)
        except (TwistError, ValueError):
            continue
        try:
            if tw.apply(source) == target:
                return tw
        except (TwistError, ValueError):
            continue
    raise TwistError("twist system is inconsistent on the full hamiltonians")


# ---------------------------------------------------------------------------
# top-level operations
# ---------------------------------------------------------------------------

def hamiltonian_in_torus(rs: RootSystem, field: ScalarField, pair,
                         spec: Optional[TorusSpec] = None) -> TorusElement:
    from .hamiltonians import build_D1_closed
    from .torus import from_difference_operator
    if spec is None:
        spec = torus_spec_for(rs, reduced=True)
    return from_difference_operator(build_D1_closed(rs, field, pair), rs, spec)


def solve_pair_conjugation(rs: RootSystem, field: ScalarField, pairA, pairB,
                           spec: Optional[TorusSpec] = None
                           ) -> TwistAutomorphism:
    """Twist with Phi(H(pairA)) = H(pairB); requires equal invariant vectors
    (reported before any solving)."""
    from .triples import epsilon_invariant
    if epsilon_invariant(pairA) != epsilon_invariant(pairB):
        raise TwistError("hypothesis violated: pairs have different "
                         "epsilon invariants "
                         f"{epsilon_invariant(pairA)} != {epsilon_invariant(pairB)}")
    if spec is None:
        spec = torus_spec_for(rs, reduced=True)
    ha = hamiltonian_in_torus(rs, field, pairA, spec)
    hb = hamiltonian_in_torus(rs, field, pairB, spec)
    return solve_twist(rs, spec, field, ha, hb)


def solve_lax_matching(rs: RootSystem, field: ScalarField, pair,
                       kvec: Sequence[int]) -> TwistAutomorphism:
    """Twist mapping H(pair) to the quadratic Lax hamiltonian for a
    compatible k-vector (types A and C)."""
    from .lax import double_mixed_h2_formula, mixed_h2_formula
    from .triples import epsilon_invariant
    ev = epsilon_invariant(pair)
    if rs.family == "A":
        n = rs.rank + 1
        if len(kvec) != n:
            raise TwistError("k-vector must have length rank+1")
        for i in range(1, n - 1):
            if kvec[i] != ev[i - 1]:
                raise TwistError(f"k_{i+1} = {kvec[i]} incompatible with "
                                 f"epsilon invariant {ev[i-1]}")
        spec = torus_spec_for(rs, reduced=True)
        target = mixed_h2_formula(spec, field, kvec)
    elif rs.family == "C":
        n = rs.rank
        if len(kvec) != n:
            raise TwistError("k-vector must have length rank")
        for i in range(1, n):
            if kvec[i] != ev[i - 1]:
                raise TwistError(f"k_{i+1} = {kvec[i]} incompatible with "
                                 f"epsilon invariant {ev[i-1]}")
        spec = torus_spec_for(rs)
        target = double_mixed_h2_formula(spec, field, kvec)
    else:
        raise TwistError("Lax matching exists for types A and C only")
    source = hamiltonian_in_torus(rs, field, pair, spec)
    return solve_twist(rs, spec, field, source, target)


def conjugate_and_compare(tw: TwistAutomorphism, sources: Sequence[TorusElement],
                          targets: Sequence[TorusElement]) -> bool:
    if len(sources) != len(targets):
        return False
    return all(tw.apply(s) == t for s, t in zip(sources, targets))


def periodic_affine_conjugacy(rs: RootSystem, field: ScalarField,
                              eps: Scalar) -> TwistAutomorphism:
    """Twist mapping the periodic quadratic hamiltonian at k = 0 to the
    torus image of the affine first hamiltonian with the matching kappa
    (type A: kappa = (-1)^n (v-v^{-1})^{-2n} eps; type C:
    kappa = v^{2n+2}(v-v^{-1})^{-4(n-1)}(v^2-v^{-2})^{-4} eps)."""
    from .hamiltonians import build_affine_D1
    from .lax import closed_double_mixed_h2_formula, closed_mixed_h2_formula
    from .torus import from_difference_operator
    v = field.v_power(1)
    vm = field.v_power(-1)
    if rs.family == "A":
        n = rs.rank + 1
        spec = torus_spec_for(rs, reduced=True)
        source = closed_mixed_h2_formula(spec, field, [0] * n, eps)
        kappa = field.rational((-1) ** n) * (v - vm) ** (-2 * n) * eps
    elif rs.family == "C":
        n = rs.rank
        spec = torus_spec_for(rs)
        source = closed_double_mixed_h2_formula(spec, field, [0] * n, eps)
        kappa = (field.v_power(2 * n + 2) * (v - vm) ** (-4 * (n - 1))
                 * (v ** 2 - vm ** 2) ** (-4) * eps)
    else:
        raise TwistError("periodic deformations exist for types A and C only")
    target = from_difference_operator(build_affine_D1(rs, field, kappa), rs, spec)
    return solve_twist(rs, spec, field, source, target)
