"""Modified quantum difference Toda hamiltonians.

Three routes are provided:

* ``build_DV_generic`` -- the trace-of-R-matrix recipe: expand the product of
  truncated simple-root R-factors against a weight-basis representation,
  rewrite each surviving trace term through the twisted generators, apply the
  characters, and conjugate by e^rho.
* ``build_D1_closed`` -- the explicit first hamiltonians for types A, B, C, D
  and G2, transcribed term by term.
* ``build_standard_qToda`` / ``build_affine_D1`` -- the standard and affine
  specializations.

For type B the first-fundamental module forces [2]_v factors on the raising
entries through the zero-weight vector (see ``reps``); the closed forms here
carry the matching factor [2]_v^(beta_n) so that closed and generic routes
agree exactly.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import product as iproduct
from typing import List, Optional, Sequence, Tuple

from .cartan import RootSystem
from .qdiff import DifferenceOperator
from .reps import WeightBasisRep, mat_mul, mat_pow
from .scalars import Scalar, ScalarField
from .triples import SevostyanovTriplePair, compatible_order


class _Builder:
    """Accumulate scalar * e^{-beta} * T_mu terms (mu in varpi-coordinates)."""

    def __init__(self, rs: RootSystem, field: ScalarField):
        self.rs = rs
        self.field = field
        self.op = DifferenceOperator.zero(rs, field)

    def add(self, coeff: Scalar, beta: Sequence[int], mu_varpi: Sequence):
        mu = self.rs.varpi(mu_varpi)
        self.op = self.op + DifferenceOperator.term(self.rs, self.field,
                                                    coeff, tuple(beta), mu)

    def add_omega(self, coeff: Scalar, beta: Sequence[int], mu_omega):
        self.op = self.op + DifferenceOperator.term(
            self.rs, self.field, coeff,
            tuple(beta), tuple(Fraction(x) for x in mu_omega))


def _b_consts(rs: RootSystem, field: ScalarField,
              pair: SevostyanovTriplePair) -> List[Scalar]:
    """b_i = (v_i - v_i^{-1})^2 v_i^{n+_ii - n-_ii} c+_i c-_i (1-based list)."""
    out = [None]
    for i in range(1, rs.rank + 1):
        d = rs.d[i - 1]
        vi = field.v_power(d)
        diff = pair.plus.nmat[i - 1][i - 1] - pair.minus.nmat[i - 1][i - 1]
        out.append((vi - field.v_power(-d)) ** 2 * field.v_power(d * diff)
                   * pair.plus.c[i - 1] * pair.minus.c[i - 1])
    return out


def _ndiff(pair, i, j):
    """n+_ij - n-_ij, 1-based."""
    return pair.plus.nmat[i - 1][j - 1] - pair.minus.nmat[i - 1][j - 1]


def _run_gate(pair: SevostyanovTriplePair, edges, sign: int) -> bool:
    """True when eps+ = sign and eps- = -sign on every listed edge (1-based)."""
    for (a, b) in edges:
        if pair.plus.eps[a - 1][b - 1] != sign:
            return False
        if pair.minus.eps[a - 1][b - 1] != -sign:
            return False
    return True


# ---------------------------------------------------------------------------
# generic builder
# ---------------------------------------------------------------------------

def build_DV_generic(rs: RootSystem, field: ScalarField, V: WeightBasisRep,
                     pair: SevostyanovTriplePair,
                     orders: Optional[Tuple[Tuple[int, ...], Tuple[int, ...]]] = None,
                     cap: int = 8, conjugate: bool = True) -> DifferenceOperator:
    """Hamiltonian attached to V via the truncated R-matrix trace.

    ``orders`` overrides the (plus, minus) convex orderings of the simple
    roots; they default to ``compatible_order`` of the two orientations and
    must satisfy the same compatibility."""
    n = rs.rank
    if orders is None:
        order_p = compatible_order(rs, pair.plus.eps)
        order_m = compatible_order(rs, pair.minus.eps)
    else:
        order_p, order_m = orders
        for order, eps in ((order_p, pair.plus.eps), (order_m, pair.minus.eps)):
            pos = {idx: k for k, idx in enumerate(order)}
            for i in range(n):
                for j in range(n):
                    if eps[i][j] == -1 and pos[i + 1] > pos[j + 1]:
                        raise ValueError("ordering incompatible with orientation")
    nil = [0] + [V.nilpotency(i, cap) for i in range(1, n + 1)]
    one = field.one()

    # truncated R-factor coefficients (v_i - v_i^{-1})^r / (r)_{v_i^{-2}}!,
    # the square-bracket convention with q_root = q^{(root,root)}; validated
    # against the eigenfunction identity
    def trunc(i: int, r: int) -> Scalar:
        d = rs.d[i - 1]
        return ((field.v_power(d) - field.v_power(-d)) ** r
                * field.exp_series_coeff(r, -2 * d))

    # V-side words, cached by exponent vector
    def word_mats(order, mats, m):
        out = None
        for idx in order:
            if m[idx - 1]:
                p = mat_pow(field, mats[idx - 1], m[idx - 1])
                out = p if out is None else mat_mul(field, out, p)
        return {} if out is None else out

    nu_p = [None] + [pair.plus.nu(i) for i in range(1, n + 1)]
    nu_m = [None] + [pair.minus.nu(i) for i in range(1, n + 1)]

    def tau_plus(m):
        tot = Fraction(0)
        for k, ik in enumerate(order_p):
            if not m[ik - 1]:
                continue
            prefix = [0] * n
            for s in range(k):
                prefix[order_p[s] - 1] += m[order_p[s] - 1]
            base = rs.pairing_root_weight(prefix, nu_p[ik])
            aa = rs.pairing_root_weight([1 if t == ik - 1 else 0 for t in range(n)],
                                        nu_p[ik])
            for r in range(1, m[ik - 1] + 1):
                tot += base + r * aa
        return tot

    def tau_minus(m):
        tot = Fraction(0)
        for k, jk in enumerate(order_m):
            if not m[jk - 1]:
                continue
            suffix = [0] * n
            for s in range(k + 1, n):
                suffix[order_m[s] - 1] += m[order_m[s] - 1]
            base = rs.pairing_root_weight(suffix, nu_m[jk])
            aa = rs.pairing_root_weight([1 if t == jk - 1 else 0 for t in range(n)],
                                        nu_m[jk])
            for r in range(1, m[jk - 1] + 1):
                tot -= base + r * aa
        return tot

    out = DifferenceOperator.zero(rs, field)
    ranges = [range(nil[i] + 1) for i in range(1, n + 1)]
    for m_minus in iproduct(*ranges):
        beta = list(m_minus)
        matA = word_mats(order_m, V.e, m_minus)
        if beta != [0] * n and not matA:
            continue
        coef_m = one
        for i in range(1, n + 1):
            if m_minus[i - 1]:
                coef_m = coef_m * trunc(i, m_minus[i - 1])
                coef_m = coef_m * pair.minus.c[i - 1] ** m_minus[i - 1]
        for m_plus in iproduct(*ranges):
            if list(m_plus) != beta:
                continue  # trace terms need equal root content on both sides
            matB = word_mats(order_p, V.f, m_plus)
            if beta != [0] * n and not matB:
                continue
            coef = coef_m
            for i in range(1, n + 1):
                if m_plus[i - 1]:
                    coef = coef * trunc(i, m_plus[i - 1])
                    coef = coef * pair.plus.c[i - 1] ** m_plus[i - 1]
            vtau = tau_plus(m_plus) + tau_minus(m_minus)
            nu_shift = rs.zero_weight()
            for i in range(1, n + 1):
                if m_minus[i - 1]:
                    nu_shift = tuple(a + m_minus[i - 1] * b
                                     for a, b in zip(nu_shift, nu_m[i]))
                if m_plus[i - 1]:
                    nu_shift = tuple(a - m_plus[i - 1] * b
                                     for a, b in zip(nu_shift, nu_p[i]))
            if beta == [0] * n:
                pairs_kk = [(k, k, one) for k in range(V.dim)]
            else:
                pairs_kk = []
                for (k2, k1), aval in matA.items():
                    bval = matB.get((k1, k2))
                    if bval is not None:
                        pairs_kk.append((k1, k2, aval * bval))
            for k1, k2, vside in pairs_kk:
                mu1 = V.weights[k1]
                mu2 = V.weights[k2]
                exp = (2 * rs.pairing(rs.rho, mu2) + vtau
                       - rs.pairing_root_weight(beta, mu2))
                mu = tuple(a + b + c for a, b, c in zip(nu_shift, mu1, mu2))
                term = coef * vside * field.v_power(exp)
                out = out + DifferenceOperator.term(rs, field, term,
                                                    tuple(beta), mu)
    if conjugate:
        out = out.conjugate_by_e_rho()
    return out


# ---------------------------------------------------------------------------
# closed forms
# ---------------------------------------------------------------------------

def build_D1_closed(rs: RootSystem, field: ScalarField,
                    pair: SevostyanovTriplePair) -> DifferenceOperator:
    if pair.rs != rs:
        raise ValueError("pair lives on a different root system")
    fn = {"A": _closed_a, "C": _closed_c, "D": _closed_d, "B": _closed_b,
          "G": _closed_g2}[rs.family]
    return fn(rs, field, pair)


def _closed_a(rs, field, pair):
    n = rs.rank + 1
    b = _b_consts(rs, field, pair)

    def mik(i, k):
        return sum(-_ndiff(pair, i, p) for p in range(k, n))

    B = _Builder(rs, field)
    for j in range(1, n + 1):
        B.add(field.one(), [0] * rs.rank, [2 if t == j - 1 else 0 for t in range(n)])
    for i in range(1, n):
        exp = sum(Fraction(2 * k - n - 1, 2) * mik(i, k) for k in range(1, n + 1))
        mu = [mik(i, k) + (k == i) + (k == i + 1) for k in range(1, n + 1)]
        beta = [1 if t == i - 1 else 0 for t in range(rs.rank)]
        B.add(b[i] * field.v_power(exp), beta, mu)
    for i in range(1, n):
        for j in range(i + 2, n + 1):
            edges = [(a, a + 1) for a in range(i, j - 1)]
            if not _run_gate(pair, edges, +1):
                continue
            coeff = field.one()
            for s in range(i, j):
                coeff = coeff * b[s]
            exp = Fraction(j - i - 1)
            exp += sum(_ndiff(pair, a, bb) for a in range(i, j)
                       for bb in range(a + 1, j))
            exp += sum(Fraction(2 * k - n - 1, 2) * mik(s, k)
                       for k in range(1, n + 1) for s in range(i, j))
            mu = [sum(mik(s, k) for s in range(i, j)) + (k == i) + (k == j)
                  for k in range(1, n + 1)]
            beta = [1 if i <= t + 1 <= j - 1 else 0 for t in range(rs.rank)]
            B.add(coeff * field.v_power(exp), beta, mu)
    return B.op


def _closed_c(rs, field, pair):
    n = rs.rank
    b = _b_consts(rs, field, pair)

    def mik(i, k):
        return sum(-_ndiff(pair, i, p) for p in range(k, n + 1))

    B = _Builder(rs, field)
    one = field.one()
    for i in range(1, n + 1):
        B.add(one, [0] * n, [2 if t == i - 1 else 0 for t in range(n)])
        B.add(one, [0] * n, [-2 if t == i - 1 else 0 for t in range(n)])
    # b_n term
    exp = sum(Fraction(k - n - 1) * mik(n, k) for k in range(1, n + 1))
    B.add(b[n] * field.v_power(exp), [0] * (n - 1) + [1],
          [mik(n, k) for k in range(1, n + 1)])
    # single-root terms, i < n
    for i in range(1, n):
        exp = sum(Fraction(k - n - 1) * mik(i, k) for k in range(1, n + 1))
        beta = [1 if t == i - 1 else 0 for t in range(n)]
        c = b[i] * field.v_power(exp)
        B.add(c, beta, [mik(i, k) + (k == i) + (k == i + 1) for k in range(1, n + 1)])
        B.add(c, beta, [mik(i, k) - (k == i) - (k == i + 1) for k in range(1, n + 1)])
    for sign in (+1, -1):
        def nd(a, bb):
            return _ndiff(pair, a, bb) if sign > 0 else _ndiff(pair, bb, a)
        # i < j < n runs
        for i in range(1, n):
            for j in range(i + 1, n):
                edges = [(a, a + 1) for a in range(i, j)]
                if not _run_gate(pair, edges, sign):
                    continue
                coeff = one
                for s in range(i, j + 1):
                    coeff = coeff * b[s]
                exp = Fraction(j - i)
                exp += sum(nd(a, bb) for a in range(i, j + 1)
                           for bb in range(a + 1, j + 1))
                exp += sum(Fraction(k - n - 1) * mik(s, k)
                           for k in range(1, n + 1) for s in range(i, j + 1))
                mu = [sum(mik(s, k) for s in range(i, j + 1))
                      + sign * ((k == i) + (k == j + 1)) for k in range(1, n + 1)]
                beta = [1 if i <= t + 1 <= j else 0 for t in range(n)]
                B.add(coeff * field.v_power(exp), beta, mu)
        # runs through alpha_n
        for i in range(1, n):
            edges = [(a, a + 1) for a in range(i, n)]
            if not _run_gate(pair, edges, sign):
                continue
            coeff = one
            for s in range(i, n + 1):
                coeff = coeff * b[s]
            exp = Fraction(n + 1 - i)
            if sign > 0:
                exp += sum(_ndiff(pair, a, bb) * (1 + (bb == n))
                           for a in range(i, n + 1) for bb in range(a + 1, n + 1))
            else:
                exp += sum(_ndiff(pair, bb, a)
                           for a in range(i, n + 1) for bb in range(a + 1, n + 1))
            exp += sum(Fraction(k - n - 1) * mik(s, k)
                       for k in range(1, n + 1) for s in range(i, n + 1))
            mu = [sum(mik(s, k) for s in range(i, n + 1))
                  + sign * ((k == i) - (k == n)) for k in range(1, n + 1)]
            beta = [1 if t + 1 >= i else 0 for t in range(n)]
            B.add(coeff * field.v_power(exp), beta, mu)
    return B.op


def _closed_d(rs, field, pair):
    n = rs.rank
    b = _b_consts(rs, field, pair)

    def mik(i, k):
        if k < n:
            return (sum(Fraction(-_ndiff(pair, i, p)) for p in range(k, n - 1))
                    + Fraction(-_ndiff(pair, i, n - 1), 2)
                    + Fraction(-_ndiff(pair, i, n), 2))
        return Fraction(_ndiff(pair, i, n - 1), 2) + Fraction(-_ndiff(pair, i, n), 2)

    B = _Builder(rs, field)
    one = field.one()
    for i in range(1, n + 1):
        B.add(one, [0] * n, [2 if t == i - 1 else 0 for t in range(n)])
        B.add(one, [0] * n, [-2 if t == i - 1 else 0 for t in range(n)])
    beta_n = [0] * (n - 1) + [1]
    expn = sum(Fraction(k - n) * mik(n, k) for k in range(1, n + 1))
    B.add(b[n] * field.v_power(expn), beta_n,
          [mik(n, k) - (k == n - 1) + (k == n) for k in range(1, n + 1)])
    # the paired term carries no extra v-power: the trace weight
    # v^{(2 rho, varpi_{n-1})} = v^2 cancels against the K-reordering
    B.add(b[n] * field.v_power(expn), beta_n,
          [mik(n, k) + (k == n - 1) - (k == n) for k in range(1, n + 1)])
    exp = (Fraction(_ndiff(pair, n - 1, n))
           + sum(Fraction(k - n) * (mik(n - 1, k) + mik(n, k))
                 for k in range(1, n + 1)))
    B.add(b[n - 1] * b[n] * field.v_power(exp),
          [0] * (n - 2) + [1, 1],
          [mik(n - 1, k) + mik(n, k) for k in range(1, n + 1)])
    for i in range(1, n):
        exp = sum(Fraction(k - n) * mik(i, k) for k in range(1, n + 1))
        beta = [1 if t == i - 1 else 0 for t in range(n)]
        c = b[i] * field.v_power(exp)
        B.add(c, beta, [mik(i, k) + (k == i) + (k == i + 1) for k in range(1, n + 1)])
        B.add(c, beta, [mik(i, k) - (k == i) - (k == i + 1) for k in range(1, n + 1)])
    for sign in (+1, -1):
        def nd(a, bb):
            return _ndiff(pair, a, bb) if sign > 0 else _ndiff(pair, bb, a)
        for i in range(1, n):
            for j in range(i + 1, n):
                edges = [(a, a + 1) for a in range(i, j)]
                if not _run_gate(pair, edges, sign):
                    continue
                coeff = one
                for s in range(i, j + 1):
                    coeff = coeff * b[s]
                exp = Fraction(j - i)
                exp += sum(nd(a, bb) for a in range(i, j + 1)
                           for bb in range(a + 1, j + 1))
                exp += sum(Fraction(k - n) * mik(s, k)
                           for k in range(1, n + 1) for s in range(i, j + 1))
                mu = [sum(mik(s, k) for s in range(i, j + 1))
                      + sign * ((k == i) + (k == j + 1)) for k in range(1, n + 1)]
                beta = [1 if i <= t + 1 <= j else 0 for t in range(n)]
                B.add(coeff * field.v_power(exp), beta, mu)
        for i in range(1, n - 1):
            # chain i..n-2 then branch edge (n-2, n), skipping alpha_{n-1}
            edges = [(a, a + 1) for a in range(i, n - 2)] + [(n - 2, n)]
            if _run_gate(pair, edges, sign):
                srange = [s for s in range(i, n + 1) if s != n - 1]
                coeff = one
                for s in srange:
                    coeff = coeff * b[s]
                exp = Fraction(n - i - 1)
                exp += sum(nd(a, bb) for a in srange for bb in srange if a < bb)
                exp += sum(Fraction(k - n) * mik(s, k)
                           for k in range(1, n + 1) for s in srange)
                mu = [sum(mik(s, k) for s in srange)
                      + sign * ((k == i) - (k == n)) for k in range(1, n + 1)]
                beta = [1 if (i <= t + 1 <= n - 2 or t + 1 == n) else 0
                        for t in range(n)]
                B.add(coeff * field.v_power(exp), beta, mu)
            # full chain i..n-1 plus branch edge (n-2, n)
            edges = [(a, a + 1) for a in range(i, n - 1)] + [(n - 2, n)]
            if _run_gate(pair, edges, sign):
                coeff = one
                for s in range(i, n + 1):
                    coeff = coeff * b[s]
                exp = Fraction(n - i)
                exp += sum(nd(a, bb) for a in range(i, n + 1)
                           for bb in range(a + 1, n + 1))
                exp += sum(Fraction(k - n) * mik(s, k)
                           for k in range(1, n + 1) for s in range(i, n + 1))
                mu = [sum(mik(s, k) for s in range(i, n + 1))
                      + sign * ((k == i) - (k == n - 1)) for k in range(1, n + 1)]
                beta = [1 if t + 1 >= i else 0 for t in range(n)]
                B.add(coeff * field.v_power(exp), beta, mu)
    return B.op


def _closed_b(rs, field, pair):
    n = rs.rank
    b = _b_consts(rs, field, pair)
    two = field.v_power(1) + field.v_power(-1)
    # square of (v - v^{-1})^2/(2)_{v^{-2}}! relative to b_n^2: the
    # eigenfunction identity forces v^4/(1+v^2)^2 here
    rfac = field.v_power(4) / (field.one() + field.v_power(2)) ** 2

    def mik(i, k):
        return sum(Fraction(-_ndiff(pair, i, p)) * (Fraction(1, 2) if p == n else 1)
                   for p in range(k, n + 1))

    B = _Builder(rs, field)
    one = field.one()
    B.add(one, [0] * n, [0] * n)
    for i in range(1, n + 1):
        B.add(one, [0] * n, [2 if t == i - 1 else 0 for t in range(n)])
        B.add(one, [0] * n, [-2 if t == i - 1 else 0 for t in range(n)])
    beta_n = [0] * (n - 1) + [1]
    expn = sum(Fraction(2 * k - 2 * n - 1) * mik(n, k) for k in range(1, n + 1))
    cn = b[n] * field.v_power(expn) * two
    B.add(cn * field.v_power(1), beta_n,
          [mik(n, k) - (k == n) for k in range(1, n + 1)])
    B.add(cn * field.v_power(-1), beta_n,
          [mik(n, k) + (k == n) for k in range(1, n + 1)])
    exp = (Fraction(-2 + _ndiff(pair, n, n))
           + sum(Fraction(4 * k - 4 * n - 2) * mik(n, k) for k in range(1, n + 1)))
    B.add(b[n] ** 2 * field.v_power(exp) * two ** 2 * rfac,
          [0] * (n - 1) + [2], [2 * mik(n, k) for k in range(1, n + 1)])
    for i in range(1, n):
        exp = sum(Fraction(2 * k - 2 * n - 1) * mik(i, k) for k in range(1, n + 1))
        beta = [1 if t == i - 1 else 0 for t in range(n)]
        c = b[i] * field.v_power(exp)
        B.add(c, beta, [mik(i, k) + (k == i) + (k == i + 1) for k in range(1, n + 1)])
        B.add(c, beta, [mik(i, k) - (k == i) - (k == i + 1) for k in range(1, n + 1)])
    for sign in (+1, -1):
        def nd(a, bb):
            return _ndiff(pair, a, bb) if sign > 0 else _ndiff(pair, bb, a)
        for i in range(1, n):
            for j in range(i + 1, n):
                edges = [(a, a + 1) for a in range(i, j)]
                if not _run_gate(pair, edges, sign):
                    continue
                coeff = one
                for s in range(i, j + 1):
                    coeff = coeff * b[s]
                exp = Fraction(2 * j - 2 * i)
                exp += 2 * sum(nd(a, bb) for a in range(i, j + 1)
                               for bb in range(a + 1, j + 1))
                exp += sum(Fraction(2 * k - 2 * n - 1) * mik(s, k)
                           for k in range(1, n + 1) for s in range(i, j + 1))
                mu = [sum(mik(s, k) for s in range(i, j + 1))
                      + sign * ((k == i) + (k == j + 1)) for k in range(1, n + 1)]
                beta = [1 if i <= t + 1 <= j else 0 for t in range(n)]
                B.add(coeff * field.v_power(exp), beta, mu)
        for i in range(1, n):
            edges = [(a, a + 1) for a in range(i, n)]
            if not _run_gate(pair, edges, sign):
                continue
            # run reaching alpha_n once: extra [2]_v from the module
            coeff = two
            for s in range(i, n + 1):
                coeff = coeff * b[s]
            if sign > 0:
                exp = Fraction(2 * n - 2 * i - 1)
                exp += sum(_ndiff(pair, a, bb) * (2 - (bb == n))
                           for a in range(i, n + 1) for bb in range(a + 1, n + 1))
            else:
                exp = Fraction(2 * n - 2 * i + 1)
                exp += 2 * sum(_ndiff(pair, bb, a)
                               for a in range(i, n + 1) for bb in range(a + 1, n + 1))
            exp += sum(Fraction(2 * k - 2 * n - 1) * mik(s, k)
                       for k in range(1, n + 1) for s in range(i, n + 1))
            mu = [sum(mik(s, k) for s in range(i, n + 1)) + sign * (k == i)
                  for k in range(1, n + 1)]
            beta = [1 if t + 1 >= i else 0 for t in range(n)]
            B.add(coeff * field.v_power(exp), beta, mu)
        for i in range(1, n):
            edges = [(a, a + 1) for a in range(i, n)]
            if not _run_gate(pair, edges, sign):
                continue
            # run with alpha_n twice: extra [2]_v^2
            coeff = b[n] ** 2 * two ** 2 * rfac
            for s in range(i, n):
                coeff = coeff * b[s]
            exp = Fraction(2 * n - 2 * i + _ndiff(pair, n, n))
            if sign > 0:
                exp += 2 * sum(_ndiff(pair, a, bb)
                               for a in range(i, n + 1) for bb in range(a + 1, n + 1))
            else:
                exp += sum(_ndiff(pair, bb, a) * (2 + 2 * (bb == n))
                           for a in range(i, n + 1) for bb in range(a + 1, n + 1))
            exp += sum(Fraction(2 * k - 2 * n - 1) * (1 + (s == n)) * mik(s, k)
                       for k in range(1, n + 1) for s in range(i, n + 1))
            mu = [sum(mik(s, k) for s in range(i, n + 1)) + mik(n, k)
                  + sign * ((k == i) - (k == n)) for k in range(1, n + 1)]
            beta = [(1 if i <= t + 1 <= n - 1 else 0) for t in range(n - 1)] + [2]
            B.add(coeff * field.v_power(exp), beta, mu)
    return B.op


def _closed_g2(rs, field, pair):
    b = _b_consts(rs, field, pair)
    two = field.v_power(1) + field.v_power(-1)
    rfac = field.v_power(4) / (field.one() + field.v_power(2)) ** 2
    nd = lambda a, bb: _ndiff(pair, a, bb)
    m11 = Fraction(-nd(1, 1) - nd(1, 2))
    m12 = Fraction(-nd(1, 1) - 2 * nd(1, 2))
    m21 = Fraction(-nd(2, 1) - nd(2, 2))
    m22 = Fraction(-nd(2, 1) - 2 * nd(2, 2))

    B = _Builder(rs, field)
    one = field.one()
    B.add(one, [0, 0], [0, 0])
    for mu in ([2, 0], [-2, 0], [0, 2], [0, -2], [2, 2], [-2, -2]):
        B.add(one, [0, 0], mu)
    c1 = b[1] * field.v_power(-m11 - 4 * m12)
    B.add(c1 * field.v_power(-1) * two, [1, 0], [m11 + 1, m12])
    B.add(c1 * field.v_power(1) * two, [1, 0], [m11 - 1, m12])
    B.add(c1, [1, 0], [m11 + 1, m12 + 2])
    B.add(c1, [1, 0], [m11 - 1, m12 - 2])
    c2 = b[2] * field.v_power(-m21 - 4 * m22)
    B.add(c2, [0, 1], [m21 + 1, m22 + 1])
    B.add(c2, [0, 1], [m21 - 1, m22 - 1])
    B.add(b[1] ** 2 * two ** 2 * rfac
          * field.v_power(Fraction(-2 + nd(1, 1)) - 2 * m11 - 8 * m12),
          [2, 0], [2 * m11, 2 * m12])
    if pair.plus.eps[0][1] == -1 and pair.minus.eps[0][1] == 1:
        c = b[1] * b[2] * field.v_power(
            Fraction(-4 + 3 * nd(1, 2)) - (m11 + m21 + 4 * m12 + 4 * m22))
        B.add(c * two, [1, 1], [m11 + m21, m12 + m22 + 1])
        B.add(c * field.v_power(1), [1, 1], [m11 + m21 - 2, m12 + m22 - 1])
        c = (b[1] ** 2 * b[2] * two ** 2 * rfac
             * field.v_power(Fraction(-8 + nd(1, 1) + 6 * nd(1, 2))
                             - (2 * m11 + m21 + 8 * m12 + 4 * m22)))
        B.add(c, [2, 1], [2 * m11 + m21 - 1, 2 * m12 + m22 + 1])
    if pair.plus.eps[0][1] == 1 and pair.minus.eps[0][1] == -1:
        c = b[1] * b[2] * field.v_power(
            Fraction(3 + 3 * nd(1, 2)) - (m11 + m21 + 4 * m12 + 4 * m22))
        B.add(c * field.v_power(1) * two, [1, 1], [m11 + m21, m12 + m22 - 1])
        B.add(c, [1, 1], [m11 + m21 + 2, m12 + m22 + 1])
        c = (b[1] ** 2 * b[2] * two ** 2 * rfac
             * field.v_power(Fraction(4 + nd(1, 1) + 6 * nd(1, 2))
                             - (2 * m11 + m21 + 8 * m12 + 4 * m22)))
        B.add(c, [2, 1], [2 * m11 + m21 + 1, 2 * m12 + m22 - 1])
    return B.op


# ---------------------------------------------------------------------------
# standard and affine specializations
# ---------------------------------------------------------------------------

def build_standard_qToda(rs: RootSystem, field: ScalarField) -> DifferenceOperator:
    """First hamiltonian of the standard q-Toda system (the eps+ = eps-,
    n+ = n-, c = +-1 specialization); type B carries [2]_v factors on the
    alpha_n terms to match the relation-checked module."""
    B = _Builder(rs, field)
    one = field.one()
    v = field.v_power(1)
    vm = field.v_power(-1)
    n = rs.rank
    sq = (v - vm) ** 2
    if rs.family == "A":
        nvp = n + 1
        for j in range(1, nvp + 1):
            B.add(one, [0] * n, [2 if t == j - 1 else 0 for t in range(nvp)])
        for i in range(1, nvp):
            B.add(-sq, [1 if t == i - 1 else 0 for t in range(n)],
                  [1 if t + 1 in (i, i + 1) else 0 for t in range(nvp)])
        return B.op
    if rs.family in ("C", "D", "B"):
        for i in range(1, n + 1):
            B.add(one, [0] * n, [2 if t == i - 1 else 0 for t in range(n)])
            B.add(one, [0] * n, [-2 if t == i - 1 else 0 for t in range(n)])
        coef_i = sq if rs.family in ("C", "D") else (v ** 2 - vm ** 2) ** 2
        for i in range(1, n):
            beta = [1 if t == i - 1 else 0 for t in range(n)]
            mu = [1 if t + 1 in (i, i + 1) else 0 for t in range(n)]
            B.add(-coef_i, beta, mu)
            B.add(-coef_i, beta, [-x for x in mu])
        if rs.family == "C":
            B.add(-(v ** 2 - vm ** 2) ** 2, [0] * (n - 1) + [1], [0] * n)
        elif rs.family == "D":
            beta = [0] * (n - 1) + [1]
            B.add(-sq, beta, [0] * (n - 2) + [-1, 1])
            B.add(-sq, beta, [0] * (n - 2) + [1, -1])
            B.add(sq ** 2, [0] * (n - 2) + [1, 1], [0] * n)
        else:  # B
            B.add(one, [0] * n, [0] * n)
            two = v + vm
            beta = [0] * (n - 1) + [1]
            B.add(-sq * v * two, beta, [0] * (n - 1) + [-1])
            B.add(-sq * vm * two, beta, [0] * (n - 1) + [1])
            B.add(sq ** 2, [0] * (n - 1) + [2], [0] * n)
        return B.op
    # G2
    B.add(one, [0, 0], [0, 0])
    for mu in ([2, 0], [-2, 0], [0, 2], [0, -2], [2, 2], [-2, -2]):
        B.add(one, [0, 0], mu)
    two = v + vm
    B.add(-sq * vm * two, [1, 0], [1, 0])
    B.add(-sq * v * two, [1, 0], [-1, 0])
    B.add(-sq, [1, 0], [1, 2])
    B.add(-sq, [1, 0], [-1, -2])
    B.add(-(v ** 3 - vm ** 3) ** 2, [0, 1], [1, 1])
    B.add(-(v ** 3 - vm ** 3) ** 2, [0, 1], [-1, -1])
    B.add(sq ** 2, [2, 0], [0, 0])
    return B.op


def build_affine_D1(rs: RootSystem, field: ScalarField,
                    kappa: Optional[Scalar] = None) -> DifferenceOperator:
    """First hamiltonian of the quantum difference affine Toda system; at
    kappa = 0 this reduces to the standard q-Toda hamiltonian."""
    if kappa is None:
        kappa = field.symbol("kappa")
    out = build_standard_qToda(rs, field)
    one = field.one()
    v = field.v_power(1)
    vm = field.v_power(-1)
    sq = (v - vm) ** 2
    n = rs.rank

    def eterm(coeff, evarpi, tvarpi):
        mu_e = rs.varpi(evarpi)
        beta = rs_omega_to_alpha(rs, tuple(-x for x in mu_e))
        return DifferenceOperator.term(rs, field, coeff, beta, rs.varpi(tvarpi))

    if rs.family == "A":
        nvp = n + 1
        ev = [0] * nvp
        ev[nvp - 1] = -1
        ev[0] = 1
        tv = [0] * nvp
        tv[nvp - 1] = 1
        tv[0] = 1
        out = out + eterm(-kappa * sq, ev, tv)
    elif rs.family == "C":
        ev = [0] * n
        ev[0] = 2
        out = out + eterm(-kappa * field.v_power(-2 * n - 2)
                          * (v ** 2 - vm ** 2) ** 2, ev, [0] * n)
    elif rs.family == "D":
        base = kappa * field.v_power(-2 * n + 2)
        ev = [1, 1] + [0] * (n - 2)
        out = out + eterm(-base * sq, ev, [-1, 1] + [0] * (n - 2))
        out = out + eterm(-base * sq, ev, [1, -1] + [0] * (n - 2))
        out = out + eterm(base * sq ** 2, [0, 2] + [0] * (n - 2), [0] * n)
    elif rs.family == "B":
        base = kappa * field.v_power(-4 * n + 2)
        co = (v ** 2 - vm ** 2) ** 2
        ev = [1, 1] + [0] * (n - 2)
        out = out + eterm(-base * co, ev, [-1, 1] + [0] * (n - 2))
        out = out + eterm(-base * co, ev, [1, -1] + [0] * (n - 2))
        out = out + eterm(base * co ** 2, [0, 2] + [0] * (n - 2), [0] * n)
    else:  # G2
        base = kappa * field.v_power(-12) * (v ** 3 - vm ** 3) ** 2
        out = out + eterm(-base, [1, 2], [1, 0])
        out = out + eterm(-base, [1, 2], [-1, 0])
        out = out + eterm(base * sq, [0, 2], [0, 0])
    return out


def rs_omega_to_alpha(rs: RootSystem, mu_omega) -> Tuple[int, ...]:
    """Solve mu = sum beta_j alpha_j for integer beta (raises otherwise)."""
    n = rs.rank
    mat = [[Fraction(rs.cartan[k][j]) for j in range(n)] for k in range(n)]
    from .cartan import _solve
    sol = _solve(mat, [Fraction(x) for x in mu_omega])
    out = []
    for x in sol:
        if x.denominator != 1:
            raise ValueError("weight is not in the root lattice")
        out.append(int(x))
    return tuple(out)
