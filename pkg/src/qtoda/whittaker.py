"""Whittaker pairing coefficients through three independent routes, and the
eigenfunction identity for the Toda hamiltonians.

The reduced coefficients Jt_beta live in the field extended by u_1..u_n (the
universal highest weight enters only through the character v^{(lambda,mu)} =
prod u_i^{m_i}) and the triple constants.  Routes:

* recursion in beta, driven by the Drinfeld-Casimir identity;
* the closed form: sum over ordered decompositions of beta (the infinite
  fermionic sum collapsed to a finite rational expression);
* a Verma-module oracle that solves the defining conditions of the Whittaker
  vectors in a word basis and pairs them directly.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import product as iproduct
from typing import Callable, Dict, List, Optional, Sequence, Tuple

from .cartan import RootSystem
from .qdiff import DifferenceOperator, FormalSeries
from .reps import WeightBasisRep
from .scalars import Scalar, ScalarField
from .triples import SevostyanovTriplePair, compatible_order

Beta = Tuple[int, ...]


def whittaker_field(rs: RootSystem, extra: Sequence[str] = ()) -> ScalarField:
    """Field with q, the highest-weight characters u_i and the pair constants."""
    n = rs.rank
    syms = (["q"] + [f"u{i}" for i in range(1, n + 1)]
            + [f"c{i}p" for i in range(1, n + 1)]
            + [f"c{i}m" for i in range(1, n + 1)] + list(extra))
    return ScalarField(tuple(syms), rs.qscale)


def u_character(field: ScalarField, rs: RootSystem) -> Callable:
    """mu (integer omega-coordinates) |-> v^{(lambda, mu)} = prod u_i^{m_i}."""
    def char(mu) -> Scalar:
        exps = {}
        for i, m in enumerate(mu):
            m = Fraction(m)
            if m:
                if m.denominator != 1:
                    raise ValueError("character needs integer omega-coords")
                exps[f"u{i+1}"] = int(m)
        return field.monomial(exps)
    return char


def _betas_upto(rs: RootSystem, cutoff: int) -> List[Beta]:
    out = []
    ranges = [range(cutoff + 1)] * rs.rank
    for m in iproduct(*ranges):
        if sum(m) <= cutoff:
            out.append(tuple(m))
    out.sort(key=lambda b: (sum(b), b))
    return out


class JSeries:
    """Reduced pairing coefficients Jt_beta up to a degree cutoff."""

    def __init__(self, rs: RootSystem, field: ScalarField, cutoff: int,
                 coeffs: Dict[Beta, Scalar]):
        self.rs = rs
        self.field = field
        self.cutoff = cutoff
        self.coeffs = coeffs

    def __eq__(self, other):
        return (isinstance(other, JSeries) and self.cutoff == other.cutoff
                and self.coeffs == other.coeffs)

    def unreduced(self, character: Callable) -> Dict[Beta, Scalar]:
        """J_beta = v^{(beta,beta)/2 - (lambda,beta)} Jt_beta."""
        out = {}
        for b, s in self.coeffs.items():
            mu = self.rs.root_omega(b)
            half = self.rs.pairing(mu, mu) / 2
            out[b] = s * self.field.v_power(half) / character(mu)
        return out

    def to_json_obj(self):
        return [{"beta": list(b), "coeff": s.to_text()}
                for b, s in sorted(self.coeffs.items(),
                                   key=lambda kv: (sum(kv[0]), kv[0]))]


class _PairData:
    """Pairings shared by all three routes."""

    def __init__(self, rs: RootSystem, field: ScalarField,
                 pair: SevostyanovTriplePair, character: Optional[Callable]):
        self.rs = rs
        self.field = field
        self.pair = pair
        self.char = character if character is not None else u_character(field, rs)
        n = rs.rank
        self.order_p = compatible_order(rs, pair.plus.eps)
        self.pos_p = {idx: k for k, idx in enumerate(self.order_p)}
        self.nu_diff = [None] + [
            tuple(Fraction(pair.minus.nmat[i][k] - pair.plus.nmat[i][k])
                  for k in range(n)) for i in range(n)]
        self.cprod = [None] + [pair.plus.c[i] * pair.minus.c[i]
                               for i in range(n)]

    def c_power(self, alpha: Beta) -> Scalar:
        """prod (-c+_i c-_i (v_i - v_i^{-1})^2)^{m_i}."""
        field, rs = self.field, self.rs
        out = field.one()
        for i, m in enumerate(alpha, start=1):
            if not m:
                continue
            d = rs.d[i - 1]
            vi = field.v_power(d)
            base = -(self.cprod[i]) * (vi - field.v_power(-d)) ** 2
            out = out * base ** m
        return out

    def tau(self, alpha: Beta, beta: Beta) -> Scalar:
        """v^{tau_lambda(alpha, beta)} (the lambda-part enters as characters)."""
        rs, field = self.rs, self.field
        out = field.one()
        expo = Fraction(0)
        for i in range(1, rs.rank + 1):
            m = alpha[i - 1]
            if not m:
                continue
            nd = self.nu_diff[i]
            # m_i (nu-_i - nu+_i, lambda - beta)
            out = out * self.char(nd) ** m
            expo -= m * rs.pairing_root_weight(beta, nd)
            # sum_{j <_+ i} m_i m_j (nd_i, alpha_j)
            for j in range(1, rs.rank + 1):
                if j != i and alpha[j - 1] and self.pos_p[j] < self.pos_p[i]:
                    aj = [1 if t == j - 1 else 0 for t in range(rs.rank)]
                    expo += m * alpha[j - 1] * rs.pairing_root_weight(aj, nd)
            ai = [1 if t == i - 1 else 0 for t in range(rs.rank)]
            expo += Fraction(m * (m - 1), 2) * rs.pairing_root_weight(ai, nd)
        return out * field.v_power(expo)

    def poch(self, alpha: Beta) -> Scalar:
        out = self.field.one()
        for i, m in enumerate(alpha, start=1):
            if m:
                out = out * self.field.q_pochhammer(m, 2 * self.rs.d[i - 1])
        return out

    def wfun(self, gamma: Beta) -> Scalar:
        """W(gamma) = v^{(gamma,gamma) - 2(lambda+rho, gamma)}."""
        rs, field = self.rs, self.field
        mu = rs.root_omega(gamma)
        expo = rs.pairing(mu, mu) - 2 * rs.pairing(rs.rho, mu)
        return field.v_power(expo) / self.char(mu) ** 2


def j_tilde_recursive(rs: RootSystem, field: ScalarField,
                      pair: SevostyanovTriplePair, cutoff: int,
                      character: Optional[Callable] = None) -> JSeries:
    """Solve the Casimir recursion degree by degree."""
    data = _PairData(rs, field, pair, character)
    one = field.one()
    coeffs: Dict[Beta, Scalar] = {}
    for beta in _betas_upto(rs, cutoff):
        if not any(beta):
            coeffs[beta] = one
            continue
        total = field.zero()
        for gamma in _under(beta):
            diff = tuple(b - g for b, g in zip(beta, gamma))
            term = (coeffs[gamma] / data.poch(diff) * data.c_power(diff)
                    * data.tau(diff, beta) * data.wfun(gamma))
            total = total + term
        pivot = one - data.wfun(beta)
        if pivot.is_zero():
            raise ZeroDivisionError(
                f"vanishing recursion pivot at beta = {beta}")
        coeffs[beta] = total / pivot
    return JSeries(rs, field, cutoff, coeffs)


def _under(beta: Beta):
    """All gamma with 0 <= gamma < beta (strictly smaller somewhere)."""
    ranges = [range(b + 1) for b in beta]
    for g in iproduct(*ranges):
        if g != beta:
            yield g


def j_tilde_closed(rs: RootSystem, field: ScalarField,
                   pair: SevostyanovTriplePair, cutoff: int,
                   character: Optional[Callable] = None) -> JSeries:
    """Closed form: sum over ordered decompositions into nonzero parts."""
    data = _PairData(rs, field, pair, character)
    one = field.one()

    coeffs: Dict[Beta, Scalar] = {}

    def decompositions(beta: Beta):
        if not any(beta):
            yield ()
            return
        for part in _under(beta):
            first = tuple(b - p for b, p in zip(beta, part))
            if not any(first):
                continue
            for rest in decompositions(part):
                yield (first,) + rest

    for beta in _betas_upto(rs, cutoff):
        if not any(beta):
            coeffs[beta] = one
            continue
        total = field.zero()
        for parts in decompositions(beta):
            sigma = beta
            term = one
            for e, part in enumerate(parts):
                nxt = tuple(s - p for s, p in zip(sigma, part))
                num = data.c_power(part) * data.tau(part, sigma) * data.wfun(nxt)
                den = data.poch(part) * (one - data.wfun(sigma))
                term = term * num / den
                sigma = nxt
            total = total + term
        coeffs[beta] = total
    return JSeries(rs, field, cutoff, coeffs)


def j_tilde_fermionic_partial(rs: RootSystem, field: ScalarField,
                              pair: SevostyanovTriplePair, beta: Beta,
                              tmax: int,
                              character: Optional[Callable] = None) -> Scalar:
    """Partial sum of the fermionic formula over sequences supported on
    t < tmax; converges to Jt_beta under numeric specialization only."""
    data = _PairData(rs, field, pair, character)
    one = field.one()
    total = field.zero()

    def sequences(remaining: Beta, slots: int):
        if slots == 0:
            if not any(remaining):
                yield ()
            return
        ranges = [range(r + 1) for r in remaining]
        for part in iproduct(*ranges):
            rest = tuple(r - p for r, p in zip(remaining, part))
            for tail in sequences(rest, slots - 1):
                yield (part,) + tail

    rho = rs.rho
    for seq in sequences(beta, tmax):
        term = data.c_power(beta)
        # B-part
        expo = Fraction(0)
        mus = [rs.root_omega(p) for p in seq]
        for t in range(tmax):
            for t2 in range(tmax):
                expo += Fraction(min(t, t2)) * rs.pairing(mus[t], mus[t2])
        term = term * field.v_power(expo)
        for t in range(tmax):
            if any(seq[t]):
                term = term * (field.v_power(-2 * t * rs.pairing(rho, mus[t]))
                               / data.char(mus[t]) ** (2 * t))
        # R-part
        consumed = tuple(0 for _ in beta)
        for t in range(tmax):
            if any(seq[t]):
                rem = tuple(b - c for b, c in zip(beta, consumed))
                term = term * data.tau(seq[t], rem)
                consumed = tuple(c + p for c, p in zip(consumed, seq[t]))
            term = term / data.poch(seq[t])
        total = total + term
    return total


# ---------------------------------------------------------------------------
# Verma-module oracle
# ---------------------------------------------------------------------------

class WordPairing:
    """Memoized Shapovalov-type pairing of lowering words in the universal
    Verma module with a given highest-weight character."""

    def __init__(self, rs: RootSystem, field: ScalarField,
                 character: Callable):
        self.rs = rs
        self.field = field
        self.char = character
        self._pcache: Dict[Tuple[Tuple[int, ...], Tuple[int, ...]], Scalar] = {}

    def _k_eigen(self, i: int, gamma: Beta, barred: bool) -> Scalar:
        """Eigenvalue of [E_i, F_i]-Cartan on weight lambda - gamma (barred:
        in the v^{-1} quantum group)."""
        rs, field = self.rs, self.field
        ai = [1 if t == i - 1 else 0 for t in range(rs.rank)]
        mu = rs.alpha_omega(i)
        d = rs.d[i - 1]
        u = self.char(mu)
        vpow = field.v_power(-rs.pairing_root_weight(list(gamma), mu))
        k = u * vpow  # v^{(alpha_i, lambda - gamma)}
        if not barred:
            return (k - 1 / k) / (field.v_power(d) - field.v_power(-d))
        return (1 / k - k) / (field.v_power(-d) - field.v_power(d))

    def word_pairing(self, w: Tuple[int, ...], wbar: Tuple[int, ...]) -> Scalar:
        """(F_w 1, Fbar_wbar 1bar)."""
        field = self.field
        if len(w) != len(wbar):
            return field.zero()
        if not w:
            return field.one()
        key = (w, wbar)
        got = self._pcache.get(key)
        if got is not None:
            return got
        i, rest = w[0], w[1:]
        total = field.zero()
        # (F_i x, y) = (x, Ebar_i y): commute Ebar_i through the barred word
        suffix = [0] * self.rs.rank
        gammas = []
        for letter in reversed(wbar):
            gammas.append(tuple(suffix))
            suffix[letter - 1] += 1
        gammas.reverse()  # gammas[j] = content strictly after position j
        for j, letter in enumerate(wbar):
            if letter != i:
                continue
            coeff = self._k_eigen(i, gammas[j], barred=True)
            if coeff.is_zero():
                continue
            total = total + coeff * self.word_pairing(rest,
                                                      wbar[:j] + wbar[j + 1:])
        self._pcache[key] = total
        return total

class VermaOracle(WordPairing):
    """Pairing of the two Whittaker vectors computed inside the universal
    Verma module, using a lowering-word spanning set; independent of the
    recursion and the closed form."""

    def __init__(self, rs: RootSystem, field: ScalarField,
                 pair: SevostyanovTriplePair,
                 character: Optional[Callable] = None):
        super().__init__(rs, field,
                         character if character is not None
                         else u_character(field, rs))
        self.pair = pair

    def _theta_factor(self, word: Tuple[int, ...], beta: Beta,
                      side: str) -> Scalar:
        """(theta_beta, Fbar_word) for side '+', or (F_word, thetabar_beta)
        for side '-': explicit products from the defining conditions."""
        field, rs = self.field, self.rs
        out = field.one()
        current = list(beta)
        triple = self.pair.plus if side == "+" else self.pair.minus
        for letter in word:
            nu = triple.nu(letter)
            u = self.char(nu)
            vpow = field.v_power(-rs.pairing_root_weight(current, nu))
            if side == "+":
                out = out * triple.c[letter - 1] / (u * vpow)
            else:
                out = out * triple.c[letter - 1] * (u * vpow)
            current[letter - 1] -= 1
            if current[letter - 1] < 0:
                return field.zero()
        if any(current):
            return field.zero()
        return out

    def j_beta(self, beta: Beta) -> Scalar:
        """J_beta = (theta_beta, thetabar_beta)."""
        field = self.field
        if not any(beta):
            return field.one()
        words = _content_words(beta)
        # solve sum_y x_y (F_w, Fbar_y) = (F_w, thetabar) for the thetabar
        # coordinates x_y, then pair against theta via the explicit factors
        m = len(words)
        rowsm = [[self.word_pairing(w, y) for y in words] for w in words]
        rhs = [self._theta_factor(w, beta, "-") for w in words]
        x = _solve_scalar_system(field, rowsm, rhs)
        if x is None:
            raise ValueError(f"singular Whittaker system at beta = {beta}")
        total = field.zero()
        for y, xy in zip(words, x):
            if not xy.is_zero():
                total = total + xy * self._theta_factor(y, beta, "+")
        return total


def _content_words(beta: Beta) -> List[Tuple[int, ...]]:
    letters = []
    for i, m in enumerate(beta, start=1):
        letters += [i] * m
    out = set()

    def rec(prefix, remaining):
        if not remaining:
            out.add(tuple(prefix))
            return
        seen = set()
        for k, l in enumerate(remaining):
            if l in seen:
                continue
            seen.add(l)
            rec(prefix + [l], remaining[:k] + remaining[k + 1:])

    rec([], letters)
    return sorted(out)


def _solve_scalar_system(field: ScalarField, rows: List[List[Scalar]],
                         rhs: List[Scalar]):
    """Any exact solution of rows . x = rhs (possibly singular, consistent)."""
    m = len(rows)
    n = len(rows[0]) if rows else 0
    aug = [list(rows[r]) + [rhs[r]] for r in range(m)]
    piv = []
    row = 0
    for col in range(n):
        sel = next((r for r in range(row, m) if not aug[r][col].is_zero()), None)
        if sel is None:
            continue
        aug[row], aug[sel] = aug[sel], aug[row]
        pv = aug[row][col]
        aug[row] = [x / pv for x in aug[row]]
        for r in range(m):
            if r != row and not aug[r][col].is_zero():
                f = aug[r][col]
                aug[r] = [x - f * y for x, y in zip(aug[r], aug[row])]
        piv.append(col)
        row += 1
    for r in range(row, m):
        if not aug[r][n].is_zero():
            return None
    sol = [field.zero()] * n
    for r, col in enumerate(piv):
        sol[col] = aug[r][n]
    return sol


def j_from_verma_oracle(rs: RootSystem, field: ScalarField,
                        pair: SevostyanovTriplePair, cutoff: int,
                        character: Optional[Callable] = None) -> JSeries:
    """Ground-truth route: reduced coefficients from the module pairing."""
    oracle = VermaOracle(rs, field, pair, character)
    char = oracle.char
    coeffs: Dict[Beta, Scalar] = {}
    for beta in _betas_upto(rs, cutoff):
        j = oracle.j_beta(beta)
        mu = rs.root_omega(beta)
        half = rs.pairing(mu, mu) / 2
        coeffs[beta] = j * field.v_power(-half) * char(mu)
    return JSeries(rs, field, cutoff, coeffs)


# ---------------------------------------------------------------------------
# eigenfunction identity
# ---------------------------------------------------------------------------

def trace_eigenvalue(rs: RootSystem, field: ScalarField, V: WeightBasisRep,
                     character: Optional[Callable] = None) -> Scalar:
    """tr_V(v^{2(lambda+rho)}) = sum_k u^{2 mu_k} v^{2(rho, mu_k)}."""
    char = character if character is not None else u_character(field, rs)
    total = field.zero()
    for mu in V.weights:
        total = total + (char(mu) ** 2
                         * field.v_power(2 * rs.pairing(rs.rho, mu)))
    return total


def j_generating_series(rs: RootSystem, field: ScalarField, jt: JSeries,
                        character: Optional[Callable] = None) -> FormalSeries:
    """The series with coefficients J_beta (unreduced) in the truncated
    module."""
    char = character if character is not None else u_character(field, rs)
    return FormalSeries(rs, field, jt.cutoff, jt.unreduced(char))


def eigencheck(rs: RootSystem, field: ScalarField,
               pair: SevostyanovTriplePair, V: WeightBasisRep, cutoff: int,
               character: Optional[Callable] = None,
               jt: Optional[JSeries] = None,
               operator: Optional[DifferenceOperator] = None) -> bool:
    """Dt_V(Jt) = tr_V(v^{2(lambda+rho)}) Jt, checked coefficientwise up to
    the cutoff."""
    from .hamiltonians import build_DV_generic
    char = character if character is not None else u_character(field, rs)
    if jt is None:
        jt = j_tilde_recursive(rs, field, pair, cutoff, char)
    if operator is None:
        operator = build_DV_generic(rs, field, V, pair)
    dv_tilde = operator.conjugate_by_e_rho(inverse=True)
    series = j_generating_series(rs, field, jt, char)
    lhs = dv_tilde.apply_to_series(series, char)
    rhs = series.scale(trace_eigenvalue(rs, field, V, char))
    return (lhs - rhs).coeffs == {}
