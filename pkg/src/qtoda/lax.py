"""Local Lax matrices, (double) mixed complete monodromies, RTT verification
and hamiltonian extraction, with the periodic deformations in types A and C.

Matrices are 2x2 over Laurent polynomials in z^{1/2} with quantized-torus
coefficients; z-powers are tracked as integers doubled (so z^{1/2} is 1).
The RTT check works over two spectral variables with the trigonometric
R-matrix cleared of denominators.
"""

from __future__ import annotations

from typing import Dict, Optional, Sequence, Tuple

from .scalars import Scalar, ScalarField
from .torus import TorusElement, TorusSpec

ZEntry = Dict[int, TorusElement]          # 2*z-power -> torus element
ZWEntry = Dict[Tuple[int, int], TorusElement]


def _zadd(a: ZEntry, b: ZEntry) -> ZEntry:
    out = dict(a)
    for k, t in b.items():
        s = out.get(k)
        s2 = t if s is None else s + t
        if s2.is_zero():
            out.pop(k, None)
        else:
            out[k] = s2
    return out


def _zmul(a: ZEntry, b: ZEntry) -> ZEntry:
    out: ZEntry = {}
    for ka, ta in a.items():
        for kb, tb in b.items():
            k = ka + kb
            prod = ta * tb
            if prod.is_zero():
                continue
            s = out.get(k)
            s2 = prod if s is None else s + prod
            if s2.is_zero():
                out.pop(k, None)
            else:
                out[k] = s2
    return out


class LaxMatrix:
    """2x2 matrix of z^{1/2}-graded torus elements."""

    def __init__(self, spec: TorusSpec, field: ScalarField,
                 entries: Sequence[Sequence[ZEntry]]):
        self.spec = spec
        self.field = field
        self.entries = [[{k: t for k, t in e.items() if not t.is_zero()}
                         for e in row] for row in entries]

    def __matmul__(self, other: "LaxMatrix") -> "LaxMatrix":
        out = [[{}, {}], [{}, {}]]
        for r in range(2):
            for c in range(2):
                acc: ZEntry = {}
                for m in range(2):
                    acc = _zadd(acc, _zmul(self.entries[r][m],
                                           other.entries[m][c]))
                out[r][c] = acc
        return LaxMatrix(self.spec, self.field, out)

    def entry(self, r: int, c: int) -> ZEntry:
        return self.entries[r][c]

    def zcoeff(self, r: int, c: int, z2: int) -> TorusElement:
        return self.entries[r][c].get(z2, TorusElement.zero(self.spec, self.field))

    def combination_11_22(self, eps: Scalar) -> ZEntry:
        comb = dict(self.entries[0][0])
        scaled = {k: t.scale(eps) for k, t in self.entries[1][1].items()}
        return _zadd(comb, scaled)


def local_lax(spec: TorusSpec, field: ScalarField, i: int, k: int,
              barred: bool = False) -> LaxMatrix:
    """The three local Lax matrices; the barred versions are obtained by the
    automorphism w_i -> w_i^{-1}, D_i -> D_i^{-1}."""
    sgn = -1 if barred else 1
    one = field.one()

    def w(p):
        return TorusElement.w(spec, field, i, sgn * p)

    def d(p):
        return TorusElement.d(spec, field, i, sgn * p)

    def wd(pw, pd):
        return TorusElement.w(spec, field, i, sgn * pw) * \
            TorusElement.d(spec, field, i, sgn * pd)

    zero = TorusElement.zero(spec, field)
    if k == -1:
        return LaxMatrix(spec, field, [
            [{0: w(-1), -2: -w(1)}, {0: wd(1, -1)}],
            [{-2: -wd(1, 1)}, {0: w(1)}]])
    if k == 0:
        return LaxMatrix(spec, field, [
            [{1: w(-1), -1: -w(1)}, {1: d(-1)}],
            [{-1: -d(1)}, {}]])
    if k == 1:
        return LaxMatrix(spec, field, [
            [{2: w(-1), 0: -w(1)}, {2: wd(-1, -1)}],
            [{0: -wd(-1, 1)}, {0: -w(-1)}]])
    raise ValueError("k must be -1, 0 or 1")


def monodromy(spec: TorusSpec, field: ScalarField,
              kvec: Sequence[int]) -> LaxMatrix:
    """Mixed complete monodromy L_n^{k_n} ... L_1^{k_1}; kvec[i-1] = k_i."""
    n = spec.n
    if len(kvec) != n:
        raise ValueError("k-vector length must equal the torus rank")
    out = None
    for i in range(n, 0, -1):
        loc = local_lax(spec, field, i, kvec[i - 1])
        out = loc if out is None else out @ loc
    return out


def double_monodromy(spec: TorusSpec, field: ScalarField,
                     kvec: Sequence[int]) -> LaxMatrix:
    """barL_1^{-k_1} ... barL_n^{-k_n} L_n^{k_n} ... L_1^{k_1}."""
    n = spec.n
    out = None
    for i in range(1, n + 1):
        loc = local_lax(spec, field, i, -kvec[i - 1], barred=True)
        out = loc if out is None else out @ loc
    return out @ monodromy(spec, field, kvec)


# ---------------------------------------------------------------------------
# RTT check over two spectral variables
# ---------------------------------------------------------------------------

def _bimul(spec, field, a: ZWEntry, b: ZWEntry) -> ZWEntry:
    out: ZWEntry = {}
    for (za, wa), ta in a.items():
        for (zb, wb), tb in b.items():
            key = (za + zb, wa + wb)
            prod = ta * tb
            if prod.is_zero():
                continue
            s = out.get(key)
            s2 = prod if s is None else s + prod
            if s2.is_zero():
                out.pop(key, None)
            else:
                out[key] = s2
    return out


def _biadd(a: ZWEntry, b: ZWEntry) -> ZWEntry:
    out = dict(a)
    for k, t in b.items():
        s = out.get(k)
        s2 = t if s is None else s + t
        if s2.is_zero():
            out.pop(k, None)
        else:
            out[k] = s2
    return out


def _mat4_mul(spec, field, A, B):
    return [[_reduce_sum(spec, field,
                         [_bimul(spec, field, A[r][m], B[m][c])
                          for m in range(4)])
             for c in range(4)] for r in range(4)]


def _reduce_sum(spec, field, items):
    out: ZWEntry = {}
    for it in items:
        out = _biadd(out, it)
    return out


def rtt_check(T: LaxMatrix) -> bool:
    """Trigonometric RTT relation for T, with the R-matrix scaled by
    (v z - v^{-1} w) to clear denominators."""
    spec, field = T.spec, T.field
    one = field.one()
    v = field.v_power(1)
    vm = field.v_power(-1)

    def sc(coeff, z2=0, w2=0) -> ZWEntry:
        el = TorusElement.one(spec, field).scale(coeff)
        return {(z2, w2): el} if not coeff.is_zero() else {}

    zero: ZWEntry = {}
    R = [[_biadd(sc(v, 2, 0), sc(-vm, 0, 2)), zero, zero, zero],
         [zero, _biadd(sc(one, 2, 0), sc(-one, 0, 2)), sc(v - vm, 2, 0), zero],
         [zero, sc(v - vm, 0, 2), _biadd(sc(one, 2, 0), sc(-one, 0, 2)), zero],
         [zero, zero, zero, _biadd(sc(v, 2, 0), sc(-vm, 0, 2))]]

    def tz(r, c) -> ZWEntry:
        return {(z2, 0): t for z2, t in T.entries[r][c].items()}

    def tw(r, c) -> ZWEntry:
        return {(0, w2): t for w2, t in T.entries[r][c].items()}

    Tz = [[tz(a, b) if c == d else zero
           for (b, d) in ((0, 0), (0, 1), (1, 0), (1, 1))]
          for (a, c) in ((0, 0), (0, 1), (1, 0), (1, 1))]
    Tw = [[tw(c, d) if a == b else zero
           for (b, d) in ((0, 0), (0, 1), (1, 0), (1, 1))]
          for (a, c) in ((0, 0), (0, 1), (1, 0), (1, 1))]

    RTz = _mat4_mul(spec, field, R, Tz)
    TwTz = _mat4_mul(spec, field, Tw, Tz)
    for r in range(4):
        for c in range(4):
            lhs = _reduce_sum(spec, field,
                              [_bimul(spec, field, RTz[r][m], Tw[m][c])
                               for m in range(4)])
            rhs = _reduce_sum(spec, field,
                              [_bimul(spec, field, TwTz[r][m], R[m][c])
                               for m in range(4)])
            if set(lhs) != set(rhs):
                return False
            for k, t in lhs.items():
                if t != rhs[k]:
                    return False
    return True


# ---------------------------------------------------------------------------
# hamiltonian extraction and displayed formulas
# ---------------------------------------------------------------------------

def extract_coefficients(T: LaxMatrix, eps: Optional[Scalar] = None
                         ) -> Dict[int, TorusElement]:
    """z-coefficients of T11 + eps T22 (eps defaults to 0), keyed by 2*power."""
    if eps is None:
        eps = T.field.zero()
    return T.combination_11_22(eps)


def extract_H(T: LaxMatrix, kvec: Sequence[int], r: int,
              eps: Optional[Scalar] = None) -> TorusElement:
    """H_{r+1} from T11 + eps T22 = (-1)^n w_1..w_n (H_1 z^s - H_2 z^{s+1}
    + ...), s = sum (k_j - 1)/2; r = 1 gives the quadratic hamiltonian."""
    spec, field = T.spec, T.field
    n = spec.n
    comb = extract_coefficients(T, eps)
    z2 = sum(k - 1 for k in kvec) + 2 * r
    c = comb.get(z2)
    if c is None:
        return TorusElement.zero(spec, field)
    pref = TorusElement.monomial(spec, field, field.rational((-1) ** (n + r)),
                                 (-1,) * n, (0,) * n)
    return pref * c


def extract_H2_double(T: LaxMatrix, eps: Optional[Scalar] = None
                      ) -> TorusElement:
    """- coefficient of z^{-n+1} in T11 + eps T22 for the double monodromy."""
    spec, field = T.spec, T.field
    comb = extract_coefficients(T, eps)
    c = comb.get(-2 * spec.n + 2)
    if c is None:
        return TorusElement.zero(spec, field)
    return -c


def commuting_coefficients_check(T: LaxMatrix,
                                 eps: Optional[Scalar] = None) -> bool:
    """All pairwise commutators of the z-coefficients of T11 + eps T22."""
    comb = extract_coefficients(T, eps)
    items = [comb[k] for k in sorted(comb)]
    for a in range(len(items)):
        for b in range(a, len(items)):
            if not items[a].commutes_with(items[b]):
                return False
    return True


def _wmono(spec, field, exps, coeff=None) -> TorusElement:
    c = field.one() if coeff is None else coeff
    return TorusElement.monomial(spec, field, c, tuple(exps), (0,) * spec.n)


def _dmono(spec, field, exps, coeff=None) -> TorusElement:
    c = field.one() if coeff is None else coeff
    return TorusElement.monomial(spec, field, c, (0,) * spec.n, tuple(exps))


def mixed_h2_formula(spec: TorusSpec, field: ScalarField,
                     kvec: Sequence[int]) -> TorusElement:
    """The displayed quadratic hamiltonian of the mixed monodromy (type A)."""
    n = spec.n
    out = TorusElement.zero(spec, field)
    for j in range(1, n + 1):
        out = out + _wmono(spec, field, [-2 if t == j - 1 else 0 for t in range(n)])
    for i in range(1, n):
        for j in range(i + 1, n + 1):
            if j > i + 1 and not all(kvec[t - 1] == 1 for t in range(i + 1, j)):
                continue
            wexp = [0] * n
            for t in range(i, j + 1):
                wexp[t - 1] = -kvec[t - 1] - 1
            dexp = [0] * n
            dexp[i - 1] = 1
            dexp[j - 1] = -1
            out = out + _wmono(spec, field, wexp) * _dmono(spec, field, dexp)
    return out


def closed_mixed_h2_formula(spec: TorusSpec, field: ScalarField,
                            kvec: Sequence[int], eps: Scalar) -> TorusElement:
    """Periodic deformation of the type-A quadratic hamiltonian."""
    n = spec.n
    out = mixed_h2_formula(spec, field, kvec)
    for i in range(1, n + 1):
        for j in range(i + 1, n + 1):
            if not all(kvec[t - 1] == 1 for t in range(1, i)):
                continue
            if not all(kvec[t - 1] == 1 for t in range(j + 1, n + 1)):
                continue
            wexp = [0] * n
            for t in list(range(1, i + 1)) + list(range(j, n + 1)):
                wexp[t - 1] = -kvec[t - 1] - 1
            dexp = [0] * n
            dexp[j - 1] = 1
            dexp[i - 1] = -1
            out = out + (_wmono(spec, field, wexp, eps)
                         * _dmono(spec, field, dexp))
    for j in range(1, n + 1):
        if kvec[j - 1] == -1 and all(kvec[t - 1] == 1
                                     for t in range(1, n + 1) if t != j):
            out = out + _wmono(spec, field,
                               [0 if t == j - 1 else -2 for t in range(n)], eps)
    return out


def double_mixed_h2_formula(spec: TorusSpec, field: ScalarField,
                            kvec: Sequence[int]) -> TorusElement:
    """The displayed quadratic hamiltonian of the double monodromy (type C)."""
    n = spec.n
    out = TorusElement.zero(spec, field)
    one = field.one()
    for i in range(1, n + 1):
        for s in (2, -2):
            out = out + _wmono(spec, field, [s if t == i - 1 else 0
                                             for t in range(n)])
    for i in range(1, n):
        dexp = [0] * n
        dexp[i - 1] = 1
        dexp[i] = -1
        for s in (-1, 1):
            wexp = [0] * n
            wexp[i - 1] = -kvec[i - 1] + s
            wexp[i] = -kvec[i] + s
            out = out + _wmono(spec, field, wexp) * _dmono(spec, field, dexp)
    wexp = [0] * n
    wexp[n - 1] = -2 * kvec[n - 1]
    out = out + (_wmono(spec, field, wexp, field.v_power(-kvec[n - 1]))
                 * _dmono(spec, field, [0] * (n - 1) + [2]))
    for sign in (1, -1):
        for i in range(1, n):
            for j in range(i + 1, n):
                if not all(kvec[t - 1] == sign for t in range(i + 1, j + 1)):
                    continue
                wexp = [0] * n
                for t in range(i, j + 2):
                    wexp[t - 1] = -kvec[t - 1] - sign
                dexp = [0] * n
                dexp[i - 1] = 1
                dexp[j] = -1
                out = out + _wmono(spec, field, wexp) * _dmono(spec, field, dexp)
        for i in range(1, n):
            if not all(kvec[t - 1] == sign for t in range(i + 1, n + 1)):
                continue
            wexp = [0] * n
            for t in range(i, n + 1):
                wexp[t - 1] = -kvec[t - 1] - sign
            dexp = [0] * n
            dexp[i - 1] = 1
            dexp[n - 1] += 1
            out = out + (_wmono(spec, field, wexp, field.v_power(-sign))
                         * _dmono(spec, field, dexp))
    return out


def closed_double_mixed_h2_formula(spec: TorusSpec, field: ScalarField,
                                   kvec: Sequence[int],
                                   eps: Scalar) -> TorusElement:
    """Periodic deformation of the type-C quadratic hamiltonian."""
    n = spec.n
    out = double_mixed_h2_formula(spec, field, kvec)
    k1 = kvec[0]
    if n == 1 and k1 != 0:
        out = out + _wmono(spec, field, [-2 * k1], eps)
    wexp = [0] * n
    wexp[0] = -2 * k1
    out = out + (_wmono(spec, field, wexp, eps * field.v_power(k1))
                 * _dmono(spec, field, [-2] + [0] * (n - 1)))
    if n >= 2 and all(k == 1 for k in kvec):
        dexp = [0] * n
        dexp[0] -= 1
        dexp[n - 1] += 1
        out = out + _wmono(spec, field, [-2] * n, eps) * _dmono(spec, field, dexp)
    if n >= 2 and all(k == -1 for k in kvec):
        dexp = [0] * n
        dexp[0] -= 1
        dexp[n - 1] += 1
        out = out + _wmono(spec, field, [2] * n, eps) * _dmono(spec, field, dexp)
    for sign in (1, -1):
        for i in range(1, n):
            if not all(kvec[t - 1] == sign for t in range(1, i + 1)):
                continue
            wexp = [0] * n
            for t in range(1, i + 2):
                wexp[t - 1] = -kvec[t - 1] - sign
            dexp = [0] * n
            dexp[0] = -1
            dexp[i] -= 1
            out = out + (_wmono(spec, field, wexp, eps * field.v_power(sign))
                         * _dmono(spec, field, dexp))
    return out
