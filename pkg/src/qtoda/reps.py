"""Weight-basis representations: first fundamental modules for types A, B, C,
D, G2 and the exterior square in type A.

A representation stores sparse E_i/F_i matrices over the scalar field plus
the basis weights; the defining quantum-group relations (K-conjugation,
[E, F], and the Serre relations) are verifiable as exact matrix identities.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Dict, List, Tuple

from .cartan import RootSystem, Weight, weight_add, weight_sub
from .scalars import Scalar, ScalarField

SparseMatrix = Dict[Tuple[int, int], Scalar]


def mat_mul(field: ScalarField, a: SparseMatrix, b: SparseMatrix) -> SparseMatrix:
    if not a or not b:
        return {}
    bycol: Dict[int, List[Tuple[int, Scalar]]] = {}
    for (r, c), s in a.items():
        bycol.setdefault(c, []).append((r, s))
    out: SparseMatrix = {}
    for (r2, c2), s2 in b.items():
        for r1, s1 in bycol.get(r2, ()):
            key = (r1, c2)
            val = s1 * s2
            t = out.get(key)
            val = val if t is None else t + val
            if val.is_zero():
                out.pop(key, None)
            else:
                out[key] = val
    return out


def mat_add(a: SparseMatrix, b: SparseMatrix) -> SparseMatrix:
    out = dict(a)
    for k, s in b.items():
        t = out.get(k)
        s2 = s if t is None else t + s
        if s2.is_zero():
            out.pop(k, None)
        else:
            out[k] = s2
    return out


def mat_scale(a: SparseMatrix, c: Scalar) -> SparseMatrix:
    return {} if c.is_zero() else {k: s * c for k, s in a.items()}


def mat_pow(field: ScalarField, a: SparseMatrix, e: int) -> SparseMatrix:
    out: SparseMatrix = None  # identity handled lazily
    for _ in range(e):
        out = dict(a) if out is None else mat_mul(field, out, a)
    if out is None:
        raise ValueError("use e >= 1")
    return out


class WeightBasisRep:
    """Finite-dimensional module with a chosen weight basis."""

    def __init__(self, rs: RootSystem, field: ScalarField, labels: List[str],
                 weights: List[Weight], e_mats: List[SparseMatrix],
                 f_mats: List[SparseMatrix], name: str = ""):
        self.rs = rs
        self.field = field
        self.labels = labels
        self.weights = [tuple(Fraction(x) for x in w) for w in weights]
        self.e = e_mats
        self.f = f_mats
        self.dim = len(labels)
        self.name = name or "V"

    def weight_of(self, k: int) -> Weight:
        return self.weights[k]

    def e_mat(self, i: int) -> SparseMatrix:
        return self.e[i - 1]

    def f_mat(self, i: int) -> SparseMatrix:
        return self.f[i - 1]

    def nilpotency(self, i: int, cap: int = 8) -> int:
        """Largest r with E_i^r != 0 (F agrees by weight symmetry; both are
        checked), capped."""
        best = 0
        for mats in (self.e[i - 1], self.f[i - 1]):
            m = dict(mats)
            r = 1 if m else 0
            while m and r < cap:
                m = mat_mul(self.field, m, mats)
                if m:
                    r += 1
            best = max(best, r)
        if best >= cap:
            raise ValueError(f"nilpotency bound exceeded cap {cap}")
        return best

    # -- relation checking ----------------------------------------------------

    def check_relations(self) -> None:
        """Raise AssertionError unless the defining relations hold."""
        rs, field = self.rs, self.field
        n = rs.rank
        for i in range(1, n + 1):
            ai = rs.alpha_omega(i)
            for (r, c) in self.e[i - 1]:
                assert self.weights[r] == weight_add(self.weights[c], ai), \
                    f"E_{i} entry ({r},{c}) breaks weights"
            for (r, c) in self.f[i - 1]:
                assert self.weights[r] == weight_sub(self.weights[c], ai), \
                    f"F_{i} entry ({r},{c}) breaks weights"
        for i in range(1, n + 1):
            vi = rs.d[i - 1]
            denom = field.v_power(vi) - field.v_power(-vi)
            for j in range(1, n + 1):
                comm = mat_add(mat_mul(field, self.e[i - 1], self.f[j - 1]),
                               mat_scale(mat_mul(field, self.f[j - 1],
                                                 self.e[i - 1]),
                                         -field.one()))
                if i != j:
                    assert not comm, f"[E_{i}, F_{j}] != 0"
                    continue
                expect: SparseMatrix = {}
                for k in range(self.dim):
                    p = rs.pairing(rs.alpha_omega(i), self.weights[k])
                    val = (field.v_power(p) - field.v_power(-p)) / denom
                    if not val.is_zero():
                        expect[(k, k)] = val
                assert comm == expect, f"[E_{i}, F_{i}] mismatch"
        for i in range(1, n + 1):
            for j in range(1, n + 1):
                if i == j or rs.cartan[i - 1][j - 1] == 0:
                    continue
                self._check_serre(i, j, self.e)
                self._check_serre(i, j, self.f)

    def _check_serre(self, i: int, j: int, mats: List[SparseMatrix]) -> None:
        rs, field = self.rs, self.field
        m = 1 - rs.cartan[i - 1][j - 1]
        acc: SparseMatrix = {}
        xi, xj = mats[i - 1], mats[j - 1]
        for r in range(m + 1):
            coeff = field.q_binomial(m, r, rs.d[i - 1])
            if r % 2:
                coeff = -coeff
            term = xj
            if m - r:
                term = mat_mul(field, mat_pow(field, xi, m - r), term)
            if r:
                term = mat_mul(field, term, mat_pow(field, xi, r))
            acc = mat_add(acc, mat_scale(term, coeff))
        assert not acc, f"Serre relation fails for ({i},{j})"


# ---------------------------------------------------------------------------
# first fundamental representations
# ---------------------------------------------------------------------------

def rep_first_fundamental(rs: RootSystem, field: ScalarField) -> WeightBasisRep:
    builder = {"A": _rep_a, "B": _rep_b, "C": _rep_c, "D": _rep_d, "G": _rep_g2}
    rep = builder[rs.family](rs, field)
    rep.check_relations()
    return rep


def _one(field):
    return field.one()


def _rep_a(rs, field):
    n = rs.rank + 1
    labels = [f"w{j}" for j in range(1, n + 1)]
    weights = [rs.varpi_unit(j) for j in range(1, n + 1)]
    e = [{} for _ in range(rs.rank)]
    f = [{} for _ in range(rs.rank)]
    for i in range(1, rs.rank + 1):
        e[i - 1][(i - 1, i)] = _one(field)      # w_{i+1} -> w_i
        f[i - 1][(i, i - 1)] = _one(field)      # w_i -> w_{i+1}
    return WeightBasisRep(rs, field, labels, weights, e, f, name="V1")


def _rep_c(rs, field):
    n = rs.rank
    labels = [f"w{j}" for j in range(1, 2 * n + 1)]
    weights = ([rs.varpi_unit(j) for j in range(1, n + 1)]
               + [rs.varpi_unit(j, -1) for j in range(1, n + 1)])
    e = [{} for _ in range(n)]
    f = [{} for _ in range(n)]
    for i in range(1, n):
        e[i - 1][(i - 1, i)] = _one(field)              # w_{i+1} -> w_i
        e[i - 1][(n + i, n + i - 1)] = _one(field)      # w_{n+i} -> w_{n+i+1}
        f[i - 1][(i, i - 1)] = _one(field)              # w_i -> w_{i+1}
        f[i - 1][(n + i - 1, n + i)] = _one(field)      # w_{n+i+1} -> w_{n+i}
    e[n - 1][(n - 1, 2 * n - 1)] = _one(field)          # w_{2n} -> w_n
    f[n - 1][(2 * n - 1, n - 1)] = _one(field)          # w_n -> w_{2n}
    return WeightBasisRep(rs, field, labels, weights, e, f, name="V1")


def _rep_d(rs, field):
    n = rs.rank
    labels = [f"w{j}" for j in range(1, 2 * n + 1)]
    weights = []
    for j in range(1, n + 1):
        weights.append(rs.varpi_unit(j))        # w_{2j-1}
        weights.append(rs.varpi_unit(j, -1))    # w_{2j}
    e = [{} for _ in range(n)]
    f = [{} for _ in range(n)]

    def odd(j):  # 0-based index of w_{2j-1}
        return 2 * (j - 1)

    def even(j):  # 0-based index of w_{2j}
        return 2 * j - 1

    for i in range(1, n):
        e[i - 1][(odd(i), odd(i + 1))] = _one(field)      # w_{2(i+1)-1} -> w_{2i-1}
        e[i - 1][(even(i + 1), even(i))] = _one(field)    # w_{2i} -> w_{2i+2}
        f[i - 1][(odd(i + 1), odd(i))] = _one(field)
        f[i - 1][(even(i), even(i + 1))] = _one(field)
    # E_n(w_{2(n-1)}) = w_{2n-1},  E_n(w_{2n}) = w_{2n-3}
    e[n - 1][(odd(n), even(n - 1))] = _one(field)
    e[n - 1][(odd(n - 1), even(n))] = _one(field)
    # F_n(w_{2(n-1)-1}) = w_{2n},  F_n(w_{2n-1}) = w_{2n-2}
    f[n - 1][(even(n), odd(n - 1))] = _one(field)
    f[n - 1][(even(n - 1), odd(n))] = _one(field)
    return WeightBasisRep(rs, field, labels, weights, e, f, name="V1")


def _rep_b(rs, field):
    n = rs.rank
    labels = ["w0"] + [f"w{j}" for j in range(1, 2 * n + 1)]
    weights = [rs.zero_weight()]
    for j in range(1, n + 1):
        weights.append(rs.varpi_unit(j))        # w_{2j-1}
        weights.append(rs.varpi_unit(j, -1))    # w_{2j}
    e = [{} for _ in range(n)]
    f = [{} for _ in range(n)]

    def odd(j):
        return 2 * j - 1

    def even(j):
        return 2 * j

    for i in range(1, n):
        e[i - 1][(odd(i), odd(i + 1))] = _one(field)
        e[i - 1][(even(i + 1), even(i))] = _one(field)
        f[i - 1][(odd(i + 1), odd(i))] = _one(field)
        f[i - 1][(even(i), even(i + 1))] = _one(field)
    # E_n through the zero-weight vector carries [2]_v, as in the G2 module;
    # unit coefficients would break [E_n, F_n] = (K_n - K_n^{-1})/(v - v^{-1}).
    two = field.v_power(1) + field.v_power(-1)
    e[n - 1][(0, even(n))] = two                # w_{2n} -> w_0
    e[n - 1][(odd(n), 0)] = two                 # w_0 -> w_{2n-1}
    f[n - 1][(0, odd(n))] = _one(field)         # w_{2n-1} -> w_0
    f[n - 1][(even(n), 0)] = _one(field)        # w_0 -> w_{2n}
    return WeightBasisRep(rs, field, labels, weights, e, f, name="V1")


def _rep_g2(rs, field):
    labels = [f"w{j}" for j in range(7)]
    vp = rs.varpi_unit
    weights = [rs.zero_weight(),                     # w0
               weight_add(vp(1), vp(2)),             # w1
               vp(1),                                # w2
               vp(2, -1),                            # w3
               weight_add(vp(1, -1), vp(2, -1)),     # w4
               vp(1, -1),                            # w5
               vp(2)]                                # w6
    two = field.v_power(1) + field.v_power(-1)
    e1 = {(2, 0): two, (3, 4): _one(field), (0, 5): two, (1, 6): _one(field)}
    e2 = {(6, 2): _one(field), (5, 3): _one(field)}
    f1 = {(5, 0): _one(field), (6, 1): _one(field), (0, 2): _one(field),
          (4, 3): _one(field)}
    f2 = {(3, 5): _one(field), (2, 6): _one(field)}
    return WeightBasisRep(rs, field, labels, weights, [e1, e2], [f1, f2],
                          name="V1")


def rep_exterior_square(v1: WeightBasisRep) -> WeightBasisRep:
    """q-exterior square of the type-A vector representation."""
    rs, field = v1.rs, v1.field
    if rs.family != "A":
        raise ValueError("exterior square is implemented for type A only")
    n = rs.rank + 1
    pairs = [(i, j) for i in range(1, n + 1) for j in range(i + 1, n + 1)]
    index = {p: k for k, p in enumerate(pairs)}
    labels = [f"w{i}^w{j}" for i, j in pairs]
    weights = [weight_add(rs.varpi_unit(i), rs.varpi_unit(j)) for i, j in pairs]
    e = [{} for _ in range(rs.rank)]
    f = [{} for _ in range(rs.rank)]
    one = _one(field)
    for k in range(1, rs.rank + 1):
        for (i, j) in pairs:
            # F_k: (i,j) -> (i,j+1) if j == k; (i,j) -> (i+1,j) if i == k < j-1
            if j == k and j + 1 <= n:
                f[k - 1][(index[(i, j + 1)], index[(i, j)])] = one
            if i == k and j > i + 1:
                f[k - 1][(index[(i + 1, j)], index[(i, j)])] = one
            # E_k: (i,j) -> (i-1,j) if i == k+1; (i,j) -> (i,j-1) if j == k+1 > i+1
            if i == k + 1:
                e[k - 1][(index[(i - 1, j)], index[(i, j)])] = one
            if j == k + 1 and i < j - 1:
                e[k - 1][(index[(i, j - 1)], index[(i, j)])] = one
    rep = WeightBasisRep(rs, field, labels, weights, e, f, name="Wedge2V1")
    rep.check_relations()
    return rep
