"""Root-system and weight-lattice data for types A, B, C, D and G2.

Weights are stored as tuples of Fractions in the omega (fundamental weight)
basis; root-lattice vectors as integer tuples in the alpha basis.  Each type
also carries the varpi chart used by the explicit hamiltonian formulas:
type A has n = rank+1 varpi's summing to zero, the other types have rank
varpi's forming a basis.

Simple roots are labelled as in Bourbaki; pairings are normalized so that
short roots have (alpha, alpha) = 2.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from math import lcm
from typing import Sequence, Tuple

Weight = Tuple[Fraction, ...]
RootVector = Tuple[int, ...]

_SUPPORTED = {"A": 1, "B": 2, "C": 2, "D": 3, "G": 2}


class RootSystem:
    """Immutable Cartan/weight data for one finite type."""

    def __init__(self, family: str, rank: int):
        if family not in _SUPPORTED:
            raise ValueError(f"unsupported family {family!r}")
        if family == "G" and rank != 2:
            raise ValueError("G2 has rank 2")
        if rank < _SUPPORTED[family]:
            raise ValueError(f"rank {rank} too small for type {family}")
        self.family = family
        self.rank = rank
        self.name = f"{family}{rank}"
        self.d = self._build_d()
        self.cartan = self._build_cartan()
        self.b = tuple(tuple(self.d[i] * self.cartan[i][j] for j in range(rank))
                       for i in range(rank))
        self.gram_omega = _invert_times_d(self.cartan, self.d)
        self.nn = lcm(*[f.denominator for row in self.gram_omega for f in row])
        self.qscale = 2 * self.nn
        self.varpi_omega = self._build_varpi()
        self.rho = tuple(Fraction(1) for _ in range(rank))

    # -- construction ---------------------------------------------------------

    def _build_d(self):
        n = self.rank
        if self.family in ("A", "D"):
            return (1,) * n
        if self.family == "C":
            return (1,) * (n - 1) + (2,)
        if self.family == "B":
            return (2,) * (n - 1) + (1,)
        return (1, 3)  # G2

    def _build_cartan(self):
        n = self.rank
        a = [[0] * n for _ in range(n)]
        for i in range(n):
            a[i][i] = 2
        if self.family == "G":
            a[0][1], a[1][0] = -3, -1
            return tuple(tuple(r) for r in a)
        for i in range(n - 1):
            a[i][i + 1] = a[i + 1][i] = -1
        if self.family == "B":
            a[n - 1][n - 2] = -2
        elif self.family == "C":
            a[n - 2][n - 1] = -2
        elif self.family == "D":
            a[n - 2][n - 1] = a[n - 1][n - 2] = 0
            a[n - 3][n - 1] = a[n - 1][n - 3] = -1
        return tuple(tuple(r) for r in a)

    def _build_varpi(self):
        n = self.rank
        F = Fraction

        def e(i):  # omega_i as a vector, 1-based; i = 0 or i = n+1 gives zero
            return tuple(F(1) if j == i - 1 else F(0) for j in range(n))

        def sub(x, y):
            return tuple(a - b for a, b in zip(x, y))

        def add(x, y):
            return tuple(a + b for a, b in zip(x, y))

        if self.family == "A":
            vecs = [sub(e(j), e(j - 1)) for j in range(1, n + 1)]
            vecs.append(tuple(-x for x in e(n)))  # varpi_{n+1} = -omega_n
            return tuple(vecs)
        if self.family == "C":
            return tuple(sub(e(j), e(j - 1)) for j in range(1, n + 1))
        if self.family == "B":
            vecs = [sub(e(j), e(j - 1)) for j in range(1, n)]
            vecs.append(sub(tuple(2 * x for x in e(n)), e(n - 1)))
            return tuple(vecs)
        if self.family == "D":
            vecs = [sub(e(j), e(j - 1)) for j in range(1, n - 1)]
            vecs.append(sub(add(e(n - 1), e(n)), e(n - 2)))
            vecs.append(sub(e(n), e(n - 1)))
            return tuple(vecs)
        # G2: varpi_1 = 2*omega_1 - omega_2, varpi_2 = omega_2 - omega_1
        return ((F(2), F(-1)), (F(-1), F(1)))

    # -- basic maps -----------------------------------------------------------

    @property
    def varpi_count(self) -> int:
        return self.rank + 1 if self.family == "A" else self.rank

    def zero_weight(self) -> Weight:
        return tuple(Fraction(0) for _ in range(self.rank))

    def alpha_omega(self, i: int) -> Weight:
        """omega-coordinates of the simple root alpha_i (1-based)."""
        return tuple(Fraction(self.cartan[k][i - 1]) for k in range(self.rank))

    def root_omega(self, beta: Sequence[int]) -> Weight:
        """omega-coordinates of sum beta_i alpha_i."""
        return tuple(
            sum(Fraction(self.cartan[k][j]) * beta[j] for j in range(self.rank))
            for k in range(self.rank))

    def varpi(self, coeffs: Sequence) -> Weight:
        """Weight with the given varpi-coordinates, in omega-coordinates."""
        out = [Fraction(0)] * self.rank
        for j, c in enumerate(coeffs):
            c = Fraction(c)
            if c:
                for k in range(self.rank):
                    out[k] += c * self.varpi_omega[j][k]
        return tuple(out)

    def varpi_unit(self, j: int, mult=1) -> Weight:
        """mult * varpi_j in omega-coordinates (1-based j)."""
        m = Fraction(mult)
        return tuple(m * x for x in self.varpi_omega[j - 1])

    def omega_to_varpi(self, w: Sequence[Fraction]) -> Tuple[Fraction, ...]:
        """varpi-coordinates of a weight; for type A the representative with
        the most zero entries is chosen (varpi's sum to zero there)."""
        n = self.rank
        if self.family != "A":
            mat = [[self.varpi_omega[j][k] for j in range(n)] for k in range(n)]
            return tuple(_solve(mat, [Fraction(x) for x in w]))
        # omega_i = varpi_1 + ... + varpi_i, free to shift by (1,...,1)
        c = [sum(Fraction(w[i]) for i in range(j, n)) for j in range(n)] + [Fraction(0)]
        shifts = {}
        for x in c:
            shifts[x] = shifts.get(x, 0) + 1
        t = max(shifts, key=lambda x: (shifts[x], x))
        return tuple(x - t for x in c)

    def pairing(self, x: Sequence[Fraction], y: Sequence[Fraction]) -> Fraction:
        """Invariant bilinear form on omega-coordinates."""
        out = Fraction(0)
        for i, xi in enumerate(x):
            if xi:
                row = self.gram_omega[i]
                for j, yj in enumerate(y):
                    if yj:
                        out += Fraction(xi) * row[j] * Fraction(yj)
        return out

    def pairing_root_weight(self, beta: Sequence[int], mu: Sequence[Fraction]) -> Fraction:
        """(sum beta_i alpha_i, mu) using (alpha_i, omega_j) = delta d_j."""
        return sum(Fraction(beta[j]) * self.d[j] * Fraction(mu[j])
                   for j in range(self.rank) if beta[j])

    def edges(self):
        """Dynkin edges (i, j), i < j, 1-based."""
        return [(i + 1, j + 1) for i in range(self.rank)
                for j in range(i + 1, self.rank) if self.cartan[i][j] != 0]

    def __repr__(self):
        return f"RootSystem({self.name})"

    def __eq__(self, other):
        return isinstance(other, RootSystem) and self.name == other.name

    def __hash__(self):
        return hash(self.name)


def _invert_times_d(cartan, d):
    """gram_omega = diag(d) @ cartan^{-1}, exact over Q."""
    n = len(d)
    aug = [[Fraction(cartan[i][j]) for j in range(n)]
           + [Fraction(1) if j == i else Fraction(0) for j in range(n)]
           for i in range(n)]
    for col in range(n):
        piv = next(r for r in range(col, n) if aug[r][col])
        aug[col], aug[piv] = aug[piv], aug[col]
        pv = aug[col][col]
        aug[col] = [x / pv for x in aug[col]]
        for r in range(n):
            if r != col and aug[r][col]:
                f = aug[r][col]
                aug[r] = [x - f * y for x, y in zip(aug[r], aug[col])]
    inv = [row[n:] for row in aug]
    return tuple(tuple(Fraction(d[j]) * inv[j][i] for i in range(n))
                 for j in range(n))


def _solve(mat, rhs):
    n = len(rhs)
    aug = [list(map(Fraction, mat[i])) + [Fraction(rhs[i])] for i in range(n)]
    for col in range(n):
        piv = next(r for r in range(col, n) if aug[r][col])
        aug[col], aug[piv] = aug[piv], aug[col]
        pv = aug[col][col]
        aug[col] = [x / pv for x in aug[col]]
        for r in range(n):
            if r != col and aug[r][col]:
                f = aug[r][col]
                aug[r] = [x - f * y for x, y in zip(aug[r], aug[col])]
    return [aug[i][n] for i in range(n)]


@lru_cache(maxsize=None)
def _cached(family: str, rank: int) -> RootSystem:
    return RootSystem(family, rank)


def build_root_system(tag: str, rank: int | None = None) -> RootSystem:
    """Build a root system from a tag like "A3"/"C2"/"G2" or (family, rank)."""
    if rank is None:
        family, rank = tag[0].upper(), int(tag[1:])
    else:
        family = tag.upper()
    return _cached(family, int(rank))


def weight_add(x: Weight, y: Weight) -> Weight:
    return tuple(a + b for a, b in zip(x, y))


def weight_sub(x: Weight, y: Weight) -> Weight:
    return tuple(a - b for a, b in zip(x, y))


def weight_scale(c, x: Weight) -> Weight:
    c = Fraction(c)
    return tuple(c * a for a in x)
