"""Sevostyanov triples: validation, orientations, compatible orderings and
the classifying invariant vector.

A triple is (epsilon, n, c): an orientation matrix of the Dynkin graph, an
integer matrix with d_j n_ij - d_i n_ji = epsilon_ij b_ij, and nonzero scalar
constants.  A pair of triples carries the invariant eps_vec whose entries are
the half-differences of the edge orientations (type D reads the (n-2, n) edge
in its last slot).
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

from .cartan import RootSystem, Weight, build_root_system
from .scalars import Scalar, ScalarField


class TripleError(ValueError):
    pass


def _as_int_matrix(rows, rank, what):
    m = tuple(tuple(int(x) for x in row) for row in rows)
    if len(m) != rank or any(len(r) != rank for r in m):
        raise TripleError(f"{what} must be a {rank}x{rank} integer matrix")
    return m


def validate_orientation(rs: RootSystem, eps) -> Tuple[Tuple[int, ...], ...]:
    eps = _as_int_matrix(eps, rs.rank, "epsilon")
    for i in range(rs.rank):
        for j in range(rs.rank):
            if i == j or rs.cartan[i][j] == 0:
                if eps[i][j] != 0:
                    raise TripleError(
                        f"epsilon[{i+1}][{j+1}] must be 0 off the Dynkin graph")
            else:
                if eps[i][j] not in (1, -1) or eps[i][j] != -eps[j][i]:
                    raise TripleError(
                        f"epsilon[{i+1}][{j+1}] must be +-1 and antisymmetric")
    return eps


@dataclass(frozen=True)
class SevostyanovTriple:
    rs: RootSystem
    eps: Tuple[Tuple[int, ...], ...]
    nmat: Tuple[Tuple[int, ...], ...]
    c: Tuple[Scalar, ...]

    def nu(self, i: int) -> Weight:
        """nu_i = sum_k n_ik omega_k (1-based i), in omega-coordinates."""
        from fractions import Fraction
        return tuple(Fraction(self.nmat[i - 1][k]) for k in range(self.rs.rank))


def validate_triple(rs: RootSystem, eps, nmat, c: Sequence[Scalar]) -> SevostyanovTriple:
    """Check the defining identity d_j n_ij - d_i n_ji = eps_ij b_ij for all
    i, j and that every c_i is nonzero; report the first violation."""
    eps = validate_orientation(rs, eps)
    nmat = _as_int_matrix(nmat, rs.rank, "n")
    for i in range(rs.rank):
        for j in range(rs.rank):
            lhs = rs.d[j] * nmat[i][j] - rs.d[i] * nmat[j][i]
            rhs = eps[i][j] * rs.b[i][j]
            if lhs != rhs:
                raise TripleError(
                    f"Sevostyanov identity fails at (i,j)=({i+1},{j+1}): "
                    f"d_j n_ij - d_i n_ji = {lhs} != eps_ij b_ij = {rhs}")
    c = tuple(c)
    if len(c) != rs.rank:
        raise TripleError(f"need {rs.rank} constants c_i")
    for i, ci in enumerate(c):
        if not isinstance(ci, Scalar) or ci.is_zero():
            raise TripleError(f"c_{i+1} must be a nonzero scalar")
    return SevostyanovTriple(rs, eps, nmat, c)


@dataclass(frozen=True)
class SevostyanovTriplePair:
    plus: SevostyanovTriple
    minus: SevostyanovTriple

    def __post_init__(self):
        if self.plus.rs != self.minus.rs:
            raise TripleError("triples live on different root systems")

    @property
    def rs(self) -> RootSystem:
        return self.plus.rs

    @property
    def eps_vec(self) -> Tuple[int, ...]:
        return epsilon_invariant(self)


def epsilon_invariant(pair: SevostyanovTriplePair) -> Tuple[int, ...]:
    """(eps_1, ..., eps_{n-1}) with eps_i the half-difference of edge
    orientations; in type D_n slot n-1 reads the branch edge (n-2, n)."""
    rs = pair.rs
    n = rs.rank
    out: List[int] = []
    for i in range(1, n):
        if rs.family == "D" and i == n - 1:
            a, b = n - 2, n  # branch edge
        else:
            a, b = i, i + 1
        diff = pair.plus.eps[a - 1][b - 1] - pair.minus.eps[a - 1][b - 1]
        if diff % 2:
            raise TripleError("orientation difference is odd")
        out.append(diff // 2)
    return tuple(out)


def compatible_order(rs: RootSystem, eps) -> Tuple[int, ...]:
    """Total order on simple-root indices with i before j whenever
    eps_ij = -1; deterministic (smallest available index first)."""
    eps = validate_orientation(rs, eps)
    n = rs.rank
    remaining = set(range(1, n + 1))
    order: List[int] = []
    while remaining:
        ready = sorted(i for i in remaining
                       if all(eps[j - 1][i - 1] != -1 for j in remaining if j != i))
        if not ready:
            raise TripleError("orientation has a cycle")  # impossible on trees
        pick = ready[0]
        order.append(pick)
        remaining.remove(pick)
    return tuple(order)


# ---------------------------------------------------------------------------
# samplers
# ---------------------------------------------------------------------------

def random_orientation(rs: RootSystem, rng: random.Random):
    n = rs.rank
    eps = [[0] * n for _ in range(n)]
    for i, j in rs.edges():
        s = rng.choice((1, -1))
        eps[i - 1][j - 1] = s
        eps[j - 1][i - 1] = -s
    return tuple(tuple(r) for r in eps)


def random_nmat(rs: RootSystem, eps, rng: random.Random, spread: int = 2):
    """Random integer matrix satisfying the defining identity for the given
    orientation: pick n_ij freely for i <= j (subject to the divisibility
    d_i | d_j n_ij - eps_ij b_ij), solve for n_ji."""
    n = rs.rank
    nm = [[0] * n for _ in range(n)]
    for i in range(n):
        nm[i][i] = rng.randint(-spread, spread)
        for j in range(i + 1, n):
            target = eps[i][j] * rs.b[i][j]
            while True:
                nij = rng.randint(-spread, spread)
                num = rs.d[j] * nij - target
                if num % rs.d[i] == 0:
                    nm[i][j] = nij
                    nm[j][i] = num // rs.d[i]
                    break
    return tuple(tuple(r) for r in nm)


def random_triple(rs: RootSystem, field: ScalarField, rng: random.Random,
                  c_names: Optional[Sequence[str]] = None,
                  numeric_c: bool = False,
                  eps=None) -> SevostyanovTriple:
    """Random valid triple.  c_i default to the named symbols; with
    numeric_c they are random nonzero rationals times powers of q."""
    if eps is None:
        eps = random_orientation(rs, rng)
    nmat = random_nmat(rs, eps, rng)
    cs = []
    for i in range(rs.rank):
        if numeric_c:
            val = field.rational(rng.choice([1, -1]) * rng.randint(1, 5))
            cs.append(val * field.q_power(rng.randint(-2, 2)))
        else:
            name = c_names[i] if c_names else f"c{i+1}"
            cs.append(field.symbol(name))
    return validate_triple(rs, eps, nmat, cs)


def random_pair(rs: RootSystem, field: ScalarField, rng: random.Random,
                numeric_c: bool = False,
                eps_plus=None, eps_minus=None) -> SevostyanovTriplePair:
    plus = random_triple(rs, field, rng,
                         c_names=[f"c{i+1}p" for i in range(rs.rank)],
                         numeric_c=numeric_c, eps=eps_plus)
    minus = random_triple(rs, field, rng,
                          c_names=[f"c{i+1}m" for i in range(rs.rank)],
                          numeric_c=numeric_c, eps=eps_minus)
    return SevostyanovTriplePair(plus, minus)


def equioriented_eps(rs: RootSystem):
    """Orientation with every Dynkin edge (i, j), i < j, oriented j -> i."""
    n = rs.rank
    eps = [[0] * n for _ in range(n)]
    for i, j in rs.edges():
        eps[i - 1][j - 1] = -1
        eps[j - 1][i - 1] = 1
    return tuple(tuple(r) for r in eps)


def minimal_nmat(rs: RootSystem, eps):
    """The valid n-matrix with n_ij = 0 for i <= j."""
    n = rs.rank
    nm = [[0] * n for _ in range(n)]
    for i in range(n):
        for j in range(i + 1, n):
            nm[j][i] = -eps[i][j] * rs.cartan[i][j]
    return tuple(tuple(r) for r in nm)


def standard_pair(rs: RootSystem, field: ScalarField) -> SevostyanovTriplePair:
    """The pair with eps+ = eps-, n+ = n-, c+ = +1, c- = -1, recovering the
    standard q-Toda specialization of the first hamiltonian."""
    eps = equioriented_eps(rs)
    nmat = minimal_nmat(rs, eps)
    plus = validate_triple(rs, eps, nmat, [field.one()] * rs.rank)
    minus = validate_triple(rs, eps, nmat, [-field.one()] * rs.rank)
    return SevostyanovTriplePair(plus, minus)


# ---------------------------------------------------------------------------
# JSON wire format
# ---------------------------------------------------------------------------

def triple_to_dict(t: SevostyanovTriple) -> dict:
    return {"type": t.rs.name,
            "epsilon": [list(r) for r in t.eps],
            "n": [list(r) for r in t.nmat],
            "c": [c.to_text() for c in t.c]}


def triple_from_dict(data: dict, field: ScalarField,
                     rs: Optional[RootSystem] = None) -> SevostyanovTriple:
    if rs is None:
        rs = build_root_system(data["type"])
    cs = [field.parse(text) for text in data["c"]]
    return validate_triple(rs, data["epsilon"], data["n"], cs)


def pair_to_dict(p: SevostyanovTriplePair) -> dict:
    return {"plus": triple_to_dict(p.plus), "minus": triple_to_dict(p.minus)}


def pair_from_dict(data: dict, field: ScalarField,
                   rs: Optional[RootSystem] = None) -> SevostyanovTriplePair:
    return SevostyanovTriplePair(triple_from_dict(data["plus"], field, rs),
                                 triple_from_dict(data["minus"], field, rs))


def pair_from_json(text: str, field: ScalarField,
                   rs: Optional[RootSystem] = None) -> SevostyanovTriplePair:
    return pair_from_dict(json.loads(text), field, rs)
