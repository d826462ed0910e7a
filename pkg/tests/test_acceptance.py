"""Acceptance gate: one test per criterion, exact equality throughout.

Every tolerance is exact scalar equality.  Criterion 4's sub-clause on the
double mixed monodromy satisfying the trigonometric RTT relation is a
documented defect: the object's spectral coefficients commute and its
hamiltonians match the displayed formulas, but the RTT identity itself fails
computationally under every natural convention (R-direction, z/w-swaps,
one-sided transposition, spectral shifts on the reflected factors, both
product orders were all tried, with two independent implementations).  It is
kept as a strict expected failure; see the README.
"""

import itertools
import random
import sys

import pytest

from qtoda.cartan import build_root_system
from qtoda.equivalence import (TwistError, conjugate_and_compare,
                               hamiltonian_in_torus, periodic_affine_conjugacy,
                               solve_lax_matching, solve_pair_conjugation)
from qtoda.hamiltonians import (build_D1_closed, build_DV_generic,
                                build_standard_qToda)
from qtoda.lax import (closed_double_mixed_h2_formula, closed_mixed_h2_formula,
                       commuting_coefficients_check, double_mixed_h2_formula,
                       double_monodromy, extract_H, extract_H2_double,
                       local_lax, mixed_h2_formula, monodromy, rtt_check)
from qtoda.qdiff import commutator_is_zero
from qtoda.reps import rep_exterior_square, rep_first_fundamental
from qtoda.scalars import ScalarField
from qtoda.torus import TorusSpec, from_difference_operator, to_quotient, torus_spec_for
from qtoda.triples import (epsilon_invariant, random_pair, standard_pair)
from qtoda.verify import base_field


def report(criterion, ok, detail=""):
    line = f"ACCEPTANCE criterion {criterion}: {'PASS' if ok else 'FAIL'}"
    if detail:
        line += f"  ({detail})"
    print(line, file=sys.stderr)
    assert ok, line


CLOSED_TAGS = (["A" + str(r) for r in range(1, 6)]
               + ["C2", "C3", "D4", "B2", "B3", "G2"])


def test_criterion_01_closed_form_reproduction():
    ok = True
    for tag in CLOSED_TAGS:
        rs, F = build_root_system(tag), None
        F = base_field(rs)
        pair = standard_pair(rs, F)
        if build_D1_closed(rs, F, pair) != build_standard_qToda(rs, F):
            ok = False
    report(1, ok, "standard q-Toda reproduction for "
           + ",".join(CLOSED_TAGS))


def test_criterion_02_generic_equals_closed():
    per_type = {"A": [(r, 4) for r in range(1, 6)],
                "C": [(2, 10), (3, 10)],
                "D": [(4, 20)],
                "B": [(2, 10), (3, 10)],
                "G": [(2, 20)]}
    rng = random.Random(2024)
    ok = True
    for family, plan in per_type.items():
        for rank, count in plan:
            rs = build_root_system(family, rank)
            F = base_field(rs)
            v1 = rep_first_fundamental(rs, F)
            for _ in range(count):
                pair = random_pair(rs, F, rng, numeric_c=True)
                if build_DV_generic(rs, F, v1, pair) != \
                        build_D1_closed(rs, F, pair):
                    ok = False
    report(2, ok, "20 random pairs per type")


def test_criterion_03_commutativity():
    rng = random.Random(7)
    ok = True
    for tag in ("A2", "A3"):
        rs = build_root_system(tag)
        F = base_field(rs)
        pair = random_pair(rs, F, rng)  # fully symbolic constants
        v1 = rep_first_fundamental(rs, F)
        w2 = rep_exterior_square(v1)
        if not commutator_is_zero(build_DV_generic(rs, F, v1, pair),
                                  build_DV_generic(rs, F, w2, pair)):
            ok = False
    report(3, ok, "[D_V1, D_wedge2] = 0 in A2, A3, symbolic c")


def test_criterion_04_lax_layer():
    F = ScalarField(("q", "eps"), 2)
    eps = F.symbol("eps")
    ok = True
    spec1 = TorusSpec(1, "A")
    for k in (-1, 0, 1):
        for barred in (False, True):
            if not rtt_check(local_lax(spec1, F, 1, k, barred=barred)):
                ok = False
    for n in (1, 2, 3):
        spec = TorusSpec(n, "A")
        for kvec in itertools.product((-1, 0, 1), repeat=n):
            T = monodromy(spec, F, kvec)
            if not rtt_check(T):
                ok = False
            if extract_H(T, kvec, 1) != mixed_h2_formula(spec, F, kvec):
                ok = False
            if extract_H(T, kvec, 1, eps) != \
                    closed_mixed_h2_formula(spec, F, kvec, eps):
                ok = False
            if not commuting_coefficients_check(T, eps):
                ok = False
            D = double_monodromy(spec, F, kvec)
            if extract_H2_double(D) != double_mixed_h2_formula(spec, F, kvec):
                ok = False
            if extract_H2_double(D, eps) != \
                    closed_double_mixed_h2_formula(spec, F, kvec, eps):
                ok = False
            if not commuting_coefficients_check(D, eps):
                ok = False
    report(4, ok, "single-monodromy RTT, H2 formulas, commuting "
           "coefficients, n <= 3 (double-RTT sub-clause reported separately)")


@pytest.mark.xfail(strict=True,
                   reason="the double mixed monodromy does not satisfy the "
                          "trigonometric RTT relation as displayed; its "
                          "coefficients do commute and its hamiltonians "
                          "match the displays (see decisions ledger)")
def test_criterion_04_double_monodromy_rtt_as_stated():
    F = ScalarField(("q", "eps"), 2)
    ok = True
    for n in (1, 2):
        spec = TorusSpec(n, "A")
        for kvec in itertools.product((-1, 0, 1), repeat=n):
            if not rtt_check(double_monodromy(spec, F, kvec)):
                ok = False
    spec = TorusSpec(3, "A")
    if not rtt_check(double_monodromy(spec, F, (0, 0, 0))):
        ok = False
    report("4 (double-monodromy RTT sub-clause)", ok)


def test_criterion_05_lax_matching():
    rng = random.Random(11)
    ok = True
    for family, ranks in (("A", (1, 2, 3)), ("C", (2, 3))):
        for rank in ranks:
            rs = build_root_system(family, rank)
            F = base_field(rs)
            for _ in range(2):
                pair = random_pair(rs, F, rng, numeric_c=True)
                ev = epsilon_invariant(pair)
                if family == "A":
                    kvecs = [[k1] + list(ev) + [kn]
                             for k1 in (-1, 0, 1) for kn in (-1, 0, 1)]
                else:
                    kvecs = [[k1] + list(ev) for k1 in (-1, 0, 1)]
                for kvec in kvecs:
                    try:
                        solve_lax_matching(rs, F, pair, kvec)
                    except TwistError:
                        ok = False
    # A2: the same twist maps the D2-image to the z^2-coefficient image
    rs = build_root_system("A2")
    F = base_field(rs)
    pair = random_pair(rs, F, rng, numeric_c=True)
    ev = epsilon_invariant(pair)
    abar = torus_spec_for(rs, reduced=True)
    full = TorusSpec(3, "A")
    w2 = rep_exterior_square(rep_first_fundamental(rs, F))
    d2_img = from_difference_operator(build_DV_generic(rs, F, w2, pair),
                                      rs, abar)
    for k1 in (-1, 0, 1):
        for k3 in (-1, 0, 1):
            kvec = [k1, ev[0], k3]
            tw = solve_lax_matching(rs, F, pair, kvec)
            h3 = to_quotient(extract_H(monodromy(full, F, kvec), kvec, 2), abar)
            if not conjugate_and_compare(tw, [d2_img], [h3]):
                ok = False
    report(5, ok, "all compatible (pair, k) for A n<=4 and C n<=3; "
           "A2 second hamiltonian carried by the same twist")


def test_criterion_06_classification():
    rng = random.Random(13)
    ok = True
    for tag in ("A3", "C2", "B2", "G2", "D4"):
        rs = build_root_system(tag)
        F = base_field(rs)
        done = 0
        while done < 20:
            pa = random_pair(rs, F, rng, numeric_c=True)
            pb = None
            for _ in range(2000):
                cand = random_pair(rs, F, rng, numeric_c=True)
                if epsilon_invariant(cand) == epsilon_invariant(pa):
                    pb = cand
                    break
            if pb is None:
                continue
            try:
                solve_pair_conjugation(rs, F, pa, pb)
            except TwistError:
                ok = False
            done += 1
    # free-choice independence of (x_11, r_1) in the determinant quotient
    rs = build_root_system("A2")
    F = base_field(rs)
    pa = random_pair(rs, F, rng, numeric_c=True)
    while True:
        pb = random_pair(rs, F, rng, numeric_c=True)
        if epsilon_invariant(pb) == epsilon_invariant(pa):
            break
    tw = solve_pair_conjugation(rs, F, pa, pb)
    x0, x1 = tw.x_report(pin=0), tw.x_report(pin=1)
    if not (x0[(1, 1)] == 0 and x1[(1, 1)] == 1):
        ok = False
    if tw.apply(hamiltonian_in_torus(rs, F, pa)) != \
            hamiltonian_in_torus(rs, F, pb):
        ok = False
    report(6, ok, "20 random equal-invariant pairs in A3, C2, B2, G2, D4")


def test_criterion_07_whittaker_routes():
    from qtoda.whittaker import (eigencheck, j_from_verma_oracle,
                                 j_tilde_closed, j_tilde_recursive,
                                 whittaker_field)
    rng = random.Random(17)
    ok = True
    for tag in ("A2", "C2", "G2"):
        rs = build_root_system(tag)
        F = whittaker_field(rs)
        pair = random_pair(rs, F, rng)
        rec = j_tilde_recursive(rs, F, pair, 4)
        if rec != j_tilde_closed(rs, F, pair, 4):
            ok = False
        if rec != j_from_verma_oracle(rs, F, pair, 4):
            ok = False
        v1 = rep_first_fundamental(rs, F)
        if not eigencheck(rs, F, pair, v1, 4, jt=rec):
            ok = False
    for tag in ("A1", "B2"):  # remaining rank <= 2 oracle coverage
        rs = build_root_system(tag)
        F = whittaker_field(rs)
        pair = random_pair(rs, F, rng)
        if j_tilde_recursive(rs, F, pair, 4) != \
                j_from_verma_oracle(rs, F, pair, 4):
            ok = False
    report(7, ok, "recursive = closed = oracle to degree 4; eigenfunction "
           "identity in A2, C2, G2 to degree 4")


def test_criterion_08_periodic_affine_bridge():
    ok = True
    for tag in ("A1", "A2"):
        rs = build_root_system(tag)
        F = base_field(rs, extra=("eps", "kappa"))
        try:
            periodic_affine_conjugacy(rs, F, F.symbol("eps"))
        except TwistError:
            ok = False
    rs = build_root_system("C2")
    F = base_field(rs, extra=("eps", "kappa"))
    try:
        periodic_affine_conjugacy(rs, F, F.symbol("eps"))
    except TwistError:
        ok = False
    report(8, ok, "affine bridge for A (n <= 3 sites) and C (n = 2)")


def test_criterion_09_laumon_oracle():
    from qtoda.laumon import (LaumonModule, GradedVector, act, frak_k,
                              geometric_j_coefficients,
                              geometric_j_eigencheck, relations_check,
                              residues_identity_check)
    from qtoda.triples import SevostyanovTriplePair, random_triple
    from qtoda.whittaker import j_tilde_recursive
    rng = random.Random(19)
    ok = True
    for n, cut in ((2, 3), (3, 3)):
        if not relations_check(LaumonModule(n), cut):
            ok = False
    m4 = LaumonModule(4)
    for dv in m4.degrees_upto(2):
        for pt in m4.fixed_points(dv):
            for i in (1, 2, 3):
                for a in (0, 1):
                    if not residues_identity_check(m4, pt, i, a):
                        ok = False
    m3 = LaumonModule(3)
    F3 = m3.field
    v = F3.v_power(1)
    k3 = frak_k(m3, 3)
    for i in (1, 2):
        lhs = act(m3, [("E", i), ("L", i, -1), ("L", i + 1)], k3)
        rhs = k3.scale(v / (F3.one() - v ** 2))
        for dv in m3.degrees_upto(2):
            if not (lhs.component(dv) - rhs.component(dv)).is_zero():
                ok = False
        ops = [("e1", i)] + ([("L", i - 1, 2)] if i > 1 else []) \
            + [("L", i, -3), ("L", i + 1)]
        lhs = act(m3, ops, k3)
        rhs = k3.scale(F3.v_power(5 - i) / (F3.one() - v ** 2))
        for dv in m3.degrees_upto(2):
            if not (lhs.component(dv) - rhs.component(dv)).is_zero():
                ok = False
    for i in (1, 2):
        for j in (1, 2):
            for dv in m3.degrees_upto(3):
                for pt in m3.fixed_points(dv):
                    b = GradedVector.basis(m3, pt)
                    lhs = act(m3, [("Ddet", i), ("E", j), ("Ddet", i, -1)], b)
                    rhs = act(m3, ("E", j), b) if i != j else \
                        act(m3, ("e1", j), b).scale(F3.v_power(-j))
                    if not (lhs - rhs).is_zero():
                        ok = False
                    lhs = act(m3, [("Ddet", i, -1), ("F", j), ("Ddet", i)], b)
                    rhs = act(m3, ("F", j), b) if i != j else \
                        act(m3, ("f1", j), b).scale(F3.v_power(-j))
                    if not (lhs - rhs).is_zero():
                        ok = False
    for n in (2, 3):
        m = LaumonModule(n)
        tp = random_triple(m.rs, m.field, rng, numeric_c=True)
        tm = random_triple(m.rs, m.field, rng, numeric_c=True)
        good, eig = geometric_j_eigencheck(m, tp, tm, 3)
        if not good:
            ok = False
        displayed = m.field.zero()
        for i in range(1, n + 1):
            displayed = displayed + m.field.v_power(n - 1) * m.t(i, 2)
        if eig * m.field.v_power(n - 1) != displayed:
            ok = False
        jc = geometric_j_coefficients(m, tp, tm, 3)
        pair = SevostyanovTriplePair(m.rescaled_triple(tp),
                                     m.rescaled_triple(tm, flip=True))
        char = m.module_character()
        ju = j_tilde_recursive(m.rs, m.field, pair, 3, char).unreduced(char)
        for d, val in jc.items():
            if val != ju[d]:
                ok = False
    report(9, ok, "relations, residues, eigen-properties, loop-conjugacies, "
           "geometric eigenfunction and pairing match, n = 2,3, degree 3")


def test_criterion_10_negative_controls():
    from qtoda.laumon import LaumonModule, relations_check
    ok = True
    F = ScalarField(("q",), 2)
    spec = TorusSpec(1, "A")
    L = local_lax(spec, F, 1, 0)
    from qtoda.torus import TorusElement
    L.entries[0][1][1] = L.entries[0][1][1] + TorusElement.w(spec, F, 1)
    if rtt_check(L):
        ok = False
    rng = random.Random(23)
    rs = build_root_system("A2")
    Ff = base_field(rs)
    pa = random_pair(rs, Ff, rng, numeric_c=True)
    while True:
        pb = random_pair(rs, Ff, rng, numeric_c=True)
        if epsilon_invariant(pb) != epsilon_invariant(pa):
            break
    try:
        solve_pair_conjugation(rs, Ff, pa, pb)
        ok = False
    except TwistError as exc:
        if "hypothesis violated" not in str(exc):
            ok = False
    m = LaumonModule(2)
    orig = m.f_coeff
    m.f_coeff = lambda point, i, j, loop=0: \
        orig(point, i, j, loop) * m.field.v_power(2)
    if relations_check(m, 2):
        ok = False
    report(10, ok, "corrupted Lax fails RTT; mismatched invariants reported "
           "before solving; corrupted module coefficients fail relations")
