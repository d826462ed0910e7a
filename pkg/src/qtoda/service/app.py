"""FastAPI front end for the exact q-Toda workbench.

Every endpoint wraps a core-package computation; the CLI is a thin client of
this service (in-process by default).  All responses are exact: scalars
travel as canonical text forms, weights as rational pairs.
"""

from __future__ import annotations

from fastapi import FastAPI, HTTPException

from ..cartan import build_root_system
from ..hamiltonians import (build_affine_D1, build_D1_closed,
                            build_DV_generic, build_standard_qToda)
from ..lax import (closed_double_mixed_h2_formula, closed_mixed_h2_formula,
                   commuting_coefficients_check, double_mixed_h2_formula,
                   double_monodromy, extract_H, extract_H2_double,
                   mixed_h2_formula, monodromy, rtt_check)
from ..reps import rep_first_fundamental
from ..scalars import ScalarField
from ..torus import TorusSpec
from ..triples import TripleError, pair_from_dict
from ..equivalence import TwistError, solve_pair_conjugation
from ..verify import base_field, run_suite
from . import models

app = FastAPI(title="qtoda workbench",
              description="Exact-arithmetic service for modified quantum "
                          "difference Toda systems.")


def _pair(rs, field, model: models.PairModel):
    try:
        return pair_from_dict(model.model_dump(), field, rs)
    except (TripleError, ValueError) as exc:
        raise HTTPException(status_code=422, detail=str(exc))


def _rs(tag: str):
    try:
        return build_root_system(tag)
    except (ValueError, IndexError) as exc:
        raise HTTPException(status_code=422, detail=f"bad type tag: {exc}")


@app.get("/health")
def health():
    return {"status": "ok"}


@app.post("/hamiltonian", response_model=models.HamiltonianResponse)
def hamiltonian(req: models.HamiltonianRequest):
    rs = _rs(req.type)
    field = base_field(rs, extra=("kappa",))
    if req.mode in ("closed", "generic"):
        if req.pair is None:
            raise HTTPException(status_code=422,
                                detail=f"mode {req.mode!r} needs a pair")
        pair = _pair(rs, field, req.pair)
        if req.mode == "closed":
            op = build_D1_closed(rs, field, pair)
        else:
            v1 = rep_first_fundamental(rs, field)
            op = build_DV_generic(rs, field, v1, pair)
    elif req.mode == "standard":
        op = build_standard_qToda(rs, field)
    else:
        kappa = field.parse(req.kappa) if req.kappa else None
        op = build_affine_D1(rs, field, kappa)
    latex = op.to_latex() if req.format == "latex" else None
    return models.HamiltonianResponse(type=rs.name, mode=req.mode,
                                      operator=op.to_json_obj(), latex=latex)


@app.post("/lax", response_model=models.LaxResponse)
def lax(req: models.LaxRequest):
    field = ScalarField(("q", "eps"), 2)
    n = req.rank
    if len(req.k) != n:
        raise HTTPException(status_code=422, detail="k-vector length != rank")
    if any(k not in (-1, 0, 1) for k in req.k):
        raise HTTPException(status_code=422, detail="k entries must be -1,0,1")
    spec = TorusSpec(n, "A")
    eps = field.parse(req.periodic_eps) if req.periodic_eps else None
    if req.family == "A":
        T = monodromy(spec, field, req.k)
        h2 = extract_H(T, req.k, 1, eps)
        formula = (mixed_h2_formula(spec, field, req.k) if eps is None
                   else closed_mixed_h2_formula(spec, field, req.k, eps))
    else:
        T = double_monodromy(spec, field, req.k)
        h2 = extract_H2_double(T, eps)
        formula = (double_mixed_h2_formula(spec, field, req.k) if eps is None
                   else closed_double_mixed_h2_formula(spec, field, req.k, eps))
    out = models.LaxResponse(h2=h2.to_json_obj(),
                             h2_matches_formula=(h2 == formula))
    if "rtt" in req.checks:
        out.rtt = rtt_check(T)
    if "commute" in req.checks:
        out.commute = commuting_coefficients_check(T, eps)
    return out


@app.post("/whittaker", response_model=models.WhittakerResponse)
def whittaker(req: models.WhittakerRequest):
    from ..whittaker import (j_from_verma_oracle, j_tilde_closed,
                             j_tilde_recursive, whittaker_field)
    rs = _rs(req.type)
    field = whittaker_field(rs)
    pair = _pair(rs, field, req.pair)
    route = {"recursive": j_tilde_recursive, "closed": j_tilde_closed,
             "oracle": j_from_verma_oracle}[req.route]
    if req.route == "oracle" and rs.rank > 2:
        raise HTTPException(status_code=422,
                            detail="oracle route supports rank <= 2")
    js = route(rs, field, pair, req.degree)
    return models.WhittakerResponse(type=rs.name, route=req.route,
                                    degree=req.degree,
                                    coefficients=js.to_json_obj())


@app.post("/whittaker/eigencheck", response_model=models.EigencheckResponse)
def whittaker_eigencheck(req: models.EigencheckRequest):
    from ..whittaker import eigencheck, trace_eigenvalue, whittaker_field
    rs = _rs(req.type)
    field = whittaker_field(rs)
    pair = _pair(rs, field, req.pair)
    v1 = rep_first_fundamental(rs, field)
    ok = eigencheck(rs, field, pair, v1, req.degree)
    return models.EigencheckResponse(
        ok=ok, eigenvalue=trace_eigenvalue(rs, field, v1).to_text())


@app.post("/conjugate", response_model=models.ConjugateResponse)
def conjugate(req: models.ConjugateRequest):
    rs = _rs(req.type)
    field = base_field(rs)
    pa = _pair(rs, field, req.pairA)
    pb = _pair(rs, field, req.pairB)
    try:
        tw = solve_pair_conjugation(rs, field, pa, pb)
    except TwistError as exc:
        raise HTTPException(status_code=409, detail=str(exc))
    try:
        xrep = {f"x_{i}{j}": str(v) for (i, j), v in tw.x_report().items()}
    except TwistError:
        xrep = {}
    return models.ConjugateResponse(verified=True,
                                    twist=tw.to_json_obj(),
                                    x_constants=xrep)


@app.post("/laumon", response_model=models.SuiteResponse)
def laumon(req: models.LaumonRequest):
    from ..verify import verify_laumon
    result = verify_laumon(req.rank, req.degree, req.seed)
    wanted = set(req.checks)
    keep = []
    for c in result["checks"]:
        name = c["name"]
        if ("relations" in name and "relations" in wanted) \
                or ("residue" in name and "residues" in wanted) \
                or ("Whittaker" in name and "whittaker" in wanted) \
                or ("eigenfunction" in name and "dj" in wanted):
            keep.append(c)
    if not keep:
        keep = result["checks"]
    return models.SuiteResponse(ok=all(c["ok"] for c in keep),
                                checks=[models.CheckResult(**c)
                                        for c in ({"name": k["name"],
                                                   "ok": k["ok"]}
                                                  for k in keep)])


@app.post("/verify", response_model=models.SuiteResponse)
def verify(req: models.VerifyRequest):
    kwargs = {k: v for k, v in req.model_dump().items()
              if k != "suite" and v is not None}
    try:
        result = run_suite(req.suite, **kwargs)
    except ValueError as exc:
        raise HTTPException(status_code=422, detail=str(exc))
    return models.SuiteResponse(ok=result["ok"],
                                checks=[models.CheckResult(name=c["name"],
                                                           ok=c["ok"])
                                        for c in result["checks"]])
