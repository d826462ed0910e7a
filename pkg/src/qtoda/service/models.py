"""Pydantic request/response models for the workbench service."""

from __future__ import annotations

from typing import Dict, List, Literal, Optional

from pydantic import BaseModel, Field


class TripleModel(BaseModel):
    type: str
    epsilon: List[List[int]]
    n: List[List[int]]
    c: List[str]


class PairModel(BaseModel):
    plus: TripleModel
    minus: TripleModel


class OperatorTerm(BaseModel):
    beta: List[int]
    mu: List[List[int]]  # [numerator, denominator] per omega-coordinate
    coeff: str


class HamiltonianRequest(BaseModel):
    type: str
    mode: Literal["closed", "generic", "standard", "affine"] = "closed"
    pair: Optional[PairModel] = None
    kappa: Optional[str] = None
    format: Literal["json", "latex", "text"] = "json"


class HamiltonianResponse(BaseModel):
    type: str
    mode: str
    operator: List[OperatorTerm]
    latex: Optional[str] = None


class TorusTerm(BaseModel):
    w: List[List[int]]
    D: List[int]
    coeff: str


class LaxRequest(BaseModel):
    family: Literal["A", "C"] = "A"
    rank: int = Field(ge=1, le=6, description="number of lattice sites")
    k: List[int]
    periodic_eps: Optional[str] = None
    checks: List[Literal["rtt", "commute"]] = []


class LaxResponse(BaseModel):
    h2: List[TorusTerm]
    h2_matches_formula: bool
    rtt: Optional[bool] = None
    commute: Optional[bool] = None


class WhittakerRequest(BaseModel):
    type: str
    pair: PairModel
    degree: int = Field(default=3, ge=0, le=6)
    route: Literal["recursive", "closed", "oracle"] = "recursive"


class JCoefficient(BaseModel):
    beta: List[int]
    coeff: str


class WhittakerResponse(BaseModel):
    type: str
    route: str
    degree: int
    coefficients: List[JCoefficient]


class EigencheckRequest(BaseModel):
    type: str
    pair: PairModel
    degree: int = Field(default=3, ge=0, le=5)


class EigencheckResponse(BaseModel):
    ok: bool
    eigenvalue: str


class ConjugateRequest(BaseModel):
    type: str
    pairA: PairModel
    pairB: PairModel
    verify_all: bool = False


class TwistModel(BaseModel):
    basis: List[List[int]]
    shifts: List[List[List[int]]]
    multipliers: List[str]


class ConjugateResponse(BaseModel):
    verified: bool
    twist: TwistModel
    x_constants: Dict[str, str]


class LaumonRequest(BaseModel):
    rank: int = Field(ge=2, le=4, description="n of sl_n")
    degree: int = Field(default=2, ge=1, le=3)
    checks: List[Literal["relations", "whittaker", "dj", "residues"]] = [
        "relations", "whittaker", "dj"]
    seed: int = 0


class CheckResult(BaseModel):
    name: str
    ok: bool


class SuiteResponse(BaseModel):
    ok: bool
    checks: List[CheckResult]


class VerifyRequest(BaseModel):
    suite: str
    type: Optional[str] = None
    family: Optional[str] = None
    rank: Optional[int] = None
    degree: Optional[int] = None
    trials: Optional[int] = None
    seed: int = 0
