"""Request/response models for the HTTP service.

These mirror the core dataclasses one-to-one; conversion helpers keep the
wire format decoupled from the in-process API.
"""

from __future__ import annotations

from typing import Annotated, Literal, Optional, Union

from pydantic import BaseModel, Field, model_validator

from .. import config as cfgmod
from ..distributions import AsymmetricLaplace, HypothesisPair, Normal, Poisson
from ..montecarlo import (
    DEFAULT_CAP,
    ExperimentConfig,
    ExperimentSummary,
    Procedure,
    TruthMode,
)


class NormalModel(BaseModel):
    family: Literal["normal"] = "normal"
    mean: float
    variance: float = Field(default=1.0, gt=0)

    def to_core(self) -> Normal:
        return Normal(self.mean, self.variance)


class PoissonModel(BaseModel):
    family: Literal["poisson"] = "poisson"
    rate: float = Field(gt=0)

    def to_core(self) -> Poisson:
        return Poisson(self.rate)


class AsymmetricLaplaceModel(BaseModel):
    family: Literal["asymmetric_laplace"] = "asymmetric_laplace"
    location: float
    scale: float = Field(gt=0)
    asymmetry: float = Field(gt=0)

    def to_core(self) -> AsymmetricLaplace:
        return AsymmetricLaplace(self.location, self.scale, self.asymmetry)


DistributionModel = Annotated[
    Union[NormalModel, PoissonModel, AsymmetricLaplaceModel],
    Field(discriminator="family"),
]


class PairModel(BaseModel):
    f0: DistributionModel
    f1: DistributionModel

    @model_validator(mode="after")
    def _members_form_a_valid_pair(self):
        HypothesisPair(self.f0.to_core(), self.f1.to_core())  # raises ValueError
        return self

    def to_core(self) -> HypothesisPair:
        return HypothesisPair(self.f0.to_core(), self.f1.to_core())


class MomentsRequest(BaseModel):
    pair: PairModel
    method: Literal["auto", "analytic", "numeric"] = "auto"
    tol: float = Field(default=1e-9, gt=0)


class MomentsResponse(BaseModel):
    eta_x: float
    sigma2_x: float
    eta_y: float
    sigma2_y: float
    method: str


class N1StarRequest(BaseModel):
    pair: PairModel
    eps: float = Field(default=1e-12, gt=0)
    tol: float = Field(default=1e-9, gt=0)


class N1StarResponse(BaseModel):
    closed_form: float
    series: float
    moments: MomentsResponse


class ThresholdsRequest(BaseModel):
    alpha: float = Field(gt=0, lt=1)
    beta: float = Field(gt=0, lt=1)


class ThresholdsResponse(BaseModel):
    a: float
    b: float
    alpha: float
    beta: float


class SimulateRequest(BaseModel):
    pair: PairModel
    alpha: float = Field(gt=0, lt=1)
    beta: Optional[float] = Field(default=None, gt=0, lt=1)
    replications: int = Field(default=cfgmod.DEFAULT_REPLICATIONS, ge=1)
    seed: int = Field(default=cfgmod.DEFAULT_SEED, ge=0)
    procedure: Literal["adaptive", "classical"] = "adaptive"
    truth: Literal["H0", "H1", "random"] = "H0"
    cap: int = Field(default=DEFAULT_CAP, ge=2)
    workers: Optional[int] = Field(default=None, ge=1)
    label: str = ""

    def to_core(self) -> ExperimentConfig:
        pair = self.pair.to_core()
        procedure = Procedure(self.procedure)
        return ExperimentConfig(
            pair=pair,
            alpha=self.alpha,
            beta=self.alpha if self.beta is None else self.beta,
            master_seed=self.seed,
            replications=self.replications,
            procedure=procedure,
            truth=TruthMode(self.truth),
            cap=self.cap,
            label=self.label or cfgmod.default_label(pair, procedure),
        )


class SummaryResponse(BaseModel):
    label: str
    procedure: str
    truth: str
    alpha: float
    beta: float
    master_seed: int
    replications: int
    pcs: float
    se_pcs: float
    mean_n_inferior: float
    se_n_inferior: float
    asn: float
    se_asn: float
    mean_total_draws: float
    se_total_draws: float
    n1_star_closed: float
    n1_star_series: float
    asn_wald_k0: float
    asn_wald_k1: float

    @classmethod
    def from_core(cls, s: ExperimentSummary) -> "SummaryResponse":
        c = s.config
        return cls(
            label=c.label,
            procedure=c.procedure.value,
            truth=c.truth.value,
            alpha=c.alpha,
            beta=c.beta,
            master_seed=c.master_seed,
            replications=s.replications,
            pcs=s.pcs,
            se_pcs=s.se_pcs,
            mean_n_inferior=s.mean_n_inferior,
            se_n_inferior=s.se_n_inferior,
            asn=s.asn,
            se_asn=s.se_asn,
            mean_total_draws=s.mean_total_draws,
            se_total_draws=s.se_total_draws,
            n1_star_closed=s.n1_star_closed,
            n1_star_series=s.n1_star_series,
            asn_wald_k0=s.asn_wald_k0,
            asn_wald_k1=s.asn_wald_k1,
        )


class TableRequest(BaseModel):
    """Run a benchmark preset or an inline configuration document."""

    preset: Optional[str] = None
    config: Optional[str] = None
    seed: Optional[int] = Field(default=None, ge=0)
    replications: Optional[int] = Field(default=None, ge=1)
    format: Optional[Literal["csv", "markdown"]] = None
    workers: Optional[int] = Field(default=None, ge=1)

    @model_validator(mode="after")
    def _exactly_one_source(self):
        if (self.preset is None) == (self.config is None):
            raise ValueError("provide exactly one of 'preset' or 'config'")
        return self


class TableResponse(BaseModel):
    format: str
    content: str
    suggested_path: str
    rows: list[SummaryResponse]


class HealthResponse(BaseModel):
    status: str
    version: str
