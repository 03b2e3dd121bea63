"""
Définition des schémas Pydantic pour la configuration des calculs et l'API.

Ce module contient :

* `RunConfig` et ses sections, validées avant tout calcul (clés inconnues rejetées).
* Les modèles de requête / réponse des endpoints FastAPI.
* La génération automatique de la documentation OpenAPI (Swagger UI).
"""

from typing import Literal, Optional, Union

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from src import config

SignalDescriptor = Union[float, dict]


class StrictModel(BaseModel):
    model_config = ConfigDict(extra="forbid")


class AmplifierConfig(StrictModel):
    """
    Paramètres de l'amplificateur : nombres (constantes) ou descripteurs de signal
    {"kind": "constant" | "cosine" | "toy" | "table", ...}.
    """

    omega: SignalDescriptor = Field(
        config.DEFAULT_AMPLIFIER["omega"],
        json_schema_extra={"example": 1.0},
        description="Fréquence ω(t) de l'oscillateur sous-jacent.",
    )
    alpha: SignalDescriptor = Field(
        config.DEFAULT_AMPLIFIER["alpha"],
        json_schema_extra={"example": 0.1},
        description="Coefficient α(t) du terme â².",
    )
    beta: SignalDescriptor = Field(
        config.DEFAULT_AMPLIFIER["beta"],
        json_schema_extra={"example": 0.2},
        description="Coefficient β(t) du terme â†².",
    )
    mass: SignalDescriptor = Field(
        config.DEFAULT_AMPLIFIER["mass"],
        json_schema_extra={"example": 1.0},
        description="Masse m(t).",
    )

    @field_validator("omega", "alpha", "beta", "mass")
    @classmethod
    def check_descriptor(cls, v):
        if isinstance(v, dict) and "kind" not in v:
            raise ValueError("Un descripteur de signal doit contenir la clé 'kind'.")
        return v

    def descriptors(self) -> dict:
        def normalize(v):
            return {"kind": "constant", "value": float(v)} if not isinstance(v, dict) else v

        return {name: normalize(getattr(self, name)) for name in ("omega", "alpha", "beta", "mass")}


class MetricConfig(StrictModel):
    kappa: float = Field(
        config.DEFAULT_KAPPA,
        json_schema_extra={"example": 1.0},
        description="Paramètre libre κ de la métrique (non nul si α ≠ β).",
    )
    t: float = Field(0.0, description="Instant d'évaluation de la métrique.")


class EPConfig(StrictModel):
    c1: float = Field(config.DEFAULT_C1, ge=1.0, description="Constante d'intégration c₁ ≥ 1.")
    c2: float = Field(config.DEFAULT_C2, description="Constante d'intégration c₂.")
    branch: Literal["1+", "1-", "2+", "2-"] = Field(
        config.DEFAULT_BRANCH, description="Branche de la forme close."
    )
    variant: Literal["smooth", "abs"] = Field(
        "smooth", description="Variante |sin| ou sinus signé de la forme close."
    )
    mode: Literal["toy", "numeric"] = Field(
        "toy", description="Forme close du modèle jouet ou intégration numérique."
    )
    eta0: float = Field(config.DEFAULT_ETA0, gt=0.0, description="Constante d'Ermakov η₀.")
    t_start: float = Field(config.TOY_T_START, gt=0.0)
    t_end: float = Field(config.TOY_T_END, gt=0.0)
    n_times: int = Field(91, ge=2, description="Nombre d'instants écrits dans les CSV.")

    @model_validator(mode="after")
    def check_window(self):
        if self.t_end <= self.t_start:
            raise ValueError("t_end doit être strictement supérieur à t_start.")
        return self


class CatConfig(StrictModel):
    x0: float = Field(config.DEFAULT_X0, description="Décalage en position x₀.")
    p0: float = Field(config.DEFAULT_P0, description="Décalage en impulsion p₀.")
    convention: Literal["printed", "fourier"] = Field("printed")
    normalized: bool = Field(False, description="Normalise W à une intégrale unité.")
    cos_coeffs: tuple[float, float] = Field(
        (2.0, 2.0), description="(a, b) de l'argument cos(a·x₀p + b·p₀x)."
    )


class WignerConfig(StrictModel):
    times: list[float] = Field(
        default_factory=lambda: list(config.WIGNER_TIMES),
        json_schema_extra={"example": [0.1, 1.0, 2.0, 100.0, 1000.0]},
    )
    nx: int = Field(config.WIGNER_GRID_SIZE, ge=16)
    np: int = Field(config.WIGNER_GRID_SIZE, ge=16)

    @field_validator("times")
    @classmethod
    def check_times(cls, v):
        if not v or any(t <= 0 for t in v):
            raise ValueError("Au moins un instant strictement positif est requis.")
        return v


class DensityConfig(StrictModel):
    x_min: float = Field(-6.0)
    x_max: float = Field(6.0)
    nx: int = Field(121, ge=2)
    coefficients: dict[int, tuple[float, float]] = Field(
        default_factory=lambda: {0: (1.0, 0.0)},
        description="Coefficients cₙ = (Re, Im) par niveau n.",
    )

    @model_validator(mode="after")
    def check_range(self):
        if self.x_max <= self.x_min:
            raise ValueError("x_max doit être strictement supérieur à x_min.")
        if any(n < 0 for n in self.coefficients):
            raise ValueError("Les niveaux n doivent être positifs ou nuls.")
        return self

    def complex_coefficients(self) -> dict[int, complex]:
        return {n: complex(re, im) for n, (re, im) in self.coefficients.items()}


class PTRegionConfig(StrictModel):
    alpha_range: tuple[float, float] = Field((-0.5, 1.5))
    beta_range: tuple[float, float] = Field((-0.5, 1.5))
    n: int = Field(config.PT_REGION_GRID_SIZE, ge=2)


class ToleranceConfig(StrictModel):
    root: float = Field(config.ROOT_TOL, gt=0.0)
    ode_rtol: float = Field(config.ODE_RTOL, gt=0.0)
    ode_atol: float = Field(config.ODE_ATOL, gt=0.0)
    quad: float = Field(config.QUAD_TOL, gt=0.0)
    hermiticity: float = Field(config.HERMITICITY_TOL, gt=0.0)
    oracle: float = Field(config.ORACLE_TOL, gt=0.0)


class RunConfig(StrictModel):
    """Document JSON complet d'une exécution ; toutes les sections ont des valeurs par défaut."""

    amplifier: AmplifierConfig = Field(default_factory=AmplifierConfig)
    metric: MetricConfig = Field(default_factory=MetricConfig)
    ep: EPConfig = Field(default_factory=EPConfig)
    cat: CatConfig = Field(default_factory=CatConfig)
    wigner: WignerConfig = Field(default_factory=WignerConfig)
    density: DensityConfig = Field(default_factory=DensityConfig)
    pt_region: PTRegionConfig = Field(default_factory=PTRegionConfig)
    output_dir: Optional[str] = Field(None, description="Répertoire de sortie des CSV.")
    tolerances: ToleranceConfig = Field(default_factory=ToleranceConfig)


# --- Modèles de l'API ---


class PTCheckInput(StrictModel):
    alpha: float = Field(..., json_schema_extra={"example": 0.1})
    beta: float = Field(..., json_schema_extra={"example": 0.2})
    mass: float = Field(1.0, gt=0.0)
    omega: float = Field(1.0, gt=0.0)


class PTCheckOutput(BaseModel):
    unbroken: bool = Field(..., description="Vrai si la symétrie PT est non brisée.")
    discriminant: float
    h11: float
    h22: float


class MetricSolveInput(StrictModel):
    amplifier: AmplifierConfig = Field(default_factory=AmplifierConfig)
    kappa: float = Field(config.DEFAULT_KAPPA, json_schema_extra={"example": 1.0})
    t: float = Field(0.0)


class MetricSolveOutput(BaseModel):
    kappa: float
    kappa0: float
    theta: float
    omega0: float
    alpha0: float
    beta0: float
    residual: float
    M0: float
    Omega0_sq: float
    inverted: bool
    identity: bool


class WignerOriginInput(StrictModel):
    c1: float = Field(config.DEFAULT_C1, ge=1.0)
    c2: float = Field(config.DEFAULT_C2)
    branch: Literal["1+", "1-", "2+", "2-"] = Field(config.DEFAULT_BRANCH)
    x0: float = Field(config.DEFAULT_X0)
    p0: float = Field(config.DEFAULT_P0)
    times: list[float] = Field(
        default_factory=lambda: list(config.WIGNER_TIMES),
        json_schema_extra={"example": [0.1, 1.0, 1000.0]},
    )
    convention: Literal["printed", "fourier"] = Field("printed")

    @field_validator("times")
    @classmethod
    def check_times(cls, v):
        if not v or any(t <= 0 for t in v):
            raise ValueError("Au moins un instant strictement positif est requis.")
        return v


class WignerOriginPoint(BaseModel):
    t: float
    w00: float


class WignerOriginOutput(BaseModel):
    points: list[WignerOriginPoint]
