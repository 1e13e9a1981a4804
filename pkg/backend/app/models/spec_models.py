"""
Generator and Run Configuration Models
Block-graph recipes, random-instance specs and the per-run configuration
"""

from enum import Enum
from fractions import Fraction
from math import comb
from typing import Annotated, Any, Literal, Optional, Tuple, Union

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from ..core.config import ApplicationSettings
from .graph_models import Rational


class _Frozen(BaseModel):
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)


class UniformWeights(_Frozen):
    kind: Literal["uniform"] = "uniform"
    weight: Rational = Fraction(1)

    @field_validator("weight")
    @classmethod
    def check_positive(cls, v):
        if v <= 0:
            raise ValueError("uniform block weight must be positive")
        return v


class InducedWeights(_Frozen):
    """Edge weights (a(u) + a(v))/2 from nonnegative vertex values"""

    kind: Literal["induced"] = "induced"
    a: Tuple[Rational, ...]

    @field_validator("a")
    @classmethod
    def check_nonnegative(cls, v):
        if any(value < 0 for value in v):
            raise ValueError("induced vertex values must be nonnegative")
        if sum(1 for value in v if value == 0) > 1:
            raise ValueError("two zero vertex values would induce a zero edge weight")
        return v


class ExplicitWeights(_Frozen):
    """Arbitrary positive weights in local edge order (0,1), (0,2), (1,2)"""

    kind: Literal["explicit"] = "explicit"
    weights: Tuple[Rational, ...]

    @field_validator("weights")
    @classmethod
    def check_positive(cls, v):
        if any(value <= 0 for value in v):
            raise ValueError("explicit block weights must be positive")
        return v


BlockWeighting = Annotated[
    Union[UniformWeights, InducedWeights, ExplicitWeights],
    Field(discriminator="kind"),
]


class BlockSpec(_Frozen):
    size: int = Field(..., ge=2)
    weighting: BlockWeighting = UniformWeights()

    @model_validator(mode="after")
    def check_weighting_fits(self) -> "BlockSpec":
        weighting = self.weighting
        if isinstance(weighting, InducedWeights):
            if self.size < 3:
                raise ValueError("induced weightings need a block of size at least 3")
            if len(weighting.a) != self.size:
                raise ValueError(f"induced block of size {self.size} needs {self.size} vertex values")
        elif isinstance(weighting, ExplicitWeights):
            if self.size > 3:
                raise ValueError("explicit weights are only allowed on bridges and triangles")
            if len(weighting.weights) != comb(self.size, 2):
                raise ValueError(f"block of size {self.size} needs {comb(self.size, 2)} weights")
        return self


class BlockGraphSpec(_Frozen):
    """Blocks glued one at a time; attachments[j-1] is the existing vertex block j attaches to"""

    blocks: Tuple[BlockSpec, ...] = Field(..., min_length=1)
    attachments: Tuple[Optional[int], ...] = ()

    @model_validator(mode="after")
    def check_attachments(self) -> "BlockGraphSpec":
        if self.attachments and len(self.attachments) != len(self.blocks) - 1:
            raise ValueError("attachments must name one vertex per block after the first")
        vertex_count = self.blocks[0].size
        for block, attachment in zip(self.blocks[1:], self.attachments):
            if attachment is not None and not 0 <= attachment < vertex_count:
                raise ValueError(f"attachment vertex {attachment} does not exist yet")
            vertex_count += block.size - 1
        return self

    @property
    def vertex_count(self) -> int:
        return 1 + sum(block.size - 1 for block in self.blocks)


class RandomSpec(_Frozen):
    n: int = Field(..., ge=1)
    m: Optional[int] = Field(None, ge=0)
    edge_probability: Optional[float] = Field(None, ge=0.0, le=1.0)
    numerator_max: int = Field(100, ge=1)
    denominator_max: int = Field(10, ge=1)
    seed: int = Field(0, ge=0, lt=2**64)

    @model_validator(mode="after")
    def check_density(self) -> "RandomSpec":
        if self.m is not None and self.edge_probability is not None:
            raise ValueError("give either m or edge_probability, not both")
        return self


class ArithmeticMode(str, Enum):
    EXACT = "exact"
    FLOAT = "float"


class OutputFormat(str, Enum):
    TEXT = "text"
    JSON = "json"


class RunConfig(_Frozen):
    """Settings for one CLI run"""

    mode: ArithmeticMode = ArithmeticMode.EXACT
    enumeration_cap: int = 12
    search_cap: int = 15
    output: OutputFormat = OutputFormat.TEXT
    seed: Optional[int] = None
    max_workers: int = Field(1, ge=1)
    float_tolerance: float = 1e-9
    hamilton_max_order: int = 8
    two_opt_max_order: int = 7
    characterization_max_order: int = 7

    @field_validator("enumeration_cap", "search_cap")
    @classmethod
    def validate_cap(cls, v: int) -> int:
        if v < 3:
            raise ValueError("Vertex caps must be at least 3")
        return v

    @field_validator("hamilton_max_order", "two_opt_max_order", "characterization_max_order")
    @classmethod
    def validate_clique_order(cls, v: int) -> int:
        if not 4 <= v <= 10:
            raise ValueError("Clique order limits must lie in [4, 10]")
        return v

    @classmethod
    def from_settings(cls, app_settings: ApplicationSettings, **overrides: Any) -> "RunConfig":
        values = {
            "mode": app_settings.arithmetic_mode,
            "enumeration_cap": app_settings.enumeration_cap,
            "search_cap": app_settings.search_cap,
            "max_workers": app_settings.max_workers,
            "float_tolerance": app_settings.float_tolerance,
            "hamilton_max_order": app_settings.hamilton_max_order,
            "two_opt_max_order": app_settings.two_opt_max_order,
            "characterization_max_order": app_settings.characterization_max_order,
        }
        values.update({key: value for key, value in overrides.items() if value is not None})
        return cls(**values)
