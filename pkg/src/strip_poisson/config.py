"""Scenario configuration (JSON), validated before any computation."""
from __future__ import annotations

import inspect
import json
from pathlib import Path
from typing import Literal, Optional, Union

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from .presets import PRESETS
from .stripfield import StripGrid, parse_decay

OUTPUT_ENV = "STRIP_POISSON_OUTPUT"
DIAGNOSTICS = ("moments", "residual", "exact_error", "decay_fit", "parseval",
               "poincare_wirtinger", "jumps")


class _Strict(BaseModel):
    model_config = ConfigDict(extra="forbid", frozen=True)


class GridConfig(_Strict):
    n1: int
    L: float
    n2: int

    @model_validator(mode="after")
    def _grid_ok(self):
        StripGrid(self.n1, self.L, self.n2)
        return self

    def build(self) -> StripGrid:
        return StripGrid(self.n1, self.L, self.n2)


class PresetSource(_Strict):
    preset: str
    params: dict[str, float] = Field(default_factory=dict)

    @model_validator(mode="after")
    def _known(self):
        if self.preset not in PRESETS:
            raise ValueError(f"unknown preset {self.preset!r}")
        sig = inspect.signature(PRESETS[self.preset].f)
        extra = set(self.params) - set(list(sig.parameters)[2:])
        if extra:
            raise ValueError(f"preset {self.preset!r} takes no parameters {sorted(extra)}")
        return self


class TableSource(_Strict):
    table: str
    decay_class: str = "schwartz"

    @field_validator("decay_class")
    @classmethod
    def _decay(cls, v):
        parse_decay(v)
        return v


class WeightSpecConfig(_Strict):
    m: int = Field(ge=0, le=2)
    alpha: float
    p: Optional[int] = Field(default=None, ge=0, le=2)

    @model_validator(mode="after")
    def _x_space(self):
        if self.p is not None:
            if self.alpha not in (-0.5, 0.5):
                raise ValueError("X-space norms take alpha in {-1/2, 1/2}")
            if self.m + self.p > 2:
                raise ValueError("X-space norms need m + p <= 2")
        return self


class NormRatioConfig(_Strict):
    target: WeightSpecConfig
    source: WeightSpecConfig


class ScenarioConfig(_Strict):
    grid: GridConfig
    source: Union[PresetSource, TableSource]
    sign_convention: Literal["minus_delta", "delta"] = "minus_delta"
    method: Literal["per_mode", "green_quadrature", "constructive"] = "per_mode"
    R: Optional[float] = None
    moment_policy: Literal["require_orthogonal", "project", "allow_growth"] = "require_orthogonal"
    tol_moment: Optional[float] = Field(default=None, gt=0)
    normalize: Literal["decaying", "anchor"] = "decaying"
    weight_specs: list[WeightSpecConfig] = Field(default_factory=list)
    norm_ratio: Optional[NormRatioConfig] = None
    diagnostics: list[Literal[DIAGNOSTICS]] = Field(default_factory=list)
    decay_window: Optional[tuple[float, float]] = None
    max_nodes: int = Field(default=200_000, gt=0)
    output: str = "out"

    @model_validator(mode="after")
    def _method(self):
        grid = self.grid.build()
        if self.method == "constructive":
            if self.R is None:
                raise ValueError("method 'constructive' needs R")
            grid.node_index(self.R)
            grid.node_index(-self.R)
            if self.R <= 0 or self.R + 5 * grid.h2 > grid.L:
                raise ValueError("R must be positive and leave room below the grid top")
        elif self.R is not None:
            raise ValueError("R is only used by method 'constructive'")
        if self.method == "green_quadrature" and self.moment_policy != "require_orthogonal":
            raise ValueError("green_quadrature only supports moment_policy 'require_orthogonal'")
        if "jumps" in self.diagnostics and self.method != "constructive":
            raise ValueError("the 'jumps' diagnostic needs method 'constructive'")
        if self.decay_window is not None:
            a, b = self.decay_window
            if not 0 <= a < b <= grid.L:
                raise ValueError("decay_window must satisfy 0 <= a < b <= L")
        return self


def load_config(path) -> ScenarioConfig:
    """Parse and validate; OSError propagates for I/O failures."""
    text = Path(path).read_text()
    return ScenarioConfig.model_validate(json.loads(text))
