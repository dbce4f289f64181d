"""Pydantic schema of problem files.

Matrices are row-major lists of rows, parsed as 64-bit floats; NaN and
infinities are rejected. The set object is a union discriminated by its
``type`` field.
"""

from __future__ import annotations

from typing import Annotated, Literal

from pydantic import AfterValidator, BaseModel, ConfigDict, Field

from invkit.problem import TimeRegime


def _rectangular(rows: list[list[float]]) -> list[list[float]]:
    if rows and any(len(row) != len(rows[0]) for row in rows):
        raise ValueError("matrix rows must have equal length")
    return rows


Matrix = Annotated[list[list[float]], AfterValidator(_rectangular)]
Vector = list[float]


class _FileModel(BaseModel):
    model_config = ConfigDict(extra="forbid", allow_inf_nan=False, populate_by_name=True)


class HPolyhedronSpec(_FileModel):
    """``{x | G x <= b}``."""

    type: Literal["h_polyhedron"]
    g: Matrix = Field(alias="G", min_length=1)
    b: Vector


class HConeSpec(_FileModel):
    """``{x | G x <= 0}``."""

    type: Literal["h_cone"]
    g: Matrix = Field(alias="G", min_length=1)


class VPolyhedronSpec(_FileModel):
    """Vertices and rays, one generator per row."""

    type: Literal["v_polyhedron"]
    vertices: Matrix = Field(default_factory=list)
    rays: Matrix = Field(default_factory=list)


class VConeSpec(_FileModel):
    """Rays, one per row."""

    type: Literal["v_cone"]
    rays: Matrix = Field(min_length=1)


class EllipsoidSpec(_FileModel):
    """``{x | x^T Q x <= 1}``, Q positive definite."""

    type: Literal["ellipsoid"]
    q: Matrix = Field(alias="Q", min_length=1)


class QuadraticSetSpec(_FileModel):
    """``{x | x^T Q x <= 1}``, Q symmetric."""

    type: Literal["quadratic_set"]
    q: Matrix = Field(alias="Q", min_length=1)


class LorenzConeSpec(_FileModel):
    """Lorenz cone of Q with an optional orientation axis."""

    type: Literal["lorenz_cone"]
    q: Matrix = Field(alias="Q", min_length=1)
    axis: Vector | None = None


class DoubleConeSpec(_FileModel):
    """``{x | x^T Q x <= 0}``."""

    type: Literal["double_cone"]
    q: Matrix = Field(alias="Q", min_length=1)
    axis: Vector | None = None


SetSpec = Annotated[
    HPolyhedronSpec
    | HConeSpec
    | VPolyhedronSpec
    | VConeSpec
    | EllipsoidSpec
    | QuadraticSetSpec
    | LorenzConeSpec
    | DoubleConeSpec,
    Field(discriminator="type"),
]


class SystemSpec(_FileModel):
    """System matrix and time regime."""

    a: Matrix = Field(alias="A", min_length=1)
    time: TimeRegime


class ToleranceOverrides(_FileModel):
    """Optional per-problem tolerance overrides."""

    eig_tol: float | None = Field(default=None, ge=0.0)
    psd_tol: float | None = Field(default=None, ge=0.0)
    singular_tol: float | None = Field(default=None, ge=0.0)
    exp_tol: float | None = Field(default=None, gt=0.0)
    lp_tol: float | None = Field(default=None, ge=0.0)
    pivot_tol: float | None = Field(default=None, gt=0.0)
    membership_tol: float | None = Field(default=None, ge=0.0)
    mu_search_tol: float | None = Field(default=None, gt=0.0)
    inertia_tol: float | None = Field(default=None, ge=0.0)


class ProblemSpec(_FileModel):
    """A complete problem file."""

    system: SystemSpec
    region: SetSpec = Field(alias="set")
    tolerances: ToleranceOverrides | None = None
    seed: int | None = Field(default=None, ge=0)
