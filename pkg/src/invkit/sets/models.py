"""Data models for the sets module.

Every set is origin-centred: ellipsoids are centred at 0 and cones have
their vertex at 0. Sets with another centre are translated by the caller.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import StrEnum
from typing import Any

import numpy as np
from numpy.typing import ArrayLike

from invkit.numerics import FloatArray, NumericsError, as_matrix, as_vector


class SetError(Exception):
    """Base exception for set errors."""


class DimensionMismatchError(SetError):
    """Raised when a set, point or matrix disagree in dimension."""


class WrongInertiaError(SetError):
    """Raised when a cone matrix does not have inertia (n-1, 0, 1)."""


class DegenerateSetError(SetError):
    """Raised when a set has no boundary points to sample."""


class NotOnBoundaryError(SetError):
    """Raised when a tangent-cone query is made away from the boundary."""


class SetKind(StrEnum):
    """Tag of a set description (the problem-file ``type`` field)."""

    H_POLYHEDRON = "h_polyhedron"
    H_CONE = "h_cone"
    V_POLYHEDRON = "v_polyhedron"
    V_CONE = "v_cone"
    ELLIPSOID = "ellipsoid"
    LORENZ_CONE = "lorenz_cone"
    QUADRATIC_SET = "quadratic_set"
    DOUBLE_CONE = "double_cone"


class MembershipClass(StrEnum):
    """Position of a point relative to a set."""

    INSIDE = "Inside"
    BOUNDARY = "Boundary"
    OUTSIDE = "Outside"


@dataclass(frozen=True)
class Membership:
    """Membership classification with its signed slack.

    Negative slack is inside, positive slack outside; the magnitude is a
    distance proxy in the set's defining functional.
    """

    classification: MembershipClass
    slack: float

    @property
    def is_inside(self) -> bool:
        """Return True for strictly interior points."""
        return self.classification is MembershipClass.INSIDE

    @property
    def is_boundary(self) -> bool:
        """Return True for boundary points."""
        return self.classification is MembershipClass.BOUNDARY

    @property
    def is_outside(self) -> bool:
        """Return True for points outside the set."""
        return self.classification is MembershipClass.OUTSIDE

    @property
    def is_member(self) -> bool:
        """Return True for inside or boundary points."""
        return not self.is_outside

    @classmethod
    def from_slack(cls, slack: float, tol: float) -> Membership:
        """Classify a slack against a symmetric band."""
        if slack < -tol:
            return cls(MembershipClass.INSIDE, slack)
        if slack > tol:
            return cls(MembershipClass.OUTSIDE, slack)
        return cls(MembershipClass.BOUNDARY, slack)


@dataclass(frozen=True)
class ValidationReport:
    """Outcome of checking a set description against its definition."""

    valid: bool
    violations: tuple[str, ...] = ()
    details: dict[str, Any] = field(default_factory=dict)

    def to_dict(self) -> dict[str, Any]:
        """Serialize to dictionary."""
        return {"valid": self.valid, "violations": list(self.violations), **self.details}


@dataclass(frozen=True, eq=False)
class LorenzStandardForm:
    """Spectral data standardizing a Lorenz-cone matrix.

    ``transform`` T satisfies T^T Q T = diag(1, ..., 1, -1) and maps the
    standard cone onto the cone of Q.

    Attributes:
        eigenvalues: Eigenvalues of Q, descending (the last one negative).
        eigenvectors: Matching orthonormal eigenvectors, u_n oriented.
        transform: T = [u_1/sqrt(l_1), ..., u_n/sqrt(-l_n)].
        inverse: T^{-1} = diag(|l|^{1/2}) U^T.
    """

    eigenvalues: FloatArray
    eigenvectors: FloatArray
    transform: FloatArray
    inverse: FloatArray

    @property
    def u_n(self) -> FloatArray:
        """Return the oriented negative-eigenvalue eigenvector."""
        return self.eigenvectors[:, -1].copy()

    @property
    def lambda_n(self) -> float:
        """Return the negative eigenvalue."""
        return float(self.eigenvalues[-1])


def _quadric_matrix(q: ArrayLike) -> FloatArray:
    try:
        return as_matrix(q, square=True, name="Q")
    except NumericsError as e:
        raise DimensionMismatchError(str(e)) from e


@dataclass(frozen=True, eq=False)
class HPolyhedron:
    """Polyhedron ``{x | G x <= b}``; with b = 0 it is a polyhedral cone."""

    g: FloatArray
    b: FloatArray

    def __post_init__(self) -> None:
        try:
            g = as_matrix(self.g, name="G")
            b = as_vector(self.b, name="b")
        except NumericsError as e:
            raise DimensionMismatchError(str(e)) from e
        if b.shape[0] != g.shape[0]:
            raise DimensionMismatchError(f"G has {g.shape[0]} rows but b has {b.shape[0]}")
        object.__setattr__(self, "g", g)
        object.__setattr__(self, "b", b)

    @classmethod
    def cone(cls, g: ArrayLike) -> HPolyhedron:
        """Create the polyhedral cone ``{x | G x <= 0}``."""
        matrix = np.array(g, dtype=np.float64)
        return cls(g=matrix, b=np.zeros(matrix.shape[0] if matrix.ndim == 2 else 0))

    @property
    def dim(self) -> int:
        """Return the ambient dimension."""
        return int(self.g.shape[1])

    @property
    def num_facets(self) -> int:
        """Return the number of inequalities."""
        return int(self.g.shape[0])

    @property
    def is_cone(self) -> bool:
        """Return True when every right-hand side is zero."""
        return bool(np.all(self.b == 0.0))

    @property
    def kind(self) -> SetKind:
        """Return the set tag."""
        return SetKind.H_CONE if self.is_cone else SetKind.H_POLYHEDRON

    @property
    def row_norms(self) -> FloatArray:
        """Return the Euclidean norm of each row of G."""
        norms: FloatArray = np.linalg.norm(self.g, axis=1)
        return norms


@dataclass(frozen=True, eq=False)
class VPolyhedron:
    """Convex hull of vertices plus the conic hull of rays.

    Attributes:
        vertices: Point generators, one per row (l1 x n, l1 may be 0).
        rays: Direction generators, one per row (l2 x n, l2 may be 0).
    """

    vertices: FloatArray
    rays: FloatArray

    def __post_init__(self) -> None:
        vertices = np.array(self.vertices, dtype=np.float64)
        rays = np.array(self.rays, dtype=np.float64)
        if vertices.size == 0 and rays.size == 0:
            raise DimensionMismatchError("a V-polyhedron needs at least one generator")
        n = vertices.shape[-1] if vertices.size else rays.shape[-1]
        vertices = vertices.reshape(-1, n) if vertices.size else np.zeros((0, n))
        rays = rays.reshape(-1, n) if rays.size else np.zeros((0, n))
        if vertices.ndim != 2 or rays.ndim != 2 or vertices.shape[1] != rays.shape[1]:
            raise DimensionMismatchError("vertices and rays must share one dimension")
        if not (np.all(np.isfinite(vertices)) and np.all(np.isfinite(rays))):
            raise DimensionMismatchError("generators have non-finite entries")
        object.__setattr__(self, "vertices", vertices)
        object.__setattr__(self, "rays", rays)

    @classmethod
    def cone(cls, rays: ArrayLike) -> VPolyhedron:
        """Create the polyhedral cone generated by rays."""
        return cls(vertices=np.zeros((0, 0)), rays=np.array(rays, dtype=np.float64))

    @property
    def dim(self) -> int:
        """Return the ambient dimension."""
        return int(self.vertices.shape[1])

    @property
    def num_vertices(self) -> int:
        """Return l1."""
        return int(self.vertices.shape[0])

    @property
    def num_rays(self) -> int:
        """Return l2."""
        return int(self.rays.shape[0])

    @property
    def is_cone(self) -> bool:
        """Return True when there are no vertex generators."""
        return self.num_vertices == 0

    @property
    def kind(self) -> SetKind:
        """Return the set tag."""
        return SetKind.V_CONE if self.is_cone else SetKind.V_POLYHEDRON

    @property
    def generators(self) -> FloatArray:
        """Return X = [x^1 ... x^l1, xhat^1 ... xhat^l2] as columns."""
        stacked: FloatArray = np.vstack([self.vertices, self.rays]).T
        return stacked


@dataclass(frozen=True, eq=False)
class Ellipsoid:
    """Ellipsoid ``{x | x^T Q x <= 1}`` with Q positive definite."""

    q: FloatArray

    def __post_init__(self) -> None:
        object.__setattr__(self, "q", _quadric_matrix(self.q))

    @property
    def dim(self) -> int:
        """Return the ambient dimension."""
        return int(self.q.shape[0])

    @property
    def kind(self) -> SetKind:
        """Return the set tag."""
        return SetKind.ELLIPSOID


@dataclass(frozen=True, eq=False)
class QuadraticSet:
    """Sublevel set ``{x | x^T Q x <= 1}`` for any symmetric Q."""

    q: FloatArray

    def __post_init__(self) -> None:
        object.__setattr__(self, "q", _quadric_matrix(self.q))

    @property
    def dim(self) -> int:
        """Return the ambient dimension."""
        return int(self.q.shape[0])

    @property
    def kind(self) -> SetKind:
        """Return the set tag."""
        return SetKind.QUADRATIC_SET


@dataclass(frozen=True, eq=False)
class _QuadricCone:
    """Shared state of Lorenz and double cones: Q plus its standard form."""

    q: FloatArray
    axis: FloatArray | None = None
    standard: LorenzStandardForm | None = field(default=None, init=False)

    def __post_init__(self) -> None:
        from invkit.sets.lorenz import lorenz_standardize

        q = _quadric_matrix(self.q)
        object.__setattr__(self, "q", q)
        if self.axis is not None:
            axis = np.array(self.axis, dtype=np.float64).reshape(-1)
            if axis.shape[0] != q.shape[0]:
                raise DimensionMismatchError(
                    f"axis has {axis.shape[0]} entries, expected {q.shape[0]}"
                )
            object.__setattr__(self, "axis", axis)
        try:
            standard = lorenz_standardize(q, axis=self.axis)
        except (WrongInertiaError, NumericsError):
            standard = None
        object.__setattr__(self, "standard", standard)

    @property
    def dim(self) -> int:
        """Return the ambient dimension."""
        return int(self.q.shape[0])

    def require_standard(self) -> LorenzStandardForm:
        """Return the standard form or raise when Q has the wrong inertia."""
        if self.standard is None:
            raise WrongInertiaError("cone matrix must be symmetric with inertia (n-1,0,1)")
        return self.standard


@dataclass(frozen=True, eq=False)
class LorenzCone(_QuadricCone):
    """Lorenz cone ``{x | x^T Q x <= 0, u_n^T x >= 0}``.

    The optional axis fixes the orientation: u_n is chosen with
    u_n^T axis > 0. Without it the largest-magnitude component of u_n is
    positive.
    """

    @property
    def kind(self) -> SetKind:
        """Return the set tag."""
        return SetKind.LORENZ_CONE


@dataclass(frozen=True, eq=False)
class DoubleCone(_QuadricCone):
    """Nonconvex double cone ``{x | x^T Q x <= 0}``."""

    @property
    def kind(self) -> SetKind:
        """Return the set tag."""
        return SetKind.DOUBLE_CONE

    def nappe(self) -> LorenzCone:
        """Return the Lorenz cone containing +u_n."""
        return LorenzCone(q=self.q, axis=self.axis)


SetDescription = HPolyhedron | VPolyhedron | Ellipsoid | LorenzCone | QuadraticSet | DoubleCone
