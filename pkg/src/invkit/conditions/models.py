"""Data models for the conditions module."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import StrEnum
from typing import Any

import numpy as np

from invkit.config import Tolerances
from invkit.numerics import FloatArray


class Verdict(StrEnum):
    """Outcome of an invariance check."""

    INVARIANT = "Invariant"
    NOT_INVARIANT = "NotInvariant"
    INCONCLUSIVE = "Inconclusive"


class CertificateKind(StrEnum):
    """Tag of a certificate variant."""

    NONNEG_MATRIX = "nonneg_matrix"
    OD_NONNEG_MATRIX = "od_nonneg_matrix"
    VREP_MATRIX = "vrep_matrix"
    SCALAR_LMI = "scalar_lmi"
    SUFFICIENT_ONLY = "sufficient_only"


class ScalarKind(StrEnum):
    """Which scalar parametrizes an LMI certificate."""

    MU = "mu"
    ETA = "eta"


class MatrixRole(StrEnum):
    """Role of an off-diagonal nonnegative matrix: H-rep rows or V-rep columns."""

    H = "H"
    L = "L"


def _matrix(data: Any) -> FloatArray:
    return np.array(data, dtype=np.float64)


@dataclass(frozen=True, eq=False)
class NonnegMatrixCertificate:
    """Nonnegative H with HG = GA and Hb <= b."""

    h: FloatArray

    @property
    def kind(self) -> CertificateKind:
        return CertificateKind.NONNEG_MATRIX

    def to_dict(self) -> dict[str, Any]:
        """Serialize to dictionary."""
        return {"kind": str(self.kind), "H": self.h.tolist()}


@dataclass(frozen=True, eq=False)
class ODNonnegMatrixCertificate:
    """Off-diagonal nonnegative H~ (rows) or L~ (columns) for continuous time."""

    matrix: FloatArray
    role: MatrixRole

    @property
    def kind(self) -> CertificateKind:
        return CertificateKind.OD_NONNEG_MATRIX

    def to_dict(self) -> dict[str, Any]:
        """Serialize to dictionary."""
        return {"kind": str(self.kind), "role": str(self.role), "matrix": self.matrix.tolist()}


@dataclass(frozen=True, eq=False)
class VRepMatrixCertificate:
    """Nonnegative L with XL = AX and the vertex-weight sums of each column."""

    l: FloatArray  # noqa: E741

    @property
    def kind(self) -> CertificateKind:
        return CertificateKind.VREP_MATRIX

    def to_dict(self) -> dict[str, Any]:
        """Serialize to dictionary."""
        return {"kind": str(self.kind), "L": self.l.tolist()}


@dataclass(frozen=True)
class ScalarLMICertificate:
    """Scalar mu or eta with the largest eigenvalue of the LMI matrix at that value.

    Attributes:
        scalar: Which scalar the certificate carries.
        value: The certified scalar.
        lmi_lambda_max: lambda_1 of the LMI matrix at value.
        side_conditions: Further scalars evaluated by the checker.
    """

    scalar: ScalarKind
    value: float
    lmi_lambda_max: float
    side_conditions: dict[str, float] = field(default_factory=dict)

    @property
    def kind(self) -> CertificateKind:
        return CertificateKind.SCALAR_LMI

    def to_dict(self) -> dict[str, Any]:
        """Serialize to dictionary, naming the scalar "mu" or "eta"."""
        return {
            "kind": str(self.kind),
            "scalar": str(self.scalar),
            str(self.scalar): self.value,
            "lmi_lambda_max": self.lmi_lambda_max,
            "side_conditions": dict(self.side_conditions),
        }


@dataclass(frozen=True)
class SufficientOnlyCertificate:
    """lambda_1(A^T Q A) evidence for the singular-dynamics Lorenz shortcut."""

    lambda_max: float
    side_conditions: dict[str, float] = field(default_factory=dict)

    @property
    def kind(self) -> CertificateKind:
        return CertificateKind.SUFFICIENT_ONLY

    def to_dict(self) -> dict[str, Any]:
        """Serialize to dictionary."""
        return {
            "kind": str(self.kind),
            "lambda_max": self.lambda_max,
            "side_conditions": dict(self.side_conditions),
        }


Certificate = (
    NonnegMatrixCertificate
    | ODNonnegMatrixCertificate
    | VRepMatrixCertificate
    | ScalarLMICertificate
    | SufficientOnlyCertificate
)


def certificate_from_dict(data: dict[str, Any]) -> Certificate:
    """Rebuild a certificate from its ``to_dict`` form.

    Raises:
        ValueError: If the kind is unknown or fields are missing.
    """
    try:
        kind = CertificateKind(data["kind"])
        match kind:
            case CertificateKind.NONNEG_MATRIX:
                return NonnegMatrixCertificate(h=_matrix(data["H"]))
            case CertificateKind.OD_NONNEG_MATRIX:
                return ODNonnegMatrixCertificate(
                    matrix=_matrix(data["matrix"]), role=MatrixRole(data["role"])
                )
            case CertificateKind.VREP_MATRIX:
                return VRepMatrixCertificate(l=_matrix(data["L"]))
            case CertificateKind.SCALAR_LMI:
                scalar = ScalarKind(data["scalar"])
                return ScalarLMICertificate(
                    scalar=scalar,
                    value=float(data[str(scalar)]),
                    lmi_lambda_max=float(data["lmi_lambda_max"]),
                    side_conditions={
                        k: float(v) for k, v in data.get("side_conditions", {}).items()
                    },
                )
            case CertificateKind.SUFFICIENT_ONLY:
                return SufficientOnlyCertificate(
                    lambda_max=float(data["lambda_max"]),
                    side_conditions={
                        k: float(v) for k, v in data.get("side_conditions", {}).items()
                    },
                )
    except KeyError as e:
        raise ValueError(f"certificate is missing field {e}") from e
    raise ValueError(f"unknown certificate kind {data.get('kind')!r}")


def _finite_or_none(value: float) -> float | None:
    return value if math.isfinite(value) else None


@dataclass(frozen=True)
class ScalarInterval:
    """Closed interval [lo, hi] of admissible scalars; empty when lo > hi."""

    lo: float
    hi: float

    @property
    def empty(self) -> bool:
        """Return True when lo > hi."""
        return self.lo > self.hi

    def is_empty(self, tol: float = 0.0) -> bool:
        """Return True when lo exceeds hi by more than tol."""
        return self.lo > self.hi + tol

    def contains(self, value: float, tol: float = 0.0) -> bool:
        """Return True when lo - tol <= value <= hi + tol."""
        return self.lo - tol <= value <= self.hi + tol

    def to_dict(self) -> dict[str, Any]:
        """Serialize to dictionary; infinite ends become null."""
        return {
            "lo": _finite_or_none(self.lo),
            "hi": _finite_or_none(self.hi),
            "empty": self.empty,
        }


@dataclass(frozen=True, eq=False)
class EscapeWitness:
    """A member of the set whose trajectory leaves it.

    Attributes:
        point: Initial state x in S.
        image: State outside S (A x for discrete time, e^{At} x for continuous).
        slack: Membership slack of the image (positive outside).
        step: Discrete step at which the state is outside.
        time: Continuous time at which the state is outside.
    """

    point: FloatArray
    image: FloatArray
    slack: float
    step: int | None = None
    time: float | None = None

    def to_dict(self) -> dict[str, Any]:
        """Serialize to dictionary."""
        return {
            "point": self.point.tolist(),
            "image": self.image.tolist(),
            "slack": self.slack,
            "step": self.step,
            "time": self.time,
        }

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> EscapeWitness:
        """Create from dictionary."""
        return cls(
            point=_matrix(data["point"]),
            image=_matrix(data.get("image", data["point"])),
            slack=float(data.get("slack", 0.0)),
            step=data.get("step"),
            time=data.get("time"),
        )


@dataclass(frozen=True)
class Refutation:
    """Evidence behind a NotInvariant verdict.

    Attributes:
        failed_conditions: Names of the conditions that failed.
        failed_index: First infeasible LP subproblem (row or generator), if any.
        witness: Escape witness when one was constructed or sampled.
        trace: Numeric evidence (LMI eigenvalues, interval ends, LP duals).
    """

    failed_conditions: tuple[str, ...] = ()
    failed_index: int | None = None
    witness: EscapeWitness | None = None
    trace: dict[str, Any] = field(default_factory=dict)

    def to_dict(self) -> dict[str, Any]:
        """Serialize to dictionary."""
        return {
            "failed_conditions": list(self.failed_conditions),
            "failed_index": self.failed_index,
            "witness": self.witness.to_dict() if self.witness else None,
            "trace": self.trace,
        }


@dataclass(frozen=True)
class CheckReport:
    """Verdict of a checker with its certificate or refutation.

    Invariant reports always carry a certificate that re-verified
    algebraically; NotInvariant reports carry a refutation.
    """

    verdict: Verdict
    checker: str
    tolerances: Tolerances
    certificate: Certificate | None = None
    refutation: Refutation | None = None
    diagnostics: dict[str, Any] = field(default_factory=dict)
    elapsed_seconds: float = 0.0

    @property
    def is_invariant(self) -> bool:
        """Return True for an Invariant verdict."""
        return self.verdict is Verdict.INVARIANT

    @property
    def witness(self) -> EscapeWitness | None:
        """Return the escape witness, if any."""
        return self.refutation.witness if self.refutation else None

    def to_dict(self) -> dict[str, Any]:
        """Serialize to dictionary."""
        return {
            "verdict": str(self.verdict),
            "checker": self.checker,
            "certificate": self.certificate.to_dict() if self.certificate else None,
            "refutation": self.refutation.to_dict() if self.refutation else None,
            "witness": self.witness.to_dict() if self.witness else None,
            "diagnostics": self.diagnostics,
            "tolerances": self.tolerances.to_dict(),
            "elapsed_seconds": self.elapsed_seconds,
        }


@dataclass(frozen=True)
class CertificateCheck:
    """Outcome of algebraically re-verifying a certificate."""

    valid: bool
    residuals: dict[str, float] = field(default_factory=dict)
    reason: str | None = None

    def to_dict(self) -> dict[str, Any]:
        """Serialize to dictionary."""
        return {"valid": self.valid, "residuals": self.residuals, "reason": self.reason}
