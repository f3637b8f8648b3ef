"""Tent pitching space-time mesh generator and verifier."""

from ._core import (
    ConfigError,
    DegeneracyError,
    Error,
    GroundMesh,
    InvariantViolation,
    MeshError,
    ParseError,
    RunResult,
    SpaceTimeMesh,
    StallError,
    UnsupportedError,
    pitch,
    verify,
)

__all__ = [
    "ConfigError",
    "DegeneracyError",
    "Error",
    "GroundMesh",
    "InvariantViolation",
    "MeshError",
    "ParseError",
    "RunResult",
    "SpaceTimeMesh",
    "StallError",
    "UnsupportedError",
    "pitch",
    "verify",
]
