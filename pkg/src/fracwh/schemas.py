"""Pydantic request/response models shared by the runner, the HTTP
service, and the CLI client."""

from __future__ import annotations

from typing import List, Literal, Optional

from pydantic import BaseModel, Field, field_validator

SCHEMA_VERSION = 1

Command = Literal["factorize", "verify", "solve", "pohozaev", "suite"]


class GridParams(BaseModel):
    N: int = 4096
    L: float = 64.0
    X: float = 32.0

    @field_validator("N")
    @classmethod
    def _power_of_two(cls, v):
        if v < 64 or (v & (v - 1)) != 0:
            raise ValueError("N must be a power of two >= 64")
        return v

    @field_validator("L", "X")
    @classmethod
    def _positive(cls, v):
        if v <= 0:
            raise ValueError("grid extents must be positive")
        return v


class Tolerances(BaseModel):
    scale: float = 1.0

    @field_validator("scale")
    @classmethod
    def _positive(cls, v):
        if v <= 0:
            raise ValueError("tolerance scale must be positive")
        return v


class RunConfig(BaseModel):
    command: Command
    symbol: str = "fraclap"
    a: float = 0.5
    m: float = 1.0
    cross: float = 1.0
    grid: GridParams = Field(default_factory=GridParams)
    tolerances: Tolerances = Field(default_factory=Tolerances)
    seed: int = 0
    threads: int = 1
    out_dir: Optional[str] = None
    # factorize
    xi_primes: List[float] = Field(default_factory=lambda: [2.0, 4.0, 8.0])
    dump_slices: bool = False
    # verify
    identity: Optional[str] = None
    data: str = "manufactured"
    # solve
    f: str = "one"
    basis_size: int = 40
    # pohozaev
    nl_kind: Literal["constant", "power", "linear"] = "constant"
    nl_value: float = 1.0
    # suite
    suite: str = "acceptance"

    @field_validator("a")
    @classmethod
    def _a_range(cls, v):
        if not (0.0 < v < 1.0):
            raise ValueError("a must lie in (0,1)")
        return v

    @field_validator("symbol")
    @classmethod
    def _symbol_key(cls, v):
        if v not in ("fraclap", "helmholtz", "varcoef", "anisotropic"):
            raise ValueError(f"unknown symbol key {v!r}")
        return v


class CheckRecord(BaseModel):
    check_id: str
    passed: bool
    description: str = ""
    measures: dict = Field(default_factory=dict)


class ReportBundle(BaseModel):
    schema_version: int = SCHEMA_VERSION
    config: RunConfig
    results: List[CheckRecord]
    passed: bool
    metadata: dict = Field(default_factory=dict)

    def body_json(self) -> str:
        """Deterministic JSON of everything except the metadata field."""
        payload = self.model_dump(exclude={"metadata"})
        import json
        return json.dumps(payload, sort_keys=True, default=str)
