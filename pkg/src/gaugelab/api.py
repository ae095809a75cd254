"""HTTP service exposing the scenario runner.

Start it with ``gaugelab serve`` (or ``uvicorn gaugelab.api:app``). The CLI
talks to it when given ``--server URL``; without that flag the CLI calls the
same functions in-process.
"""

from __future__ import annotations

from typing import Any, Optional

from fastapi import FastAPI, HTTPException
from pydantic import BaseModel, Field

from . import __version__
from . import scenarios
from .errors import ConfigError, GaugeLabError


class ClaimSpec(BaseModel):
    id: str
    relation: str


class ScenarioInfo(BaseModel):
    name: str
    description: str
    defaults: dict[str, Any]
    claims: list[ClaimSpec]


class RunRequest(BaseModel):
    params: dict[str, Any] = Field(default_factory=dict)
    seed: Optional[int] = None


class ClaimResult(BaseModel):
    id: str
    relation: str
    measured: Any
    tolerance: Any
    comparison: str
    passed: bool
    detail: dict[str, Any]


class RunResponse(BaseModel):
    schema_version: str
    scenario: str
    preamble: str
    params: dict[str, Any]
    seed: int
    environment: dict[str, Any]
    claims: list[ClaimResult]
    passed: bool
    artifacts: list[str]
    wall_time_s: float
    spectra: dict[str, list[list[float]]] = Field(
        description="per spectrum: rows of (eigenvalue, residual)")


class Health(BaseModel):
    status: str
    version: str


app = FastAPI(title="gaugelab", version=__version__)


@app.get("/health", response_model=Health)
def health() -> Health:
    return Health(status="ok", version=__version__)


@app.get("/scenarios", response_model=list[ScenarioInfo])
def list_scenarios() -> list[ScenarioInfo]:
    return [ScenarioInfo(**s) for s in scenarios.list_scenarios()]


@app.post("/scenarios/{name}/run", response_model=RunResponse)
def run_scenario(name: str, request: RunRequest) -> RunResponse:
    if name not in scenarios.SCENARIOS:
        raise HTTPException(status_code=404, detail=f"unknown scenario {name!r}")
    try:
        result = scenarios.run(name, request.params, request.seed)
    except ConfigError as exc:
        raise HTTPException(status_code=422, detail=str(exc))
    except GaugeLabError as exc:
        raise HTTPException(status_code=500, detail=f"{type(exc).__name__}: {exc}")
    spectra = {key: [[float(v), float(r)] for v, r in zip(s.eigenvalues, s.residuals)]
               for key, s in result.spectra.items()}
    return RunResponse(**result.report.to_dict(), wall_time_s=result.wall_time, spectra=spectra)
