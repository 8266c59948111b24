"""HTTP front end: each runner command is a POST endpoint taking a
RunConfig body and returning the ReportBundle."""

from __future__ import annotations

from fastapi import FastAPI, HTTPException

from .schemas import Command, ReportBundle, RunConfig
from .runner import run

app = FastAPI(title="fracwh",
              description="Wiener-Hopf factorization and fractional "
                          "Dirichlet identity verification service")


@app.get("/health")
def health() -> dict:
    return {"status": "ok"}


def _execute(cfg: RunConfig) -> ReportBundle:
    try:
        return run(cfg)
    except (ValueError, KeyError) as exc:
        raise HTTPException(status_code=422, detail=str(exc))
    except Exception as exc:  # numerical failure inside a check
        raise HTTPException(status_code=500, detail=str(exc))


def _endpoint(command: Command):
    def handler(config: RunConfig) -> ReportBundle:
        if config.command != command:
            config = config.model_copy(update={"command": command})
        return _execute(config)
    handler.__name__ = command
    return handler


for _cmd in ("factorize", "verify", "solve", "pohozaev", "suite"):
    app.post(f"/{_cmd}", response_model=ReportBundle)(_endpoint(_cmd))
