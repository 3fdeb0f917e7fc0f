# ---------------------------------------------------------------------------
# File    : api/main.py
# Purpose : FastAPI front end for the arc-persistence toolkit: runs the CLI
#           commands on scenarios posted as JSON.
# Version : 1.0
# License : MIT
# SPDX-License-Identifier: MIT
# ---------------------------------------------------------------------------
from fastapi import FastAPI, HTTPException
from fastapi.middleware.cors import CORSMiddleware
from pydantic import BaseModel, Field
from typing import Any, Dict, List, Optional
import logging
import sys
from pathlib import Path

# Add src to path for imports
sys.path.insert(0, str(Path(__file__).parent.parent))
from src import config
from src.cli import COMMANDS, RunFlags, run
from src.errors import ArcPersistError, PrecisionExhausted
from src.report import render_json
from src.scenario import scenario_from_dict

logging.basicConfig(level=config.LOG_LEVEL)
logger = logging.getLogger(__name__)

VERSION = "1.0.0"

app = FastAPI(
    title="Arc Persistence API",
    description="Persistence invariants of arcs on singular varieties, computed exactly",
    version=VERSION,
    docs_url="/docs",
    redoc_url="/redoc"
)

app.add_middleware(
    CORSMiddleware,
    allow_origins=["*"],
    allow_credentials=True,
    allow_methods=["*"],
    allow_headers=["*"],
)

# ============================================================================
# REQUEST/RESPONSE MODELS
# ============================================================================

class RunRequest(BaseModel):
    """One command on one scenario (the scenario file contents as an object)"""
    command: str = Field(..., description="order | sing | diff | nash | persist | compare | zariski | selftest")
    scenario: Optional[Dict[str, Any]] = Field(None, description="Scenario object (same schema as the files)")
    precision: Optional[int] = Field(None, ge=1, description="Arc precision override")
    max_steps: Optional[int] = Field(None, ge=0, description="Directed blow-up limit")
    oracle: bool = Field(False, description="Cross-check persistence with the blow-up oracle")
    characteristic: Optional[int] = Field(None, ge=0, description="Field characteristic override")

    class Config:
        json_schema_extra = {
            "example": {
                "command": "persist",
                "scenario": {
                    "name": "cusp",
                    "variables": ["x", "y"],
                    "variety": {"equations": ["x^2 - y^3"]},
                    "arcs": {"phi": {"x": [0, 0, 0, 1], "y": [0, 0, 1], "precision": 12}}
                },
                "oracle": True
            }
        }


class CellResponse(BaseModel):
    item: str
    quantity: str
    value: Any
    provenance: str


class RunResponse(BaseModel):
    command: str
    scenario: str
    flags: Dict[str, Any]
    cells: List[CellResponse]
    status: int


class HealthResponse(BaseModel):
    """Health check response"""
    status: str
    version: str
    service: str

# ============================================================================
# ENDPOINTS
# ============================================================================

@app.get("/", response_model=HealthResponse)
async def root():
    """Root endpoint - health check"""
    return {"status": "healthy", "version": VERSION, "service": "Arc Persistence API"}


@app.get("/health", response_model=HealthResponse)
async def health_check():
    """Health check endpoint for container orchestration"""
    return {"status": "healthy", "version": VERSION, "service": "Arc Persistence API"}


@app.post("/api/v1/run", response_model=RunResponse)
def run_command(request: RunRequest):
    """
    Run one command on a posted scenario.

    The status field follows the command line exit codes:
    0 success, 1 mismatch, 3 inconclusive.  Invalid scenarios are rejected with 400.
    """
    if request.command not in COMMANDS:
        raise HTTPException(status_code=400, detail=f"Unknown command {request.command!r}")
    try:
        scenario = None
        if request.scenario is not None:
            scenario = scenario_from_dict(request.scenario, characteristic=request.characteristic,
                                          precision=request.precision)
        flags = RunFlags(request.precision, request.max_steps, "json", request.oracle,
                         request.characteristic)
        report = run(request.command, scenario, flags)
    except PrecisionExhausted as e:
        raise HTTPException(status_code=422, detail={"inconclusive": str(e),
                                                     "retry_precision": e.retry_precision})
    except ArcPersistError as e:
        raise HTTPException(status_code=400, detail=str(e))
    except Exception as e:
        logger.exception("run failed")
        raise HTTPException(status_code=500, detail=f"Internal error: {str(e)}")

    return {
        "command": report.command,
        "scenario": report.scenario,
        "flags": {k: render_json(v) for k, v in report.flags.items()},
        "cells": [{"item": c.item, "quantity": c.quantity, "value": render_json(c.value),
                   "provenance": c.provenance} for c in report.cells],
        "status": int(report.status),
    }


@app.get("/api/v1/commands")
async def commands_info():
    """
    Get information about the available commands
    """
    return {
        "commands": {
            "order": "Hironaka order at declared points and orders along arcs",
            "sing": "Singular-locus membership; full F_p enumeration in characteristic p",
            "diff": "Differential saturation with Hasse derivatives",
            "nash": "Nash multiplicity sequence along the directed blow-ups",
            "persist": "Persistence r, rho and their normalizations by the closed formula",
            "compare": "Transversality checks and persistence comparison for a finite morphism",
            "zariski": "Multiplicity formula on fibers of a plane curve over a line",
            "selftest": "Closed formula against the blow-up oracle on the curated suite"
        },
        "exit_status": {
            "0": "success",
            "1": "mathematical mismatch",
            "2": "usage or parse error",
            "3": "inconclusive at the given precision"
        },
        "conventions": {
            "rationals": "rendered as 'p/q' strings",
            "infinity": "'inf'",
            "inconclusive": "{'inconclusive': N}"
        }
    }
