"""
Analysis endpoints for Trace Fields.

Each command takes a GroupFile body and answers with a ReportFile. Domain
errors still produce a full report, returned with status 422.
"""

import logging

from fastapi import APIRouter, HTTPException, Query
from fastapi.concurrency import run_in_threadpool
from fastapi.responses import JSONResponse

from ..config import settings
from ..corpus import CORPORA, build_corpus
from ..formats import GroupFile, ReportFile
from ..services.analysis_service import AnalysisService

logger = logging.getLogger(__name__)

router = APIRouter()
service = AnalysisService()


@router.get("/commands")
async def list_commands():
    """Available analysis commands and corpora."""
    return {"commands": service.commands, "corpora": sorted(CORPORA)}


@router.get("/corpus/{name}", response_model=GroupFile)
async def get_corpus(name: str, seed: int = settings.RANDOM_SEED):
    """
    Build a named test group.

    Args:
        name: corpus name (see ``/analysis/commands``)
        seed: seed for the hidden conjugator and random generators
    """
    if name not in CORPORA:
        raise HTTPException(status_code=404, detail=f"Unknown corpus: {name}")
    corpus = await run_in_threadpool(build_corpus, name, seed)
    return GroupFile.from_matrices(corpus.generators, assumed_discrete=corpus.assumed_discrete)


@router.post("/{command}", response_model=ReportFile)
async def run_command(
    command: str,
    group_file: GroupFile,
    seed: int = settings.RANDOM_SEED,
    max_length: int | None = Query(default=None, ge=1, le=12),
    assume_discrete: bool = False,
):
    """
    Run an analysis command on a group.

    Args:
        command: one of the commands listed by ``/analysis/commands``
        group_file: generators, flags and overrides
        seed: echoed in the report
        max_length: word length override for sampling and searches
        assume_discrete: assert discreteness on top of the file flag
    """
    if command not in service.handlers:
        raise HTTPException(status_code=404, detail=f"Unknown command: {command}")

    overrides = {"max_length": max_length, "assume_discrete": assume_discrete}
    report = await run_in_threadpool(service.run, command, group_file, seed, overrides)
    if not report.ok:
        logger.warning(f"{command} returned domain error {report.error.tag}")
        return JSONResponse(status_code=422, content=report.model_dump(mode="json"))
    return report
