"""
Verify Command
Runs the acceptance suite and reports one row per criterion
"""

from __future__ import annotations

import logging

from src.acceptance import format_details, run_suite
from src.utils.export_data import Report

logger = logging.getLogger(__name__)


def run(args, config) -> Report:
    quick = bool(getattr(args, "quick", False))
    results = run_suite(config.fourier_settings(), config.grid, config.threads, quick=quick)

    report = Report("verify", {"quick": quick, "tol": config.tol, "depth": config.depth, "grid": config.grid})
    for result in results:
        report.add_row(
            criterion=result.number,
            name=result.name,
            passed=result.passed,
            details=format_details(result.details),
        )
    report.flags = {f"criterion_{result.number}": result.passed for result in results}

    failed = [result.number for result in results if not result.passed]
    if failed:
        logger.error(f"Acceptance failures: {failed}")
    else:
        logger.info(f"All {len(results)} acceptance criteria passed")
    return report
