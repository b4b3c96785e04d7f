"""Run the acceptance suite for the pattern-complexity toolkit."""

import json
import sys
from datetime import datetime
from pathlib import Path

from evaluation.eval_acceptance import AcceptanceEvaluator
from logger.logging import get_logger, log_banner, setup_logging
from utils.config_loader import ConfigLoader

config = ConfigLoader()
setup_logging(
    log_level=config.get("logging.level", "INFO"),
    format=config.get("logging.format", "%(asctime)s - %(levelname)s - %(message)s"),
)
logger = get_logger(__name__)


def run_full_evaluation() -> dict:
    """Run every acceptance check and write a summary report."""
    results = {}
    start_time = datetime.now()

    log_banner(logger, "PATTERN COMPLEXITY TOOLKIT - ACCEPTANCE SUITE")
    try:
        acceptance = AcceptanceEvaluator().evaluate()
        results["acceptance"] = acceptance
        failed = [name for name, r in acceptance["checks"].items() if not r.get("passed")]
        logger.info(f"Passed: {acceptance['passed']}/{acceptance['total']}")
        if failed:
            logger.warning(f"Failed checks: {', '.join(failed)}")
    except Exception as e:
        logger.error(f"Acceptance evaluation failed: {e}")
        results["acceptance"] = {"error": str(e)}

    elapsed = (datetime.now() - start_time).total_seconds()
    results["metadata"] = {
        "timestamp": start_time.isoformat(),
        "duration_seconds": round(elapsed, 1),
        "settings": {
            "search": config.get("search", {}),
            "complexity": config.get("complexity", {}),
            "tiling": config.get("tiling", {}),
        },
    }

    log_banner(logger, f"EVALUATION COMPLETE in {elapsed:.1f}s")

    output_path = Path(__file__).parent / "results.json"
    with open(output_path, "w") as f:
        json.dump(results, f, indent=2, default=str)
    logger.info(f"Results saved to {output_path}")

    return results


def all_passed(results: dict) -> bool:
    acceptance = results.get("acceptance", {})
    return "error" not in acceptance and acceptance.get("passed") == acceptance.get("total")


if __name__ == "__main__":
    sys.exit(0 if all_passed(run_full_evaluation()) else 1)
