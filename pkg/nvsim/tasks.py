import logging
from typing import Any, Dict, List, Optional

from celery import shared_task

from .artifacts import jsonable
from .errors import ConfigError, NotConverged, NumericalError, NvsimError
from .run_config import build_run_config
from .runner import run_scenario

logger = logging.getLogger(__name__)


@shared_task(bind=True)
def run_scenario_task(
    self,
    config: Dict[str, Any],
    overrides: Optional[List[str]] = None,
    out_dir: Optional[str] = None,
    scenario: Optional[str] = None,
    strict: bool = False,
) -> Dict[str, Any]:
    """
    Celery task running one scenario from an already-loaded config mapping.

    Failures are reported in the returned dictionary, never raised, so the
    result backend always holds a status.
    """
    logs: List[str] = ["Worker started processing task..."]
    result: Dict[str, Any] = {
        "task_id": getattr(self.request, "id", None),
        "status": "running",
        "scenario": scenario or config.get("scenario"),
        "artifacts": [],
        "logs": logs,
        "error": None,
    }

    def fail(status: str, message: str) -> Dict[str, Any]:
        logs.append(f"❌ {message}")
        logger.error("Task %s failed (%s): %s", result["task_id"], status, message)
        result.update(status=status, error=message)
        return result

    try:
        cfg = build_run_config(config, overrides or [], scenario)
        result["scenario"] = cfg.scenario
        logs.append(f"Config validated: scenario '{cfg.scenario}', model '{cfg.model}'")
        outcome = run_scenario(cfg, out_dir=out_dir, strict=strict)
    except ConfigError as e:
        return fail("config_error", f"{e.key}: {e}" if e.key else str(e))
    except NotConverged as e:
        return fail("not_converged", str(e))
    except NumericalError as e:
        return fail("numerical_error", str(e))
    except NvsimError as e:
        return fail("error", str(e))
    except Exception as e:
        logger.exception("Unexpected failure in run_scenario_task")
        return fail("error", f"Unexpected error: {e}")

    logs.append(f"✅ Finished in {outcome.wall_time:.2f}s")
    result.update(
        status="completed",
        artifacts=outcome.artifacts,
        summary=jsonable(outcome.summary),
        wall_time=outcome.wall_time,
    )
    return result
