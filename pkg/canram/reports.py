"""JSON report envelope shared by every command, validated against the shipped schema."""
import json
from functools import lru_cache
from importlib import resources
from typing import Any, Dict, List, Optional

import jsonschema

EXIT_OK = 0
EXIT_NEGATIVE = 1
EXIT_USAGE = 2
EXIT_GUARD = 3


@lru_cache(maxsize=None)
def _schema(name: str) -> Dict[str, Any]:
    return json.loads(resources.files("canram.schemas").joinpath(name).read_text("utf-8"))


def report_schema() -> Dict[str, Any]:
    return _schema("report.schema.json")


def build_report(
    command: str,
    exit_code: int,
    outcome: str,
    result: Dict[str, Any],
    server_logs: Optional[List[str]] = None,
    error: Optional[Dict[str, Any]] = None,
) -> Dict[str, Any]:
    report: Dict[str, Any] = {"command": command, "exit_code": exit_code, "outcome": outcome, "result": result}
    if error is not None:
        report["error"] = error
    if server_logs is not None:
        report["server_logs"] = server_logs[-200:]
    jsonschema.validate(report, report_schema())
    return report


def dumps(report: Dict[str, Any]) -> str:
    return json.dumps(report, indent=2, sort_keys=False)


def render_human(report: Dict[str, Any]) -> str:
    """Plain key/value table of the top-level scalar entries of ``result``."""
    lines = [f"{report['command']}: {report['outcome']}"]
    for key, value in report["result"].items():
        if isinstance(value, (dict, list)):
            if isinstance(value, list) and len(value) <= 12 and all(not isinstance(v, (dict, list)) for v in value):
                lines.append(f"  {key:<22} {', '.join(str(v) for v in value)}")
            continue
        lines.append(f"  {key:<22} {value}")
    if "error" in report:
        lines.append(f"  error: {report['error']['message']}")
    return "\n".join(lines)
