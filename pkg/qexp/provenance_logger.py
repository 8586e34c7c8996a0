"""Provenance log of resolution steps and CLI runs.

Every event is one JSON object per line. Steps record the pipeline stage,
the rewrite rule, and the site it fired at; runs record the subcommand and
its verdict. With timestamps disabled the log is byte-reproducible.
"""

import json
import logging
from datetime import datetime, timezone
from pathlib import Path
from typing import Any, Dict, List, Optional

from qexp.resolution import ResolutionStep

logger = logging.getLogger(__name__)


class ProvenanceLogger:
    """Append-only JSON-lines event log."""

    def __init__(self, log_path: Path, timestamps: bool = True):
        """Initialize provenance logger.

        Args:
            log_path: Path of the log file
            timestamps: Add a UTC timestamp to every event
        """
        self.log_path = Path(log_path)
        self.timestamps = timestamps
        self.log_path.parent.mkdir(parents=True, exist_ok=True)

    def _event(self, kind: str, **fields: Any) -> Dict[str, Any]:
        event: Dict[str, Any] = {}
        if self.timestamps:
            event["timestamp"] = datetime.now(timezone.utc).isoformat().replace("+00:00", "Z")
        event["kind"] = kind
        event.update(fields)
        return event

    def log_step(self, stage: str, lemma: str, site: str, details: Optional[Dict[str, Any]] = None):
        """Log one rewrite of the resolution pipeline.

        Args:
            stage: Pipeline stage (e.g., "redundancy")
            lemma: Rewrite rule that fired
            site: Where it fired (letter and position)
            details: Additional context
        """
        self._append(self._event("step", stage=stage, lemma=lemma, site=site, details=details or {}))

    def record(self, step: ResolutionStep):
        """Callback for ``special_resolution(on_step=...)``."""
        self.log_step(step.stage, step.lemma, step.site, {"branches": step.branches})

    def log_run(self, command: str, status: str, details: Optional[Dict[str, Any]] = None):
        self._append(self._event("run", command=command, status=status, details=details or {}))

    def _append(self, event: Dict[str, Any]):
        try:
            with open(self.log_path, "a", encoding="utf-8") as f:
                f.write(json.dumps(event, sort_keys=True, ensure_ascii=False) + "\n")
        except Exception as e:
            # Don't abort a run on logging errors
            logger.warning("Failed to write provenance log %s: %s", self.log_path, e)

    def get_recent_steps(self, limit: int = 100, stage: Optional[str] = None) -> List[Dict[str, Any]]:
        """Most recent step events, optionally only those of one stage."""
        if not self.log_path.exists():
            return []
        events = []
        try:
            with open(self.log_path, "r", encoding="utf-8") as f:
                for line in f:
                    try:
                        event = json.loads(line.strip())
                    except json.JSONDecodeError:
                        continue
                    if event.get("kind") != "step":
                        continue
                    if stage and event.get("stage") != stage:
                        continue
                    events.append(event)
        except Exception:
            return []
        return events[-limit:]

    def get_runs(self, limit: int = 100) -> List[Dict[str, Any]]:
        if not self.log_path.exists():
            return []
        runs = []
        with open(self.log_path, "r", encoding="utf-8") as f:
            for line in f:
                try:
                    event = json.loads(line.strip())
                except json.JSONDecodeError:
                    continue
                if event.get("kind") == "run":
                    runs.append(event)
        return runs[-limit:]


if __name__ == "__main__":
    import tempfile

    with tempfile.TemporaryDirectory() as tmp:
        log = ProvenanceLogger(Path(tmp) / "provenance.log", timestamps=False)
        log.log_step("redundancy", "cases 1-3", "d1: case 2 at 0", {"branches": 1})
        log.log_run("resolve", "ok", {"resolvents": 1})
        print(json.dumps(log.get_recent_steps(), indent=2))
