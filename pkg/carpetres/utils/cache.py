"""
Content-addressed result cache.

Each result is one JSON file under ``<cache_dir>/<key[:2]>/<key>.json``.
Keys hash every input that affects the value. Writes go to a temporary file
in the same directory and are renamed into place, so concurrent writers never
leave a partial entry behind.
"""

import hashlib
import json
import os
import tempfile
from pathlib import Path
from typing import Any, Optional

from carpetres.utils.logger import log


class ResultCache:
    """JSON result cache keyed by a content hash of the inputs."""

    def __init__(self, cache_dir: Path | str, enabled: bool = True):
        self.cache_dir = Path(cache_dir)
        self.enabled = enabled

    @staticmethod
    def key(**inputs: Any) -> str:
        """Hash the inputs as canonical JSON (sorted keys, repr floats)."""
        canonical = json.dumps(inputs, sort_keys=True, separators=(",", ":"), default=str)
        return hashlib.sha256(canonical.encode("utf-8")).hexdigest()

    def path_for(self, key: str) -> Path:
        return self.cache_dir / key[:2] / f"{key}.json"

    def get(self, key: str) -> Optional[dict]:
        """Return the cached payload, or None when absent, disabled or corrupt."""
        if not self.enabled:
            return None
        path = self.path_for(key)
        if not path.exists():
            return None
        try:
            payload = json.loads(path.read_text(encoding="utf-8"))
            if not isinstance(payload, dict):
                raise ValueError("cache entry is not a JSON object")
        except (OSError, ValueError) as e:
            log.warning(f"Discarding corrupt cache entry {path.name}: {e}")
            path.unlink(missing_ok=True)
            return None
        log.debug(f"Cache hit: {path}")
        return payload

    def put(self, key: str, payload: dict) -> Optional[Path]:
        """Store a payload atomically; returns the entry path (None when disabled)."""
        if not self.enabled:
            return None
        path = self.path_for(key)
        path.parent.mkdir(parents=True, exist_ok=True)
        fd, tmp_name = tempfile.mkstemp(dir=path.parent, prefix=".tmp-", suffix=".json")
        try:
            with os.fdopen(fd, "w", encoding="utf-8") as fh:
                json.dump(payload, fh, sort_keys=True)
            os.replace(tmp_name, path)
        except BaseException:
            Path(tmp_name).unlink(missing_ok=True)
            raise
        log.debug(f"Cached result: {path}")
        return path
