"""Delimited and JSON output with a self-describing header, plus config parsing.

Every data file starts with ``#`` lines echoing the fully resolved run
configuration as ``key = value`` pairs, so the file itself can be passed back
as ``--config`` to regenerate it.
"""

from __future__ import annotations

import csv
import io
import json
import math
from datetime import datetime, timezone
from pathlib import Path

TIMESTAMP_PREFIX = "# generated: "


def format_value(v) -> str:
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        return repr(float(v)) if math.isfinite(v) else str(float(v))
    if hasattr(v, "item") and not isinstance(v, (list, tuple)):
        return format_value(v.item())
    if isinstance(v, (list, tuple)):
        return " ".join(format_value(x) for x in v)
    if v is None:
        return ""
    return str(v)


def _timestamp() -> str:
    return datetime.now(timezone.utc).strftime("%Y-%m-%dT%H:%M:%SZ")


def render(command: str, config: dict, columns, rows, summary=(), fmt: str = "csv") -> str:
    if fmt == "json":
        doc = {
            "command": command,
            "generated": _timestamp(),
            "config": {k: config[k] for k in config},
            "summary": list(summary),
            "columns": list(columns),
            "rows": [list(r) for r in rows],
        }
        return json.dumps(doc, indent=2, default=_json_default) + "\n"
    buf = io.StringIO()
    buf.write(f"# alleemap {command}\n")
    buf.write(f"{TIMESTAMP_PREFIX}{_timestamp()}\n")
    buf.write(f"# command = {command}\n")
    for key, value in config.items():
        buf.write(f"# {key} = {format_value(value)}\n")
    for line in summary:
        buf.write(f"# summary: {line}\n")
    buf.write(f"# columns: {','.join(columns)}\n")
    writer = csv.writer(buf, lineterminator="\n")
    for row in rows:
        writer.writerow([format_value(v) for v in row])
    return buf.getvalue()


def _json_default(obj):
    if isinstance(obj, complex):
        return [obj.real, obj.imag]
    if hasattr(obj, "item"):
        return obj.item()
    raise TypeError(f"cannot serialise {type(obj).__name__}")


def write(text: str, path: str | Path | None, stream) -> None:
    if path is None:
        stream.write(text)
        return
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(text)


def load_config(path: str | Path) -> dict:
    """Read ``key = value`` pairs from a config file or a previous output file.

    Blank lines and comment-only lines are skipped; a leading ``#`` is
    stripped so output headers double as configs.  JSON outputs are read
    from their ``config`` object.
    """
    text = Path(path).read_text()
    if text.lstrip().startswith("{"):
        doc = json.loads(text)
        return {k: format_value(v) for k, v in doc.get("config", {}).items()}
    out = {}
    for raw_line in text.splitlines():
        line = raw_line.strip()
        if line.startswith("#"):
            line = line.lstrip("#").strip()
        if " = " not in line and not (line.count("=") == 1 and "," not in line):
            continue
        key, _, value = line.partition("=")
        key = key.strip()
        if not key.replace("_", "").replace("-", "").isalnum():
            continue
        out[key.replace("-", "_")] = value.strip()
    return out
