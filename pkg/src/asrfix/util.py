"""Shared helpers: key-value config files and JSON/JSONL serialization."""

from __future__ import annotations

import json
from pathlib import Path
from typing import IO, Iterable, Iterator

_ESCAPES = {"n": "\n", "t": "\t", "\\": "\\"}


def _unescape(value: str) -> str:
    out: list[str] = []
    k = 0
    while k < len(value):
        ch = value[k]
        if ch == "\\" and k + 1 < len(value) and value[k + 1] in _ESCAPES:
            out.append(_ESCAPES[value[k + 1]])
            k += 2
        else:
            out.append(ch)
            k += 1
    return "".join(out)


def load_kv_file(path: str | Path) -> dict[str, str]:
    """Parse a UTF-8 key=value file. '#' lines and blank lines are ignored;
    values may embed newlines and tabs as \\n and \\t."""
    config: dict[str, str] = {}
    for lineno, line in enumerate(Path(path).read_text("utf-8").splitlines(), 1):
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        if "=" not in stripped:
            raise ValueError(f"{path}:{lineno}: expected key=value, got {stripped!r}")
        key, _, value = stripped.partition("=")
        config[key.strip()] = _unescape(value.strip())
    return config


def write_json(path: str | Path, obj: object) -> None:
    text = json.dumps(obj, ensure_ascii=False, indent=2)
    Path(path).write_text(text + "\n", "utf-8")


def dump_json(obj: object) -> str:
    return json.dumps(obj, ensure_ascii=False, indent=2)


def read_jsonl(path: str | Path) -> Iterator[tuple[int, dict]]:
    """Yield (line_number, record) for every non-blank line."""
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, 1):
            line = line.strip()
            if not line:
                continue
            try:
                record = json.loads(line)
            except json.JSONDecodeError as exc:
                raise ValueError(f"{path}:{lineno}: invalid JSON: {exc}") from None
            yield lineno, record


def write_jsonl_line(fh: IO[str], obj: dict) -> None:
    fh.write(json.dumps(obj, ensure_ascii=False))
    fh.write("\n")


def write_jsonl(path: str | Path, rows: Iterable[dict]) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for row in rows:
            write_jsonl_line(fh, row)


def parse_bool(value: str) -> bool:
    lowered = value.strip().lower()
    if lowered in ("1", "true", "yes", "on"):
        return True
    if lowered in ("0", "false", "no", "off"):
        return False
    raise ValueError(f"not a boolean: {value!r}")
