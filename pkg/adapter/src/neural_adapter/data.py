"""Readers for the toolkit's dataset files.

The adapter never touches raw corpora; its only inputs are the pipeline's
sequence-example JSONL (`{"source", "target", ...}`) and training-pair
JSONL (`{"concepts", "sentence", "label"}`).
"""

from __future__ import annotations

import json
from pathlib import Path


class AdapterDataError(Exception):
    pass


def load_examples(path) -> list[dict]:
    """Seq2seq examples; aborts with the line number on a bad record."""
    path = Path(path)
    try:
        lines = path.read_text(encoding="utf-8").splitlines()
    except OSError as exc:
        raise AdapterDataError(f"cannot read examples file {path}: {exc}") from exc
    out = []
    for lineno, line in enumerate(lines, start=1):
        if not line.strip():
            continue
        try:
            row = json.loads(line)
        except json.JSONDecodeError as exc:
            raise AdapterDataError(f"{path}:{lineno}: invalid JSON: {exc}") from exc
        if "source" not in row or "target" not in row:
            raise AdapterDataError(f"{path}:{lineno}: example needs 'source' and 'target' fields")
        if row["target"]:
            out.append({"source": row["source"], "target": row["target"]})
    if not out:
        raise AdapterDataError(f"{path}: no trainable examples (empty file or all targets empty)")
    return out


def load_pairs(path) -> list[dict]:
    path = Path(path)
    try:
        lines = path.read_text(encoding="utf-8").splitlines()
    except OSError as exc:
        raise AdapterDataError(f"cannot read pairs file {path}: {exc}") from exc
    out = []
    for lineno, line in enumerate(lines, start=1):
        if not line.strip():
            continue
        try:
            row = json.loads(line)
        except json.JSONDecodeError as exc:
            raise AdapterDataError(f"{path}:{lineno}: invalid JSON: {exc}") from exc
        if not {"concepts", "sentence", "label"} <= set(row):
            raise AdapterDataError(f"{path}:{lineno}: pair needs 'concepts', 'sentence', 'label'")
        if row["label"] not in (0, 1):
            raise AdapterDataError(f"{path}:{lineno}: label must be 0 or 1")
        out.append(row)
    if not out:
        raise AdapterDataError(f"{path}: no training pairs found")
    labels = {r["label"] for r in out}
    if labels != {0, 1}:
        raise AdapterDataError(f"{path}: training pairs must contain both labels, found {sorted(labels)}")
    return out
