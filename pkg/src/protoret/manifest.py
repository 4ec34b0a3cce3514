"""Provenance manifests written next to every CLI output.

A manifest records the merged config, the seeds in play, and checksums of
every input, so a dataset can be traced back to the exact store, index,
and model that produced it. No timestamps: identical runs must produce
byte-identical manifests.
"""

from __future__ import annotations

import hashlib
import json
from pathlib import Path


def sha256_file(path) -> str:
    h = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(1 << 20), b""):
            h.update(chunk)
    return h.hexdigest()


def checksum_input(path) -> dict:
    """Checksum a file, or the canonical members of a store directory."""
    p = Path(path)
    if p.is_dir():
        out = {}
        for name in ("records.jsonl", "meta.json"):
            member = p / name
            if member.exists():
                out[name] = sha256_file(member)
        return out
    return {"sha256": sha256_file(p)}


def manifest_path(output_path) -> Path:
    return Path(str(output_path) + ".manifest.json")


def write_manifest(output_path, command: str, config: dict, inputs: list) -> Path:
    seeds = {k: v for k, v in config.items() if "seed" in k}
    payload = {
        "command": command,
        "config": {k: v for k, v in sorted(config.items())},
        "seeds": seeds,
        "inputs": {str(p): checksum_input(p) for p in inputs if p is not None},
        "output": Path(output_path).name,
    }
    path = manifest_path(output_path)
    path.write_text(json.dumps(payload, indent=1, sort_keys=True) + "\n")
    return path
