"""Bundled example corpora.

``sample``     50 synthetic records, quick to run end to end.
``synthetic``  ~200 synthetic records over three venue series, 2010-2018,
               used for the temporal holdout (cutoff 2016).
"""

from __future__ import annotations

import json
from importlib import resources
from pathlib import Path

from .ingest import DatasetManifest, PublicationRecord, load_manifest, read_records, serialize_records
from .synthetic import CorpusSpec, generate_corpus

NAMES = ("sample", "synthetic")

# the bundled files are exactly generate_corpus(SPECS[name]); see tests/test_datasets.py
SPECS = {
    "sample": CorpusSpec(n_groups=4, seed=65),
    "synthetic": CorpusSpec(),
}


def paths(name: str) -> tuple[Path, Path]:
    """(records, manifest) file paths of a bundled corpus."""
    if name not in NAMES:
        raise ValueError(f"unknown dataset {name!r}; choose from {NAMES}")
    root = resources.files("scholarcomm") / "data"
    return Path(str(root / f"{name}_records.jsonl")), Path(str(root / f"{name}_manifest.json"))


def load(name: str) -> tuple[list[PublicationRecord], DatasetManifest]:
    records_path, manifest_path = paths(name)
    records, diagnostics = read_records(records_path)
    if diagnostics:
        raise ValueError(f"bundled corpus {name!r} has invalid lines: {diagnostics[0]}")
    return records, load_manifest(manifest_path)


def render(name: str) -> tuple[bytes, str]:
    """Regenerate the bytes of a bundled corpus: (records JSONL, manifest JSON)."""
    records, manifest = generate_corpus(SPECS[name])
    return serialize_records(records), json.dumps(manifest.to_dict(), indent=2, sort_keys=True) + "\n"


if __name__ == "__main__":
    for name in NAMES:
        records_path, manifest_path = paths(name)
        data, manifest = render(name)
        records_path.write_bytes(data)
        manifest_path.write_text(manifest, encoding="utf-8")
        print(records_path, manifest_path)
