"""Dataset manifest and cached downloads.

A manifest maps dataset names to a URL, an optional sha256 pin, and the
directedness/weight flags needed to parse the edge list. Files land in a
local cache (env var SPARSEKIT_CACHE, default ~/.cache/sparsekit) and are
verified before use; downloads go to a temp file and move into place only
after the checksum passes. Entries without a pinned checksum are accepted
with a warning and the computed hash lands in a sidecar file, so the first
fetch on a trusted network effectively pins it.
"""

from __future__ import annotations

import csv
import hashlib
import os
import urllib.request
import warnings
from dataclasses import dataclass
from pathlib import Path

from .graph import Graph, GraphError, load_edge_list


@dataclass(frozen=True)
class DatasetInfo:
    name: str
    url: str
    sha256: str | None
    directed: bool
    weighted: bool


DEFAULT_MANIFEST = {
    info.name: info
    for info in [
        DatasetInfo(
            "ego-Facebook",
            "https://snap.stanford.edu/data/facebook_combined.txt.gz",
            None, directed=False, weighted=False,
        ),
        DatasetInfo(
            "ca-GrQc",
            "https://snap.stanford.edu/data/ca-GrQc.txt.gz",
            None, directed=False, weighted=False,
        ),
        DatasetInfo(
            "wiki-Vote",
            "https://snap.stanford.edu/data/wiki-Vote.txt.gz",
            None, directed=True, weighted=False,
        ),
        DatasetInfo(
            "email-Enron",
            "https://snap.stanford.edu/data/email-Enron.txt.gz",
            None, directed=False, weighted=False,
        ),
    ]
}


def load_manifest(path) -> dict:
    """Read a manifest CSV: name,url,sha256,directed,weighted (header row
    required; empty sha256 means unpinned)."""
    out = {}
    with open(path, "r", encoding="utf-8", newline="") as f:
        reader = csv.DictReader(f)
        required = {"name", "url", "sha256", "directed", "weighted"}
        if reader.fieldnames is None or required - set(reader.fieldnames):
            raise GraphError(f"{path}: manifest needs columns {sorted(required)}")
        for row in reader:
            name = row["name"].strip()
            out[name] = DatasetInfo(
                name=name,
                url=row["url"].strip(),
                sha256=row["sha256"].strip() or None,
                directed=row["directed"].strip().lower() in ("1", "true", "yes"),
                weighted=row["weighted"].strip().lower() in ("1", "true", "yes"),
            )
    return out


def _as_manifest(manifest) -> dict:
    if manifest is None:
        return DEFAULT_MANIFEST
    if isinstance(manifest, dict):
        return manifest
    return load_manifest(manifest)


def dataset_info(name: str, manifest=None) -> DatasetInfo:
    manifest = _as_manifest(manifest)
    if name not in manifest:
        raise GraphError(f"unknown dataset {name!r}; known: {', '.join(sorted(manifest))}")
    return manifest[name]


def cache_dir() -> Path:
    root = os.environ.get("SPARSEKIT_CACHE")
    if root:
        return Path(root)
    return Path.home() / ".cache" / "sparsekit"


def _sha256(path: Path) -> str:
    h = hashlib.sha256()
    with open(path, "rb") as f:
        for chunk in iter(lambda: f.read(1 << 20), b""):
            h.update(chunk)
    return h.hexdigest()


def _verify(path: Path, info: DatasetInfo) -> None:
    digest = _sha256(path)
    if info.sha256 is None:
        sidecar = path.with_suffix(path.suffix + ".sha256")
        if sidecar.exists():
            recorded = sidecar.read_text(encoding="utf-8").strip()
            if recorded != digest:
                raise GraphError(
                    f"{info.name}: cached file hash {digest} does not match the "
                    f"previously recorded {recorded}; refusing to use it"
                )
        else:
            warnings.warn(
                f"dataset {info.name} has no pinned checksum; recording sha256={digest}",
                stacklevel=3,
            )
            sidecar.write_text(digest + "\n", encoding="utf-8")
        return
    if digest != info.sha256:
        raise GraphError(
            f"{info.name}: checksum mismatch (expected {info.sha256}, got {digest})"
        )


def fetch_dataset(name: str, manifest=None, timeout: float = 60.0) -> Path:
    """Return a local path to the dataset's edge list, downloading it into
    the cache on first use. Raises on checksum mismatch or network failure,
    leaving any existing cache entry untouched."""
    info = dataset_info(name, manifest)
    filename = info.url.rstrip("/").rsplit("/", 1)[-1]
    target_dir = cache_dir() / info.name
    target = target_dir / filename
    if target.exists():
        _verify(target, info)
        return target
    target_dir.mkdir(parents=True, exist_ok=True)
    tmp = target.with_suffix(target.suffix + ".part")
    try:
        with urllib.request.urlopen(info.url, timeout=timeout) as resp, open(tmp, "wb") as out:
            while True:
                chunk = resp.read(1 << 20)
                if not chunk:
                    break
                out.write(chunk)
    except Exception as exc:
        if tmp.exists():
            tmp.unlink()
        raise GraphError(f"failed to download {info.name} from {info.url}: {exc}") from exc
    try:
        _verify(tmp, info)
    except GraphError:
        tmp.unlink()
        raise
    tmp.replace(target)
    # the sidecar, if any, was written against the temp name; move it too
    side_tmp = tmp.with_suffix(tmp.suffix + ".sha256")
    if side_tmp.exists():
        side_tmp.replace(target.with_suffix(target.suffix + ".sha256"))
    return target


def load_dataset(name: str, manifest=None) -> Graph:
    """Fetch (or reuse) a dataset and parse it with its manifest flags."""
    info = dataset_info(name, manifest)
    path = fetch_dataset(name, manifest)
    return load_edge_list(path, directed=info.directed, weighted=info.weighted)
