import hashlib
import urllib.request

import pytest

from sparsekit import datasets
from sparsekit.graph import GraphError, save_edge_list
from sparsekit.generators import two_triangles, triangle
from sparsekit.datasets import (
    DEFAULT_MANIFEST,
    DatasetInfo,
    cache_dir,
    dataset_info,
    fetch_dataset,
    load_dataset,
    load_manifest,
)


@pytest.fixture
def local_dataset(tmp_path, monkeypatch):
    """A manifest entry whose URL is a local file, plus an isolated cache."""
    monkeypatch.setenv("SPARSEKIT_CACHE", str(tmp_path / "cache"))
    src = tmp_path / "src" / "toy.txt"
    src.parent.mkdir()
    save_edge_list(two_triangles(), src)
    digest = hashlib.sha256(src.read_bytes()).hexdigest()
    info = DatasetInfo("toy", src.as_uri(), digest, directed=False, weighted=False)
    return {"toy": info}, src, digest


def test_cache_dir_env_override(monkeypatch, tmp_path):
    monkeypatch.setenv("SPARSEKIT_CACHE", str(tmp_path / "c"))
    assert cache_dir() == tmp_path / "c"
    monkeypatch.delenv("SPARSEKIT_CACHE")
    assert cache_dir().name == "sparsekit"


def test_default_manifest_flags():
    fb = dataset_info("ego-Facebook")
    assert fb.directed is False and fb.weighted is False
    assert dataset_info("wiki-Vote").directed is True


def test_unknown_dataset_lists_known():
    with pytest.raises(GraphError, match="ego-Facebook"):
        dataset_info("no-such-graph")


def test_manifest_csv_parsing(tmp_path):
    p = tmp_path / "manifest.csv"
    p.write_text(
        "name,url,sha256,directed,weighted\n"
        "a,file:///a.txt,,true,no\n"
        "b,file:///b.txt,abc123,0,YES\n",
        encoding="utf-8",
    )
    m = load_manifest(p)
    assert m["a"].sha256 is None and m["a"].directed and not m["a"].weighted
    assert m["b"].sha256 == "abc123" and not m["b"].directed and m["b"].weighted
    bad = tmp_path / "bad.csv"
    bad.write_text("name,url\na,file:///a.txt\n", encoding="utf-8")
    with pytest.raises(GraphError, match="manifest needs columns"):
        load_manifest(bad)


def test_fetch_pinned_and_cached(local_dataset, monkeypatch):
    manifest, src, digest = local_dataset
    path = fetch_dataset("toy", manifest=manifest)
    assert path.read_bytes() == src.read_bytes()
    assert path.parent == cache_dir() / "toy"

    def no_network(*a, **k):
        raise AssertionError("network touched despite a valid cache entry")

    monkeypatch.setattr(urllib.request, "urlopen", no_network)
    assert fetch_dataset("toy", manifest=manifest) == path


def test_fetch_checksum_mismatch_leaves_no_cache_entry(local_dataset):
    manifest, src, _ = local_dataset
    bad = {"toy": DatasetInfo("toy", src.as_uri(), "0" * 64, False, False)}
    with pytest.raises(GraphError, match="checksum mismatch"):
        fetch_dataset("toy", manifest=bad)
    assert not list((cache_dir() / "toy").glob("*"))


def test_fetch_unpinned_warns_and_records_sidecar(local_dataset):
    manifest, src, digest = local_dataset
    unpinned = {"toy": DatasetInfo("toy", src.as_uri(), None, False, False)}
    with pytest.warns(UserWarning, match="no pinned checksum"):
        path = fetch_dataset("toy", manifest=unpinned)
    sidecar = path.with_suffix(path.suffix + ".sha256")
    assert sidecar.read_text(encoding="utf-8").strip() == digest
    # second fetch verifies against the recorded hash, silently
    assert fetch_dataset("toy", manifest=unpinned) == path
    # a corrupted cache entry no longer matches the sidecar
    path.write_bytes(b"tampered\n")
    with pytest.raises(GraphError, match="previously recorded"):
        fetch_dataset("toy", manifest=unpinned)


def test_fetch_download_failure_reported(tmp_path, monkeypatch):
    monkeypatch.setenv("SPARSEKIT_CACHE", str(tmp_path / "cache"))
    gone = {"gone": DatasetInfo("gone", (tmp_path / "nope.txt").as_uri(), None, False, False)}
    with pytest.raises(GraphError, match="failed to download"):
        fetch_dataset("gone", manifest=gone)
    assert not list((tmp_path / "cache").rglob("*.part"))


def test_load_dataset_applies_manifest_flags(tmp_path, monkeypatch):
    monkeypatch.setenv("SPARSEKIT_CACHE", str(tmp_path / "cache"))
    src = tmp_path / "arcs.txt"
    src.write_text("0 1\n1 2\n2 0\n", encoding="utf-8")
    digest = hashlib.sha256(src.read_bytes()).hexdigest()
    manifest = {"arcs": DatasetInfo("arcs", src.as_uri(), digest, directed=True, weighted=False)}
    g = load_dataset("arcs", manifest=manifest)
    assert g.directed and g.n_edges == 3
    und = {"arcs": DatasetInfo("arcs", src.as_uri(), digest, directed=False, weighted=False)}
    assert load_dataset("arcs", manifest=und).directed is False


def test_manifest_path_accepted_everywhere(tmp_path, monkeypatch):
    monkeypatch.setenv("SPARSEKIT_CACHE", str(tmp_path / "cache"))
    src = tmp_path / "tri.txt"
    save_edge_list(triangle(), src)
    digest = hashlib.sha256(src.read_bytes()).hexdigest()
    mpath = tmp_path / "m.csv"
    mpath.write_text(
        "name,url,sha256,directed,weighted\n"
        f"tri,{src.as_uri()},{digest},false,false\n",
        encoding="utf-8",
    )
    assert dataset_info("tri", manifest=mpath).sha256 == digest
    assert fetch_dataset("tri", manifest=mpath).exists()


def test_default_manifest_names_match_published_list():
    assert set(DEFAULT_MANIFEST) == {"ego-Facebook", "ca-GrQc", "wiki-Vote", "email-Enron"}
