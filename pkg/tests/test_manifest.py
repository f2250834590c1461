import hashlib
import http.server
import json
import threading

import pytest

from attreval.datasets import (
    ChecksumError,
    DatasetManifestEntry,
    FetchError,
    fetch_dataset,
    load_manifest,
)

FIXTURE = b"a,b,y\n1.0,0,0\n2.0,1,1\n3.5,0,1\n"


def _entry(url, name="toy", payload=FIXTURE, **kw):
    return DatasetManifestEntry(
        name=name, url=url, sha256=hashlib.sha256(payload).hexdigest(), target="y", **kw
    )


@pytest.fixture(scope="module")
def http_fixture():
    class Handler(http.server.BaseHTTPRequestHandler):
        hits = 0

        def do_GET(self):
            Handler.hits += 1
            if self.path == "/toy.csv":
                self.send_response(200)
                self.end_headers()
                self.wfile.write(FIXTURE)
            else:
                self.send_response(404)
                self.end_headers()

        def log_message(self, *args):
            pass

    server = http.server.ThreadingHTTPServer(("127.0.0.1", 0), Handler)
    thread = threading.Thread(target=server.serve_forever, daemon=True)
    thread.start()
    yield f"http://127.0.0.1:{server.server_address[1]}", Handler
    server.shutdown()


def test_fresh_fetch_matches_fixture(http_fixture, tmp_path):
    base, _ = http_fixture
    path = fetch_dataset(_entry(f"{base}/toy.csv"), tmp_path)
    assert path.read_bytes() == FIXTURE
    assert path == tmp_path / "toy" / f"{hashlib.sha256(FIXTURE).hexdigest()[:16]}.csv"


def test_cached_fetch_skips_network(http_fixture, tmp_path):
    base, handler = http_fixture
    entry = _entry(f"{base}/toy.csv", name="cached")
    first = fetch_dataset(entry, tmp_path)
    hits = handler.hits
    again = fetch_dataset(entry, tmp_path)
    assert again == first
    assert handler.hits == hits  # no second request


def test_cached_fetch_works_with_dead_url(tmp_path):
    dead = _entry("http://127.0.0.1:1/unreachable.csv", name="dead")
    dest = tmp_path / "dead" / f"{dead.sha256[:16]}.csv"
    dest.parent.mkdir(parents=True)
    dest.write_bytes(FIXTURE)
    assert fetch_dataset(dead, tmp_path) == dest


def test_checksum_mismatch_names_digests(http_fixture, tmp_path):
    base, _ = http_fixture
    wrong = "0" * 64
    entry = DatasetManifestEntry(name="bad", url=f"{base}/toy.csv", sha256=wrong, target="y")
    with pytest.raises(ChecksumError) as err:
        fetch_dataset(entry, tmp_path)
    assert wrong in str(err.value)
    assert hashlib.sha256(FIXTURE).hexdigest() in str(err.value)
    assert not (tmp_path / "bad" / f"{wrong[:16]}.csv").exists()


def test_http_failure(tmp_path):
    entry = _entry("http://127.0.0.1:1/nope.csv", name="gone")
    with pytest.raises(FetchError):
        fetch_dataset(entry, tmp_path)


def test_file_url_fetch(tmp_path):
    src = tmp_path / "src.csv"
    src.write_bytes(FIXTURE)
    entry = _entry(src.as_uri(), name="local")
    path = fetch_dataset(entry, tmp_path / "cache")
    assert path.read_bytes() == FIXTURE


def test_load_manifest_round_trip(tmp_path):
    doc = [
        {
            "name": "toy",
            "url": "http://example.invalid/toy.csv",
            "sha256": "ab" * 32,
            "target": "y",
            "protected": "b",
            "kinds": {"b": "discrete-binary"},
        }
    ]
    p = tmp_path / "manifest.json"
    p.write_text(json.dumps(doc))
    entries = load_manifest(p)
    assert entries[0].name == "toy"
    assert entries[0].protected == "b"
    assert entries[0].kinds == {"b": "discrete-binary"}


def test_load_manifest_rejects_bad_shape(tmp_path):
    p = tmp_path / "m.json"
    p.write_text(json.dumps({"not": "a list"}))
    with pytest.raises(FetchError):
        load_manifest(p)
    p.write_text(json.dumps([{"name": "x"}]))
    with pytest.raises(FetchError):
        load_manifest(p)


def test_entry_rejects_short_digest():
    with pytest.raises(FetchError):
        DatasetManifestEntry(name="x", url="u", sha256="abcd", target="y")
