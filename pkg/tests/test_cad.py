import json
import time

import pytest

from extrucat.cad import (
    AssetStore,
    CadAuthError,
    CadSync,
    CadUnavailable,
    ChecksumMismatchError,
    HttpCadClient,
    SyncInProgressError,
    SyncPolicy,
    UnsupportedFormatError,
    export_model,
    tracked_models,
)
from extrucat.fixtures import CadFixtureServer
from extrucat.persist import SyncStateFile


@pytest.fixture
def cad_server():
    with CadFixtureServer() as server:
        yield server


@pytest.fixture
def client(cad_server):
    return HttpCadClient(cad_server.url)


@pytest.fixture
def assets(tmp_path):
    return AssetStore(tmp_path / "assets")


def test_list_documents(client):
    docs = client.list_documents()
    assert [d.id for d in docs] == ["doc-ux250", "doc-ux500"]
    hopper = next(e for e in docs[0].elements if e.id == "elem-hopper")
    assert hopper.name == "Feed hopper"


def test_empty_account_lists_nothing():
    with CadFixtureServer(documents=[]) as server:
        assert HttpCadClient(server.url).list_documents() == []


def test_missing_auth_token_is_an_error(cad_server):
    cad_server.token = "secret"
    with pytest.raises(CadAuthError):
        HttpCadClient(cad_server.url).list_documents()
    # The right token works.
    docs = HttpCadClient(cad_server.url, token="secret").list_documents()
    assert docs


def test_gltf_export_is_parseable_with_a_mesh(client, assets):
    result = export_model(client, assets, "doc-ux250", "elem-hopper", "glTF")
    assert result.path.exists()
    assert result.viewable
    gltf = json.loads(result.path.read_text())
    assert len(gltf["meshes"]) >= 1
    sidecar = result.path.with_suffix(".gltf.sha256")
    assert sidecar.read_text().strip() == result.checksum


def test_second_export_is_cache_hit(client, assets):
    first = export_model(client, assets, "doc-ux250", "elem-hopper", "glTF")
    second = export_model(client, assets, "doc-ux250", "elem-hopper", "glTF")
    assert not first.cached and second.cached
    assert first.checksum == second.checksum


def test_unsupported_format_rejected(client, assets):
    with pytest.raises(UnsupportedFormatError):
        export_model(client, assets, "doc-ux250", "elem-hopper", "STL")
    with pytest.raises(UnsupportedFormatError):
        export_model(client, assets, "doc-ux250", "elem-hopper", "DWG")


def test_non_gltf_export_flagged_unviewable(client, assets):
    result = export_model(client, assets, "doc-ux500", "elem-fan", "OBJ")
    assert not result.viewable
    assert result.path.suffix == ".obj"


def test_corrupt_download_retries_once_then_fails(cad_server, client, assets):
    cad_server.corrupt_next = 1
    result = export_model(client, assets, "doc-ux250", "elem-hopper", "glTF")
    assert result.checksum  # one corruption is absorbed by the retry
    cad_server.corrupt_next = 2
    with pytest.raises(ChecksumMismatchError):
        export_model(client, assets, "doc-ux250", "elem-screw", "glTF")


def _synced_env(demo, cad_server, tmp_path):
    assets = AssetStore(demo.config.assets_dir)
    state = SyncStateFile(tmp_path / "sync_state.json")
    client = HttpCadClient(cad_server.url)
    sync = CadSync(client, assets, demo.store, state)
    return sync, state


def test_sync_idempotence(demo, cad_server, tmp_path):
    sync, _ = _synced_env(demo, cad_server, tmp_path)
    first = sync.run()
    assert len(first.updated) == 3  # hopper, screw, head annotated at seed
    assert first.failed == []
    second = sync.run()
    assert second.updated == []
    assert len(second.skipped) == 3


def test_touching_one_element_updates_exactly_one(demo, cad_server, tmp_path):
    sync, _ = _synced_env(demo, cad_server, tmp_path)
    sync.run()
    cad_server.touch("doc-ux250", "elem-screw")
    report = sync.run()
    assert report.updated == ["doc-ux250/elem-screw"]
    assert len(report.skipped) == 2


def test_network_down_fails_everything_and_leaves_store_alone(demo, tmp_path):
    assets = AssetStore(demo.config.assets_dir)
    state = SyncStateFile(tmp_path / "sync_state.json")
    client = HttpCadClient("http://127.0.0.1:9", timeout=0.2)
    sync = CadSync(client, assets, demo.store, state)
    before = set(demo.store.snapshot())
    revision = demo.store.revision
    report = sync.run()
    assert report.updated == [] and len(report.failed) == 3
    assert set(demo.store.snapshot()) == before
    assert demo.store.revision == revision


def test_overlapping_sync_rejected(demo, cad_server, tmp_path):
    sync, _ = _synced_env(demo, cad_server, tmp_path)
    assert sync._running.acquire(blocking=False)
    try:
        with pytest.raises(SyncInProgressError):
            sync.run()
    finally:
        sync._running.release()


def test_store_assets_consistent_after_sync(demo, cad_server, tmp_path):
    from extrucat.annotate import file_sha256
    from extrucat.rdf import EXT, Literal

    sync, _ = _synced_env(demo, cad_server, tmp_path)
    sync.run()
    assets = AssetStore(demo.config.assets_dir)
    assert assets.verify_all() == []
    # Every model triple's path exists on disk with a matching checksum.
    snap = demo.store.snapshot()
    checked = 0
    for t in snap.match(predicate=EXT.filePath):
        path = demo.config.data_dir / t.object.lexical
        assert path.exists()
        recorded = snap.value(t.subject, EXT.checksum)
        assert isinstance(recorded, Literal)
        assert file_sha256(path) == recorded.lexical
        checked += 1
    assert checked == 3


def test_scheduled_policy_due(demo, cad_server, tmp_path):
    sync, state = _synced_env(demo, cad_server, tmp_path)
    sync.policy = SyncPolicy(mode="scheduled", interval_s=3600)
    assert sync.due()  # never synced
    sync.run()
    assert not sync.due()
    assert sync.due(now=time.time() + 7200)


def test_on_view_policy_refreshes_stale_element(demo, cad_server, tmp_path):
    sync, state = _synced_env(demo, cad_server, tmp_path)
    sync.policy = SyncPolicy(mode="on-view", staleness_s=3600)
    report = sync.on_view("doc-ux250", "elem-hopper")
    assert report is not None and report.updated == ["doc-ux250/elem-hopper"]
    # Fresh now: nothing to do.
    assert sync.on_view("doc-ux250", "elem-hopper") is None


def test_policy_validation():
    with pytest.raises(ValueError):
        SyncPolicy(mode="scheduled")
    with pytest.raises(ValueError):
        SyncPolicy(mode="never")


def test_asset_verification_flags_tampering(demo, cad_server, tmp_path):
    sync, _ = _synced_env(demo, cad_server, tmp_path)
    sync.run()
    assets = AssetStore(demo.config.assets_dir)
    victim = next(assets.root.rglob("*.gltf"))
    victim.write_bytes(b"tampered")
    assert [str(victim)] == assets.verify_all()
