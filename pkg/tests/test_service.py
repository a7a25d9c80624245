import copy

import pytest
from fastapi.testclient import TestClient

from maxproto.backends import BackendBundle
from maxproto.sampledata import SAMPLE_WIREFRAME_DOCUMENT
from maxproto.service import create_app


@pytest.fixture
def app(ui_store, icon_store, mock_chat, mock_embed, mock_image):
    return create_app(ui_store, icon_store, BackendBundle(mock_chat, mock_embed, mock_image))


@pytest.fixture
def client(app):
    return TestClient(app)


def create_body(seed=7, prompt="Starting page for a travel planning assistant."):
    return {"prompt": prompt, "wireframe": copy.deepcopy(SAMPLE_WIREFRAME_DOCUMENT), "seed": seed}


def make_session(client, **kw):
    resp = client.post("/v1/sessions", json=create_body(**kw))
    assert resp.status_code == 201, resp.text
    return resp.json()


class TestCreateSession:
    def test_created_with_theme(self, client):
        data = make_session(client)
        assert data["revision"] == 1
        theme = data["theme"]
        assert theme["theme_color"] and theme["primary_color"]
        assert theme["app_category"] and theme["narrative"]

    def test_empty_prompt_400_names_field(self, client):
        resp = client.post("/v1/sessions", json=create_body(prompt="   "))
        assert resp.status_code == 400
        body = resp.json()
        assert body["code"] == "schema_violation"
        assert "prompt" in body["message"]

    def test_unknown_component_type_400_names_component(self, client):
        doc = copy.deepcopy(SAMPLE_WIREFRAME_DOCUMENT)
        doc["components"][2]["type"] = "Slider2"
        resp = client.post("/v1/sessions", json={"prompt": "x", "wireframe": doc})
        assert resp.status_code == 400
        body = resp.json()
        assert body["detail"]["component_id"] == "title"

    def test_missing_body_field_400(self, client):
        resp = client.post("/v1/sessions", json={"prompt": "x"})
        assert resp.status_code == 400
        assert resp.json()["code"] == "schema_violation"


class TestGenerate:
    def test_full_pass_bumps_revision(self, client):
        sid = make_session(client)["session_id"]
        resp = client.post(f"/v1/sessions/{sid}/generate")
        assert resp.status_code == 200
        data = resp.json()
        assert data["revision"] == 2
        assert len(data["components"]) == len(SAMPLE_WIREFRAME_DOCUMENT["components"])
        kinds = {c["component_id"]: c["kind"] for c in data["components"]}
        assert kinds == {
            "bg": "image", "toolbar": "color", "title": "text",
            "hero": "image", "login": "text", "chat": "icon",
        }
        for comp in data["components"]:
            assert len(comp["provenance_digest"]) == 16
            assert comp["prompt"]

    def test_unknown_session_404(self, client):
        assert client.post("/v1/sessions/nope/generate").status_code == 404

    def test_concurrent_generate_409(self, app, client):
        sid = make_session(client)["session_id"]
        session = app.state.service.get_session(sid)
        assert session.lock.acquire(blocking=False)
        try:
            resp = client.post(f"/v1/sessions/{sid}/generate")
            assert resp.status_code == 409
            assert resp.json()["code"] == "mutation_in_progress"
        finally:
            session.lock.release()
        assert client.post(f"/v1/sessions/{sid}/generate").status_code == 200

    def test_partial_failure_lists_completed(self, ui_store, icon_store, mock_chat, mock_embed, mock_image):
        from maxproto.errors import EmptyContentError

        class FailingChat:
            name, max_input_chars = "failing-chat", 100_000

            def __init__(self):
                self.calls = 0

            def complete(self, prompt, seed):
                # chat call 1 = theme, 2 = title, 3 = login (bg/toolbar/hero
                # never touch the chat backend)
                self.calls += 1
                if self.calls >= 3:
                    raise EmptyContentError("synthetic fault")
                return mock_chat.complete(prompt, seed)

        app = create_app(ui_store, icon_store, BackendBundle(FailingChat(), mock_embed, mock_image))
        client = TestClient(app)
        sid = make_session(client)["session_id"]
        resp = client.post(f"/v1/sessions/{sid}/generate")
        assert resp.status_code == 502
        body = resp.json()
        assert body["code"] == "partial_generation_failure"
        assert body["detail"]["completed"] == ["bg", "toolbar", "title", "hero"]


class TestRegenerate:
    def test_override_flows_into_prompt(self, client):
        sid = make_session(client)["session_id"]
        client.post(f"/v1/sessions/{sid}/generate")
        resp = client.post(
            f"/v1/sessions/{sid}/components/login/regenerate",
            json={"override": "use the word Checkout"},
        )
        assert resp.status_code == 200
        data = resp.json()
        assert data["revision"] == 3
        assert "USER OVERRIDE: use the word Checkout" in data["component"]["prompt"]

    def test_isolation_other_components_identical(self, client):
        sid = make_session(client)["session_id"]
        client.post(f"/v1/sessions/{sid}/generate")
        before = client.get(f"/v1/sessions/{sid}/prototype.json").json()
        client.post(f"/v1/sessions/{sid}/components/login/regenerate", json={})
        after = client.get(f"/v1/sessions/{sid}/prototype.json").json()
        for b, a in zip(before["results"], after["results"]):
            if b["component_id"] != "login":
                assert b == a

    def test_manual_payload_replacement(self, client):
        sid = make_session(client)["session_id"]
        client.post(f"/v1/sessions/{sid}/generate")
        resp = client.post(
            f"/v1/sessions/{sid}/components/login/regenerate",
            json={"payload": {"kind": "text", "text": "Buy now"}},
        )
        assert resp.status_code == 200
        assert resp.json()["component"]["summary"] == "Buy now"

    def test_kind_mismatch_422(self, client):
        sid = make_session(client)["session_id"]
        client.post(f"/v1/sessions/{sid}/generate")
        resp = client.post(
            f"/v1/sessions/{sid}/components/chat/regenerate",
            json={"payload": {"kind": "text", "text": "nope"}},
        )
        assert resp.status_code == 422
        assert resp.json()["code"] == "payload_kind_mismatch"

    def test_unknown_component_404(self, client):
        sid = make_session(client)["session_id"]
        client.post(f"/v1/sessions/{sid}/generate")
        resp = client.post(f"/v1/sessions/{sid}/components/ghost/regenerate", json={})
        assert resp.status_code == 404

    def test_before_generate_409(self, client):
        sid = make_session(client)["session_id"]
        resp = client.post(f"/v1/sessions/{sid}/components/login/regenerate", json={})
        assert resp.status_code == 409


class TestExports:
    def test_svg_and_json_with_etag(self, client):
        sid = make_session(client)["session_id"]
        client.post(f"/v1/sessions/{sid}/generate")
        svg = client.get(f"/v1/sessions/{sid}/prototype.svg")
        assert svg.status_code == 200
        assert svg.headers["content-type"].startswith("image/svg+xml")
        assert svg.headers["etag"] == '"2"'
        assert svg.text.startswith("<?xml")
        js = client.get(f"/v1/sessions/{sid}/prototype.json")
        assert js.headers["etag"] == '"2"'
        assert js.json()["format"] == "maxproto-prototype"

    def test_etag_changes_iff_revision_changes(self, client):
        sid = make_session(client)["session_id"]
        client.post(f"/v1/sessions/{sid}/generate")
        first = client.get(f"/v1/sessions/{sid}/prototype.svg")
        again = client.get(f"/v1/sessions/{sid}/prototype.svg")
        assert first.headers["etag"] == again.headers["etag"]
        assert first.content == again.content
        client.post(f"/v1/sessions/{sid}/components/login/regenerate", json={})
        bumped = client.get(f"/v1/sessions/{sid}/prototype.svg")
        assert bumped.headers["etag"] != first.headers["etag"]

    def test_exports_before_generate_409(self, client):
        sid = make_session(client)["session_id"]
        assert client.get(f"/v1/sessions/{sid}/prototype.svg").status_code == 409
        assert client.get(f"/v1/sessions/{sid}/prototype.json").status_code == 409

    def test_export_404(self, client):
        assert client.get("/v1/sessions/none/prototype.svg").status_code == 404


class TestInspect:
    def test_reflects_state(self, client):
        sid = make_session(client)["session_id"]
        before = client.get(f"/v1/sessions/{sid}").json()
        assert before["generated"] is False
        assert before["components"] == []
        client.post(f"/v1/sessions/{sid}/generate")
        after = client.get(f"/v1/sessions/{sid}").json()
        assert after["generated"] is True
        assert len(after["components"]) == 6
        assert after["wireframe"]["units"] == "normalized"


class TestSessionLifecycle:
    def test_ttl_expiry(self, ui_store, icon_store, mock_chat, mock_embed, mock_image):
        now = [1000.0]
        app = create_app(
            ui_store, icon_store, BackendBundle(mock_chat, mock_embed, mock_image),
            session_ttl=10.0, clock=lambda: now[0],
        )
        client = TestClient(app)
        sid = make_session(client)["session_id"]
        assert client.get(f"/v1/sessions/{sid}").status_code == 200
        now[0] += 11.0
        assert client.get(f"/v1/sessions/{sid}").status_code == 404

    def test_no_cross_session_leakage(self, client):
        a = make_session(client, prompt="AAA unique alpha prompt")["session_id"]
        b = make_session(client, prompt="BBB unique beta prompt")["session_id"]
        client.post(f"/v1/sessions/{a}/generate")
        client.post(f"/v1/sessions/{b}/generate")
        a_doc = client.get(f"/v1/sessions/{a}/prototype.json").json()
        b_doc = client.get(f"/v1/sessions/{b}/prototype.json").json()
        a_prompts = " ".join(p["prompt"] for p in a_doc["provenance"])
        b_prompts = " ".join(p["prompt"] for p in b_doc["provenance"])
        assert "BBB unique beta" not in a_prompts
        assert "AAA unique alpha" not in b_prompts

    def test_snapshot_restore(self, ui_store, icon_store, mock_chat, mock_embed, mock_image, tmp_path):
        bundle = BackendBundle(mock_chat, mock_embed, mock_image)
        app1 = create_app(ui_store, icon_store, bundle, snapshot_dir=tmp_path)
        c1 = TestClient(app1)
        sid = make_session(c1)["session_id"]
        c1.post(f"/v1/sessions/{sid}/generate")
        svg1 = c1.get(f"/v1/sessions/{sid}/prototype.svg")

        app2 = create_app(ui_store, icon_store, bundle, snapshot_dir=tmp_path)
        c2 = TestClient(app2)
        svg2 = c2.get(f"/v1/sessions/{sid}/prototype.svg")
        assert svg2.status_code == 200
        assert svg2.content == svg1.content
        assert svg2.headers["etag"] == svg1.headers["etag"]

    def test_studio_mount_serves_static_files(self, ui_store, icon_store, mock_chat, mock_embed, mock_image, tmp_path):
        (tmp_path / "index.html").write_text("<!DOCTYPE html><title>studio</title>")
        app = create_app(
            ui_store, icon_store, BackendBundle(mock_chat, mock_embed, mock_image),
            studio_dir=tmp_path,
        )
        client = TestClient(app)
        resp = client.get("/studio/")
        assert resp.status_code == 200
        assert "studio" in resp.text

    def test_snapshots_append_only(self, ui_store, icon_store, mock_chat, mock_embed, mock_image, tmp_path):
        bundle = BackendBundle(mock_chat, mock_embed, mock_image)
        app = create_app(ui_store, icon_store, bundle, snapshot_dir=tmp_path)
        client = TestClient(app)
        sid = make_session(client)["session_id"]
        client.post(f"/v1/sessions/{sid}/generate")
        client.post(f"/v1/sessions/{sid}/components/login/regenerate", json={})
        files = sorted(p.name for p in tmp_path.glob(f"{sid}.*.json"))
        assert files == [f"{sid}.000002.json", f"{sid}.000003.json"]
