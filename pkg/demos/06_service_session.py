"""The session service: create, generate, steer, export over HTTP.

Runs the FastAPI app in-process (no sockets) and walks the whole
multi-round loop: create a session, generate, override-regenerate one
button, manually edit another component, and export at each revision.
Outputs land in demos/output/06_service/.
"""

from pathlib import Path

from fastapi.testclient import TestClient

from maxproto import (
    BackendBundle,
    MockChatBackend,
    MockEmbeddingBackend,
    MockImageBackend,
    create_app,
    embed_records,
    ingest_ui_records,
)
from maxproto.sampledata import (
    SAMPLE_CAPTIONS,
    SAMPLE_UI_RECORDS,
    SAMPLE_WIREFRAME_DOCUMENT,
    sample_icon_store,
)

out_dir = Path(__file__).parent / "output" / "06_service"
out_dir.mkdir(parents=True, exist_ok=True)

embed = MockEmbeddingBackend()
ui_store = embed_records(
    ingest_ui_records(list(SAMPLE_UI_RECORDS), captions=SAMPLE_CAPTIONS)[0], embed
)
icon_store = embed_records(sample_icon_store(), embed)
app = create_app(ui_store, icon_store,
                 BackendBundle(MockChatBackend(), embed, MockImageBackend()))
client = TestClient(app)

created = client.post("/v1/sessions", json={
    "prompt": "Starting page for a travel planning assistant.",
    "wireframe": SAMPLE_WIREFRAME_DOCUMENT,
    "seed": 7,
}).json()
sid = created["session_id"]
print(f"session {sid} created at revision {created['revision']}")
print(f"theme: {created['theme']['theme_color']} / {created['theme']['primary_color']}")

generated = client.post(f"/v1/sessions/{sid}/generate").json()
print(f"\ngenerated at revision {generated['revision']}:")
for comp in generated["components"]:
    print(f"  {comp['component_id']:<8} {comp['kind']:<5} {comp['summary']}")

svg = client.get(f"/v1/sessions/{sid}/prototype.svg")
(out_dir / "rev2.svg").write_bytes(svg.content)
print(f"\nexported rev2.svg (ETag {svg.headers['etag']})")

regen = client.post(
    f"/v1/sessions/{sid}/components/login/regenerate",
    json={"override": "use the word Checkout"},
).json()
print(f"\nregenerated 'login' with an override at revision {regen['revision']}:")
print(f"  new summary: {regen['component']['summary']}")
print(f"  override present in the logged prompt: "
      f"{'USER OVERRIDE: use the word Checkout' in regen['component']['prompt']}")

edited = client.post(
    f"/v1/sessions/{sid}/components/title/regenerate",
    json={"payload": {"kind": "text", "text": "Plan your next trip"}},
).json()
print(f"\nmanually edited 'title' at revision {edited['revision']}: "
      f"{edited['component']['summary']!r}")

final = client.get(f"/v1/sessions/{sid}/prototype.svg")
(out_dir / "final.svg").write_bytes(final.content)
doc = client.get(f"/v1/sessions/{sid}/prototype.json")
(out_dir / "final.json").write_bytes(doc.content)
print(f"\nexported final.svg and final.json (ETag {final.headers['etag']})")
print(f"outputs in {out_dir}")
