"""End to end: a prompt and a wireframe become an editable prototype.

Everything runs on the built-in deterministic mocks, so this script
produces the same bytes every time. Outputs land in
demos/output/01_prototype/.
"""

from pathlib import Path

from maxproto import (
    BackendBundle,
    GenerationRequest,
    MockChatBackend,
    MockEmbeddingBackend,
    MockImageBackend,
    embed_records,
    ingest_ui_records,
    orchestrate,
    write_outputs,
)
from maxproto.sampledata import (
    SAMPLE_CAPTIONS,
    SAMPLE_UI_RECORDS,
    sample_icon_store,
    sample_wireframe,
)

out_dir = Path(__file__).parent / "output" / "01_prototype"

# 1. Knowledge bases: five sample UI records (with captioner answers) and
#    ten sample icons, embedded with the hashing mock.
embed = MockEmbeddingBackend()
ui_store, report = ingest_ui_records(list(SAMPLE_UI_RECORDS), captions=SAMPLE_CAPTIONS)
ui_store = embed_records(ui_store, embed)
icon_store = embed_records(sample_icon_store(), embed)
print(f"UI knowledge: {len(ui_store)} records ({report.accepted} accepted)")
print(f"icon knowledge: {len(icon_store)} icons")

# 2. The user input: a one-line prompt plus a six-component wireframe
#    (background image, toolbar, title, hero image, login button, chat icon).
request = GenerationRequest(
    prompt="Starting page for a travel planning assistant.",
    wireframe=sample_wireframe(),
    seed=42,
)
print(f"wireframe: {len(request.wireframe.components)} components "
      f"on a {request.wireframe.canvas_w}x{request.wireframe.canvas_h} canvas")

# 3. Orchestrate: theme first, then each component through its sub-agent.
backends = BackendBundle(MockChatBackend(), embed, MockImageBackend())
proto = orchestrate(request, ui_store, icon_store, backends)

print(f"\ntheme: {proto.theme.theme_color} / {proto.theme.primary_color} "
      f"({proto.theme.app_category})")
print(f"narrative: {proto.theme.narrative}")
print("\nper-component results:")
for res in proto.results:
    payload = res.payload
    if payload.kind == "text":
        detail = f'"{payload.text}"'
    elif payload.kind == "image":
        detail = f"{payload.raster.width}x{payload.raster.height} raster"
    elif payload.kind == "icon":
        detail = f"icon '{payload.icon_name}' for phrase '{payload.phrase}'"
    else:
        detail = payload.color
    print(f"  {res.component_id:<8} {res.ctype.value:<16} {payload.kind:<5} {detail}")

# 4. Export: an editable SVG plus a lossless JSON document with the full
#    provenance (every composed prompt, backend identity and seed).
written = write_outputs(proto, out_dir)
print(f"\nwrote {written['svg']}")
print(f"wrote {written['json']}")
