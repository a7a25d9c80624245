"""The cache pool: how finished components shape the next prompt.

Each sub-agent prompt is its specific sub-prompt followed by the cache
block - the theme summary plus every earlier result, most recent
first. This script runs a four-component pass and prints the exact
prompt each component saw, so the recurrence is visible.
"""

from maxproto import (
    BackendBundle,
    GenerationRequest,
    MockChatBackend,
    MockEmbeddingBackend,
    MockImageBackend,
    embed_records,
    ingest_ui_records,
    orchestrate,
    parse_wireframe,
)
from maxproto.sampledata import SAMPLE_CAPTIONS, SAMPLE_UI_RECORDS, sample_icon_store

embed = MockEmbeddingBackend()
ui_store = embed_records(
    ingest_ui_records(list(SAMPLE_UI_RECORDS), captions=SAMPLE_CAPTIONS)[0], embed
)
icon_store = embed_records(sample_icon_store(), embed)

wireframe = parse_wireframe({
    "canvas_w": 1000,
    "canvas_h": 1000,
    "components": [
        {"id": "title", "type": "Text", "x": 0, "y": 0, "w": 1000, "h": 120, "hint": "app name"},
        {"id": "cta", "type": "TextButton", "x": 200, "y": 400, "w": 600, "h": 120, "hint": "get started"},
        {"id": "chat", "type": "Icon", "x": 850, "y": 850, "w": 120, "h": 120, "hint": "messages"},
        {"id": "bar", "type": "Toolbar", "x": 0, "y": 880, "w": 1000, "h": 120},
    ],
})
request = GenerationRequest(prompt="Onboarding screen for a chat app.", wireframe=wireframe, seed=7)
proto = orchestrate(
    request, ui_store, icon_store,
    BackendBundle(MockChatBackend(), embed, MockImageBackend()),
)

for prov in proto.provenance:
    print("=" * 72)
    print(f"prompt composed for component {prov.component_id!r}:")
    print("=" * 72)
    print(prov.prompt)
    print()

print("note how component t's DESIGN CONTEXT block contains the rendered")
print("results of components 0..t-1 (most recent first) after the pinned")
print("theme summary - that is the whole memory mechanism.")
