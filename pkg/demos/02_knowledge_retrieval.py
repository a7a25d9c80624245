"""Retrieval: how a query (prompt + layout) finds its reference designs.

The query text concatenates the user prompt with the rendered layout;
both it and every record's canonical rendering are embedded, and the
top-k records by cosine similarity become the references injected into
the theme prompt (k defaults to 2).
"""

from maxproto import (
    GenerationRequest,
    MockEmbeddingBackend,
    RetrievalConfig,
    embed_records,
    ingest_ui_records,
    retrieve,
)
from maxproto.kb import render_query
from maxproto.sampledata import SAMPLE_CAPTIONS, SAMPLE_UI_RECORDS, sample_wireframe

embed = MockEmbeddingBackend()
store, _ = ingest_ui_records(list(SAMPLE_UI_RECORDS), captions=SAMPLE_CAPTIONS)
store = embed_records(store, embed)

request = GenerationRequest(
    prompt="A login screen for a secure banking app.",
    wireframe=sample_wireframe(),
    seed=0,
)
query = render_query(request)
print("query text sent to the embedder:")
print("-" * 60)
print(query)
print("-" * 60)

for k in (2, 5):
    refs = retrieve(store, query, embed, RetrievalConfig(k=k))
    print(f"\ntop-{k} references:")
    for rank, ref in enumerate(refs, start=1):
        first_line = ref.rendered.splitlines()[0]
        print(f"  {rank}. {ref.record_id:<16} score={ref.score:+.4f}  ({first_line} ...)")

print("\nthe login-screen record should rank first for this query, and it")
print("would be injected into the theme prompt exactly as rendered above.")
