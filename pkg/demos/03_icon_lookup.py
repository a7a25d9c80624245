"""Icon lookup: indicative phrases resolve to SVG icons by description.

The icon agent asks the chat backend for a short phrase ("msg"-style),
then picks the icon whose description embeds closest to it. Ties break
by ascending icon name, so lookups are fully deterministic.
"""

from maxproto import MockEmbeddingBackend, embed_records, lookup_icon
from maxproto.sampledata import sample_icon_store

embed = MockEmbeddingBackend()
store = embed_records(sample_icon_store(), embed)

print("icon store:")
for rec in store.records:
    print(f"  {rec.name:<10} {rec.description}")

print("\nphrase lookups:")
for phrase in ("msg", "messages", "search", "find flights", "user profile", "lock"):
    icon = lookup_icon(store, phrase, embed)
    print(f"  {phrase!r:<16} -> {icon.name}")

icon = lookup_icon(store, "msg", embed)
print(f"\nthe chosen SVG is inlined into the prototype, recolored to the theme:")
print(f"  {icon.svg}")
