"""Small built-in datasets for demos and tests.

Nothing here is shipped knowledge; it exists so the whole pipeline can
be driven end to end without any external dataset or service.
"""

from __future__ import annotations

import json
from pathlib import Path

from .kb import IconRecord, KnowledgeStore, build_icon_store
from .model import Wireframe, parse_wireframe

_SVG_NS = 'xmlns="http://www.w3.org/2000/svg" viewBox="0 0 24 24"'

SAMPLE_ICONS: tuple[tuple[str, str, str], ...] = (
    (
        "message",
        "message chat bubble for conversations",
        f'<svg {_SVG_NS}><path d="M4 4h16v12H7l-3 3z"/></svg>',
    ),
    (
        "search",
        "search magnifier lens",
        f'<svg {_SVG_NS}><circle cx="10" cy="10" r="6" fill="none" stroke-width="2"/>'
        '<path d="M14.5 14.5 L20 20" stroke-width="2"/></svg>',
    ),
    (
        "home",
        "home house start screen",
        f'<svg {_SVG_NS}><path d="M12 3 3 11h2v9h14v-9h2z"/></svg>',
    ),
    (
        "settings",
        "settings gear preferences",
        f'<svg {_SVG_NS}><circle cx="12" cy="12" r="4"/>'
        '<path d="M12 2v4M12 18v4M2 12h4M18 12h4M5 5l3 3M16 16l3 3M19 5l-3 3M8 16l-3 3"/></svg>',
    ),
    (
        "user",
        "user person profile avatar",
        f'<svg {_SVG_NS}><circle cx="12" cy="8" r="4"/><path d="M4 21c0-4 4-6 8-6s8 2 8 6z"/></svg>',
    ),
    (
        "camera",
        "camera photo capture",
        f'<svg {_SVG_NS}><rect x="3" y="7" width="18" height="13" rx="2"/>'
        '<circle cx="12" cy="13" r="4" fill="none" stroke-width="2"/></svg>',
    ),
    (
        "heart",
        "heart favorite like",
        f'<svg {_SVG_NS}><path d="M12 21 4 13a5 5 0 0 1 8-6 5 5 0 0 1 8 6z"/></svg>',
    ),
    (
        "star",
        "star rating bookmark",
        f'<svg {_SVG_NS}><path d="m12 2 3 7 7 1-5 5 1 7-6-4-6 4 1-7-5-5 7-1z"/></svg>',
    ),
    (
        "lock",
        "lock padlock security",
        f'<svg {_SVG_NS}><rect x="5" y="11" width="14" height="10" rx="2"/>'
        '<path d="M8 11V7a4 4 0 0 1 8 0v4" fill="none" stroke-width="2"/></svg>',
    ),
    (
        "cart",
        "cart shopping basket checkout",
        f'<svg {_SVG_NS}><path d="M3 4h3l3 12h10l3-9H7"/>'
        '<circle cx="10" cy="20" r="1.5"/><circle cx="18" cy="20" r="1.5"/></svg>',
    ),
)


def sample_icon_store() -> KnowledgeStore:
    """Un-embedded icon store with the built-in icon set."""
    return build_icon_store(
        IconRecord(name=n, svg=s, description=d) for n, d, s in SAMPLE_ICONS
    )


SAMPLE_UI_RECORDS: tuple[dict, ...] = (
    {
        "id": "login-screen",
        "composition": [
            {"type": "BackgroundImage", "bbox": [0, 0, 1000, 1000]},
            {"type": "Text", "bbox": [100, 120, 800, 80]},
            {"type": "Input", "bbox": [100, 300, 800, 70]},
            {"type": "Input", "bbox": [100, 400, 800, 70]},
            {"type": "TextButton", "bbox": [100, 520, 800, 80]},
        ],
        "content_descriptions": ["Welcome back", "Email", "Password", "Sign in"],
        "high_level": "login screen with email and password fields",
    },
    {
        "id": "shop-home",
        "composition": [
            {"type": "Toolbar", "bbox": [0, 0, 1000, 70]},
            {"type": "Image", "bbox": [0, 80, 1000, 350]},
            {"type": "Card", "bbox": [40, 460, 440, 300]},
            {"type": "Card", "bbox": [520, 460, 440, 300]},
            {"type": "Icon", "bbox": [880, 10, 60, 50]},
        ],
        "content_descriptions": ["Shop", "Summer sale hero", "Sneakers", "Backpacks", "cart"],
        "high_level": "shopping home page with product cards and a cart icon",
    },
    {
        "id": "settings-page",
        "composition": [
            {"type": "Toolbar", "bbox": [0, 0, 1000, 70]},
            {"type": "ListItem", "bbox": [0, 90, 1000, 90]},
            {"type": "ListItem", "bbox": [0, 190, 1000, 90]},
            {"type": "Checkbox", "bbox": [850, 200, 60, 60]},
            {"type": "Text", "bbox": [40, 100, 600, 60]},
        ],
        "content_descriptions": ["Settings", "Notifications", "Dark mode"],
        "high_level": "settings page with toggle list items",
    },
    {
        "id": "chat-list",
        "composition": [
            {"type": "Toolbar", "bbox": [0, 0, 1000, 70]},
            {"type": "ListItem", "bbox": [0, 80, 1000, 110]},
            {"type": "ListItem", "bbox": [0, 200, 1000, 110]},
            {"type": "Icon", "bbox": [20, 90, 80, 80]},
            {"type": "Text", "bbox": [120, 100, 700, 50]},
        ],
        "content_descriptions": ["Chats", "Alice: see you soon", "Bob: thanks!", "message"],
        "high_level": "chat conversation list with avatars",
    },
    {
        "id": "travel-booking",
        "composition": [
            {"type": "BackgroundImage", "bbox": [0, 0, 1000, 450]},
            {"type": "Text", "bbox": [60, 80, 880, 90]},
            {"type": "Input", "bbox": [60, 500, 880, 80]},
            {"type": "TextButton", "bbox": [60, 620, 880, 90]},
            {"type": "RadioButton", "bbox": [60, 740, 60, 60]},
        ],
        "content_descriptions": ["Where to next?", "Destination", "Search flights"],
        "high_level": "travel booking screen with destination search",
    },
)

SAMPLE_CAPTIONS: dict = {
    "login-screen": {
        "theme_color": "dark blue",
        "primary_color": "white",
        "theme_description": "a minimal sign in screen over a blurred photo",
        "app_category": "productivity",
    },
    "shop-home": {
        "theme_color": "white",
        "primary_color": "orange",
        "theme_description": "a bright storefront with product photography",
        "app_category": "shopping",
    },
    "chat-list": {
        "theme_color": "white",
        "primary_color": "green",
        "theme_description": "a clean messaging inbox",
        "app_category": "social",
    },
}


def write_sample_kb_source(directory) -> tuple[Path, Path]:
    """Write the raw UI records and the captions file under ``directory``.

    Returns ``(records_dir, captions_path)``; the records directory is
    the source for ``ingest_ui_records`` and ``maxproto kb build``.
    """
    directory = Path(directory)
    records_dir = directory / "records"
    records_dir.mkdir(parents=True, exist_ok=True)
    for rec in SAMPLE_UI_RECORDS:
        (records_dir / f"{rec['id']}.json").write_text(
            json.dumps(rec, indent=2), encoding="utf-8"
        )
    captions = directory / "captions.json"
    captions.write_text(json.dumps(SAMPLE_CAPTIONS, indent=2), encoding="utf-8")
    return records_dir, captions


SAMPLE_WIREFRAME_DOCUMENT: dict = {
    "canvas_w": 1440,
    "canvas_h": 2560,
    "components": [
        {"id": "bg", "type": "BackgroundImage", "x": 0, "y": 0, "w": 1440, "h": 2560},
        {"id": "toolbar", "type": "Toolbar", "x": 0, "y": 0, "w": 1440, "h": 160},
        {"id": "title", "type": "Text", "x": 144, "y": 320, "w": 1152, "h": 128, "hint": "app name"},
        {"id": "hero", "type": "Image", "x": 144, "y": 560, "w": 1152, "h": 640, "hint": "product photo"},
        {"id": "login", "type": "TextButton", "x": 288, "y": 1400, "w": 864, "h": 144, "hint": "login"},
        {"id": "chat", "type": "Icon", "x": 1200, "y": 2300, "w": 120, "h": 120, "hint": "messages"},
    ],
}


def sample_wireframe() -> Wireframe:
    return parse_wireframe(SAMPLE_WIREFRAME_DOCUMENT)
