"""maxproto: multi-agent UI prototype generation.

A prompt plus a wireframe of typed boxes goes in; an editable,
component-structured prototype (SVG or JSON) comes out. A theme agent
retrieves design knowledge and sets the global style, typed sub-agents
fill in text, imagery and icons with a shared context cache, and the
remaining component types become color-filled editable rectangles.
"""

from .agents import (
    CachePool,
    GenerationOptions,
    cache_append,
    compose_sub_prompt,
    dominant_color,
    generate_theme,
    load_templates,
    orchestrate,
    parse_theme_description,
    regenerate_component,
)
from .backends import (
    BackendBundle,
    ImageRequest,
    MockChatBackend,
    MockEmbeddingBackend,
    MockImageBackend,
    derive_seed,
)
from .config import EngineConfig, build_backends, load_config
from .kb import (
    IconRecord,
    KnowledgeRecord,
    KnowledgeStore,
    RetrievalConfig,
    cosine_similarity,
    embed_records,
    ingest_ui_records,
    load_store,
    lookup_icon,
    retrieve,
    save_store,
)
from .metrics import (
    FeatureSet,
    GaussianStats,
    extract_features,
    fit_gaussian,
    frechet_distance,
    generation_diversity,
)
from .model import (
    BBox,
    ComponentResult,
    ComponentType,
    GenerationRequest,
    Prototype,
    ThemeDescription,
    Wireframe,
    WireframeComponent,
    parse_wireframe,
    scale_bbox_to_pixels,
    wireframe_to_document,
)
from .raster import Raster
from .render import RenderOptions, parse_document, render_document, render_svg, write_outputs
from .service import create_app

__version__ = "0.1.0"

__all__ = [
    "BBox",
    "BackendBundle",
    "CachePool",
    "ComponentResult",
    "ComponentType",
    "EngineConfig",
    "FeatureSet",
    "GaussianStats",
    "GenerationOptions",
    "GenerationRequest",
    "IconRecord",
    "ImageRequest",
    "KnowledgeRecord",
    "KnowledgeStore",
    "MockChatBackend",
    "MockEmbeddingBackend",
    "MockImageBackend",
    "Prototype",
    "Raster",
    "RenderOptions",
    "RetrievalConfig",
    "ThemeDescription",
    "Wireframe",
    "WireframeComponent",
    "build_backends",
    "cache_append",
    "compose_sub_prompt",
    "cosine_similarity",
    "create_app",
    "derive_seed",
    "dominant_color",
    "embed_records",
    "extract_features",
    "fit_gaussian",
    "frechet_distance",
    "generate_theme",
    "generation_diversity",
    "ingest_ui_records",
    "load_config",
    "load_store",
    "load_templates",
    "lookup_icon",
    "orchestrate",
    "parse_document",
    "parse_theme_description",
    "parse_wireframe",
    "regenerate_component",
    "render_document",
    "render_svg",
    "retrieve",
    "save_store",
    "scale_bbox_to_pixels",
    "wireframe_to_document",
    "write_outputs",
]
