from .base import (
    BackendBundle,
    ChatBackend,
    EmbeddingBackend,
    ImageBackend,
    ImageRequest,
    derive_seed,
    render_layout_condition,
    stable_hash,
)
from .mock import MockChatBackend, MockEmbeddingBackend, MockImageBackend
from .remote import (
    EndpointConfig,
    RemoteChatBackend,
    RemoteEmbeddingBackend,
    RemoteImageBackend,
)

__all__ = [
    "BackendBundle",
    "ChatBackend",
    "EmbeddingBackend",
    "ImageBackend",
    "ImageRequest",
    "derive_seed",
    "render_layout_condition",
    "stable_hash",
    "MockChatBackend",
    "MockEmbeddingBackend",
    "MockImageBackend",
    "EndpointConfig",
    "RemoteChatBackend",
    "RemoteEmbeddingBackend",
    "RemoteImageBackend",
]
