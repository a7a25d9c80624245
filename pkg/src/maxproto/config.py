"""Engine configuration: maxproto.toml defaults plus backend selection.

Precedence is flags > config file > built-in defaults. Remote backends
read their endpoints from the environment (``MAXPROTO_CHAT_URL``,
``MAXPROTO_CHAT_KEY``, ``MAXPROTO_EMBED_URL``, ``MAXPROTO_EMBED_KEY``,
``MAXPROTO_IMAGE_URL``) so credentials never live in files.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, replace
from pathlib import Path

try:
    import tomllib
except ModuleNotFoundError:  # Python 3.10
    import tomli as tomllib

from .agents import GenerationOptions
from .backends import (
    BackendBundle,
    EndpointConfig,
    MockChatBackend,
    MockEmbeddingBackend,
    MockImageBackend,
    RemoteChatBackend,
    RemoteEmbeddingBackend,
    RemoteImageBackend,
)
from .errors import InputError
from .kb import RetrievalConfig

DEFAULT_CONFIG_FILENAME = "maxproto.toml"

ENV_CHAT_URL = "MAXPROTO_CHAT_URL"
ENV_CHAT_KEY = "MAXPROTO_CHAT_KEY"
ENV_EMBED_URL = "MAXPROTO_EMBED_URL"
ENV_EMBED_KEY = "MAXPROTO_EMBED_KEY"
ENV_IMAGE_URL = "MAXPROTO_IMAGE_URL"


@dataclass(frozen=True)
class EngineConfig:
    chat_backend: str = "mock"
    embed_backend: str = "mock"
    image_backend: str = "mock"
    embed_dim: int = 1536          # remote embedding dimensionality
    image_width: int = 512
    image_height: int = 512
    cache_budget: int = 6000
    retrieval_k: int = 2
    kb_path: str | None = None
    icons_path: str | None = None
    templates_path: str | None = None

    def options(self) -> GenerationOptions:
        return GenerationOptions(
            image_width=self.image_width,
            image_height=self.image_height,
            cache_budget=self.cache_budget,
            retrieval=RetrievalConfig(k=self.retrieval_k),
        )


_BACKEND_KEYS = {"chat": "chat_backend", "embed": "embed_backend", "image": "image_backend"}


def load_config(path=None) -> EngineConfig:
    """Read maxproto.toml (explicit path, else ./maxproto.toml if present)."""
    cfg = EngineConfig()
    if path is None:
        candidate = Path(DEFAULT_CONFIG_FILENAME)
        if not candidate.exists():
            return cfg
        path = candidate
    raw = tomllib.loads(Path(path).read_text(encoding="utf-8"))
    updates: dict = {}
    backends = raw.get("backends", {})
    for key, field in _BACKEND_KEYS.items():
        if key in backends:
            value = str(backends[key])
            if value not in ("mock", "remote"):
                raise InputError(f"backends.{key} must be 'mock' or 'remote', got {value!r}")
            updates[field] = value
    generation = raw.get("generation", {})
    for key in ("embed_dim", "image_width", "image_height", "cache_budget", "retrieval_k"):
        if key in generation:
            updates[key] = int(generation[key])
    paths = raw.get("paths", {})
    for key, field in (("kb", "kb_path"), ("icons", "icons_path"), ("templates", "templates_path")):
        if key in paths:
            updates[field] = str(paths[key])
    return replace(cfg, **updates)


def apply_backend_flag(cfg: EngineConfig, flag: str | None) -> EngineConfig:
    """A --backend flag overrides all three capabilities at once."""
    if flag is None:
        return cfg
    if flag not in ("mock", "remote"):
        raise InputError(f"--backend must be 'mock' or 'remote', got {flag!r}")
    return replace(cfg, chat_backend=flag, embed_backend=flag, image_backend=flag)


def _require_env(env: dict, name: str, capability: str) -> str:
    value = env.get(name)
    if not value:
        raise InputError(
            f"remote {capability} backend selected but {name} is not set"
        )
    return value


def build_backends(cfg: EngineConfig, env=None) -> BackendBundle:
    env = dict(os.environ if env is None else env)
    if cfg.chat_backend == "mock":
        chat = MockChatBackend()
    else:
        chat = RemoteChatBackend(
            EndpointConfig(
                url=_require_env(env, ENV_CHAT_URL, "chat"),
                api_key=env.get(ENV_CHAT_KEY),
            )
        )
    if cfg.embed_backend == "mock":
        embed = MockEmbeddingBackend()
    else:
        embed = RemoteEmbeddingBackend(
            EndpointConfig(
                url=_require_env(env, ENV_EMBED_URL, "embedding"),
                api_key=env.get(ENV_EMBED_KEY),
            ),
            dim=cfg.embed_dim,
        )
    if cfg.image_backend == "mock":
        image = MockImageBackend()
    else:
        image = RemoteImageBackend(
            EndpointConfig(url=_require_env(env, ENV_IMAGE_URL, "image"))
        )
    return BackendBundle(chat=chat, embed=embed, image=image)
