"""Remote adapters speaking common service protocols over HTTP.

Chat and embedding speak the widely deployed JSON chat-completions /
embeddings request shapes; the image adapter speaks a minimal
``{prompt, width, height, seed, control_image?, init_image?}`` body
with base64 PNG rasters. Adapters map responses onto the same types
the mocks produce, so the engine cannot tell them apart.

Transient failures (timeouts, connection errors, 429, 5xx) are retried
up to 3 times with exponential backoff starting at 250 ms; everything
else surfaces immediately as a typed error. Credentials are never
logged.
"""

from __future__ import annotations

import base64
import logging
import threading
import time
from dataclasses import dataclass

import httpx

from ..errors import (
    AuthenticationError,
    BackendError,
    BackendProtocolError,
    DimensionMismatchError,
)
from ..raster import Raster
from .base import ImageRequest

log = logging.getLogger("maxproto.backends")

_ATTEMPTS = 3
_BACKOFF = 0.25


@dataclass(frozen=True)
class EndpointConfig:
    url: str
    api_key: str | None = None
    timeout: float = 120.0
    max_in_flight: int = 4


class _HttpAdapter:
    """Shared POST-with-retries machinery for all three adapters."""

    def __init__(self, config: EndpointConfig, *, transport=None, sleep=time.sleep):
        self._config = config
        self._sleep = sleep
        self._semaphore = threading.BoundedSemaphore(config.max_in_flight)
        headers = {}
        if config.api_key:
            headers["Authorization"] = f"Bearer {config.api_key}"
        self._client = httpx.Client(
            timeout=config.timeout, headers=headers, transport=transport
        )

    def close(self):
        self._client.close()

    def _post(self, body: dict) -> dict:
        last_error: BackendError | None = None
        for attempt in range(_ATTEMPTS):
            try:
                with self._semaphore:
                    log.debug(
                        "POST %s attempt=%d body=%r",
                        self._config.url,
                        attempt + 1,
                        _redacted(body),
                    )
                    response = self._client.post(self._config.url, json=body)
            except httpx.TimeoutException as exc:
                last_error = BackendError(f"timeout calling {self._config.url}: {exc}", transient=True)
            except httpx.HTTPError as exc:
                last_error = BackendError(f"transport error calling {self._config.url}: {exc}", transient=True)
            else:
                if response.status_code in (401, 403):
                    raise AuthenticationError(
                        f"{self._config.url} rejected credentials ({response.status_code})"
                    )
                if response.status_code == 429 or response.status_code >= 500:
                    last_error = BackendError(
                        f"{self._config.url} replied {response.status_code}: "
                        f"{_provider_message(response)}",
                        transient=True,
                    )
                elif response.status_code >= 400:
                    raise BackendError(
                        f"{self._config.url} replied {response.status_code}: "
                        f"{_provider_message(response)}",
                        transient=False,
                    )
                else:
                    try:
                        return response.json()
                    except ValueError as exc:
                        raise BackendProtocolError(
                            f"{self._config.url} returned a non-JSON body: {exc}"
                        ) from exc
            if attempt < _ATTEMPTS - 1:
                self._sleep(_BACKOFF * (2**attempt))
        assert last_error is not None
        raise last_error


def _provider_message(response: httpx.Response) -> str:
    try:
        body = response.json()
        return str(body.get("error", body))[:500]
    except ValueError:
        return response.text[:500]


def _redacted(body: dict) -> dict:
    out = {}
    for key, value in body.items():
        if "image" in key and isinstance(value, str) and len(value) > 64:
            out[key] = f"<{len(value)} b64 chars>"
        else:
            out[key] = value
    return out


class RemoteChatBackend(_HttpAdapter):
    def __init__(
        self,
        config: EndpointConfig,
        *,
        name: str = "remote-chat",
        model: str | None = None,
        max_input_chars: int = 48_000,
        transport=None,
        sleep=time.sleep,
    ):
        super().__init__(config, transport=transport, sleep=sleep)
        self.name = name
        self.model = model
        self.max_input_chars = max_input_chars

    def complete(self, prompt: str, seed: int) -> str:
        body = {"messages": [{"role": "user", "content": prompt}], "seed": seed}
        if self.model:
            body["model"] = self.model
        reply = self._post(body)
        try:
            content = reply["choices"][0]["message"]["content"]
        except (KeyError, IndexError, TypeError) as exc:
            raise BackendProtocolError(
                f"chat reply missing choices[0].message.content: {exc}"
            ) from exc
        if not isinstance(content, str):
            raise BackendProtocolError("chat reply content is not a string")
        return content


class RemoteEmbeddingBackend(_HttpAdapter):
    def __init__(
        self,
        config: EndpointConfig,
        dim: int,
        *,
        name: str = "remote-embed",
        model: str | None = None,
        transport=None,
        sleep=time.sleep,
    ):
        super().__init__(config, transport=transport, sleep=sleep)
        self.name = name
        self.dim = dim
        self.model = model

    def embed(self, text: str) -> list[float]:
        body: dict = {"input": [text]}
        if self.model:
            body["model"] = self.model
        reply = self._post(body)
        try:
            vector = reply["data"][0]["embedding"]
        except (KeyError, IndexError, TypeError) as exc:
            raise BackendProtocolError(
                f"embedding reply missing data[0].embedding: {exc}"
            ) from exc
        if not isinstance(vector, list):
            raise BackendProtocolError("embedding is not a list")
        if len(vector) != self.dim:
            raise DimensionMismatchError(
                f"embedding backend returned dim {len(vector)}, expected {self.dim}"
            )
        return [float(v) for v in vector]


class RemoteImageBackend(_HttpAdapter):
    supports_layout_condition = True
    supports_init_image = True

    def __init__(
        self,
        config: EndpointConfig,
        *,
        name: str = "remote-image",
        transport=None,
        sleep=time.sleep,
    ):
        super().__init__(config, transport=transport, sleep=sleep)
        self.name = name

    def generate(self, req: ImageRequest) -> Raster:
        body: dict = {
            "prompt": req.prompt,
            "width": req.width,
            "height": req.height,
            "seed": req.seed,
        }
        if req.layout_condition is not None:
            body["control_image"] = req.layout_condition.to_base64_png()
        if req.init_image is not None:
            body["init_image"] = req.init_image.to_base64_png()
        reply = self._post(body)
        encoded = reply.get("image")
        if not isinstance(encoded, str):
            raise BackendProtocolError("image reply missing base64 'image' field")
        try:
            raster = Raster.from_png_bytes(base64.b64decode(encoded))
        except Exception as exc:
            raise BackendProtocolError(f"image reply is not decodable PNG: {exc}") from exc
        if (raster.width, raster.height) != (req.width, req.height):
            raise BackendProtocolError(
                f"image backend returned {raster.width}x{raster.height}, "
                f"requested {req.width}x{req.height}"
            )
        return raster
