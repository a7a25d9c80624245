"""Exception taxonomy shared by every maxproto module.

The CLI maps these onto exit codes (input 1, backend 2, generation 3),
and the HTTP service maps them onto status codes, so handlers should
raise the most specific class available.
"""

from __future__ import annotations


class MaxprotoError(Exception):
    """Base class for every error raised by this package."""


# --- input / schema errors (CLI exit code 1, HTTP 400) ---------------------

class InputError(MaxprotoError):
    """User-supplied input is invalid."""


class WireframeError(InputError):
    """A wireframe document violates the schema.

    ``component_id`` names the offending component when one is known.
    """

    def __init__(self, message: str, component_id: str | None = None):
        super().__init__(message)
        self.component_id = component_id


class DuplicateIdError(WireframeError):
    pass


class BBoxRangeError(WireframeError):
    pass


class UnknownComponentTypeError(WireframeError):
    pass


# --- knowledge base ---------------------------------------------------------

class KnowledgeBaseError(MaxprotoError):
    pass


class EmptyKnowledgeBaseError(KnowledgeBaseError):
    pass


class DimensionMismatchError(KnowledgeBaseError):
    pass


class ZeroVectorError(KnowledgeBaseError):
    pass


class EmbeddingProgressError(KnowledgeBaseError):
    """Embedding stopped partway.

    ``last_embedded_id`` is the id of the last record that was embedded
    successfully (None when the failure hit the very first record), and
    ``partial_store`` holds every embedding computed so far. Persist the
    partial store and re-run ``embed_records`` on it to resume.
    """

    def __init__(
        self,
        message: str,
        last_embedded_id: str | None,
        partial_store=None,
        cause: Exception | None = None,
    ):
        super().__init__(message)
        self.last_embedded_id = last_embedded_id
        self.partial_store = partial_store
        self.cause = cause


# --- backends (CLI exit code 2, HTTP 502) -----------------------------------

class BackendError(MaxprotoError):
    """A model backend call failed.

    ``transient`` marks failures worth retrying (timeouts, 429, 5xx).
    """

    def __init__(self, message: str, transient: bool = False):
        super().__init__(message)
        self.transient = transient


class AuthenticationError(BackendError):
    def __init__(self, message: str):
        super().__init__(message, transient=False)


class BackendProtocolError(BackendError):
    """The remote replied with a body the adapter cannot map onto its type."""

    def __init__(self, message: str):
        super().__init__(message, transient=False)


# --- generation (CLI exit code 3, HTTP 502 with detail) ----------------------

class GenerationError(MaxprotoError):
    pass


class PromptBudgetError(GenerationError):
    pass


class ThemeParseError(GenerationError):
    """Chat reply could not be parsed into a theme description.

    ``missing`` lists the required labels that were absent.
    """

    def __init__(self, message: str, missing: list[str] | None = None):
        super().__init__(message)
        self.missing = missing or []


class TemplateSlotError(GenerationError):
    """A prompt template was rendered with an unfilled slot."""


class EmptyContentError(GenerationError):
    pass


class EmptyPhraseError(GenerationError):
    pass


class CropError(GenerationError):
    pass


class PartialPrototypeError(GenerationError):
    """Orchestration aborted mid-pass.

    Carries every ComponentResult completed before the failure so a
    service layer can resume or report progress.
    """

    def __init__(self, message: str, completed: list, failed_component_id: str, cause: Exception):
        super().__init__(message)
        self.completed = completed
        self.failed_component_id = failed_component_id
        self.cause = cause
