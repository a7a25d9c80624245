"""Shared fixtures: mock backends, embedded stores, a sample request."""

import pytest

from maxproto.backends import MockChatBackend, MockEmbeddingBackend, MockImageBackend
from maxproto.kb import RetrievalConfig, embed_records, ingest_ui_records
from maxproto.model import GenerationRequest
from maxproto.sampledata import (
    SAMPLE_CAPTIONS,
    SAMPLE_UI_RECORDS,
    sample_icon_store,
    sample_wireframe,
)


@pytest.fixture
def mock_chat():
    return MockChatBackend()


@pytest.fixture
def mock_embed():
    return MockEmbeddingBackend()


@pytest.fixture
def mock_image():
    return MockImageBackend()


@pytest.fixture
def ui_store(mock_embed):
    store, _ = ingest_ui_records(list(SAMPLE_UI_RECORDS), captions=SAMPLE_CAPTIONS)
    return embed_records(store, mock_embed)


@pytest.fixture
def icon_store(mock_embed):
    return embed_records(sample_icon_store(), mock_embed)


@pytest.fixture
def wireframe():
    return sample_wireframe()


@pytest.fixture
def request_fixture(wireframe):
    return GenerationRequest(
        prompt="Starting page for a travel planning assistant.",
        wireframe=wireframe,
        seed=1234,
    )


@pytest.fixture
def retrieval_cfg():
    return RetrievalConfig(k=2)


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    """One pass/fail line per acceptance criterion at the end of a run."""
    seen = {}
    for outcome in ("passed", "failed", "error"):
        for report in terminalreporter.stats.get(outcome, []):
            nodeid = getattr(report, "nodeid", "")
            if "test_acceptance.py" in nodeid:
                name = nodeid.split("::")[-1]
                seen[name] = "PASS" if outcome == "passed" else "FAIL"
    if seen:
        terminalreporter.section("acceptance criteria")
        for name, status in sorted(seen.items()):
            terminalreporter.write_line(f"[{status}] {name}")
