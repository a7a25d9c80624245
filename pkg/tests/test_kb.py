import json
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from maxproto.errors import (
    DimensionMismatchError,
    EmbeddingProgressError,
    EmptyKnowledgeBaseError,
    KnowledgeBaseError,
    ZeroVectorError,
)
from maxproto.kb import (
    IconRecord,
    KnowledgeRecord,
    KnowledgeStore,
    RetrievalConfig,
    ThemeAttrs,
    build_icon_store,
    cosine_similarity,
    embed_records,
    ingest_ui_records,
    load_store,
    lookup_icon,
    render_record,
    retrieve,
    save_store,
    store_hash,
)
from maxproto.model import BBox
from maxproto.sampledata import SAMPLE_CAPTIONS, SAMPLE_UI_RECORDS, sample_icon_store


def raw_record(rid, n_boxes=1):
    return {
        "id": rid,
        "composition": [{"type": "Text", "bbox": [0, 0, 100, 50]}] * n_boxes,
        "content_descriptions": ["hello"],
        "high_level": f"screen {rid}",
    }


class StubEmbedding:
    """Returns pre-assigned vectors keyed by exact text; fixed fallback."""

    def __init__(self, dim, table=None, fallback=None):
        self.name = "stub-embed"
        self.dim = dim
        self.table = table or {}
        self.fallback = fallback

    def embed(self, text):
        if text in self.table:
            return self.table[text]
        if self.fallback is not None:
            return self.fallback
        raise AssertionError(f"unexpected embed call: {text!r}")


class FlakyEmbedding:
    """Fails permanently once ``fail_at`` distinct texts have been seen."""

    def __init__(self, inner, fail_at):
        self.name = "flaky-embed"
        self.dim = inner.dim
        self.inner = inner
        self.fail_at = fail_at
        self.calls = 0

    def embed(self, text):
        self.calls += 1
        if self.calls >= self.fail_at:
            raise ConnectionError("synthetic outage")
        return self.inner.embed(text)


class TestIngest:
    def test_skips_malformed_and_reports(self):
        source = [raw_record("a"), raw_record("b"), raw_record("c"),
                  {"id": "broken", "composition": [{"type": "Text"}]}]
        store, report = ingest_ui_records(source)
        assert len(store) == 3
        assert report.accepted == 3
        assert report.skipped == 1
        assert "broken" in report.reasons[0]

    def test_empty_source_fatal(self):
        with pytest.raises(EmptyKnowledgeBaseError):
            ingest_ui_records([])

    def test_all_malformed_fatal(self):
        with pytest.raises(EmptyKnowledgeBaseError):
            ingest_ui_records([{"nope": 1}])

    def test_captions_populate_theme_attrs(self):
        store, _ = ingest_ui_records(list(SAMPLE_UI_RECORDS), captions=SAMPLE_CAPTIONS)
        by_id = {r.id: r for r in store.records}
        attrs = by_id["login-screen"].theme_attrs
        assert attrs == ThemeAttrs(
            theme_color="dark blue",
            primary_color="white",
            theme_description="a minimal sign in screen over a blurred photo",
            app_category="productivity",
        )
        # record without captions keeps empty attributes
        assert by_id["settings-page"].theme_attrs == ThemeAttrs()

    def test_ingest_idempotent(self):
        a, _ = ingest_ui_records(list(SAMPLE_UI_RECORDS), captions=SAMPLE_CAPTIONS)
        b, _ = ingest_ui_records(list(SAMPLE_UI_RECORDS), captions=SAMPLE_CAPTIONS)
        assert a == b
        assert store_hash(a) == store_hash(b)

    def test_ingest_from_directory_sorted(self, tmp_path):
        for rid in ("zz", "aa"):
            (tmp_path / f"{rid}.json").write_text(json.dumps(raw_record(rid)))
        (tmp_path / "bad.json").write_text("{not json")
        store, report = ingest_ui_records(tmp_path)
        assert [r.id for r in store.records] == ["aa", "zz"]
        assert report.skipped == 1

    def test_duplicate_ids_skipped(self):
        store, report = ingest_ui_records([raw_record("a"), raw_record("a")])
        assert len(store) == 1
        assert report.skipped == 1


class TestEmbed:
    def test_mock_embedding_deterministic(self, mock_embed):
        store, _ = ingest_ui_records([raw_record("a"), raw_record("b")])
        s1 = embed_records(store, mock_embed)
        s2 = embed_records(store, mock_embed)
        assert s1 == s2
        assert s1.dim == mock_embed.dim
        assert all(len(r.embedding) == 64 for r in s1.records)

    def test_wrong_dimension_rejected(self):
        store, _ = ingest_ui_records([raw_record("a")])
        bad = StubEmbedding(dim=8, fallback=[1.0] * 5)
        with pytest.raises(DimensionMismatchError):
            embed_records(store, bad)

    def test_resume_equals_run_to_completion(self, mock_embed):
        source = [raw_record(f"r{i:02d}") for i in range(10)]
        store, _ = ingest_ui_records(source)
        complete = embed_records(store, mock_embed)

        flaky = FlakyEmbedding(mock_embed, fail_at=6)  # 3 retries all land >= 6
        with pytest.raises(EmbeddingProgressError) as exc:
            embed_records(store, flaky, backoff=0, sleep=lambda s: None)
        err = exc.value
        assert err.last_embedded_id == "r04"
        partial = err.partial_store
        embedded = [r.id for r in partial.records if r.embedding is not None]
        assert embedded == ["r00", "r01", "r02", "r03", "r04"]

        resumed = embed_records(partial, mock_embed)
        assert resumed == complete

    def test_retry_then_success(self, mock_embed):
        class OneFailure:
            name, dim = "flaky", mock_embed.dim

            def __init__(self):
                self.calls = 0

            def embed(self, text):
                self.calls += 1
                if self.calls == 1:
                    raise TimeoutError("blip")
                return mock_embed.embed(text)

        store, _ = ingest_ui_records([raw_record("a")])
        out = embed_records(store, OneFailure(), backoff=0, sleep=lambda s: None)
        assert out.is_embedded()


class TestCosine:
    def test_self_similarity(self):
        assert cosine_similarity((1, 2, 3), (1, 2, 3)) == pytest.approx(1.0)

    def test_orthogonal(self):
        assert cosine_similarity((1, 0), (0, 1)) == pytest.approx(0.0)

    def test_hand_arithmetic(self):
        # dot=4, norms sqrt(5)*sqrt(5) -> 4/5
        assert cosine_similarity((1, 2), (2, 1)) == pytest.approx(0.8)

    def test_dim_mismatch(self):
        with pytest.raises(DimensionMismatchError):
            cosine_similarity((1, 2), (1, 2, 3))

    def test_zero_vector(self):
        with pytest.raises(ZeroVectorError):
            cosine_similarity((0, 0), (1, 2))

    @given(
        st.lists(st.floats(-100, 100), min_size=3, max_size=3),
        st.lists(st.floats(-100, 100), min_size=3, max_size=3),
        st.floats(0.01, 50),
    )
    @settings(max_examples=100, deadline=None)
    def test_symmetry_and_scale_invariance(self, a, b, c):
        if all(abs(x) < 1e-9 for x in a) or all(abs(x) < 1e-9 for x in b):
            return
        sab = cosine_similarity(a, b)
        assert abs(sab - cosine_similarity(b, a)) < 1e-9
        scaled = [c * x for x in a]
        assert abs(sab - cosine_similarity(scaled, b)) < 1e-9


def brute_force_rank(records, qvec, k):
    """Independent retrieval oracle: fsum-based cosine, full sort."""
    scored = []
    for rec in records:
        dot = math.fsum(x * y for x, y in zip(qvec, rec.embedding))
        na = math.sqrt(math.fsum(x * x for x in qvec))
        nb = math.sqrt(math.fsum(y * y for y in rec.embedding))
        scored.append((dot / (na * nb), rec.id))
    scored.sort(key=lambda t: (-t[0], t[1]))
    return [rid for _, rid in scored[:k]]


class TestRetrieve:
    def _store_of(self, vectors):
        records = tuple(
            KnowledgeRecord(
                id=f"r{i:03d}",
                composition=(("Text", BBox(0, 0, 10, 10)),),
                content_descriptions=("x",),
                high_level="h",
                embedding=tuple(v),
            )
            for i, v in enumerate(vectors)
        )
        return KnowledgeStore(kind="ui", dim=len(vectors[0]), records=records)

    def test_matches_brute_force_oracle(self):
        rng = np.random.default_rng(42)
        vectors = rng.normal(size=(5, 16))
        store = self._store_of(vectors)
        qvec = rng.normal(size=16)
        backend = StubEmbedding(dim=16, fallback=list(qvec))
        refs = retrieve(store, "query", backend, RetrievalConfig(k=2))
        assert [r.record_id for r in refs] == brute_force_rank(store.records, qvec, 2)
        assert refs[0].score >= refs[1].score

    def test_k_clamped_to_store_size(self):
        store = self._store_of([[1.0, 0.0]])
        backend = StubEmbedding(dim=2, fallback=[1.0, 0.0])
        refs = retrieve(store, "q", backend, RetrievalConfig(k=2))
        assert len(refs) == 1

    def test_default_k_is_2(self):
        assert RetrievalConfig().k == 2
        store = self._store_of(np.eye(4).tolist())
        backend = StubEmbedding(dim=4, fallback=[1.0, 0.0, 0.0, 0.0])
        assert len(retrieve(store, "q", backend)) == 2

    def test_tie_breaks_ascending_id(self):
        v = [1.0, 0.0]
        store = self._store_of([v, v, v])
        backend = StubEmbedding(dim=2, fallback=v)
        refs = retrieve(store, "q", backend, RetrievalConfig(k=3))
        assert [r.record_id for r in refs] == ["r000", "r001", "r002"]

    def test_unembedded_store_rejected(self):
        store, _ = ingest_ui_records([raw_record("a")])
        backend = StubEmbedding(dim=4, fallback=[1, 0, 0, 0])
        with pytest.raises(KnowledgeBaseError):
            retrieve(store, "q", backend)

    def test_rendered_reference_is_canonical(self, mock_embed, ui_store):
        refs = retrieve(ui_store, "login page", mock_embed)
        by_id = {r.id: r for r in ui_store.records}
        for ref in refs:
            assert ref.rendered == render_record(by_id[ref.record_id])

    def test_invalid_k(self):
        with pytest.raises(ValueError):
            RetrievalConfig(k=0)


class TestLookupIcon:
    def test_exact_description_wins(self, mock_embed, icon_store):
        target = icon_store.records[0]
        assert lookup_icon(icon_store, target.description, mock_embed).name == target.name

    def test_msg_maps_to_message(self, mock_embed):
        subset = build_icon_store(
            r for r in sample_icon_store().records if r.name in ("message", "search", "home")
        )
        store = embed_records(subset, mock_embed)
        # independent brute-force scan under the mock embedding
        pvec = mock_embed.embed("msg")
        best = min(
            store.records,
            key=lambda r: (-cosine_similarity(pvec, r.embedding), r.name),
        )
        assert best.name == "message"
        assert lookup_icon(store, "msg", mock_embed).name == "message"

    def test_singleton_store(self, mock_embed):
        store = embed_records(
            build_icon_store([sample_icon_store().records[0]]), mock_embed
        )
        assert lookup_icon(store, "anything at all", mock_embed).name == store.records[0].name

    def test_empty_store_rejected(self):
        with pytest.raises(EmptyKnowledgeBaseError):
            build_icon_store([])


class TestPersistence:
    def test_round_trip_exact(self, ui_store, tmp_path):
        path = tmp_path / "ui_kb.jsonl"
        save_store(ui_store, path)
        loaded = load_store(path)
        assert loaded == ui_store
        assert store_hash(loaded) == store_hash(ui_store)

    def test_header_format(self, ui_store, tmp_path):
        path = tmp_path / "ui_kb.jsonl"
        save_store(ui_store, path)
        header = json.loads(path.read_text().splitlines()[0])
        assert header == {"dim": 64, "kind": "ui"}

    def test_icon_round_trip(self, icon_store, tmp_path):
        path = tmp_path / "icon_kb.jsonl"
        save_store(icon_store, path)
        loaded = load_store(path)
        assert loaded == icon_store
        assert loaded.records[0].svg.startswith("<svg")

    def test_bad_svg_rejected(self):
        with pytest.raises(KnowledgeBaseError):
            IconRecord(name="x", svg="<svg><unclosed", description="d")


def test_retrieval_oracle_property():
    """retrieve == exhaustive scan-and-sort on random stores (small version)."""
    rng = np.random.default_rng(7)
    for _ in range(25):
        n = int(rng.integers(1, 40))
        dim = 16
        vectors = rng.normal(size=(n, dim))
        if rng.random() < 0.5 and n >= 3:
            vectors[1] = vectors[0]  # force a tie
        records = tuple(
            KnowledgeRecord(
                id=f"r{i:03d}",
                composition=(("Text", BBox(0, 0, 10, 10)),),
                content_descriptions=("c",),
                high_level="h",
                embedding=tuple(float(x) for x in vectors[i]),
            )
            for i in range(n)
        )
        store = KnowledgeStore(kind="ui", dim=dim, records=records)
        qvec = rng.normal(size=dim)
        backend = StubEmbedding(dim=dim, fallback=list(qvec))
        refs = retrieve(store, "q", backend, RetrievalConfig(k=2))
        assert [r.record_id for r in refs] == brute_force_rank(records, qvec, 2)
