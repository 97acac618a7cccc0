import io
import logging

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from mcse.embeddings import EmbeddingStore, load_embeddings, phrase_vector, similarity, similarity_matrix
from mcse.exceptions import EmbeddingFormatError


def load(text):
    return load_embeddings(io.StringIO(text))


class TestLoad:
    def test_with_header(self):
        s = load("2 3\na 1 0 0\nb 0 1 0\n")
        assert (s.dim, len(s)) == (3, 2)

    def test_headerless_matches_header(self):
        a = load("2 3\na 1 0 0\nb 0 1 0\n")
        b = load("a 1 0 0\nb 0 1 0\n")
        assert a.index == b.index
        np.testing.assert_array_equal(a.vectors, b.vectors)

    def test_dimension_error(self):
        with pytest.raises(EmbeddingFormatError, match="line 3"):
            load("2 3\na 1 0 0\nb 0 1\n")

    def test_non_numeric(self):
        with pytest.raises(EmbeddingFormatError, match="non-numeric"):
            load("a 1 x 0\n")

    def test_non_finite(self):
        with pytest.raises(EmbeddingFormatError):
            load("a 1 nan 0\n")

    def test_empty(self):
        with pytest.raises(EmbeddingFormatError, match="empty"):
            load("")

    def test_duplicate_last_wins(self, caplog):
        with caplog.at_level(logging.WARNING):
            s = load("a 1 0\na 0 1\n")
        np.testing.assert_array_equal(s["a"], [0, 1])
        assert "duplicate" in caplog.text

    def test_case_insensitive(self):
        s = load("Edema 1 0\n")
        assert "EDEMA" in s and "edema" in s


class TestPhraseVector:
    def test_mean(self, basis_store):
        pv = phrase_vector("a b", basis_store)
        np.testing.assert_array_equal(pv.vector, [0.5, 0.5, 0.0])
        assert pv.count == 2

    def test_all_oov(self, basis_store):
        pv = phrase_vector("zzz", basis_store)
        np.testing.assert_array_equal(pv.vector, [0, 0, 0])
        assert pv.count == 0

    def test_skip_oov(self, basis_store):
        pv = phrase_vector("a zzz", basis_store)
        np.testing.assert_array_equal(pv.vector, [1, 0, 0])
        assert pv.count == 1


class TestSimilarity:
    def test_identity(self, store):
        for phrase in ["pleural effusion", "mild to moderate pulmonary edema", "no pneumothorax"]:
            assert similarity(phrase, phrase, store) == 1.0

    def test_orthogonal(self, basis_store):
        assert similarity("a", "b", basis_store) == 0.0

    def test_negative_clamped(self):
        s = EmbeddingStore.from_dict({"up": [1, 0], "down": [-1, 0]})
        assert similarity("up", "down", s) == 0.0

    def test_oov_is_zero(self, basis_store):
        assert similarity("zzz", "a", basis_store) == 0.0
        assert similarity("zzz", "zzz", basis_store) == 0.0

    def test_matrix_matches_pairwise(self, store):
        rows = ["fluid overload", "inflammation", "no pneumothorax", "zzz"]
        cols = ["pulmonary masses", "hilar adenopathy", "qqq"]
        mat = similarity_matrix(rows, cols, store)
        for i, r in enumerate(rows):
            for j, c in enumerate(cols):
                assert mat[i, j] == pytest.approx(similarity(r, c, store), abs=1e-12)


TOKENS = ["t0", "t1", "t2", "t3", "t4", "t5"]
vectors = st.lists(st.floats(-5, 5, allow_nan=False).map(lambda x: round(x, 3)), min_size=4, max_size=4)
tables = st.fixed_dictionaries({t: vectors for t in TOKENS})
phrases = st.lists(st.sampled_from(TOKENS + ["oov"]), min_size=1, max_size=4).map(" ".join)


@settings(max_examples=300, deadline=None)
@given(tables, phrases, phrases, st.floats(0.01, 100))
def test_similarity_properties(table, a, b, scale):
    s = EmbeddingStore.from_dict(table)
    ab = similarity(a, b, s)
    assert 0.0 <= ab <= 1.0
    assert ab == similarity(b, a, s)
    scaled = EmbeddingStore.from_dict({k: [scale * x for x in v] for k, v in table.items()})
    assert similarity(a, b, scaled) == pytest.approx(ab, abs=1e-9)
    if np.any(phrase_vector(a, s).vector):
        assert similarity(a, a, s) == pytest.approx(1.0, abs=1e-12)
