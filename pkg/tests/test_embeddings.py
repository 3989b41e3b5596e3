import logging

import numpy as np
import pytest

from semlink import (
    FileFormatError,
    OutOfVocabularyError,
    ValidationError,
    embed_entity,
    embed_entity_set,
    embed_entity_set_or_zero,
    load_word_vectors,
)


def write_vectors(tmp_path, text):
    path = tmp_path / "vectors.txt"
    path.write_text(text)
    return path


def test_load_basic(tmp_path):
    path = write_vectors(tmp_path, "cat 1 2 3\ndog 4 5 6\n")
    table = load_word_vectors(path, expected_dim=3)
    assert len(table) == 2
    assert table["cat"].shape == (3,)
    np.testing.assert_array_equal(table["dog"], [4.0, 5.0, 6.0])


def test_dimension_mismatch_names_line(tmp_path):
    path = write_vectors(tmp_path, "cat 1 2 3\ndog 4 5\n")
    with pytest.raises(FileFormatError, match="line 2"):
        load_word_vectors(path, expected_dim=3)


def test_duplicate_token_last_wins(tmp_path):
    path = write_vectors(tmp_path, "cat 1 2\ncat 3 4\n")
    table = load_word_vectors(path, expected_dim=2)
    assert len(table) == 1
    np.testing.assert_array_equal(table["cat"], [3.0, 4.0])


def test_unparseable_number(tmp_path):
    path = write_vectors(tmp_path, "cat 1 x\n")
    with pytest.raises(FileFormatError, match="line 1"):
        load_word_vectors(path, expected_dim=2)


def test_empty_file_rejected(tmp_path):
    with pytest.raises(FileFormatError, match="empty"):
        load_word_vectors(write_vectors(tmp_path, ""), expected_dim=2)


def test_missing_token_is_distinct(tmp_path):
    table = load_word_vectors(write_vectors(tmp_path, "cat 1 2\n"), 2)
    assert table.get("dog") is None
    assert "dog" not in table
    with pytest.raises(KeyError):
        table["dog"]


def test_reload_reproduces_vectors(tmp_path):
    rng = np.random.default_rng(0)
    lines = []
    for i in range(20):
        vec = rng.standard_normal(5)
        lines.append(f"tok{i} " + " ".join(repr(float(v)) for v in vec))
    path = write_vectors(tmp_path, "\n".join(lines) + "\n")
    table = load_word_vectors(path, expected_dim=5)
    reloaded = load_word_vectors(path, expected_dim=5)
    for i in range(20):
        np.testing.assert_array_equal(table[f"tok{i}"], reloaded[f"tok{i}"])


@pytest.fixture
def table(tmp_path):
    return load_word_vectors(
        write_vectors(
            tmp_path,
            "person 1 0 1\ntennis 2 2 2\nracket 0 0 4\n",
        ),
        expected_dim=3,
    )


def test_embed_single_token(table):
    emb = embed_entity(table, "person")
    np.testing.assert_array_equal(emb.vector, [1.0, 0.0, 1.0])
    assert emb.source_tokens == ["person"]


def test_embed_is_case_insensitive(table):
    np.testing.assert_array_equal(
        embed_entity(table, "Person").vector, [1.0, 0.0, 1.0]
    )


def test_embed_two_tokens_mean(table):
    emb = embed_entity(table, "tennis racket")
    np.testing.assert_allclose(emb.vector, [1.0, 1.0, 3.0])
    assert emb.source_tokens == ["tennis", "racket"]


def test_embed_all_oov(table):
    with pytest.raises(OutOfVocabularyError):
        embed_entity(table, "zzqx")


def test_embed_empty_label(table):
    with pytest.raises(ValidationError):
        embed_entity(table, "   ")


def test_embed_set_single(table):
    np.testing.assert_array_equal(
        embed_entity_set(table, ["person"]), [1.0, 0.0, 1.0]
    )


def test_embed_set_mean_of_two(table):
    got = embed_entity_set(table, ["person", "racket"])
    np.testing.assert_allclose(got, [0.5, 0.0, 2.5])


def test_embed_set_skips_oov_with_report(table, caplog):
    with caplog.at_level(logging.WARNING, logger="semlink.embeddings"):
        got = embed_entity_set(table, ["person", "zzqx"])
    np.testing.assert_array_equal(got, [1.0, 0.0, 1.0])
    assert "zzqx" in caplog.text


def test_embed_set_empty_list(table):
    with pytest.raises(ValidationError):
        embed_entity_set(table, [])


def test_embed_set_nothing_embeddable(table):
    with pytest.raises(OutOfVocabularyError):
        embed_entity_set(table, ["zzqx", "qqzz"])


def test_embed_set_zero_fallback(table, caplog):
    with caplog.at_level(logging.WARNING, logger="semlink.embeddings"):
        got = embed_entity_set_or_zero(table, ["zzqx"])
    np.testing.assert_array_equal(got, np.zeros(3))
    assert "zero vector" in caplog.text


def test_embed_set_order_invariant(table):
    labels = ["person", "tennis", "racket", "tennis racket"]
    base = embed_entity_set(table, labels)
    rng = np.random.default_rng(5)
    for _ in range(10):
        perm = [labels[i] for i in rng.permutation(len(labels))]
        np.testing.assert_array_equal(embed_entity_set(table, perm), base)


def test_embed_set_inf_norm_bound(tmp_path):
    rng = np.random.default_rng(11)
    lines = []
    for i in range(8):
        vec = rng.standard_normal(6)
        lines.append(f"w{i} " + " ".join(repr(float(v)) for v in vec))
    table = load_word_vectors(
        write_vectors(tmp_path, "\n".join(lines) + "\n"), expected_dim=6
    )
    labels = [f"w{i}" for i in range(8)]
    got = embed_entity_set(table, labels)
    max_norm = max(np.abs(table[f"w{i}"]).max() for i in range(8))
    assert np.abs(got).max() <= max_norm + 1e-15
