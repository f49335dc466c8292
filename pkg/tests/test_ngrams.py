"""Tests for featurizer.ngrams — byte n-gram term frequencies."""

from __future__ import annotations

import numpy as np
import pytest

from featurizer.ngrams import TfVector, extract_ngram_tf, ngram_indices


class TestNgramIndices:
    def test_bigrams_are_big_endian(self) -> None:
        assert ngram_indices(b"\xab\xcd", 2).tolist() == [0xABCD]

    def test_overlapping_windows(self) -> None:
        assert ngram_indices(b"abab", 2).tolist() == [0x6162, 0x6261, 0x6162]

    def test_trigrams(self) -> None:
        assert ngram_indices(b"\x01\x02\x03\x04", 3).tolist() == [0x010203, 0x020304]

    def test_shorter_than_n_is_empty(self) -> None:
        assert ngram_indices(b"x", 2).size == 0
        assert ngram_indices(b"", 1).size == 0

    @pytest.mark.parametrize("n", [0, 4, -1])
    def test_order_out_of_range(self, n: int) -> None:
        with pytest.raises(ValueError):
            ngram_indices(b"abcdef", n)


class TestExtractNgramTf:
    def test_dictionary_size(self) -> None:
        assert extract_ngram_tf(b"abc", 1).dictionary_size == 256
        assert extract_ngram_tf(b"abc", 2).dictionary_size == 65536

    def test_counts_repeated_bigram(self) -> None:
        tf = extract_ngram_tf(b"abab", 2)
        assert tf.counts[0x6162] == 2
        assert tf.counts[0x6261] == 1
        assert tf.total_ngrams == 3
        assert tf.distinct == 2

    def test_total_is_length_minus_n_plus_one(self) -> None:
        data = bytes(range(200)) * 3
        for n in (1, 2, 3):
            tf = extract_ngram_tf(data, n)
            assert tf.total_ngrams == len(data) - n + 1
            assert int(tf.counts.sum()) == tf.total_ngrams

    def test_unigrams_are_a_byte_histogram(self) -> None:
        rng = np.random.Generator(np.random.PCG64(3))
        data = rng.integers(0, 256, size=5000, dtype=np.uint8).tobytes()
        expected = np.zeros(256, dtype=np.int64)
        for b in data:
            expected[b] += 1
        np.testing.assert_array_equal(extract_ngram_tf(data, 1).counts, expected)

    def test_empty_input(self) -> None:
        tf = extract_ngram_tf(b"", 2)
        assert tf.total_ngrams == 0
        assert tf.distinct == 0

    def test_accepts_bytearray_and_memoryview(self) -> None:
        data = b"hello world"
        ref = extract_ngram_tf(data, 2).counts
        np.testing.assert_array_equal(extract_ngram_tf(bytearray(data), 2).counts, ref)
        np.testing.assert_array_equal(extract_ngram_tf(memoryview(data), 2).counts, ref)


class TestTfVectorAdd:
    def test_add_sums_counts(self) -> None:
        a = extract_ngram_tf(b"aaaa", 1)
        b = extract_ngram_tf(b"ab", 1)
        total = a + b
        assert total.counts[ord("a")] == 5
        assert total.counts[ord("b")] == 1
        assert total.total_ngrams == 6

    def test_add_rejects_different_dictionaries(self) -> None:
        with pytest.raises(ValueError):
            extract_ngram_tf(b"ab", 1) + extract_ngram_tf(b"ab", 2)

    def test_is_frozen(self) -> None:
        tf = TfVector(counts=np.zeros(256, dtype=np.int64), total_ngrams=0)
        with pytest.raises(AttributeError):
            tf.total_ngrams = 3  # type: ignore[misc]
