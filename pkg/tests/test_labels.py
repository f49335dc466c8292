"""Tests for labels."""

from __future__ import annotations

import pytest

from labels import Label, is_malware, parse_labels


class TestLabel:
    def test_values(self) -> None:
        assert Label.MALWARE == "malware"
        assert Label.BENIGN.value == "benign"

    def test_parse_exact(self) -> None:
        assert Label.parse("benign") is Label.BENIGN
        assert Label.parse(Label.MALWARE) is Label.MALWARE

    def test_parse_is_case_sensitive_by_default(self) -> None:
        with pytest.raises(ValueError):
            Label.parse("Malware")

    def test_fold_case(self) -> None:
        assert Label.parse(" MALWARE ", fold_case=True) is Label.MALWARE

    def test_unknown(self) -> None:
        with pytest.raises(ValueError, match="unknown label"):
            Label.parse("grayware")

    def test_parse_labels(self) -> None:
        assert parse_labels(["malware", Label.BENIGN]) == [Label.MALWARE, Label.BENIGN]

    def test_is_malware_mask(self) -> None:
        assert is_malware(["malware", "benign", Label.MALWARE]).tolist() == [True, False, True]
