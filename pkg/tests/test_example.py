"""Smoke test for the walkthrough script."""

import pytest

import example


def test_example_runs(capsys: pytest.CaptureFixture[str]) -> None:
    """The walkthrough prints the C_3 counts and finishes."""
    example.main()
    out = capsys.readouterr().out
    assert "(1, 8, 72, 576" in out
    assert "a_n ~ 4/5 * 3^(2 n)" in out
    assert "=== Example complete ===" in out
