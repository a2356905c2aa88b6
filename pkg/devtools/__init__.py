"""Development scripts for asc-counts: lint, format, type check and tests."""
