"""Annotated field types for exact values.

Exact values go over the wire as decimal strings ("4/5", "1853020188851841") so that no JSON
consumer ever rounds them through a float.
"""

from fractions import Fraction
from typing import Annotated

from pydantic import BeforeValidator, PlainSerializer, PlainValidator


def _to_fraction(value: object) -> Fraction:
    if isinstance(value, bool):
        raise TypeError(f"Expected an exact rational, got {type(value).__name__}")
    if isinstance(value, Fraction):
        return value
    if isinstance(value, (int, str)):
        try:
            return Fraction(value)
        except ValueError as e:
            raise ValueError(f"Not an exact rational: {value!r}") from e
    raise TypeError(f"Expected an exact rational, got {type(value).__name__}")


def _to_int(value: object) -> object:
    if isinstance(value, str):
        try:
            return int(value)
        except ValueError as e:
            raise ValueError(f"Not an exact integer: {value!r}") from e
    return value


ExactRational = Annotated[
    Fraction,
    PlainValidator(_to_fraction),
    PlainSerializer(str, return_type=str, when_used="json"),
]

ExactInt = Annotated[
    int,
    BeforeValidator(_to_int),
    PlainSerializer(str, return_type=str, when_used="json"),
]
