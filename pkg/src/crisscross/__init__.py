"""Binary codes correcting one criss-cross deletion (one row and one column) in square arrays."""

from .code import CodeParams, is_codeword, redundancy_bounds, sample_codeword, structural_check
from .decoder import DecodeTrace, classify, decode
from .errors import (
    AmbiguousDecoding,
    CrissCrossError,
    DecodeFailure,
    EnumerationRefused,
    InputError,
    ParseError,
)
from .grid import BitGrid, DeletionSpec, delete_cross, delete_rows_cols, format_grid, insert_rows_cols, parse_grid

__all__ = [
    "AmbiguousDecoding",
    "BitGrid",
    "CodeParams",
    "CrissCrossError",
    "DecodeFailure",
    "DecodeTrace",
    "DeletionSpec",
    "EnumerationRefused",
    "InputError",
    "ParseError",
    "classify",
    "decode",
    "delete_cross",
    "delete_rows_cols",
    "format_grid",
    "insert_rows_cols",
    "is_codeword",
    "parse_grid",
    "redundancy_bounds",
    "sample_codeword",
    "structural_check",
]
