"""Regex-free cl100k-style pretokenizer.

Offsets are byte offsets into the UTF-8 encoding of the input.
"""

from ._core import (
    ORACLE_PATTERN,
    BpeModel,
    InvalidModel,
    InvalidUtf8,
    OracleGap,
    ParseError,
    decide_branch,
    diff_corpus,
    fuzz,
    oracle_engine,
    oracle_split,
    peek_categorize,
    pretokenize,
    pretokenize_strings,
    unicode_version,
)

__all__ = [
    "ORACLE_PATTERN",
    "BpeModel",
    "InvalidModel",
    "InvalidUtf8",
    "OracleGap",
    "ParseError",
    "decide_branch",
    "diff_corpus",
    "fuzz",
    "oracle_engine",
    "oracle_split",
    "peek_categorize",
    "pretokenize",
    "pretokenize_strings",
    "unicode_version",
]
