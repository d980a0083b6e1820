"""Loaders for the bundled reference data (known witnesses and golden lists)."""

from __future__ import annotations

import json
from functools import lru_cache
from importlib import resources


@lru_cache(maxsize=None)
def _load(name: str) -> dict:
    with resources.files("legendre_pairs.data").joinpath(name).open("r") as fh:
        return json.load(fh)


def dioph_solutions() -> dict:
    """Golden all-odd five-square solution lists, keyed by str(m)."""
    return _load("dioph_solutions.json")


def x_table() -> list:
    """Reference x values for the balanced PSD split, one row per length."""
    return _load("x_table.json")


def ell85() -> dict:
    """Length-85 witness: generators, LexRank code pairs, first-pair detail."""
    return _load("ell85_codes.json")


def ell87() -> dict:
    """Length-87 witnesses: two full pairs and their shared 3-compression."""
    return _load("ell87_pairs.json")
