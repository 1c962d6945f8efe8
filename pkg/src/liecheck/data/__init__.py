"""Loader for the frozen reference constants shipped with the package."""

from __future__ import annotations

import json
from functools import lru_cache
from pathlib import Path


@lru_cache(maxsize=1)
def golden() -> dict:
    path = Path(__file__).with_name("golden.json")
    with open(path, encoding="utf-8") as fh:
        return json.load(fh)
