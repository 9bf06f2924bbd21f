"""Cached models and tables shared across test modules."""

from functools import lru_cache
from pathlib import Path

from fusionk.matrix_model import build_model, fusion_table

GOLDEN = Path(__file__).parent / "golden"


@lru_cache(maxsize=None)
def model_for(k: int):
    return build_model(k)


@lru_cache(maxsize=None)
def table_for(k: int):
    return fusion_table(model_for(k))
