"""Shared fixtures: the seeded 100-grid corpus used by the acceptance suite."""

from __future__ import annotations

from dataclasses import dataclass

import pytest

from gridcover.bench import generate_instances
from gridcover.bounds import CostParams
from gridcover.pathgen import ConstructResult, construct_detailed
from gridcover.verify import CoverageReport, verify_coverage

CORPUS_SEED = 20240611
CORPUS_PARAMS = CostParams(k=1.0, alpha=1.0, beta=1.0)


@dataclass
class CorpusRecord:
    name: str
    grid: object
    params: CostParams
    result: ConstructResult
    coverage: CoverageReport


@pytest.fixture(scope="session")
def corpus() -> list[CorpusRecord]:
    """100 seeded grids (areas 1-400, with and without holes), constructed
    once and coverage-checked at h = k/16."""
    import random

    from gridcover.bench import BenchInstance, random_blob, rectangle

    p = CORPUS_PARAMS
    instances = [
        BenchInstance("min_area_1", rectangle(1, 1)),
        BenchInstance("max_area_400", random_blob(random.Random(CORPUS_SEED), 401, holes=1)),
    ] + generate_instances(CORPUS_SEED, count=98, max_area=400)
    records = []
    for inst in instances:
        result = construct_detailed(inst.grid, p, check=False)
        coverage = verify_coverage(inst.grid, list(result.path.stops), p.k, h=p.k / 16)
        records.append(CorpusRecord(name=inst.name, grid=inst.grid, params=p,
                                    result=result, coverage=coverage))
    return records
