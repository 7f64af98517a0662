"""Corpus-level metrics and the generation timing harness."""

from __future__ import annotations

import time
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from ..errors import EmptyCorpus
from ..rng import SeededStream
from ..tree import ArticulationTree, canonicalize, structure_hash
from .. import _kernels
from .ted import MAX_TED_NODES, encode_postorder

# Above this corpus size, pairwise TED runs on a seeded random subsample.
TED_SUBSAMPLE = 500
_SUBSAMPLE_SEED = 0xC0FFEE


@dataclass
class CorpusMetrics:
    object_count: int
    avg_joint_number: float
    joint_number_variance: float
    mean_pairwise_ted: float
    distinct_structure_count: int
    seconds_per_object: float | None = None
    ted_subsampled: bool = False

    def to_lines(self) -> list[str]:
        lines = [
            f"object_count: {self.object_count}",
            f"avg_joint_number: {self.avg_joint_number:.6g}",
            f"joint_number_variance: {self.joint_number_variance:.6g}",
            f"mean_pairwise_ted: {self.mean_pairwise_ted:.6g}",
            f"distinct_structure_count: {self.distinct_structure_count}",
        ]
        if self.seconds_per_object is not None:
            lines.append(f"seconds_per_object: {self.seconds_per_object:.6g}")
        if self.ted_subsampled:
            lines.append(f"ted_subsampled_to: {TED_SUBSAMPLE}")
        return lines

    def to_dict(self) -> dict:
        return {
            "object_count": self.object_count,
            "avg_joint_number": self.avg_joint_number,
            "joint_number_variance": self.joint_number_variance,
            "mean_pairwise_ted": self.mean_pairwise_ted,
            "distinct_structure_count": self.distinct_structure_count,
            "seconds_per_object": self.seconds_per_object,
            "ted_subsampled": self.ted_subsampled,
        }


def corpus_stats(trees: list[ArticulationTree],
                 seconds_per_object: float | None = None) -> CorpusMetrics:
    """Joint-count statistics plus mean pairwise edit distance.

    Joint count is node count minus one (compound joints are expanded before
    this point, so a gimbal contributes two). Variance is the population
    variance. Pairwise TED averages all unordered pairs; corpora above 500
    trees are subsampled with a fixed seed, flagged in the output.
    """
    if not trees:
        raise EmptyCorpus("corpus_stats needs at least one tree")
    canon = [canonicalize(t) for t in trees]
    joints = np.array([len(t) - 1 for t in canon], dtype=np.float64)
    avg = float(joints.mean())
    variance = float(joints.var())
    distinct = len({structure_hash(t) for t in canon})

    pool = canon
    subsampled = False
    if len(pool) > TED_SUBSAMPLE:
        rng = SeededStream(_SUBSAMPLE_SEED)
        idx = list(range(len(pool)))
        picked = []
        for _ in range(TED_SUBSAMPLE):
            picked.append(idx.pop(rng.randint(0, len(idx) - 1)))
        pool = [pool[i] for i in sorted(picked)]
        subsampled = True

    mean_ted = 0.0
    if len(pool) > 1:
        for t in pool:
            if len(t) > MAX_TED_NODES:
                raise EmptyCorpus(f"tree with {len(t)} nodes exceeds TED cap")
        codes: dict[str, int] = {}
        encoded = [encode_postorder(t, codes) for t in pool]
        total = 0
        pairs = 0
        for i in range(len(encoded)):
            for j in range(i + 1, len(encoded)):
                total += _kernels.tree_distance(*encoded[i], *encoded[j])
                pairs += 1
        mean_ted = total / pairs

    return CorpusMetrics(
        object_count=len(trees),
        avg_joint_number=avg,
        joint_number_variance=variance,
        mean_pairwise_ted=float(mean_ted),
        distinct_structure_count=distinct,
        seconds_per_object=seconds_per_object,
        ted_subsampled=subsampled,
    )


def timing_harness(config, threads: int = 1) -> float:
    """Wall-clock seconds per object for a full generation run."""
    from ..pipeline import generate_corpus  # lazy: pipeline imports metrics

    start = time.perf_counter()
    generate_corpus(config, threads=threads)
    elapsed = time.perf_counter() - start
    return elapsed / max(config.object_count, 1)


def write_metrics(metrics: CorpusMetrics, text_path: str | Path,
                  json_path: str | Path | None = None) -> None:
    import json

    Path(text_path).write_text("\n".join(metrics.to_lines()) + "\n", encoding="utf-8")
    if json_path is not None:
        Path(json_path).write_text(
            json.dumps(metrics.to_dict(), indent=2, sort_keys=True) + "\n",
            encoding="utf-8")
