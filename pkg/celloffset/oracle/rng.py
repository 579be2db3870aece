"""
Counter-based sample streams.

Stream ``(seed, case_index)`` is a Philox generator keyed by that pair. Block
``b`` of a stream starts at counter ``[0, b, 0, 0]``, so any block can be drawn
without drawing the ones before it and the result does not depend on how the
blocks are spread over threads.
"""

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable, Iterable

import numpy as np

BLOCK_SIZE = 65536


def block_uniforms(seed: int, case_index: int, block: int, rows: int, dims: int) -> np.ndarray:
    """Uniforms on [0, 1) of shape ``(rows, dims)`` for one block of a stream."""
    bit_generator = np.random.Philox(
        key=np.array([seed, case_index], dtype=np.uint64),
        counter=np.array([0, block, 0, 0], dtype=np.uint64),
    )
    return np.random.Generator(bit_generator).random((rows, dims))


@dataclass(frozen=True)
class BlockStats:
    """Count, mean and sum of squared deviations of a batch of samples."""

    count: int
    mean: float
    m2: float

    @classmethod
    def of(cls, values: np.ndarray) -> "BlockStats":
        if values.size == 0:
            return cls(0, 0.0, 0.0)
        mean = float(values.mean())
        return cls(int(values.size), mean, float(np.square(values - mean).sum()))

    def merge(self, other: "BlockStats") -> "BlockStats":
        if other.count == 0:
            return self
        if self.count == 0:
            return other
        count = self.count + other.count
        delta = other.mean - self.mean
        mean = self.mean + delta * other.count / count
        m2 = self.m2 + other.m2 + delta * delta * self.count * other.count / count
        return BlockStats(count, mean, m2)

    @property
    def stderr(self) -> float:
        if self.count < 2:
            return 0.0
        return math.sqrt(self.m2 / (self.count - 1) / self.count)


def merge_all(blocks: Iterable[BlockStats]) -> BlockStats:
    total = BlockStats(0, 0.0, 0.0)
    for block in blocks:
        total = total.merge(block)
    return total


def run_blocks(sampler: Callable[[int, int], np.ndarray], samples: int, workers: int = 1) -> BlockStats:
    """
    Evaluate ``sampler(block, rows)`` over every block and merge in block order.

    :param sampler: returns the sample values of one block
    :param samples: total sample count
    :param workers: threads used to evaluate blocks
    """
    sizes = [min(BLOCK_SIZE, samples - start) for start in range(0, samples, BLOCK_SIZE)]
    jobs = list(enumerate(sizes))

    def one(job):
        block, rows = job
        return BlockStats.of(sampler(block, rows))

    if workers > 1 and len(jobs) > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            return merge_all(pool.map(one, jobs))
    return merge_all(one(job) for job in jobs)
