import logging
from typing import List

import numpy as np

MASK_64 = (1 << 64) - 1
GOLDEN_GAMMA = 0x9E3779B97F4A7C15

DEFAULT_BLOCK_SIZE = 4096


def init_logging():
    logger = logging.getLogger()
    logger.setLevel(logging.DEBUG)
    console_logger = logging.StreamHandler()
    console_logger.setLevel(logging.INFO)
    formatter = logging.Formatter('%(asctime)s - %(name)s - %(levelname)s - %(message)s')
    console_logger.setFormatter(formatter)
    logger.addHandler(console_logger)


def splitmix64(value: int) -> int:
    """
    SplitMix64 finalizer: a fixed bijective 64-bit hash.
    """
    z = value & MASK_64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK_64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK_64
    return z ^ (z >> 31)


def derive_trial_seed(master_seed: int, trial_index: int) -> int:
    """
    Published per-trial seed derivation: splitmix64(master + (index + 1) * golden gamma).
    """
    return splitmix64((master_seed & MASK_64) + (trial_index + 1) * GOLDEN_GAMMA)


class RandomStream:
    """
    The single source of randomness for one run: a PCG64 generator read in blocks of doubles. Every
    integer is floor(u * k) of the next double, so the sequence of decisions is fixed by the seed alone.
    """

    def __init__(self, seed: int, block_size: int = DEFAULT_BLOCK_SIZE):
        self.seed = seed
        self.generator = np.random.Generator(np.random.PCG64(seed & MASK_64))
        self.block_size = block_size
        self.buffer = []
        self.pos = 0

    def get_seed(self) -> int:
        return self.seed

    def uniform(self) -> float:
        if self.pos >= len(self.buffer):
            self.buffer = self.generator.random(self.block_size).tolist()
            self.pos = 0
        u = self.buffer[self.pos]
        self.pos += 1
        return u

    def randbelow(self, k: int) -> int:
        if k <= 0:
            raise ValueError(f'randbelow requires a positive bound: {k}')
        return int(self.uniform() * k)

    def color(self, palette_size: int) -> int:
        return 1 + self.randbelow(palette_size)

    def choice(self, items: List[int]) -> int:
        return items[self.randbelow(len(items))]

    def permutation(self, n: int) -> List[int]:
        order = list(range(n))
        for i in range(n - 1, 0, -1):
            j = self.randbelow(i + 1)
            order[i], order[j] = order[j], order[i]
        return order
