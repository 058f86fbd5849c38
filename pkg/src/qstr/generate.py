"""Random networks for tests and benchmarks."""

from __future__ import annotations

import random
import re

from .algebra import Calculus
from .network import QCN

_MODEL = re.compile(r"^A\(\s*(\d+)\s*,\s*([0-9.]+)\s*,\s*([0-9.]+)\s*\)$")


def parse_model(text: str) -> tuple[int, float, float]:
    """Parse ``A(n,d,l)`` into its parameters."""
    m = _MODEL.match(text.strip())
    if not m:
        raise ValueError(f"model must look like A(n,d,l), got {text!r}")
    n, d, l = int(m.group(1)), float(m.group(2)), float(m.group(3))
    if n < 1 or not 0 <= d <= 1 or l <= 0:
        raise ValueError("need n >= 1, 0 <= d <= 1 and l > 0")
    return n, d, l


def random_network(calculus: Calculus, n: int, density: float, label_size: float,
                   rng: random.Random | int | None = None, name: str = "random") -> QCN:
    """Model A(n, d, l): each pair is constrained with probability ``density``;
    a constrained pair draws each base relation with probability
    ``label_size / |B|`` (redrawn until non-empty)."""
    if not isinstance(rng, random.Random):
        rng = random.Random(rng)
    q = QCN(calculus, [f"v{k}" for k in range(n)], name)
    k = calculus.size
    keep = min(1.0, label_size / k)
    for i, j in q.pairs():
        if rng.random() >= density:
            continue
        bits = 0
        while not bits:
            bits = sum(1 << b for b in range(k) if rng.random() < keep)
        q._set(i, j, bits)
    return q
