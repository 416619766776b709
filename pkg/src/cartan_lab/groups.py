"""Word balls of finitely generated matrix groups."""
from __future__ import annotations

import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field as dc_field
from typing import Dict, Iterator, List, Optional, Tuple

from .errors import DomainMismatchError, ElementCapError
from .matrices import GeneratorSet, GroupElement, GroupWord

DEFAULT_MAX_ELEMENTS = 200_000


def max_elements_from_env(default: int = DEFAULT_MAX_ELEMENTS) -> int:
    raw = os.environ.get("CARTAN_LAB_MAX_ELEMENTS")
    if not raw:
        return default
    value = int(raw)
    if value <= 0:
        raise ValueError("CARTAN_LAB_MAX_ELEMENTS must be positive")
    return value


@dataclass(frozen=True)
class EnumConfig:
    max_radius: int
    max_elements: int = DEFAULT_MAX_ELEMENTS
    parallel: bool = False
    workers: int = 1

    def __post_init__(self):
        if self.max_radius < 0 or self.max_elements <= 0 or self.workers <= 0:
            raise ValueError("radius must be >= 0 and caps positive")


@dataclass
class BallEntry:
    element: GroupElement
    word: GroupWord
    length: int


@dataclass
class Ball:
    """Elements of word length <= radius, keyed canonically, in BFS discovery order."""

    radius: int
    gens: GeneratorSet
    elements: Dict[bytes, BallEntry] = dc_field(default_factory=dict)

    def __len__(self):
        return len(self.elements)

    def __iter__(self) -> Iterator[BallEntry]:
        return iter(self.elements.values())

    def __contains__(self, key):
        return key in self.elements

    def layer_sizes(self) -> List[int]:
        """``|B_0|, |B_1|, ...`` for every complete radius."""
        counts = [0] * (self.radius + 1)
        for e in self.elements.values():
            counts[e.length] += 1
        out, total = [], 0
        for c in counts:
            total += c
            out.append(total)
        return out

    def restrict(self, radius: int) -> "Ball":
        if radius > self.radius:
            raise ValueError("cannot restrict a ball to a larger radius")
        kept = {k: e for k, e in self.elements.items() if e.length <= radius}
        return Ball(radius, self.gens, kept)


def _expand(chunk, letters):
    out = []
    for word_letters, g in chunk:
        for letter, s in letters:
            h = g @ s
            out.append((h.key(), h, word_letters + (letter,)))
    return out


def _chunks(seq, k):
    size = max(1, -(-len(seq) // k))
    return [seq[i:i + size] for i in range(0, len(seq), size)]


def generate_ball(gens: GeneratorSet, cfg: EnumConfig) -> Ball:
    """Breadth-first closure ``B_{L+1} = B_L u B_L * S^{+-1}``.

    Candidates are merged in (frontier order, generator order), so the first
    word found for an element is a shortest one and the result does not
    depend on how the frontier was split across workers.
    """
    if not gens.domain.exact:
        raise DomainMismatchError("word balls need exact coefficients for deduplication")
    e = gens.identity()
    ball = Ball(0, gens, {e.key(): BallEntry(e, GroupWord(), 0)})
    letters = [(letter, s) for letter, s in gens.letters()]
    frontier: List[Tuple[tuple, GroupElement]] = [((), e)]
    pool = None
    workers = cfg.workers if cfg.parallel else 1
    try:
        for radius in range(1, cfg.max_radius + 1):
            if workers > 1 and len(frontier) >= 2 * workers:
                if pool is None:
                    pool = ProcessPoolExecutor(max_workers=workers)
                parts = pool.map(_expand, _chunks(frontier, workers), [letters] * workers)
                candidates = [c for part in parts for c in part]
            else:
                candidates = _expand(frontier, letters)
            new_frontier = []
            for key, h, word_letters in candidates:
                if key in ball.elements:
                    continue
                if len(ball.elements) >= cfg.max_elements:
                    # hand back only the completed layers
                    raise ElementCapError(ball.restrict(radius - 1), radius - 1, cfg.max_elements)
                ball.elements[key] = BallEntry(h, GroupWord(word_letters), radius)
                new_frontier.append((word_letters, h))
            ball.radius = radius
            frontier = new_frontier
            if not frontier:
                # group is finite and exhausted; larger radii add nothing
                ball.radius = cfg.max_radius
                break
    finally:
        if pool is not None:
            pool.shutdown()
    return ball


UNKNOWN = None


def element_order(g: GroupElement, max_order: int = 64) -> Optional[int]:
    """Least ``m <= max_order`` with ``g^m = 1``; ``None`` (UNKNOWN) if there is none."""
    if not g.domain.exact:
        raise DomainMismatchError("element orders need exact coefficients")
    power = g
    for m in range(1, max_order + 1):
        if power.is_identity():
            return m
        power = power @ g
    return UNKNOWN
