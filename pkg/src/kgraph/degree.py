"""Multi-index degrees in N^k and their extended counterparts in (N u {inf})^k.

Degrees are plain tuples of ints. Extended degrees may carry ``INF`` entries.
"""
from __future__ import annotations

import itertools
import math
from typing import Iterator, Sequence

INF = math.inf

Degree = tuple[int, ...]
ExtDegree = tuple  # entries are int or INF


def zero(k: int) -> Degree:
    return (0,) * k


def unit(k: int, color: int) -> Degree:
    """The generator e_color (colors are 1-based)."""
    return tuple(1 if i == color - 1 else 0 for i in range(k))


def ones(k: int, value: int = 1) -> Degree:
    return (value,) * k


def join(m: Sequence, n: Sequence) -> tuple:
    return tuple(max(a, b) for a, b in zip(m, n))


def meet(m: Sequence, n: Sequence) -> tuple:
    return tuple(min(a, b) for a, b in zip(m, n))


def add(m: Sequence, n: Sequence) -> tuple:
    return tuple(a + b for a, b in zip(m, n))


def sub(m: Sequence, n: Sequence) -> tuple:
    """Coordinatewise difference; ``INF - finite`` stays ``INF``."""
    out = []
    for a, b in zip(m, n):
        if b == INF:
            raise ValueError("cannot subtract an infinite degree")
        out.append(a if a == INF else a - b)
    return tuple(out)


def leq(m: Sequence, n: Sequence) -> bool:
    return all(a <= b for a, b in zip(m, n))


def is_zero(m: Sequence) -> bool:
    return all(a == 0 for a in m)


def is_finite(m: Sequence) -> bool:
    return all(a != INF for a in m)


def total(m: Sequence) -> int:
    return sum(m)


def comparable(m: Sequence, n: Sequence) -> bool:
    return leq(m, n) or leq(n, m)


def box(n: Sequence[int]) -> list[Degree]:
    """All m <= n, ordered by total degree then lexicographically."""
    out = list(itertools.product(*(range(c + 1) for c in n)))
    out.sort(key=lambda m: (sum(m), m))
    return out


def iter_box(n: Sequence[int]) -> Iterator[Degree]:
    yield from box(n)


def parse(text: str, k: int) -> Degree:
    """Parse ``"2"`` (broadcast) or ``"1,0"`` into a degree of rank k."""
    parts = [p.strip() for p in str(text).split(",") if p.strip()]
    try:
        vals = [int(p) for p in parts]
    except ValueError as exc:
        raise ValueError(f"bad degree {text!r}") from exc
    if len(vals) == 1:
        vals = vals * k
    if len(vals) != k or any(v < 0 for v in vals):
        raise ValueError(f"degree {text!r} does not fit rank {k}")
    return tuple(vals)


def fmt(m: Sequence) -> str:
    return ",".join("inf" if a == INF else str(int(a)) for a in m)


def to_json(m: Sequence) -> list:
    return [None if a == INF else int(a) for a in m]
