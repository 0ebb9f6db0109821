"""Multiset and lexicographic extensions of an arbitrary relation.

The relation need not be transitive, so the multiset extension is decided
by searching over which equal pairs are kept rather than by a greedy
cancellation.
"""

from __future__ import annotations

from typing import Callable, Optional, Sequence

# A matching entry: (index in N, index in M, kind) where kind is "=" for a
# kept pair and "R" for an element of N dominated by a removed element of M.
Match = tuple[int, int, str]


def mul_search(
    m_size: int,
    n_size: int,
    eq: Callable[[int, int], bool],
    rel: Callable[[int, int], object],
) -> Optional[list[tuple[int, int, str, object]]]:
    """Find a witness for ``M >mul N`` over index sets.

    ``eq(i, j)`` says ``M[i] == N[j]``; ``rel(i, j)`` returns evidence for
    ``M[i] R N[j]`` or ``None``.  The result lists ``(j, i, kind, evidence)``.
    """
    cache: dict[tuple[int, int], object] = {}

    def r(i: int, j: int):
        if (i, j) not in cache:
            cache[(i, j)] = rel(i, j)
        return cache[(i, j)]

    def finish(kept: dict[int, int]):
        removed = [i for i in range(m_size) if i not in kept.values()]
        if not removed:
            return None
        out = []
        for j in range(n_size):
            if j in kept:
                out.append((j, kept[j], "=", None))
                continue
            for i in removed:
                ev = r(i, j)
                if ev is not None:
                    out.append((j, i, "R", ev))
                    break
            else:
                return None
        return out

    def assign(j: int, kept: dict[int, int]):
        if j == n_size:
            return finish(kept)
        used = set(kept.values())
        for i in range(m_size):
            if i not in used and eq(i, j):
                kept[j] = i
                found = assign(j + 1, kept)
                del kept[j]
                if found is not None:
                    return found
        return assign(j + 1, kept)

    return assign(0, {})


def lex_search(
    m_size: int,
    n_size: int,
    eq: Callable[[int, int], bool],
    rel: Callable[[int, int], object],
) -> Optional[tuple[int, object]]:
    """First ``i`` (0-based) with equal prefixes and ``M[i] R N[i]``."""
    for i in range(min(m_size, n_size)):
        ev = rel(i, i)
        if ev is not None:
            return i, ev
        if not eq(i, i):
            return None
    return None


def lex_candidates(m_size: int, n_size: int, eq: Callable[[int, int], bool]) -> list[int]:
    """Every index at which a lexicographic decrease may happen."""
    out = []
    for i in range(min(m_size, n_size)):
        out.append(i)
        if not eq(i, i):
            break
    return out


def mul_gt(ms: Sequence, ns: Sequence, gt: Callable[[object, object], bool]) -> bool:
    """Multiset extension of ``gt`` with syntactic equality."""
    found = mul_search(
        len(ms), len(ns), lambda i, j: ms[i] == ns[j], lambda i, j: True if gt(ms[i], ns[j]) else None
    )
    return found is not None


def lex_gt(ms: Sequence, ns: Sequence, gt: Callable[[object, object], bool]) -> bool:
    return (
        lex_search(len(ms), len(ns), lambda i, j: ms[i] == ns[j], lambda i, j: True if gt(ms[i], ns[j]) else None)
        is not None
    )


def check_mul_matching(m_size: int, n_size: int, matching) -> bool:
    """Validate the shape of a matching returned by :func:`mul_search`."""
    seen_j = sorted(entry[0] for entry in matching)
    if seen_j != list(range(n_size)):
        return False
    kept = [entry[1] for entry in matching if entry[2] == "="]
    if len(set(kept)) != len(kept):
        return False
    if len(kept) >= m_size:
        return False
    removed = set(range(m_size)) - set(kept)
    return all(entry[1] in removed for entry in matching if entry[2] == "R")
