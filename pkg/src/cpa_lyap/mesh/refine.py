"""Longest-edge bisection with conformity propagation (Rivara)."""
from __future__ import annotations

from collections import defaultdict

import numpy as np

from .geometry import longest_edge_global
from .triangulation import Triangulation


class _EdgeBisector:
    """Mutable working copy of a mesh, indexed by edges."""

    def __init__(self, t: Triangulation):
        self.vertices = [v for v in t.vertices]
        self.simplices: list[tuple[int, ...]] = [tuple(int(v) for v in s) for s in t.simplices]
        self.edges: dict[tuple[int, int], set[int]] = defaultdict(set)
        self._longest: dict[int, tuple[int, int]] = {}
        for i, s in enumerate(self.simplices):
            self._index(i, s)

    def _index(self, i: int, s) -> None:
        for p in range(len(s)):
            for q in range(p + 1, len(s)):
                self.edges[(min(s[p], s[q]), max(s[p], s[q]))].add(i)

    def _unindex(self, i: int, s) -> None:
        for p in range(len(s)):
            for q in range(p + 1, len(s)):
                e = (min(s[p], s[q]), max(s[p], s[q]))
                self.edges[e].discard(i)
                if not self.edges[e]:
                    del self.edges[e]

    def longest(self, i: int) -> tuple[int, int]:
        if i not in self._longest:
            self._longest[i] = longest_edge_global(self.vertices, self.simplices[i])
        return self._longest[i]

    def _split_edge(self, e: tuple[int, int]) -> None:
        a, b = e
        mid = len(self.vertices)
        self.vertices.append(0.5 * (self.vertices[a] + self.vertices[b]))
        for i in sorted(self.edges[e]):
            s = self.simplices[i]
            first = tuple(mid if v == b else v for v in s)
            second = tuple(mid if v == a else v for v in s)
            self._unindex(i, s)
            self._longest.pop(i, None)
            self.simplices[i] = first
            self._index(i, first)
            j = len(self.simplices)
            self.simplices.append(second)
            self._index(j, second)

    def bisect(self, edge: tuple[int, int]) -> None:
        """Bisect ``edge`` everywhere, first bisecting any longer edge in its way."""
        stack = [edge]
        while stack:
            e = stack[-1]
            if e not in self.edges:
                stack.pop()
                continue
            for i in sorted(self.edges[e]):
                le = self.longest(i)
                if le != e:
                    stack.append(le)
                    break
            else:
                self._split_edge(e)
                stack.pop()

    def result(self) -> Triangulation:
        return Triangulation(np.asarray(self.vertices), np.asarray(self.simplices, dtype=np.int64))


def refine_leb(t: Triangulation, i: int) -> Triangulation:
    """Bisect simplex ``i`` of ``t`` across its longest edge.

    Every simplex sharing that edge is bisected at the same midpoint. A
    neighbour whose own longest edge differs is first bisected along that
    edge, recursively, so the output stays conforming. The first child of
    a split simplex keeps the parent's index; the other is appended.
    """
    if not 0 <= i < t.n_simplices:
        raise IndexError(f"simplex index {i} out of range")
    work = _EdgeBisector(t)
    work.bisect(work.longest(i))
    return work.result()
