"""Small graph helpers over dense index-based digraphs (numpy bool matrices)."""

from __future__ import annotations

import heapq
from collections import deque
from typing import Callable, Optional, Sequence

import numpy as np


def strongly_connected_components(adj: np.ndarray) -> list[list[int]]:
    """Tarjan, iterative. adj[i, j] truthy means an edge i -> j.

    Components come out in reverse topological order; nodes inside a
    component keep discovery order.
    """
    n = adj.shape[0]
    index = [-1] * n
    low = [0] * n
    on_stack = [False] * n
    stack: list[int] = []
    comps: list[list[int]] = []
    counter = 0
    succ = [np.flatnonzero(adj[i]).tolist() for i in range(n)]

    for root in range(n):
        if index[root] != -1:
            continue
        work = [(root, 0)]
        while work:
            node, child_i = work.pop()
            if child_i == 0:
                index[node] = low[node] = counter
                counter += 1
                stack.append(node)
                on_stack[node] = True
            advanced = False
            for k in range(child_i, len(succ[node])):
                nxt = succ[node][k]
                if index[nxt] == -1:
                    work.append((node, k + 1))
                    work.append((nxt, 0))
                    advanced = True
                    break
                if on_stack[nxt]:
                    low[node] = min(low[node], index[nxt])
            if advanced:
                continue
            if low[node] == index[node]:
                comp = []
                while True:
                    w = stack.pop()
                    on_stack[w] = False
                    comp.append(w)
                    if w == node:
                        break
                comp.reverse()
                comps.append(comp)
            if work:
                parent = work[-1][0]
                low[parent] = min(low[parent], low[node])
    return comps


def reachability(adj: np.ndarray) -> np.ndarray:
    """Paths of length >= 1: closure of adj under composition."""
    reach = adj.astype(bool).copy()
    while True:
        nxt = reach | (reach @ reach)
        if (nxt == reach).all():
            return reach
        reach = nxt


def shortest_path(adj: np.ndarray, start: int, goal: int) -> Optional[list[int]]:
    """BFS path start -> goal using >= 1 edge; None if unreachable.

    start == goal asks for a cycle through start.
    """
    prev: dict[int, int] = {}
    q = deque()
    for nxt in np.flatnonzero(adj[start]):
        nxt = int(nxt)
        if nxt not in prev:
            prev[nxt] = start
            q.append(nxt)
    while q and goal not in prev:
        node = q.popleft()
        for nxt in np.flatnonzero(adj[node]):
            nxt = int(nxt)
            if nxt not in prev:
                prev[nxt] = node
                q.append(nxt)
    if goal not in prev:
        return None
    path = [goal]
    cur = prev[goal]
    path.append(cur)
    while cur != start:
        cur = prev[cur]
        path.append(cur)
    path.reverse()
    return path


def simple_cycles_bounded(adj: np.ndarray, max_len: int) -> list[list[int]]:
    """All simple cycles of length <= max_len, canonical rotation, sorted."""
    n = adj.shape[0]
    out = set()
    a = adj.astype(bool)
    for i in range(n):
        if a[i, i]:
            out.add((i,))
    if max_len >= 2:
        for i in range(n):
            for j in range(i + 1, n):
                if a[i, j] and a[j, i]:
                    out.add((i, j))
    if max_len >= 3:
        for i in range(n):
            for j in range(n):
                if i == j or not a[i, j]:
                    continue
                for k in np.flatnonzero(a[j]):
                    k = int(k)
                    if k in (i, j):
                        continue
                    if a[k, i] and i < j and i < k:
                        out.add((i, j, k))
    return sorted(list(c) for c in out)


def stable_topological_order(
    n: int, must_precede: np.ndarray, tie_key: Callable[[int], object]
) -> Optional[list[int]]:
    """Kahn's algorithm; among ready nodes always pick the smallest tie_key.

    must_precede[i, j] truthy means i has to come before j.  Returns None
    when the constraints are cyclic.
    """
    indeg = [0] * n
    for j in range(n):
        indeg[j] = int(must_precede[:, j].sum()) - (1 if must_precede[j, j] else 0)
    # self-constraints are vacuous
    ready = [(tie_key(i), i) for i in range(n) if indeg[i] == 0]
    heapq.heapify(ready)
    order: list[int] = []
    while ready:
        _, node = heapq.heappop(ready)
        order.append(node)
        for j in np.flatnonzero(must_precede[node]):
            j = int(j)
            if j == node:
                continue
            indeg[j] -= 1
            if indeg[j] == 0:
                heapq.heappush(ready, (tie_key(j), j))
    if len(order) != n:
        return None
    return order


def condense_by_outcome(labels: Sequence[int]) -> tuple[list[int], dict[int, int]]:
    """Group node labels: returns (group index per node, label -> group)."""
    mapping: dict[int, int] = {}
    groups = []
    for lab in labels:
        if lab not in mapping:
            mapping[lab] = len(mapping)
        groups.append(mapping[lab])
    return groups, mapping
