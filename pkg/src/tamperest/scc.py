"""Strongly connected components (iterative Tarjan) for cycle analyses."""

from __future__ import annotations

from typing import Callable, Hashable, Iterable, List


def strongly_connected_components(
    nodes: Iterable[Hashable], successors: Callable[[Hashable], Iterable[Hashable]]
) -> List[list]:
    """SCCs of the graph induced by `successors`, restricted to `nodes`.

    Successor nodes outside `nodes` are ignored.  Components come out in
    reverse topological order; node order inside a component follows the
    traversal.
    """
    nodes = list(nodes)
    node_set = set(nodes)
    index: dict = {}
    lowlink: dict = {}
    on_stack: set = set()
    stack: list = []
    components: List[list] = []
    counter = 0

    for root in nodes:
        if root in index:
            continue
        work = [(root, iter([n for n in successors(root) if n in node_set]))]
        index[root] = lowlink[root] = counter
        counter += 1
        stack.append(root)
        on_stack.add(root)
        while work:
            node, it = work[-1]
            advanced = False
            for nxt in it:
                if nxt not in index:
                    index[nxt] = lowlink[nxt] = counter
                    counter += 1
                    stack.append(nxt)
                    on_stack.add(nxt)
                    work.append((nxt, iter([n for n in successors(nxt) if n in node_set])))
                    advanced = True
                    break
                if nxt in on_stack:
                    lowlink[node] = min(lowlink[node], index[nxt])
            if advanced:
                continue
            work.pop()
            if work:
                parent = work[-1][0]
                lowlink[parent] = min(lowlink[parent], lowlink[node])
            if lowlink[node] == index[node]:
                component = []
                while True:
                    member = stack.pop()
                    on_stack.discard(member)
                    component.append(member)
                    if member == node:
                        break
                components.append(component)
    return components


def cycle_within(
    component: list, successors: Callable[[Hashable], Iterable[Hashable]]
) -> list:
    """A cycle of nodes inside one SCC that contains an edge.

    Returns the node sequence ``[n0, n1, ..., n0]``.  The component must
    either have more than one node or a self-loop.
    """
    members = set(component)
    start = component[0]
    if len(component) == 1:
        if start in successors(start):
            return [start, start]
        raise ValueError("singleton component without a self-loop has no cycle")
    # DFS from start back to start through component members only
    parent = {start: None}
    order = [start]
    for node in order:
        for nxt in successors(node):
            if nxt == start:
                path = [start]
                walk = node
                while walk is not None:
                    path.append(walk)
                    walk = parent[walk]
                path.reverse()
                return path
            if nxt in members and nxt not in parent:
                parent[nxt] = node
                order.append(nxt)
    raise ValueError("component is not strongly connected")
