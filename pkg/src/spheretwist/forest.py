"""Forests of blow-up centers and marked points ordered by "lies over".

Nodes are abstract identities.  A root is a point of the sphere; a child lies
on the exceptional line of its parent, so only centers can have children.

One reduction step picks the lexicographically first root whose tree has
positive height, promotes its children to roots, and swaps the root for a
freshly minted center.  Geometrically this trades the exceptional line of the
old center for a generic line in the projective plane.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Dict, Iterable, List, Mapping, Optional, Tuple

__all__ = [
    "CENTER",
    "MARKED",
    "ForestNode",
    "InfinitelyNearForest",
    "NothingToReduceError",
    "ForestError",
    "ReductionTrace",
    "reduction_step",
    "reduce_fully",
    "random_forest",
]

CENTER = "center"
MARKED = "marked"


class ForestError(ValueError):
    pass


class NothingToReduceError(ForestError):
    """Raised when every tree already has height 0."""


@dataclass(frozen=True, order=True)
class ForestNode:
    id: str
    tag: str
    parent: Optional[str] = None

    def to_json(self) -> dict:
        return {"id": self.id, "tag": self.tag, "parent": self.parent}


class InfinitelyNearForest:
    """Immutable forest of centers and marked points.

    Parameters
    ----------
    nodes : iterable of ForestNode
        Parents must exist, be centers, and the parent relation must be
        acyclic.
    """

    __slots__ = ("_nodes", "_children", "_heights")

    def __init__(self, nodes: Iterable[ForestNode]):
        table: Dict[str, ForestNode] = {}
        for n in nodes:
            if n.tag not in (CENTER, MARKED):
                raise ForestError(f"unknown tag {n.tag!r} on node {n.id!r}")
            if n.id in table:
                raise ForestError(f"duplicate node id {n.id!r}")
            table[n.id] = n
        children: Dict[str, List[str]] = {i: [] for i in table}
        for n in table.values():
            if n.parent is None:
                continue
            parent = table.get(n.parent)
            if parent is None:
                raise ForestError(f"node {n.id!r} lies over unknown node {n.parent!r}")
            if parent.tag != CENTER:
                raise ForestError(f"node {n.id!r} lies over marked point {n.parent!r}")
            children[n.parent].append(n.id)
        self._nodes = dict(sorted(table.items()))
        self._children = {k: tuple(sorted(v)) for k, v in children.items()}
        self._heights = self._compute_heights()

    def _compute_heights(self) -> Dict[str, int]:
        heights: Dict[str, int] = {}
        for root in self.roots:
            # iterative post-order; also catches cycles (nodes never reached)
            stack = [(root, False)]
            while stack:
                node, done = stack.pop()
                if done:
                    heights[node] = 1 + max((heights[c] for c in self._children[node]), default=-1)
                else:
                    stack.append((node, True))
                    stack.extend((c, False) for c in self._children[node])
        if len(heights) != len(self._nodes):
            raise ForestError("parent relation contains a cycle")
        return heights

    # -- inspection -----------------------------------------------------

    @property
    def nodes(self) -> Tuple[ForestNode, ...]:
        return tuple(self._nodes.values())

    def __getitem__(self, node_id: str) -> ForestNode:
        return self._nodes[node_id]

    def __contains__(self, node_id) -> bool:
        return node_id in self._nodes

    def __len__(self):
        return len(self._nodes)

    def __eq__(self, other):
        return isinstance(other, InfinitelyNearForest) and self._nodes == other._nodes

    def __hash__(self):
        return hash(frozenset(self._nodes.values()))

    def children(self, node_id: str) -> Tuple[str, ...]:
        return self._children[node_id]

    @property
    def roots(self) -> Tuple[str, ...]:
        return tuple(i for i, n in self._nodes.items() if n.parent is None)

    def level(self, node_id: str) -> int:
        depth, n = 0, self._nodes[node_id]
        while n.parent is not None:
            depth += 1
            n = self._nodes[n.parent]
        return depth

    def height(self, node_id: str) -> int:
        """Height of the subtree hanging from ``node_id``."""
        return self._heights[node_id]

    @property
    def total_height(self) -> int:
        return sum(self._heights[r] for r in self.roots)

    @property
    def nesting_count(self) -> int:
        """Number of centers that carry infinitely near points."""
        return sum(1 for c in self._children.values() if c)

    def ids(self, tag: str) -> Tuple[str, ...]:
        return tuple(i for i, n in self._nodes.items() if n.tag == tag)

    @property
    def centers(self) -> Tuple[str, ...]:
        return self.ids(CENTER)

    @property
    def marked(self) -> Tuple[str, ...]:
        return self.ids(MARKED)

    def is_normal_form(self) -> bool:
        """Every node is a root and no marked root shares an identity with a center."""
        if self.total_height:
            return False
        return not set(self.centers) & set(self.marked)

    # -- construction and I/O -------------------------------------------

    @classmethod
    def from_parents(cls, tags: Mapping[str, str], parents: Mapping[str, Optional[str]] = None):
        parents = parents or {}
        return cls(ForestNode(i, t, parents.get(i)) for i, t in tags.items())

    def fresh_id(self, base: str) -> str:
        candidate = base + "'"
        while candidate in self._nodes:
            candidate += "'"
        return candidate

    def to_json(self) -> dict:
        return {"nodes": [n.to_json() for n in self._nodes.values()]}

    @classmethod
    def from_json(cls, data) -> "InfinitelyNearForest":
        try:
            return cls(ForestNode(str(n["id"]), n["tag"], n.get("parent")) for n in data["nodes"])
        except (KeyError, TypeError) as exc:
            raise ForestError(f"malformed forest document: {exc}") from exc

    def pretty(self) -> str:
        lines: List[str] = []

        def walk(node_id: str, depth: int):
            n = self._nodes[node_id]
            mark = "*" if n.tag == CENTER else "o"
            lines.append(f"{'  ' * depth}{mark} {node_id}")
            for c in self._children[node_id]:
                walk(c, depth + 1)

        for r in self.roots:
            walk(r, 0)
        return "\n".join(lines)

    def __repr__(self):
        return f"InfinitelyNearForest({len(self)} nodes, total_height={self.total_height})"


def reduction_step(forest: InfinitelyNearForest) -> InfinitelyNearForest:
    """Trade the first nested root center for a fresh one.

    Raises
    ------
    NothingToReduceError
        If the forest already has total height 0.
    """
    target = next((r for r in forest.roots if forest.height(r) > 0), None)
    if target is None:
        raise NothingToReduceError("every tree already has height 0")
    fresh = forest.fresh_id(target)
    promoted = set(forest.children(target))
    out = []
    for n in forest.nodes:
        if n.id == target:
            out.append(ForestNode(fresh, CENTER, None))
        elif n.id in promoted:
            out.append(ForestNode(n.id, n.tag, None))
        else:
            out.append(n)
    return InfinitelyNearForest(out)


@dataclass(frozen=True)
class ReductionTrace:
    start: InfinitelyNearForest
    forests: Tuple[InfinitelyNearForest, ...]

    @property
    def steps(self) -> int:
        return len(self.forests) - 1

    @property
    def final(self) -> InfinitelyNearForest:
        return self.forests[-1]

    @property
    def heights(self) -> List[int]:
        return [f.total_height for f in self.forests]


def reduce_fully(forest: InfinitelyNearForest, trace: bool = False):
    """Iterate :func:`reduction_step` until every tree has height 0.

    Terminates because each step removes one nested center.  Returns the
    final forest, or a :class:`ReductionTrace` when ``trace`` is set.
    """
    seen = [forest]
    while seen[-1].total_height > 0:
        seen.append(reduction_step(seen[-1]))
    if trace:
        return ReductionTrace(forest, tuple(seen))
    return seen[-1]


def random_forest(
    rng: random.Random,
    centers: int,
    marked: int,
    max_total_height: int = 10,
    nest_probability: float = 0.6,
) -> InfinitelyNearForest:
    """Random forest with at most ``max_total_height``; resamples until it fits."""
    while True:
        tags: Dict[str, str] = {}
        parents: Dict[str, Optional[str]] = {}
        center_ids: List[str] = []
        for i in range(centers):
            cid = f"R{i + 1}"
            tags[cid] = CENTER
            if center_ids and rng.random() < nest_probability:
                parents[cid] = rng.choice(center_ids)
            center_ids.append(cid)
        for i in range(marked):
            pid = f"P{i + 1}"
            tags[pid] = MARKED
            if center_ids and rng.random() < nest_probability:
                parents[pid] = rng.choice(center_ids)
        forest = InfinitelyNearForest.from_parents(tags, parents)
        if forest.total_height <= max_total_height:
            return forest
