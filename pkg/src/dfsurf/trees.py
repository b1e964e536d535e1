"""Finite rooted trees: levels, leaves, ancestors, maximal subtrees and shape tests."""
from __future__ import annotations

from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Tuple


class UnknownNode(KeyError):
    pass


class RootArgument(ValueError):
    """The root was passed where a non-root node is required."""


class TreeStructureError(ValueError):
    pass


class RootedTree:
    """Immutable rooted tree with string node ids and ordered children.

    Node order (``nodes``) is insertion order; children keep the order in
    which their edges were given, which fixes the depth-first leaf order.
    """

    __slots__ = ("root", "nodes", "parent", "children", "_level")

    def __init__(self, root: str, edges: Iterable[Tuple[str, str]] = ()):
        parent: Dict[str, str] = {}
        children: Dict[str, List[str]] = {root: []}
        nodes = [root]
        for p, c in edges:
            if c == root:
                raise TreeStructureError(f"edge {p} -> {c} points at the root")
            if c in parent:
                raise TreeStructureError(f"node {c!r} has two parents")
            if p == c:
                raise TreeStructureError(f"self-loop at {c!r}")
            parent[c] = p
            for n in (p, c):
                if n not in children:
                    children[n] = []
                    nodes.append(n)
            children[p].append(c)
        level = {root: 0}
        stack = [root]
        while stack:
            u = stack.pop()
            for c in children[u]:
                level[c] = level[u] + 1
                stack.append(c)
        unreachable = [n for n in nodes if n not in level]
        if unreachable:
            raise TreeStructureError(f"nodes not reachable from the root: {unreachable}")
        object.__setattr__(self, "root", root)
        object.__setattr__(self, "nodes", tuple(nodes))
        object.__setattr__(self, "parent", parent)
        object.__setattr__(self, "children", {k: tuple(v) for k, v in children.items()})
        object.__setattr__(self, "_level", level)

    def __setattr__(self, name, value):
        raise AttributeError("RootedTree is immutable")

    @classmethod
    def from_parent_map(cls, root: str, parent: Mapping[str, str],
                        order: Optional[Sequence[str]] = None) -> "RootedTree":
        order = order if order is not None else list(parent)
        return cls(root, [(parent[c], c) for c in order if c != root])

    def edges(self) -> List[Tuple[str, str]]:
        """Edges in depth-first order; rebuilding from them preserves child order."""
        out = []
        for u in self.preorder():
            out.extend((u, c) for c in self.children[u])
        return out

    def __contains__(self, node):
        return node in self._level

    def __len__(self):
        return len(self.nodes)

    def __eq__(self, other):
        if not isinstance(other, RootedTree):
            return NotImplemented
        return self.root == other.root and self.children == other.children

    def __hash__(self):
        return hash((self.root, tuple(sorted(self.children.items()))))

    def __repr__(self):
        return f"RootedTree(root={self.root!r}, edges={self.edges()!r})"

    def _check(self, node):
        if node not in self._level:
            raise UnknownNode(node)

    def level(self, node: str) -> int:
        self._check(node)
        return self._level[node]

    def is_leaf(self, node: str) -> bool:
        self._check(node)
        return not self.children[node]

    def preorder(self, start: Optional[str] = None) -> List[str]:
        start = self.root if start is None else start
        self._check(start)
        out = []
        stack = [start]
        while stack:
            u = stack.pop()
            out.append(u)
            stack.extend(reversed(self.children[u]))
        return out

    def breadth_first(self) -> List[str]:
        out = [self.root]
        i = 0
        while i < len(out):
            out.extend(self.children[out[i]])
            i += 1
        return out

    def leaves(self) -> List[str]:
        return [u for u in self.preorder() if not self.children[u]]

    def internal_nodes(self) -> List[str]:
        return [u for u in self.preorder() if self.children[u]]

    def height(self) -> int:
        return max(self._level.values())

    def path(self, node: str) -> List[str]:
        """The chain ``(down node)``: root first, ``node`` last."""
        self._check(node)
        out = [node]
        while out[-1] != self.root:
            out.append(self.parent[out[-1]])
        out.reverse()
        return out

    def is_ancestor(self, a: str, b: str) -> bool:
        """``a <= b`` in the tree order (every node is its own ancestor)."""
        self._check(a)
        self._check(b)
        la, lb = self._level[a], self._level[b]
        while lb > la:
            b = self.parent[b]
            lb -= 1
        return a == b

    def descendants(self, node: str) -> List[str]:
        """``(up node)`` in preorder, ``node`` included."""
        return self.preorder(node)

    def first_common_ancestor(self, e: str, f: str) -> str:
        """Deepest node of ``((down e) - {e}) & ((down f) - {f})``."""
        self._check(e)
        self._check(f)
        if e == self.root or f == self.root:
            raise RootArgument("the first common ancestor is defined for non-root nodes")
        a, b = self.parent[e], self.parent[f]
        while self._level[a] > self._level[b]:
            a = self.parent[a]
        while self._level[b] > self._level[a]:
            b = self.parent[b]
        while a != b:
            a, b = self.parent[a], self.parent[b]
        return a

    def maximal_subtree(self, node: str) -> "RootedTree":
        """``(up node)`` as a tree rooted at ``node``."""
        self._check(node)
        return RootedTree(node, [(self.parent[c], c) for c in self.preorder(node)[1:]])

    def without(self, removed: Iterable[str]) -> "RootedTree":
        """Delete a set of nodes closed under taking descendants."""
        removed = set(removed)
        if self.root in removed:
            raise TreeStructureError("cannot delete the root")
        for r in removed:
            self._check(r)
            if any(c not in removed for c in self.children[r]):
                raise TreeStructureError(f"deleting {r!r} would orphan its children")
        return RootedTree(self.root, [(p, c) for p, c in self.edges() if c not in removed])

    def is_chain(self) -> bool:
        return all(len(cs) <= 1 for cs in self.children.values())

    def is_comb(self) -> bool:
        """True iff the non-leaf nodes form a chain (empty and one-node sets count)."""
        for u, cs in self.children.items():
            if sum(1 for c in cs if self.children[c]) > 1:
                return False
        return True

    def is_essential(self) -> bool:
        return len(self.children[self.root]) != 1

    def essential_subtree(self) -> Tuple[str, int]:
        """Root of the essential subtree and its level.

        For a chain this is the unique leaf; otherwise it is the first node,
        walking down from the root, with other than one child.
        """
        u = self.root
        while len(self.children[u]) == 1:
            u = self.children[u][0]
        return u, self._level[u]

    def canonical_form(self, node: Optional[str] = None) -> str:
        """Isomorphism-invariant string for the unordered subtree at ``node``."""
        node = self.root if node is None else node
        self._check(node)
        memo: Dict[str, str] = {}
        for u in reversed(self.preorder(node)):
            memo[u] = "(" + "".join(sorted(memo[c] for c in self.children[u])) + ")"
        return memo[node]


def chain(length: int, prefix: str = "c") -> RootedTree:
    """Chain ``c0 < c1 < ... < c<length>``."""
    return RootedTree(f"{prefix}0", [(f"{prefix}{k}", f"{prefix}{k + 1}") for k in range(length)])


def broom(r: int, m: int, n: int) -> RootedTree:
    """Chain of length ``r`` followed by ``n`` chains of length ``m``."""
    edges = [(f"s{k}", f"s{k + 1}") for k in range(r)]
    hub = f"s{r}"
    for i in range(1, n + 1):
        prev = hub
        for k in range(1, m + 1):
            node = f"b{i}_{k}"
            edges.append((prev, node))
            prev = node
    return RootedTree("s0", edges)
