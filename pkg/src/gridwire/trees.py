"""Rooted ordered trees of maximal degree 3 and their reductions.

A tree is stored as two flat child arrays (first child / second child,
-1 when absent), so the node set is always 0..n-1 and node 0 is created
first.  Every non-root node therefore has total degree at most 3 and the
root has degree at most 2.  All functions here are pure: they never
mutate their inputs.
"""

from __future__ import annotations

from array import array
from dataclasses import dataclass
from fractions import Fraction

from .errors import DegreeError, OrderingError, ParseError

_MASK64 = (1 << 64) - 1


class OrderedTree:
    """Rooted tree in which every node has an ordered list of <= 2 children."""

    __slots__ = ("n", "root", "c1", "c2")

    def __init__(self, c1, c2, root=0):
        self.n = len(c1)
        self.root = root
        self.c1 = c1
        self.c2 = c2

    @classmethod
    def from_children(cls, children, root=0):
        """Build from a list of per-node child-id lists."""
        n = len(children)
        c1 = array("q", [-1]) * n
        c2 = array("q", [-1]) * n
        for v, kids in enumerate(children):
            if len(kids) > 2:
                raise DegreeError(f"node {v} has {len(kids)} children", 0)
            if len(kids) >= 1:
                c1[v] = kids[0]
            if len(kids) == 2:
                c2[v] = kids[1]
        return cls(c1, c2, root)

    def children(self, v):
        a, b = self.c1[v], self.c2[v]
        if a < 0:
            return ()
        if b < 0:
            return (a,)
        return (a, b)

    def is_leaf(self, v):
        return self.c1[v] < 0

    def parents(self):
        """Parent id per node, -1 for the root."""
        par = array("q", [-1]) * self.n
        for v in range(self.n):
            for w in self.children(v):
                par[w] = v
        return par

    def _bfs_order(self):
        order = [self.root]
        for v in order:
            order.extend(self.children(v))
        return order

    def leaves(self):
        """Leaf ids in depth-first left-to-right order."""
        out = []
        stack = [self.root]
        while stack:
            v = stack.pop()
            kids = self.children(v)
            if not kids:
                out.append(v)
            else:
                stack.extend(reversed(kids))
        return out

    def serialize(self):
        """Canonical nested-parenthesis text, no whitespace."""
        parts = []
        stack = [(self.root, False)]
        while stack:
            v, closing = stack.pop()
            if closing:
                parts.append(")")
                continue
            parts.append("(")
            stack.append((v, True))
            for w in reversed(self.children(v)):
                stack.append((w, False))
        return "".join(parts)

    def shape(self):
        """Nested-tuple shape key; equal iff the ordered trees are isomorphic."""
        memo = {}
        for v in reversed(self._bfs_order()):
            memo[v] = tuple(memo[w] for w in self.children(v))
        return memo[self.root]

    def same_shape(self, other):
        stack = [(self.root, other.root)]
        while stack:
            a, b = stack.pop()
            ka, kb = self.children(a), other.children(b)
            if len(ka) != len(kb):
                return False
            stack.extend(zip(ka, kb))
        return True

    def __eq__(self, other):
        if not isinstance(other, OrderedTree):
            return NotImplemented
        return self.n == other.n and self.same_shape(other)

    def __hash__(self):
        return hash((self.n, self.shape()))

    def __repr__(self):
        if self.n <= 40:
            return f"OrderedTree({self.serialize()})"
        return f"OrderedTree(n={self.n})"


class _Builder:
    """Incremental tree construction with preorder node numbering."""

    def __init__(self):
        self.c1 = array("q")
        self.c2 = array("q")

    def add(self, parent=-1):
        v = len(self.c1)
        self.c1.append(-1)
        self.c2.append(-1)
        if parent >= 0:
            if self.c1[parent] < 0:
                self.c1[parent] = v
            elif self.c2[parent] < 0:
                self.c2[parent] = v
            else:
                raise DegreeError(f"node {parent} already has two children", 0)
        return v

    def chain(self, parent, length):
        """Append a downward chain of `length` nodes, return its lowest node."""
        cur = parent
        for _ in range(length):
            cur = self.add(cur)
        return cur

    def tree(self, root=0):
        return OrderedTree(self.c1, self.c2, root)


def parse_tree(text):
    """Parse nested-parenthesis tree text.

    Grammar: node ::= "(" node{0,2} ")".  Whitespace is ignored, the
    outermost node is the root and children keep their written order.
    """
    b = _Builder()
    stack = []
    root = -1
    for i, ch in enumerate(text):
        if ch.isspace():
            continue
        if ch == "(":
            if root >= 0 and not stack:
                raise ParseError("trailing content after the root node", i)
            try:
                v = b.add(stack[-1] if stack else -1)
            except DegreeError:
                raise DegreeError("node has more than two children", i) from None
            if root < 0:
                root = v
            stack.append(v)
        elif ch == ")":
            if not stack:
                raise ParseError("unmatched ')'", i)
            stack.pop()
        else:
            raise ParseError(f"unexpected character {ch!r}", i)
    if root < 0:
        raise ParseError("empty input", 0)
    if stack:
        raise ParseError("unmatched '('", len(text))
    return b.tree(root)


def serialize_tree(tree):
    """Canonical text for a tree; inverse of parse_tree on canonical input."""
    return tree.serialize()


def generate_path(n):
    """Path on n vertices, rooted at one end."""
    if n < 1:
        raise ValueError("n must be >= 1")
    b = _Builder()
    v = b.add()
    b.chain(v, n - 1)
    return b.tree()


def _perfect(b, parent, height):
    v = b.add(parent)
    if height > 0:
        _perfect(b, v, height - 1)
        _perfect(b, v, height - 1)
    return v


def generate_bn(n):
    """Family ``bn``: perfect binary tree of height n with a stem vertex.

    The stem is a single degree-1 vertex attached above the traditional
    root, so the tree has 2**(n+1) vertices and 2**n leaves.
    """
    if n < 0:
        raise ValueError("n must be >= 0")
    b = _Builder()
    stem = b.add()
    _perfect(b, stem, n)
    return b.tree(stem)


def generate_sn(n):
    """Family ``sn``: the spiral variant of :func:`generate_bn`.

    Starting from the ``bn`` tree, the first-child subtree of the
    traditional root becomes a path on 2**n - 1 vertices and the
    first-child subtree of its second child becomes a path on
    2**(n-1) - 1 vertices; the doubly nested second-child perfect
    subtree (2**(n-1) - 1 vertices) is kept.  The vertex count stays
    2**(n+1) and the reduction has 2 + 2**(n-2) leaves.
    """
    if n < 2:
        raise ValueError("n must be >= 2")
    b = _Builder()
    stem = b.add()
    c = b.add(stem)
    b.chain(c, 2 ** n - 1)          # first child: long straight section
    c2 = b.add(c)
    b.chain(c2, 2 ** (n - 1) - 1)   # first child: short straight section
    _perfect(b, c2, n - 2)          # second child: kept perfect subtree
    return b.tree(stem)


class _SplitMix64:
    """Tiny deterministic PRNG (splitmix64); stable across platforms."""

    def __init__(self, seed):
        self.state = seed & _MASK64

    def next64(self):
        self.state = (self.state + 0x9E3779B97F4A7C15) & _MASK64
        z = self.state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
        return z ^ (z >> 31)

    def below(self, n):
        return self.next64() % n


def random_tree(n, seed):
    """Random tree with exactly n vertices and max degree 3.

    Nodes are attached one at a time to a parent drawn uniformly among
    nodes that still have a free child slot.  The same (n, seed) pair
    always yields the same tree.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    rng = _SplitMix64(seed)
    c1 = array("q", [-1]) * n
    c2 = array("q", [-1]) * n
    free = [0]
    for v in range(1, n):
        i = rng.below(len(free))
        p = free[i]
        if c1[p] < 0:
            c1[p] = v
        else:
            c2[p] = v
            # swap-remove keeps the draw O(1)
            free[i] = free[-1]
            free.pop()
        free.append(v)
    return OrderedTree(c1, c2, 0)


def _shapes(n, _memo={1: [()]}):
    if n in _memo:
        return _memo[n]
    out = [(t,) for t in _shapes(n - 1)]
    for i in range(1, n - 1):
        lefts = _shapes(i)
        rights = _shapes(n - 1 - i)
        out.extend((a, b) for a in lefts for b in rights)
    _memo[n] = out
    return out


def iter_trees(n):
    """All ordered trees with exactly n vertices (Motzkin-number many)."""
    if n < 1:
        raise ValueError("n must be >= 1")
    for shape in _shapes(n):
        b = _Builder()
        stack = [(shape, -1)]
        while stack:
            s, parent = stack.pop()
            v = b.add(parent)
            for sub in reversed(s):
                stack.append((sub, v))
        yield b.tree()


def count_trees(n):
    """Number of ordered trees with n vertices and <= 2 children per node."""
    return len(_shapes(n))


def subtree_sizes(tree):
    """Vertex count of the subtree rooted at each node."""
    order = tree._bfs_order()
    size = [1] * tree.n
    for v in reversed(order):
        for w in tree.children(v):
            size[v] += size[w]
    return size


class Reduction:
    """Series-reduced ordered shape of a tree: a full binary tree.

    `leaves` lists leaf node ids in depth-first left-to-right order;
    plans index leaves by position in that list.
    """

    __slots__ = ("tree", "leaves", "_ranges", "_struct")

    def __init__(self, tree, leaves):
        self.tree = tree
        self.leaves = tuple(leaves)
        self._ranges = None
        self._struct = None

    @property
    def leaf_count(self):
        return len(self.leaves)

    def leaf_ranges(self):
        """Per node, the half-open range of leaf positions below it."""
        if self._ranges is None:
            pos = {v: i for i, v in enumerate(self.leaves)}
            lo = [0] * self.tree.n
            hi = [0] * self.tree.n
            for v in reversed(self.tree._bfs_order()):
                kids = self.tree.children(v)
                if not kids:
                    lo[v] = pos[v]
                    hi[v] = pos[v] + 1
                else:
                    lo[v] = lo[kids[0]]
                    hi[v] = hi[kids[-1]]
            self._ranges = (lo, hi)
        return self._ranges

    def struct_sizes(self):
        if self._struct is None:
            self._struct = subtree_sizes(self.tree)
        return self._struct

    def __eq__(self, other):
        if not isinstance(other, Reduction):
            return NotImplemented
        return self.tree == other.tree

    def __hash__(self):
        return hash(self.tree)

    def __repr__(self):
        return f"Reduction({self.tree.serialize()})"


def reduce(tree):
    """Series-reduce a tree and order each sibling pair larger-left.

    One-child nodes are spliced out.  Surviving sibling pairs are ordered
    so the child with the larger original subtree comes first; ties keep
    the input order.  The result is a full binary tree.
    """
    size = subtree_sizes(tree)

    def descend(v):
        while len(tree.children(v)) == 1:
            v = tree.children(v)[0]
        return v

    b = _Builder()
    leaves = []
    stack = [(descend(tree.root), -1)]
    while stack:
        v, parent = stack.pop()
        node = b.add(parent)
        kids = tree.children(v)
        if not kids:
            leaves.append((node, v))
            continue
        a, c = kids
        if size[c] > size[a]:
            a, c = c, a
        # push right first so the left child is numbered (and emitted) first
        stack.append((descend(c), node))
        stack.append((descend(a), node))
    red_tree = b.tree()
    # builder numbering is preorder, so sorting by id restores left-right order
    leaves.sort()
    return Reduction(red_tree, [node for node, _ in leaves])


def compute_L(reduction):
    """Largest number of two-child nodes on any root-to-leaf path."""
    tree = reduction.tree
    depth = [0] * tree.n
    best = 0
    for v in reversed(tree._bfs_order()):
        kids = tree.children(v)
        if kids:
            depth[v] = 1 + max(depth[w] for w in kids)
            best = max(best, depth[v])
    return best


@dataclass(frozen=True)
class SubdivisionPlan:
    """Per-leaf subdivision counts, or exact rational proportions.

    Exactly one of `counts` / `proportions` is set; entries follow the
    reduction's left-to-right leaf order.
    """

    counts: tuple = None
    proportions: tuple = None

    @classmethod
    def from_counts(cls, counts):
        counts = tuple(int(c) for c in counts)
        if any(c < 0 for c in counts):
            raise ValueError("subdivision counts must be non-negative")
        return cls(counts=counts)

    @classmethod
    def from_proportions(cls, proportions):
        proportions = tuple(Fraction(p) for p in proportions)
        if any(p < 0 for p in proportions):
            raise ValueError("proportions must be non-negative")
        if sum(proportions) != 1:
            raise ValueError("proportions must sum to exactly 1")
        return cls(proportions=proportions)

    @property
    def total(self):
        if self.counts is None:
            raise ValueError("proportional plan has no count total")
        return sum(self.counts)


def _plan_counts(reduction, plan):
    counts = plan.counts if isinstance(plan, SubdivisionPlan) else tuple(plan)
    if counts is None:
        raise ValueError("an integer-count plan is required here")
    if len(counts) != reduction.leaf_count:
        raise ValueError(
            f"plan has {len(counts)} entries for {reduction.leaf_count} leaves")
    return counts


def size_ordering_violation(reduction, counts):
    """First node where left mass < right mass, or None.

    Mass of a subtree is its vertex count plus the subdivisions assigned
    to its leaves: exactly the quantity the wiring algorithm compares
    when it orders children.
    """
    lo, hi = reduction.leaf_ranges()
    struct = reduction.struct_sizes()
    prefix = [0]
    for c in counts:
        prefix.append(prefix[-1] + c)
    tree = reduction.tree
    for v in range(tree.n):
        kids = tree.children(v)
        if len(kids) == 2:
            a, c = kids
            left = struct[a] + prefix[hi[a]] - prefix[lo[a]]
            right = struct[c] + prefix[hi[c]] - prefix[lo[c]]
            if left < right:
                return v
    return None


def subdivide(reduction, plan):
    """Subdivide each leaf edge of a reduction `plan[i]` times.

    The resulting tree must keep the left-heavy size ordering at every
    two-child node, otherwise the wiring algorithm would flip children
    and change the reduction; such plans raise OrderingError.
    """
    counts = _plan_counts(reduction, plan)
    bad = size_ordering_violation(reduction, counts)
    if bad is not None:
        raise OrderingError(
            f"plan puts more mass right than left below node {bad}")
    return _subdivide_unchecked(reduction, counts, stem=False)


def _subdivide_unchecked(reduction, counts, stem=False):
    """Build the subdivided tree; optionally hang it under a stem vertex."""
    src = reduction.tree
    leaf_pos = {v: i for i, v in enumerate(reduction.leaves)}
    b = _Builder()
    top = b.add() if stem else -1
    if src.n == 1:
        # single-leaf reduction: subdividing "the leaf" grows a path
        v = b.add(top)
        b.chain(v, counts[0] if counts else 0)
        return b.tree()
    stack = [(src.root, top)]
    while stack:
        v, parent = stack.pop()
        if src.is_leaf(v):
            low = b.chain(parent, counts[leaf_pos[v]]) if parent >= 0 else parent
            b.add(low)
            continue
        node = b.add(parent)
        a, c = src.children(v)
        stack.append((c, node))
        stack.append((a, node))
    return b.tree()
