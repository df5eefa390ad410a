"""Merging schemes: ordered trees of m-ary merge applications, their
execution, exact impact analysis, and the standard constructions.

A scheme is serialized as nested JSON arrays of leaf indices, e.g.
``[[0, 1], [2, 3]]`` for the balanced merge of four models.
"""

import json
from dataclasses import dataclass

from .operators import merge_nary


def _collect_leaves(node, out):
    if isinstance(node, int):
        out.append(node)
        return
    if not isinstance(node, (list, tuple)) or len(node) < 2:
        raise ValueError(
            f"internal scheme node must have >= 2 children: {node!r}"
        )
    for child in node:
        _collect_leaves(child, out)


def _freeze(node):
    if isinstance(node, int):
        return node
    return tuple(_freeze(c) for c in node)


def _thaw(node):
    if isinstance(node, int):
        return node
    return [_thaw(c) for c in node]


@dataclass(frozen=True)
class MergeScheme:
    """Tree whose leaves are model indices and whose internal nodes are
    m-ary merge applications; every index appears exactly once."""

    root: object

    def __post_init__(self):
        object.__setattr__(self, "root", _freeze(self.root))
        leaves = []
        _collect_leaves(self.root, leaves)
        if sorted(leaves) != list(range(len(leaves))):
            raise ValueError(
                f"leaf indices must be a permutation of 0..{len(leaves) - 1}: "
                f"{sorted(leaves)}"
            )
        object.__setattr__(self, "num_leaves", len(leaves))

    @classmethod
    def from_json(cls, text):
        return cls(json.loads(text))

    def to_json(self):
        return json.dumps(_thaw(self.root))


def execute(scheme, spaces):
    """Bottom-up evaluation: each internal node m-ary-merges its children's
    results."""
    if scheme.num_leaves > len(spaces):
        raise IndexError(
            f"scheme references {scheme.num_leaves} models, got {len(spaces)}"
        )

    def run(node):
        if isinstance(node, int):
            return spaces[node]
        return merge_nary([run(child) for child in node])

    return run(scheme.root)


def impacts(scheme):
    """Impact of each model on the final value: the product of reciprocal
    operand counts along its leaf-to-root path.  Sums to one.

    Exact when all models cover the same space with equal specializations;
    structural (nominal) otherwise.
    """
    out = [0.0] * scheme.num_leaves

    def walk(node, weight):
        if isinstance(node, int):
            out[node] = weight
            return
        share = weight / len(node)
        for child in node:
            walk(child, share)

    walk(scheme.root, 1.0)
    return tuple(out)


def build_chain(m):
    """Left-deep binary chain (((X1 x X2) x X3) ... x Xm): exponential decay
    in favour of later models."""
    if m < 1:
        raise ValueError("need at least one model")
    node = 0
    for i in range(1, m):
        node = (node, i)
    return MergeScheme(node)


def build_balanced(m):
    """Balanced binary tree over m = 2^k models: every impact is 2^-k."""
    if m < 1 or m & (m - 1):
        raise ValueError(f"balanced scheme needs a power-of-two model count, got {m}")
    level = list(range(m))
    while len(level) > 1:
        level = [(level[i], level[i + 1]) for i in range(0, len(level), 2)]
    return MergeScheme(level[0])


def build_factored(factors):
    """Uniform tree with the given per-level arities; all impacts equal
    1 / product(factors)."""
    factors = list(factors)
    if not factors:
        raise ValueError("factors may not be empty")
    if any(f < 2 for f in factors):
        raise ValueError("every factor must be >= 2")

    def build(level, start, count):
        if level == len(factors):
            return start
        arity = factors[level]
        sub = count // arity
        return tuple(
            build(level + 1, start + i * sub, sub) for i in range(arity)
        )

    total = 1
    for f in factors:
        total *= f
    return MergeScheme(build(0, 0, total))
