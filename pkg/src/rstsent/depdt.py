"""Dependency-based discourse trees (DEP-DT) over EDUs.

Heads propagate up the constituency tree: a mononuclear node is headed by the
head of its nucleus, a multinuclear node by the head of its leftmost nucleus.
A satellite's head depends on the head of its sibling nucleus. The nuclei of a
multinuclear node all depend on the same governor the leftmost one does, so
coordinated units end up as siblings; only on the document's nuclear spine,
where there is no governor yet, do the later nuclei hang under the leftmost.
The resulting depth counts satellite embeddings (plus one for non-leftmost
nuclei of a spine-level multinuclear relation).
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field

from .rst_tree import Leaf, Multi, NucSat, RstTree

__all__ = ["DepDt", "to_depdt", "depths", "dump_tsv"]


@dataclass(frozen=True)
class DepDt:
    head_edu: int
    parent: dict = field(default_factory=dict)
    depth: dict = field(default_factory=dict)
    relation_to_parent: dict = field(default_factory=dict)

    @property
    def edu_count(self):
        return len(self.depth)

    def children(self, edu_id):
        return sorted(e for e, p in self.parent.items() if p == edu_id)


def to_depdt(tree: RstTree) -> DepDt:
    parent, relation = {}, {}

    def build(node, governor, rel):
        # returns the head EDU id of ``node``; attaches it to ``governor``
        if isinstance(node, Leaf):
            if governor is not None:
                parent[node.edu.id] = governor
                relation[node.edu.id] = rel
            return node.edu.id
        if isinstance(node, NucSat):
            head = build(node.nucleus, governor, rel)
            build(node.satellite, head, node.relation)
            return head
        if isinstance(node, Multi):
            head = build(node.nuclei[0], governor, rel)
            for child in node.nuclei[1:]:
                if governor is None:
                    build(child, head, node.relation)
                else:
                    build(child, governor, rel)
            return head
        raise TypeError(f"unexpected node {node!r}")

    head = build(tree.root, None, None)

    depth = {head: 0}
    kids = {}
    for child, par in parent.items():
        kids.setdefault(par, []).append(child)
    queue = deque([head])
    while queue:
        edu = queue.popleft()
        for child in kids.get(edu, ()):
            depth[child] = depth[edu] + 1
            queue.append(child)
    depth = dict(sorted(depth.items()))
    return DepDt(head, dict(sorted(parent.items())), depth, dict(sorted(relation.items())))


def depths(dep: DepDt) -> dict:
    """Depth of each EDU, recomputed from the parent map."""
    memo = {dep.head_edu: 0}

    def walk(edu):
        chain = []
        while edu not in memo:
            chain.append(edu)
            edu = dep.parent[edu]
        d = memo[edu]
        for e in reversed(chain):
            d += 1
            memo[e] = d
        return memo[chain[0]] if chain else d

    return {edu: walk(edu) for edu in sorted(dep.depth)}


def dump_tsv(dep: DepDt) -> str:
    """``edu_id<TAB>parent|-<TAB>depth<TAB>relation|-`` lines, one per EDU."""
    lines = []
    for edu in sorted(dep.depth):
        par = dep.parent.get(edu)
        rel = dep.relation_to_parent.get(edu)
        lines.append(f"{edu}\t{'-' if par is None else par}\t{dep.depth[edu]}\t{rel or '-'}")
    return "".join(line + "\n" for line in lines)
