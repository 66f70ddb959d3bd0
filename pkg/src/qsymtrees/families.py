"""Duplicate-free generation of the tree families the scans quantify over.

Rooted trees come from the level-sequence successor algorithm, which emits
one representative per isomorphism class in constant amortized time.  Free
trees, edge orientations and strictness assignments are produced by
generate-and-dedup against the canonical keys; completeness at small sizes
is pinned down by brute-force oracles in the test suite, not by trusting
the generators.

All streams are deterministic and restartable, so a verifier can shard any
of them by index range.
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from itertools import islice

from .digraphs import Digraph, oriented_tree_key
from .errors import DomainError, GuardExceeded
from .posets import LabeledPoset, WEAK, canonical_key, is_fair_tree, _annotated_tree_key

FAMILY_GUARD_DEFAULT = 12

FAMILIES = ("free_tree", "tree_poset", "rooted_tree_poset", "labeled_tree_poset",
            "labeled_rooted_tree_poset", "fair_tree", "directed_tree")

GUARD_ENV_VAR = "QSYM_GUARD_MAX_N"


def guard_limit(default):
    """Default guard, overridden globally by QSYM_GUARD_MAX_N."""
    env = os.environ.get(GUARD_ENV_VAR)
    if env is None:
        return default
    try:
        return int(env)
    except ValueError:
        raise DomainError(f"{GUARD_ENV_VAR} must be an integer, got {env!r}") from None


def check_guard(what, n, default, force=False):
    limit = guard_limit(default)
    if n > limit and not force:
        raise GuardExceeded(
            f"{what} guard is n <= {limit} (n = {n}); pass --force to override")


class FreeTree:
    """Unlabeled tree on vertices 1..n, stored as sorted undirected edges."""

    __slots__ = ("n", "edges")

    def __init__(self, n, edges):
        edges = tuple(sorted((min(a, b), max(a, b)) for a, b in edges))
        if len(edges) != n - 1 or len(set(edges)) != len(edges):
            raise DomainError(f"not a tree: {n} vertices, edges {edges}")
        self.n = n
        self.edges = edges

    def key(self):
        adj = [[] for _ in range(self.n + 1)]
        for a, b in self.edges:
            adj[a].append((b, "e"))
            adj[b].append((a, "e"))
        return (f"F{self.n}:" + _annotated_tree_key(self.n, adj)).encode()

    def __eq__(self, other):
        if not isinstance(other, FreeTree):
            return NotImplemented
        return self.n == other.n and self.edges == other.edges

    def __hash__(self):
        return hash((self.n, self.edges))

    def __repr__(self):
        return f"FreeTree({self.n}; {self.edges})"

    def to_text(self):
        lines = [f"freetree {self.n}"]
        lines += [f"edge {a} {b}" for a, b in self.edges]
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text):
        n = None
        edges = []
        for raw in text.splitlines():
            line = raw.strip()
            if not line:
                continue
            fields = line.split()
            if n is None:
                if fields[0] != "freetree" or len(fields) != 2:
                    raise DomainError("expected header 'freetree <n>'")
                n = int(fields[1])
                continue
            if fields[0] != "edge" or len(fields) != 3:
                raise DomainError("expected 'edge <a> <b>'")
            edges.append((int(fields[1]), int(fields[2])))
        if n is None:
            raise DomainError("missing freetree header")
        return cls(n, edges)


def _level_sequences(n):
    """Canonical level sequences of rooted trees on n nodes, root level 1.
    Successor rule: find the last entry above 2, locate its parent level to
    the left, and tile the tail with the segment between them."""
    if n == 1:
        yield (1,)
        return
    seq = list(range(1, n + 1))
    while True:
        yield tuple(seq)
        p = next((i for i in range(n - 1, -1, -1) if seq[i] > 2), None)
        if p is None:
            return
        q = next(i for i in range(p - 1, -1, -1) if seq[i] == seq[p] - 1)
        for i in range(p, n):
            seq[i] = seq[i - (p - q)]


def rooted_tree_parents(n):
    """Parent arrays (element -> parent, root maps to 0), one per rooted
    isomorphism class, elements numbered 1..n in level-sequence order."""
    for seq in _level_sequences(n):
        parent = [0] * (n + 1)
        for i in range(1, n):
            parent[i + 1] = next(j + 1 for j in range(i - 1, -1, -1)
                                 if seq[j] == seq[i] - 1)
        yield tuple(parent)


def gen_rooted_tree_posets(n, force=False):
    """Tree posets with a unique minimal element (edges oriented away from
    the root), all covers weak, one per isomorphism class."""
    check_guard("family generation", n, FAMILY_GUARD_DEFAULT, force)
    for parent in rooted_tree_parents(n):
        covers = [(parent[v], v, WEAK) for v in range(2, n + 1)]
        yield LabeledPoset(n, covers)


def gen_free_trees(n, force=False):
    """One representative per isomorphism class of unlabeled trees."""
    check_guard("family generation", n, FAMILY_GUARD_DEFAULT, force)
    seen = set()
    for parent in rooted_tree_parents(n):
        tree = FreeTree(n, [(parent[v], v) for v in range(2, n + 1)])
        key = tree.key()
        if key not in seen:
            seen.add(key)
            yield tree


def _orientations(tree):
    """All 2^(n-1) up/down assignments of a free tree's edges, as cover
    lists (duplicates across isomorphism not yet removed)."""
    edges = tree.edges
    for bits in range(1 << len(edges)):
        covers = []
        for i, (a, b) in enumerate(edges):
            if bits >> i & 1:
                covers.append((a, b, WEAK))
            else:
                covers.append((b, a, WEAK))
        yield covers


def gen_tree_posets(n, force=False):
    """All orientations of all free trees as posets (covers marked weak,
    standing in for 'unset'), deduplicated by canonical key."""
    check_guard("family generation", n, FAMILY_GUARD_DEFAULT, force)
    seen = set()
    for tree in gen_free_trees(n, force):
        for covers in _orientations(tree):
            P = LabeledPoset(n, covers)
            key = canonical_key(P)
            if key not in seen:
                seen.add(key)
                yield P


def gen_directed_trees(n, force=False):
    """All orientations of all free trees as digraphs, one per digraph
    isomorphism class."""
    check_guard("family generation", n, FAMILY_GUARD_DEFAULT, force)
    seen = set()
    for tree in gen_free_trees(n, force):
        for bits in range(1 << len(tree.edges)):
            arcs = []
            for i, (a, b) in enumerate(tree.edges):
                arcs.append((a, b) if bits >> i & 1 else (b, a))
            G = Digraph(n, arcs)
            key = oriented_tree_key(G)
            if key not in seen:
                seen.add(key)
                yield G


POLICIES = ("all_weak", "all_strict", "all_assignments", "fair")


def gen_labeled_variants(base, policy):
    """Expand base tree posets by strictness assignments, deduplicating
    with the strictness-aware canonical key.  The fair policy emits only
    fair trees (each element's edges to its children uniformly marked)."""
    if policy not in POLICIES:
        raise DomainError(f"unknown policy {policy!r}; choose from {POLICIES}")
    seen = set()
    for P in base:
        if policy == "all_weak":
            variants = [P.with_all_weak()]
        elif policy == "all_strict":
            variants = [P.with_all_strict()]
        elif policy == "all_assignments":
            covers = [(a, b) for a, b, _ in P.covers]
            variants = (LabeledPoset(P.n,
                                     [(a, b, bool(bits >> i & 1))
                                      for i, (a, b) in enumerate(covers)])
                        for bits in range(1 << len(covers)))
        else:  # fair: one strictness choice per element with children
            variants = _fair_variants(P)
        for Q in variants:
            key = canonical_key(Q)
            if key not in seen:
                seen.add(key)
                yield Q


def _fair_variants(P):
    internal = [v for v in P.elements() if P.up_covers(v)]
    for bits in range(1 << len(internal)):
        mark = {v: bool(bits >> i & 1) for i, v in enumerate(internal)}
        covers = [(a, b, mark[a]) for a, b, _ in P.covers]
        Q = LabeledPoset(P.n, covers)
        if is_fair_tree(Q):
            yield Q


@dataclass(frozen=True)
class FamilySpec:
    """What to enumerate: a family name, a size, and (for labeled families)
    the strictness policy."""

    family: str
    n: int
    policy: str | None = None

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise DomainError(f"unknown family {self.family!r}; choose from {FAMILIES}")
        if self.n < 1:
            raise DomainError("family size must be positive")

    def describe(self):
        tag = f"{self.family}:{self.n}"
        return tag if self.policy is None else f"{tag}:{self.policy}"

    def to_json_obj(self):
        return {"family": self.family, "n": self.n, "policy": self.policy}

    @classmethod
    def from_json_obj(cls, obj):
        return cls(obj["family"], obj["n"], obj.get("policy"))

    def element_kind(self):
        if self.family == "directed_tree":
            return "digraph"
        if self.family == "free_tree":
            return "freetree"
        return "poset"


def iter_family(spec, start=0, stop=None, force=False):
    """Deterministic, restartable stream for a family; slice with
    start/stop to shard work across consumers."""
    fam, n = spec.family, spec.n
    if fam == "free_tree":
        gen = gen_free_trees(n, force)
    elif fam == "tree_poset":
        gen = gen_tree_posets(n, force)
    elif fam == "rooted_tree_poset":
        gen = gen_rooted_tree_posets(n, force)
    elif fam == "labeled_tree_poset":
        gen = gen_labeled_variants(gen_tree_posets(n, force),
                                   spec.policy or "all_assignments")
    elif fam == "labeled_rooted_tree_poset":
        gen = gen_labeled_variants(gen_rooted_tree_posets(n, force),
                                   spec.policy or "all_assignments")
    elif fam == "fair_tree":
        gen = gen_labeled_variants(gen_rooted_tree_posets(n, force), "fair")
    else:
        gen = gen_directed_trees(n, force)
    return islice(gen, start, stop)


def family_key(spec, obj):
    if spec.element_kind() == "digraph":
        return oriented_tree_key(obj)
    if spec.element_kind() == "freetree":
        return obj.key()
    return canonical_key(obj)


def family_text(spec, obj):
    return obj.to_text()


def family_parse(spec, text):
    if spec.element_kind() == "digraph":
        from .digraphs import parse_digraph_text
        return parse_digraph_text(text)
    if spec.element_kind() == "freetree":
        return FreeTree.from_text(text)
    from .posets import parse_poset_text
    return parse_poset_text(text)
