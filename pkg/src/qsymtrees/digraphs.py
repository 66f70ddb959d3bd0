"""Directed graphs and their chromatic quasisymmetric function in t.

The t-graded function is computed exactly over ordered set partitions of
the vertices into independent blocks: a proper coloring contributes the
monomial of its ordered level sets, and its ascent count only depends on
which block each endpoint landed in.  Cyclic digraphs are fine; only the
poset bridge needs acyclicity.
"""

from __future__ import annotations

from .errors import DomainError, GuardExceeded, ParseError
from .posets import LabeledPoset, STRICT, _annotated_tree_key
from .qsym import M, Composition, QSymExpr, TQSymPoly

XGT_GUARD_DEFAULT = 9


class Digraph:
    """Immutable digraph on vertices 1..n with at most one arc per ordered
    pair and no loops."""

    __slots__ = ("n", "arcs")

    def __init__(self, n, arcs):
        if not isinstance(n, int) or n < 1:
            raise DomainError(f"digraph size must be a positive integer, got {n!r}")
        seen = set()
        for arc in arcs:
            try:
                u, v = arc
            except (TypeError, ValueError):
                raise DomainError(f"arc must be a pair: {arc!r}") from None
            if not (1 <= u <= n and 1 <= v <= n):
                raise DomainError(f"arc ({u},{v}) outside vertices 1..{n}")
            if u == v:
                raise DomainError(f"self-loop at {u}")
            if (u, v) in seen:
                raise DomainError(f"duplicate arc ({u},{v})")
            seen.add((u, v))
        self.n = n
        self.arcs = tuple(sorted(seen))

    def reverse(self):
        return Digraph(self.n, [(v, u) for u, v in self.arcs])

    def undirected_edges(self):
        return sorted({(min(u, v), max(u, v)) for u, v in self.arcs})

    def components(self):
        adj = [[] for _ in range(self.n + 1)]
        for u, v in self.arcs:
            adj[u].append(v)
            adj[v].append(u)
        seen, out = set(), []
        for v in range(1, self.n + 1):
            if v in seen:
                continue
            comp, stack = [], [v]
            seen.add(v)
            while stack:
                x = stack.pop()
                comp.append(x)
                for y in adj[x]:
                    if y not in seen:
                        seen.add(y)
                        stack.append(y)
            out.append(tuple(sorted(comp)))
        return out

    def is_tree_shaped(self):
        """Underlying undirected graph is a tree."""
        return len(self.components()) == 1 and \
            len(self.undirected_edges()) == self.n - 1

    def toposort(self):
        """A topological order, or None when the digraph has a cycle."""
        indeg = [0] * (self.n + 1)
        succ = [[] for _ in range(self.n + 1)]
        for u, v in self.arcs:
            indeg[v] += 1
            succ[u].append(v)
        stack = [v for v in range(1, self.n + 1) if indeg[v] == 0]
        order = []
        while stack:
            v = stack.pop()
            order.append(v)
            for w in succ[v]:
                indeg[w] -= 1
                if indeg[w] == 0:
                    stack.append(w)
        return order if len(order) == self.n else None

    def is_acyclic(self):
        return self.toposort() is not None

    def __eq__(self, other):
        if not isinstance(other, Digraph):
            return NotImplemented
        return self.n == other.n and self.arcs == other.arcs

    def __hash__(self):
        return hash((self.n, self.arcs))

    def __repr__(self):
        arcs = ", ".join(f"{u}->{v}" for u, v in self.arcs)
        return f"Digraph({self.n}; {arcs})"

    def to_text(self):
        lines = [f"digraph {self.n}"]
        lines += [f"arc {u} {v}" for u, v in self.arcs]
        return "\n".join(lines) + "\n"

    def to_json_obj(self):
        return {"n": self.n, "arcs": [[u, v] for u, v in self.arcs]}

    @classmethod
    def from_json_obj(cls, obj):
        try:
            return cls(obj["n"], [tuple(a) for a in obj["arcs"]])
        except (KeyError, TypeError) as exc:
            raise DomainError(f"malformed digraph JSON: {exc}") from exc


def parse_digraph_text(text):
    n = None
    arcs = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        fields = line.split()
        if n is None:
            if len(fields) != 2 or fields[0] != "digraph":
                raise ParseError("expected header 'digraph <n>'", lineno)
            try:
                n = int(fields[1])
            except ValueError:
                raise ParseError(f"bad digraph size {fields[1]!r}", lineno) from None
            continue
        if fields[0] != "arc" or len(fields) != 3:
            raise ParseError("expected 'arc <u> <v>'", lineno)
        try:
            u, v = int(fields[1]), int(fields[2])
        except ValueError:
            raise ParseError(f"bad arc endpoints {fields[1:]}", lineno) from None
        if not (n and 1 <= u <= n and 1 <= v <= n) or u == v or (u, v) in arcs:
            raise ParseError(f"invalid arc ({u},{v})", lineno)
        arcs.append((u, v))
    if n is None:
        raise ParseError("missing 'digraph <n>' header", 1)
    return Digraph(n, arcs)


def parse_digraph_inline(text):
    """Parse the one-line form 'n; u->v; u->v'."""
    chunks = [c.strip() for c in text.split(";") if c.strip()]
    if not chunks:
        raise ParseError("empty digraph literal")
    try:
        n = int(chunks[0])
    except ValueError:
        raise ParseError(f"bad digraph size {chunks[0]!r}") from None
    arcs = []
    for chunk in chunks[1:]:
        if "->" not in chunk:
            raise ParseError(f"expected 'u->v', got {chunk!r}")
        u, v = chunk.split("->", 1)
        try:
            arcs.append((int(u), int(v)))
        except ValueError:
            raise ParseError(f"bad arc endpoints in {chunk!r}") from None
    return Digraph(n, arcs)


# -- the chromatic quasisymmetric function ------------------------------------

def chromatic_qsym_t(G, guard=XGT_GUARD_DEFAULT, force=False):
    """X(x, t) as a TQSymPoly with M-basis coefficients.

    Sum over ordered set partitions (B1,..,Bk) of the vertices into
    nonempty independent blocks of t^asc M_(|B1|,..,|Bk|), where asc counts
    arcs whose tail block precedes the head block.
    """
    if G.n > guard and not force:
        raise GuardExceeded(f"chromatic_qsym_t guard is n <= {guard}")
    n = G.n
    adj = [0] * n        # undirected adjacency, 0-based bit per vertex
    inm = [0] * n        # in-neighbor mask
    for u, v in G.arcs:
        adj[u - 1] |= 1 << (v - 1)
        adj[v - 1] |= 1 << (u - 1)
        inm[v - 1] |= 1 << (u - 1)
    full = (1 << n) - 1
    memo = {0: {(0, ()): 1}}

    def blocks(remaining):
        """Nonempty independent subsets of the remaining mask, with their
        ascent count from the already-placed vertices."""
        placed = full & ~remaining
        verts = []
        rest = remaining
        while rest:
            bit = rest & -rest
            rest ^= bit
            verts.append(bit.bit_length() - 1)
        out = []

        def rec(i, mask, size, asc):
            for j in range(i, len(verts)):
                v = verts[j]
                if adj[v] & mask:
                    continue
                m2 = mask | (1 << v)
                a2 = asc + (inm[v] & placed).bit_count()
                out.append((m2, size + 1, a2))
                rec(j + 1, m2, size + 1, a2)

        rec(0, 0, 0, 0)
        return out

    def solve(remaining):
        hit = memo.get(remaining)
        if hit is not None:
            return hit
        acc = {}
        for bmask, size, asc in blocks(remaining):
            for (texp, comp), c in solve(remaining & ~bmask).items():
                key = (texp + asc, (size,) + comp)
                acc[key] = acc.get(key, 0) + c
        memo[remaining] = acc
        return acc

    flat = solve(full)
    by_t = {}
    for (texp, comp), c in flat.items():
        by_t.setdefault(texp, {})[Composition(comp)] = c
    return TQSymPoly({t: QSymExpr(M, terms) for t, terms in by_t.items()})


def chromatic_sym(G, guard=XGT_GUARD_DEFAULT, force=False):
    """The classical chromatic symmetric function: X(x, t) at t = 1."""
    return chromatic_qsym_t(G, guard, force).at_t_one()


def chromatic_poly(G, k, guard=XGT_GUARD_DEFAULT, force=False):
    """Number of proper colorings with k colors, via M_alpha(1^k) =
    binomial(k, length of alpha)."""
    from math import comb
    sym = chromatic_sym(G, guard, force)
    return sum(c * comb(k, len(alpha)) for alpha, c in sym.terms.items())


def dag_to_poset(G):
    """View an acyclic digraph as a poset: u <= v iff a directed path runs
    from u to v.  Covers are the transitive reduction, all marked strict;
    redundant arcs are dropped."""
    order = G.toposort()
    if order is None:
        raise DomainError("digraph has a directed cycle; no poset view")
    succ = [[] for _ in range(G.n + 1)]
    for u, v in G.arcs:
        succ[u].append(v)
    above = [0] * (G.n + 1)
    for v in reversed(order):
        m = 0
        for w in succ[v]:
            m |= (1 << (w - 1)) | above[w]
        above[v] = m
    covers = []
    for u, v in G.arcs:
        between = False
        for w in succ[u]:
            if w != v and above[w] >> (v - 1) & 1:
                between = True
                break
        if not between:
            covers.append((u, v, STRICT))
    return LabeledPoset(G.n, covers)


def top_t_coefficient(G, guard=XGT_GUARD_DEFAULT, force=False):
    """Coefficient of the highest power of t in X(x, t); only sensible for
    acyclic digraphs, where it enumerates strictly increasing colorings."""
    if not G.is_acyclic():
        raise DomainError("top t-coefficient bridge requires an acyclic digraph")
    return chromatic_qsym_t(G, guard, force).top_coefficient()


def reverse(G):
    return G.reverse()


def reversal_invariance_check(G, guard=XGT_GUARD_DEFAULT, force=False):
    """True when for every alpha the t-polynomial on M_alpha equals the one
    on the reversed composition; this is sufficient for X to be invariant
    under reversing all arcs."""
    X = chromatic_qsym_t(G, guard, force)
    table = {}
    for texp, expr in X.coeffs.items():
        for comp, c in expr.terms.items():
            table.setdefault(comp, {})[texp] = c
    for comp, tpoly in table.items():
        if table.get(comp.reverse(), {}) != tpoly:
            return False
    return True


# -- test oracles ---------------------------------------------------------------

def xgt_truncated_by_colorings(G, k):
    """Brute-force oracle: sum over proper colorings with colors in 1..k of
    t^asc times the monomial in x_1..x_k, returned as a map
    (t exponent, exponent vector of length k) -> count."""
    from itertools import product
    out = {}
    for kappa in product(range(1, k + 1), repeat=G.n):
        ok = True
        asc = 0
        for u, v in G.arcs:
            cu, cv = kappa[u - 1], kappa[v - 1]
            if cu == cv:
                ok = False
                break
            if cu < cv:
                asc += 1
        if not ok:
            continue
        vec = [0] * k
        for c in kappa:
            vec[c - 1] += 1
        key = (asc, tuple(vec))
        out[key] = out.get(key, 0) + 1
    return out


def tqsym_truncated_expansion(X, k):
    """Expand a TQSymPoly into monomials in x_1..x_k, same keys as the
    coloring oracle."""
    from itertools import combinations
    out = {}
    for texp, expr in X.coeffs.items():
        for comp, c in expr.terms.items():
            if len(comp) > k:
                continue
            for idxs in combinations(range(k), len(comp)):
                vec = [0] * k
                for part, i in zip(comp, idxs):
                    vec[i] = part
                key = (texp, tuple(vec))
                out[key] = out.get(key, 0) + c
    return {key: c for key, c in out.items() if c}


def oriented_tree_key(G):
    """Canonical bytes for a tree-shaped digraph (centroid-rooted encoding
    with arc directions as edge annotations)."""
    if not G.is_tree_shaped():
        raise DomainError("oriented_tree_key requires a tree-shaped digraph")
    adj = [[] for _ in range(G.n + 1)]
    for u, v in G.arcs:
        adj[u].append((v, "u"))
        adj[v].append((u, "d"))
    return (f"D{G.n}:" + _annotated_tree_key(G.n, adj)).encode()
