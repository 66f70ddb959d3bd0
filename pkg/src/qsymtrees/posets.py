"""Labeled posets with strict/weak cover relations.

Elements are 1..n.  A cover (a, b, strict) means a is covered by b; a strict
cover forces f(a) < f(b) in a partition, a weak one allows f(a) <= f(b).
The stored cover set must be acyclic and transitively reduced; the full
order is its transitive closure.  Strictness lives on the covers, and a
concrete labeling realizing it is reconstructed on demand.
"""

from __future__ import annotations

import heapq
from itertools import combinations, permutations

from .errors import DomainError, GuardExceeded, ParseError, UnrealizableError
from .qsym import F, M, QPolynomial, QSymExpr, descent_composition

WEAK = False
STRICT = True

_STRICT_NAMES = {"W": False, "S": True, False: False, True: True, 0: False, 1: True}


def _strict_flag(s):
    try:
        return _STRICT_NAMES[s]
    except (KeyError, TypeError):
        raise DomainError(f"strictness must be W/S or bool, got {s!r}") from None


class LabeledPoset:
    """Immutable poset on 1..n given by its marked Hasse diagram."""

    __slots__ = ("n", "covers", "_up", "_down", "_above", "_below", "_ideals")

    def __init__(self, n, covers):
        if not isinstance(n, int) or n < 1:
            raise DomainError(f"poset size must be a positive integer, got {n!r}")
        norm = []
        seen_pairs = set()
        for cov in covers:
            try:
                a, b, s = cov
            except (TypeError, ValueError):
                raise DomainError(f"cover must be (a, b, W|S): {cov!r}") from None
            if not (1 <= a <= n and 1 <= b <= n):
                raise DomainError(f"cover ({a},{b}) outside elements 1..{n}")
            if a == b:
                raise DomainError(f"cover ({a},{b}) relates an element to itself")
            if (a, b) in seen_pairs or (b, a) in seen_pairs:
                raise DomainError(f"duplicate or opposed cover on pair ({a},{b})")
            seen_pairs.add((a, b))
            norm.append((a, b, _strict_flag(s)))
        norm.sort()
        self.n = n
        self.covers = tuple(norm)
        up = [[] for _ in range(n + 1)]
        down = [[] for _ in range(n + 1)]
        for a, b, s in norm:
            up[a].append((b, s))
            down[b].append((a, s))
        self._up = tuple(tuple(x) for x in up)
        self._down = tuple(tuple(x) for x in down)
        order = self._toposort()
        above = [0] * (n + 1)
        below = [0] * (n + 1)
        for v in reversed(order):
            m = 0
            for w, _ in up[v]:
                m |= (1 << (w - 1)) | above[w]
            above[v] = m
        for v in order:
            m = 0
            for w, _ in down[v]:
                m |= (1 << (w - 1)) | below[w]
            below[v] = m
        self._above = tuple(above)
        self._below = tuple(below)
        for a, b, _ in norm:
            if above[a] & below[b]:
                raise DomainError(
                    f"({a},{b}) is implied by other covers and is not a cover")
        self._ideals = None

    def _toposort(self):
        indeg = [0] * (self.n + 1)
        for _, b, _ in self.covers:
            indeg[b] += 1
        queue = [v for v in range(1, self.n + 1) if indeg[v] == 0]
        order = []
        while queue:
            v = queue.pop()
            order.append(v)
            for w, _ in self._up[v]:
                indeg[w] -= 1
                if indeg[w] == 0:
                    queue.append(w)
        if len(order) != self.n:
            raise DomainError("cover relation contains a cycle")
        return order

    # -- structure queries ---------------------------------------------------

    def elements(self):
        return range(1, self.n + 1)

    def up_covers(self, v):
        return self._up[v]

    def down_covers(self, v):
        return self._down[v]

    def leq(self, a, b):
        return a == b or bool(self._below[b] >> (a - 1) & 1)

    def less(self, a, b):
        return a != b and self.leq(a, b)

    def above_mask(self, v):
        return self._above[v]

    def below_mask(self, v):
        return self._below[v]

    def minimals(self):
        return [v for v in self.elements() if not self._down[v]]

    def maximals(self):
        return [v for v in self.elements() if not self._up[v]]

    def components(self):
        """Connected components of the Hasse diagram, as sorted tuples."""
        adj = [[] for _ in range(self.n + 1)]
        for a, b, _ in self.covers:
            adj[a].append(b)
            adj[b].append(a)
        seen, out = set(), []
        for v in self.elements():
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

    def is_connected(self):
        return len(self.components()) == 1

    def hasse_is_tree(self):
        return self.is_connected() and len(self.covers) == self.n - 1

    def is_all_weak(self):
        return all(not s for _, _, s in self.covers)

    def is_all_strict(self):
        return all(s for _, _, s in self.covers)

    # -- derived posets --------------------------------------------------------

    def dual(self):
        """Reverse every cover, keeping strictness marks."""
        return LabeledPoset(self.n, [(b, a, s) for a, b, s in self.covers])

    def with_all_weak(self):
        return LabeledPoset(self.n, [(a, b, WEAK) for a, b, _ in self.covers])

    def with_all_strict(self):
        return LabeledPoset(self.n, [(a, b, STRICT) for a, b, _ in self.covers])

    def relabel(self, mapping):
        """Apply a bijection old -> new element names."""
        if sorted(mapping) != list(self.elements()) or \
                sorted(mapping[v] for v in mapping) != list(self.elements()):
            raise DomainError("relabeling must be a bijection on 1..n")
        return LabeledPoset(self.n,
                            [(mapping[a], mapping[b], s) for a, b, s in self.covers])

    def induced(self, elements):
        """Induced subposet on the given elements, relabeled 1..k in sorted
        order.  Covers are recomputed from the restricted order."""
        elems = sorted(set(elements))
        for v in elems:
            if not 1 <= v <= self.n:
                raise DomainError(f"element {v} outside 1..{self.n}")
        pos = {v: i + 1 for i, v in enumerate(elems)}
        rel = {(a, b) for a in elems for b in elems if a != b and self.leq(a, b)}
        covers = []
        for a, b in rel:
            if any((a, c) in rel and (c, b) in rel for c in elems):
                continue
            # strictness is inherited only when the pair is a cover of self
            s = next((t for w, t in self._up[a] if w == b), None)
            covers.append((pos[a], pos[b], WEAK if s is None else s))
        return LabeledPoset(len(elems), covers)

    # -- equality is structural, not isomorphism ------------------------------

    def __eq__(self, other):
        if not isinstance(other, LabeledPoset):
            return NotImplemented
        return self.n == other.n and self.covers == other.covers

    def __hash__(self):
        return hash((self.n, self.covers))

    def __repr__(self):
        covs = ", ".join(f"{a}<{b} {'S' if s else 'W'}" for a, b, s in self.covers)
        return f"LabeledPoset({self.n}; {covs})"

    # -- serialization ---------------------------------------------------------

    def to_text(self):
        lines = [f"poset {self.n}"]
        lines += [f"cover {a} {b} {'S' if s else 'W'}" for a, b, s in self.covers]
        return "\n".join(lines) + "\n"

    def to_json_obj(self):
        return {"n": self.n,
                "covers": [[a, b, "S" if s else "W"] for a, b, s in self.covers]}

    @classmethod
    def from_json_obj(cls, obj):
        try:
            return cls(obj["n"], [tuple(c) for c in obj["covers"]])
        except (KeyError, TypeError) as exc:
            raise DomainError(f"malformed poset JSON: {exc}") from exc

    # -- order ideals (bitmask encoded, bit v-1 for element v) -----------------

    def ideals(self):
        """All order ideals as bitmasks, sorted by size then value."""
        if self._ideals is None:
            down_mask = [0] * (self.n + 1)
            for a, b, _ in self.covers:
                down_mask[b] |= 1 << (a - 1)
            seen = {0}
            frontier = [0]
            while frontier:
                cur = frontier.pop()
                for v in self.elements():
                    bit = 1 << (v - 1)
                    if cur & bit or (down_mask[v] & ~cur):
                        continue
                    nxt = cur | bit
                    if nxt not in seen:
                        seen.add(nxt)
                        frontier.append(nxt)
            self._ideals = sorted(seen, key=lambda m: (m.bit_count(), m))
        return self._ideals


# -- parsing -------------------------------------------------------------------

def parse_poset_text(text):
    """Parse the line-oriented poset format, with line-numbered errors."""
    n = None
    covers = []
    cover_lines = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        fields = line.split()
        if n is None:
            if len(fields) != 2 or fields[0] != "poset":
                raise ParseError("expected header 'poset <n>'", lineno)
            try:
                n = int(fields[1])
            except ValueError:
                raise ParseError(f"bad poset size {fields[1]!r}", lineno) from None
            if n < 1:
                raise ParseError(f"poset size must be positive, got {n}", lineno)
            continue
        if fields[0] != "cover" or len(fields) != 4:
            raise ParseError("expected 'cover <a> <b> W|S'", lineno)
        try:
            a, b = int(fields[1]), int(fields[2])
        except ValueError:
            raise ParseError(f"bad cover endpoints {fields[1:3]}", lineno) from None
        if fields[3] not in ("W", "S"):
            raise ParseError(f"strictness must be W or S, got {fields[3]!r}", lineno)
        covers.append((a, b, fields[3] == "S"))
        cover_lines.append(lineno)
    if n is None:
        raise ParseError("missing 'poset <n>' header", 1)
    return _build_checked(n, covers, cover_lines)


def _build_checked(n, covers, cover_lines):
    """Construct a LabeledPoset, attributing cycle/non-cover failures to the
    first offending input line."""
    for i, (a, b, _) in enumerate(covers):
        if not (1 <= a <= n and 1 <= b <= n) or a == b:
            raise ParseError(f"cover ({a},{b}) is not a pair of distinct "
                             f"elements in 1..{n}", cover_lines[i])
        if any((a, b) == (c, d) or (b, a) == (c, d)
               for c, d, _ in covers[:i]):
            raise ParseError(f"duplicate or opposed cover on pair ({a},{b})",
                             cover_lines[i])
    # cycle detection with attribution
    indeg = {v: 0 for v in range(1, n + 1)}
    ups = {v: [] for v in range(1, n + 1)}
    for a, b, _ in covers:
        indeg[b] += 1
        ups[a].append(b)
    queue = [v for v in indeg if indeg[v] == 0]
    done = 0
    while queue:
        v = queue.pop()
        done += 1
        for w in ups[v]:
            indeg[w] -= 1
            if indeg[w] == 0:
                queue.append(w)
    if done != n:
        stuck = {v for v in indeg if indeg[v] > 0}
        for i, (a, b, _) in enumerate(covers):
            if a in stuck and b in stuck:
                raise ParseError(f"cover ({a},{b}) lies on a cycle", cover_lines[i])
        raise ParseError("cover relation contains a cycle", cover_lines[0])
    try:
        return LabeledPoset(n, covers)
    except DomainError as exc:
        # only the transitive-reduction check can still fail; find its line
        for i in range(len(covers)):
            rest = covers[:i] + covers[i + 1:]
            try:
                sub = LabeledPoset(n, rest) if rest else None
            except DomainError:
                continue
            a, b, _ = covers[i]
            if sub is not None and sub.less(a, b):
                raise ParseError(f"({a},{b}) is implied by other covers and is "
                                 f"not a cover", cover_lines[i]) from None
        raise ParseError(str(exc), cover_lines[0] if cover_lines else 1) from None


def parse_poset_inline(text):
    """Parse the one-line form 'n; a<b W; a<b S'."""
    chunks = [c.strip() for c in text.split(";") if c.strip()]
    if not chunks:
        raise ParseError("empty poset literal")
    try:
        n = int(chunks[0])
    except ValueError:
        raise ParseError(f"bad poset size {chunks[0]!r}") from None
    covers = []
    for chunk in chunks[1:]:
        fields = chunk.split()
        if len(fields) != 2 or "<" not in fields[0] or fields[1] not in ("W", "S"):
            raise ParseError(f"expected 'a<b W|S', got {chunk!r}")
        lo, hi = fields[0].split("<", 1)
        try:
            covers.append((int(lo), int(hi), fields[1] == "S"))
        except ValueError:
            raise ParseError(f"bad cover endpoints in {chunk!r}") from None
    return LabeledPoset(n, covers)


# -- labelings and linear extensions --------------------------------------------

def realize_labeling(P):
    """A bijection omega: elements -> 1..n with omega increasing along weak
    covers and decreasing along strict covers, or UnrealizableError."""
    succ = [[] for _ in range(P.n + 1)]
    indeg = [0] * (P.n + 1)
    for a, b, s in P.covers:
        lo, hi = (b, a) if s else (a, b)
        succ[lo].append(hi)
        indeg[hi] += 1
    heap = [v for v in P.elements() if indeg[v] == 0]
    heapq.heapify(heap)
    omega = [0] * (P.n + 1)
    label = 0
    while heap:
        v = heapq.heappop(heap)
        label += 1
        omega[v] = label
        for w in succ[v]:
            indeg[w] -= 1
            if indeg[w] == 0:
                heapq.heappush(heap, w)
    if label != P.n:
        raise UnrealizableError("unrealizable strictness assignment: "
                                "the labeling constraints form a cycle")
    return tuple(omega)


def linear_extensions(P, omega=None):
    """Yield every linear extension once, as its word of omega-labels, by
    lazy backtracking over the currently minimal elements."""
    if omega is None:
        omega = realize_labeling(P)
    n = P.n
    down_count = [len(P.down_covers(v)) for v in range(n + 1)]
    avail = sorted(P.minimals())
    word = []

    def rec():
        if len(word) == n:
            yield tuple(word)
            return
        # iterate over a snapshot: avail mutates inside the loop
        for v in list(avail):
            avail.remove(v)
            word.append(omega[v])
            opened = []
            for w, _ in P.up_covers(v):
                down_count[w] -= 1
                if down_count[w] == 0:
                    avail.append(w)
                    opened.append(w)
            yield from rec()
            for w in opened:
                avail.remove(w)
            for w, _ in P.up_covers(v):
                down_count[w] += 1
            word.pop()
            avail.append(v)

    yield from rec()


def linear_extension_count(P):
    """Number of linear extensions, by dynamic programming over ideals
    (independent of the streaming generator)."""
    above = P._above
    count = {0: 1}
    for ideal in P.ideals()[1:]:
        total = 0
        rest = ideal
        while rest:
            bit = rest & -rest
            rest ^= bit
            v = bit.bit_length()
            if above[v] & ideal:
                continue
            total += count[ideal ^ bit]
        count[ideal] = total
    return count[(1 << P.n) - 1]


# -- partition enumerators -------------------------------------------------------

def enumerator_f(P, omega=None):
    """K_(P,omega) in the fundamental basis: sum of F over the descent
    compositions of all linear extensions.  Requires a realizable
    strictness assignment."""
    if omega is None:
        omega = realize_labeling(P)
    acc = {}
    for word in linear_extensions(P, omega):
        comp = descent_composition(word)
        acc[comp] = acc.get(comp, 0) + 1
    return QSymExpr(F, acc)


def enumerator_m(P):
    """The same enumerator in the monomial basis, computed directly from
    chains of order ideals: a composition (c1,..,ck) counts the ideal
    chains whose successive layers have those sizes and contain no strict
    cover inside a layer.  This is the per-edge semantics, so it is defined
    even for strictness assignments no labeling realizes."""
    n = P.n
    strict_up = [0] * (n + 1)
    for a, b, s in P.covers:
        if s:
            strict_up[a] |= 1 << (b - 1)
    above = P._above
    km = {0: {(): 1}}
    for ideal in P.ideals()[1:]:
        acc = {}
        visited = {ideal}
        stack = [ideal]
        while stack:
            sub = stack.pop()
            layer = ideal ^ sub
            if layer:
                part = layer.bit_count()
                for comp, c in km[sub].items():
                    key = comp + (part,)
                    if key in acc:
                        acc[key] += c
                    else:
                        acc[key] = c
            rest = sub
            while rest:
                bit = rest & -rest
                rest ^= bit
                v = bit.bit_length()
                if above[v] & sub:
                    continue            # not maximal in sub
                if strict_up[v] & layer:
                    continue            # would put a strict cover inside the layer
                nxt = sub ^ bit
                if nxt not in visited:
                    visited.add(nxt)
                    stack.append(nxt)
        km[ideal] = acc
    return QSymExpr(M, km[(1 << n) - 1])


def partition_count_oracle(P, k, cap=4_000_000):
    """Brute-force count of maps f: elements -> {0..k-1} that weakly
    increase along weak covers and strictly along strict covers, graded by
    sum f(p).  Exponential; guarded by cap on k**n."""
    if k < 0:
        raise DomainError("number of values must be nonnegative")
    if k == 0:
        return QPolynomial()
    if k ** P.n > cap:
        raise GuardExceeded(f"{k}**{P.n} exceeds the oracle cap {cap}")
    # constraints against already-assigned (smaller-index) elements only
    cons = [[] for _ in range(P.n + 1)]
    for a, b, s in P.covers:
        if a < b:
            cons[b].append((a, True, s))    # f(a) <= / < f(current)
        else:
            cons[a].append((b, False, s))   # f(current) <= / < f(b)
    values = [0] * (P.n + 1)
    acc = {}

    def rec(v, total):
        if v > P.n:
            acc[total] = acc.get(total, 0) + 1
            return
        for x in range(k):
            ok = True
            for u, lower, s in cons[v]:
                y = values[u]
                if lower:
                    if y > x or (s and y == x):
                        ok = False
                        break
                else:
                    if x > y or (s and x == y):
                        ok = False
                        break
            if ok:
                values[v] = x
                rec(v + 1, total + x)
        values[v] = 0

    rec(1, 0)
    return QPolynomial(acc)


def all_weak(P):
    return P.with_all_weak()


def all_strict(P):
    return P.with_all_strict()


def dual(P):
    return P.dual()


# -- constructions ---------------------------------------------------------------

def chain(n, stricts=None):
    """The n-chain 1 < 2 < ... < n; stricts gives the n-1 edge marks."""
    if stricts is None:
        stricts = [WEAK] * (n - 1)
    stricts = [_strict_flag(s) for s in stricts]
    if len(stricts) != n - 1:
        raise DomainError(f"need {n - 1} strictness marks for an {n}-chain")
    return LabeledPoset(n, [(i, i + 1, stricts[i - 1]) for i in range(1, n)])


def antichain(n):
    return LabeledPoset(n, [])


def disjoint_union(P, Q):
    """Plain union, Q relabeled up by |P|."""
    covers = list(P.covers)
    covers += [(a + P.n, b + P.n, s) for a, b, s in Q.covers]
    return LabeledPoset(P.n + Q.n, covers)


def _ordinal_sum(P, Q, strict):
    covers = list(P.covers)
    covers += [(a + P.n, b + P.n, s) for a, b, s in Q.covers]
    covers += [(m, q + P.n, strict) for m in P.maximals() for q in Q.minimals()]
    return LabeledPoset(P.n + Q.n, covers)


def ordinal_sum_weak(P, Q):
    """Put P below Q with a weak cover from each maximal of P to each
    minimal of Q."""
    return _ordinal_sum(P, Q, WEAK)


def ordinal_sum_strict(P, Q):
    return _ordinal_sum(P, Q, STRICT)


# -- the necessary-condition battery ----------------------------------------------

def jump_levels(P):
    """jump(v) = length in edges of the longest chain from v down to a
    minimal element."""
    order = P._toposort()
    jump = [0] * (P.n + 1)
    for v in order:
        if P.down_covers(v):
            jump[v] = 1 + max(jump[w] for w, _ in P.down_covers(v))
    return {v: jump[v] for v in P.elements()}


def up_jump_levels(P):
    """up-jump(v) = longest chain from v up to a maximal element."""
    return jump_levels(P.dual())


def jump_vector(P):
    """Counts of elements at each jump value, as a tuple indexed from 0."""
    levels = jump_levels(P)
    top = max(levels.values())
    out = [0] * (top + 1)
    for j in levels.values():
        out[j] += 1
    return tuple(out)


def jump_pairs(P):
    """Map (jump, up-jump) -> number of elements."""
    down = jump_levels(P)
    up = up_jump_levels(P)
    out = {}
    for v in P.elements():
        key = (down[v], up[v])
        out[key] = out.get(key, 0) + 1
    return out


def strict_jump_levels(P):
    """Largest number of strict covers on a descending cover path from each
    element; these are the values of the minimal partition, shifted by 1."""
    order = P._toposort()
    lev = [0] * (P.n + 1)
    for v in order:
        best = 0
        for w, s in P.down_covers(v):
            cand = lev[w] + (1 if s else 0)
            if cand > best:
                best = cand
        lev[v] = best
    return {v: lev[v] for v in P.elements()}


def strict_jump_vector(P):
    levels = strict_jump_levels(P)
    top = max(levels.values())
    out = [0] * (top + 1)
    for j in levels.values():
        out[j] += 1
    return tuple(out)


def leading_term_check(P):
    """Leading monomial of the enumerator expanded into monomials.  Returns
    (expected exponent vector, True iff the leading term is exactly that
    vector with coefficient 1).  The expected vector counts elements by
    their strict-jump level."""
    expected = strict_jump_vector(P)
    mexp = enumerator_m(P)
    lead = max(mexp.terms)
    return expected, tuple(lead) == expected and mexp.terms[lead] == 1


def anti_table(P, guard=16):
    """Map (k, i, j) -> number of k-element order ideals with i maximal
    elements whose complement has j minimal elements."""
    if P.n > guard:
        raise GuardExceeded(f"anti_table guard is n <= {guard}")
    above, below = P._above, P._below
    full = (1 << P.n) - 1
    out = {}
    for ideal in P.ideals():
        k = ideal.bit_count()
        comp = full & ~ideal
        i = j = 0
        rest = ideal
        while rest:
            bit = rest & -rest
            rest ^= bit
            if not above[bit.bit_length()] & ideal:
                i += 1
        rest = comp
        while rest:
            bit = rest & -rest
            rest ^= bit
            if not below[bit.bit_length()] & comp:
                j += 1
        key = (k, i, j)
        out[key] = out.get(key, 0) + 1
    return out


def antichain_counts(P, guard=16):
    """Number of antichains of each size, by direct enumeration over
    index-increasing pairwise-incomparable sets (independent of the ideal
    route used by anti_table)."""
    if P.n > guard:
        raise GuardExceeded(f"antichain_counts guard is n <= {guard}")
    comparable = [0] * (P.n + 1)
    for v in P.elements():
        comparable[v] = P._above[v] | P._below[v]
    out = {0: 1}

    def rec(start, chosen_mask, size):
        for v in range(start, P.n + 1):
            if comparable[v] & chosen_mask:
                continue
            out[size + 1] = out.get(size + 1, 0) + 1
            rec(v + 1, chosen_mask | (1 << (v - 1)), size + 1)

    rec(1, 0, 0)
    return out


def greene_shape(P, guard=11):
    """Partition (c1-c0, c2-c1, ...) where c_k is the maximum size of a
    union of k chains, found by exhaustive search over maximal chains with
    memoization on (remaining set, k)."""
    if P.n > guard:
        raise GuardExceeded(f"greene_shape guard is n <= {guard}")
    above = P._above

    def maximal_chains(mask):
        """All maximal chains of the induced subposet on mask, as masks."""
        chains = []
        minima = []
        rest = mask
        while rest:
            bit = rest & -rest
            rest ^= bit
            if not P._below[bit.bit_length()] & mask:
                minima.append(bit)

        def extend(cmask, top):
            nxt = above[top] & mask
            # candidates: elements of mask above top that cover top within mask
            found = False
            rest2 = nxt
            while rest2:
                bit = rest2 & -rest2
                rest2 ^= bit
                v = bit.bit_length()
                if P._below[v] & nxt:   # something of mask sits between
                    continue
                found = True
                extend(cmask | bit, v)
            if not found:
                chains.append(cmask)

        for bit in minima:
            extend(bit, bit.bit_length())
        return chains

    memo = {}

    def best(mask, k):
        if not mask or k == 0:
            return 0
        key = (mask, k)
        if key in memo:
            return memo[key]
        out = 0
        for cmask in maximal_chains(mask):
            got = cmask.bit_count() + best(mask & ~cmask, k - 1)
            if got > out:
                out = got
        memo[key] = out
        return out

    full = (1 << P.n) - 1
    shape = []
    prev = 0
    k = 1
    while prev < P.n:
        cur = best(full, k)
        shape.append(cur - prev)
        prev = cur
        k += 1
    return tuple(shape)


def pointed_partition_exists(P, weights):
    """True iff the all-weak poset P has an order-preserving surjection onto
    1..len(weights) with the given fiber sizes in which every fiber has a
    unique minimal element."""
    if not P.is_all_weak():
        raise DomainError("pointed partitions are defined for all-weak posets")
    weights = tuple(int(w) for w in weights)
    if any(w < 1 for w in weights):
        raise DomainError("weights must be positive")
    if sum(weights) != P.n:
        raise DomainError(f"weights sum to {sum(weights)}, poset has {P.n} elements")
    below = P._below
    by_size = {}
    for ideal in P.ideals():
        by_size.setdefault(ideal.bit_count(), []).append(ideal)

    def unique_min(layer):
        count = 0
        rest = layer
        while rest:
            bit = rest & -rest
            rest ^= bit
            if not below[bit.bit_length()] & layer:
                count += 1
                if count > 1:
                    return False
        return count == 1

    full = (1 << P.n) - 1
    dead = set()

    def rec(i, ideal):
        if i == len(weights):
            return ideal == full
        if (i, ideal) in dead:
            return False
        size = ideal.bit_count() + weights[i]
        for nxt in by_size.get(size, ()):
            if nxt & ideal != ideal:
                continue
            if not unique_min(nxt ^ ideal):
                continue
            if rec(i + 1, nxt):
                return True
        dead.add((i, ideal))
        return False

    return rec(0, 0)


# -- canonical forms and isomorphism ------------------------------------------------

def _annotated_tree_key(n, adj):
    """Canonical encoding of a tree with per-directed-edge annotation
    strings: adj[v] lists (w, label-of-edge-as-seen-from-v).  Rooted at the
    centroid(s); two-centroid ties take the smaller encoding."""
    if n == 1:
        return "()"
    size = [0] * (n + 1)
    order = []
    parent = [0] * (n + 1)
    stack = [(1, 0)]
    while stack:
        v, p = stack.pop()
        parent[v] = p
        order.append(v)
        for w, _ in adj[v]:
            if w != p:
                stack.append((w, v))
    for v in reversed(order):
        size[v] = 1 + sum(size[w] for w, _ in adj[v] if parent[w] == v)
    centroids = []
    for v in range(1, n + 1):
        heaviest = max((size[w] if parent[w] == v else n - size[v])
                       for w, _ in adj[v])
        if heaviest <= n // 2:
            centroids.append(v)

    def encode(v, p):
        subs = sorted(lab + encode(w, v) for w, lab in adj[v] if w != p)
        return "(" + "".join(subs) + ")"

    return min(encode(c, 0) for c in centroids)


def _poset_tree_key(P):
    adj = [[] for _ in range(P.n + 1)]
    for a, b, s in P.covers:
        mark = "S" if s else "W"
        adj[a].append((b, "u" + mark))
        adj[b].append((a, "d" + mark))
    return f"T{P.n}:" + _annotated_tree_key(P.n, adj)


def _refine_colors(P, colors):
    """Iterate cover-signature refinement to a fixpoint; colors are dense
    ranks, deterministic across runs."""
    n = P.n
    while True:
        sigs = []
        for v in range(1, n + 1):
            up = tuple(sorted((s, colors[w - 1]) for w, s in P.up_covers(v)))
            down = tuple(sorted((s, colors[w - 1]) for w, s in P.down_covers(v)))
            sigs.append((colors[v - 1], up, down))
        ranking = {sig: i for i, sig in enumerate(sorted(set(sigs)))}
        new = tuple(ranking[s] for s in sigs)
        if new == colors:
            return colors
        colors = new


def _encode_with_order(P, order):
    pos = {v: i + 1 for i, v in enumerate(order)}
    covs = sorted((pos[a], pos[b], "S" if s else "W") for a, b, s in P.covers)
    return ";".join(f"{a}<{b}{m}" for a, b, m in covs)


def _general_key(P, guard=11):
    """Canonical form by color refinement plus backtracking
    individualization; exact for any poset, guarded by size."""
    if P.n > guard:
        raise GuardExceeded(f"general canonical form guard is n <= {guard}")
    n = P.n

    def search(colors):
        colors = _refine_colors(P, colors)
        cells = {}
        for v in range(1, n + 1):
            cells.setdefault(colors[v - 1], []).append(v)
        splittable = [c for c in sorted(cells) if len(cells[c]) > 1]
        if not splittable:
            order = sorted(range(1, n + 1), key=lambda v: colors[v - 1])
            return _encode_with_order(P, order)
        target = cells[splittable[0]]
        best = None
        for v in target:
            branch = list(colors)
            branch[v - 1] = n + 1   # individualize
            enc = search(tuple(branch))
            if best is None or enc < best:
                best = enc
        return best

    return f"G{n}:" + search((0,) * n)


def canonical_key(P, guard=11):
    """Bytes identifying the isomorphism class of a labeled poset, with
    strictness.  Tree components use a centroid-rooted encoding; other
    components fall back to the backtracking canonical labeling."""
    comps = P.components()
    keys = []
    for comp in comps:
        pos = {v: i + 1 for i, v in enumerate(comp)}
        inside = set(comp)
        sub = LabeledPoset(len(comp),
                           [(pos[a], pos[b], s) for a, b, s in P.covers
                            if a in inside and b in inside]) \
            if len(comps) > 1 else P
        keys.append(_poset_tree_key(sub) if sub.hasse_is_tree()
                    else _general_key(sub, guard))
    if len(keys) == 1:
        return keys[0].encode()
    return (f"P{P.n}[" + "|".join(sorted(keys)) + "]").encode()


def _iso_signature(P):
    weak = sum(1 for _, _, s in P.covers if not s)
    strict = len(P.covers) - weak
    degs = sorted((len([1 for _, s in P.up_covers(v) if s]),
                   len([1 for _, s in P.up_covers(v) if not s]),
                   len([1 for _, s in P.down_covers(v) if s]),
                   len([1 for _, s in P.down_covers(v) if not s]))
                  for v in P.elements())
    return (P.n, weak, strict, jump_vector(P), tuple(degs))


def is_isomorphic(P, Q):
    """Backtracking isomorphism test (covers and strictness preserved)."""
    if _iso_signature(P) != _iso_signature(Q):
        return False
    n = P.n
    cov_q = set(Q.covers)
    assign = {}
    used = set()

    # match most-constrained elements first
    order = sorted(P.elements(),
                   key=lambda v: -(len(P.up_covers(v)) + len(P.down_covers(v))))

    def compatible(v, w):
        for u, s in P.up_covers(v):
            if u in assign and (w, assign[u], s) not in cov_q:
                return False
        for u, s in P.down_covers(v):
            if u in assign and (assign[u], w, s) not in cov_q:
                return False
        # degree profile must match exactly
        return (len(P.up_covers(v)) == len(Q.up_covers(w))
                and len(P.down_covers(v)) == len(Q.down_covers(w)))

    def rec(i):
        if i == n:
            return True
        v = order[i]
        for w in Q.elements():
            if w in used or not compatible(v, w):
                continue
            assign[v] = w
            used.add(w)
            if rec(i + 1):
                return True
            del assign[v]
            used.remove(w)
        return False

    return rec(0)


# -- fair trees and the recursively built class -------------------------------------

def is_fair_tree(P):
    """Rooted-tree poset (unique minimal element, tree Hasse diagram) in
    which each element's covers to its children are all strict or all
    weak."""
    if not P.hasse_is_tree() or len(P.minimals()) != 1:
        return False
    for v in P.elements():
        marks = {s for _, s in P.up_covers(v)}
        if len(marks) > 1:
            return False
    return True


def _class_c_recursive(P):
    """Membership in the recursively built class: singletons, disjoint
    unions, and one-element ordinal sums below or above (uniform edge
    type)."""
    above, below = P._above, P._below
    neigh = [0] * (P.n + 1)
    for v in P.elements():
        neigh[v] = above[v] | below[v]
    memo = {}

    def components(mask):
        out = []
        rest = mask
        while rest:
            bit = rest & -rest
            comp = bit
            frontier = bit
            while frontier:
                b = frontier & -frontier
                frontier ^= b
                new = neigh[b.bit_length()] & mask & ~comp
                comp |= new
                frontier |= new
            out.append(comp)
            rest &= ~comp
        return out

    def covers_in(v, mask, upward):
        pairs = P.up_covers(v) if upward else P.down_covers(v)
        return [s for w, s in pairs if mask >> (w - 1) & 1]

    def rec(mask):
        if mask in memo:
            return memo[mask]
        if mask.bit_count() == 1:
            memo[mask] = True
            return True
        comps = components(mask)
        if len(comps) > 1:
            out = all(rec(c) for c in comps)
            memo[mask] = out
            return out
        minima = [v for v in P.elements()
                  if mask >> (v - 1) & 1 and not below[v] & mask]
        out = False
        if len(minima) == 1:
            marks = covers_in(minima[0], mask, upward=True)
            if len(set(marks)) == 1:
                out = rec(mask & ~(1 << (minima[0] - 1)))
        if not out:
            maxima = [v for v in P.elements()
                      if mask >> (v - 1) & 1 and not above[v] & mask]
            if len(maxima) == 1:
                marks = covers_in(maxima[0], mask, upward=False)
                if len(set(marks)) == 1:
                    out = rec(mask & ~(1 << (maxima[0] - 1)))
        memo[mask] = out
        return out

    return rec((1 << P.n) - 1)


_BOWTIE_REL = frozenset({(0, 2), (0, 3), (1, 2), (1, 3)})
_N_REL = frozenset({(0, 2), (1, 2), (1, 3)})


def _matches_pattern(rel, pattern):
    if len(rel) != len(pattern):
        return False
    for perm in permutations(range(4)):
        if {(perm[a], perm[b]) for a, b in rel} == pattern:
            return True
    return False


def _class_c_patterns(P):
    """The forbidden-pattern characterization: no induced bowtie, no
    induced N, and every element's up covers (and down covers) carry a
    single edge type.  A mixed pair of covers at one element is exactly a
    convex mixed three-element pattern."""
    for v in P.elements():
        if len({s for _, s in P.up_covers(v)}) > 1:
            return False
        if len({s for _, s in P.down_covers(v)}) > 1:
            return False
    for quad in combinations(P.elements(), 4):
        rel = {(i, j) for i in range(4) for j in range(4)
               if i != j and P.less(quad[i], quad[j])}
        if _matches_pattern(rel, _BOWTIE_REL) or _matches_pattern(rel, _N_REL):
            return False
    return True


def is_in_class_c(P):
    """Both deciders must agree; a mismatch would be a build-breaking bug."""
    rec = _class_c_recursive(P)
    pat = _class_c_patterns(P)
    if rec != pat:
        raise RuntimeError(f"class-C deciders disagree on {P!r}: "
                           f"recursive={rec} patterns={pat}")
    return rec
