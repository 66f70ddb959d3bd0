"""Exact arithmetic on quasisymmetric functions in the monomial (M) and
fundamental (F) bases.

Basis elements are indexed by integer compositions.  A composition of n
corresponds to a subset of [n-1] (the partial sums without the last one),
and every F/M term carries its weight n through the composition itself, so
the subset notation is never stored.  Coefficients are Python ints, hence
exact at any size.  All values are immutable once built and serialize
canonically (terms sorted lexicographically by parts).
"""

from __future__ import annotations

import json
from functools import lru_cache
from itertools import combinations

from .errors import BasisMismatchError, DomainError

M = "M"
F = "F"


class Composition(tuple):
    """Finite sequence of positive integers; () is the empty composition."""

    __slots__ = ()

    def __new__(cls, parts=()):
        parts = tuple(parts)
        for p in parts:
            if not isinstance(p, int) or isinstance(p, bool) or p < 1:
                raise DomainError(f"composition parts must be positive integers: {parts!r}")
        return tuple.__new__(cls, parts)

    @property
    def weight(self):
        return sum(self)

    @property
    def length(self):
        return len(self)

    def descent_set(self):
        """S(alpha) = {a1, a1+a2, ...}, a subset of [weight-1]."""
        out, acc = [], 0
        for p in self[:-1]:
            acc += p
            out.append(acc)
        return frozenset(out)

    def reverse(self):
        return Composition(self[::-1])

    def complement(self):
        """Composition of the complementary subset of [n-1], same weight."""
        n = self.weight
        return subset_to_composition(frozenset(range(1, n)) - self.descent_set(), n)

    def __repr__(self):
        return f"Composition({tuple(self)!r})"


def descent_composition(word):
    """Descent composition of a word with distinct entries: run lengths
    between positions i where word[i] > word[i+1]."""
    word = tuple(word)
    if not word:
        raise DomainError("empty word has no descent composition")
    if len(set(word)) != len(word):
        raise DomainError(f"word entries must be distinct: {word!r}")
    parts, run = [], 1
    for i in range(len(word) - 1):
        if word[i] > word[i + 1]:
            parts.append(run)
            run = 1
        else:
            run += 1
    parts.append(run)
    return Composition(parts)


def composition_to_subset(alpha):
    """Return (S(alpha), n).  Inverse of subset_to_composition."""
    alpha = alpha if isinstance(alpha, Composition) else Composition(alpha)
    return alpha.descent_set(), alpha.weight


def subset_to_composition(subset, n):
    """Composition of n whose partial sums are the given subset of [n-1]."""
    if n < 0:
        raise DomainError(f"weight must be nonnegative: {n}")
    cuts = sorted(set(subset))
    for s in cuts:
        if not 1 <= s <= n - 1:
            raise DomainError(f"subset element {s} outside [{n - 1}]")
    parts, prev = [], 0
    for s in cuts:
        parts.append(s - prev)
        prev = s
    if n > 0:
        parts.append(n - prev)
    return Composition(parts)


class QSymExpr:
    """Sparse integer linear combination of M- or F-basis elements."""

    __slots__ = ("basis", "terms")

    def __init__(self, basis, terms=()):
        if basis not in (M, F):
            raise DomainError(f"unknown basis tag {basis!r}")
        acc = {}
        items = terms.items() if isinstance(terms, dict) else terms
        for comp, coeff in items:
            coeff = int(coeff)
            if coeff == 0:
                continue
            if not isinstance(comp, Composition):
                comp = Composition(comp)
            new = acc.get(comp, 0) + coeff
            if new:
                acc[comp] = new
            else:
                del acc[comp]
        self.basis = basis
        self.terms = acc  # never mutated after construction

    # -- constructors ------------------------------------------------------

    @classmethod
    def zero(cls, basis=F):
        return cls(basis)

    @classmethod
    def unit(cls, basis=F):
        return cls(basis, {Composition(): 1})

    # -- queries -----------------------------------------------------------

    def is_zero(self):
        return not self.terms

    def degree(self):
        """Maximal term weight (0 for the zero expression)."""
        return max((c.weight for c in self.terms), default=0)

    def is_homogeneous(self):
        return len({c.weight for c in self.terms}) <= 1

    def coefficient(self, comp):
        comp = comp if isinstance(comp, Composition) else Composition(comp)
        return self.terms.get(comp, 0)

    def support(self):
        return frozenset(self.terms)

    def sorted_terms(self):
        return sorted(self.terms.items())

    def _m_terms(self):
        return self.terms if self.basis == M else f_to_m(self).terms

    # -- algebra -----------------------------------------------------------

    def _check_same_basis(self, other):
        if self.basis != other.basis:
            raise BasisMismatchError(
                f"cannot combine {self.basis}-basis and {other.basis}-basis terms; convert first")

    def __add__(self, other):
        if not isinstance(other, QSymExpr):
            return NotImplemented
        self._check_same_basis(other)
        acc = dict(self.terms)
        for comp, c in other.terms.items():
            acc[comp] = acc.get(comp, 0) + c
        return QSymExpr(self.basis, acc)

    def __neg__(self):
        return QSymExpr(self.basis, {c: -v for c, v in self.terms.items()})

    def __sub__(self, other):
        if not isinstance(other, QSymExpr):
            return NotImplemented
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, int):
            return QSymExpr(self.basis, {c: v * other for c, v in self.terms.items()})
        if isinstance(other, QSymExpr):
            return multiply(self, other)
        return NotImplemented

    __rmul__ = __mul__

    def __eq__(self, other):
        if not isinstance(other, QSymExpr):
            return NotImplemented
        if self.basis == other.basis:
            return self.terms == other.terms
        return self._m_terms() == other._m_terms()

    def __hash__(self):
        return hash(tuple(sorted(self._m_terms().items())))

    # -- rendering and serialization ----------------------------------------

    def __str__(self):
        if not self.terms:
            return "0"
        bits = []
        for comp, c in self.sorted_terms():
            name = f"{self.basis}[{','.join(map(str, comp))}]" if comp else "1"
            if c == 1:
                piece = name
            elif c == -1:
                piece = f"-{name}"
            else:
                piece = f"{c}*{name}"
            bits.append(piece)
        out = " + ".join(bits)
        return out.replace("+ -", "- ")

    def __repr__(self):
        return f"QSymExpr({self})"

    def to_json_obj(self):
        return {"basis": self.basis,
                "terms": [{"comp": list(comp), "coeff": str(c)}
                          for comp, c in self.sorted_terms()]}

    def canonical_bytes(self):
        return json.dumps(self.to_json_obj(), separators=(",", ":")).encode()

    @classmethod
    def from_json_obj(cls, obj):
        try:
            basis = obj["basis"]
            terms = {Composition(t["comp"]): int(t["coeff"]) for t in obj["terms"]}
        except (KeyError, TypeError) as exc:
            raise DomainError(f"malformed QSym JSON: {exc}") from exc
        return cls(basis, terms)


def F_(*parts):
    """The fundamental basis element F_parts (F_() is the unit)."""
    return QSymExpr(F, {Composition(parts): 1})


def M_(*parts):
    """The monomial basis element M_parts (M_() is the unit)."""
    return QSymExpr(M, {Composition(parts): 1})


# -- basis changes ----------------------------------------------------------
#
# Subsets of [n-1] are handled as bitmasks here (bit i-1 for element i);
# superset sums walk the submasks of the complement, which keeps the
# conversions cheap enough for the exhaustive scans.

@lru_cache(maxsize=None)
def _comp_from_mask(mask, n):
    parts = []
    prev = 0
    pos = 1
    while mask:
        if mask & 1:
            parts.append(pos - prev)
            prev = pos
        mask >>= 1
        pos += 1
    parts.append(n - prev)
    return Composition(parts)


def _comp_mask(comp):
    mask = 0
    acc = 0
    for p in comp[:-1]:
        acc += p
        mask |= 1 << (acc - 1)
    return mask


def _convert(expr, want, signed):
    acc = {}
    for comp, c in expr.terms.items():
        n = comp.weight
        if n == 0:
            acc[comp] = acc.get(comp, 0) + c
            continue
        smask = _comp_mask(comp)
        free = ((1 << (n - 1)) - 1) & ~smask
        sub = free
        while True:
            coeff = -c if (signed and sub.bit_count() & 1) else c
            t = _comp_from_mask(smask | sub, n)
            new = acc.get(t, 0) + coeff
            if new:
                acc[t] = new
            elif t in acc:
                del acc[t]
            if sub == 0:
                break
            sub = (sub - 1) & free
    return QSymExpr(want, acc)


def f_to_m(expr):
    """Expand F-terms into monomial terms: F_{S,n} = sum of M_{T,n} over
    supersets T of S inside [n-1]."""
    if expr.basis != F:
        raise BasisMismatchError("f_to_m expects an F-basis expression")
    return _convert(expr, M, signed=False)


def m_to_f(expr):
    """Inclusion-exclusion inverse of f_to_m; f_to_m(m_to_f(x)) == x."""
    if expr.basis != M:
        raise BasisMismatchError("m_to_f expects an M-basis expression")
    return _convert(expr, F, signed=True)


# -- multiplication ----------------------------------------------------------

def chain_word(alpha):
    """A word on [n] whose descent composition is alpha: blocks of
    consecutive values, assigned from the top down, each block ascending."""
    alpha = alpha if isinstance(alpha, Composition) else Composition(alpha)
    word = []
    hi = alpha.weight
    for part in alpha:
        word.extend(range(hi - part + 1, hi + 1))
        hi -= part
    return tuple(word)


@lru_cache(maxsize=None)
def _shuffle_descent_counts(alpha, beta):
    """Multiset of descent compositions over all interleavings of the two
    canonical chain words (second shifted to keep labels disjoint)."""
    u = chain_word(Composition(alpha))
    v = tuple(x + sum(alpha) for x in chain_word(Composition(beta)))
    counts = {}
    word = [0] * (len(u) + len(v))

    def rec(i, j):
        k = i + j
        if i == len(u) and j == len(v):
            comp = descent_composition(word)
            counts[comp] = counts.get(comp, 0) + 1
            return
        if i < len(u):
            word[k] = u[i]
            rec(i + 1, j)
        if j < len(v):
            word[k] = v[j]
            rec(i, j + 1)

    if not word:
        counts[Composition()] = 1
    else:
        rec(0, 0)
    return counts


def multiply(f, g):
    """Product in QSym via the shuffle of labeled chains: realize each
    F-term as a labeled chain, take the disjoint union, and sum F over the
    label shuffles.  M-basis inputs are converted on the way in; if both
    inputs were monomial the result is converted back to M."""
    both_m = f.basis == M and g.basis == M
    ff = f if f.basis == F else m_to_f(f)
    gg = g if g.basis == F else m_to_f(g)
    acc = {}
    for a, ca in ff.terms.items():
        for b, cb in gg.terms.items():
            c = ca * cb
            for comp, mult in _shuffle_descent_counts(tuple(a), tuple(b)).items():
                acc[comp] = acc.get(comp, 0) + c * mult
    out = QSymExpr(F, acc)
    return f_to_m(out) if both_m else out


@lru_cache(maxsize=None)
def _quasi_shuffle(alpha, beta):
    """Overlapping-shuffle product of two compositions, as comp -> count."""
    if not alpha:
        return {Composition(beta): 1}
    if not beta:
        return {Composition(alpha): 1}
    acc = {}

    def absorb(head, table):
        for comp, c in table.items():
            key = Composition((head,) + tuple(comp))
            acc[key] = acc.get(key, 0) + c

    absorb(alpha[0], _quasi_shuffle(alpha[1:], beta))
    absorb(beta[0], _quasi_shuffle(alpha, beta[1:]))
    absorb(alpha[0] + beta[0], _quasi_shuffle(alpha[1:], beta[1:]))
    return acc


def multiply_m_quasishuffle(f, g):
    """Independent oracle for multiply: the quasi-shuffle product on the
    monomial basis.  Kept off the main code path on purpose."""
    if f.basis != M or g.basis != M:
        raise BasisMismatchError("quasi-shuffle product expects M-basis input")
    acc = {}
    for a, ca in f.terms.items():
        for b, cb in g.terms.items():
            c = ca * cb
            for comp, mult in _quasi_shuffle(tuple(a), tuple(b)).items():
                acc[comp] = acc.get(comp, 0) + c * mult
    return QSymExpr(M, acc)


# -- the bar involution -------------------------------------------------------

def bar(f):
    """Complement every term's descent set within its own weight:
    F_{S,n} -> F_{[n-1] minus S, n}.  An involution."""
    if f.basis != F:
        raise BasisMismatchError("bar expects an F-basis expression")
    return QSymExpr(F, {comp.complement(): c for comp, c in f.terms.items()})


# -- the two noncommutative ordinal-sum products ------------------------------

def _compose_up(a, b):
    return Composition(tuple(a[:-1]) + (a[-1] + b[0],) + tuple(b[1:]))


def _compose_upup(a, b):
    return Composition(tuple(a) + tuple(b))


def _ordinal_product(f, g, combine):
    if f.basis != F or g.basis != F:
        raise BasisMismatchError("ordinal-sum products expect F-basis input")
    acc = {}
    for a, ca in f.terms.items():
        if not a:
            raise DomainError("empty composition operand in ordinal-sum product")
        for b, cb in g.terms.items():
            if not b:
                raise DomainError("empty composition operand in ordinal-sum product")
            key = combine(a, b)
            acc[key] = acc.get(key, 0) + ca * cb
    return QSymExpr(F, acc)


def uparrow_product(f, g):
    """Bilinear extension of (a1..ak) ^ (b1..bl) = (a1,..,ak+b1,..,bl)."""
    return _ordinal_product(f, g, _compose_up)


def upuparrow_product(f, g):
    """Bilinear extension of composition concatenation."""
    return _ordinal_product(f, g, _compose_upup)


# -- principal specialization -------------------------------------------------

@lru_cache(maxsize=None)
def _spec_m_term(comp, k):
    """Exponent histogram of M_comp at x_i = q^(i-1), i <= k.  Cached: the
    scans evaluate the same compositions across thousands of posets."""
    out = {}
    l = len(comp)
    for idxs in combinations(range(k), l):
        e = 0
        for p, i in zip(comp, idxs):
            e += p * i
        out[e] = out.get(e, 0) + 1
    return out


def principal_specialization(f, k):
    """Substitute x_i = q^(i-1) for i <= k and 0 beyond, exactly.

    Computed on the M basis: M_alpha contributes q^(sum a_j (i_j - 1)) over
    all index choices i_1 < ... < i_l <= k, and vanishes when l > k.
    """
    if k < 0:
        raise DomainError("specialization order must be nonnegative")
    terms = f.terms if f.basis == M else f_to_m(f).terms
    acc = {}
    for comp, c in terms.items():
        if len(comp) > k:
            continue
        for e, mult in _spec_m_term(tuple(comp), k).items():
            acc[e] = acc.get(e, 0) + c * mult
    return QPolynomial(acc)


def f_support(f):
    """Compositions with nonzero coefficient in the F expansion."""
    if f.basis != F:
        raise BasisMismatchError("f_support expects an F-basis expression")
    return frozenset(f.terms)


# -- polynomials in one variable ---------------------------------------------

class QPolynomial:
    """Integer polynomial in q, stored sparsely as exponent -> coefficient."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs=()):
        acc = {}
        items = coeffs.items() if isinstance(coeffs, dict) else coeffs
        for e, c in items:
            e, c = int(e), int(c)
            if e < 0:
                raise DomainError("q-polynomial exponents must be nonnegative")
            if c == 0:
                continue
            new = acc.get(e, 0) + c
            if new:
                acc[e] = new
            else:
                del acc[e]
        self.coeffs = acc

    def is_zero(self):
        return not self.coeffs

    def degree(self):
        return max(self.coeffs, default=-1)

    def coefficient(self, e):
        return self.coeffs.get(e, 0)

    def __add__(self, other):
        acc = dict(self.coeffs)
        for e, c in other.coeffs.items():
            acc[e] = acc.get(e, 0) + c
        return QPolynomial(acc)

    def __mul__(self, other):
        if isinstance(other, int):
            return QPolynomial({e: c * other for e, c in self.coeffs.items()})
        acc = {}
        for e1, c1 in self.coeffs.items():
            for e2, c2 in other.coeffs.items():
                acc[e1 + e2] = acc.get(e1 + e2, 0) + c1 * c2
        return QPolynomial(acc)

    __rmul__ = __mul__

    def __eq__(self, other):
        if not isinstance(other, QPolynomial):
            return NotImplemented
        return self.coeffs == other.coeffs

    def __hash__(self):
        return hash(tuple(sorted(self.coeffs.items())))

    def __str__(self):
        if not self.coeffs:
            return "0"
        bits = []
        for e in sorted(self.coeffs):
            c = self.coeffs[e]
            if e == 0:
                bits.append(str(c))
                continue
            q = "q" if e == 1 else f"q^{e}"
            if c == 1:
                bits.append(q)
            elif c == -1:
                bits.append(f"-{q}")
            else:
                bits.append(f"{c}*{q}")
        return " + ".join(bits).replace("+ -", "- ")

    def __repr__(self):
        return f"QPolynomial({self})"

    def to_json_obj(self):
        return {"coeffs": {str(e): str(self.coeffs[e]) for e in sorted(self.coeffs)}}

    def canonical_bytes(self):
        return json.dumps(self.to_json_obj(), separators=(",", ":")).encode()

    @classmethod
    def from_json_obj(cls, obj):
        return cls({int(e): int(c) for e, c in obj["coeffs"].items()})


# -- polynomials in t with QSym coefficients ----------------------------------

class TQSymPoly:
    """Polynomial in t whose coefficients are QSymExpr values."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs=()):
        acc = {}
        items = coeffs.items() if isinstance(coeffs, dict) else coeffs
        for e, expr in items:
            e = int(e)
            if e < 0:
                raise DomainError("t exponents must be nonnegative")
            if expr.is_zero():
                continue
            acc[e] = acc[e] + expr if e in acc else expr
        self.coeffs = {e: v for e, v in acc.items() if not v.is_zero()}

    def is_zero(self):
        return not self.coeffs

    def top_degree(self):
        return max(self.coeffs, default=-1)

    def top_coefficient(self):
        if self.is_zero():
            raise DomainError("zero polynomial has no top coefficient")
        return self.coeffs[self.top_degree()]

    def coefficient(self, e):
        if e in self.coeffs:
            return self.coeffs[e]
        basis = next(iter(self.coeffs.values())).basis if self.coeffs else M
        return QSymExpr.zero(basis)

    def at_t_one(self):
        """Collapse t = 1 by summing the coefficients."""
        if self.is_zero():
            return QSymExpr.zero(M)
        out = None
        for e in sorted(self.coeffs):
            out = self.coeffs[e] if out is None else out + self.coeffs[e]
        return out

    def __add__(self, other):
        acc = dict(self.coeffs)
        for e, v in other.coeffs.items():
            acc[e] = acc[e] + v if e in acc else v
        return TQSymPoly(acc)

    def __mul__(self, other):
        acc = {}
        for e1, v1 in self.coeffs.items():
            for e2, v2 in other.coeffs.items():
                p = multiply(v1, v2)
                e = e1 + e2
                acc[e] = acc[e] + p if e in acc else p
        return TQSymPoly(acc)

    def __eq__(self, other):
        if not isinstance(other, TQSymPoly):
            return NotImplemented
        if set(self.coeffs) != set(other.coeffs):
            return False
        return all(self.coeffs[e] == other.coeffs[e] for e in self.coeffs)

    def __hash__(self):
        return hash(tuple((e, self.coeffs[e]) for e in sorted(self.coeffs)))

    def _by_composition(self):
        """Regroup as composition -> {t exponent: coefficient}, in the M basis."""
        out = {}
        for e, expr in self.coeffs.items():
            for comp, c in expr._m_terms().items():
                out.setdefault(comp, {})[e] = out.get(comp, {}).get(e, 0) + c
        return out

    def __str__(self):
        if self.is_zero():
            return "0"
        grouped = self._by_composition()
        bits = []
        for comp in sorted(grouped):
            tpoly = grouped[comp]
            name = f"M[{','.join(map(str, comp))}]" if comp else "1"
            ts = _t_poly_str(tpoly)
            if ts == "1":
                bits.append(name)
            elif ("+" in ts) or ("-" in ts):
                bits.append(f"({ts})*{name}")
            else:
                bits.append(f"{ts}*{name}")
        return " + ".join(bits)

    def __repr__(self):
        return f"TQSymPoly({self})"

    def to_json_obj(self):
        return {"coeffs": {str(e): self.coeffs[e].to_json_obj()
                           for e in sorted(self.coeffs)}}

    def canonical_bytes(self):
        return json.dumps(self.to_json_obj(), separators=(",", ":")).encode()

    @classmethod
    def from_json_obj(cls, obj):
        return cls({int(e): QSymExpr.from_json_obj(v)
                    for e, v in obj["coeffs"].items()})


def _t_poly_str(tpoly):
    bits = []
    for e in sorted(tpoly):
        c = tpoly[e]
        if e == 0:
            bits.append(str(c))
            continue
        t = "t" if e == 1 else f"t^{e}"
        if c == 1:
            bits.append(t)
        elif c == -1:
            bits.append(f"-{t}")
        else:
            bits.append(f"{c}*{t}")
    return " + ".join(bits).replace("+ -", "- ")
