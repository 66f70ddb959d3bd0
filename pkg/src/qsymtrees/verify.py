"""Conjecture-verification harness.

A scan enumerates a family, serializes a named invariant of every object
to canonical bytes, and groups objects by the hash of that value.  Any
group holding two or more distinct canonical keys is a collision class:
non-isomorphic objects the invariant fails to separate.  Full invariant
values are never stored, only their hashes plus each object's text form,
so collision classes can be re-validated and reproduced from the report
alone.
"""

from __future__ import annotations

import hashlib
import json
import os
import time
from dataclasses import dataclass, field
from multiprocessing import Pool

from .digraphs import Digraph, chromatic_qsym_t, dag_to_poset
from .errors import CheckpointError, DomainError
from .families import (FamilySpec, check_guard, family_key, family_parse,
                       family_text, gen_free_trees, iter_family)
from .posets import canonical_key, enumerator_m, is_isomorphic
from .qsym import QPolynomial, f_support, m_to_f, principal_specialization

SCAN_GUARDS = {"c2": 10, "c3": 8, "fair": 8, "spec": 9, "xgt": 8, "multiset": 7}

_ZERO_POLY_BYTES = QPolynomial().canonical_bytes()


# -- named invariants ----------------------------------------------------------

def _kbar_f(P):
    return m_to_f(enumerator_m(P.with_all_strict())).canonical_bytes()


def _kp_f(P):
    return m_to_f(enumerator_m(P.with_all_weak())).canonical_bytes()


def _kpw_f(P):
    return m_to_f(enumerator_m(P)).canonical_bytes()


def _f_support_kbar(P):
    supp = f_support(m_to_f(enumerator_m(P.with_all_strict())))
    return json.dumps(sorted(map(list, supp))).encode()


def _xgt(G):
    return chromatic_qsym_t(G, guard=max(9, G.n)).canonical_bytes()


def _key_invariant(obj):
    return canonical_key(obj)


_FIXED_INVARIANTS = {
    "kbar_f": _kbar_f,
    "kp_f": _kp_f,
    "kpw_f": _kpw_f,
    "f_support_kbar": _f_support_kbar,
    "xgt": _xgt,
    "key": _key_invariant,
}


def invariant_fn(name):
    """Resolve an invariant by name; spec:kbar:<k> and spec:kp:<k> are the
    order-k principal specializations of the all-strict and all-weak
    enumerators."""
    if name in _FIXED_INVARIANTS:
        return _FIXED_INVARIANTS[name]
    parts = name.split(":")
    if len(parts) == 3 and parts[0] == "spec" and parts[1] in ("kbar", "kp"):
        try:
            k = int(parts[2])
        except ValueError:
            raise DomainError(f"bad specialization order in {name!r}") from None
        strictify = parts[1] == "kbar"

        def run(P, _k=k, _strict=strictify):
            Q = P.with_all_strict() if _strict else P.with_all_weak()
            poly = principal_specialization(enumerator_m(Q), _k)
            return poly.canonical_bytes()

        return run
    raise DomainError(f"unknown invariant {name!r}")


# -- reports ---------------------------------------------------------------------

@dataclass
class CollisionReport:
    family: str
    invariant: str
    n: int
    scanned: int
    collisions: list = field(default_factory=list)
    runtime_ms: int = 0
    notes: tuple = ()

    def is_empty(self):
        return not self.collisions

    def to_json_obj(self):
        obj = {"family": self.family, "invariant": self.invariant, "n": self.n,
               "scanned": self.scanned, "collisions": self.collisions,
               "runtime_ms": self.runtime_ms}
        if self.notes:
            obj["notes"] = list(self.notes)
        return obj

    def to_json(self):
        return json.dumps(self.to_json_obj(), indent=2, sort_keys=False)

    def render_text(self):
        head = (f"scan {self.family} invariant={self.invariant} n={self.n}: "
                f"{self.scanned} objects, {len(self.collisions)} collision "
                f"class(es), {self.runtime_ms} ms")
        lines = [head]
        for entry in self.collisions:
            note = f" [{entry['note']}]" if entry.get("note") else ""
            lines.append(f"  value {entry['value_hash']}{note}: "
                         f"{len(entry['members'])} members")
            for text in entry["members"]:
                lines.append("    " + " / ".join(text.strip().splitlines()))
        for note in self.notes:
            lines.append(f"  note: {note}")
        return "\n".join(lines)


def _digest(data):
    return hashlib.sha256(data).hexdigest()


# -- low-level scan over in-memory objects ----------------------------------------

def collision_scan(objects, invariant, key_of, text_of,
                   family="custom", n=0, invariant_name="custom"):
    """Group arbitrary objects by hashed invariant bytes.  key_of must be a
    complete isomorphism invariant for the objects passed in; classes found
    are re-validated by recomputing the invariant from each member."""
    t0 = time.monotonic()
    groups = {}
    scanned = 0
    kept = {}
    for obj in objects:
        scanned += 1
        value = invariant(obj)
        vh = _digest(value)
        key = key_of(obj)
        kh = key.hex() if isinstance(key, bytes) else _digest(str(key).encode())
        bucket = groups.setdefault(vh, {})
        if kh not in bucket:
            bucket[kh] = text_of(obj)
            kept[(vh, kh)] = obj
    collisions = []
    for vh in sorted(groups):
        bucket = groups[vh]
        if len(bucket) < 2:
            continue
        values = {invariant(kept[(vh, kh)]) for kh in bucket}
        if len(values) != 1:
            raise RuntimeError("hash collision between distinct invariant values")
        entry = {"value_hash": vh,
                 "members": [bucket[kh] for kh in sorted(bucket)]}
        collisions.append(entry)
    ms = int((time.monotonic() - t0) * 1000)
    return CollisionReport(family, invariant_name, n, scanned, collisions, ms)


# -- checkpointable family scans ----------------------------------------------------

def _checkpoint_payload(spec, invariant_name, processed, groups):
    return {"version": 1,
            "family": spec.to_json_obj(),
            "invariant": invariant_name,
            "processed": processed,
            "groups": {vh: {kh: groups[vh][kh] for kh in sorted(groups[vh])}
                       for vh in sorted(groups)}}


def _write_checkpoint(path, spec, invariant_name, processed, groups):
    payload = _checkpoint_payload(spec, invariant_name, processed, groups)
    body = json.dumps(payload, sort_keys=True)
    payload["checksum"] = _digest(body.encode())
    tmp = path + ".tmp"
    with open(tmp, "w") as fh:
        json.dump(payload, fh)
    os.replace(tmp, path)


def _load_checkpoint(path, spec, invariant_name):
    try:
        with open(path) as fh:
            payload = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise CheckpointError(f"unreadable checkpoint {path}: {exc}") from exc
    checksum = payload.pop("checksum", None)
    body = json.dumps(payload, sort_keys=True)
    if checksum != _digest(body.encode()):
        raise CheckpointError(f"checkpoint {path} failed its integrity check")
    if payload.get("family") != spec.to_json_obj() or \
            payload.get("invariant") != invariant_name:
        raise CheckpointError(f"checkpoint {path} belongs to a different scan")
    return payload["processed"], payload["groups"]


def _scan_worker(args):
    spec_obj, invariant_name, start, stop, force = args
    spec = FamilySpec.from_json_obj(spec_obj)
    fn = invariant_fn(invariant_name)
    out = []
    for obj in iter_family(spec, start, stop, force=force):
        value = fn(obj)
        out.append((_digest(value), family_key(spec, obj).hex(),
                    family_text(spec, obj)))
    return out


def scan_family(spec, invariant_name, *, jobs=1, checkpoint_path=None,
                checkpoint_every=2000, limit=None, force=False):
    """Scan one enumerated family under a named invariant.

    Deterministic: the report is independent of jobs and of any
    checkpoint/resume splits.  With checkpoint_path set, progress persists
    every checkpoint_every objects and a later call resumes bit-identically.
    """
    invariant_fn(invariant_name)  # fail fast on unknown names
    t0 = time.monotonic()
    processed = 0
    groups = {}
    if checkpoint_path and os.path.exists(checkpoint_path):
        processed, groups = _load_checkpoint(checkpoint_path, spec, invariant_name)
    jobs = max(1, int(jobs))
    stop_at = None if limit is None else processed + limit

    def merge(triples):
        for vh, kh, text in triples:
            bucket = groups.setdefault(vh, {})
            bucket.setdefault(kh, text)

    while True:
        if stop_at is not None and processed >= stop_at:
            break
        round_size = checkpoint_every * jobs if checkpoint_path else 200000
        if stop_at is not None:
            round_size = min(round_size, stop_at - processed)
        shard = max(1, (round_size + jobs - 1) // jobs)
        ranges = [(processed + i * shard,
                   min(processed + (i + 1) * shard, processed + round_size))
                  for i in range(jobs)]
        ranges = [(a, b) for a, b in ranges if a < b]
        args = [(spec.to_json_obj(), invariant_name, a, b, force)
                for a, b in ranges]
        if jobs == 1 or len(args) == 1:
            results = [_scan_worker(a) for a in args]
        else:
            with Pool(jobs) as pool:
                results = pool.map(_scan_worker, args)
        got = sum(len(r) for r in results)
        for r in results:
            merge(r)
        processed += got
        if checkpoint_path:
            _write_checkpoint(checkpoint_path, spec, invariant_name,
                              processed, groups)
        if got < round_size:
            break

    collisions = _build_collisions(spec, invariant_name, groups)
    ms = int((time.monotonic() - t0) * 1000)
    return CollisionReport(spec.describe(), invariant_name, spec.n,
                           processed, collisions, ms)


def _build_collisions(spec, invariant_name, groups):
    """Collision classes with re-validation: members must be pairwise
    non-isomorphic (distinct keys by construction, checked again for poset
    families) and their recomputed invariant values must agree."""
    fn = invariant_fn(invariant_name)
    out = []
    for vh in sorted(groups):
        bucket = groups[vh]
        if len(bucket) < 2:
            continue
        members = [bucket[kh] for kh in sorted(bucket)]
        objs = [family_parse(spec, text) for text in members]
        values = {fn(obj) for obj in objs}
        if len(values) != 1:
            raise RuntimeError("hash collision between distinct invariant values")
        if spec.element_kind() == "poset":
            for i in range(len(objs)):
                for j in range(i + 1, len(objs)):
                    if is_isomorphic(objs[i], objs[j]):
                        raise RuntimeError("canonical keys disagree with "
                                           "isomorphism; key bug")
        entry = {"value_hash": vh, "members": members}
        if values == {_ZERO_POLY_BYTES} and invariant_name.startswith("spec:"):
            entry["note"] = "uninformative invariant (specialization is zero)"
        out.append(entry)
    return out


# -- the named conjecture scans -------------------------------------------------------

def conjecture2_scan(n, force=False, **kw):
    """All-strict enumerator over tree posets; an empty report supports the
    tree-distinguishing conjecture at size n."""
    check_guard("conjecture2_scan", n, SCAN_GUARDS["c2"], force)
    return scan_family(FamilySpec("tree_poset", n), "kbar_f", force=force, **kw)


def conjecture3_scan(n, force=False, **kw):
    """Enumerator with strictness over labeled rooted trees."""
    check_guard("conjecture3_scan", n, SCAN_GUARDS["c3"], force)
    return scan_family(FamilySpec("labeled_rooted_tree_poset", n), "kpw_f",
                       force=force, **kw)


def fair_tree_scan(n, force=False, **kw):
    """Fair trees are proven to be distinguished; a collision here is a
    build-breaking bug, not evidence."""
    check_guard("fair_tree_scan", n, SCAN_GUARDS["fair"], force)
    return scan_family(FamilySpec("fair_tree", n), "kpw_f", force=force, **kw)


def spec_scan(n, k=None, force=False, **kw):
    """Principal specializations of order k over tree posets: the
    all-strict invariant and the all-weak variant, as two reports."""
    check_guard("spec_scan", n, SCAN_GUARDS["spec"], force)
    if k is None:
        k = n
    strict_rep = scan_family(FamilySpec("tree_poset", n), f"spec:kbar:{k}",
                             force=force, **kw)
    weak_rep = scan_family(FamilySpec("tree_poset", n), f"spec:kp:{k}",
                           force=force, **kw)
    return strict_rep, weak_rep


def xgt_scan(n, force=False, **kw):
    """Chromatic quasisymmetric function over directed trees.  Any
    collision pair must map, under the poset view, to an all-strict
    enumerator collision or to isomorphic posets; that consistency is
    asserted before the report is returned."""
    check_guard("xgt_scan", n, SCAN_GUARDS["xgt"], force)
    report = scan_family(FamilySpec("directed_tree", n), "xgt", force=force, **kw)
    spec = FamilySpec("directed_tree", n)
    for entry in report.collisions:
        digraphs = [family_parse(spec, t) for t in entry["members"]]
        posets = [dag_to_poset(G) for G in digraphs]
        for i in range(len(posets)):
            for j in range(i + 1, len(posets)):
                same_kbar = (_kbar_f(posets[i]) == _kbar_f(posets[j]))
                if not (same_kbar or is_isomorphic(posets[i], posets[j])):
                    raise RuntimeError("X collision does not project to an "
                                       "enumerator collision; inconsistency")
    return report


def multiset_question_scan(n, force=False):
    """For each pair of non-isomorphic free trees of size n, compare the
    multisets of X over all 2^(n-1) orientations; reports any equal pair."""
    check_guard("multiset_question_scan", n, SCAN_GUARDS["multiset"], force)
    t0 = time.monotonic()
    groups = {}
    scanned = 0
    for tree in gen_free_trees(n, force):
        scanned += 1
        values = []
        for bits in range(1 << len(tree.edges)):
            arcs = [(a, b) if bits >> i & 1 else (b, a)
                    for i, (a, b) in enumerate(tree.edges)]
            X = chromatic_qsym_t(Digraph(n, arcs), guard=max(9, n))
            values.append(X.canonical_bytes())
        digest = _digest(b"\n".join(sorted(values)))
        groups.setdefault(digest, {})[tree.key().hex()] = tree.to_text()
    collisions = []
    for vh in sorted(groups):
        bucket = groups[vh]
        if len(bucket) >= 2:
            collisions.append({"value_hash": vh,
                               "members": [bucket[kh] for kh in sorted(bucket)]})
    ms = int((time.monotonic() - t0) * 1000)
    return CollisionReport(f"free_tree:{n}", "xgt_multiset_over_orientations",
                           n, scanned, collisions, ms)
