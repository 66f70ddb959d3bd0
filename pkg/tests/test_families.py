import pytest

import bruteforce
from qsymtrees import (DomainError, FamilySpec, FreeTree, GuardExceeded,
                       LabeledPoset, canonical_key, gen_directed_trees,
                       gen_free_trees, gen_labeled_variants,
                       gen_rooted_tree_posets, gen_tree_posets, is_fair_tree,
                       is_in_class_c, iter_family, oriented_tree_key)
from qsymtrees.families import rooted_tree_parents

ROOTED_COUNTS = {1: 1, 2: 1, 3: 2, 4: 4, 5: 9, 6: 20, 7: 48, 8: 115, 9: 286}
FREE_COUNTS = {1: 1, 2: 1, 3: 1, 4: 2, 5: 3, 6: 6, 7: 11, 8: 23, 9: 47}


class TestRootedTrees:
    def test_counts(self):
        for n, count in ROOTED_COUNTS.items():
            assert sum(1 for _ in rooted_tree_parents(n)) == count

    def test_parent_arrays_valid(self):
        for parent in rooted_tree_parents(6):
            assert parent[1] == 0
            for v in range(2, 7):
                assert 1 <= parent[v] < v

    def test_posets_have_unique_minimum(self):
        for P in gen_rooted_tree_posets(6):
            assert P.hasse_is_tree()
            assert len(P.minimals()) == 1


class TestFreeTrees:
    def test_counts(self):
        for n, count in FREE_COUNTS.items():
            assert sum(1 for _ in gen_free_trees(n)) == count

    def test_complete_against_prufer(self):
        for n in range(1, 8):
            ours = {t.key() for t in gen_free_trees(n)}
            assert ours == bruteforce.free_tree_keys_brute(n)

    def test_no_duplicates(self):
        trees = list(gen_free_trees(7))
        assert len({t.key() for t in trees}) == len(trees)

    def test_text_roundtrip(self):
        for t in gen_free_trees(5):
            assert FreeTree.from_text(t.to_text()).key() == t.key()


class TestTreePosets:
    def test_small_counts(self):
        assert sum(1 for _ in gen_tree_posets(1)) == 1
        assert sum(1 for _ in gen_tree_posets(2)) == 1
        assert sum(1 for _ in gen_tree_posets(3)) == 3

    def test_complete_against_bruteforce(self):
        for n in range(1, 7):
            ours = {canonical_key(P) for P in gen_tree_posets(n)}
            assert ours == bruteforce.tree_poset_keys_brute(n)

    def test_rooted_equals_filtered(self):
        for n in range(1, 7):
            rooted = {canonical_key(P) for P in gen_rooted_tree_posets(n)}
            filtered = {canonical_key(P) for P in gen_tree_posets(n)
                        if len(P.minimals()) == 1}
            assert rooted == filtered
            assert len(rooted) == ROOTED_COUNTS[n]

    def test_directed_trees_biject_with_tree_posets(self):
        for n in range(1, 10):
            posets = sum(1 for _ in gen_tree_posets(n))
            digraphs = sum(1 for _ in gen_directed_trees(n))
            assert posets == digraphs

    def test_directed_trees_distinct(self):
        trees = list(gen_directed_trees(6))
        assert len({oriented_tree_key(G) for G in trees}) == len(trees)
        assert all(G.is_acyclic() for G in trees)


class TestLabeledVariants:
    def test_two_chain(self):
        base = [LabeledPoset(2, [(1, 2, "W")])]
        out = list(gen_labeled_variants(iter(base), "all_assignments"))
        assert len(out) == 2
        marks = {P.covers[0][2] for P in out}
        assert marks == {True, False}

    def test_fair_policy_emits_fair_trees(self):
        for P in gen_labeled_variants(gen_rooted_tree_posets(3), "fair"):
            assert is_fair_tree(P)
            assert is_in_class_c(P)

    def test_fair_subset_of_all_assignments(self):
        for n in range(1, 6):
            fair = {canonical_key(P) for P in
                    gen_labeled_variants(gen_rooted_tree_posets(n), "fair")}
            everything = {canonical_key(P) for P in
                          gen_labeled_variants(gen_rooted_tree_posets(n),
                                               "all_assignments")}
            assert fair <= everything

    def test_all_assignments_against_bruteforce(self):
        # oracle: orient every labeled tree away from every root, assign
        # every strictness pattern, and quotient by isomorphism
        n = 4
        keys = set()
        for edges in bruteforce.all_labeled_trees(n):
            adj = {v: [] for v in range(1, n + 1)}
            for a, b in edges:
                adj[a].append(b)
                adj[b].append(a)
            for root in range(1, n + 1):
                covers = []
                stack = [root]
                seenv = {root}
                while stack:
                    u = stack.pop()
                    for w in adj[u]:
                        if w not in seenv:
                            seenv.add(w)
                            covers.append((u, w))
                            stack.append(w)
                for bits in range(1 << len(covers)):
                    P = LabeledPoset(n, [(a, b, bool(bits >> i & 1))
                                         for i, (a, b) in enumerate(covers)])
                    keys.add(canonical_key(P))
        generated = {canonical_key(P) for P in
                     gen_labeled_variants(gen_rooted_tree_posets(n),
                                          "all_assignments")}
        assert generated == keys

    def test_unknown_policy(self):
        with pytest.raises(DomainError):
            list(gen_labeled_variants(gen_rooted_tree_posets(2), "bogus"))


class TestFamilySpec:
    def test_validation(self):
        with pytest.raises(DomainError):
            FamilySpec("nonsense", 3)
        with pytest.raises(DomainError):
            FamilySpec("free_tree", 0)

    def test_describe(self):
        assert FamilySpec("tree_poset", 5).describe() == "tree_poset:5"
        spec = FamilySpec("labeled_tree_poset", 4, "all_assignments")
        assert spec.describe() == "labeled_tree_poset:4:all_assignments"

    def test_roundtrip(self):
        spec = FamilySpec("fair_tree", 6)
        assert FamilySpec.from_json_obj(spec.to_json_obj()) == spec

    def test_sharding(self):
        spec = FamilySpec("tree_poset", 6)
        whole = [canonical_key(P) for P in iter_family(spec)]
        a = [canonical_key(P) for P in iter_family(spec, 0, 7)]
        b = [canonical_key(P) for P in iter_family(spec, 7, None)]
        assert a + b == whole

    def test_every_family_streams(self):
        for fam in ("free_tree", "tree_poset", "rooted_tree_poset",
                    "labeled_tree_poset", "labeled_rooted_tree_poset",
                    "fair_tree", "directed_tree"):
            objs = list(iter_family(FamilySpec(fam, 3)))
            assert objs


class TestGuards:
    def test_family_guard(self):
        with pytest.raises(GuardExceeded):
            list(gen_free_trees(13))
        assert sum(1 for _ in gen_free_trees(13, force=True)) == 1301

    def test_env_override(self, monkeypatch):
        monkeypatch.setenv("QSYM_GUARD_MAX_N", "4")
        with pytest.raises(GuardExceeded):
            list(gen_free_trees(5))
        monkeypatch.setenv("QSYM_GUARD_MAX_N", "5")
        assert sum(1 for _ in gen_free_trees(5)) == 3

    def test_env_must_be_int(self, monkeypatch):
        monkeypatch.setenv("QSYM_GUARD_MAX_N", "many")
        with pytest.raises(DomainError):
            list(gen_free_trees(5))
