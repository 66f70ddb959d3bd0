import random

import pytest

import cases
from qsymtrees import (Composition, Digraph, DomainError, GuardExceeded,
                       M_, ParseError, TQSymPoly,
                       antichain, chain, chromatic_poly, chromatic_qsym_t,
                       chromatic_sym, dag_to_poset, enumerator_f, f_to_m,
                       oriented_tree_key, parse_digraph_inline,
                       parse_digraph_text, reversal_invariance_check,
                       top_t_coefficient)
from qsymtrees.digraphs import (tqsym_truncated_expansion,
                                xgt_truncated_by_colorings)


def random_digraph(rng, n, p=0.4):
    arcs = []
    for u in range(1, n + 1):
        for v in range(1, n + 1):
            if u != v and rng.random() < p and (v, u) not in arcs:
                arcs.append((u, v))
    return Digraph(n, arcs)


class TestConstruction:
    def test_validation(self):
        with pytest.raises(DomainError):
            Digraph(2, [(1, 1)])
        with pytest.raises(DomainError):
            Digraph(2, [(1, 2), (1, 2)])
        with pytest.raises(DomainError):
            Digraph(2, [(1, 3)])

    def test_two_cycle_allowed(self):
        G = Digraph(2, [(1, 2), (2, 1)])
        assert not G.is_acyclic()

    def test_reverse(self):
        G = cases.XGT_PAIR_A[0]
        assert G.reverse().reverse() == G
        assert cases.XGT_PAIR_A[1] == G.reverse()


class TestChromaticQsym:
    def test_inward_path(self):
        X = chromatic_qsym_t(cases.PATH3_INWARD)
        assert X.coefficient(0) == 2 * M_(1, 1, 1) + M_(1, 2)
        assert X.coefficient(1) == 2 * M_(1, 1, 1)
        assert X.coefficient(2) == 2 * M_(1, 1, 1) + M_(2, 1)
        assert X.top_degree() == 2

    def test_single_vertex(self):
        X = chromatic_qsym_t(Digraph(1, []))
        assert X == TQSymPoly({0: M_(1)})

    def test_single_arc(self):
        X = chromatic_qsym_t(Digraph(2, [(1, 2)]))
        assert X == TQSymPoly({0: M_(1, 1), 1: M_(1, 1)})

    def test_two_cycle(self):
        X = chromatic_qsym_t(Digraph(2, [(1, 2), (2, 1)]))
        assert X == TQSymPoly({1: 2 * M_(1, 1)})

    def test_guard(self):
        with pytest.raises(GuardExceeded):
            chromatic_qsym_t(Digraph(10, []), guard=9)
        chromatic_qsym_t(Digraph(10, []), guard=9, force=True)

    def test_matches_coloring_oracle(self):
        rng = random.Random(31)
        graphs = [cases.PATH3_INWARD, Digraph(2, [(1, 2), (2, 1)]),
                  Digraph(1, [])]
        graphs += [random_digraph(rng, n) for n in (3, 4, 4, 5) for _ in (0,)]
        for G in graphs:
            X = chromatic_qsym_t(G)
            for k in range(1, 5):
                assert tqsym_truncated_expansion(X, k) == \
                    xgt_truncated_by_colorings(G, k), (G, k)


class TestChromaticSym:
    def test_path3_t1(self):
        sym = chromatic_sym(cases.PATH3_INWARD)
        assert sym == 6 * M_(1, 1, 1) + M_(2, 1) + M_(1, 2)

    def test_chromatic_poly(self):
        for k in range(7):
            assert chromatic_poly(cases.PATH3_INWARD, k) == k * (k - 1) ** 2
            assert chromatic_poly(Digraph(1, []), k) == k
            assert chromatic_poly(Digraph(2, [(1, 2)]), k) == k * (k - 1)

    def test_t1_symmetry(self):
        # M-coefficients at t=1 depend only on the multiset of parts
        from itertools import permutations

        def sym_ok(G):
            sym = chromatic_sym(G)
            for comp, c in sym.terms.items():
                for perm in set(permutations(tuple(comp))):
                    if sym.terms.get(Composition(perm), 0) != c:
                        return False
            return True

        for bits in range(1 << 6):  # every digraph on 3 vertices
            arcs = []
            for i, (u, v) in enumerate([(1, 2), (2, 1), (1, 3), (3, 1),
                                        (2, 3), (3, 2)]):
                if bits >> i & 1:
                    arcs.append((u, v))
            assert sym_ok(Digraph(3, arcs))
        rng = random.Random(32)
        for n in (4, 5, 6):
            for _ in range(6):
                assert sym_ok(random_digraph(rng, n))


class TestDagToPoset:
    def test_redundant_arc_dropped(self):
        P = dag_to_poset(cases.REDUNDANT_ARC_DAG)
        assert P == cases.REDUNDANT_ARC_POSET
        assert all(s for _, _, s in P.covers)

    def test_arcless(self):
        assert dag_to_poset(Digraph(3, [])) == antichain(3)

    def test_directed_chain(self):
        G = Digraph(4, [(1, 2), (2, 3), (3, 4)])
        assert dag_to_poset(G) == chain(4, "SSS")

    def test_cycle_rejected(self):
        with pytest.raises(DomainError):
            dag_to_poset(Digraph(2, [(1, 2), (2, 1)]))


class TestTopCoefficient:
    def test_inward_path_bridge(self):
        top = top_t_coefficient(cases.PATH3_INWARD)
        assert top == 2 * M_(1, 1, 1) + M_(2, 1)
        P = dag_to_poset(cases.PATH3_INWARD)
        assert top == f_to_m(enumerator_f(P))

    def test_single_arc(self):
        assert top_t_coefficient(Digraph(2, [(1, 2)])) == M_(1, 1)

    def test_redundant_arc_dag_bridge(self):
        top = top_t_coefficient(cases.REDUNDANT_ARC_DAG)
        assert top == f_to_m(enumerator_f(cases.REDUNDANT_ARC_POSET))

    def test_cyclic_rejected(self):
        with pytest.raises(DomainError):
            top_t_coefficient(Digraph(2, [(1, 2), (2, 1)]))

    def test_bridge_on_random_dags(self):
        rng = random.Random(33)
        done = 0
        while done < 40:
            G = random_digraph(rng, rng.randint(1, 6))
            if not G.is_acyclic():
                continue
            done += 1
            assert top_t_coefficient(G) == \
                f_to_m(enumerator_f(dag_to_poset(G))), G


class TestReversal:
    def test_pair_a(self):
        G, H = cases.XGT_PAIR_A
        assert chromatic_qsym_t(G) == chromatic_qsym_t(H)
        assert reversal_invariance_check(G)

    def test_pair_b_is_not_a_reversal(self):
        # equal X can happen without one digraph being the other's reversal
        G, H = cases.XGT_PAIR_B
        assert H != G.reverse()
        assert chromatic_qsym_t(G) == chromatic_qsym_t(H)

    def test_single_arc_palindromic(self):
        assert reversal_invariance_check(Digraph(2, [(1, 2)]))

    def test_inward_path_not_invariant(self):
        G = cases.PATH3_INWARD
        assert not reversal_invariance_check(G)
        assert chromatic_qsym_t(G) != chromatic_qsym_t(G.reverse())

    def test_check_is_sufficient(self):
        rng = random.Random(34)
        for _ in range(40):
            G = random_digraph(rng, rng.randint(1, 5))
            if reversal_invariance_check(G):
                assert chromatic_qsym_t(G) == chromatic_qsym_t(G.reverse())


class TestStructuralProperties:
    def test_factorization_over_components(self):
        G = Digraph(5, [(1, 2), (2, 3), (4, 5)])
        X = chromatic_qsym_t(G)
        X1 = chromatic_qsym_t(Digraph(3, [(1, 2), (2, 3)]))
        X2 = chromatic_qsym_t(Digraph(2, [(1, 2)]))
        assert X == X1 * X2
        rng = random.Random(35)
        for _ in range(10):
            A = random_digraph(rng, rng.randint(1, 3))
            B = random_digraph(rng, rng.randint(1, 3))
            arcs = list(A.arcs) + [(u + A.n, v + A.n) for u, v in B.arcs]
            total = chromatic_qsym_t(Digraph(A.n + B.n, arcs))
            assert total == chromatic_qsym_t(A) * chromatic_qsym_t(B)

    def test_degree_bound(self):
        rng = random.Random(36)
        for _ in range(50):
            G = random_digraph(rng, rng.randint(1, 5))
            X = chromatic_qsym_t(G)
            assert X.top_degree() <= len(G.arcs)
            assert (X.top_degree() == len(G.arcs)) == G.is_acyclic()


class TestOrientedTreeKey:
    def test_relabel_invariance(self):
        G = Digraph(4, [(1, 2), (2, 3), (2, 4)])
        H = Digraph(4, [(4, 1), (1, 3), (1, 2)])  # same shape, renamed
        assert oriented_tree_key(G) == oriented_tree_key(H)

    def test_orientation_matters(self):
        G = Digraph(3, [(1, 2), (2, 3)])
        H = Digraph(3, [(1, 2), (3, 2)])
        assert oriented_tree_key(G) != oriented_tree_key(H)

    def test_requires_tree(self):
        with pytest.raises(DomainError):
            oriented_tree_key(Digraph(3, [(1, 2), (2, 3), (3, 1)]))


class TestParsing:
    def test_roundtrip(self):
        for G in (cases.PATH3_INWARD, cases.XGT_PAIR_B[0], Digraph(1, [])):
            assert parse_digraph_text(G.to_text()) == G

    def test_inline(self):
        assert parse_digraph_inline("3; 1->2; 3->2") == cases.PATH3_INWARD

    def test_errors(self):
        with pytest.raises(ParseError) as err:
            parse_digraph_text("digraph 2\narc 1 2\narc 1 2\n")
        assert err.value.line == 3
        with pytest.raises(ParseError):
            parse_digraph_text("graph 2\n")

    def test_json_roundtrip(self):
        G = cases.XGT_PAIR_C[0]
        assert Digraph.from_json_obj(G.to_json_obj()) == G
