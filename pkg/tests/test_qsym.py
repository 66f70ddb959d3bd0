import json
import random
from itertools import combinations

import pytest

from qsymtrees import (BasisMismatchError, Composition, DomainError, F, F_, M,
                       M_, QPolynomial, QSymExpr, TQSymPoly, bar,
                       composition_to_subset, descent_composition, f_support,
                       f_to_m, m_to_f, multiply, multiply_m_quasishuffle,
                       principal_specialization, subset_to_composition,
                       uparrow_product, upuparrow_product)


def all_compositions(n):
    """All 2^(n-1) compositions of n, via subsets of [n-1]."""
    out = []
    for r in range(n):
        for cut in combinations(range(1, n), r):
            out.append(subset_to_composition(cut, n))
    return out


def random_expr(rng, basis, max_weight=6, max_terms=3, zero_ok=False):
    terms = {}
    for _ in range(rng.randint(0 if zero_ok else 1, max_terms)):
        n = rng.randint(1, max_weight)
        comps = all_compositions(n)
        terms[rng.choice(comps)] = rng.choice([-3, -2, -1, 1, 2, 3])
    return QSymExpr(basis, terms)


class TestComposition:
    def test_validation(self):
        assert Composition((2, 1)).weight == 3
        assert Composition(()).weight == 0
        assert Composition((5,)).length == 1
        with pytest.raises(DomainError):
            Composition((0, 1))
        with pytest.raises(DomainError):
            Composition((2, -1))

    def test_descent_composition_examples(self):
        assert descent_composition((2, 4, 3, 5, 6, 1)) == (2, 3, 1)
        assert descent_composition((1, 2, 3)) == (3,)
        assert descent_composition((3, 2, 1)) == (1, 1, 1)

    def test_descent_composition_errors(self):
        with pytest.raises(DomainError):
            descent_composition(())
        with pytest.raises(DomainError):
            descent_composition((1, 1))

    def test_subset_bijection_examples(self):
        assert composition_to_subset(Composition((3, 1, 2))) == (frozenset({3, 4}), 6)
        assert composition_to_subset(Composition((6,))) == (frozenset(), 6)
        assert subset_to_composition(range(1, 6), 6) == (1,) * 6

    def test_subset_bijection_roundtrip(self):
        for n in range(1, 9):
            for comp in all_compositions(n):
                s, m = composition_to_subset(comp)
                assert m == n
                assert subset_to_composition(s, m) == comp

    def test_subset_out_of_range(self):
        with pytest.raises(DomainError):
            subset_to_composition({6}, 6)
        with pytest.raises(DomainError):
            subset_to_composition({0}, 6)


class TestBasisChange:
    def test_worked_expansion(self):
        f = F_(2, 2) + F_(3, 1)
        expected = (M_(2, 2) + M_(3, 1) + M_(1, 1, 2) + 2 * M_(2, 1, 1)
                    + M_(1, 2, 1) + 2 * M_(1, 1, 1, 1))
        assert f_to_m(f) == expected

    def test_all_ones_is_fixed(self):
        for n in range(1, 6):
            ones = F_(*([1] * n))
            assert f_to_m(ones) == M_(*([1] * n))

    def test_f2(self):
        assert f_to_m(F_(2)) == M_(2) + M_(1, 1)

    def test_m_to_f_examples(self):
        assert m_to_f(M_(1, 1)) == F_(1, 1)
        out = m_to_f(M_(2))
        assert out == F_(2) - F_(1, 1)
        assert f_to_m(out) == M_(2)

    def test_roundtrip_worked_example(self):
        f = F_(2, 2) + F_(3, 1)
        assert m_to_f(f_to_m(f)) == f

    def test_roundtrip_random(self):
        rng = random.Random(2024)
        for _ in range(300):
            f = random_expr(rng, F, max_weight=8, max_terms=4, zero_ok=True)
            assert m_to_f(f_to_m(f)) == f
            g = random_expr(rng, M, max_weight=8, max_terms=4, zero_ok=True)
            assert f_to_m(m_to_f(g)) == g

    def test_basis_checks(self):
        with pytest.raises(BasisMismatchError):
            f_to_m(M_(2))
        with pytest.raises(BasisMismatchError):
            m_to_f(F_(2))

    def test_cross_basis_equality(self):
        assert F_(2) == M_(2) + M_(1, 1)
        assert F_(2) != M_(2)


class TestAddScale:
    def test_add(self):
        assert F_(1) + F_(1) == 2 * F_(1)
        f = F_(2, 1) - 3 * F_(1, 1, 1)
        assert (f + (-1) * f).is_zero()
        assert (M_(2) + M_(1, 1)) + (M_(2) - M_(1, 1)) == 2 * M_(2)

    def test_basis_mismatch(self):
        with pytest.raises(BasisMismatchError):
            F_(1) + M_(1)

    def test_no_zero_coefficients_stored(self):
        f = F_(2) - F_(2) + F_(1)
        assert set(f.terms) == {Composition((1,))}


class TestMultiply:
    def test_basic(self):
        assert multiply(F_(1), F_(1)) == F_(2) + F_(1, 1)
        assert multiply(F_(1), F_(2)) == F_(3) + F_(2, 1) + F_(1, 2)

    def test_unit(self):
        f = F_(2, 1) + 2 * F_(3)
        assert multiply(QSymExpr.unit(F), f) == f
        assert multiply(f, QSymExpr.unit(F)) == f
        assert multiply_m_quasishuffle(M_(2, 1), QSymExpr.unit(M)) == M_(2, 1)

    def test_quasishuffle_examples(self):
        assert multiply_m_quasishuffle(M_(1), M_(1)) == 2 * M_(1, 1) + M_(2)
        assert multiply_m_quasishuffle(M_(1), M_(2)) == M_(1, 2) + M_(2, 1) + M_(3)

    def test_agrees_with_quasishuffle_small(self):
        # the full weight <= 5 sweep runs in the acceptance suite
        for wa in range(1, 4):
            for wb in range(1, 4):
                for a in all_compositions(wa):
                    for b in all_compositions(wb):
                        lhs = f_to_m(multiply(m_to_f(M_(*a)), m_to_f(M_(*b))))
                        rhs = multiply_m_quasishuffle(M_(*a), M_(*b))
                        assert lhs == rhs, (a, b)

    def test_m_inputs_return_m(self):
        out = multiply(M_(1), M_(1))
        assert out.basis == M
        assert out == 2 * M_(1, 1) + M_(2)

    def test_commutative_associative_random(self):
        rng = random.Random(11)
        for _ in range(40):
            f = random_expr(rng, F, max_weight=4, max_terms=2)
            g = random_expr(rng, F, max_weight=4, max_terms=2)
            h = random_expr(rng, F, max_weight=4, max_terms=2)
            assert multiply(f, g) == multiply(g, f)
            assert multiply(multiply(f, g), h) == multiply(f, multiply(g, h))

    def test_degree_additive(self):
        f, g = F_(3, 1), F_(2, 2)
        assert multiply(f, g).degree() == 8

    def test_first_and_last_part_at_least_two(self):
        # any product of non-constant elements has a support composition
        # with first part >= 2, and one with last part >= 2
        rng = random.Random(5)
        for _ in range(60):
            f = random_expr(rng, F, max_weight=5, max_terms=3)
            g = random_expr(rng, F, max_weight=5, max_terms=3)
            supp = f_support(multiply(f, g))
            assert any(c[0] >= 2 for c in supp)
            assert any(c[-1] >= 2 for c in supp)


class TestBar:
    def test_examples(self):
        assert bar(F_(3, 1, 2)) == F_(1, 1, 3, 1)
        assert bar(F_(1)) == F_(1)
        for n in range(1, 7):
            assert bar(F_(n)) == F_(*([1] * n))

    def test_involution_random(self):
        rng = random.Random(3)
        for _ in range(100):
            f = random_expr(rng, F, max_weight=7, max_terms=4)
            assert bar(bar(f)) == f

    def test_multiplicative_random(self):
        rng = random.Random(4)
        for _ in range(40):
            f = random_expr(rng, F, max_weight=3, max_terms=2)
            g = random_expr(rng, F, max_weight=3, max_terms=2)
            assert bar(multiply(f, g)) == multiply(bar(f), bar(g))

    def test_requires_f_basis(self):
        with pytest.raises(BasisMismatchError):
            bar(M_(2))


class TestOrdinalProducts:
    def test_examples(self):
        assert uparrow_product(F_(3, 1), F_(2, 2)) == F_(3, 3, 2)
        assert upuparrow_product(F_(3, 1), F_(2, 2)) == F_(3, 1, 2, 2)
        assert uparrow_product(F_(1), F_(1)) == F_(2)
        assert upuparrow_product(F_(1), F_(1)) == F_(1, 1)

    def test_empty_composition_rejected(self):
        unit = QSymExpr.unit(F)
        for op in (uparrow_product, upuparrow_product):
            with pytest.raises(DomainError):
                op(unit, F_(1))
            with pytest.raises(DomainError):
                op(F_(1), unit)

    def test_associative_random(self):
        rng = random.Random(9)
        for _ in range(50):
            f = random_expr(rng, F, max_weight=4, max_terms=2)
            g = random_expr(rng, F, max_weight=4, max_terms=2)
            h = random_expr(rng, F, max_weight=4, max_terms=2)
            for op in (uparrow_product, upuparrow_product):
                assert op(op(f, g), h) == op(f, op(g, h))

    def test_support_prefix_properties(self):
        rng = random.Random(10)
        for _ in range(50):
            f = random_expr(rng, F, max_weight=5, max_terms=3)
            lifted = upuparrow_product(F_(1), f)
            assert all(c[0] == 1 for c in f_support(lifted))
            raised = uparrow_product(F_(1), f)
            assert all(c[0] >= 2 for c in f_support(raised))


class TestPrincipalSpecialization:
    def test_m1_order2(self):
        assert principal_specialization(M_(1), 2) == QPolynomial({0: 1, 1: 1})

    def test_long_compositions_vanish(self):
        assert principal_specialization(M_(1, 1, 1), 2).is_zero()

    def test_order_zero(self):
        assert principal_specialization(QSymExpr.unit(M), 0) == QPolynomial({0: 1})
        assert principal_specialization(M_(2, 1), 0).is_zero()

    def test_equal_chains_counterexample(self):
        # distinct F-basis elements whose order-5 specializations agree
        a = principal_specialization(F_(1, 3, 1), 5)
        b = principal_specialization(F_(2, 1, 2), 5)
        assert a == b
        assert F_(1, 3, 1) != F_(2, 1, 2)

    def test_linear_and_multiplicative(self):
        rng = random.Random(12)
        for _ in range(30):
            f = random_expr(rng, F, max_weight=4, max_terms=2)
            g = random_expr(rng, F, max_weight=4, max_terms=2)
            k = rng.randint(1, 5)
            left = principal_specialization(f, k) + principal_specialization(g, k)
            assert principal_specialization(f + g, k) == left
            prod = principal_specialization(multiply(f, g), k)
            assert prod == principal_specialization(f, k) * principal_specialization(g, k)


class TestFSupport:
    def test_examples(self):
        assert f_support(QSymExpr.zero(F)) == frozenset()
        assert f_support(F_(2, 2) + F_(3, 1)) == {Composition((2, 2)),
                                                  Composition((3, 1))}

    def test_requires_f(self):
        with pytest.raises(BasisMismatchError):
            f_support(M_(1))


class TestSerialization:
    def test_canonical_term_order(self):
        f = F_(3, 1) + F_(2, 2) + 2 * F_(1, 1, 1, 1)
        obj = f.to_json_obj()
        assert [t["comp"] for t in obj["terms"]] == [[1, 1, 1, 1], [2, 2], [3, 1]]
        assert obj["terms"][0]["coeff"] == "2"

    def test_roundtrip(self):
        rng = random.Random(21)
        for _ in range(50):
            f = random_expr(rng, F, max_weight=6, max_terms=4, zero_ok=True)
            assert QSymExpr.from_json_obj(json.loads(f.canonical_bytes())) == f

    def test_qpolynomial_roundtrip(self):
        p = QPolynomial({0: 3, 4: -2, 11: 1})
        assert QPolynomial.from_json_obj(json.loads(p.canonical_bytes())) == p

    def test_str_rendering(self):
        assert str(F_(2, 2) + F_(3, 1)) == "F[2,2] + F[3,1]"
        assert str(QPolynomial({4: 1, 5: 2})) == "q^4 + 2*q^5"
        assert str(QSymExpr.zero(F)) == "0"


class TestTQSymPoly:
    def test_top_and_collapse(self):
        X = TQSymPoly({0: M_(1, 2), 2: M_(2, 1) + 2 * M_(1, 1, 1)})
        assert X.top_degree() == 2
        assert X.top_coefficient() == M_(2, 1) + 2 * M_(1, 1, 1)
        assert X.at_t_one() == M_(1, 2) + M_(2, 1) + 2 * M_(1, 1, 1)

    def test_zero_coefficients_pruned(self):
        X = TQSymPoly({0: M_(1), 1: QSymExpr.zero(M)})
        assert set(X.coeffs) == {0}

    def test_product(self):
        a = TQSymPoly({0: M_(1)})
        b = TQSymPoly({1: M_(1)})
        out = a * b
        assert out.top_degree() == 1
        assert out.coefficient(1) == 2 * M_(1, 1) + M_(2)

    def test_json_roundtrip(self):
        X = TQSymPoly({0: M_(1, 2), 2: M_(2, 1)})
        assert TQSymPoly.from_json_obj(json.loads(X.canonical_bytes())) == X

    def test_str(self):
        X = TQSymPoly({0: 2 * M_(1, 1, 1) + M_(1, 2),
                       1: 2 * M_(1, 1, 1),
                       2: 2 * M_(1, 1, 1) + M_(2, 1)})
        assert str(X) == "(2 + 2*t + 2*t^2)*M[1,1,1] + M[1,2] + t^2*M[2,1]"
