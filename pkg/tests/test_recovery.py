import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from apportion.errors import DomainError, StructuralError
from apportion.labelings import LoopGraph, ZnFunction, contracting_functions
from apportion.recovery import (
    BINOMIAL,
    TRINOMIAL,
    LinearForm,
    edge_labeling_factors,
    parse_factors,
    pf_direct,
    pf_nonzero,
    read_factors,
    recover_function,
    recover_graph,
    write_factors,
)

P4 = ZnFunction([0, 0, 1, 2])


def binomial(n, i, j):
    c = [0] * n
    c[i], c[j] = 1, -1
    return LinearForm.make(c)[0]


class TestForms:
    def test_canonical_sign(self):
        form, s = LinearForm.make([0, -1, 1])
        assert form.coeffs == (0, 1, -1) and s == -1

    def test_kinds(self):
        assert LinearForm.make([1, -1, 0])[0].kind == BINOMIAL
        assert LinearForm.make([2, -1, -1])[0].kind == TRINOMIAL
        with pytest.raises(StructuralError):
            LinearForm.make([3, -1, 0])[0].kind


class TestFactors:
    def test_path_example(self):
        fac = edge_labeling_factors(P4)
        assert fac.total == 12
        for j in range(1, 4):
            assert fac.forms[binomial(4, j - 1, j)] >= 2

    def test_two_fixed_points(self):
        fac = edge_labeling_factors(ZnFunction([0, 1, 1]))
        assert fac.has_zero
        assert all(pf_direct(ZnFunction([0, 1, 1]), x) == 0 for x in [(1, 5, 2), (3, -1, 7)])

    def test_zero_function_n3(self):
        f = ZnFunction([0, 0, 0])
        fac = edge_labeling_factors(f)
        assert fac.total == 6
        rng = np.random.default_rng(0)
        for _ in range(20):
            x = rng.integers(-3, 4, 3)
            assert fac.evaluate(x) == pf_direct(f, x)

    @settings(max_examples=60, deadline=None)
    @given(st.integers(1, 5).flatmap(lambda n: st.lists(st.integers(0, n - 1), min_size=n, max_size=n)),
           st.integers(0, 2**32 - 1))
    def test_factored_matches_direct(self, table, seed):
        f = ZnFunction(table)
        fac = edge_labeling_factors(f)
        rng = np.random.default_rng(seed)
        for _ in range(20):
            x = [int(v) for v in rng.integers(-3, 4, f.n)]
            assert fac.evaluate(x) == pf_direct(f, x)


class TestNonzero:
    def test_identity(self):
        assert not pf_nonzero(ZnFunction([0, 1]))

    def test_swap(self):
        assert not pf_nonzero(ZnFunction([1, 0]))

    @pytest.mark.parametrize("n", range(1, 7))
    def test_contracting(self, n):
        assert all(pf_nonzero(f) for f in contracting_functions(n))

    @settings(max_examples=60, deadline=None)
    @given(st.integers(1, 5).flatmap(lambda n: st.lists(st.integers(0, n - 1), min_size=n, max_size=n)))
    def test_agrees_with_zero_flag(self, table):
        f = ZnFunction(table)
        assert pf_nonzero(f) == (not edge_labeling_factors(f).has_zero)


class TestRecover:
    def test_path(self):
        rec = recover_graph(edge_labeling_factors(P4))
        assert rec.has_fixed_point
        assert rec.graph.non_loop_edges == [(0, 1), (1, 2), (2, 3)]
        assert recover_function(rec.graph, 0) == P4

    def test_star(self):
        rec = recover_graph(edge_labeling_factors(ZnFunction([0, 0, 0, 0])))
        assert rec.graph.edges == frozenset({(0, 1), (0, 2), (0, 3)})

    def test_no_fixed_point(self):
        rec = recover_graph(edge_labeling_factors(ZnFunction([1, 2, 0])))
        assert not rec.has_fixed_point and rec.graph is None

    def test_never_emits_loops(self):
        for f in contracting_functions(5):
            assert not recover_graph(edge_labeling_factors(f)).graph.loops

    @pytest.mark.parametrize("n", range(2, 7))
    def test_round_trip(self, n):
        for f in contracting_functions(n):
            rec = recover_graph(edge_labeling_factors(f))
            assert recover_function(rec.graph, 0) == f

    def test_single_vertex(self):
        rec = recover_graph(edge_labeling_factors(ZnFunction([0])))
        assert rec.has_fixed_point and recover_function(rec.graph, 0) == ZnFunction([0])

    def test_zero_polynomial(self):
        with pytest.raises(DomainError):
            recover_graph(edge_labeling_factors(ZnFunction([0, 1, 1])))

    def test_unpairable(self):
        with pytest.raises(StructuralError):
            recover_graph(parse_factors("2 -1 -1\n1 -1 0\n"))

    def test_odd_binomial(self):
        with pytest.raises(StructuralError):
            recover_graph(parse_factors("1 -1 0\n"))

    def test_function_errors(self):
        with pytest.raises(DomainError):
            recover_function(LoopGraph(4, [(0, 1), (2, 3), (0, 0)]), 0)
        with pytest.raises(DomainError):
            recover_function(LoopGraph(4, [(0, 1), (1, 0)]), 0)


def test_factor_file_round_trip(tmp_path):
    fac = edge_labeling_factors(P4)
    path = tmp_path / "p4.txt"
    write_factors(fac, path)
    back = read_factors(path)
    assert back.forms == fac.forms
    assert recover_function(recover_graph(back).graph, 0) == P4
