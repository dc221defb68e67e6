"""Coefficient tables: closed forms, Laplace recursion and the memo."""

from concurrent.futures import ThreadPoolExecutor
from fractions import Fraction

import pytest

from rotinv import coeffs
from rotinv.coeffs import (
    CoeffDomainError,
    CoeffQuery,
    RecursionOrderError,
    coeff_table,
    clear_memo,
    g_function,
    index_domain,
    in_domain,
    laplace_residuals,
    monomial_exponents,
    queries_up_to,
    region_boundary_checks,
    region_of,
    relation_terms,
    seed_even,
    seed_odd,
    table_closed_wide,
    table_even_closed,
    table_even_recursive,
    table_odd_closed,
    table_odd_recursive,
)


@pytest.fixture(autouse=True)
def _fresh_memo():
    clear_memo()
    yield
    clear_memo()


def _ints(table):
    return {idx: int(v) for idx, v in table.entries.items()}


def test_query_domain_rejected():
    with pytest.raises(CoeffDomainError):
        CoeffQuery(1, 2, 1)
    with pytest.raises(CoeffDomainError):
        CoeffQuery(3, 2, 0)
    with pytest.raises(CoeffDomainError):
        CoeffQuery(0, 0, -1)
    with pytest.raises(CoeffDomainError):
        CoeffQuery(True, 1, 0)  # type: ignore[arg-type]


def test_query_labels():
    q = CoeffQuery(2, 2, 1)
    assert q.lam == 1
    assert q.label("even") == (2, 2, 2)
    assert q.label("odd") == (3, 3, 3)


def test_index_domain():
    q = CoeffQuery(2, 2, 1)
    assert index_domain(q) == [(0, 0, 1), (0, 1, 0), (0, 2, 0), (1, 0, 0), (1, 0, 1)]
    assert in_domain(q, 1, 0, 1)
    assert not in_domain(q, 0, 0, 0)
    assert not in_domain(q, 2, 0, 0)
    assert monomial_exponents(q, 0, 1, 0) == (0, 0, 0, 1, 1, 1)
    assert len(index_domain(CoeffQuery(0, 0, 0))) == 1


def test_region_assignment():
    q = CoeffQuery(2, 2, 1)
    regions = {idx: region_of(q, *idx) for idx in index_domain(q)}
    assert regions == {
        (0, 0, 1): "I",
        (0, 1, 0): "I",
        (0, 2, 0): "III",
        (1, 0, 0): "I",
        (1, 0, 1): "II",
    }
    assert region_of(CoeffQuery(4, 4, 1), 2, 0, 0) == "IV"
    with pytest.raises(CoeffDomainError):
        region_of(q, 0, 0, 0)


def test_g_function_values():
    q = CoeffQuery(2, 2, 1)
    assert g_function(q, 0, 0) == 6
    assert g_function(q, 1, 0) == 6
    assert g_function(q, 0, 1) == -9
    assert g_function(q, 1, 1) == 0
    assert g_function(q, -1, 0) == 0


def test_even_table_hand_values():
    t = table_even_closed(CoeffQuery(2, 2, 1))
    assert _ints(t) == {(0, 0, 1): 18, (0, 1, 0): -54, (0, 2, 0): 18, (1, 0, 0): 18, (1, 0, 1): -12}
    assert t.normalizer == -12
    assert seed_even(CoeffQuery(2, 2, 1)) == 18

    t0 = table_even_closed(CoeffQuery(2, 2, 0))
    assert _ints(t0) == {
        (0, 0, 0): 280,
        (0, 0, 1): -40,
        (0, 1, 0): -160,
        (0, 2, 0): 16,
        (1, 0, 0): -40,
        (1, 0, 1): 8,
    }


def test_odd_table_hand_values():
    t = table_odd_closed(CoeffQuery(1, 1, 0))
    assert _ints(t) == {(0, 0, 0): 10, (0, 1, 0): -2}
    assert seed_odd(CoeffQuery(1, 1, 0)) == 10
    assert t.get(5, 5, 5) == 0


def test_closed_matches_recursive_small():
    for q in queries_up_to(5):
        assert table_even_closed(q).entries == table_even_recursive(q).entries, q
        assert table_odd_closed(q).entries == table_odd_recursive(q).entries, q


@pytest.mark.slow
def test_closed_matches_recursive_full():
    for q in queries_up_to(10):
        assert table_even_closed(q).entries == table_even_recursive(q).entries, q
        assert table_odd_closed(q).entries == table_odd_recursive(q).entries, q


def test_laplace_relations_vanish():
    for q in queries_up_to(4):
        for kind in ("even", "odd"):
            assert laplace_residuals(coeff_table(q, kind)) == []


def test_laplace_residual_detects_tampering():
    t = table_even_closed(CoeffQuery(2, 2, 1))
    bad = dict(t.entries)
    bad[(0, 2, 0)] += 1
    tampered = coeffs.CoeffTable(t.query, "even", bad, t.lam)
    assert laplace_residuals(tampered)


def test_region_boundaries_and_wide_bounds_agree():
    for q in queries_up_to(5):
        for kind in ("even", "odd"):
            assert region_boundary_checks(q, kind) == []
            assert table_closed_wide(q, kind).entries == coeff_table(q, kind).entries


def test_tables_are_integral():
    for q in queries_up_to(6):
        assert coeff_table(q, "even").non_integral() == []
        assert coeff_table(q, "odd").non_integral() == []


@pytest.mark.slow
def test_tables_are_integral_full():
    for q in queries_up_to(8):
        for kind in ("even", "odd"):
            assert coeff_table(q, kind).non_integral() == [], (q, kind)


def test_relation_terms_shape():
    q = CoeffQuery(2, 2, 1)
    terms = relation_terms(q, "even", "eq3", 0, 2, 0)
    assert [idx for idx, _ in terms] == [(0, 2, 0), (0, 2, -1), (-1, 2, 0), (0, 1, 0)]
    with pytest.raises(ValueError):
        relation_terms(q, "even", "eq4", 0, 0, 0)
    with pytest.raises(ValueError):
        relation_terms(q, "mixed", "eq1", 0, 0, 0)


def test_recursion_refuses_unknown_reads():
    solver = coeffs._RecursionSolver(CoeffQuery(2, 2, 1), "even")
    assert solver.lookup((3, 0, 0)) == Fraction(0)
    with pytest.raises(RecursionOrderError):
        solver.lookup((0, 0, 1))


def test_memo_returns_same_table():
    q = CoeffQuery(3, 4, 1)
    first = coeff_table(q, "odd")
    assert coeff_table(q, "odd") is first
    assert coeff_table(q, "odd", "recursive") is not first
    clear_memo()
    assert coeff_table(q, "odd") is not first


def test_memo_builds_once_under_concurrency(monkeypatch):
    calls = []
    real = coeffs._table_closed

    def counting(q, kind, wide=False):
        calls.append((q, kind))
        return real(q, kind, wide)

    monkeypatch.setattr(coeffs, "_table_closed", counting)
    q = CoeffQuery(4, 6, 2)
    with ThreadPoolExecutor(max_workers=8) as pool:
        tables = list(pool.map(lambda _: coeff_table(q, "even"), range(16)))
    assert len(calls) == 1
    assert all(t is tables[0] for t in tables)


def test_memo_rejects_bad_arguments():
    with pytest.raises(ValueError):
        coeff_table(CoeffQuery(0, 0, 0), "even", "guess")
    with pytest.raises(ValueError):
        coeff_table(CoeffQuery(0, 0, 0), "both")


def test_queries_up_to():
    qs = queries_up_to(2)
    assert qs == [
        CoeffQuery(0, 0, 0),
        CoeffQuery(0, 1, 0),
        CoeffQuery(1, 1, 0),
        CoeffQuery(0, 2, 0),
        CoeffQuery(1, 2, 0),
        CoeffQuery(2, 2, 0),
        CoeffQuery(2, 2, 1),
    ]
