import json

import pytest

from treeshift.core import Signature, essentialize, make_basic_set
from treeshift.counting import count_blocks, log_block_counts
from treeshift.errors import BudgetExceeded, UnrealizableError, ValidationError
from treeshift.oracle import OracleQuery, oracle_count
from treeshift.snre import (
    IndicatorVector,
    LogCountSequence,
    Snre,
    derive_snre,
    evaluate_exact,
    evaluate_log,
    initial_counts,
    log_context,
    logsumexp,
    snre_to_basic_set,
)

from known_sets import CASE_SIX, COMPLEMENTARY, DOMINANT_K3, DOMINANT_UNIT, FULL, SIG22


def test_derive_dominant_unit():
    s = derive_snre(DOMINANT_UNIT)
    assert s.rules == (((1, 1), (2, 2)), ((2, 2),))
    assert s.monomials() == [{(1, 1): 1, (2, 2): 1}, {(2, 2): 1}]
    assert [v.entries for v in s.indicator_vectors()] == [(1, 0, 0, 1), (0, 0, 0, 1)]
    assert initial_counts(DOMINANT_UNIT) == (2, 1)


def test_dominant_unit_counts():
    seq = count_blocks(DOMINANT_UNIT, 4)
    assert seq[2] == (2, 1)
    assert seq[3] == (5, 1)
    assert seq.total(4) == 27


def test_coefficient_two_from_two_orderings():
    s = derive_snre(CASE_SIX)
    assert s.monomials()[0] == {(1, 2): 2}
    assert s.to_text() == "a^(1)_n = 2*a^(1)_{n-1}*a^(2)_{n-1}\na^(2)_n = a^(2)_{n-1}^2\n"


def test_to_text_with_names():
    text = derive_snre(DOMINANT_UNIT).to_text({1: "a", 2: "b"})
    assert text.splitlines() == ["a_n = a_{n-1}^2 + b_{n-1}^2", "b_n = b_{n-1}^2"]


def test_json_export():
    doc = json.loads(derive_snre(COMPLEMENTARY).to_json())
    assert doc["indicator_vectors"] == {"1": [1, 1, 0, 0], "2": [0, 0, 1, 1]}
    assert doc["monomials"]["1"] == [
        {"factors": [1, 1], "coefficient": 1},
        {"factors": [1, 2], "coefficient": 1},
    ]


def test_snre_validation():
    with pytest.raises(ValidationError):
        Snre(SIG22, (((1, 1),),))
    with pytest.raises(ValidationError):
        Snre(SIG22, (((1, 3),), ()))
    with pytest.raises(ValidationError):
        Snre(SIG22, (((1, 1, 1),), ()))


def test_indicator_vector_round_trip():
    s = derive_snre(DOMINANT_K3)
    again = Snre.from_indicator_vectors(s.signature, s.indicator_vectors())
    assert again == s
    assert s.indicator_vectors()[0].entries == (1, 1, 1, 0, 0, 0, 0, 0, 0)
    assert s.indicator_vectors()[0].dominates(s.indicator_vectors()[1])
    with pytest.raises(ValidationError):
        IndicatorVector((0, 2))
    with pytest.raises(ValidationError):
        IndicatorVector((0, 1)).dominates(IndicatorVector((0, 1, 1)))


def test_converse_compiler():
    b = snre_to_basic_set({1: {(1, 2): 2}, 2: {(2, 2): 1}}, SIG22)
    assert b == CASE_SIX
    # coefficient 1 takes the lexicographically smallest ordering
    b = snre_to_basic_set([{(2, 1): 1}, {(2, 2): 1}], SIG22)
    assert b.tuples() == {(1, 1, 2), (2, 2, 2)}
    # orderings are canonicalized; the monomial form is what round-trips
    again = snre_to_basic_set(derive_snre(COMPLEMENTARY))
    assert derive_snre(again).monomials() == derive_snre(COMPLEMENTARY).monomials()
    assert (2, 1, 2) in again and (2, 2, 1) not in again


def test_converse_compiler_rejects_unrealizable():
    with pytest.raises(UnrealizableError):
        snre_to_basic_set({1: {(1, 2): 3}}, SIG22)
    with pytest.raises(UnrealizableError):
        snre_to_basic_set({1: {(1, 1): 2}}, SIG22)
    with pytest.raises(ValidationError):
        snre_to_basic_set({1: {(1,): 1}}, SIG22)
    with pytest.raises(ValidationError):
        snre_to_basic_set({3: {(1, 1): 1}}, SIG22)
    with pytest.raises(ValidationError):
        snre_to_basic_set({1: {(1, 1): 1}})


@pytest.mark.parametrize(
    "b,n_max",
    [(DOMINANT_UNIT, 5), (CASE_SIX, 5), (COMPLEMENTARY, 4), (DOMINANT_K3, 4), (FULL[(3, 2)], 3)],
)
def test_recurrence_matches_oracle(b, n_max):
    seq = count_blocks(b, n_max)
    for n in range(2, n_max + 1):
        assert seq[n] == oracle_count(OracleQuery(b, n)).per_symbol


def test_start_at_height_one():
    s = derive_snre(DOMINANT_UNIT)
    seq = evaluate_exact(s, (1, 1), 4, start=1)
    assert seq[1] == (1, 1)
    assert seq[2] == initial_counts(DOMINANT_UNIT)
    assert seq[4] == count_blocks(DOMINANT_UNIT, 4)[4]


def test_exact_budget():
    s = derive_snre(FULL[(2, 2)])
    with pytest.raises(BudgetExceeded):
        evaluate_exact(s, (4, 4), 30, max_bits=1000)
    with pytest.raises(ValidationError):
        evaluate_exact(s, (4, -1), 5)
    with pytest.raises(ValidationError):
        evaluate_exact(s, (4, 4), 1)


def test_log_matches_exact():
    exact = count_blocks(COMPLEMENTARY, 12)
    logs = log_block_counts(COMPLEMENTARY, 12)
    ctx = logs.ctx
    for n in exact.heights():
        for a, la in zip(exact[n], logs[n]):
            assert abs(ctx.exp(la) / a - 1) < 1e-30


def test_log_zero_counts_are_neg_inf():
    s = derive_snre(make_basic_set(SIG22, [(1, 1, 1), (1, 1, 2)]))
    seq = evaluate_log(s, (2, 0), 5)
    ctx = seq.ctx
    assert seq[5][1] == ctx.ninf
    assert seq[5][0] > 0


def test_log_precision_floor():
    with pytest.raises(ValidationError):
        log_context(52)
    assert log_context(200).prec == 200


def test_logsumexp():
    ctx = log_context(128)
    assert logsumexp(ctx, []) == ctx.ninf
    assert abs(logsumexp(ctx, [ctx.log(2), ctx.log(3), ctx.ninf]) - ctx.log(5)) < ctx.mpf(10) ** -35
    big = logsumexp(ctx, [ctx.mpf(10**6), ctx.mpf(10**6)])
    assert abs(big - 10**6 - ctx.log(2)) < 1e-30


def test_from_exact_and_initial_logs():
    s = derive_snre(DOMINANT_UNIT)
    exact = evaluate_exact(s, (2, 1), 6)
    conv = LogCountSequence.from_exact(exact)
    direct = evaluate_log(s, [log_context(128).log(2), 0], 6, initial_is_log=True)
    for n in exact.heights():
        assert all(abs(x - y) < 1e-30 for x, y in zip(conv[n], direct[n]))


def test_essentialized_counts_differ_from_local():
    raw = make_basic_set(SIG22, [(1, 1, 1), (1, 1, 2)])
    assert count_blocks(raw, 3, essential=False)[3] == (4, 0)
    assert count_blocks(raw, 3)[3] == (1, 0)
    assert essentialize(raw)[1] == [2]
