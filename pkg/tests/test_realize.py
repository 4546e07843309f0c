import math

import numpy as np
import pytest

from treeshift.counting import count_blocks
from treeshift.errors import ParseError, ValidationError
from treeshift.realize import (
    RealizationPolynomial,
    build_realization,
    max_root,
    multinacci,
    parse_polynomial,
    verify_realization,
)
from treeshift.snre import derive_snre, initial_counts

GOLDEN = 1.6180339887
TRIBONACCI = 1.8392867552


def numpy_root(poly):
    """Largest real root from the companion matrix, independent of the bisection."""
    roots = np.roots(poly.coefficient_vector())
    return max(r.real for r in roots if abs(r.imag) < 1e-9)


@pytest.mark.parametrize(
    "text,p,terms",
    [
        ("x^2 - x - 1", 2, ((1, 1), (0, 1))),
        ("x^3-2x^2-3", 3, ((2, 2), (0, 3))),
        ("x^3 - 2*x^2 - x^2", 3, ((2, 3),)),
        ("x - 2", 1, ((0, 2),)),
        ("2; 1:1; 0:1", 2, ((1, 1), (0, 1))),
        ("x^4 - 0*x^3 - x", 4, ((1, 1),)),
    ],
)
def test_parse(text, p, terms):
    poly = parse_polynomial(text)
    assert (poly.p, poly.terms) == (p, terms)
    assert parse_polynomial(str(poly)) == poly


@pytest.mark.parametrize("bad", ["", "2x^2 - 1", "x^2 + x", "x^2 - x^3", "x^2 - y", "2; a:1"])
def test_parse_errors(bad):
    with pytest.raises(ParseError):
        parse_polynomial(bad)


def test_polynomial_invariants():
    poly = RealizationPolynomial(5, ((1, 2), (4, 1), (1, 1)))
    assert poly.terms == ((4, 1), (1, 3))
    assert poly.delays == (1, 4)
    with pytest.raises(ValidationError):
        RealizationPolynomial(2, ((2, 1),))
    with pytest.raises(ValidationError):
        RealizationPolynomial(2, ((1, -1),))


def test_max_root_examples():
    assert max_root("x^2 - x - 1") == pytest.approx(GOLDEN, abs=1e-10)
    assert max_root("x^3 - x^2 - x - 1") == pytest.approx(TRIBONACCI, abs=1e-10)
    assert max_root("x - 2") == 2.0
    assert max_root("x^2 - 2") == pytest.approx(math.sqrt(2), abs=1e-13)
    assert max_root("x^3 - 1") == 1.0
    with pytest.raises(ValidationError):
        max_root("x^2 - x - 1", tol=0)


@pytest.mark.parametrize(
    "text", ["x^2 - x - 1", "x^3 - x^2 - x - 1", "x^5 - 2x^3 - x", "x^6 - x^4 - 3", "x^4 - 3x - 1"]
)
def test_max_root_matches_companion_matrix(text):
    poly = parse_polynomial(text)
    assert max_root(poly) == pytest.approx(numpy_root(poly), abs=1e-9)


def test_golden_structure():
    r = build_realization("x^2 - x - 1")
    assert (r.d, r.k, r.forcing) == (2, 3, "double")
    a0, a1, b = r.legend["a^(0)"], r.legend["a^(2,0)"], r.legend["b"]
    assert r.snre.rules[a0 - 1] == ((a0, a1), (a1, a0))
    assert r.snre.rules[a1 - 1] == ((a0, b),)
    assert r.snre.rules[b - 1] == ((b, b),)
    assert initial_counts(r.basic_set) == (2, 1, 1)


def test_tribonacci_structure():
    r = build_realization("x^3 - x^2 - x - 1")
    assert (r.d, r.k) == (3, 5)
    assert sorted(r.legend) == ["a^(0)", "a^(2,0)", "a^(3,0)", "a^(3,1)", "b"]


def test_unit_forcing_fallback():
    r = build_realization("x^2 - 2")
    assert r.forcing == "unit"
    a0, a1, b = r.legend["a^(0)"], r.legend["a^(1,0)"], r.legend["b"]
    assert set(r.snre.rules[a0 - 1]) == {(a1, a1), (b, b)}
    rep = verify_realization(r, 40)
    assert rep.abs_error < 1e-6
    assert rep.entropy_estimate.lag == 2


def test_rejects_trivial_degree():
    with pytest.raises(ValidationError):
        build_realization("x^2 - x")
    with pytest.raises(ValidationError):
        verify_realization(build_realization("x^2 - x - 1"), 11)


@pytest.mark.parametrize("text", ["x^2 - x - 1", "x^3 - x^2 - x - 1", "x^4 - 2x^2 - x", "x^3 - 2x - 1"])
def test_round_trip_through_converse_compiler(text):
    r = build_realization(text)
    assert derive_snre(r.basic_set) == r.snre


@pytest.mark.parametrize(
    "text", ["x^2 - x - 1", "x^3 - x^2 - x - 1", "x^4 - 2x^2 - x", "x^5 - x^4 - 2", "x^3 - 2"]
)
def test_exact_log_linearity(text):
    r = build_realization(text)
    a0 = r.legend["a^(0)"] - 1
    seq = count_blocks(r.basic_set, 15)
    a = {n: seq[n][a0] for n in seq.heights()}
    qs, ks = r.polynomial.delays, r.polynomial.coefficients
    for n in range(max(qs) + 2, 16):
        product = math.prod(a[n - q] ** k for q, k in zip(qs, ks))
        assert a[n] == (2 * product if r.forcing == "double" else product + 1)


def test_golden_and_tribonacci_entropy():
    for text, rho in (("x^2 - x - 1", GOLDEN), ("x^3 - x^2 - x - 1", TRIBONACCI)):
        r = build_realization(text)
        assert r.rho == pytest.approx(rho, abs=1e-10)
        assert verify_realization(r, 40).abs_error <= 1e-6


def test_linear_case():
    rep = verify_realization(build_realization("x - 2"), 20)
    assert rep.entropy_estimate.value == pytest.approx(math.log(2), abs=1e-9)


@pytest.mark.parametrize("order", [2, 3, 4, 5])
def test_multinacci(order):
    poly = multinacci(order)
    r = build_realization(poly)
    assert r.rho == pytest.approx(numpy_root(poly), abs=1e-9)
    assert 1 < r.rho < 2
    assert verify_realization(r, 40).abs_error <= 1e-6


def decay_rate(poly):
    """Geometric rate of the estimator error: the largest of 1/rho and |lambda|/rho
    over roots strictly inside the rho circle (roots on it are absorbed by the lag)."""
    rho = numpy_root(poly)
    inside = [abs(z) / rho for z in np.roots(poly.coefficient_vector()) if abs(z) < rho - 1e-7]
    return max(inside + [1 / rho])


@pytest.mark.parametrize(
    "text",
    [
        "x^6 - x^5 - x^4 - x^3 - x^2 - x - 1",
        "x^5 - 2x^4 - 1",
        "x^4 - x^3 - 2x",
        "x^6 - x^5 - x^4 - 1",
        "x^6 - x^5 - x",
        "x^6 - 2",
        "x^5 - x^3 - x - 1",
        "x^6 - x^2 - 1",
        "x^6 - 3x^4 - x",
    ],
)
def test_entropy_match_up_to_delay_six(text):
    poly = parse_polynomial(text)
    r = decay_rate(poly)
    n = max(40, math.ceil(math.log(1e-9) / math.log(r)))
    assert verify_realization(build_realization(poly), n).abs_error <= 1e-6


def test_fast_decay_reaches_tolerance_at_forty():
    for text in ("x^6 - x^5 - x^4 - x^3 - x^2 - x - 1", "x^5 - 2x^4 - 1", "x^4 - x^3 - 2x"):
        poly = parse_polynomial(text)
        assert decay_rate(poly) ** 40 < 1e-7
        assert verify_realization(build_realization(poly), 40).abs_error <= 1e-6
