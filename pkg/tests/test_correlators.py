import itertools
import random
from fractions import Fraction

import pytest

from hilbmac.correlators import (CLOSED_FORM_NAMES, CorrelatorError,
                                 DiagonalOperator, base_bracket_series,
                                 base_bracket_z, bracket_bruteforce,
                                 bracket_one_closed, closed_form_library,
                                 closed_form_series, connected_correlators,
                                 correlators_from_Z,
                                 disconnected_from_connected, fqft_layer,
                                 identity_op, lambda_op, psi_op, set_partitions,
                                 sigma_op, tilde_e_op, vertex_correlator)
from hilbmac.exactalg import (RationalFunction, RationalSampler,
                              TruncatedSeries, expand_closed_form, generators)

qs, ts, us, vs = generators("q", "t", "u", "v")


@pytest.fixture(scope="module")
def point():
    return RationalSampler(101, magnitude=30).point(["q", "t", "u", "v"])


# ---------------------------------------------------------------------------
# brute force
# ---------------------------------------------------------------------------

def test_identity_bracket_first_coefficient(point):
    q, t, u, v = point["q"], point["t"], point["u"], point["v"]
    ser = bracket_bruteforce([], u, v, q, t, 1)
    assert ser.coeffs[0] == 1
    assert ser.coeffs[1] == (1 - u) * (1 - v) / ((1 - q) * (1 - t ** -1))


def test_identity_bracket_equals_exponential_form(point):
    q, t, u, v = point["q"], point["t"], point["u"], point["v"]
    assert bracket_bruteforce([], u, v, q, t, 5) == bracket_one_closed(u, v, q, t, 5)
    assert bracket_bruteforce([identity_op(q, t)], u, v, q, t, 4) == \
        bracket_one_closed(u, v, q, t, 4)


def test_bracket_rejects_vanishing_u(point):
    q, t, v = point["q"], point["t"], point["v"]
    with pytest.raises(CorrelatorError):
        bracket_bruteforce([], Fraction(0), v, q, t, 3)


def test_e1_bracket_closed_form(point):
    q, t, u, v = point["q"], point["t"], point["u"], point["v"]
    bf = bracket_bruteforce([tilde_e_op(1, q, t)], u, v, q, t, 4, primed=True)
    cf = closed_form_series("E1", 4, point)
    assert bf == cf


def test_e1_bracket_symbolic_order_3():
    bf = bracket_bruteforce([tilde_e_op(1, qs, ts)], us, vs, qs, ts, 3, primed=True)
    assert bf == closed_form_series("E1", 3)


# ---------------------------------------------------------------------------
# base brackets
# ---------------------------------------------------------------------------

def test_base_bracket_closed_form_examples():
    Q = RationalFunction.var("Q")
    assert base_bracket_z(0) == 1 - Q * (1 - us) * (1 - vs) / (1 - us * Q)
    assert base_bracket_z(3) == -(1 - vs) * (1 - Q) / (1 - us * Q)
    assert base_bracket_z(-2) == (-us * Q) * Q * (1 - us) * (1 - us * vs * Q) / (1 - us * Q)


def test_base_bracket_series_matches_closed_forms():
    for k in range(-6, 7):
        closed = expand_closed_form(base_bracket_z(k), 8)
        direct = base_bracket_series(k, us, vs, 8)
        assert closed == direct, k


def test_base_bracket_k_dependence_is_sign_and_power():
    assert base_bracket_z(2) == -base_bracket_z(3)
    Q = RationalFunction.var("Q")
    assert base_bracket_z(-3) == base_bracket_z(-2) * (-us * Q)


# ---------------------------------------------------------------------------
# vertex engine
# ---------------------------------------------------------------------------

def test_vertex_engine_against_bruteforce(point):
    q, t, u, v = point["q"], point["t"], point["u"], point["v"]
    for weights in [(1,), (2,), (3,), (1, 1), (1, 2)]:
        word = [tilde_e_op(r, q, t) for r in weights]
        assert vertex_correlator(word, u, v, q, t, 5) == \
            bracket_bruteforce(word, u, v, q, t, 5, primed=True), weights


def test_vertex_engine_commutativity(point):
    q, t, u, v = point["q"], point["t"], point["u"], point["v"]
    a = vertex_correlator([tilde_e_op(1, q, t), tilde_e_op(2, q, t)], u, v, q, t, 5)
    b = vertex_correlator([tilde_e_op(2, q, t), tilde_e_op(1, q, t)], u, v, q, t, 5)
    assert a == b


def test_vertex_engine_unnormalized(point):
    q, t, u, v = point["q"], point["t"], point["u"], point["v"]
    word = [tilde_e_op(2, q, t)]
    raw = vertex_correlator(word, u, v, q, t, 4, primed=False)
    assert raw == bracket_bruteforce(word, u, v, q, t, 4, primed=False)


def test_vertex_engine_identity_word(point):
    q, t, u, v = point["q"], point["t"], point["u"], point["v"]
    assert vertex_correlator([identity_op(q, t)], u, v, q, t, 3) == \
        TruncatedSeries.constant(u * 0 + 1, 3)


def test_operator_without_kernel_is_rejected(point):
    q, t, u, v = point["q"], point["t"], point["u"], point["v"]
    bad = DiagonalOperator("opaque", lambda mu: Fraction(1))
    with pytest.raises(CorrelatorError):
        vertex_correlator([bad], u, v, q, t, 3)


def test_psi_words_through_decomposition(point):
    q, t, u, v = point["q"], point["t"], point["u"], point["v"]
    for m in (1, 2, 3):
        word = [psi_op(m, q, t)]
        assert vertex_correlator(word, u, v, q, t, 5) == \
            bracket_bruteforce(word, u, v, q, t, 5, primed=True), m
    two = [psi_op(1, q, t), psi_op(2, q, t)]
    assert vertex_correlator(two, u, v, q, t, 4) == \
        bracket_bruteforce(two, u, v, q, t, 4, primed=True)


def test_lambda_sigma_words(point):
    q, t, u, v = point["q"], point["t"], point["u"], point["v"]
    for make in (lambda_op, sigma_op):
        word = [make(2, q, t)]
        assert vertex_correlator(word, u, v, q, t, 4) == \
            bracket_bruteforce(word, u, v, q, t, 4, primed=True)


# ---------------------------------------------------------------------------
# closed-form library
# ---------------------------------------------------------------------------

def test_library_names_and_errors():
    for name in CLOSED_FORM_NAMES:
        closed_form_library(name)
    with pytest.raises(CorrelatorError):
        closed_form_library("Psi7")


def test_library_psi1_display():
    Q = RationalFunction.var("Q")
    expect = Q * (1 - us) * (1 - vs) / ((1 - qs) * (1 - ts ** -1) * (1 - us * Q))
    assert closed_form_library("Psi1") == expect


def test_library_lambda2_is_half_difference():
    lhs = closed_form_library("Lambda2")
    rhs = closed_form_library("Psi1sq") - closed_form_library("Psi2")
    assert lhs == rhs


def test_library_against_bruteforce(point):
    q, t, u, v = point["q"], point["t"], point["u"], point["v"]
    cases = [("E2", [tilde_e_op(2, q, t)], 1),
             ("E1E1", [tilde_e_op(1, q, t), tilde_e_op(1, q, t)], 1),
             ("Psi2", [psi_op(2, q, t)], 1),
             ("Psi1sq", [psi_op(1, q, t), psi_op(1, q, t)], 1),
             ("Lambda2", [lambda_op(2, q, t)], 2)]
    for name, word, factor in cases:
        bf = bracket_bruteforce(word, u, v, q, t, 5, primed=True) * factor
        assert bf == closed_form_series(name, 5, point), name


# ---------------------------------------------------------------------------
# connected correlators and the formal-QFT layer
# ---------------------------------------------------------------------------

def test_set_partitions_count():
    # Bell numbers 1, 1, 2, 5, 15
    for n, bell in [(0, 1), (1, 1), (2, 2), (3, 5), (4, 15)]:
        assert len(set_partitions(range(n))) == bell


def test_connected_two_and_three_point_displays():
    rng = random.Random(2)
    labels = ("a", "b", "c")
    raw = {}
    for r in range(1, 4):
        for combo in itertools.combinations_with_replacement(labels, r):
            raw[combo] = Fraction(rng.randint(1, 30), rng.randint(1, 30))
    conn = connected_correlators(raw)
    assert conn[("a",)] == raw[("a",)]
    assert conn[("a", "b")] == raw[("a", "b")] - raw[("a",)] * raw[("b",)]
    expect = (raw[("a", "b", "c")]
              - raw[("a", "b")] * raw[("c",)]
              - raw[("a", "c")] * raw[("b",)]
              - raw[("b", "c")] * raw[("a",)]
              + 2 * raw[("a",)] * raw[("b",)] * raw[("c",)])
    assert conn[("a", "b", "c")] == expect


def test_connected_missing_subword():
    with pytest.raises(CorrelatorError):
        connected_correlators({("a", "b"): Fraction(1)})


def test_connected_inverts_disconnected_up_to_length_4():
    rng = random.Random(12)
    labels = ("p", "q", "r", "s")
    raw = {}
    for r in range(1, 5):
        for combo in itertools.combinations(labels, r):
            raw[combo] = Fraction(rng.randint(1, 40), rng.randint(1, 40))
    conn = connected_correlators(raw)
    assert disconnected_from_connected(conn) == raw


def test_fqft_trivial_and_single_correlator():
    res = fqft_layer({}, 3)
    assert res.Z == {(): Fraction(1)} and res.F == {} and res.G == {}
    c = Fraction(3, 2)
    res = fqft_layer({("1",): c, ("1", "1"): c * c}, 2)
    assert res.Z[("1",)] == c
    assert res.Z[("1", "1")] == c * c / 2
    assert res.F == {("1",): c}
    assert res.G == {}


def test_fqft_entropy_and_roundtrip():
    table = {("a",): Fraction(2), ("b",): Fraction(5),
             ("a", "b"): Fraction(3), ("a", "a"): Fraction(7),
             ("b", "b"): Fraction(11)}
    res = fqft_layer(table, 2)
    assert correlators_from_Z(res.Z) == table
    # G = sum (deg - 1) F-coefficient; degree-1 terms drop out
    assert ("a",) not in res.G
    assert res.G[("a", "b")] == res.F[("a", "b")]


def test_oracle_equivalence_all_short_words(point):
    """Every word of length <= 2 over the weight-1..3 family agrees with the
    brute-force sum, including the six-variable case."""
    q, t, u, v = point["q"], point["t"], point["u"], point["v"]
    ops = {r: tilde_e_op(r, q, t) for r in (1, 2, 3)}
    words = [(r,) for r in (1, 2, 3)] + \
        [(a, b) for a in (1, 2, 3) for b in (1, 2, 3) if a <= b]
    for ws in words:
        word = [ops[r] for r in ws]
        assert vertex_correlator(word, u, v, q, t, 4) == \
            bracket_bruteforce(word, u, v, q, t, 4, primed=True), ws


def test_vertex_engine_symbolic_small_order():
    word = [tilde_e_op(2, qs, ts)]
    vx = vertex_correlator(word, us, vs, qs, ts, 3)
    assert vx == closed_form_series("E2", 3)
