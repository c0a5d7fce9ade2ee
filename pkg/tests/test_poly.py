import json
import random

import pytest
from hypothesis import given, settings, strategies as st

from h10sim.poly import ParseError, Polynomial, brute_force_search, evaluate, iter_roots, parse_polynomial


def test_binomial_expansion():
    p = parse_polynomial("(x - 2)^2")
    assert p.k == 1
    assert dict(p.terms) == {(2,): 1, (1,): -4, (0,): 4}


def test_trailing_equals_zero():
    p = parse_polynomial("x^2 + y^2 - 5 = 0")
    assert p.k == 2
    assert dict(p.terms) == {(2, 0): 1, (0, 2): 1, (0, 0): -5}


def test_cancellation_gives_zero_polynomial():
    p = parse_polynomial("x - x")
    assert p.k == 1 and dict(p.terms) == {} and p.is_zero


def test_variable_order_is_first_appearance():
    p = parse_polynomial("y + 2*x1")
    assert p.names == ("y", "x1")
    assert evaluate(p, (3, 5)) == 13


def test_rhs_is_moved_left():
    assert parse_polynomial("x^2 = 4") == parse_polynomial("x^2 - 4")


def test_implicit_multiplication_and_double_star():
    assert parse_polynomial("2x y") == parse_polynomial("2*x*y")
    assert parse_polynomial("x**3") == parse_polynomial("x^3")


def test_unary_minus_binds_looser_than_power():
    p = parse_polynomial("-x^2")
    assert evaluate(p, (3,)) == -9


@pytest.mark.parametrize(
    "text",
    ["x^", "x + * y", "(x + 1", "x^1.5", "x^-1", "x^y", "2.5 x", "x $ y", "", "3 + 4", "x^2^3"],
)
def test_parse_errors(text):
    with pytest.raises(ParseError):
        parse_polynomial(text)


def test_parse_error_carries_position():
    with pytest.raises(ParseError) as info:
        parse_polynomial("x + $")
    assert info.value.pos == 4


def test_evaluate_examples():
    assert evaluate(parse_polynomial("(x-2)^2"), (2,)) == 0
    q = parse_polynomial("x^2+y^2-5")
    assert evaluate(q, (1, 2)) == 0
    assert evaluate(q, (0, 0)) == -5


def test_evaluate_dimension_mismatch():
    with pytest.raises(ValueError):
        evaluate(parse_polynomial("x+y"), (1,))


def test_arbitrary_precision():
    p = parse_polynomial("x^40 - 12345678901234567890123")
    assert evaluate(p, (3,)) == 3**40 - 12345678901234567890123


def test_constructor_invariants():
    with pytest.raises(ValueError):
        Polynomial(2, {(1,): 3})
    with pytest.raises(ValueError):
        Polynomial(1, {(-1,): 3})
    assert dict(Polynomial(1, {(1,): 0, (0,): 2}).terms) == {(0,): 2}


def test_json_round_trip_keeps_big_coefficients():
    p = parse_polynomial("98765432109876543210 x^3 y - 7")
    blob = json.dumps(p.to_json())
    assert Polynomial.from_json(blob) == p
    assert json.loads(blob)["terms"][0]["coef"] == "98765432109876543210"


@pytest.mark.parametrize(
    "text, bound, expected",
    [("(x-2)^2", 10, (2,)), ("x+y+1", 50, None), ("x^2+y^2-5", 5, (1, 2)), ("x - x", 0, (0,))],
)
def test_brute_force_examples(text, bound, expected):
    assert brute_force_search(parse_polynomial(text), bound) == expected


def test_brute_force_absence_matches_rescan():
    p = parse_polynomial("x^2 - 2 y^2 - 1")
    roots = list(iter_roots(p, 12))
    assert roots[0] == brute_force_search(p, 12) == (1, 0)
    assert (3, 2) in roots
    q = parse_polynomial("2x - 5")
    assert brute_force_search(q, 30) is None
    assert all(evaluate(q, (n,)) != 0 for n in range(31))


def test_canonical_form_ignores_ordering():
    a = parse_polynomial("x*y + 3 - y^2 + x*(2 - y)")
    b = parse_polynomial("2x + 3 - (y)^2")
    assert a == b
    rng = random.Random(3)
    for _ in range(20):
        pt = (rng.randrange(50), rng.randrange(50))
        assert evaluate(a, pt) == evaluate(b, pt)


# -- differential test against a tree-walking evaluator -----------------------

NAMES = ("x", "y", "z")


def _trees():
    leaf = st.one_of(st.sampled_from(NAMES).map(lambda v: ("var", v)), st.integers(-9, 9).map(lambda c: ("int", c)))
    return st.recursive(
        leaf,
        lambda sub: st.one_of(
            st.tuples(st.sampled_from(["+", "-", "*"]), sub, sub),
            st.tuples(st.just("^"), sub, st.integers(0, 3)),
            st.tuples(st.just("neg"), sub),
        ),
        max_leaves=8,
    )


def _render(t) -> str:
    if t[0] == "var":
        return t[1]
    if t[0] == "int":
        return f"({t[1]})" if t[1] < 0 else str(t[1])
    if t[0] == "neg":
        return f"-({_render(t[1])})"
    if t[0] == "^":
        return f"({_render(t[1])})^{t[2]}"
    return f"({_render(t[1])} {t[0]} {_render(t[2])})"


def _walk(t, env) -> int:
    tag = t[0]
    if tag == "var":
        return env[t[1]]
    if tag == "int":
        return t[1]
    if tag == "neg":
        return -_walk(t[1], env)
    if tag == "^":
        return _walk(t[1], env) ** t[2]
    a, b = _walk(t[1], env), _walk(t[2], env)
    return a + b if tag == "+" else a - b if tag == "-" else a * b


@settings(max_examples=100, deadline=None)
@given(tree=_trees(), pt=st.tuples(*[st.integers(0, 20)] * 3))
def test_parser_agrees_with_tree_walk(tree, pt):
    # anchor every variable so k and the ordering are known
    text = f"x + y + z - x - y - z + {_render(tree)}"
    p = parse_polynomial(text)
    assert p.names == NAMES
    assert evaluate(p, pt) == _walk(tree, dict(zip(NAMES, pt)))
