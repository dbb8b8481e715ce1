from fractions import Fraction

import numpy as np
import pytest

from nonadditive.analysis import paper_basis, paper_expansion
from nonadditive.formats import (
    FormatError,
    format_expansion,
    format_group,
    format_state,
    format_symmetries,
    parse_coefficient,
    parse_expansion,
    parse_group,
    parse_state,
    parse_symmetries,
)
from nonadditive.operators import PauliExpansion
from nonadditive.pauli import parse_pauli
from nonadditive.symmetry import paper_generators


def test_expansion_round_trip_is_exact():
    m = paper_expansion()
    text = format_expansion(m)
    assert parse_expansion(text).equals(m)
    body = [l for l in text.splitlines() if not l.startswith("#")]
    assert len(body) == 22
    assert all(Fraction(l.split()[0]).denominator in (8, 16) for l in body)


def test_float_expansion_round_trip():
    m = PauliExpansion.from_strings({"XZ": 0.1, "II": 1 / 3})
    back = parse_expansion(format_expansion(m))
    assert back.terms == m.terms


def test_decimal_and_rational_mix_becomes_float():
    m = parse_expansion("0.1875 IIIII\n1/16 ZXYYX  # trailing comment\n")
    assert not m.is_exact
    assert m.coefficient("ZXYYX") == 0.0625


def test_signed_labels_fold_into_coefficient():
    assert parse_expansion("1/2 -XX\n").coefficient("XX") == Fraction(-1, 2)


def test_coefficients():
    assert parse_coefficient("-3/16") == Fraction(-3, 16)
    assert parse_coefficient("2") == 2
    assert isinstance(parse_coefficient("1e-3"), float)


@pytest.mark.parametrize(
    "text, line",
    [
        ("1/16 XX\n1/8 XX\n", 2),
        ("1/16 XX\n1/8 XXX\n", 2),
        ("abc XX\n", 1),
        ("1/0 XX\n", 1),
        ("1/2 XQ\n", 1),
        ("1/2 iXX\n", 1),
        ("# nothing\n", 0),
    ],
)
def test_expansion_errors(text, line):
    with pytest.raises(FormatError) as info:
        parse_expansion(text)
    assert info.value.line == line


def test_state_round_trip():
    for v in paper_basis():
        text = format_state(v)
        assert len(text.splitlines()) == 16
        assert np.array_equal(parse_state(text), v)
    assert parse_state("0 1 10\n")[2] == 1j


@pytest.mark.parametrize("text", ["1 0 01\n1 0 01\n", "1 0 01\n1 0 1\n", "1 01\n", "x 0 01\n"])
def test_state_errors(text):
    with pytest.raises(FormatError):
        parse_state(text)


def test_group_round_trip():
    gens = [parse_pauli(s) for s in ("ZXYYX", "-XZXYY")]
    reps = [parse_pauli("IIIII"), parse_pauli("XZIII")]
    text = format_group(gens, reps)
    assert text.splitlines()[0] == "+ZXYYX"
    assert parse_group(text) == (gens, reps)
    with pytest.raises(FormatError):
        parse_group("coset: XZIII\n")


def test_symmetry_round_trip():
    gens = paper_generators("full")
    assert parse_symmetries(format_symmetries(gens)) == gens
    with pytest.raises(FormatError):
        parse_symmetries("rot 0: X->+X Y->+Y Z->+Z\n")
    with pytest.raises(FormatError):
        parse_symmetries("perm: 0 1\nrot 0: X->+X Y->+Y Z->+Z\n")
