from itertools import product

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from nonadditive.operators import pauli_matrix
from nonadditive.pauli import (
    PauliParseError,
    PauliString,
    all_labels,
    commutes,
    conjugate,
    cyclic_shift,
    format_pauli,
    label_mul,
    labels_of_weight,
    parse_pauli,
    single_qubit_errors,
    weight,
)

from conftest import pauli_strings

Y = np.array([[0, -1j], [1j, 0]])
X = np.array([[0, 1], [1, 0]])
Z = np.diag([1, -1])


def all_signed(n):
    return [PauliString.from_label(lab, n, ph) for lab in all_labels(n) for ph in range(4)]


def test_single_letters_are_the_standard_matrices():
    assert np.array_equal(pauli_matrix(parse_pauli("X")), X)
    assert np.array_equal(pauli_matrix(parse_pauli("Y")), Y)
    assert np.array_equal(pauli_matrix(parse_pauli("Z")), Z)


def test_leftmost_letter_is_first_tensor_factor():
    assert np.array_equal(pauli_matrix(parse_pauli("XZ")), np.kron(X, Z))


@pytest.mark.parametrize(
    "a, b, product_",
    [("X", "Y", "iZ"), ("Y", "X", "-iZ"), ("Z", "X", "iY"), ("Y", "Z", "iX"), ("X", "X", "I")],
)
def test_single_qubit_products(a, b, product_):
    assert parse_pauli(a) * parse_pauli(b) == parse_pauli(product_)


def test_parse_roundtrip_and_prefixes():
    for text in ("ZXYYX", "-IXZZX", "iYY", "-iXIZ", "+Z"):
        p = parse_pauli(text)
        assert parse_pauli(format_pauli(p)) == p
    assert format_pauli(parse_pauli("+Z")) == "Z"


@pytest.mark.parametrize("text, pos", [("XQZ", 1), ("-iXXA", 2), ("", 0), ("-i", 0)])
def test_parse_errors_report_position(text, pos):
    with pytest.raises(PauliParseError) as info:
        parse_pauli(text)
    assert info.value.position == pos


def test_mixed_lengths_rejected():
    with pytest.raises(ValueError):
        parse_pauli("XX") * parse_pauli("X")


def test_exhaustive_one_qubit_laws():
    elems = all_signed(1)
    assert len(elems) == 16
    for a, b in product(elems, repeat=2):
        assert (a * b == b * a) == commutes(a, b)
        assert np.allclose(pauli_matrix(a * b), pauli_matrix(a) @ pauli_matrix(b))
        for c in elems:
            assert (a * b) * c == a * (b * c)


def test_random_five_qubit_pairs():
    rng = np.random.default_rng(7)
    for _ in range(10_000):
        a = PauliString(5, *map(int, rng.integers(0, 32, 2)), int(rng.integers(4)))
        b = PauliString(5, *map(int, rng.integers(0, 32, 2)), int(rng.integers(4)))
        ab, ba = a * b, b * a
        assert (ab == ba) == commutes(a, b)
        if not commutes(a, b):
            assert ab == -ba


@given(st.data())
def test_associativity(data):
    n = data.draw(st.integers(1, 5))
    a, b, c = (data.draw(pauli_strings(n)) for _ in range(3))
    assert (a * b) * c == a * (b * c)


@given(st.data())
def test_product_matches_matrices(data):
    n = data.draw(st.integers(1, 3))
    a, b = data.draw(pauli_strings(n)), data.draw(pauli_strings(n))
    assert np.allclose(pauli_matrix(a * b), pauli_matrix(a) @ pauli_matrix(b))


@given(pauli_strings())
def test_dagger_inverts(a):
    assert a * a.dagger() == PauliString.identity(a.n)


def test_label_phase_is_real_for_commuting_hermitian_labels():
    for a, b in product(all_labels(2), repeat=2):
        _, p = label_mul(a, b)
        if commutes(PauliString.from_label(a, 2), PauliString.from_label(b, 2)):
            assert p in (0, 2)


def test_weights_and_counts():
    assert weight(parse_pauli("ZXIYI")) == 3
    assert len(labels_of_weight(5, 2)) == 10 * 9
    assert len(list(all_labels(3))) == 64
    errs = single_qubit_errors(5)
    assert len(errs) == 15 and [str(e) for e in errs[:3]] == ["XIIII", "YIIII", "ZIIII"]


def test_cyclic_shift_moves_letters_right():
    assert str(cyclic_shift(parse_pauli("ZXYYX"), 1)) == "XZXYY"
    assert cyclic_shift(parse_pauli("-XZIII"), 5) == parse_pauli("-XZIII")


def test_conjugate_sign():
    assert conjugate(parse_pauli("XI"), parse_pauli("ZI")) == parse_pauli("-XI")
    assert conjugate(parse_pauli("XI"), parse_pauli("XZ")) == parse_pauli("XI")
