from itertools import combinations

import numpy as np
import pytest

from nonadditive.analysis import CodeProjector, min_distance, paper_state_x
from nonadditive.operators import PauliExpansion
from nonadditive.pauli import cyclic_shift, label_weight, labels_commute, parse_pauli
from nonadditive.stabilizer import (
    StabilizerError,
    character_of_state,
    character_projector,
    close_group,
    coset_union,
    coset_union_min_distance,
    paper_H,
    weight_distribution,
)


@pytest.fixture(scope="module")
def H():
    return paper_H()


@pytest.fixture(scope="module")
def C(H):
    xz = parse_pauli("XZIII")
    return coset_union(H, ["IIIII"] + [str(cyclic_shift(xz, s)) for s in range(5)])


def test_H_closure(H):
    assert len(H) == 32
    assert H.is_self_dual
    assert weight_distribution(H) == [1, 0, 0, 10, 15, 6]
    labels = list(H.elements)
    assert all(labels_commute(a, b) for a, b in combinations(labels, 2))
    assert parse_pauli("-IIIII") not in H
    assert parse_pauli("ZXYYX") in H
    assert parse_pauli("-ZXYYX") not in H


def test_closure_signs_match_matrices(H):
    from nonadditive.operators import pauli_matrix

    gens = [pauli_matrix(g) for g in H.generators]
    for p in H.signed_elements():
        mask = H.elements[p.label][1]
        m = np.eye(32)
        for i, g in enumerate(gens):
            if (mask >> i) & 1:
                m = m @ g
        assert np.allclose(m, pauli_matrix(p))


@pytest.mark.parametrize(
    "gens",
    [["XI", "ZI"], ["XX", "-XX"], ["ZZ", "ZZ"], ["iZZ"], ["XX", "ZZ", "-YY"]],
)
def test_bad_generator_sets(gens):
    with pytest.raises(StabilizerError):
        close_group(gens)


def test_character_projectors(H):
    total = PauliExpansion(5)
    projs = [character_projector(H, chi) for chi in H.characters()]
    assert len(projs) == 32
    for p in projs:
        assert (p @ p).equals(p) and p.trace() == 1
        total = total + p
    assert total.equals(PauliExpansion.identity(5))
    for a, b in combinations(projs[:8], 2):
        assert (a @ b).norm_sq() == 0
    # each eigenstate is a ((5,1,3)) code
    assert min_distance(CodeProjector.from_expansion(projs[0], tol=0)) == 3


def test_state_x_is_trivial_character(H):
    v = paper_state_x()
    assert character_of_state(H, v) == (1, 1, 1, 1, 1)
    assert np.allclose(character_projector(H, (1,) * 5).to_dense() @ v, v)


def test_character_of_non_eigenstate(H):
    with pytest.raises(StabilizerError):
        character_of_state(H, np.eye(32)[0])


def test_coset_union_distance_matches_brute_force(C):
    assert len(C) == 192
    labels = C.labels()
    assert len(set(labels)) == 192
    best = min(
        label_weight((a[0] ^ b[0], a[1] ^ b[1])) for a, b in combinations(labels, 2)
    )
    assert best == 2
    assert coset_union_min_distance(C) == 2


def test_same_coset_rejected(H):
    with pytest.raises(StabilizerError):
        coset_union(H, ["IIIII", "ZXYYX"])
