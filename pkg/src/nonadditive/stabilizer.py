"""Stabilizer groups, their characters and eigenspace projectors, and coset unions."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations, product
from typing import Iterator, Sequence

import numpy as np

from .operators import PauliExpansion, pauli_matrix
from .pauli import (
    Label,
    PauliString,
    cyclic_shift,
    label_mul,
    label_weight,
    labels_commute,
    parse_pauli,
)

Character = tuple[int, ...]


class StabilizerError(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class StabilizerGroup:
    """Abelian group generated by signed Pauli strings, with -I excluded.

    ``elements`` maps each phase-free label of the closure to ``(sign, mask)``:
    the group element is ``sign * label`` and ``mask`` records which
    generators multiply to it (bit i for generator i).
    """

    n: int
    generators: tuple[PauliString, ...]
    elements: dict[Label, tuple[int, int]] = field(repr=False)

    @property
    def r(self) -> int:
        return len(self.generators)

    @property
    def is_self_dual(self) -> bool:
        return self.r == self.n

    def __len__(self) -> int:
        return len(self.elements)

    def __contains__(self, p: PauliString) -> bool:
        if p.label not in self.elements:
            return False
        sign = self.elements[p.label][0]
        return p.phase == (0 if sign == 1 else 2)

    def signed_elements(self) -> list[PauliString]:
        return [
            PauliString.from_label(lab, self.n, 0 if s == 1 else 2)
            for lab, (s, _) in self.elements.items()
        ]

    def characters(self) -> Iterator[Character]:
        """All 2^r sign vectors; bit i of the running index negates generator i."""
        for idx in range(1 << self.r):
            yield tuple(-1 if (idx >> i) & 1 else 1 for i in range(self.r))

    def character_value(self, chi: Character, label: Label) -> int:
        mask = self.elements[label][1]
        out = 1
        for i in range(self.r):
            if (mask >> i) & 1:
                out *= chi[i]
        return out


def close_group(generators: Sequence[PauliString | str]) -> StabilizerGroup:
    gens = tuple(parse_pauli(g) if isinstance(g, str) else g for g in generators)
    if not gens:
        raise StabilizerError("need at least one generator")
    n = gens[0].n
    for g in gens:
        if g.n != n:
            raise StabilizerError("generators act on different numbers of qubits")
        if g.phase % 2:
            raise StabilizerError(f"generator {g} has an imaginary phase")
    for (i, a), (j, b) in combinations(enumerate(gens), 2):
        if not labels_commute(a.label, b.label):
            raise StabilizerError(f"generators {i} ({a}) and {j} ({b}) anticommute")

    elements: dict[Label, tuple[int, int]] = {(0, 0): (1, 0)}
    for i, g in enumerate(gens):
        g_sign = 1 if g.phase == 0 else -1
        new = {}
        for lab, (s, mask) in elements.items():
            prod_label, p = label_mul(lab, g.label)
            # commuting Hermitian labels multiply to a real phase
            sign = s * g_sign * (1 if p == 0 else -1)
            seen = elements.get(prod_label) or new.get(prod_label)
            if seen is not None:
                if seen[0] != sign:
                    raise StabilizerError(f"closure reaches -I at generator {i} ({g})")
                raise StabilizerError(f"generator {i} ({g}) is dependent on the others")
            new[prod_label] = (sign, mask | (1 << i))
        elements.update(new)
    return StabilizerGroup(n, gens, elements)


def paper_H() -> StabilizerGroup:
    """The five cyclic shifts of ZXYYX (shift 0 first), all with sign +."""
    base = parse_pauli("ZXYYX")
    return close_group([cyclic_shift(base, s) for s in range(5)])


def weight_distribution(g: StabilizerGroup) -> list[int]:
    out = [0] * (g.n + 1)
    for lab in g.elements:
        out[label_weight(lab)] += 1
    return out


def character_projector(g: StabilizerGroup, chi: Character) -> PauliExpansion:
    """2^-r sum_h chi(h) h: projector onto the joint eigenspace labelled by chi."""
    if len(chi) != g.r:
        raise StabilizerError(f"character has length {len(chi)}, group has {g.r} generators")
    w = Fraction(1, 1 << g.r)
    terms = {lab: w * s * g.character_value(chi, lab) for lab, (s, _) in g.elements.items()}
    return PauliExpansion(g.n, terms)


def character_of_state(g: StabilizerGroup, v: np.ndarray, tol: float = 1e-10) -> Character:
    """Sign vector chi with generator_i v = chi_i v; raises if v is not a joint eigenvector."""
    signs = []
    for i, gen in enumerate(g.generators):
        w = pauli_matrix(gen) @ v
        if np.linalg.norm(w - v) <= tol:
            signs.append(1)
        elif np.linalg.norm(w + v) <= tol:
            signs.append(-1)
        else:
            raise StabilizerError(f"state is not an eigenvector of generator {i}")
    return tuple(signs)


@dataclass(frozen=True, eq=False)
class CosetUnion:
    base: StabilizerGroup
    representatives: tuple[PauliString, ...]

    @property
    def K(self) -> int:
        return len(self.representatives)

    def labels(self) -> list[Label]:
        return [label_mul(r.label, h)[0] for r in self.representatives for h in self.base.elements]

    def __len__(self) -> int:
        return self.K * len(self.base)


def coset_union(base: StabilizerGroup, reps: Sequence[PauliString | str]) -> CosetUnion:
    reps = tuple(parse_pauli(r) if isinstance(r, str) else r for r in reps)
    if not reps:
        raise StabilizerError("need at least one representative")
    for r in reps:
        if r.n != base.n:
            raise StabilizerError("representative acts on the wrong number of qubits")
    for (i, a), (j, b) in combinations(enumerate(reps), 2):
        diff = (a.x ^ b.x, a.z ^ b.z)
        if diff in base.elements:
            raise StabilizerError(f"representatives {i} ({a}) and {j} ({b}) lie in the same coset")
    return CosetUnion(base, reps)


def coset_union_min_distance(c: CosetUnion) -> int:
    """Minimum weight of a*b^-1 over distinct elements of the union, phases ignored.

    a*b^-1 = (r_i h)(r_j h')^-1 runs over r_i r_j^-1 times the base group, so only
    one difference per pair of cosets (and the base itself) needs scanning.
    """
    if len(c) < 2:
        raise StabilizerError("need at least two elements")
    best = None
    base = list(c.base.elements)
    for a, b in product(c.representatives, repeat=2):
        shift = (a.x ^ b.x, a.z ^ b.z)
        for h in base:
            d = (shift[0] ^ h[0], shift[1] ^ h[1])
            if d == (0, 0):
                continue
            w = label_weight(d)
            if best is None or w < best:
                best = w
    return best
