"""Qubit permutations combined with local signed Pauli rotations.

A symmetry is stored only through its action on phase-free Pauli labels: the
letter on qubit k is first rotated by ``rotations[k]`` (picking up a sign) and
then moved to qubit ``perm[k]``.  Global phases of an implementing unitary are
invisible at this level, which is exactly what the group orders count.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import permutations, product
from typing import Iterable, Sequence

from .analysis import CodeError, CodeProjector
from .operators import PauliExpansion
from .pauli import Label, PauliString, cyclic_shift, label_str, labels_commute, parse_pauli, single_qubit_errors
from .stabilizer import Character, StabilizerGroup, character_projector

_AXES = "XYZ"
_BITS = {"I": (0, 0), "X": (1, 0), "Z": (0, 1), "Y": (1, 1)}
_FROM_BITS = {v: k for k, v in _BITS.items()}


@dataclass(frozen=True)
class LocalRotation:
    """Signed permutation of (X, Y, Z): ``images[i] = (sign, letter)`` for X, Y, Z."""

    images: tuple[tuple[int, str], ...]

    def __post_init__(self):
        if sorted(l for _, l in self.images) != list(_AXES) or any(s not in (1, -1) for s, _ in self.images):
            raise ValueError(f"not a signed permutation of X, Y, Z: {self.images}")
        if self.determinant() != 1:
            raise ValueError(f"rotation must have determinant +1: {self}")

    @classmethod
    def identity(cls) -> LocalRotation:
        return cls(((1, "X"), (1, "Y"), (1, "Z")))

    @classmethod
    def parse(cls, text: str) -> LocalRotation:
        """From ``"X->+Y Y->-X Z->+Z"``."""
        found = {}
        for tok in text.split():
            src, _, dst = tok.partition("->")
            if src not in _AXES or len(dst) != 2 or dst[0] not in "+-" or dst[1] not in _AXES:
                raise ValueError(f"bad rotation entry {tok!r}")
            found[src] = (1 if dst[0] == "+" else -1, dst[1])
        if set(found) != set(_AXES):
            raise ValueError(f"rotation must list X, Y and Z: {text!r}")
        return cls(tuple(found[a] for a in _AXES))

    def __str__(self) -> str:
        return " ".join(f"{a}->{'+' if s > 0 else '-'}{l}" for a, (s, l) in zip(_AXES, self.images))

    def determinant(self) -> int:
        order = [_AXES.index(l) for _, l in self.images]
        inversions = sum(1 for i in range(3) for j in range(i + 1, 3) if order[i] > order[j])
        det = -1 if inversions % 2 else 1
        for s, _ in self.images:
            det *= s
        return det

    def image(self, letter: str) -> tuple[int, str]:
        if letter == "I":
            return 1, "I"
        return self.images[_AXES.index(letter)]

    def __mul__(self, other: LocalRotation) -> LocalRotation:
        """self after other."""
        return _compose_rotations(self, other)

    def inverse(self) -> LocalRotation:
        out = {}
        for a, (s, l) in zip(_AXES, self.images):
            out[l] = (s, a)
        return LocalRotation(tuple(out[a] for a in _AXES))


@lru_cache(maxsize=None)
def _compose_rotations(a: LocalRotation, b: LocalRotation) -> LocalRotation:
    out = []
    for axis in _AXES:
        s1, l1 = b.image(axis)
        s2, l2 = a.image(l1)
        out.append((s1 * s2, l2))
    return LocalRotation(tuple(out))


def all_rotations() -> list[LocalRotation]:
    out = []
    for perm in permutations(_AXES):
        for signs in product((1, -1), repeat=3):
            try:
                out.append(LocalRotation(tuple(zip(signs, perm))))
            except ValueError:
                pass
    return out


@dataclass(frozen=True)
class SymmetryElement:
    perm: tuple[int, ...]
    rotations: tuple[LocalRotation, ...]

    def __post_init__(self):
        if sorted(self.perm) != list(range(len(self.perm))):
            raise ValueError(f"not a permutation: {self.perm}")
        if len(self.rotations) != len(self.perm):
            raise ValueError("need one rotation per qubit")

    @property
    def n(self) -> int:
        return len(self.perm)

    @classmethod
    def identity(cls, n: int) -> SymmetryElement:
        return cls(tuple(range(n)), (LocalRotation.identity(),) * n)

    @classmethod
    def permutation(cls, perm: Sequence[int]) -> SymmetryElement:
        return cls(tuple(perm), (LocalRotation.identity(),) * len(perm))

    def act_on_label(self, label: Label) -> tuple[int, Label]:
        return _act(self, label)

    def __mul__(self, other: SymmetryElement) -> SymmetryElement:
        """self after other."""
        perm = tuple(self.perm[other.perm[k]] for k in range(self.n))
        rots = tuple(self.rotations[other.perm[k]] * other.rotations[k] for k in range(self.n))
        return SymmetryElement(perm, rots)

    def inverse(self) -> SymmetryElement:
        inv = [0] * self.n
        for k, pk in enumerate(self.perm):
            inv[pk] = k
        rots = tuple(self.rotations[inv[j]].inverse() for j in range(self.n))
        return SymmetryElement(tuple(inv), rots)


@lru_cache(maxsize=200_000)
def _act(g: SymmetryElement, label: Label) -> tuple[int, Label]:
    x, z = label
    sign = 1
    nx = nz = 0
    for k in range(g.n):
        letter = _FROM_BITS[((x >> k) & 1, (z >> k) & 1)]
        s, l = g.rotations[k].image(letter)
        sign *= s
        xb, zb = _BITS[l]
        t = g.perm[k]
        nx |= xb << t
        nz |= zb << t
    return sign, (nx, nz)


def act_on_expansion(g: SymmetryElement, m: PauliExpansion) -> PauliExpansion:
    if g.n != m.n:
        raise ValueError("symmetry and expansion act on different qubit counts")
    re, im = {}, {}
    for k, v in m.terms.items():
        s, lab = _act(g, k)
        re[lab] = s * v
    for k, v in m.imag.items():
        s, lab = _act(g, k)
        im[lab] = s * v
    return PauliExpansion(m.n, re, im)


def is_symmetry(g: SymmetryElement, m: PauliExpansion, tol: float | None = None) -> bool:
    image = act_on_expansion(g, m)
    if tol is None:
        tol = 0.0 if m.is_exact else 1e-10
    return image.equals(m, tol)


def conjugation_symmetry(e: PauliString | str) -> SymmetryElement:
    """Action of conjugation by e: keeps e's letter on each qubit, negates the other two."""
    if isinstance(e, str):
        e = parse_pauli(e)
    rots = []
    for letter in e.letters:
        if letter == "I":
            rots.append(LocalRotation.identity())
        else:
            rots.append(LocalRotation(tuple((1 if a == letter else -1, a) for a in _AXES)))
    return SymmetryElement(tuple(range(e.n)), tuple(rots))


def _negate_and_swap(letter: str) -> LocalRotation:
    others = [a for a in _AXES if a != letter]
    images = {letter: (-1, letter), others[0]: (1, others[1]), others[1]: (1, others[0])}
    return LocalRotation(tuple(images[a] for a in _AXES))


def cyclic_symmetry(n: int = 5, s: int = 1) -> SymmetryElement:
    return SymmetryElement.permutation([(k + s) % n for k in range(n)])


def doubling_symmetry() -> SymmetryElement:
    """k -> 2k mod 5 with X -> Y, Y -> -X on every qubit."""
    rot = LocalRotation.parse("X->+Y Y->-X Z->+Z")
    return SymmetryElement(tuple(2 * k % 5 for k in range(5)), (rot,) * 5)


def swap_symmetry() -> SymmetryElement:
    """Exchange qubits 2 and 3; on each qubit negate Z, Y, X, X, Y and swap the other two."""
    rots = tuple(_negate_and_swap(l) for l in "ZYXXY")
    return SymmetryElement((0, 1, 3, 2, 4), rots)


LEVELS = ("H", "640", "full")
_LEVEL_ALIASES = {"H_only": "H", "order640": "640"}


def paper_generators(level: str = "full") -> list[SymmetryElement]:
    """5 conjugations by shifts of ZXYYX; then the cyclic and doubling maps; then the 2<->3 swap."""
    level = _LEVEL_ALIASES.get(level, level)
    if level not in LEVELS:
        raise ValueError(f"level must be one of {LEVELS}")
    base = parse_pauli("ZXYYX")
    gens = [conjugation_symmetry(cyclic_shift(base, s)) for s in range(5)]
    if level in ("640", "full"):
        gens += [cyclic_symmetry(5), doubling_symmetry()]
    if level == "full":
        gens.append(swap_symmetry())
    return gens


class GroupTooLarge(RuntimeError):
    pass


def closure(generators: Iterable[SymmetryElement], cap: int = 100_000) -> list[SymmetryElement]:
    gens = list(generators)
    if not gens:
        raise ValueError("need at least one generator")
    ident = SymmetryElement.identity(gens[0].n)
    seen = {ident}
    frontier = [ident]
    while frontier:
        nxt = []
        for a in frontier:
            for g in gens:
                b = g * a
                if b not in seen:
                    seen.add(b)
                    nxt.append(b)
                    if len(seen) > cap:
                        raise GroupTooLarge(f"closure exceeds {cap} elements")
        frontier = nxt
    return list(seen)


def group_order(generators: Iterable[SymmetryElement], cap: int = 100_000) -> int:
    return len(closure(generators, cap))


def permutation_image_order(generators: Iterable[SymmetryElement], cap: int = 100_000) -> int:
    return len({g.perm for g in closure(generators, cap)})


# eigenspace structure over an Abelian stabilizer group ---------------------------------


def _support_weight(p: CodeProjector, g: StabilizerGroup, chi: Character):
    """Tr(P_chi P) = 2^(n-r) sum_h chi(h) sign(h) c_P(h)."""
    m = p.expansion
    total = 0
    for lab, (s, _) in g.elements.items():
        c = m.terms.get(lab, 0)
        if c:
            total += s * g.character_value(chi, lab) * c
    return total * Fraction(1 << g.n, 1 << g.r) if p.exact else total * (1 << g.n) / (1 << g.r)


def character_support(p: CodeProjector, g: StabilizerGroup, tol: float | None = None) -> frozenset:
    """Characters whose joint eigenspaces make up the code; their projectors must sum to P."""
    if not g.is_self_dual:
        raise CodeError("character support needs a self-dual stabilizer group")
    tol = p.tol(tol)
    for gen in g.generators:
        if not is_symmetry(conjugation_symmetry(gen), p.expansion, tol):
            raise CodeError(f"projector does not commute with generator {gen}")
    chosen = frozenset(chi for chi in g.characters() if _support_weight(p, g, chi) > max(tol, 1e-12))
    total = PauliExpansion(p.n)
    for chi in chosen:
        total = total + character_projector(g, chi)
    if not total.equals(p.expansion, tol):
        raise CodeError("character projectors do not resolve the code projector")
    return chosen


def error_character(g: StabilizerGroup, eta: PauliString) -> Character:
    """nu(h_i) = +1 or -1 as eta commutes or anticommutes with generator i."""
    return tuple(1 if labels_commute(eta.label, gen.label) else -1 for gen in g.generators)


def shift_characters(chars: Iterable[Character], nu: Character) -> frozenset:
    return frozenset(tuple(a * b for a, b in zip(chi, nu)) for chi in chars)


def error_character_disjointness(
    p: CodeProjector,
    g: StabilizerGroup,
    errors: Sequence[PauliString] | None = None,
    support: frozenset | None = None,
) -> list[tuple[PauliString, bool]]:
    """For each error, whether the eigenspaces it maps the code into avoid the code's own."""
    if support is None:
        support = character_support(p, g)
    if errors is None:
        errors = single_qubit_errors(p.n)
    out = []
    for eta in errors:
        moved = shift_characters(support, error_character(g, eta))
        out.append((eta, not (moved & support)))
    return out


def format_symmetry(g: SymmetryElement) -> str:
    lines = ["perm: " + " ".join(str(k) for k in g.perm)]
    lines += [f"rot {k}: {r}" for k, r in enumerate(g.rotations)]
    return "\n".join(lines)


def describe_action(g: SymmetryElement, label: Label) -> str:
    s, lab = g.act_on_label(label)
    return ("-" if s < 0 else "") + label_str(lab, g.n)
