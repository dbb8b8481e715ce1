"""Signed n-qubit Pauli operators in symplectic bit form.

A Pauli string is stored as two integer bitmasks ``x`` and ``z`` (bit ``k``
belongs to qubit ``k``; qubit 0 is the leftmost letter and the first tensor
factor) together with a phase exponent ``p`` meaning a global factor ``i**p``.

Per qubit the bits decode as (0,0)->I, (1,0)->X, (0,1)->Z, (1,1)->Y, where the
phase-free Y letter is exactly the Hermitian matrix ((0,-i),(i,0)).  Phase-free
labels are plain ``(x, z)`` tuples and are used as dictionary keys throughout
the package.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from itertools import product
from typing import Iterator

Label = tuple[int, int]

LETTERS = "IXYZ"
_LETTER_BITS = {"I": (0, 0), "X": (1, 0), "Z": (0, 1), "Y": (1, 1)}
_BITS_LETTER = {v: k for k, v in _LETTER_BITS.items()}
_PHASE_PREFIX = {0: "", 1: "i", 2: "-", 3: "-i"}

_PAULI_RE = re.compile(r"^([+-]?)(i?)([IXYZ]+)$")


class PauliParseError(ValueError):
    """Raised when a Pauli string literal cannot be decoded.

    ``position`` counts from the first letter, after any sign or ``i`` prefix.
    """

    def __init__(self, text: str, position: int, reason: str):
        self.text = text
        self.position = position
        super().__init__(f"{reason} at position {position} in {text!r}")


def _popcount(v: int) -> int:
    return bin(v).count("1")


def label_weight(label: Label) -> int:
    return _popcount(label[0] | label[1])


def label_mul(a: Label, b: Label) -> tuple[Label, int]:
    """Product of two phase-free labels: returns ``(label, p)`` with a*b = i**p * label."""
    x1, z1 = a
    x2, z2 = b
    x3, z3 = x1 ^ x2, z1 ^ z2
    # Y = i X Z per qubit, and Z X = -X Z
    p = _popcount(x1 & z1) + _popcount(x2 & z2) + 2 * _popcount(z1 & x2) - _popcount(x3 & z3)
    return (x3, z3), p % 4


def labels_commute(a: Label, b: Label) -> bool:
    return (_popcount(a[0] & b[1]) + _popcount(a[1] & b[0])) % 2 == 0


def all_labels(n: int) -> Iterator[Label]:
    """Every phase-free label on n qubits, identity first."""
    full = 1 << n
    for x in range(full):
        for z in range(full):
            yield (x, z)


def labels_of_weight(n: int, d: int) -> list[Label]:
    return [lab for lab in all_labels(n) if label_weight(lab) == d]


def label_y_count(label: Label) -> int:
    return _popcount(label[0] & label[1])


def label_str(label: Label, n: int) -> str:
    x, z = label
    return "".join(_BITS_LETTER[((x >> k) & 1, (z >> k) & 1)] for k in range(n))


def label_from_str(text: str) -> Label:
    p = parse_pauli(text)
    if p.phase != 0:
        raise PauliParseError(text, 0, "phase not allowed in a label")
    return p.label


def shift_label(label: Label, s: int, n: int) -> Label:
    s %= n
    mask = (1 << n) - 1

    def rot(v: int) -> int:
        return ((v << s) | (v >> (n - s))) & mask

    return (rot(label[0]), rot(label[1]))


@dataclass(frozen=True)
class PauliString:
    """Signed Pauli operator ``i**phase * label`` on ``n`` qubits."""

    n: int
    x: int
    z: int
    phase: int = 0

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("a Pauli string needs at least one qubit")
        mask = (1 << self.n) - 1
        if self.x & ~mask or self.z & ~mask:
            raise ValueError("bits set beyond the qubit count")
        object.__setattr__(self, "phase", self.phase % 4)

    @classmethod
    def identity(cls, n: int) -> PauliString:
        return cls(n, 0, 0, 0)

    @classmethod
    def from_label(cls, label: Label, n: int, phase: int = 0) -> PauliString:
        return cls(n, label[0], label[1], phase)

    @property
    def label(self) -> Label:
        return (self.x, self.z)

    @property
    def x_bits(self) -> tuple[int, ...]:
        return tuple((self.x >> k) & 1 for k in range(self.n))

    @property
    def z_bits(self) -> tuple[int, ...]:
        return tuple((self.z >> k) & 1 for k in range(self.n))

    @property
    def letters(self) -> str:
        return label_str(self.label, self.n)

    def __str__(self) -> str:
        return format_pauli(self)

    def __repr__(self) -> str:
        return f"PauliString({format_pauli(self)!r})"

    def __mul__(self, other: PauliString) -> PauliString:
        return pauli_mul(self, other)

    def __neg__(self) -> PauliString:
        return PauliString(self.n, self.x, self.z, self.phase + 2)

    def dagger(self) -> PauliString:
        # phase-free labels are Hermitian, so only the phase conjugates
        return PauliString(self.n, self.x, self.z, -self.phase)


def parse_pauli(text: str) -> PauliString:
    """Decode ``[+-]?(i)?[IXYZ]+`` into a :class:`PauliString`."""
    if not text:
        raise PauliParseError(text, 0, "empty Pauli string")
    m = _PAULI_RE.match(text)
    if m is None:
        pos = 0
        if text[0] in "+-":
            pos = 1
        if pos < len(text) and text[pos] == "i":
            pos += 1
        if pos == len(text):
            raise PauliParseError(text, 0, "missing Pauli letters")
        for k in range(pos, len(text)):
            if text[k] not in LETTERS:
                raise PauliParseError(text, k - pos, f"invalid letter {text[k]!r}")
        raise PauliParseError(text, 0, "malformed Pauli string")  # pragma: no cover
    sign, imag, letters = m.groups()
    phase = (2 if sign == "-" else 0) + (1 if imag else 0)
    x = z = 0
    for k, ch in enumerate(letters):
        xb, zb = _LETTER_BITS[ch]
        x |= xb << k
        z |= zb << k
    return PauliString(len(letters), x, z, phase)


def format_pauli(p: PauliString) -> str:
    return _PHASE_PREFIX[p.phase] + p.letters


def _check_len(a: PauliString, b: PauliString) -> None:
    if a.n != b.n:
        raise ValueError(f"qubit count mismatch: {a.n} vs {b.n}")


def pauli_mul(a: PauliString, b: PauliString) -> PauliString:
    _check_len(a, b)
    label, p = label_mul(a.label, b.label)
    return PauliString(a.n, label[0], label[1], a.phase + b.phase + p)


def commutes(a: PauliString, b: PauliString) -> bool:
    _check_len(a, b)
    return labels_commute(a.label, b.label)


def weight(a: PauliString) -> int:
    return label_weight(a.label)


def cyclic_shift(a: PauliString, s: int) -> PauliString:
    """Move the letter on qubit k to qubit (k + s) mod n."""
    x, z = shift_label(a.label, s, a.n)
    return PauliString(a.n, x, z, a.phase)


def conjugate(a: PauliString, g: PauliString) -> PauliString:
    """Return g a g^dagger, which is a up to a sign."""
    _check_len(a, g)
    flip = 0 if labels_commute(a.label, g.label) else 2
    return PauliString(a.n, a.x, a.z, a.phase + flip)


def single_qubit_errors(n: int) -> list[PauliString]:
    """The 3n weight-one Pauli errors, ordered by qubit then X, Y, Z."""
    out = []
    for k, ch in product(range(n), "XYZ"):
        xb, zb = _LETTER_BITS[ch]
        out.append(PauliString(n, xb << k, zb << k))
    return out
