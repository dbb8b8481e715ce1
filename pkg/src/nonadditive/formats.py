"""Line-oriented text formats for expansions, states, stabilizer groups and symmetries.

Every format allows ``#`` comments and blank lines.  Parse errors raise
:class:`FormatError` carrying the 1-based line number.
"""

from __future__ import annotations

import re
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

from .operators import PauliExpansion
from .pauli import PauliParseError, PauliString, label_str, parse_pauli
from .symmetry import LocalRotation, SymmetryElement, format_symmetry

_RATIONAL = re.compile(r"^[+-]?\d+(/\d+)?$")
_BITS = re.compile(r"^[01]+$")


class FormatError(ValueError):
    def __init__(self, line: int, message: str):
        self.line = line
        super().__init__(f"line {line}: {message}")


def _content_lines(text: str):
    for i, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if line:
            yield i, line


def _parse_pauli(token: str, lineno: int) -> PauliString:
    try:
        return parse_pauli(token)
    except PauliParseError as exc:
        raise FormatError(lineno, str(exc)) from None


def format_coefficient(c) -> str:
    if isinstance(c, Fraction):
        return str(c)  # "p/q" in lowest terms, or "p" for integers
    if isinstance(c, int):
        return str(c)
    return repr(float(c))


def parse_coefficient(token: str):
    """``p/q`` or an integer gives a Fraction; any other decimal gives a float."""
    if _RATIONAL.match(token):
        f = Fraction(token)
        if f.denominator == 0:
            raise ValueError("zero denominator")
        return f
    return float(token)


# Pauli expansions --------------------------------------------------------------------------


def format_expansion(m: PauliExpansion) -> str:
    if m.imag:
        raise ValueError("only Hermitian expansions have a file format")
    items = sorted((label_str(lab, m.n), c) for lab, c in m.terms.items())
    lines = [f"# {m.n}-qubit Pauli expansion, {len(items)} terms"]
    lines += [f"{format_coefficient(c)} {s}" for s, c in items]
    return "\n".join(lines) + "\n"


def parse_expansion(text: str) -> PauliExpansion:
    terms = {}
    n = None
    any_float = False
    for lineno, line in _content_lines(text):
        parts = line.split()
        if len(parts) != 2:
            raise FormatError(lineno, f"expected '<coefficient> <pauli>', got {line!r}")
        try:
            coef = parse_coefficient(parts[0])
        except (ValueError, ZeroDivisionError):
            raise FormatError(lineno, f"bad coefficient {parts[0]!r}") from None
        p = _parse_pauli(parts[1], lineno)
        if p.phase % 2:
            raise FormatError(lineno, "imaginary phase makes the term non-Hermitian")
        if p.phase == 2:
            coef = -coef
        if n is None:
            n = p.n
        elif p.n != n:
            raise FormatError(lineno, f"expected {n} qubits, got {p.n}")
        if p.label in terms:
            raise FormatError(lineno, f"duplicate label {label_str(p.label, n)}")
        any_float |= isinstance(coef, float)
        terms[p.label] = coef
    if n is None:
        raise FormatError(0, "no terms found")
    if any_float:
        terms = {k: float(v) for k, v in terms.items()}
    return PauliExpansion(n, terms)


# state vectors -----------------------------------------------------------------------------


def format_state(v: np.ndarray, atol: float = 1e-15) -> str:
    v = np.asarray(v, dtype=complex)
    n = int(np.log2(len(v)))
    if 1 << n != len(v):
        raise ValueError("state length must be a power of two")
    lines = []
    for i, a in enumerate(v):
        if abs(a) > atol:
            lines.append(f"{float(a.real)!r} {float(a.imag)!r} {i:0{n}b}")
    return "\n".join(lines) + "\n"


def parse_state(text: str) -> np.ndarray:
    amps = {}
    n = None
    for lineno, line in _content_lines(text):
        parts = line.split()
        if len(parts) != 3 or not _BITS.match(parts[2]):
            raise FormatError(lineno, f"expected '<real> <imag> <bitstring>', got {line!r}")
        try:
            a = complex(float(parts[0]), float(parts[1]))
        except ValueError:
            raise FormatError(lineno, "bad amplitude") from None
        bits = parts[2]
        if n is None:
            n = len(bits)
        elif len(bits) != n:
            raise FormatError(lineno, f"expected {n} bits, got {len(bits)}")
        if bits in amps:
            raise FormatError(lineno, f"duplicate basis state {bits}")
        amps[bits] = a
    if n is None:
        raise FormatError(0, "no amplitudes found")
    v = np.zeros(1 << n, dtype=complex)
    for bits, a in amps.items():
        v[int(bits, 2)] = a
    return v


# stabilizer groups -------------------------------------------------------------------------


def format_group(generators: Iterable[PauliString], representatives: Iterable[PauliString] = ()) -> str:
    lines = [str(g) if str(g)[0] in "+-" else "+" + str(g) for g in generators]
    lines += [f"coset: {r}" for r in representatives]
    return "\n".join(lines) + "\n"


def parse_group(text: str) -> tuple[list[PauliString], list[PauliString]]:
    """Generators and coset representatives, in file order."""
    gens, reps = [], []
    for lineno, line in _content_lines(text):
        if line.startswith("coset:"):
            reps.append(_parse_pauli(line[len("coset:"):].strip(), lineno))
        elif len(line.split()) == 1:
            gens.append(_parse_pauli(line, lineno))
        else:
            raise FormatError(lineno, f"unrecognised line {line!r}")
    if not gens:
        raise FormatError(0, "no generators found")
    return gens, reps


# symmetries --------------------------------------------------------------------------------


def format_symmetries(gs: Sequence[SymmetryElement]) -> str:
    return "\n\n".join(format_symmetry(g) for g in gs) + "\n"


def parse_symmetries(text: str) -> list[SymmetryElement]:
    out = []
    perm = None
    rots: dict[int, LocalRotation] = {}

    def flush(lineno):
        if perm is None:
            return
        if sorted(rots) != list(range(len(perm))):
            raise FormatError(lineno, "need one 'rot k:' line per qubit")
        try:
            out.append(SymmetryElement(perm, tuple(rots[k] for k in range(len(perm)))))
        except ValueError as exc:
            raise FormatError(lineno, str(exc)) from None

    lineno = 0
    for lineno, line in _content_lines(text):
        head, _, body = line.partition(":")
        if head == "perm":
            flush(lineno)
            try:
                perm = tuple(int(t) for t in body.split())
            except ValueError:
                raise FormatError(lineno, "permutation entries must be integers") from None
            rots = {}
        elif head.startswith("rot "):
            if perm is None:
                raise FormatError(lineno, "'rot' before 'perm'")
            try:
                k = int(head[4:])
                rots[k] = LocalRotation.parse(body)
            except ValueError as exc:
                raise FormatError(lineno, str(exc)) from None
        else:
            raise FormatError(lineno, f"unrecognised line {line!r}")
    flush(lineno)
    if not out:
        raise FormatError(0, "no symmetries found")
    return out
