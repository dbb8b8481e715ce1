"""Operators as Pauli expansions and as dense 2^n x 2^n matrices.

:class:`PauliExpansion` is the workhorse: a linear combination of phase-free
Pauli labels.  Coefficients are ``Fraction`` for exactly transcribed objects
and ``float`` for numerical ones; all algebra on exact expansions stays exact.
Hermitian operators have an empty ``imag`` part.  Products of Hermitian
operators need not be Hermitian, so an expansion may carry an imaginary part.

Dense operators and state vectors are plain complex numpy arrays.  Basis
index bits run from qubit 0 (most significant) to qubit n-1, so the ket
``|b0 b1 ... b(n-1)>`` sits at index ``int("b0b1...", 2)``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from numbers import Rational, Real
from typing import Iterable, Mapping

import numpy as np

from .pauli import (
    Label,
    PauliString,
    label_from_str,
    label_mul,
    label_str,
    label_weight,
    labels_commute,
    shift_label,
)

DEFAULT_TOL = 1e-10

# single-qubit matrices in letter-code order a = 2*x + z: I, Z, X, Y
_SINGLE = np.array(
    [
        [[1, 0], [0, 1]],
        [[1, 0], [0, -1]],
        [[0, 1], [1, 0]],
        [[0, -1j], [1j, 0]],
    ],
    dtype=complex,
)


def _rotate(re, im, p: int):
    """Multiply re + i*im by i**p."""
    if p == 0:
        return re, im
    if p == 1:
        return -im, re
    if p == 2:
        return -re, -im
    return im, -re


def _is_exact(v) -> bool:
    return isinstance(v, Rational)


@dataclass(frozen=True, eq=False)
class PauliExpansion:
    """Operator sum_E (terms[E] + i*imag[E]) * E over phase-free labels E."""

    n: int
    terms: Mapping[Label, Real] = field(default_factory=dict)
    imag: Mapping[Label, Real] = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "terms", {k: v for k, v in self.terms.items() if v != 0})
        object.__setattr__(self, "imag", {k: v for k, v in self.imag.items() if v != 0})

    # construction -----------------------------------------------------------

    @classmethod
    def from_strings(cls, coeffs: Mapping[str, Real]) -> PauliExpansion:
        n = None
        terms: dict[Label, Real] = {}
        for text, c in coeffs.items():
            lab = label_from_str(text)
            if n is None:
                n = len(text)
            elif len(text) != n:
                raise ValueError("labels of different lengths")
            terms[lab] = terms.get(lab, 0) + c
        if n is None:
            raise ValueError("cannot infer qubit count from an empty mapping")
        return cls(n, terms)

    @classmethod
    def identity(cls, n: int, coeff: Real = 1) -> PauliExpansion:
        return cls(n, {(0, 0): coeff})

    @classmethod
    def from_pauli(cls, p: PauliString, coeff: Real = 1) -> PauliExpansion:
        re, im = _rotate(coeff, 0 * coeff, p.phase)
        return cls(p.n, {p.label: re}, {p.label: im})

    # inspection ---------------------------------------------------------------

    @property
    def is_exact(self) -> bool:
        return all(_is_exact(v) for v in self.terms.values()) and all(
            _is_exact(v) for v in self.imag.values()
        )

    def is_hermitian(self, tol: float = 0.0) -> bool:
        return all(abs(v) <= tol for v in self.imag.values())

    def coefficient(self, label: Label | str):
        if isinstance(label, str):
            label = label_from_str(label)
        re = self.terms.get(label, 0)
        im = self.imag.get(label, 0)
        return complex(re, im) if im else re

    def labels(self) -> set[Label]:
        return set(self.terms) | set(self.imag)

    def __len__(self) -> int:
        return len(self.labels())

    def __repr__(self) -> str:
        shown = sorted(self.terms.items())[:4]
        body = ", ".join(f"{label_str(k, self.n)}: {v}" for k, v in shown)
        more = ", ..." if len(self) > 4 else ""
        return f"PauliExpansion(n={self.n}, {{{body}{more}}})"

    def to_strings(self) -> dict[str, Real]:
        return {label_str(k, self.n): v for k, v in self.terms.items()}

    # linear structure ---------------------------------------------------------

    def _check(self, other: PauliExpansion) -> None:
        if self.n != other.n:
            raise ValueError(f"qubit count mismatch: {self.n} vs {other.n}")

    def __add__(self, other: PauliExpansion) -> PauliExpansion:
        self._check(other)
        re = dict(self.terms)
        for k, v in other.terms.items():
            re[k] = re.get(k, 0) + v
        im = dict(self.imag)
        for k, v in other.imag.items():
            im[k] = im.get(k, 0) + v
        return PauliExpansion(self.n, re, im)

    def __neg__(self) -> PauliExpansion:
        return self.scale(-1)

    def __sub__(self, other: PauliExpansion) -> PauliExpansion:
        return self + (-other)

    def scale(self, a: Real) -> PauliExpansion:
        return PauliExpansion(
            self.n,
            {k: a * v for k, v in self.terms.items()},
            {k: a * v for k, v in self.imag.items()},
        )

    def __mul__(self, a: Real) -> PauliExpansion:
        return self.scale(a)

    __rmul__ = __mul__

    # algebra -------------------------------------------------------------------

    def __matmul__(self, other: PauliExpansion) -> PauliExpansion:
        return multiply(self, other)

    def trace(self):
        """Trace of the operator; 2^n times the identity coefficient."""
        return self.coefficient((0, 0)) * (1 << self.n)

    def norm_sq(self):
        """Squared Frobenius norm, exact for exact expansions."""
        s = sum(v * v for v in self.terms.values()) + sum(v * v for v in self.imag.values())
        return s * (1 << self.n)

    def frobenius_norm(self) -> float:
        return float(self.norm_sq()) ** 0.5

    def distance(self, other: PauliExpansion) -> float:
        return (self - other).frobenius_norm()

    def equals(self, other: PauliExpansion, tol: float = 0.0) -> bool:
        if self.n != other.n:
            return False
        diff = self - other
        if tol == 0:
            return diff.norm_sq() == 0
        return diff.frobenius_norm() <= tol

    def left_mul(self, p: PauliString) -> PauliExpansion:
        """The product p * self."""
        return multiply(PauliExpansion.from_pauli(p), self)

    def conjugated_by(self, p: PauliString) -> PauliExpansion:
        """p self p^dagger: each term flips sign when it anticommutes with p."""
        lab = p.label

        def sgn(k):
            return 1 if labels_commute(k, lab) else -1

        return PauliExpansion(
            self.n,
            {k: sgn(k) * v for k, v in self.terms.items()},
            {k: sgn(k) * v for k, v in self.imag.items()},
        )

    def shifted(self, s: int) -> PauliExpansion:
        return PauliExpansion(
            self.n,
            {shift_label(k, s, self.n): v for k, v in self.terms.items()},
            {shift_label(k, s, self.n): v for k, v in self.imag.items()},
        )

    def weight_class_masses(self) -> list:
        """Sum of |c_E|^2 over the labels of each weight 0..n."""
        out = [0] * (self.n + 1)
        for k, v in self.terms.items():
            out[label_weight(k)] += v * v
        for k, v in self.imag.items():
            out[label_weight(k)] += v * v
        return out

    def to_dense(self) -> np.ndarray:
        return expansion_to_dense(self)

    def to_vector(self) -> np.ndarray:
        idx = label_index(self.n)
        vec = np.zeros(4**self.n, dtype=complex)
        for k, v in self.terms.items():
            vec[idx[k]] += float(v)
        for k, v in self.imag.items():
            vec[idx[k]] += 1j * float(v)
        return vec

    @classmethod
    def from_vector(cls, n: int, vec: np.ndarray, atol: float = 1e-14) -> PauliExpansion:
        labels = index_labels(n)
        re: dict[Label, float] = {}
        im: dict[Label, float] = {}
        for i in np.flatnonzero(np.abs(vec.real) > atol):
            re[labels[i]] = float(vec.real[i])
        if np.iscomplexobj(vec):
            for i in np.flatnonzero(np.abs(vec.imag) > atol):
                im[labels[i]] = float(vec.imag[i])
        return cls(n, re, im)


def to_float(m: PauliExpansion) -> PauliExpansion:
    return PauliExpansion(
        m.n,
        {k: float(v) for k, v in m.terms.items()},
        {k: float(v) for k, v in m.imag.items()},
    )


# label <-> vector index ---------------------------------------------------------


@lru_cache(maxsize=None)
def index_labels(n: int) -> tuple[Label, ...]:
    """Label at each coefficient-vector index; qubit 0 is the most significant digit."""
    out = []
    for i in range(4**n):
        x = z = 0
        for k in range(n):
            a = (i >> (2 * (n - 1 - k))) & 3
            x |= (a >> 1) << k
            z |= (a & 1) << k
        out.append((x, z))
    return tuple(out)


@lru_cache(maxsize=None)
def label_index(n: int) -> dict[Label, int]:
    return {lab: i for i, lab in enumerate(index_labels(n))}


@lru_cache(maxsize=None)
def label_weights(n: int) -> np.ndarray:
    return np.array([label_weight(lab) for lab in index_labels(n)])


@lru_cache(maxsize=None)
def label_y_counts(n: int) -> np.ndarray:
    return np.array([bin(x & z).count("1") for x, z in index_labels(n)])


def vector_to_dense(vec: np.ndarray, n: int) -> np.ndarray:
    """sum_E vec[E] * E as a 2^n x 2^n matrix (one small contraction per qubit)."""
    t = np.asarray(vec, dtype=complex).reshape((4,) * n)
    for _ in range(n):
        t = np.tensordot(t, _SINGLE, axes=([0], [0]))
    t = t.transpose([2 * k for k in range(n)] + [2 * k + 1 for k in range(n)])
    return t.reshape(1 << n, 1 << n)


def dense_to_vector(a: np.ndarray, n: int) -> np.ndarray:
    """Coefficients Tr(E a) / 2^n for every label E, in coefficient-vector order."""
    t = np.asarray(a, dtype=complex).reshape((2,) * (2 * n))
    t = t.transpose([ax for k in range(n) for ax in (k, n + k)])
    for _ in range(n):
        # Tr(E a) = sum_{r,s} E[s,r] a[r,s]
        t = np.tensordot(t, _SINGLE, axes=([0, 1], [2, 1]))
    return t.reshape(-1) / (1 << n)


def _n_of(a: np.ndarray) -> int:
    dim = a.shape[0]
    n = dim.bit_length() - 1
    if dim != 1 << n or n < 1:
        raise ValueError(f"dimension {dim} is not a power of two")
    return n


# public operations ----------------------------------------------------------------


def expansion_to_dense(m: PauliExpansion) -> np.ndarray:
    return vector_to_dense(m.to_vector(), m.n)


def dense_to_expansion(a: np.ndarray, tol: float = DEFAULT_TOL, atol: float = 1e-13) -> PauliExpansion:
    """Pauli coefficients of a Hermitian matrix; coefficients below ``atol`` are dropped."""
    a = np.asarray(a, dtype=complex)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError("expected a square matrix")
    n = _n_of(a)
    herm = np.linalg.norm(a - a.conj().T)
    if herm > tol:
        raise ValueError(f"operator is not Hermitian (residual {herm:.3g})")
    vec = dense_to_vector(a, n).real
    return PauliExpansion.from_vector(n, vec, atol=atol)


def dense_to_general_expansion(a: np.ndarray, atol: float = 1e-13) -> PauliExpansion:
    a = np.asarray(a, dtype=complex)
    n = _n_of(a)
    return PauliExpansion.from_vector(n, dense_to_vector(a, n), atol=atol)


def _check_same(a: np.ndarray, b: np.ndarray) -> None:
    if a.shape[0] != b.shape[0]:
        raise ValueError(f"dimension mismatch: {a.shape[0]} vs {b.shape[0]}")


def compose(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    _check_same(a, b)
    return a @ b


def trace(a: np.ndarray) -> complex:
    return complex(np.trace(a))


def frobenius_distance(a: np.ndarray, b: np.ndarray) -> float:
    _check_same(a, b)
    return float(np.linalg.norm(a - b))


def apply_state(a: np.ndarray, v: np.ndarray) -> np.ndarray:
    if a.shape[1] != v.shape[0]:
        raise ValueError(f"dimension mismatch: {a.shape[1]} vs {v.shape[0]}")
    return a @ v


def pauli_matrix(p: PauliString) -> np.ndarray:
    return expansion_to_dense(PauliExpansion.from_pauli(p))


# exact products in the Pauli basis ---------------------------------------------------

_DENSE_PRODUCT_THRESHOLD = 4096


def multiply(a: PauliExpansion, b: PauliExpansion) -> PauliExpansion:
    """Operator product a*b.

    Exact expansions are convolved label by label with exact phases.  Large
    floating-point expansions go through dense matrices instead.
    """
    a._check(b)
    exact = a.is_exact and b.is_exact
    if not exact and len(a) * len(b) > _DENSE_PRODUCT_THRESHOLD:
        return dense_to_general_expansion(expansion_to_dense(a) @ expansion_to_dense(b))
    re: dict[Label, Real] = {}
    im: dict[Label, Real] = {}
    zero = Fraction(0) if exact else 0.0
    a_items = [(k, a.terms.get(k, zero), a.imag.get(k, zero)) for k in a.labels()]
    b_items = [(k, b.terms.get(k, zero), b.imag.get(k, zero)) for k in b.labels()]
    for ka, ar, ai in a_items:
        for kb, br, bi in b_items:
            lab, p = label_mul(ka, kb)
            if ai or bi:
                pr, pi = ar * br - ai * bi, ar * bi + ai * br
            else:
                pr, pi = ar * br, zero
            pr, pi = _rotate(pr, pi, p)
            if pr:
                re[lab] = re.get(lab, zero) + pr
            if pi:
                im[lab] = im.get(lab, zero) + pi
    return PauliExpansion(a.n, re, im)


def linear_combination(pairs: Iterable[tuple[Real, PauliExpansion]]) -> PauliExpansion:
    out = None
    for c, m in pairs:
        out = m.scale(c) if out is None else out + m.scale(c)
    if out is None:
        raise ValueError("empty combination")
    return out


# states --------------------------------------------------------------------------------


def state_from_kets(kets: Mapping[str, complex], normalize: bool = False) -> np.ndarray:
    """Build a state vector from ``{"00101": amplitude, ...}``."""
    n = None
    for k in kets:
        if n is None:
            n = len(k)
        elif len(k) != n:
            raise ValueError("bitstrings of different lengths")
    if n is None:
        raise ValueError("empty state")
    v = np.zeros(1 << n, dtype=complex)
    for k, amp in kets.items():
        if set(k) - {"0", "1"}:
            raise ValueError(f"bad bitstring {k!r}")
        v[int(k, 2)] += amp
    if normalize:
        v /= np.linalg.norm(v)
    return v


def shift_bitstring(bits: str, s: int) -> str:
    """Move the symbol on qubit k to qubit (k + s) mod n."""
    s %= len(bits)
    return bits[len(bits) - s:] + bits[: len(bits) - s] if s else bits
