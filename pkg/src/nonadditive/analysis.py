"""Verification of quantum codes given as projectors.

Exact (``Fraction``) projectors are checked with exact Pauli-basis algebra, so
identities like P^2 = P hold with residual exactly zero.  Floating-point
projectors are checked densely against a tolerance (default 1e-10).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from math import comb
from typing import Sequence

import numpy as np

from .operators import (
    DEFAULT_TOL,
    PauliExpansion,
    expansion_to_dense,
    pauli_matrix,
    shift_bitstring,
    state_from_kets,
)
from .pauli import (
    PauliString,
    all_labels,
    cyclic_shift,
    label_weight,
    labels_of_weight,
    parse_pauli,
    single_qubit_errors,
)

PAPER_ENUMERATOR = (36, 0, 0, 0, 60, 96)


class CodeError(ValueError):
    pass


def _default_tol(exact: bool, tol: float | None) -> float:
    if tol is not None:
        return tol
    return 0.0 if exact else DEFAULT_TOL


# weight enumerators ---------------------------------------------------------------


@dataclass(frozen=True)
class WeightEnumerator:
    """Coefficients A_0..A_n of A(u, v) = sum_d A_d u^(n-d) v^d."""

    coefficients: tuple

    @property
    def n(self) -> int:
        return len(self.coefficients) - 1

    def __getitem__(self, d: int):
        return self.coefficients[d]

    def __iter__(self):
        return iter(self.coefficients)

    def __len__(self) -> int:
        return len(self.coefficients)

    def as_floats(self) -> list[float]:
        return [float(a) for a in self.coefficients]

    def matches(self, other: Sequence, tol: float = 0.0) -> bool:
        if len(other) != len(self.coefficients):
            return False
        return all(abs(a - b) <= tol for a, b in zip(self.coefficients, other))

    def polynomial(self) -> str:
        n = self.n
        parts = []
        for d, a in enumerate(self.coefficients):
            if a == 0:
                continue
            mono = "".join(
                s for s in (_power("u", n - d), _power("v", d)) if s
            )
            parts.append(f"{_num(a)}{mono}")
        return " + ".join(parts) if parts else "0"


def _power(sym: str, k: int) -> str:
    if k == 0:
        return ""
    return sym if k == 1 else f"{sym}^{k}"


def _num(a) -> str:
    if isinstance(a, Fraction) and a.denominator == 1:
        return str(a.numerator)
    if isinstance(a, float):
        return f"{a:.6g}"
    return str(a)


def enumerator_A(m: PauliExpansion) -> WeightEnumerator:
    """A_d = sum over weight-d labels E of |Tr(E m)|^2 = 4^n sum |c_E|^2."""
    scale = 4**m.n
    return WeightEnumerator(tuple(scale * w for w in m.weight_class_masses()))


def krawtchouk(n: int) -> list[list[int]]:
    """K[d][w] = sum over weight-d labels E of the commutation sign with a weight-w label."""
    out = []
    for d in range(n + 1):
        row = []
        for w in range(n + 1):
            # coefficient of t^d in (1 + 3t)^(n-w) (1 - t)^w
            row.append(
                sum(
                    comb(n - w, d - j) * 3 ** (d - j) * comb(w, j) * (-1) ** j
                    for j in range(0, min(d, w) + 1)
                    if d - j <= n - w
                )
            )
        out.append(row)
    return out


def macwilliams_B(A: Sequence, n: int) -> tuple:
    """Companion enumerator B from A: B_d = 2^-n sum_w K_d(w) A_w."""
    kr = krawtchouk(n)
    out = []
    for d in range(n + 1):
        s = sum(kr[d][w] * A[w] for w in range(n + 1))
        if all(isinstance(a, (int, Fraction)) for a in A):
            out.append(Fraction(s, 1) / (1 << n))
        else:
            out.append(s / (1 << n))
    return tuple(out)


def enumerator_B(m: PauliExpansion) -> WeightEnumerator:
    """B_d = sum over weight-d labels E of Tr(E m E^dagger m), for Hermitian m.

    Tr(E m E m) = 2^n sum_F s(E, F) c_F^2 with s the commutation sign, and summing
    s over a weight class only depends on the weight of F.
    """
    if not m.is_hermitian():
        raise CodeError("enumerator_B needs a Hermitian expansion")
    return WeightEnumerator(macwilliams_B(enumerator_A(m).coefficients, m.n))


def implied_distance(A: Sequence, K: int, tol: float = 0.0) -> int:
    """Largest d with A_j = K*B_j for all j < d (distance implied by an enumerator)."""
    n = len(A) - 1
    B = macwilliams_B(A, n)
    for j in range(1, n + 1):
        if abs(K * B[j] - A[j]) > tol:
            return j
    return n + 1


# projectors -----------------------------------------------------------------------


@dataclass
class ProjectorCheck:
    is_projector: bool
    K: int
    residual: float
    trace: float

    def __iter__(self):
        return iter((self.is_projector, self.K))


def verify_projector(m: PauliExpansion, tol: float | None = None) -> ProjectorCheck:
    exact = m.is_exact
    tol = _default_tol(exact, tol)
    tr = m.trace()
    if isinstance(tr, complex):
        return ProjectorCheck(False, 0, float("inf"), float("nan"))
    K = round(tr)
    if exact:
        res_sq = (m @ m - m).norm_sq()
        residual = float(res_sq) ** 0.5
        ok = (res_sq <= tol * tol) and abs(tr - K) <= tol
    else:
        d = expansion_to_dense(m)
        residual = float(np.linalg.norm(d @ d - d))
        ok = residual <= tol and abs(tr - K) <= max(tol, 1e-9)
    ok = ok and K >= 0 and m.is_hermitian(tol)
    return ProjectorCheck(bool(ok), int(K), residual, float(tr))


@dataclass(eq=False)
class CodeProjector:
    """Orthogonal projector onto an ((n, K, d)) code."""

    n: int
    K: int
    expansion: PauliExpansion

    @classmethod
    def from_expansion(cls, m: PauliExpansion, tol: float | None = None) -> CodeProjector:
        check = verify_projector(m, tol)
        if not check.is_projector:
            raise CodeError(
                f"not a projector (residual {check.residual:.3g}, trace {check.trace:.6g})"
            )
        return cls(m.n, check.K, m)

    @property
    def exact(self) -> bool:
        return self.expansion.is_exact

    @cached_property
    def dense(self) -> np.ndarray:
        return expansion_to_dense(self.expansion)

    def tol(self, tol: float | None = None) -> float:
        return _default_tol(self.exact, tol)

    def sandwich_residual(self, e: PauliString, tol: float | None = None):
        """(lambda, ||P e P - lambda P||) with lambda = Tr(P e P) / K."""
        if self.exact:
            pm = self.expansion
            pep = pm @ pm.left_mul(e)
            scale = Fraction(1 << self.n, self.K)
            lam_re = pep.terms.get((0, 0), 0) * scale
            lam_im = pep.imag.get((0, 0), 0) * scale
            lam = complex(lam_re, lam_im) if lam_im else lam_re
            lam_part = PauliExpansion(
                self.n,
                {k: lam_re * v for k, v in pm.terms.items()},
                {k: lam_im * v for k, v in pm.terms.items()},
            )
            return lam, float((pep - lam_part).norm_sq()) ** 0.5
        p = self.dense
        pep = p @ pauli_matrix(e) @ p
        lam = np.trace(pep) / self.K
        return lam, float(np.linalg.norm(pep - lam * p))


def kl_scalar(p: CodeProjector, e: PauliString, tol: float | None = None):
    """lambda with P e P = lambda P (within tol), or None if no such scalar exists."""
    if e.n != p.n:
        raise CodeError("error acts on the wrong number of qubits")
    tol = p.tol(tol)
    lam, res = p.sandwich_residual(e)
    if res > tol:
        return None
    if isinstance(lam, complex) or np.iscomplexobj(lam):
        lam = complex(lam)
        if abs(lam.imag) <= max(tol, 1e-15):
            return lam.real
    return lam


def distance_witness(p: CodeProjector, tol: float | None = None):
    """(distance, witness): the witness is a lowest-weight error with no KL scalar."""
    if p.K < 1:
        raise CodeError("distance needs K >= 1")
    if p.K == 1:
        A = enumerator_A(p.expansion)
        tol = p.tol(tol)
        for d in range(1, p.n + 1):
            if A[d] > tol:
                return d, None
        return p.n + 1, None
    for d in range(1, p.n + 1):
        for lab in labels_of_weight(p.n, d):
            e = PauliString.from_label(lab, p.n)
            if kl_scalar(p, e, tol) is None:
                return d, e
    return p.n + 1, None


def min_distance(p: CodeProjector, tol: float | None = None) -> int:
    return distance_witness(p, tol)[0]


def single_error_orthogonality(p: CodeProjector, tol: float | None = None) -> list[tuple[PauliString, float]]:
    """||P (eta P eta)||_F for every weight-one error eta."""
    out = []
    for eta in single_qubit_errors(p.n):
        if p.exact:
            pp = p.expansion @ p.expansion.conjugated_by(eta)
            res = float(pp.norm_sq()) ** 0.5
        else:
            em = pauli_matrix(eta)
            res = float(np.linalg.norm(p.dense @ (em @ p.dense @ em)))
        out.append((eta, res))
    return out


def stabilizer_containment(p: CodeProjector, tol: float | None = None) -> list[PauliString]:
    """Signed labels s*E with (s E) P = P, i.e. fixing every vector of the code.

    Tr(s E P) = K is necessary and Tr(E P) = 2^n c_E is real, so only s = +-1 with
    |c_E| close to K / 2^n can qualify; those candidates are then checked fully.
    """
    tol = p.tol(tol)
    m = p.expansion
    N = 1 << p.n
    slack = tol * N**0.5
    out = []
    for lab in all_labels(p.n):
        c = m.terms.get(lab, 0)
        for phase, s in ((0, 1), (2, -1)):
            if abs(s * N * c - p.K) > slack:
                continue
            e = PauliString.from_label(lab, p.n, phase)
            if p.exact:
                diff = m.left_mul(e) - m
                ok = diff.norm_sq() <= tol * tol
            else:
                ok = np.linalg.norm(pauli_matrix(e) @ p.dense - p.dense) <= tol
            if ok:
                out.append(e)
    return out


def reconstruct_from_cosets(
    p0: CodeProjector, reps: Sequence[PauliString | str], tol: float | None = None
) -> CodeProjector:
    """sum_r r P0 r^dagger over coset representatives; translates must be orthogonal."""
    if p0.K != 1:
        raise CodeError("the seed projector must have rank 1")
    reps = [parse_pauli(r) if isinstance(r, str) else r for r in reps]
    tol = p0.tol(tol)
    translates = [p0.expansion.conjugated_by(r) for r in reps]
    for i in range(len(translates)):
        for j in range(i + 1, len(translates)):
            overlap = translates[i] @ translates[j]
            if p0.exact:
                bad = overlap.norm_sq() > tol * tol
            else:
                bad = overlap.frobenius_norm() > tol
            if bad:
                raise CodeError(f"translates by {reps[i]} and {reps[j]} are not orthogonal")
    total = translates[0]
    for t in translates[1:]:
        total = total + t
    return CodeProjector(p0.n, len(reps), total)


# the code itself ------------------------------------------------------------------------


def paper_expansion() -> PauliExpansion:
    sixteenth = Fraction(1, 16)
    terms = {"IIIII": 3 * sixteenth, "ZZZZZ": -2 * sixteenth}
    for base, c in (("IZYYZ", 1), ("IXZZX", 1), ("IYXXY", -1), ("ZXYYX", 2)):
        p = parse_pauli(base)
        for s in range(5):
            terms[cyclic_shift(p, s).letters] = c * sixteenth
    return PauliExpansion.from_strings(terms)


def paper_projector() -> CodeProjector:
    p = CodeProjector.from_expansion(paper_expansion(), tol=0)
    if p.K != 6:
        raise CodeError(f"expected rank 6, got {p.K}")  # pragma: no cover
    return p


def _shifts(bits: str) -> list[str]:
    return [shift_bitstring(bits, s) for s in range(len(bits))]


def paper_state_x() -> np.ndarray:
    """|00000> - (|00011>)cyc + (|00101>)cyc - (|01111>)cyc, normalised."""
    kets = {"00000": 1}
    for bits, sign in (("00011", -1), ("00101", 1), ("01111", -1)):
        for k in _shifts(bits):
            kets[k] = sign
    return state_from_kets(kets) / 4


_EQ4_TERMS = (
    "+00001 -00010 -00100 -01000 -10000 "
    "+00111 -01110 -11100 +11001 +10011 "
    "-01011 +10110 -01101 +11010 -10101 "
    "-11111"
)


def paper_state_y(shift: int = 0) -> np.ndarray:
    kets = {}
    for tok in _EQ4_TERMS.split():
        kets[shift_bitstring(tok[1:], shift)] = 1 if tok[0] == "+" else -1
    return state_from_kets(kets) / 4


def paper_basis() -> list[np.ndarray]:
    """The six orthonormal code vectors: |x> and the five shifts of the second vector."""
    return [paper_state_x()] + [paper_state_y(s) for s in range(5)]


def basis_check(p: CodeProjector, basis: Sequence[np.ndarray], tol: float = 1e-12) -> tuple[float, float]:
    """(max ||P v - v||, ||Gram - I||) for a proposed code basis."""
    vs = np.array(basis)
    gram = vs.conj() @ vs.T
    gram_err = float(np.linalg.norm(gram - np.eye(len(basis))))
    fix_err = max(float(np.linalg.norm(p.dense @ v - v)) for v in basis)
    return fix_err, gram_err


# reports ------------------------------------------------------------------------------------


@dataclass
class VerificationReport:
    n: int
    K: int
    trace: float
    projector_residual: float
    distance: int
    pure: bool
    enumerator_A: list
    enumerator_B: list
    checks: dict = field(default_factory=dict)
    witness: str | None = None
    erasure_residuals: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return all(v is not False for v in self.checks.values())

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "K": self.K,
            "trace": self.trace,
            "projector_residual": self.projector_residual,
            "distance": self.distance,
            "pure": self.pure,
            "enumerator_A": self.enumerator_A,
            "enumerator_B": self.enumerator_B,
            "checks": dict(self.checks),
        }


def _json_number(a):
    if isinstance(a, int):
        return a
    if isinstance(a, Fraction):
        return a.numerator if a.denominator == 1 else float(a)
    return float(a)


def report(
    p: CodeProjector,
    basis: Sequence[np.ndarray] | None = None,
    target_A: Sequence | None = None,
    tol: float | None = None,
) -> VerificationReport:
    tol = p.tol(tol)
    check = verify_projector(p.expansion, tol)
    A = enumerator_A(p.expansion)
    B = enumerator_B(p.expansion)
    distance, witness = distance_witness(p, tol)
    pure = all(abs(A[d]) <= tol for d in range(1, min(distance, p.n + 1)))
    erasure = single_error_orthogonality(p, tol)
    containment = stabilizer_containment(p, tol)
    enum_tol = max(tol, 1e-8) if not p.exact else 0
    if target_A is not None:
        enum_ok = A.matches(target_A, enum_tol)
    else:
        enum_ok = abs(A[0] - p.K**2) <= enum_tol and all(
            A[d] >= -enum_tol and p.K * B[d] - A[d] >= -enum_tol for d in range(p.n + 1)
        )
    checks = {
        "projector": check.is_projector,
        "erasure": all(r <= tol for _, r in erasure),
        "containment_trivial": [str(e) for e in containment] == ["I" * p.n],
        "basis_ok": None,
        "enumerator": bool(enum_ok),
    }
    if basis is not None:
        fix_err, gram_err = basis_check(p, basis)
        checks["basis_ok"] = bool(len(basis) == p.K and fix_err <= 1e-12 and gram_err <= 1e-12)
    return VerificationReport(
        n=p.n,
        K=p.K,
        trace=check.trace,
        projector_residual=check.residual,
        distance=distance,
        pure=bool(pure),
        enumerator_A=[_json_number(a) for a in A],
        enumerator_B=[_json_number(b) for b in B],
        checks=checks,
        witness=str(witness) if witness is not None else None,
        erasure_residuals={str(e): r for e, r in erasure},
    )
