"""Randomized search for a projector with a prescribed weight enumerator.

Each restart starts from a random Hermitian operator written in the Pauli
basis and alternates two steps: rescale every weight class so the A-enumerator
equals the target, then replace M by 2M^2 - M^4, which pushes eigenvalues
below (sqrt(5)-1)/2 toward 0 and those above it toward 1.

For an extremal target such as (36, 0, 0, 0, 60, 96) that alternation only
creeps toward its limit, because the enumerator constraints meet the set of
rank-K projectors tangentially.  So the last iterate's top-K eigenvectors are
handed to a Gauss-Newton solve of the Knill-Laflamme conditions
W^dag E W = lambda_E I for every error E below the distance the target
enumerator implies.  Those equations are regular modulo local gauge
freedom, so the refinement converges quadratically when it converges at all.
"""

from __future__ import annotations

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np

from .analysis import (
    PAPER_ENUMERATOR,
    CodeError,
    CodeProjector,
    VerificationReport,
    enumerator_A,
    implied_distance,
    report,
    verify_projector,
)
from .operators import (
    PauliExpansion,
    dense_to_vector,
    index_labels,
    label_weights,
    label_y_counts,
    pauli_matrix,
    vector_to_dense,
)
from .pauli import PauliString, all_labels, label_weight

logger = logging.getLogger(__name__)

# restart 0 of this seed converges; the acceptance suite checks it
DEFAULT_SEED = 4
# seeds exercised by the acceptance suite
DOCUMENTED_SEEDS = tuple(range(1, 11))


class EmptyWeightClass(ValueError):
    def __init__(self, d: int):
        self.weight = d
        super().__init__(f"weight class {d} is empty but its target is positive")


@dataclass
class DiscoveryConfig:
    n: int = 5
    K: int = 6
    target_A: tuple = PAPER_ENUMERATOR
    real_mode: bool = True
    seed: int = DEFAULT_SEED
    max_iters: int = 500
    restarts: int = 20
    tol: float = 1e-8
    refine_iters: int = 30
    workers: int = 1

    def __post_init__(self):
        self.target_A = tuple(self.target_A)
        if len(self.target_A) != self.n + 1:
            raise ValueError(f"target enumerator needs {self.n + 1} coefficients")
        if any(a < 0 for a in self.target_A):
            raise ValueError("target enumerator coefficients must be nonnegative")
        if self.target_A[0] != self.K**2:
            raise ValueError(f"target A_0 must equal K^2 = {self.K**2}")
        if self.max_iters < 0 or self.restarts < 1:
            raise ValueError("max_iters must be >= 0 and restarts >= 1")


@dataclass
class TraceEntry:
    iteration: int
    residual: float
    enum_dev: float
    stage: str = "polish"


@dataclass
class DiscoveryTrace:
    restart: int
    entries: list[TraceEntry] = field(default_factory=list)
    status: str = "pending"

    def lines(self) -> list[str]:
        out = []
        stage = "polish"
        for e in self.entries:
            if e.stage != stage:
                out.append(f"# restart {self.restart}: {e.stage} stage")
                stage = e.stage
            out.append(f"{self.restart} {e.iteration} {e.residual:.6e} {e.enum_dev:.6e}")
        out.append(f"# restart {self.restart}: {self.status}")
        return out


@dataclass
class DiscoveryResult:
    projector: CodeProjector | None
    traces: list[DiscoveryTrace]
    report: VerificationReport | None = None
    restart: int | None = None

    @property
    def success(self) -> bool:
        return self.projector is not None

    def trace_text(self) -> str:
        return "\n".join(line for t in self.traces for line in t.lines()) + "\n"


# vector-level steps ------------------------------------------------------------------


def _class_masses(vec: np.ndarray, n: int) -> np.ndarray:
    return np.bincount(label_weights(n), weights=np.abs(vec) ** 2, minlength=n + 1)


def _enforce_vec(vec: np.ndarray, n: int, target: Sequence[float]) -> np.ndarray:
    weights = label_weights(n)
    current = _class_masses(vec, n) * 4**n
    scale = np.zeros(n + 1)
    for d, t in enumerate(target):
        if t > 0:
            if current[d] == 0:
                raise EmptyWeightClass(d)
            scale[d] = np.sqrt(t / current[d])
    return vec * scale[weights]


def _polish_dense(m: np.ndarray) -> np.ndarray:
    m2 = m @ m
    return 2 * m2 - m2 @ m2


def _enum_dev(vec: np.ndarray, n: int, target: Sequence[float]) -> float:
    return float(np.max(np.abs(_class_masses(vec, n) * 4**n - np.asarray(target, dtype=float))))


def _random_vector(rng: np.random.Generator, n: int, K: int, real_mode: bool) -> np.ndarray:
    vec = rng.standard_normal(4**n)
    if real_mode:
        vec[label_y_counts(n) % 2 == 1] = 0.0
    vec[0] = K / 2**n
    return vec


def _restart_rng(seed: int, restart: int) -> np.random.Generator:
    return np.random.default_rng([seed, restart])


# public operations ----------------------------------------------------------------------


def random_expansion(cfg: DiscoveryConfig, restart: int = 0) -> PauliExpansion:
    """Standard-normal coefficients from the restart's stream; identity set to K/2^n."""
    vec = _random_vector(_restart_rng(cfg.seed, restart), cfg.n, cfg.K, cfg.real_mode)
    return PauliExpansion.from_vector(cfg.n, vec, atol=0.0)


def enforce_enumerator(m: PauliExpansion, target: Sequence) -> PauliExpansion:
    """Rescale each weight class so that enumerator_A(result) == target."""
    if len(target) != m.n + 1:
        raise ValueError(f"target needs {m.n + 1} coefficients")
    masses = m.weight_class_masses()
    scale = []
    for d, t in enumerate(target):
        if t == 0:
            scale.append(0)
        elif masses[d] == 0:
            raise EmptyWeightClass(d)
        else:
            scale.append(float(np.sqrt(float(t) / (4**m.n * float(masses[d])))))
    return PauliExpansion(
        m.n,
        {k: v * scale[label_weight(k)] for k, v in m.terms.items()},
        {k: v * scale[label_weight(k)] for k, v in m.imag.items()},
    )


def polish_step(m: PauliExpansion) -> PauliExpansion:
    """2M^2 - M^4; exact for exact input."""
    if m.is_exact:
        m2 = m @ m
        return m2.scale(2) - m2 @ m2
    vec = dense_to_vector(_polish_dense(vector_to_dense(m.to_vector(), m.n)), m.n)
    if m.is_hermitian():
        vec = vec.real
    return PauliExpansion.from_vector(m.n, vec, atol=0.0)


def polish_scalar(lam: float) -> float:
    return 2 * lam**2 - lam**4


# Knill-Laflamme refinement ----------------------------------------------------------------


def _error_matrices(n: int, below: int) -> np.ndarray:
    errs = [
        pauli_matrix(PauliString.from_label(lab, n))
        for lab in all_labels(n)
        if 1 <= label_weight(lab) < below
    ]
    return np.array(errs) if errs else np.zeros((0, 1 << n, 1 << n), dtype=complex)


def _kl_residual(W: np.ndarray, Es: np.ndarray, K: int) -> np.ndarray:
    R = W.conj().T @ (Es @ W)
    lam = np.einsum("eii->e", R) / K
    return R - lam[:, None, None] * np.eye(K)


def _kl_jacobian(W: np.ndarray, Wp: np.ndarray, Es: np.ndarray, K: int, real: bool) -> np.ndarray:
    m = Es.shape[0]
    A = Wp.shape[1]
    G = Wp.conj().T @ (Es @ W)  # (m, A, K)
    Gt = G.transpose(0, 2, 1)  # (m, K, A)
    Gc = G.conj().transpose(0, 2, 1)
    blocks = [(Gt, Gc)] if real else [(Gt, Gc), (-1j * Gt, 1j * Gc)]
    cols = []
    for first, second in blocks:
        # perturbation W -> W + Wp X with X = e_a e_b^T (times i for the second block)
        J = np.zeros((m, K, K, A, K), dtype=complex)
        for b in range(K):
            J[:, b, :, :, b] += first
            J[:, :, b, :, b] += second
        tr = np.einsum("eiiab->eab", J) / K
        J -= np.einsum("eab,ij->eijab", tr, np.eye(K))
        cols.append(J.reshape(m * K * K, A * K))
    J = np.hstack(cols)
    return np.vstack([J.real, J.imag])


def kl_refine(
    W: np.ndarray,
    Es: np.ndarray,
    K: int,
    real: bool,
    iters: int,
    record=None,
    tol: float = 1e-11,
):
    """Gauss-Newton on W^dag E W = lambda_E I over orthonormal N x K frames W."""
    N = W.shape[0]
    r = float(np.linalg.norm(_kl_residual(W, Es, K)))
    for it in range(iters):
        if record is not None:
            record(it, r, W)
        if r <= tol:
            return W, r, True
        Q = np.linalg.qr(W, mode="complete")[0]
        Wp = Q[:, K:]
        J = _kl_jacobian(W, Wp, Es, K, real)
        R = _kl_residual(W, Es, K).reshape(-1)
        rhs = np.concatenate([R.real, R.imag])
        x = np.linalg.lstsq(J, -rhs, rcond=None)[0]
        A = N - K
        X = x[: A * K].reshape(A, K).astype(complex)
        if not real:
            X = X + 1j * x[A * K:].reshape(A, K)
        step = 1.0
        for _ in range(6):
            Wn = np.linalg.qr(W + step * (Wp @ X))[0]
            if real:
                Wn = Wn.real
            rn = float(np.linalg.norm(_kl_residual(Wn, Es, K)))
            if rn < r:
                break
            step /= 2
        else:
            return W, r, False
        W, r = Wn, rn
        # a frame this far off after several steps is outside the quadratic basin
        if it >= 8 and r > 1e-3:
            return W, r, False
    return W, r, r <= tol


# the search -------------------------------------------------------------------------------


def _rationalize(vec: np.ndarray, n: int, target: Sequence, max_den: int = 64) -> PauliExpansion | None:
    """Snap to nearby small-denominator rationals; keep only an exact projector with the exact target."""
    labels = index_labels(n)
    terms = {}
    for i, c in enumerate(vec):
        if abs(c) < 1e-12:
            continue
        f = Fraction(float(c)).limit_denominator(max_den)
        if abs(float(f) - c) > 1e-9:
            return None
        terms[labels[i]] = f
    m = PauliExpansion(n, terms)
    check = verify_projector(m, tol=0)
    if check.is_projector and enumerator_A(m).matches(target):
        return m
    return None


def _run_restart(cfg: DiscoveryConfig, restart: int, Es: np.ndarray):
    n, K = cfg.n, cfg.K
    target = [float(a) for a in cfg.target_A]
    rng = _restart_rng(cfg.seed, restart)
    vec = _random_vector(rng, n, K, cfg.real_mode)
    trace = DiscoveryTrace(restart)
    weights = label_weights(n)
    real_labels = label_y_counts(n) % 2 == 0
    m = None
    for it in range(cfg.max_iters):
        while True:
            try:
                vec = _enforce_vec(vec, n, target)
                break
            except EmptyWeightClass as exc:
                cls = weights == exc.weight
                if cfg.real_mode:
                    cls &= real_labels
                vec[cls] = rng.standard_normal(int(cls.sum()))
        m = _polish_dense(vector_to_dense(vec, n))
        residual = float(np.linalg.norm(m @ m - m))
        vec = dense_to_vector(m, n)
        if cfg.real_mode:
            vec = vec.real
        trace.entries.append(TraceEntry(it, residual, _enum_dev(vec, n, target)))
        if residual <= cfg.tol:
            break
    if m is None:
        trace.status = "no iterations"
        return trace, None

    evals, evecs = np.linalg.eigh((m + m.conj().T) / 2)
    W = evecs[:, -K:]
    if cfg.real_mode:
        W = W.real
    base = len(trace.entries)

    def record(i, r, frame):
        p = frame @ frame.conj().T
        v = dense_to_vector(p, n)
        trace.entries.append(TraceEntry(base + i, r, _enum_dev(v, n, target), "refine"))

    W, kl_res, ok = kl_refine(W, Es, K, cfg.real_mode, cfg.refine_iters, record)
    if not ok:
        trace.status = f"refinement stalled (KL residual {kl_res:.3e})"
        return trace, None

    p = W @ W.conj().T
    vec = dense_to_vector(p, n)
    if cfg.real_mode:
        vec = vec.real
    try:
        vec = _enforce_vec(vec, n, target)
    except EmptyWeightClass:
        trace.status = "refined frame misses a weight class"
        return trace, None
    final = vector_to_dense(vec, n)
    residual = float(np.linalg.norm(final @ final - final))
    if residual > cfg.tol:
        trace.status = f"final projector residual {residual:.3e} above tol"
        return trace, None

    expansion = _rationalize(vec, n, cfg.target_A)
    if expansion is None:
        expansion = PauliExpansion.from_vector(n, vec, atol=0.0)
    try:
        proj = CodeProjector.from_expansion(expansion, tol=1e-10)
    except CodeError as exc:
        trace.status = f"rejected: {exc}"
        return trace, None
    rep = report(proj, target_A=cfg.target_A, tol=1e-10)
    want_d = implied_distance(cfg.target_A, K, tol=1e-9)
    if not (rep.passed and rep.K == K and rep.distance == want_d):
        trace.status = f"rejected: K={rep.K} d={rep.distance} checks={rep.checks}"
        return trace, None
    trace.status = f"converged: (({n},{K},{rep.distance})) code"
    return trace, (proj, rep)


def discover(cfg: DiscoveryConfig) -> DiscoveryResult:
    """Run restarts in index order; the lowest-index verified restart wins."""
    Es = _error_matrices(cfg.n, implied_distance(cfg.target_A, cfg.K, tol=1e-9))
    traces: list[DiscoveryTrace] = []
    if cfg.workers > 1:
        with ThreadPoolExecutor(cfg.workers) as pool:
            futures = [pool.submit(_run_restart, cfg, r, Es) for r in range(cfg.restarts)]
            for r, fut in enumerate(futures):
                trace, found = fut.result()
                traces.append(trace)
                if found is not None:
                    for f in futures[r + 1:]:
                        f.cancel()
                    return DiscoveryResult(found[0], traces, found[1], r)
        return DiscoveryResult(None, traces)
    for r in range(cfg.restarts):
        trace, found = _run_restart(cfg, r, Es)
        logger.info("restart %d: %s", r, trace.status)
        traces.append(trace)
        if found is not None:
            return DiscoveryResult(found[0], traces, found[1], r)
    return DiscoveryResult(None, traces)
