import numpy as np
import pytest

from nonadditive.analysis import PAPER_ENUMERATOR, enumerator_A
from nonadditive.discovery import (
    DEFAULT_SEED,
    DiscoveryConfig,
    EmptyWeightClass,
    discover,
    enforce_enumerator,
    polish_scalar,
    polish_step,
    random_expansion,
)
from nonadditive.operators import PauliExpansion
from nonadditive.pauli import label_y_count


def test_random_start_is_deterministic_and_real():
    cfg = DiscoveryConfig(seed=11)
    a, b = random_expansion(cfg, 3), random_expansion(cfg, 3)
    assert a.equals(b)
    assert not a.equals(random_expansion(cfg, 4), 1e-6)
    assert a.coefficient((0, 0)) == 6 / 32
    assert all(label_y_count(k) % 2 == 0 for k in a.terms)
    assert not a.imag
    complex_start = random_expansion(DiscoveryConfig(seed=11, real_mode=False))
    assert any(label_y_count(k) % 2 for k in complex_start.terms)


def test_enforce_hits_target_and_is_idempotent():
    m = random_expansion(DiscoveryConfig(seed=5))
    once = enforce_enumerator(m, PAPER_ENUMERATOR)
    assert np.allclose(enumerator_A(once).as_floats(), PAPER_ENUMERATOR, rtol=1e-12)
    twice = enforce_enumerator(once, PAPER_ENUMERATOR)
    assert once.distance(twice) <= 1e-14 * once.frobenius_norm()
    assert not any(bin(k[0] | k[1]).count("1") in (1, 2, 3) for k in once.terms)


def test_enforce_empty_class():
    m = PauliExpansion.from_strings({"II": 0.5, "XX": 0.1})
    with pytest.raises(EmptyWeightClass) as info:
        enforce_enumerator(m, (1, 2, 0))
    assert info.value.weight == 1


def test_polish_fixes_projectors(P):
    assert polish_step(P.expansion).equals(P.expansion)
    assert polish_scalar(0) == 0 and polish_scalar(1) == 1
    golden = (5**0.5 - 1) / 2
    assert polish_scalar(golden) == pytest.approx(golden)
    assert polish_scalar(0.7) > 0.7 and polish_scalar(0.5) < 0.5


def test_float_polish_matches_dense():
    m = random_expansion(DiscoveryConfig(seed=2)).scale(0.05)
    d = m.to_dense()
    d2 = d @ d
    assert np.allclose(polish_step(m).to_dense(), 2 * d2 - d2 @ d2)


def test_config_validation():
    with pytest.raises(ValueError):
        DiscoveryConfig(target_A=(35, 0, 0, 0, 60, 96))
    with pytest.raises(ValueError):
        DiscoveryConfig(target_A=(36, 0, 0, 60, 96))
    with pytest.raises(ValueError):
        DiscoveryConfig(restarts=0)


def test_default_seed_converges():
    result = discover(DiscoveryConfig(seed=DEFAULT_SEED))
    assert result.success
    assert result.report.distance == 2 and result.report.K == 6 and result.report.passed
    assert result.traces[-1].status.startswith("converged")
    lines = result.trace_text().splitlines()
    first = lines[0].split()
    assert len(first) == 4 and first[0] == str(result.restart)


def test_concurrency_does_not_change_the_answer():
    cfg = DiscoveryConfig(seed=0, restarts=12)
    serial = discover(cfg)
    cfg.workers = 4
    parallel = discover(cfg)
    assert serial.restart == parallel.restart
    assert serial.projector.expansion.equals(parallel.projector.expansion)
    assert serial.trace_text() == parallel.trace_text()


def test_no_iterations_means_failure():
    result = discover(DiscoveryConfig(max_iters=0, restarts=2))
    assert not result.success and len(result.traces) == 2
