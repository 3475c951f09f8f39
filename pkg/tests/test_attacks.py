"""Attack simulations: key recovery from superposition keys, collision
baselines, and the optimal distinguishing game."""
import numpy as np
import pytest

from qpke import bits
from qpke.attacks import (ATTACK_CSV_HEADER, AttackOutcome, DistinguisherOutcome,
                          ciphertext_distinguisher, owt_inversion_baseline,
                          pan10_key_recovery, pan10_measure_equation,
                          pan10_shared_key_stream)
from qpke.qsym import TwoTermState
from qpke.schemes import SchemeId, keygen


def test_measure_equation_support():
    # for (|i> + |i^k>)/sqrt(2) every Hadamard-basis outcome y satisfies y.k=0
    rng = np.random.default_rng(60)
    for _ in range(200):
        n = int(rng.integers(1, 6))
        k = int(rng.integers(1, 1 << n))
        i = int(rng.integers(0, 1 << n))
        y = pan10_measure_equation(TwoTermState(n, i, k), rng)
        assert bits.dot(y, k) == 0


def test_measure_equation_flipped_phase_support():
    # with relative phase -1 the support flips to y.k=1
    rng = np.random.default_rng(61)
    for _ in range(100):
        n = int(rng.integers(1, 5))
        k = int(rng.integers(1, 1 << n))
        y = pan10_measure_equation(TwoTermState(n, 0, k, rel_phase=2), rng)
        assert bits.dot(y, k) == 1


def test_measure_equation_outcomes_cover_the_orthogonal_space():
    rng = np.random.default_rng(62)
    counts = {0b00: 0, 0b10: 0}
    for _ in range(400):
        y = pan10_measure_equation(TwoTermState(2, 0b11, 0b01), rng)
        counts[y] += 1
    assert set(counts) == {0b00, 0b10}
    assert min(counts.values()) > 150  # ~200 each, > 6 sigma of slack


def test_shared_stream_repeats_one_key():
    rng = np.random.default_rng(63)
    stream = pan10_shared_key_stream(4, rng)
    first = next(stream)
    for _ in range(3):
        pk = next(stream)
        assert pk.label == first.label
        assert not pk.consumed
        assert pk.quantum.i == first.quantum.i
        assert pk.quantum.k == first.quantum.k


def test_key_recovery_runs():
    rng = np.random.default_rng(64)
    n = 5
    copies = []
    for run in range(100):
        out = pan10_key_recovery(pan10_shared_key_stream(n, rng), 50, rng, seed=run)
        assert out.success
        assert out.recovered is not None and bits.parity(out.recovered) == 1
        assert len(out.equations) == out.copies_used
        for y in out.equations:
            assert bits.dot(y, out.recovered) == 0
        copies.append(out.copies_used)
    mean = float(np.mean(copies))
    assert n - 1 <= mean <= n + 3
    assert min(copies) >= n - 1  # fewer equations cannot pin down a line


def test_key_recovery_budget_exhausted_is_failure():
    rng = np.random.default_rng(65)
    out = pan10_key_recovery(pan10_shared_key_stream(5, rng), 2, rng)
    assert not out.success
    assert out.recovered is None
    assert out.copies_used == 2


def test_key_recovery_input_validation():
    rng = np.random.default_rng(66)
    with pytest.raises(ValueError):
        pan10_key_recovery(iter([]), 5, rng)
    _, (pk,) = keygen(SchemeId.A, 3, rng)
    with pytest.raises(ValueError):
        pan10_key_recovery(iter([pk]), 5, rng)


def test_attack_outcome_invariants():
    with pytest.raises(ValueError):
        AttackOutcome("t", 3, True, 4, 0)
    with pytest.raises(ValueError):
        AttackOutcome("t", 3, True, 4, 0b011, equations=[0b001])
    out = AttackOutcome("t", 3, True, 4, 0b110, equations=[0b001, 0b111])
    assert out.to_json()["recovered"] == "110"
    assert out.to_json()["equations"] == ["001", "111"]
    assert out.to_csv_row() == "t,3,4,true,"
    failed = AttackOutcome("t", 3, False, 9, None, seed=5)
    assert failed.to_json()["recovered"] is None
    assert failed.to_csv_row() == "t,3,9,false,5"
    assert ATTACK_CSV_HEADER.split(",") == ["target", "n", "copies_used", "success", "seed"]


def test_owt_collision_rate():
    rng = np.random.default_rng(67)
    # the helper itself enforces the 3-sigma band when f is None
    rate = owt_inversion_baseline(1, 4000, rng)
    assert 0.0 < rate < 1.0
    rate = owt_inversion_baseline(4, 4000, rng)
    assert rate < 0.2


def test_owt_constant_function_always_collides():
    rng = np.random.default_rng(68)
    assert owt_inversion_baseline(3, 50, rng, f=lambda x: 7) == 1.0


def test_owt_validation():
    rng = np.random.default_rng(69)
    for bad_n in (0, 21):
        with pytest.raises(ValueError):
            owt_inversion_baseline(bad_n, 10, rng)
    with pytest.raises(ValueError):
        owt_inversion_baseline(3, 0, rng)


def test_distinguisher_b_is_blind():
    rng = np.random.default_rng(70)
    out = ciphertext_distinguisher(SchemeId.B, 2, 3000, rng, seed=70)
    assert abs(out.analytic - 0.5) < 1e-9
    assert out.success
    assert abs(out.empirical - 0.5) <= 3 * out.sigma


def test_distinguisher_a_beats_coin_flips():
    rng = np.random.default_rng(71)
    out = ciphertext_distinguisher(SchemeId.A, 1, 4000, rng, seed=71)
    assert abs(out.analytic - (0.5 + np.sqrt(2) / 4)) < 1e-12
    assert out.success
    assert out.empirical > 0.75


def test_distinguisher_m2_is_blind():
    rng = np.random.default_rng(72)
    out = ciphertext_distinguisher(SchemeId.M2, 2, 3000, rng)
    assert abs(out.analytic - 0.5) < 1e-9
    assert out.success


def test_distinguisher_rejects_other_schemes():
    rng = np.random.default_rng(73)
    for scheme in (SchemeId.M1, SchemeId.ENH, SchemeId.PAN10):
        with pytest.raises(ValueError):
            ciphertext_distinguisher(scheme, 2, 10, rng)


def test_distinguisher_outcome_serialization():
    out = DistinguisherOutcome("distinguish", "a", 2, 100, 0.84, 0.85, 0.04, True, 9)
    blob = out.to_json()
    assert blob["scheme"] == "a" and blob["samples"] == 100 and blob["success"]
    assert out.to_csv_row() == "distinguish,2,100,true,9"
