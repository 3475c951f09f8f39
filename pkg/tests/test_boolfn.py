"""ANF machinery: generation by coin tossing, balance, GF(2) linear algebra.

The evaluation oracle used throughout is a deliberately naive per-variable
loop, so the vectorized truth tables and the int-mask evaluator are checked
against an independent route.
"""
import numpy as np
import pytest

from qpke import bits
from qpke.boolfn import (AnfFunction, GenerationError, RandomOracle,
                         generate_balanced_f2, generate_random, gf2_nullspace,
                         linearize_monomial)


def naive_evaluate(f, s):
    out = 0
    for b, tset in enumerate(f.terms):
        bit = (f.constants >> (f.n_out - 1 - b)) & 1
        for mask in tset:
            prod = 1
            for a in range(f.m):
                sel = (mask >> (f.m - 1 - a)) & 1
                if sel and not ((s >> (f.m - 1 - a)) & 1):
                    prod = 0
            bit ^= prod
        out = (out << 1) | bit
    return out


class AllHeadsRng:
    """Stands in for a Generator whose every coin toss comes up 1."""

    def integers(self, low, high):
        return high - 1


def test_constant_zero_function():
    f = AnfFunction(3, 2, (frozenset(), frozenset()))
    assert all(f.evaluate(s) == 0 for s in range(8))


def test_single_monomial_and_of_ones():
    f = AnfFunction(2, 1, (frozenset({0b11}),))
    assert f.evaluate(0b11) == 1
    assert [f.evaluate(s) for s in range(4)] == [0, 0, 0, 1]


def test_hand_xor_example():
    # output bit = s1 xor s1*s2; at s=11 both monomials fire and cancel
    f = AnfFunction(2, 1, (frozenset({0b10, 0b11}),))
    assert f.evaluate(0b11) == 0
    assert f.evaluate(0b10) == 1


def test_evaluate_against_naive_oracle():
    rng = np.random.default_rng(20)
    for _ in range(200):
        m = int(rng.integers(1, 7))
        n_out = int(rng.integers(1, 4))
        f = generate_random(m, n_out, rng, terms_per_output=int(rng.integers(0, 2 * m + 1)),
                            random_constants=bool(rng.integers(0, 2)))
        for s in range(1 << m):
            assert f.evaluate(s) == naive_evaluate(f, s)


def test_output_bit_table_matches_evaluate():
    rng = np.random.default_rng(21)
    for _ in range(100):
        m = int(rng.integers(1, 8))
        n_out = int(rng.integers(1, 3))
        f = generate_random(m, n_out, rng, random_constants=True)
        for b in range(n_out):
            table = f.output_bit_table(b)
            want = [bits.bit_at(f.evaluate(s), b, n_out) for s in range(1 << m)]
            assert table.astype(int).tolist() == want


def test_anf_validation():
    with pytest.raises(ValueError):
        AnfFunction(0, 1, (frozenset(),))
    with pytest.raises(ValueError):
        AnfFunction(2, 2, (frozenset(),))  # one term set missing
    with pytest.raises(ValueError):
        AnfFunction(2, 1, (frozenset({4}),))  # mask out of range
    with pytest.raises(ValueError):
        AnfFunction(2, 1, (frozenset(),), constants=2)
    f = AnfFunction(2, 1, (frozenset(),))
    with pytest.raises(ValueError):
        f.evaluate(4)


def test_generate_random_forced_coins():
    # all-heads coins with one term per output: the full monomial s1...sm
    f = generate_random(5, 3, AllHeadsRng(), terms_per_output=1)
    assert f.terms == (frozenset({0b11111}),) * 3
    assert f.constants == 0
    # duplicate draws cancel pairwise: two all-heads terms leave nothing
    f = generate_random(4, 1, AllHeadsRng(), terms_per_output=2)
    assert f.terms == (frozenset(),)


def test_generate_random_structure():
    rng = np.random.default_rng(22)
    for _ in range(100):
        m = int(rng.integers(1, 10))
        n_out = int(rng.integers(1, 5))
        t = int(rng.integers(0, 12))
        f = generate_random(m, n_out, rng, terms_per_output=t)
        assert f.m == m and f.n_out == n_out
        assert len(f.terms) == n_out
        for tset in f.terms:
            assert len(tset) <= t
            assert (len(tset) - t) % 2 == 0  # cancellation removes pairs
    assert generate_random(4, 2, rng).constants == 0


def test_flip_constant_involution():
    rng = np.random.default_rng(23)
    f = generate_random(4, 2, rng, random_constants=True)
    assert f.flip_constant(1).flip_constant(1) == f
    g = f.flip_constant(0)
    for s in range(16):
        assert g.evaluate(s) == f.evaluate(s) ^ 0b10


def test_balanced_f2_exhaustive():
    rng = np.random.default_rng(24)
    for m in (2, 4, 6):
        for _ in range(10):
            f = generate_balanced_f2(m, rng)
            assert f.n_out == 1
            table = f.output_bit_table(0)
            assert int(np.count_nonzero(table)) == 1 << (m - 1)
            # closure: the complement is balanced too and flips every output
            g = f.flip_constant(0)
            assert g.is_balanced_bit(0)
            assert all(g.evaluate(s) == 1 - f.evaluate(s) for s in range(1 << m))


def test_balanced_f2_wide_inputs():
    # dense candidate draws keep rejection workable well past m=10
    rng = np.random.default_rng(25)
    f = generate_balanced_f2(12, rng)
    assert f.is_balanced_bit(0)


def test_balanced_f2_constant_coin():
    rng = np.random.default_rng(26)
    consts = [generate_balanced_f2(4, rng).constants for _ in range(60)]
    assert set(consts) == {0, 1}


def test_balanced_f2_errors():
    rng = np.random.default_rng(27)
    with pytest.raises(ValueError):
        generate_balanced_f2(21, rng)
    with pytest.raises(GenerationError):
        generate_balanced_f2(4, rng, max_attempts=0)


def test_uniformity_oracle_vs_anf_modes():
    """The random-function model is uniform; sparse ANF visibly is not.

    Output bits of an m-term ANF are XORs of ~m rare indicators, so F(s)
    leans toward 0; the chi-square statistic sits an order of magnitude
    above the 0.01 critical value. Denser ANF converges back to uniform.
    """
    scipy_stats = pytest.importorskip("scipy.stats")
    crit = scipy_stats.chi2.ppf(0.99, 15)

    def chi2_for(draw, seed):
        r = np.random.default_rng(seed)
        counts = np.zeros(16)
        for _ in range(500):
            counts[draw(r)] += 1
        return float(((counts - 31.25) ** 2 / 31.25).sum())

    oracle = chi2_for(lambda r: RandomOracle(8, 4, r)(bits.rand_bits(r, 8)), 0)
    sparse = chi2_for(lambda r: generate_random(8, 4, r).evaluate(bits.rand_bits(r, 8)), 0)
    dense = chi2_for(lambda r: generate_random(8, 4, r, terms_per_output=64)
                     .evaluate(bits.rand_bits(r, 8)), 0)
    assert oracle < crit
    assert dense < crit
    assert sparse > 10 * crit


def test_linearize_monomial():
    assert linearize_monomial(0, 0) == 1
    assert linearize_monomial(1, 0) == 1
    assert linearize_monomial(0, 1) == 0
    assert linearize_monomial(1, 1) == 1


def naive_rank(rows, n):
    rows = list(rows)
    rank = 0
    for c in range(n - 1, -1, -1):
        piv = next((idx for idx in range(rank, len(rows)) if (rows[idx] >> c) & 1), None)
        if piv is None:
            continue
        rows[rank], rows[piv] = rows[piv], rows[rank]
        for idx in range(len(rows)):
            if idx != rank and (rows[idx] >> c) & 1:
                rows[idx] ^= rows[rank]
        rank += 1
    return rank


def test_nullspace_worked_example():
    assert gf2_nullspace([0b110, 0b011], 3) == [0b111]


def test_nullspace_no_rows_gives_standard_basis():
    assert sorted(gf2_nullspace([], 3)) == [0b001, 0b010, 0b100]


def test_nullspace_properties():
    rng = np.random.default_rng(28)
    for _ in range(200):
        n = int(rng.integers(1, 11))
        rows = [bits.rand_bits(rng, n) for _ in range(int(rng.integers(0, n + 2)))]
        basis = gf2_nullspace(rows, n)
        assert len(basis) == n - naive_rank(rows, n)
        for v in basis:
            assert 0 < v < (1 << n)
            for r in rows:
                assert bits.dot(r, v) == 0
        # basis vectors are linearly independent: all XOR combos distinct
        if len(basis) <= 8:
            span = {0}
            for v in basis:
                span |= {x ^ v for x in span}
            assert len(span) == 1 << len(basis)


def test_nullspace_row_out_of_range():
    with pytest.raises(ValueError):
        gf2_nullspace([0b1000], 3)


def test_random_oracle_memoizes():
    rng = np.random.default_rng(29)
    oracle = RandomOracle(6, 3, rng)
    vals = {s: oracle(s) for s in range(64)}
    for s in range(64):
        assert oracle(s) == vals[s]
        assert 0 <= vals[s] < 8
    with pytest.raises(ValueError):
        oracle(64)
