"""Random Boolean functions in algebraic normal form, plus GF(2) linear algebra.

An ANF is an XOR of monomials; a monomial is stored as an m-bit mask over the
input variables (mask bit for s_1 is the most significant). Inputs and
outputs are ints, handled MSB-first like everywhere else in this package.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from . import bits

__all__ = [
    "GenerationError",
    "AnfFunction",
    "generate_random",
    "generate_balanced_f2",
    "linearize_monomial",
    "gf2_nullspace",
    "RandomOracle",
]

DEFAULT_BALANCE_ATTEMPTS = 10_000


class GenerationError(RuntimeError):
    """Raised when rejection sampling exhausts its attempt budget."""


@dataclass(frozen=True)
class AnfFunction:
    """A function {0,1}^m -> {0,1}^n_out given by one ANF per output bit.

    terms[b] is the set of monomial masks of output bit b (output bit 0 is
    the most significant output bit); constants holds the n_out constant
    terms as one integer.
    """

    m: int
    n_out: int
    terms: tuple[frozenset[int], ...]
    constants: int = 0

    def __post_init__(self):
        if self.m < 1 or self.n_out < 1:
            raise ValueError("m and n_out must be >= 1")
        if len(self.terms) != self.n_out:
            raise ValueError("need one term set per output bit")
        if not 0 <= self.constants < (1 << self.n_out):
            raise ValueError("constants out of range")
        for tset in self.terms:
            for mask in tset:
                if not 0 <= mask < (1 << self.m):
                    raise ValueError(f"monomial mask {mask} out of range")

    def evaluate(self, s: int) -> int:
        """Value at input s, as an n_out-bit integer."""
        if not 0 <= s < (1 << self.m):
            raise ValueError(f"input {s} out of range for m={self.m}")
        out = self.constants
        for b, tset in enumerate(self.terms):
            acc = 0
            for mask in tset:
                acc ^= (s & mask) == mask
            if acc:
                out ^= 1 << (self.n_out - 1 - b)
        return out

    def output_bit_table(self, b: int) -> np.ndarray:
        """Truth table of output bit b over all 2^m inputs (vectorized)."""
        inputs = np.arange(1 << self.m, dtype=np.uint64)
        acc = np.zeros(1 << self.m, dtype=bool)
        for mask in self.terms[b]:
            acc ^= (inputs & np.uint64(mask)) == np.uint64(mask)
        if bits.bit_at(self.constants, b, self.n_out):
            acc = ~acc
        return acc

    def is_balanced_bit(self, b: int) -> bool:
        table = self.output_bit_table(b)
        return int(np.count_nonzero(table)) == (1 << (self.m - 1))

    def flip_constant(self, b: int = 0) -> "AnfFunction":
        """The function with output bit b complemented (f -> f xor 1)."""
        return AnfFunction(self.m, self.n_out, self.terms,
                           self.constants ^ (1 << (self.n_out - 1 - b)))

    def to_json(self) -> dict:
        return {
            "m": self.m,
            "n_out": self.n_out,
            "constants": bits.to_str(self.constants, self.n_out),
            "terms": [sorted(bits.to_str(mask, self.m) for mask in tset)
                      for tset in self.terms],
        }

    @classmethod
    def from_json(cls, obj: dict) -> "AnfFunction":
        m = obj["m"]
        terms = tuple(frozenset(bits.from_str(t)[0] for t in tset) for tset in obj["terms"])
        constants, width = bits.from_str(obj["constants"])
        if width != obj["n_out"]:
            raise ValueError("constants width does not match n_out")
        return cls(m, obj["n_out"], terms, constants)


def generate_random(m: int, n_out: int, rng: np.random.Generator,
                    terms_per_output: int | None = None,
                    random_constants: bool = False) -> AnfFunction:
    """Random ANF built from coin tosses: each of the terms_per_output
    monomials of each output bit is drawn by m independent coin tosses
    (the toss for s_a decides whether s_a appears in the monomial).
    Duplicate monomials cancel in pairs, matching XOR algebra.
    """
    if terms_per_output is None:
        terms_per_output = m
    term_sets = []
    for _ in range(n_out):
        acc: set[int] = set()
        for _ in range(terms_per_output):
            mask = bits.rand_bits(rng, m)
            acc.symmetric_difference_update({mask})
        term_sets.append(frozenset(acc))
    constants = bits.rand_bits(rng, n_out) if random_constants else 0
    return AnfFunction(m, n_out, tuple(term_sets), constants)


def _anf_truth_table(coeffs: np.ndarray, m: int) -> np.ndarray:
    """Truth table over all 2^m inputs of the ANF whose monomial coefficient
    vector is coeffs (coeffs[mask] = 1 iff the monomial with variable set
    `mask` is present). Subset-XOR transform, m butterfly passes."""
    table = coeffs.copy()
    for d in range(m):
        view = table.reshape(-1, 2, 1 << d)
        view[:, 1, :] ^= view[:, 0, :]
    return table


def generate_balanced_f2(m: int, rng: np.random.Generator,
                         max_attempts: int = DEFAULT_BALANCE_ATTEMPTS) -> AnfFunction:
    """Single-output random ANF, rejection-sampled until balanced, then one
    extra coin toss XORs in the constant 1. The family is therefore closed
    under complement and the two constants are equally likely.

    Candidates are uniform over all single-output ANFs: every one of the 2^m
    monomial coefficients is an independent coin toss. (A sparse ANF of ~m
    random monomials has expected weight about m*2^(m/2), far below 2^(m-1),
    so it is almost never balanced once m grows past ~10; the uniform draw
    keeps the acceptance rate near sqrt(2/(pi*2^m)) at every width.)

    Balance is verified exhaustively over all 2^m inputs, so m is limited
    to 20 variables.
    """
    if m > 20:
        raise ValueError("balance check enumerates 2^m inputs; m must be <= 20")
    target = 1 << (m - 1)
    for _ in range(max_attempts):
        coeffs = rng.integers(0, 2, size=1 << m, dtype=np.uint8)
        if int(np.count_nonzero(_anf_truth_table(coeffs, m))) == target:
            term_set = frozenset(int(mask) for mask in np.nonzero(coeffs)[0])
            f = AnfFunction(m, 1, (term_set,))
            if bits.rand_bits(rng, 1):
                f = f.flip_constant(0)
            return f
    raise GenerationError(f"no balanced function found in {max_attempts} attempts")


def linearize_monomial(x: int, a: int) -> int:
    """Bitwise x^a = x*a xor a xor 1: the monomial exponent identity used to
    turn polynomial key equations into linear ones."""
    return (x & a) ^ a ^ 1


def gf2_nullspace(rows: Sequence[int], n: int) -> list[int]:
    """Basis of {v : r . v = 0 for every r in rows} over GF(2).

    Rows and basis vectors are n-bit ints. With no rows the standard basis
    comes back. Gaussian elimination on int bitsets.
    """
    pivots: dict[int, int] = {}
    for r in rows:
        if r >= (1 << n) or r < 0:
            raise ValueError(f"row {r} out of range for n={n}")
        for c, prow in pivots.items():
            if (r >> c) & 1:
                r ^= prow
        if r:
            c = r.bit_length() - 1
            for c2 in pivots:
                if (pivots[c2] >> c) & 1:
                    pivots[c2] ^= r
            pivots[c] = r
    basis = []
    for free in range(n - 1, -1, -1):
        if free in pivots:
            continue
        v = 1 << free
        for c, prow in pivots.items():
            if (prow >> free) & 1:
                v |= 1 << c
        basis.append(v)
    return basis


class RandomOracle:
    """Lazily sampled uniform function {0,1}^m -> {0,1}^n_out.

    Each fresh input gets an independent uniform output, memoized so repeat
    queries agree. Single-threaded use only.
    """

    def __init__(self, m: int, n_out: int, rng: np.random.Generator):
        self.m = m
        self.n_out = n_out
        self._rng = rng
        self._memo: dict[int, int] = {}

    def __call__(self, s: int) -> int:
        if not 0 <= s < (1 << self.m):
            raise ValueError(f"input {s} out of range for m={self.m}")
        if s not in self._memo:
            self._memo[s] = bits.rand_bits(self._rng, self.n_out)
        return self._memo[s]
