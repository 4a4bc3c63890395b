"""Word-size prime fields in Montgomery form, plus wide-word primitives.

Everything here models unsigned 64-bit arithmetic with plain Python ints,
masking where a real machine would wrap.  WordPrime instances are immutable
and safe to share; all operations are pure functions.
"""

from dataclasses import dataclass
from typing import NamedTuple

MASK64 = (1 << 64) - 1

# Default convolution primes.  Both have a large power of two dividing q-1
# (2^57 and 2^55), which is what the negacyclic transforms need.
P1 = 4179340454199820289
P2 = 2485986994308513793


class WidePair(NamedTuple):
    """A 128-bit value split as hi * 2^64 + lo."""

    lo: int
    hi: int

    def value(self):
        return (self.hi << 64) | self.lo


def wide_from_int(n):
    """Split a non-negative integer < 2^128 into a WidePair."""
    if n < 0 or n >> 128:
        raise ValueError("value does not fit in two words")
    return WidePair(n & MASK64, n >> 64)


def wide_mul(a, b):
    """Full 64x64 -> 128 bit product as a WidePair."""
    t = a * b
    return WidePair(t & MASK64, t >> 64)


def wide_add(x, y):
    """(x + y) mod 2^128 and the carry out."""
    t = x.value() + y.value()
    return WidePair(t & MASK64, (t >> 64) & MASK64), t >> 128


def wide_sub(x, y):
    """(x - y) mod 2^128 and the borrow out."""
    t = x.value() - y.value()
    borrow = 1 if t < 0 else 0
    t &= (1 << 128) - 1
    return WidePair(t & MASK64, t >> 64), borrow


def wide_cmp(x, y):
    """-1, 0 or 1 comparing two WidePairs."""
    if x.hi != y.hi:
        return -1 if x.hi < y.hi else 1
    if x.lo != y.lo:
        return -1 if x.lo < y.lo else 1
    return 0


def wide_mul_hi128(x, y):
    """Bits [128, 192) of the product of two 128-bit values.

    Follows the three-cross-product dataflow: the x1*y1 term is truncated
    to one word, so callers must guarantee the true product stays below
    2^192.  Used for quotient estimation where that bound holds.
    """
    s0 = (x.lo * y.lo) >> 64
    t = x.hi * y.lo
    s1, c1 = t & MASK64, t >> 64
    t = x.lo * y.hi
    s2, c2 = t & MASK64, t >> 64
    q = (c1 + c2 + x.hi * y.hi) & MASK64
    col = s0 + s1
    q = (q + (col >> 64)) & MASK64
    col = (col & MASK64) + s2
    return (q + (col >> 64)) & MASK64


def word_mod_reciprocal(a, n):
    """a mod n via a floating-point reciprocal estimate.

    The double-precision estimate of the quotient can be off by a few
    units when n is small, so the remainder is corrected until it lands
    in [0, n).  The result is exact for every 64-bit input.
    """
    if n < 2:
        raise ValueError("modulus must be at least 2")
    q = int(a * (1.0 / n))
    rem = a - q * n
    while rem < 0:
        rem += n
    while rem >= n:
        rem -= n
    return rem


@dataclass(frozen=True)
class WordPrime:
    """An odd prime q < 2^63 with its Montgomery constants (R = 2^64)."""

    q: int
    q_neg_inv: int  # -q^{-1} mod 2^64
    r2: int         # 2^128 mod q
    one_mont: int   # 2^64 mod q

    @classmethod
    def make(cls, q):
        if q < 3 or q % 2 == 0:
            raise ValueError("q must be an odd prime")
        if q >= 1 << 63:
            raise ValueError("q must be below 2^63")
        q_neg_inv = (-pow(q, -1, 1 << 64)) & MASK64
        assert (q * q_neg_inv) & MASK64 == MASK64  # Bezout: q * q' = -1 mod 2^64
        return cls(q, q_neg_inv, (1 << 128) % q, (1 << 64) % q)


_word_prime_cache = {}


def word_prime(q):
    """Shared WordPrime instance for q."""
    ctx = _word_prime_cache.get(q)
    if ctx is None:
        ctx = _word_prime_cache[q] = WordPrime.make(q)
    return ctx


def mont_mul(ctx, a, b):
    """REDC product: a * b * 2^{-64} mod q, inputs and output in [0, q)."""
    c = a * b
    d = ((c & MASK64) * ctx.q_neg_inv) & MASK64
    c = (c + ctx.q * d) >> 64
    if c >= ctx.q:
        c -= ctx.q
    return c


def mont_convert_in(ctx, a):
    if not 0 <= a < ctx.q:
        raise ValueError("input must be reduced")
    return mont_mul(ctx, a, ctx.r2)


def mont_convert_out(ctx, a):
    return mont_mul(ctx, a, 1)


def word_pow(ctx, a, e):
    """a^e in Montgomery form, square and multiply."""
    if e < 0:
        raise ValueError("exponent must be non-negative")
    acc = ctx.one_mont
    base = a
    while e:
        if e & 1:
            acc = mont_mul(ctx, base, acc)
        base = mont_mul(ctx, base, base)
        e >>= 1
    return acc


def mont_inv(ctx, a):
    """Inverse by Fermat exponentiation with q - 2."""
    if a == 0:
        raise ZeroDivisionError("zero has no inverse")
    return word_pow(ctx, a, ctx.q - 2)


def word_primitive_root(ctx, n, seed=0):
    """A primitive n-th root of unity mod q, in Montgomery form.

    n must be a power of two dividing q - 1.  Candidates are drawn from a
    seeded RNG, raised to (q-1)/n, and accepted once the half-order check
    g^{n/2} = q - 1 passes, so the result is deterministic per seed.
    """
    import random

    if n < 1 or n & (n - 1):
        raise ValueError("n must be a power of two")
    if (ctx.q - 1) % n:
        raise ValueError("n does not divide q - 1")
    if n == 1:
        return ctx.one_mont
    minus_one = mont_convert_in(ctx, ctx.q - 1)
    rng = random.Random(seed)
    e = (ctx.q - 1) // n
    while True:
        c = rng.randrange(1, ctx.q)
        g = word_pow(ctx, mont_convert_in(ctx, c), e)
        if word_pow(ctx, g, n // 2) == minus_one:
            return g
