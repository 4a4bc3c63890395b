"""Radix-r arithmetic for fields GF(p) with p = r^k + 1, k a power of two.

An element is a tuple of k unsigned word digits, little-endian: digits[i] is
the coefficient of r^i.  Two canonical shapes exist:

  form A: every digit in [0, r), covering the values 0 .. p-2;
  form B: top digit equal to r, all others zero, the unique encoding of p-1.

Addition, subtraction, and multiplication by powers of r run in O(k) digit
operations with conditional-subtract carries.  No operation divides.

GfpParams is immutable and shareable; all operations are pure and return
fresh tuples.
"""

import random
from dataclasses import dataclass


@dataclass(frozen=True)
class GfpParams:
    """Field parameters (r, k).  p = r^k + 1 is implied.

    trusted_prime records whether the caller has vouched for p being prime
    (the oracle module can check).  Digit arithmetic is well defined either
    way; field semantics such as inverses need primality.
    """

    r: int
    k: int
    trusted_prime: bool = False

    def __post_init__(self):
        if self.k < 1 or self.k & (self.k - 1):
            raise ValueError("k must be a power of two")
        if not 2 <= self.r < (1 << 64):
            raise ValueError("r must fit in a 64-bit word and be at least 2")
        object.__setattr__(self, "p", self.r ** self.k + 1)


def gfp_zero(params):
    return (0,) * params.k


def gfp_one(params):
    return (1,) + (0,) * (params.k - 1)


def is_canonical(params, x):
    """True iff x satisfies the form A or form B invariant."""
    if len(x) != params.k:
        return False
    r = params.r
    if all(0 <= d < r for d in x):
        return True
    return x[-1] == r and all(d == 0 for d in x[:-1])


def gfp_decode(params, x):
    """The integer value sum(digits[i] * r^i); raises on non-canonical input."""
    if not is_canonical(params, x):
        raise ValueError("non-canonical element")
    acc = 0
    for d in reversed(x):
        acc = acc * params.r + d
    return acc


def gfp_encode(params, n):
    """Canonical element congruent to n mod p.  n may be negative or huge."""
    r, k = params.r, params.k
    n %= params.p
    if n == params.p - 1:
        return (0,) * (k - 1) + (r,)
    digits = []
    for _ in range(k):
        n, d = divmod(n, r)
        digits.append(d)
    return tuple(digits)


def gfp_add(params, x, y):
    """x + y mod p with conditional-subtract carries.

    A carry surviving the top digit means the plain sum reached r^k; the
    fixup borrows one from the lowest non-zero digit (setting the digits
    below it to r-1), and the all-zero case is exactly r^k = p - 1.
    """
    r, k = params.r, params.k
    z = []
    carry = 0
    for i in range(k):
        s = x[i] + y[i] + carry
        if s >= r:
            s -= r
            carry = 1
        else:
            carry = 0
        z.append(s)
    if carry:
        for i0 in range(k):
            if z[i0]:
                for j in range(i0):
                    z[j] = r - 1
                z[i0] -= 1
                break
        else:
            return (0,) * (k - 1) + (r,)
    return tuple(z)


def gfp_sub(params, x, y):
    """x - y mod p.  A borrow out of the top digit is repaid with +1,
    since the digit loop computed x - y + r^k and r^k = -1 mod p."""
    r, k = params.r, params.k
    z = []
    borrow = 0
    for i in range(k):
        d = x[i] - y[i] - borrow
        if d < 0:
            d += r
            borrow = 1
        else:
            borrow = 0
        assert d >= 0
        z.append(d)
    if borrow:
        for i in range(k):
            if z[i] + 1 < r:
                z[i] += 1
                break
            z[i] = 0
        else:
            return (0,) * (k - 1) + (r,)
    return tuple(z)


def gfp_mul_pow_r(params, x, i):
    """x * r^i mod p for 0 <= i <= 2k, by digit rotation and one subtraction.

    Using r^k = -1, the shifted digit sum splits at r^k into a low part B
    and a wrapped part A, and the result is B - A.  Cost is linear in k.
    """
    r, k = params.r, params.k
    if not 0 <= i <= 2 * k:
        raise ValueError("shift exponent out of range")
    i %= 2 * k
    if i == 0:
        return tuple(x)
    if i >= k:
        x = gfp_sub(params, gfp_zero(params), x)
        i -= k
        if i == 0:
            return x
    b = (0,) * i + x[: k - i]
    a = list(x[k - i:]) + [0] * (k - i)
    if x[k - 1] == r:
        # form B: the digit r would land in a[i-1]; carry it one slot up
        a[i - 1] -= r
        a[i] += 1
    return gfp_sub(params, b, tuple(a))


def gfp_pow(params, x, e, mul):
    """x^e by square and multiply.  mul is the multiplication backend,
    called as mul(params, a, b).  Exponents are not special-cased."""
    if e < 0:
        raise ValueError("exponent must be non-negative")
    acc = gfp_one(params)
    base = x
    while e:
        if e & 1:
            acc = mul(params, acc, base)
        e >>= 1
        if e:
            base = mul(params, base, base)
    return acc


def _default_mul(params, x, y):
    # decode/encode multiply, used when root finding is given no backend
    return gfp_encode(params, gfp_decode(params, x) * gfp_decode(params, y))


def gfp_primitive_root(params, N, g, mul=None):
    """From an N-th primitive root g, the root omega with omega^(N/2k) = r.

    Walks b = a, a^2, a^3, ... with a = g^(N/2k) until b equals r; then
    omega = g^j.  The walk is bounded by 2k steps because a has order
    dividing 2k.  Self-checks omega^N = 1 and omega^(N/2) = p - 1.
    """
    if mul is None:
        mul = _default_mul
    k = params.k
    if N % (2 * k):
        raise ValueError("N must be a multiple of 2k")
    r_elem = gfp_encode(params, params.r)
    a = gfp_pow(params, g, N // (2 * k), mul)
    b = a
    j = 1
    while b != r_elem:
        j += 1
        if j > 2 * k:
            raise ValueError("input root is not primitive (search exhausted)")
        b = mul(params, a, b)
    omega = gfp_pow(params, g, j, mul)
    minus_one = (0,) * (k - 1) + (params.r,)
    if gfp_pow(params, omega, N, mul) != gfp_one(params):
        raise ValueError("root self-check failed: omega^N != 1")
    if gfp_pow(params, omega, N // 2, mul) != minus_one:
        raise ValueError("root self-check failed: omega^(N/2) != -1")
    return omega


def gfp_find_nth_root(params, N, seed=0, mul=None):
    """A primitive N-th root of unity, deterministic for a given seed.

    Draws random candidates c, forms g = c^((p-1)/N), and accepts once
    g^(N/2) = p - 1.  For prime p roughly half the candidates succeed.
    """
    if mul is None:
        mul = _default_mul
    if N < 1 or N & (N - 1):
        raise ValueError("N must be a power of two")
    p = params.p
    if (p - 1) % N:
        raise ValueError("N does not divide p - 1")
    if N == 1:
        return gfp_one(params)
    minus_one = (0,) * (params.k - 1) + (params.r,)
    rng = random.Random(seed)
    e = (p - 1) // N
    while True:
        c = rng.randrange(1, p)
        g = gfp_pow(params, gfp_encode(params, c), e, mul)
        if gfp_pow(params, g, N // 2, mul) == minus_one:
            return g


def element_to_text(x):
    """Hex digit words, little-endian, comma-separated."""
    return ",".join(format(d, "x") for d in x)


def element_from_text(params, text):
    digits = tuple(int(part, 16) for part in text.split(","))
    if not is_canonical(params, digits):
        raise ValueError("text does not describe a canonical element")
    return digits
