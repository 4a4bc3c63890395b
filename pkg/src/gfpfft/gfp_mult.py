"""Arbitrary-element multiplication in GF(r^k + 1).

Two interchangeable pipelines compute x*y for canonical digit vectors:

  gfp_mul_fft     digitwise negacyclic convolution modulo two word primes,
                  CRT reconstruction of the signed integer coefficients,
                  decomposition of each coefficient as l + h*r + c*r^2, and
                  a final shift-and-add over the field.
  gfp_mul_bigint  evaluate at r, multiply as arbitrary-precision integers,
                  reduce mod p, re-encode.

The FFT route only works when the prime pair can carry the coefficients:
check_prime_compat states the exact requirement k*r^2 <= (p1*p2 - 1)/2
together with 2k | p_i - 1, and gfp_mul_fft refuses configurations that
fail it.

All plan/parameter objects are immutable and cached; every operation here
is a pure function of its arguments.
"""

import time
from dataclasses import dataclass
from functools import lru_cache
from math import gcd
from typing import NamedTuple

from .fft import MontField, build_plan, dft_general
from .gfp_field import gfp_add, gfp_encode, gfp_mul_pow_r, gfp_sub
from .word_field import (MASK64, P1, P2, WidePair, mont_convert_in,
                         mont_convert_out, mont_inv, mont_mul, wide_add,
                         wide_cmp, wide_mul, wide_mul_hi128, wide_sub,
                         word_prime, word_primitive_root)


class ConfigurationError(ValueError):
    """Raised when a (field, prime pair) combination cannot be used."""


def _as_pair(x):
    if isinstance(x, WidePair):
        return x
    if x < 0 or x >> 128:
        raise ValueError("value out of two-word range")
    return WidePair(x & MASK64, x >> 64)


# ---------------------------------------------------------------------------
# reciprocal division

@lru_cache(maxsize=None)
def _recip128(n):
    # floor(2^128 / n) as a two-word pair
    r = (1 << 128) // n
    return WidePair(r & MASK64, r >> 64)


def div_by_const_r(x, r):
    """Quotient and remainder of a two-word x divided by the word r.

    Multiplies by the precomputed floor(2^128/r) keeping the bits above
    2^128, then repairs the estimate, which can be short by at most two.
    Raises OverflowError when the true quotient does not fit one word.
    """
    if r < 2:
        raise ValueError("radix must be at least 2")
    x = _as_pair(x)
    rec = _recip128(r)
    v0 = (x.lo * rec.lo) >> 64
    v2 = (x.hi * rec.lo + x.lo * rec.hi + v0) >> 64
    q = x.hi * rec.hi + v2
    m = (x.hi << 64 | x.lo) - q * r
    while m >= r:
        m -= r
        q += 1
    if q > MASK64:
        raise OverflowError("quotient exceeds one word")
    return q, m


@lru_cache(maxsize=None)
def _radix_split_of_word_base(r):
    # 2^64 = q*r + m, shared by every lhc_decompose call at this radix
    return div_by_const_r(WidePair(0, 1), r)


class LhcTriple(NamedTuple):
    l: int
    h: int
    c: int
    sign: bool = False

    def value(self, r):
        return self.l + self.h * r + self.c * r * r


def lhc_decompose(s, r):
    """Write the two-word s as l + h*r + c*r^2 with 0 <= l,h < r.

    The caller guarantees s < k*r^2 and attaches any sign itself.  c stays
    below k + 2; radices smaller than k are the only case where c can
    reach r, and the field-level carry pass downstream absorbs that.
    """
    s = _as_pair(s)
    q0, m0 = div_by_const_r(WidePair(s.lo, 0), r)
    q1, m1 = div_by_const_r(WidePair(s.hi, 0), r)
    qb, mb = _radix_split_of_word_base(r)
    lp = m0 + m1 * mb
    hp = m1 * qb + mb * q1 + q0
    cp = q1 * qb
    lq, lm = div_by_const_r(_as_pair(lp), r)
    hq, hm = div_by_const_r(_as_pair(hp), r)
    cq, cm = div_by_const_r(_as_pair(cp), r)
    t = hm + lq
    if t >= r:
        return LhcTriple(lm, t - r, cm + hq + 1 + cq * r)
    return LhcTriple(lm, t, cm + hq + cq * r)


# ---------------------------------------------------------------------------
# CRT reconstruction over the fixed prime pair

class SignedDoubleWord(NamedTuple):
    magnitude: WidePair
    negative: bool

    def value(self):
        v = self.magnitude.hi << 64 | self.magnitude.lo
        return -v if self.negative else v


@dataclass(frozen=True)
class CrtParams:
    """Everything crt_combine needs, derived once from a coprime pair."""

    p1_ctx: object
    p2_ctx: object
    m1: int
    m2: int
    m1_red: int
    m2_red: int
    p1_recip: WidePair
    p2_recip: WidePair
    p1p2: WidePair
    half_range: WidePair

    @property
    def p1(self):
        return self.p1_ctx.q

    @property
    def p2(self):
        return self.p2_ctx.q

    @classmethod
    def make(cls, q1=P1, q2=P2):
        if gcd(q1, q2) != 1:
            raise ValueError("primes must be coprime")
        ctx1 = word_prime(q1)
        ctx2 = word_prime(q2)
        m2 = pow(q2, -1, q1)
        m1 = (1 - q2 * m2) // q1
        if q1 * m1 + q2 * m2 != 1:
            raise ValueError("Bezout identity failed")
        prod = q1 * q2
        return cls(ctx1, ctx2, m1, m2, m1 % q2, m2 % q1,
                   _recip128(q1), _recip128(q2),
                   _as_pair(prod), _as_pair((prod - 1) // 2))


@lru_cache(maxsize=None)
def crt_default():
    return CrtParams.make()


def _mod_by_recip(t, recip, p):
    # t < p^2 as a pair; one estimate, one conditional subtract
    q = wide_mul_hi128(t, recip)
    rem, borrow = wide_sub(t, wide_mul(q, p))
    assert borrow == 0 and rem.hi == 0
    m = rem.lo
    return m - p if m >= p else m


def crt_combine(a1, a2, params):
    """The signed v in [-half_range, half_range] with v = a1 (p1), a2 (p2)."""
    p1, p2 = params.p1, params.p2
    if not 0 <= a1 < p1 or not 0 <= a2 < p2:
        raise ValueError("residues must be reduced")
    r1 = _mod_by_recip(wide_mul(a1, params.m2_red), params.p1_recip, p1)
    r2 = _mod_by_recip(wide_mul(a2, params.m1_red), params.p2_recip, p2)
    v, carry = wide_add(wide_mul(r1, p2), wide_mul(r2, p1))
    assert carry == 0
    if wide_cmp(v, params.p1p2) >= 0:
        v, _ = wide_sub(v, params.p1p2)
    if wide_cmp(v, params.half_range) > 0:
        v, _ = wide_sub(params.p1p2, v)
        return SignedDoubleWord(v, True)
    return SignedDoubleWord(v, False)


class CompatReport(NamedTuple):
    passed: bool
    slack: int
    reasons: tuple


def check_prime_compat(params, crt):
    """Can gfp_mul_fft run GF(r^k+1) over this prime pair?

    Requires k*r^2 <= (p1*p2 - 1)/2 so the convolution coefficients
    survive the symmetric CRT range, and 2k | p_i - 1 so the negacyclic
    transforms exist.  slack reports the margin (negative when failing).
    """
    q1, q2 = crt.p1, crt.p2
    bound = params.k * params.r * params.r
    limit = (q1 * q2 - 1) // 2
    reasons = []
    if bound > limit:
        reasons.append("coefficient bound k*r^2 = %d exceeds usable range %d"
                       % (bound, limit))
    two_k = 2 * params.k
    if (q1 - 1) % two_k:
        reasons.append("2k = %d does not divide p1 - 1" % two_k)
    if (q2 - 1) % two_k:
        reasons.append("2k = %d does not divide p2 - 1" % two_k)
    return CompatReport(not reasons, limit - bound, tuple(reasons))


# ---------------------------------------------------------------------------
# convolutions over a word prime

class ConvolutionPlan:
    __slots__ = ("ctx", "field", "n", "in_table", "out_table",
                 "fft_plan", "fwd_pows", "inv_pows")


def _transform_shape(n):
    # n as K^e with K a base-case size, largest K first; None -> naive
    for K in (64, 32, 16, 8):
        t, e = n, 0
        while t % K == 0:
            t //= K
            e += 1
        if t == 1 and e >= 1:
            return K, e
    return None


def _make_plan(ctx, n, in_table, out_table, omega):
    plan = ConvolutionPlan()
    plan.ctx = ctx
    plan.field = MontField(ctx)
    plan.n = n
    plan.in_table = in_table
    plan.out_table = out_table
    plan.fft_plan = None
    plan.fwd_pows = None
    plan.inv_pows = None
    shape = _transform_shape(n)
    if shape is not None:
        K, e = shape
        plan.fft_plan = build_plan(plan.field, K, e, omega)
    elif n > 1:
        fwd = [ctx.one_mont]
        for _ in range(n - 1):
            fwd.append(mont_mul(ctx, fwd[-1], omega))
        omega_inv = mont_inv(ctx, omega)
        inv = [ctx.one_mont]
        for _ in range(n - 1):
            inv.append(mont_mul(ctx, inv[-1], omega_inv))
        plan.fwd_pows = fwd
        plan.inv_pows = inv
    return plan


_nega_plans = {}
_cyclic_plans = {}


def _nega_plan(ctx, k):
    plan = _nega_plans.get((ctx.q, k))
    if plan is not None:
        return plan
    if k < 1 or k & (k - 1):
        raise ValueError("k must be a power of 2")
    if (ctx.q - 1) % (2 * k):
        raise ValueError("unsupported size: 2k does not divide q - 1")
    theta = word_primitive_root(ctx, 2 * k)
    omega = mont_mul(ctx, theta, theta)
    in_table = []
    tm = ctx.one_mont
    for _ in range(k):
        in_table.append(mont_mul(ctx, tm, ctx.r2))
        tm = mont_mul(ctx, tm, theta)
    # out_table[i] = theta^-i / k in standard form: one multiplication per
    # digit undoes the weighting, the 1/k scale, and the Montgomery factor
    theta_inv = mont_inv(ctx, theta)
    acc = mont_inv(ctx, mont_convert_in(ctx, k % ctx.q))
    out_table = []
    for _ in range(k):
        out_table.append(mont_convert_out(ctx, acc))
        acc = mont_mul(ctx, acc, theta_inv)
    plan = _make_plan(ctx, k, in_table, out_table, omega)
    _nega_plans[(ctx.q, k)] = plan
    return plan


def _cyclic_plan(ctx, n):
    plan = _cyclic_plans.get((ctx.q, n))
    if plan is not None:
        return plan
    if n < 1 or n & (n - 1):
        raise ValueError("n must be a power of 2")
    if (ctx.q - 1) % n:
        raise ValueError("unsupported size: n does not divide q - 1")
    omega = word_primitive_root(ctx, n)
    n_inv = mont_convert_out(ctx, mont_inv(ctx, mont_convert_in(ctx, n % ctx.q)))
    plan = _make_plan(ctx, n, [ctx.r2] * n, [n_inv] * n, omega)
    _cyclic_plans[(ctx.q, n)] = plan
    return plan


def _naive_dft(v, pows, ctx):
    n = len(v)
    q = ctx.q
    out = []
    for i in range(n):
        s = 0
        for j in range(n):
            s += mont_mul(ctx, v[j], pows[i * j % n])
        out.append(s % q)
    v[:] = out


def _forward(plan, v):
    if plan.fft_plan is not None:
        dft_general(v, plan.fft_plan, plan.field)
    elif plan.fwd_pows is not None:
        _naive_dft(v, plan.fwd_pows, plan.ctx)


def _inverse_unscaled(plan, v):
    # the 1/n factor lives in out_table
    if plan.fft_plan is not None:
        dft_general(v, plan.fft_plan.inverse(), plan.field)
    elif plan.inv_pows is not None:
        _naive_dft(v, plan.inv_pows, plan.ctx)


def _convolve(plan, x, y):
    ctx = plan.ctx
    a = [mont_mul(ctx, d, t) for d, t in zip(x, plan.in_table)]
    b = [mont_mul(ctx, d, t) for d, t in zip(y, plan.in_table)]
    _forward(plan, a)
    _forward(plan, b)
    c = [mont_mul(ctx, u, w) for u, w in zip(a, b)]
    _inverse_unscaled(plan, c)
    return tuple(mont_mul(ctx, u, t) for u, t in zip(c, plan.out_table))


def _check_reduced(v, n, q):
    if len(v) != n:
        raise ValueError("vector length mismatch")
    for d in v:
        if not 0 <= d < q:
            raise ValueError("inputs must be reduced mod q")


def negacyclic_convolution(x, y, ctx, k):
    """Coefficients of f_x * f_y mod (R^k + 1) mod q.

    Inputs and output are standard-form word vectors; the theta-weighted
    transforms run in Montgomery form internally.
    """
    plan = _nega_plan(ctx, k)
    _check_reduced(x, k, ctx.q)
    _check_reduced(y, k, ctx.q)
    return _convolve(plan, x, y)


def cyclic_convolution(f, g, ctx, n):
    """Coefficients of f * g mod (x^n - 1) mod q."""
    plan = _cyclic_plan(ctx, n)
    _check_reduced(f, n, ctx.q)
    _check_reduced(g, n, ctx.q)
    return _convolve(plan, f, g)


# ---------------------------------------------------------------------------
# the two multipliers

_compat_ok = {}


def _require_compat(params, crt):
    key = (params.r, params.k, crt.p1, crt.p2)
    if _compat_ok.get(key):
        return
    report = check_prime_compat(params, crt)
    if not report.passed:
        raise ConfigurationError("; ".join(report.reasons))
    _compat_ok[key] = True


def _carry_normalize(digits, r):
    # returns (canonical digit tuple, wrap) where the input vector's value
    # equals the tuple's value + wrap * r^k
    carry = 0
    out = []
    for d in digits:
        carry, rem = divmod(d + carry, r)
        out.append(rem)
    return tuple(out), carry


def gfp_mul_fft(params, crt, x, y, profile=None):
    """x*y via convolution mod two word primes, CRT, and LHC reassembly.

    profile, when given, accumulates seconds per pipeline step under the
    keys convert_in, convolution, convert_out, crt, lhc, final.
    """
    _require_compat(params, crt)
    k, r = params.k, params.r
    plan1 = _nega_plan(crt.p1_ctx, k)
    plan2 = _nega_plan(crt.p2_ctx, k)
    ctx1, ctx2 = crt.p1_ctx, crt.p2_ctx
    q1, q2 = ctx1.q, ctx2.q
    timer = time.perf_counter if profile is not None else None

    def tick(phase, t0):
        profile[phase] = profile.get(phase, 0.0) + (timer() - t0)

    t0 = timer() if timer else 0
    a1 = [mont_mul(ctx1, d % q1, t) for d, t in zip(x, plan1.in_table)]
    b1 = [mont_mul(ctx1, d % q1, t) for d, t in zip(y, plan1.in_table)]
    a2 = [mont_mul(ctx2, d % q2, t) for d, t in zip(x, plan2.in_table)]
    b2 = [mont_mul(ctx2, d % q2, t) for d, t in zip(y, plan2.in_table)]
    if timer:
        tick("convert_in", t0)

    t0 = timer() if timer else 0
    _forward(plan1, a1)
    _forward(plan1, b1)
    z1 = [mont_mul(ctx1, u, w) for u, w in zip(a1, b1)]
    _inverse_unscaled(plan1, z1)
    _forward(plan2, a2)
    _forward(plan2, b2)
    z2 = [mont_mul(ctx2, u, w) for u, w in zip(a2, b2)]
    _inverse_unscaled(plan2, z2)
    if timer:
        tick("convolution", t0)

    t0 = timer() if timer else 0
    z1 = [mont_mul(ctx1, u, t) for u, t in zip(z1, plan1.out_table)]
    z2 = [mont_mul(ctx2, u, t) for u, t in zip(z2, plan2.out_table)]
    if timer:
        tick("convert_out", t0)

    t0 = timer() if timer else 0
    coeffs = [crt_combine(u1, u2, crt) for u1, u2 in zip(z1, z2)]
    if timer:
        tick("crt", t0)

    t0 = timer() if timer else 0
    bound = k * r * r
    l_pos = [0] * k
    h_pos = [0] * k
    c_pos = [0] * k
    l_neg = [0] * k
    h_neg = [0] * k
    c_neg = [0] * k
    for i, s in enumerate(coeffs):
        mag = s.magnitude
        if mag.lo == 0 and mag.hi == 0:
            continue
        assert (mag.hi << 64 | mag.lo) < bound
        t = lhc_decompose(mag, r)
        if s.negative:
            l_neg[i], h_neg[i], c_neg[i] = t.l, t.h, t.c
        else:
            l_pos[i], h_pos[i], c_pos[i] = t.l, t.h, t.c
    if timer:
        tick("lhc", t0)

    t0 = timer() if timer else 0
    u = tuple(l_pos)
    u = gfp_add(params, u, gfp_mul_pow_r(params, tuple(h_pos), 1))
    cp, wrap_p = _carry_normalize(c_pos, r)
    u = gfp_add(params, u, gfp_mul_pow_r(params, cp, 2))
    u = gfp_sub(params, u, tuple(l_neg))
    u = gfp_sub(params, u, gfp_mul_pow_r(params, tuple(h_neg), 1))
    cn, wrap_n = _carry_normalize(c_neg, r)
    u = gfp_sub(params, u, gfp_mul_pow_r(params, cn, 2))
    # a wrap means the c vector overflowed into r^k, worth -1 in the field
    if wrap_p:
        u = gfp_sub(params, u, gfp_encode(params, wrap_p * r * r % params.p))
    if wrap_n:
        u = gfp_add(params, u, gfp_encode(params, wrap_n * r * r % params.p))
    if timer:
        tick("final", t0)
    return u


def gfp_mul_bigint(params, x, y):
    """Reference product: evaluate at r, multiply as integers, re-encode."""
    xv = 0
    for d in reversed(x):
        xv = xv * params.r + d
    yv = 0
    for d in reversed(y):
        yv = yv * params.r + d
    return gfp_encode(params, xv * yv % params.p)


# ---------------------------------------------------------------------------
# field adapter: GF(p) elements for the fft machinery

class GfpFftField:
    """Digit-vector field view used by dft_general over GF(r^k + 1).

    mul dispatches to the FFT pipeline or the bigint reference according
    to backend; multiplications by powers of the base root use the cyclic
    shift, which plans detect through shift/shift_root/two_k.
    """

    def __init__(self, params, crt=None, backend="fft"):
        if backend not in ("fft", "bigint"):
            raise ValueError("unknown backend")
        if backend == "fft":
            crt = crt if crt is not None else crt_default()
            _require_compat(params, crt)
        self.params = params
        self.crt = crt
        self.backend = backend
        self.two_k = 2 * params.k
        self.shift_root = gfp_encode(params, params.r)
        # r^(2k-1) = 1/r, the root inverse transforms align with
        self.shift_root_inv = self.shift(self.one(), self.two_k - 1)
        self._tables = {}

    def add(self, a, b):
        return gfp_add(self.params, a, b)

    def sub(self, a, b):
        return gfp_sub(self.params, a, b)

    def mul(self, a, b):
        if self.backend == "fft":
            return gfp_mul_fft(self.params, self.crt, a, b)
        return gfp_mul_bigint(self.params, a, b)

    def pow(self, a, e):
        n = self.params.p
        return gfp_encode(self.params, pow(self._decode(a), e, n))

    def zero(self):
        return (0,) * self.params.k

    def one(self):
        return gfp_encode(self.params, 1)

    def inv_scalar(self, n):
        return gfp_encode(self.params, pow(n, -1, self.params.p))

    def shift(self, a, i):
        return gfp_mul_pow_r(self.params, a, i)

    def _decode(self, a):
        v = 0
        for d in reversed(a):
            v = v * self.params.r + d
        return v % self.params.p

    def root_power_mul_factory(self, omega, count):
        if omega == self.shift_root and count <= self.two_k:
            params = self.params
            return lambda a, t: gfp_mul_pow_r(params, a, t)
        if omega == self.shift_root_inv and count <= self.two_k:
            params = self.params
            two_k = self.two_k
            return lambda a, t: gfp_mul_pow_r(params, a, (two_k - t) % two_k)
        table = self._tables.get((omega, count))
        if table is None:
            table = [self.one()]
            for _ in range(count - 1):
                table.append(self.mul(table[-1], omega))
            self._tables[(omega, count)] = table

        def mul_pow(a, t):
            return self.mul(a, table[t])

        return mul_pow
