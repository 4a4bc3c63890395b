"""Six-step DFT of size K^e over interchangeable coefficient fields.

The transform follows the factorization

    DFT_N = L_K^N (I_J x DFT_K) L_J^N D_{K,J} (I_K x DFT_J) L_K^N,  N = J*K,

applied iteratively: a right-to-left cascade of stride permutations, one
pass of K-point base cases, then per level a twiddle stage, a permutation,
another base-case pass, and a closing permutation.  Base cases for
K in {8, 16, 32, 64} are generated once by unrolling the radix-2 splitting
of DFT_K and are interpreted as a flat list of dft2 / twiddle / swap steps.

A field is any object providing add, sub, mul, pow, zero, one, inv_scalar,
and root_power_mul_factory (see MontField below for the word-prime model).
Fields that can multiply by powers of their base root with a cyclic shift
advertise it through shift / shift_root, which turns most twiddle work into
linear-time digit moves.

Plans are immutable after construction and shareable; dft_general mutates
exactly one caller-owned list.  Optional thread parallelism splits the
independent base-case blocks, with results identical to the serial run.
"""

from concurrent.futures import ThreadPoolExecutor

from .word_field import mont_convert_in, mont_inv, mont_mul, word_pow

BASE_SIZES = (8, 16, 32, 64)


# ---------------------------------------------------------------------------
# stride permutation (the L_m^{mn} operator)

def stride_permutation(v, m, n, block=16, offset=0):
    """Transpose the n x m row-major view of v in place.

    Element j*m + i moves to position i*n + j.  Works through one scratch
    buffer, walking block x block tiles for locality.  With an offset the
    permutation applies to the m*n block starting there; deep recursion
    hits blocks at offset 0 that are shorter than the whole vector.
    """
    if len(v) < offset + m * n:
        raise ValueError("vector length must equal m*n")
    if m == 1 or n == 1:
        return v
    out = [None] * (m * n)
    for jb in range(0, n, block):
        jhi = min(jb + block, n)
        for ib in range(0, m, block):
            ihi = min(ib + block, m)
            for j in range(jb, jhi):
                base = offset + j * m
                for i in range(ib, ihi):
                    out[i * n + j] = v[base + i]
    v[offset:offset + m * n] = out
    return v


# ---------------------------------------------------------------------------
# twiddle stage (the D_{K,J} operator)

def twiddle_apply(v, m, n, omega_i, field, offset=0):
    """Multiply v[j*m + i] by omega_i^(i*j) for j < n blocks of m lanes.

    Exponents are never formed with a generic power: each block keeps a
    running row step omega_i^j and each lane multiplies the running factor
    by it, so the stage costs O(m*n) multiplications.
    """
    if m == 1:
        return v
    mul = field.mul
    row = omega_i
    for j in range(1, n):
        base = offset + j * m
        w = row
        v[base + 1] = mul(v[base + 1], w)
        for i in range(2, m):
            w = mul(w, row)
            v[base + i] = mul(v[base + i], w)
        row = mul(row, omega_i)
    return v


def _twiddle_level_cheap(v, off, m, n, stride, plan, field):
    # factor omega_i^(i*j) split as (r^step)^a * omega_i^b with
    # a, b = divmod(i*j, m); the shift part is a cyclic digit rotation,
    # walked backwards when the plan's root lands on 1/r (inverse plans)
    table = plan.twiddle_table
    shift = field.shift
    mul = field.mul
    forward = plan.shift_step > 0
    two_k = field.two_k
    for j in range(1, n):
        base = off + j * m
        for i in range(1, m):
            a, b = divmod(i * j, m)
            x = v[base + i]
            if a:
                x = shift(x, a if forward else two_k - a)
            if b:
                x = mul(x, table[b * stride])
            v[base + i] = x
    return v


# ---------------------------------------------------------------------------
# base cases

def dft2(a, b, field):
    """(a, b) -> (a + b, a - b)."""
    return field.add(a, b), field.sub(a, b)


def _gen_layers(positions, unit):
    # Unrolls DFT_s = L_2 (I x DFT_2) L D_{2,s/2} (I_2 x DFT_{s/2}) L_2 into
    # layers of disjoint steps.  positions maps logical lanes to physical
    # slots; unit scales twiddle exponents so they are powers of the size-K
    # root throughout.  Returns (layers, final logical order).
    s = len(positions)
    if s == 2:
        return [[("dft2", positions[0], positions[1])]], list(positions)
    half = s // 2
    layers_a, order_a = _gen_layers(positions[0::2], unit * 2)
    layers_b, order_b = _gen_layers(positions[1::2], unit * 2)
    layers = [a + b for a, b in zip(layers_a, layers_b)]
    layers.append([("tw", order_b[t], t * unit) for t in range(1, half)])
    merged = []
    for i in range(half):
        merged.append(order_a[i])
        merged.append(order_b[i])
    layers.append([("dft2", merged[2 * i], merged[2 * i + 1]) for i in range(half)])
    return layers, merged[0::2] + merged[1::2]


_base_ops_cache = {}


def base_case_ops(K):
    """The unrolled K-point DFT as a flat step list.

    Steps are ("dft2", i, j), ("tw", i, t) scaling slot i by the base
    root to the t-th power, and a trailing ("swap", i, j) layer that puts
    the output into natural order.
    """
    if K not in BASE_SIZES:
        raise ValueError("unsupported base-case size")
    ops = _base_ops_cache.get(K)
    if ops is not None:
        return ops
    layers, order = _gen_layers(list(range(K)), 1)
    ops = [step for layer in layers for step in layer]
    seen = [False] * K
    for start in range(K):
        if seen[start] or order[start] == start:
            continue
        cycle = [start]
        seen[start] = True
        t = order[start]
        while t != start:
            cycle.append(t)
            seen[t] = True
            t = order[t]
        for other in cycle[1:]:
            ops.append(("swap", cycle[0], other))
            cycle[0] = other
    ops = tuple(ops)
    _base_ops_cache[K] = ops
    return ops


def _run_base(v, off, ops, field, mul_pow):
    add = field.add
    sub = field.sub
    for op in ops:
        kind, i, j = op
        if kind == "dft2":
            a, b = v[off + i], v[off + j]
            v[off + i] = add(a, b)
            v[off + j] = sub(a, b)
        elif kind == "tw":
            v[off + i] = mul_pow(v[off + i], j)
        else:
            v[off + i], v[off + j] = v[off + j], v[off + i]


def dft_base(v, omega_base, field, K=None, offset=0):
    """In-place K-point DFT at omega_base, K in {8, 16, 32, 64}."""
    if K is None:
        K = len(v)
    ops = base_case_ops(K)
    mul_pow = field.root_power_mul_factory(omega_base, K)
    _run_base(v, offset, ops, field, mul_pow)
    return v


# ---------------------------------------------------------------------------
# plans and the general transform

class FftPlan:
    """Precomputed data for a size K^e transform at root omega."""

    def __init__(self, field, K, e, omega, cheap_twiddle, threads, block,
                 shift_step=0):
        self.field = field
        self.K = K
        self.e = e
        self.N = K ** e
        self.omega = omega
        self.omega_base = field.pow(omega, K ** (e - 1))
        self.shift_step = shift_step
        table = [field.one()]
        for _ in range(K ** (e - 1) - 1):
            table.append(field.mul(table[-1], omega))
        self.twiddle_table = table
        self.cheap_twiddle = cheap_twiddle
        self.threads = threads
        self.block = block
        self._inverse = None
        self._n_inv = None

    def inverse(self):
        """Plan for the same size at omega^(N-1) = omega^(-1)."""
        if self._inverse is None:
            field = self.field
            omega_inv = field.pow(self.omega, self.N - 1)
            self._inverse = build_plan(field, self.K, self.e, omega_inv,
                                       cheap_twiddle=self.cheap_twiddle,
                                       threads=self.threads)
        return self._inverse

    def n_inv(self):
        if self._n_inv is None:
            self._n_inv = self.field.inv_scalar(self.N)
        return self._n_inv


def build_plan(field, K, e, omega, cheap_twiddle=None, threads=1):
    """Validate omega and precompute the twiddle table.

    The primitivity check omega^N = 1, omega^(N/2) = -1 runs here.  For
    shift-capable fields the base-case constraint K = 2k is enforced and
    omega^(N/2k) must equal the shift root r, or its inverse for plans
    running the transform backwards.
    """
    if K not in BASE_SIZES:
        raise ValueError("unsupported base-case size")
    if e < 1:
        raise ValueError("e must be at least 1")
    N = K ** e
    one = field.one()
    minus_one = field.sub(field.zero(), one)
    if field.pow(omega, N) != one or field.pow(omega, N // 2) != minus_one:
        raise ValueError("omega is not a primitive N-th root")
    shift_root = getattr(field, "shift_root", None)
    shift_step = 0
    if shift_root is not None:
        two_k = field.two_k
        if K != two_k:
            raise ValueError("base-case size must equal 2k for this field")
        head = field.pow(omega, N // two_k)
        if head == shift_root:
            shift_step = 1
        elif head == getattr(field, "shift_root_inv", None):
            # inverse plans land here: shifts walk the rotation backwards
            shift_step = -1
        else:
            raise ValueError("omega^(N/2k) must equal the radix r or 1/r")
        if cheap_twiddle is None:
            cheap_twiddle = True
        block = 4
    else:
        cheap_twiddle = False
        block = 16
    return FftPlan(field, K, e, omega, bool(cheap_twiddle), threads, block,
                   shift_step)


def _base_pass(v, plan, field):
    K = plan.K
    ops = base_case_ops(K)
    mul_pow = field.root_power_mul_factory(plan.omega_base, K)
    nblocks = plan.N // K
    if plan.threads > 1 and nblocks > 1:
        workers = min(plan.threads, nblocks)

        def run(chunk):
            for j in chunk:
                _run_base(v, j * K, ops, field, mul_pow)

        chunks = [range(w, nblocks, workers) for w in range(workers)]
        with ThreadPoolExecutor(max_workers=workers) as pool:
            list(pool.map(run, chunks))
    else:
        for j in range(nblocks):
            _run_base(v, j * K, ops, field, mul_pow)


def dft_general(v, plan, field, profile=None):
    """In-place DFT of K^e points following the six-step schedule.

    profile, when given, is a mapping that accumulates wall time per phase
    under the keys "permutation", "basecase", "twiddle".
    """
    K, e, N = plan.K, plan.e, plan.N
    if len(v) != N:
        raise ValueError("vector length must equal K^e")
    timer = None
    if profile is not None:
        import time
        timer = time.perf_counter

    def tick(phase, t0):
        profile[phase] = profile.get(phase, 0.0) + (timer() - t0)

    block = plan.block
    t0 = timer() if timer else 0
    for i in range(e - 1):
        size = K ** (e - i)
        sub = size // K
        for j in range(0, N, size):
            stride_permutation(v, K, sub, block, offset=j)
    if timer:
        tick("permutation", t0)

    t0 = timer() if timer else 0
    _base_pass(v, plan, field)
    if timer:
        tick("basecase", t0)

    for i in range(e - 2, -1, -1):
        size = K ** (e - i)
        m = K ** (e - i - 1)
        stride = K ** i

        t0 = timer() if timer else 0
        for j in range(0, N, size):
            if plan.cheap_twiddle:
                _twiddle_level_cheap(v, j, m, K, stride, plan, field)
            else:
                twiddle_apply(v, m, K, plan.twiddle_table[stride], field, offset=j)
        if timer:
            tick("twiddle", t0)

        t0 = timer() if timer else 0
        for j in range(0, N, size):
            stride_permutation(v, m, K, block, offset=j)
        if timer:
            tick("permutation", t0)

        t0 = timer() if timer else 0
        _base_pass(v, plan, field)
        if timer:
            tick("basecase", t0)

        t0 = timer() if timer else 0
        for j in range(0, N, size):
            stride_permutation(v, K, m, block, offset=j)
        if timer:
            tick("permutation", t0)
    return v


def dft_inverse(v, plan, field, profile=None):
    """Inverse transform: dft_general at omega^(-1), then scale by 1/N."""
    dft_general(v, plan.inverse(), field, profile=profile)
    n_inv = plan.n_inv()
    mul = field.mul
    for i in range(len(v)):
        v[i] = mul(v[i], n_inv)
    return v


# ---------------------------------------------------------------------------
# the word-prime field adapter

class MontField:
    """Field view of Z/qZ on Montgomery residues for the DFT machinery."""

    def __init__(self, ctx):
        self.ctx = ctx
        self._tables = {}

    def add(self, a, b):
        c = a + b
        q = self.ctx.q
        return c - q if c >= q else c

    def sub(self, a, b):
        c = a - b
        return c + self.ctx.q if c < 0 else c

    def mul(self, a, b):
        return mont_mul(self.ctx, a, b)

    def pow(self, a, e):
        return word_pow(self.ctx, a, e)

    def zero(self):
        return 0

    def one(self):
        return self.ctx.one_mont

    def inv_scalar(self, n):
        return mont_inv(self.ctx, mont_convert_in(self.ctx, n % self.ctx.q))

    def root_power_mul_factory(self, omega, count):
        """Multiplier closure for x * omega^t, t < count, from a power table."""
        key = (omega, count)
        table = self._tables.get(key)
        if table is None:
            table = [self.one()]
            for _ in range(count - 1):
                table.append(self.mul(table[-1], omega))
            self._tables[key] = table
        ctx = self.ctx

        def mul_pow(x, t):
            return mont_mul(ctx, x, table[t])

        return mul_pow
