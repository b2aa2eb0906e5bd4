# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled posit arithmetic for formats up to 32 bits.

Same algorithms as positkit.core / positkit.arith, on fixed-width integers:
fractions live in 128-bit words, which covers the 3*ps encode buffer and the
widened square-root radicand for every ps <= 32.
"""

ctypedef unsigned long long u64
ctypedef long long i64

cdef extern from *:
    ctypedef unsigned long long u128 "unsigned __int128"
    ctypedef long long i128 "__int128"
    int __builtin_clzll(unsigned long long) nogil

from libc.math cimport ldexp, NAN


_I64_LIMIT = 1 << 63


cdef struct Unp:
    int sn
    int s
    i64 k
    i64 e
    u128 f
    int fs
    int bm


cdef inline int bitlen64(u64 x) noexcept nogil:
    if x == 0:
        return 0
    return 64 - __builtin_clzll(x)


cdef inline int bitlen128(u128 x) noexcept nogil:
    cdef u64 hi = <u64>(x >> 64)
    if hi:
        return 128 - __builtin_clzll(hi)
    return bitlen64(<u64>x)


cdef inline i64 floor_shift(i64 v, int n) noexcept nogil:
    # floor(v / 2^n) without relying on signed shift semantics
    cdef i64 d = (<i64>1) << n
    if v >= 0:
        return v // d
    return -((-v + d - 1) // d)


cdef inline Unp special(int s) noexcept nogil:
    cdef Unp u
    u.sn = 1
    u.s = s
    u.k = 0
    u.e = 0
    u.f = 0
    u.fs = 0
    u.bm = 0
    return u


cdef Unp decode(int ps, int es, u64 bp) noexcept nogil:
    cdef u64 mask = ((<u64>1) << ps) - 1
    cdef u64 body_mask = mask >> 1
    cdef int s = <int>((bp >> (ps - 1)) & 1)
    cdef Unp u
    if (bp & body_mask) == 0:
        return special(s)
    if s:
        bp = (~bp + 1) & mask
    cdef u64 body = bp & body_mask
    cdef int r_i = <int>((body >> (ps - 2)) & 1)
    cdef int rn
    if r_i:
        rn = (ps - 1) - bitlen64((~body) & body_mask)
        u.k = rn - 1
    else:
        rn = (ps - 1) - bitlen64(body)
        u.k = -rn
    cdef int rs = rn + 1
    cdef int ers = ps - rs - 1
    if ers > es:
        ers = es
    if ers < 0:
        ers = 0
    if ers == 0:
        u.e = 0
    else:
        u.e = <i64>(((bp >> (ps - rs - ers - 1)) & (((<u64>1) << ers) - 1)) << (es - ers))
    cdef int frs = ps - rs - es - 1
    if frs < 0:
        frs = 0
    if frs:
        u.f = bp & (((<u64>1) << frs) - 1)
    else:
        u.f = 0
    u.fs = frs
    u.f += (<u128>1) << frs
    u.sn = 0
    u.s = s
    u.bm = 0
    return u


cdef u64 encode(int ps, int es, Unp u) noexcept nogil:
    if u.sn:
        if u.s:
            return (<u64>1) << (ps - 1)
        return 0

    cdef int width = 2 * ps
    cdef u128 f = u.f
    cdef int fs = u.fs
    cdef int bm = u.bm
    if fs < width:
        f <<= width - fs
        fs = width

    # canonicalize
    cdef i64 total = u.k * ((<i64>1) << es) + u.e
    cdef int shift = bitlen128(f) - 1 - fs
    if shift > 0:
        if f & (((<u128>1) << shift) - 1):
            bm = 1
        f >>= shift
    elif shift < 0:
        f <<= -shift
    total += shift
    if fs > width:
        if f & (((<u128>1) << (fs - width)) - 1):
            bm = 1
        f >>= fs - width
        fs = width
    cdef i64 k = floor_shift(total, es)
    cdef i64 e = total - k * ((<i64>1) << es)

    cdef u64 bp
    cdef int rn, rs, nrs
    cdef u64 regimebits, top, guard, add_one
    cdef u128 othervalue, low_mask
    if k >= ps - 2:
        bp = ((<u64>1) << (ps - 1)) - 1
    elif k < -(ps - 2):
        bp = 1
    else:
        if k >= 0:
            rn = <int>k + 1
            regimebits = (((<u64>1) << rn) - 1) << 1
        else:
            rn = <int>(-k)
            regimebits = 1
        rs = rn + 1
        nrs = ps - rs - 1
        if nrs < 0:
            nrs = 0
        regimebits <<= nrs

        low_mask = ((<u128>1) << width) - 1
        othervalue = ((<u128>e << width) | (f & low_mask)) << (ps - es)
        top = <u64>(othervalue >> width)
        bp = regimebits | (top >> (ps - nrs))
        guard = (top >> (ps - nrs - 1)) & 1
        if (top & (((<u64>1) << (ps - nrs - 1)) - 1)) or (othervalue & low_mask):
            bm = 1
        add_one = guard & (<u64>bm | (bp & 1))
        bp += add_one

    if u.s:
        bp = (~bp + 1) & (((<u64>1) << ps) - 1)
    return bp


cdef inline int magnitude_lt(int es, Unp* p1, Unp* p2) noexcept nogil:
    if p1.sn:
        return not p2.sn
    if p2.sn:
        return 0
    cdef i64 t1 = p1.k * ((<i64>1) << es) + p1.e
    cdef i64 t2 = p2.k * ((<i64>1) << es) + p2.e
    if t1 != t2:
        return t1 < t2
    cdef int fs = p1.fs if p1.fs > p2.fs else p2.fs
    return (p1.f << (fs - p1.fs)) < (p2.f << (fs - p2.fs))


cdef Unp add_sub(int ps, int es, Unp a, Unp b, int op) noexcept nogil:
    cdef int sign
    cdef Unp p1 = a
    cdef Unp p2 = b
    if p1.s == p2.s:
        sign = p1.s
    else:
        op = 1 - op
        sign = p1.s
    cdef Unp tmp
    if magnitude_lt(es, &p1, &p2):
        tmp = p1
        p1 = p2
        p2 = tmp
        if op == 1:
            sign = 1 - sign

    if (p1.sn and p1.s) or (p2.sn and p2.s):
        return special(1)
    if p2.sn:
        if p1.sn:
            return special(0)
        p1.s = sign
        return p1

    cdef int fs3 = 2 * ps - 4
    cdef i64 t = (p1.k * ((<i64>1) << es) + p1.e) - (p2.k * ((<i64>1) << es) + p2.e)
    cdef u128 f1 = p1.f << (fs3 - p1.fs)
    cdef u128 f2 = p2.f << (fs3 - p2.fs)
    cdef u128 aligned
    cdef int bm
    if t >= 128:
        aligned = 0
        bm = f2 != 0
    else:
        aligned = f2 >> t
        bm = (f2 & (((<u128>1) << t) - 1)) != 0
    cdef Unp r
    if op == 0:
        r.f = f1 + aligned
    else:
        r.f = f1 - aligned
    if r.f == 0:
        return special(0)
    r.sn = 0
    r.s = sign
    r.k = p1.k
    r.e = p1.e
    r.fs = fs3
    r.bm = bm
    return r


cdef Unp mul(Unp a, Unp b) noexcept nogil:
    if (a.sn and a.s) or (b.sn and b.s):
        return special(1)
    if a.sn or b.sn:
        return special(0)
    cdef Unp r
    r.sn = 0
    r.s = a.s ^ b.s
    r.k = a.k + b.k
    r.e = a.e + b.e
    r.fs = a.fs + b.fs
    r.f = a.f * b.f
    r.bm = 0
    return r


cdef Unp div(int ps, int es, Unp a, Unp b) noexcept nogil:
    if (a.sn and a.s) or (b.sn and b.s) or b.sn:
        return special(1)
    if a.sn:
        return special(0)
    cdef Unp r
    r.sn = 0
    r.s = a.s ^ b.s
    r.k = a.k - b.k
    if b.e > a.e:
        r.e = a.e + ((<i64>1) << es) - b.e
        r.k -= 1
    else:
        r.e = a.e - b.e
    r.fs = a.fs + ps - b.fs
    cdef u128 num = a.f << ps
    r.f = num / b.f
    r.bm = (num % b.f) != 0
    return r


cdef void uint_sqrt(u128 d, u128* q_out, u128* r_out) noexcept nogil:
    cdef int size = bitlen128(d)
    size += size & 1
    cdef i128 q = 0
    cdef i128 r = 0
    cdef i128 t_r
    cdef int i = size // 2 - 1
    while i >= 0:
        t_r = (r << 2) | <i128>((d >> (2 * i)) & 3)
        if r >= 0:
            r = t_r - ((q << 2) | 1)
        else:
            r = t_r + ((q << 2) | 3)
        if r >= 0:
            q = (q << 1) | 1
        else:
            q = q << 1
        i -= 1
    if r < 0:
        r += (q << 1) | 1
    q_out[0] = <u128>q
    r_out[0] = <u128>r


cdef Unp sqrt(int ps, int es, Unp a) noexcept nogil:
    if a.sn:
        return special(a.s)
    if a.s:
        return special(1)
    cdef i64 k = a.k
    cdef i64 e = a.e
    cdef u128 f = a.f
    cdef int fs = a.fs
    if k & 1:
        k -= 1
        e += (<i64>1) << es
    cdef int shift = 2 * (ps + 4) - fs
    if shift < 2:
        shift = 2
    if (fs + shift) & 1:
        shift += 1
    f <<= shift
    fs += shift
    cdef u128 q, rem
    uint_sqrt(f >> ((e & 1) + (fs & 1)), &q, &rem)
    cdef Unp r
    r.sn = 0
    r.s = 0
    r.k = floor_shift(k, 1)
    r.e = (e + (e & 1)) >> 1
    r.f = q
    r.fs = (fs - (fs & 1)) >> 1
    r.bm = rem != 0
    return r


cdef class PositKernel:
    """Pattern-level posit arithmetic for one (ps, es) format, ps <= 32."""

    cdef readonly int ps
    cdef readonly int es
    cdef u64 mask

    compiled = True

    def __cinit__(self, int ps, int es):
        if ps < 3 or ps > 32:
            raise ValueError(f"compiled kernel supports 3 <= ps <= 32, got {ps}")
        if es < 0 or es > ps - 3:
            raise ValueError(f"exponent size must be in [0, {ps - 3}], got {es}")
        self.ps = ps
        self.es = es
        self.mask = ((<u64>1) << ps) - 1

    def __repr__(self):
        return f"PositKernel({self.ps}, {self.es})"

    cdef inline u64 _check(self, u64 bp) except? 0:
        if bp & ~self.mask:
            raise ValueError(f"pattern {bp:#x} does not fit in {self.ps} bits")
        return bp

    cpdef u64 add(self, u64 a, u64 b):
        self._check(a); self._check(b)
        return encode(self.ps, self.es, add_sub(self.ps, self.es,
                      decode(self.ps, self.es, a), decode(self.ps, self.es, b), 0))

    cpdef u64 sub(self, u64 a, u64 b):
        self._check(a); self._check(b)
        return encode(self.ps, self.es, add_sub(self.ps, self.es,
                      decode(self.ps, self.es, a), decode(self.ps, self.es, b), 1))

    cpdef u64 mul(self, u64 a, u64 b):
        self._check(a); self._check(b)
        return encode(self.ps, self.es,
                      mul(decode(self.ps, self.es, a), decode(self.ps, self.es, b)))

    cpdef u64 div(self, u64 a, u64 b):
        self._check(a); self._check(b)
        return encode(self.ps, self.es, div(self.ps, self.es,
                      decode(self.ps, self.es, a), decode(self.ps, self.es, b)))

    cpdef u64 sqrt(self, u64 a):
        self._check(a)
        return encode(self.ps, self.es, sqrt(self.ps, self.es, decode(self.ps, self.es, a)))

    def from_int(self, n):
        """Nearest posit to the integer ``n`` (ties to even)."""
        if -_I64_LIMIT < n < _I64_LIMIT:
            return self._from_i64(n)
        from .convert import int_to_posit
        from .core import PositConfig
        return int_to_posit(PositConfig(self.ps, self.es), n)

    cdef u64 _from_i64(self, i64 n):
        cdef Unp u
        if n == 0:
            return 0
        u.sn = 0
        u.s = n < 0
        cdef u64 mag = (<u64>0 - <u64>n) if n < 0 else <u64>n
        u.fs = bitlen64(mag) - 1
        u.k = floor_shift(u.fs, self.es)
        u.e = u.fs - u.k * ((<i64>1) << self.es)
        u.f = mag
        u.bm = 0
        return encode(self.ps, self.es, u)

    cpdef double to_double(self, u64 a):
        """Exact binary64 value; NaR maps to NaN."""
        self._check(a)
        cdef Unp u = decode(self.ps, self.es, a)
        if u.sn:
            return NAN if u.s else 0.0
        cdef double mag = ldexp(<double><u64>u.f, <int>(u.k * ((<i64>1) << self.es) + u.e - u.fs))
        return -mag if u.s else mag

    cpdef u64 fma(self, u64 a, u64 b, u64 c):
        return self.add(self.mul(a, b), c)

    def apply(self, str op, u64 a, u64 b=0):
        if op == "add":
            return self.add(a, b)
        if op == "sub":
            return self.sub(a, b)
        if op == "mul":
            return self.mul(a, b)
        if op == "div":
            return self.div(a, b)
        if op == "sqrt":
            return self.sqrt(a)
        raise ValueError(f"unknown op {op!r}")

    def dot(self, a, b, u64 acc=0):
        """Sequential multiply-accumulate ``acc + a[0]*b[0] + ...``, rounding
        after every product and every sum."""
        cdef Py_ssize_t i, n = len(a)
        if len(b) != n:
            raise ValueError("length mismatch")
        cdef u64 x, y
        for i in range(n):
            x = self._check(a[i])
            y = self._check(b[i])
            acc = encode(self.ps, self.es, add_sub(self.ps, self.es,
                         decode(self.ps, self.es, acc),
                         decode(self.ps, self.es,
                                encode(self.ps, self.es,
                                       mul(decode(self.ps, self.es, x),
                                           decode(self.ps, self.es, y)))), 0))
        return acc
