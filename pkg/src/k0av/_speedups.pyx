# cython: language_level=3
"""Compiled binary-quadratic-form kernels.

Same surface as `_formcore`.  All functions guard their inputs against int64
overflow and raise OverflowError when out of range; callers fall back to the
pure-Python twin.  Division keeps Python floor semantics (cdivision is off).
"""


cdef long long REDUCE_LIMIT = 1 << 30
cdef long long ENUM_LIMIT = 1 << 40
cdef long long COMPOSE_A_LIMIT = 1 << 12
cdef long long COMPOSE_C_LIMIT = 1 << 26


def kronecker(object a_in, object n_in):
    cdef long long a = a_in  # raises OverflowError beyond int64
    cdef long long n = n_in
    cdef int result = 1
    cdef long long t
    if n == 0:
        return 1 if (a == 1 or a == -1) else 0
    if n < 0:
        n = -n
        if a < 0:
            result = -1
    while n % 2 == 0:
        n //= 2
        if a % 2 == 0:
            return 0
        t = a % 8
        if t == 3 or t == 5:
            result = -result
    a %= n
    while a != 0:
        while a % 2 == 0:
            a //= 2
            t = n % 8
            if t == 3 or t == 5:
                result = -result
        t = a
        a = n
        n = t
        if a % 4 == 3 and n % 4 == 3:
            result = -result
        a %= n
    return result if n == 1 else 0


cdef (long long, long long, long long) _reduce_ll(long long a, long long b, long long c):
    cdef long long r, t
    while True:
        if b > a or b <= -a:
            r = (a - b) // (2 * a)
            c = a * r * r + b * r + c
            b = b + 2 * r * a
        if a > c:
            t = a
            a = c
            c = t
            b = -b
            continue
        break
    if b < 0 and a == c:
        b = -b
    return a, b, c


def reduce_triple(object a_in, object b_in, object c_in):
    if not (0 < a_in < REDUCE_LIMIT and 0 < c_in < REDUCE_LIMIT):
        raise OverflowError("form coefficients out of compiled range")
    if not (-REDUCE_LIMIT < b_in < REDUCE_LIMIT):
        raise OverflowError("form coefficients out of compiled range")
    cdef long long a = a_in, b = b_in, c = c_in
    a, b, c = _reduce_ll(a, b, c)
    return (int(a), int(b), int(c))


cdef (long long, long long, long long) _xgcd_ll(long long a, long long b):
    cdef long long x0 = 1, y0 = 0, x1 = 0, y1 = 1, q, t
    while b != 0:
        q = a // b
        t = a - q * b
        a = b
        b = t
        t = x0 - q * x1
        x0 = x1
        x1 = t
        t = y0 - q * y1
        y0 = y1
        y1 = t
    if a < 0:
        a = -a
        x0 = -x0
        y0 = -y0
    return a, x0, y0


def compose_triples(object a1_in, object b1_in, object c1_in,
                    object a2_in, object b2_in, object c2_in):
    if not (0 < a1_in <= COMPOSE_A_LIMIT and 0 < a2_in <= COMPOSE_A_LIMIT):
        raise OverflowError("form coefficients out of compiled range")
    if abs(b1_in) > a1_in or abs(b2_in) > a2_in:
        raise OverflowError("form coefficients out of compiled range")
    if not (0 < c1_in <= COMPOSE_C_LIMIT and 0 < c2_in <= COMPOSE_C_LIMIT):
        raise OverflowError("form coefficients out of compiled range")
    cdef long long a1 = a1_in, b1 = b1_in, c1 = c1_in
    cdef long long a2 = a2_in, b2 = b2_in, c2 = c2_in
    cdef long long d = b1 * b1 - 4 * a1 * c1
    cdef long long beta = (b1 + b2) // 2
    cdef long long g1, y1, e, x2, t, s, a3, b3, c3, rem, dummy
    g1, dummy, y1 = _xgcd_ll(a1, a2)
    e, x2, t = _xgcd_ll(g1, beta)
    s = x2 * y1
    a3 = (a1 // e) * (a2 // e)
    b3 = b2 + 2 * (a2 // e) * (s * ((b1 - b2) // 2) - t * c2)
    b3 %= 2 * a3
    rem = (b3 * b3 - d) % (4 * a3)
    if rem != 0:
        raise OverflowError("composition congruence failed in compiled range")
    c3 = (b3 * b3 - d) // (4 * a3)
    a3, b3, c3 = _reduce_ll(a3, b3, c3)
    return (int(a3), int(b3), int(c3))


def reduced_forms_disc(object d_in):
    if not (-ENUM_LIMIT < d_in < 0):
        raise OverflowError("discriminant out of compiled range")
    cdef long long d = d_in
    cdef long long a = 1, b, c, t, g
    cdef list out = []
    while 3 * a * a <= -d:
        b = -a + 1
        while b <= a:
            t = b * b - d
            if (b - d) % 2 == 0 and t % (4 * a) == 0:
                c = t // (4 * a)
                if c >= a and not (a == c and b < 0):
                    g = _gcd_ll(_gcd_ll(a, b if b >= 0 else -b), c)
                    if g == 1:
                        out.append((int(a), int(b), int(c)))
            b += 1
        a += 1
    out.sort()
    return out


cdef long long _gcd_ll(long long a, long long b):
    cdef long long t
    while b != 0:
        t = a % b
        a = b
        b = t
    return a
