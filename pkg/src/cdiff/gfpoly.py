"""Dense polynomials over GF(p), constant coefficient first.

Only what field construction needs: reduction, gcd, modular powering and
the irreducibility test used to validate or select a modulus.
"""
import itertools


def is_prime(m):
    if m < 2:
        return False
    if m % 2 == 0:
        return m == 2
    f = 3
    while f * f <= m:
        if m % f == 0:
            return False
        f += 2
    return True


def prime_factors(m):
    """Distinct prime factors of m, ascending."""
    out = []
    f = 2
    while f * f <= m:
        if m % f == 0:
            out.append(f)
            while m % f == 0:
                m //= f
        f += 1 if f == 2 else 2
    if m > 1:
        out.append(m)
    return out


def strip(a):
    a = list(a)
    while a and a[-1] == 0:
        a.pop()
    return a


def sub(a, b, p):
    m = max(len(a), len(b))
    a = list(a) + [0] * (m - len(a))
    b = list(b) + [0] * (m - len(b))
    return strip([(x - y) % p for x, y in zip(a, b)])


def mul(a, b, p):
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] = (out[i + j] + x * y) % p
    return strip(out)


def divmod_poly(a, b, p):
    b = strip(b)
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    a = strip(a)
    inv_lead = pow(b[-1], -1, p)
    db = len(b) - 1
    quot = [0] * max(len(a) - db, 0)
    while len(a) - 1 >= db and a:
        shift = len(a) - 1 - db
        coef = a[-1] * inv_lead % p
        quot[shift] = coef
        for i, y in enumerate(b):
            a[i + shift] = (a[i + shift] - coef * y) % p
        a = strip(a)
    return strip(quot), a


def rem(a, b, p):
    return divmod_poly(a, b, p)[1]


def gcd(a, b, p):
    a, b = strip(a), strip(b)
    while b:
        a, b = b, rem(a, b, p)
    if a:
        inv = pow(a[-1], -1, p)
        a = [x * inv % p for x in a]
    return a


def powmod(a, e, m, p):
    result = [1]
    base = rem(a, m, p)
    while e:
        if e & 1:
            result = rem(mul(result, base, p), m, p)
        e >>= 1
        if e:
            base = rem(mul(base, base, p), m, p)
    return result


def evaluate(f, x, p):
    acc = 0
    for c in reversed(f):
        acc = (acc * x + c) % p
    return acc


def is_irreducible(f, p):
    """Ben-Or test: f of degree n is irreducible iff gcd(x^(p^i) - x, f) = 1 for i <= n/2."""
    f = strip(f)
    n = len(f) - 1
    if n < 1:
        return False
    if n == 1:
        return True
    if f[0] == 0:
        return False
    if p <= 16 and any(evaluate(f, r, p) == 0 for r in range(1, p)):
        return False
    x = [0, 1]
    h = x
    for _ in range(n // 2):
        h = powmod(h, p, f, p)
        if len(gcd(sub(h, x, p), f, p)) > 1:
            return False
    return True


def monic_candidates(p, n):
    """Monic degree-n polynomials, lexicographic with the constant term most significant."""
    for low in itertools.product(range(p), repeat=n):
        yield list(low) + [1]


def smallest_irreducible(p, n):
    for f in monic_candidates(p, n):
        if is_irreducible(f, p):
            return f
    raise AssertionError(f"no irreducible polynomial of degree {n} over GF({p})")  # pragma: no cover


def irreducibles(p, n):
    """All monic irreducibles of degree n in the same deterministic order."""
    return [f for f in monic_candidates(p, n) if is_irreducible(f, p)]
