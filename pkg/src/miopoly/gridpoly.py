"""Dense exact polynomials over rational coefficients.

A polynomial is a list of Scalar coefficients, constant term first.  Used to
recover "polynomial in eta" representations by interpolation at grid nodes
with distinct eta values, and to perform the exact divisions that the
deformed-polynomial constructions require (pointwise division is unusable
where the divisor vanishes on the grid).
"""

from .exact import S, ZERO


def trim(coeffs):
    c = list(coeffs)
    while c and c[-1] == 0:
        c.pop()
    return c


def degree(coeffs) -> int:
    """Degree of the trimmed polynomial; -1 for the zero polynomial."""
    return len(trim(coeffs)) - 1


def evaluate(coeffs, t):
    r = ZERO
    for c in reversed(coeffs):
        r = r * t + c
    return r


def add(a, b):
    n = max(len(a), len(b))
    return trim([(a[i] if i < len(a) else 0) + (b[i] if i < len(b) else 0) for i in range(n)])


def scale(a, s):
    return trim([c * s for c in a])


def mul(a, b):
    if not a or not b:
        return []
    out = [ZERO] * (len(a) + len(b) - 1)
    for i, ca in enumerate(a):
        if ca == 0:
            continue
        for j, cb in enumerate(b):
            out[i + j] += ca * cb
    return trim(out)


def interpolate(points):
    """Exact polynomial through (t, value) pairs with pairwise distinct t.

    Newton divided differences expanded to dense coefficients.
    """
    ts = [S(t) for t, _ in points]
    if len(set(ts)) != len(ts):
        raise ValueError("interpolation nodes must be distinct")
    divided = [S(v) for _, v in points]
    for level in range(1, len(points)):
        for i in range(len(points) - 1, level - 1, -1):
            divided[i] = (divided[i] - divided[i - 1]) / (ts[i] - ts[i - level])
    coeffs = []
    basis = [S(1)]
    for i, d in enumerate(divided):
        coeffs = add(coeffs, scale(basis, d))
        basis = mul(basis, [-ts[i], S(1)])
    return coeffs


def divmod_exact(num, den):
    """Long division over the rationals; returns (quotient, remainder)."""
    den = trim(den)
    if not den:
        raise ZeroDivisionError("polynomial division by zero")
    rem = [S(c) for c in trim(num)]
    quot = [ZERO] * max(0, len(rem) - len(den) + 1)
    lead = den[-1]
    while len(rem) >= len(den):
        shift = len(rem) - len(den)
        factor = rem[-1] / lead
        quot[shift] = factor
        for i, c in enumerate(den):
            rem[shift + i] -= factor * c
        rem = trim(rem)
        if not rem:
            break
    return trim(quot), rem


def divide_exact(num, den):
    """Exact quotient; raises if the division leaves a remainder."""
    q, r = divmod_exact(num, den)
    if r:
        raise ValueError("polynomial division left a nonzero remainder")
    return q
