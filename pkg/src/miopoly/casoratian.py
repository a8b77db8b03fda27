"""Casorati determinants over exact grid functions.

The Casoratian of functions f_1..f_n at x is det(f_k(x+j-1)) with rows
indexed by the shift j and columns by the function k; the empty list gives 1.
Determinants are computed by fraction-free (Bareiss) elimination, which keeps
intermediate entries small even for the large rationals the deformation
algebra produces.
"""

from .exact import S, ZERO


class GridFunction:
    """Callable on integer points with per-instance memoisation.

    Evaluators must be pure; concurrent use is safe because the cache only
    ever stores the single value an argument can have.
    """

    def __init__(self, fn, name=None):
        self._fn = fn
        self._memo = {}
        self.name = name or getattr(fn, "__name__", "gridfn")

    def __call__(self, x: int):
        try:
            return self._memo[x]
        except KeyError:
            v = self._fn(x)
            self._memo[x] = v
            return v


def det_bareiss(rows):
    """Determinant of a square matrix of Scalars, fraction-free with pivoting."""
    n = len(rows)
    if n == 0:
        return S(1)
    m = [[S(v) for v in row] for row in rows]
    sign = 1
    prev = S(1)
    for k in range(n - 1):
        if m[k][k] == 0:
            for r in range(k + 1, n):
                if m[r][k] != 0:
                    m[k], m[r] = m[r], m[k]
                    sign = -sign
                    break
            else:
                return ZERO
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) / prev
        prev = m[k][k]
    return S(sign) * m[n - 1][n - 1]


def casoratian(fs, x: int):
    """W_C[f_1,...,f_n](x) = det(f_k(x+j-1)); 1 for the empty list."""
    n = len(fs)
    if n == 0:
        return S(1)
    rows = [[fs[k](x + j) for k in range(n)] for j in range(n)]
    return det_bareiss(rows)
