"""Coordinate combinatorics shared by the deformation constructions.

Everything here is keyed by the five coordinate types: the node polynomial
Lambda(x) = prod_k (eta(x)-eta(k)), its shifted ratios and the combination
Lambda_M, the auxiliary varphi_M products, and the leading coefficients
c_eta of Casoratians of powers of eta.  Product definitions are the source
of truth; the tabulated closed forms are cross-checked by the identity
suite.
"""

from .exact import S, ONE, pochhammer as ph, q_pochhammer as qp
from .families import Params, ParameterError, eta, eta_d, eta_type, shift_params, varphi


def lambda_product(p: Params, x: int):
    """prod_{k=0}^{N} (eta(x)-eta(k)); requires N >= 0."""
    if p.N < 0:
        raise ParameterError("lambda product needs N >= 0")
    ex = eta(p, x)
    r = ONE
    for k in range(p.N + 1):
        r = r * (ex - eta(p, k))
    return r


def lambda_closed(p: Params, x: int):
    t = eta_type(p)
    N = p.N
    sign = S((-1) ** (N + 1))
    if t == 1:
        return sign * ph(S(-x), N + 1)
    if t == 2:
        return sign * ph(S(-x), N + 1) * ph(x + eta_d(p), N + 1)
    q = S(p.q)
    if t == 3:
        return sign * qp(q ** (-x), q, N + 1) * q ** ((N + 1) * x)
    if t == 4:
        return sign * q ** (-(N * (N + 1) // 2)) * qp(q ** (-x), q, N + 1)
    d = eta_d(p)
    return (
        sign * q ** (-(N * (N + 1) // 2))
        * qp(q ** (-x), q, N + 1) * qp(d * q ** x, q, N + 1)
    )


def lambda_shifted_closed(p: Params, M: int, x: int):
    """Lambda(x+M; lambda - M*delta_bar), vanishing exactly on -M..N."""
    t = eta_type(p)
    N = p.N
    sign = S((-1) ** (N + M + 1))
    if t == 1:
        return sign * ph(S(-x - M), N + M + 1)
    if t == 2:
        return sign * ph(S(-x - M), N + M + 1) * ph(x + eta_d(p), N + M + 1)
    q = S(p.q)
    if t == 3:
        return sign * qp(q ** (-x - M), q, N + M + 1) * q ** ((N + M + 1) * (x + M))
    if t == 4:
        return sign * q ** (-((N + M) * (N + M + 1) // 2)) * qp(q ** (-x - M), q, N + M + 1)
    d = eta_d(p)
    return (
        sign * q ** (-((N + M) * (N + M + 1) // 2))
        * qp(q ** (-x - M), q, N + M + 1) * qp(d * q ** x, q, N + M + 1)
    )


def _lambda_ratio_core(t: int, M: int, j: int, v: dict):
    """Lambda(x+j-1;lambda)/Lambda(x;lambda+M*delta) from prepared base values.

    Ring-generic so the first-order expansion oracle can reuse it.
    """
    sign = (-1) ** M
    if t == 1:
        return sign * ph(v["mxj"], j - 1) * ph(v["mxNM"], M + 1 - j)
    if t == 2:
        return (
            sign
            * ph(v["mxj"], j - 1) * ph(v["xNd"], j - 1)
            * ph(v["mxNM"], M + 1 - j) * ph(v["xjd"], M + 1 - j)
        )
    q = v["q"]
    if t == 3:
        return (
            sign * v["qjN"] * v["qxM"]
            * qp(v["qmxj"], q, j - 1) * qp(v["qmxNM"], q, M + 1 - j)
        )
    if t == 4:
        return sign * v["qpow"] * qp(v["qmxj"], q, j - 1) * qp(v["qmxNM"], q, M + 1 - j)
    return (
        sign * v["qpow"]
        * qp(v["qmxj"], q, j - 1) * qp(v["dqxN"], q, j - 1)
        * qp(v["qmxNM"], q, M + 1 - j) * qp(v["dqxj"], q, M + 1 - j)
    )


def lambda_ratio_values(p: Params, M: int, j: int, x: int) -> dict:
    t = eta_type(p)
    N = p.N
    if t in (1, 2):
        v = {"mxj": S(-x - j + 1), "mxNM": S(-x + N - M + 1)}
        if t == 2:
            d = eta_d(p)
            v["xNd"] = x + N + 1 + d
            v["xjd"] = x + j - 1 + d
        return v
    q = S(p.q)
    v = {"q": q, "qmxj": q ** (-x - j + 1), "qmxNM": q ** (-x + N - M + 1)}
    if t == 3:
        v["qjN"] = q ** ((j - 1) * (N + 1))
        v["qxM"] = q ** (M * x)
    else:
        v["qpow"] = q ** (M * (M - 1) // 2 - M * N)
        if t == 5:
            d = eta_d(p)
            v["dqxN"] = d * q ** (x + N + 1)
            v["dqxj"] = d * q ** (x + j - 1)
    return v


def lambda_ratio(p: Params, M: int, j: int, x: int):
    """Closed form of Lambda(x+j-1;lambda)/Lambda(x;lambda+M*delta), 1<=j<=M+1."""
    return _lambda_ratio_core(eta_type(p), M, j, lambda_ratio_values(p, M, j, x))


def lambda_m(p: Params, M: int, x: int):
    """Closed form of Lambda_M(x); poles raise ParameterError."""
    t = eta_type(p)
    N = p.N
    try:
        if t == 1:
            return 1 / (ph(S(x + 1), M) * ph(S(x - N), M))
        if t == 2:
            d = eta_d(p)
            return 1 / (
                ph(S(x + 1), M) * ph(S(x - N), M) * ph(x + d, M) * ph(x + N + 1 + d, M)
            )
        q = S(p.q)
        if t == 3:
            return q ** (-2 * M * N) / (qp(q ** (x + 1), q, M) * qp(q ** (x - N), q, M))
        if t == 4:
            return (
                q ** (M * (M + N)) * q ** (2 * M * x)
                / (qp(q ** (x + 1), q, M) * qp(q ** (x - N), q, M))
            )
        d = eta_d(p)
        return (
            q ** (M * (M + N)) * q ** (2 * M * x)
            / (qp(q ** (x + 1), q, M) * qp(q ** (x - N), q, M)
               * qp(d * q ** x, q, M) * qp(d * q ** (x + N + 1), q, M))
        )
    except ZeroDivisionError:
        raise ParameterError(f"Lambda_M has a pole at x={x}")


def lambda_m_def(p: Params, M: int, x: int):
    """Definitional Lambda_M: squared Lambda-ratio times Lambda(x)Lambda(x+M)."""
    pd = shift_params(p, 1, 0)
    num = ONE
    for j in range(1, M + 1):
        num = num * lambda_product(pd, x + j - 1)
    den = ONE
    for j in range(1, M + 2):
        den = den * lambda_product(p, x + j - 1)
    if den == 0:
        raise ParameterError(f"Lambda_M definition has a pole at x={x}")
    return (num / den) ** 2 * lambda_product(p, x) * lambda_product(p, x + M)


def varphi_m(p: Params, M: int, x: int):
    """Closed form of varphi_M(x); varphi_0 = varphi_1 = 1."""
    if M <= 1:
        return ONE
    t = eta_type(p)
    if t == 1:
        return ONE
    if t == 2:
        d = eta_d(p)
        num = ONE
        for j in range(1, M // 2 + 1):
            num = num * ph(2 * x + d + 2 * j - 1, 2 * M - 4 * j + 1)
        den = ONE
        for j in range(1, M):
            den = den * ph(d + 1, j)
        return num / den
    q = S(p.q)
    binm2 = M * (M - 1) // 2
    binm3 = M * (M - 1) * (M - 2) // 6
    if t == 3:
        return q ** (binm2 * x + binm3)
    if t == 4:
        return q ** (-binm2 * x - binm3)
    d = eta_d(p)
    num = ONE
    for j in range(1, M // 2 + 1):
        num = num * qp(d * q ** (2 * x + 2 * j - 1), q, 2 * M - 4 * j + 1)
    den = ONE
    for j in range(1, M):
        den = den * qp(d * q, q, j)
    return num / den * q ** (-binm2 * x - binm3)


def varphi_m_def(p: Params, M: int, x: int):
    """Definitional varphi_M as the double product of eta differences."""
    r = ONE
    for k in range(2, M + 1):
        for j in range(1, k):
            e1 = eta(p, x + k - 1) - eta(p, x + j - 1)
            e0 = eta(p, k - j)
            if e0 == 0:
                raise ParameterError("varphi_M undefined: eta at a positive integer vanishes")
            r = r * e1 / e0
    return r


def _c_eta_pair(p: Params, da: int, db: int):
    # factor attached to an ordered label pair (da, db), da before db
    t = eta_type(p)
    if t in (1, 2):
        return S(db - da)
    q = S(p.q)
    if t == 3:
        return q ** da - q ** db
    return q ** (-db) - q ** (-da)


def _c_eta_extra(p: Params, M: int):
    # label-independent factors of c_eta for M labels
    t = eta_type(p)
    r = ONE
    if t == 2:
        d = eta_d(p)
        for j in range(1, M):
            r = r * ph(d + 1, j)
        return r
    if t in (1,):
        return r
    q = S(p.q)
    binm3 = M * (M - 1) * (M - 2) // 6
    if t == 3:
        r = q ** (-binm3)
    elif t == 4:
        r = q ** binm3
    else:
        r = q ** binm3
        d = eta_d(p)
        for j in range(1, M):
            r = r * qp(d * q, q, j)
    return r


def c_eta(p: Params, labels, skip_pair=None):
    """Leading coefficient of varphi_M^{-1} W_C[eta^{d_1},...,eta^{d_M}].

    skip_pair=(j,k) omits the factor of that ordered index pair (1-based),
    which is how the n=d_i degenerate normalisation is formed.
    """
    labels = tuple(labels)
    if len(set(labels)) != len(labels):
        raise ParameterError("index set labels must be mutually distinct")
    r = _c_eta_extra(p, len(labels))
    for j in range(len(labels)):
        for k in range(j + 1, len(labels)):
            if skip_pair == (j + 1, k + 1):
                continue
            r = r * _c_eta_pair(p, labels[j], labels[k])
    return r


def c_eta_n(p: Params, D, n: int):
    """c_eta of the label set D with n appended (n not in D)."""
    if n in tuple(D):
        raise ParameterError("c_eta_n needs n outside D")
    return c_eta(p, tuple(D) + (n,))


def c_eta_prime(p: Params, D, i: int):
    """Degenerate c_eta for n = d_i: the (i, n) pair factor is omitted (i 1-based)."""
    D = tuple(D)
    M = len(D)
    if not 1 <= i <= M:
        raise ParameterError("seed index out of range")
    labels = D + (D[i - 1],)
    r = _c_eta_extra(p, M + 1)
    for j in range(M + 1):
        for k in range(j + 1, M + 1):
            if (j + 1, k + 1) == (i, M + 1):
                continue
            r = r * _c_eta_pair(p, labels[j], labels[k])
    return r
