"""State-adding multi-step Darboux transformations.

Seeds with labels d_j = N+1+m_j > N produce a deformed system of order
N+M+1 on the grid -M..N.  The new polynomials live in eta(x; lambda+M*delta)
and come in two kinds: levels n outside the seed set are exact polynomial
quotients of seed Casoratians by prod_j Lambda(x+j-1; lambda+delta), and the
added levels n = d_i are built from the first-order data of a shifted-N
expansion (the X/Y grid functions and the two companion polynomial families)
assembled into a determinant with a replacement last column.

Divisions by the Lambda product are performed on exact polynomial
representations recovered by interpolation, never pointwise: the divisor
vanishes at most grid points of interest and only the quotient is a
polynomial there.
"""

from .casoratian import casoratian, det_bareiss
from .exact import S, ONE
from .families import (
    ParameterError,
    Params,
    d_monic_squared,
    d_prime_monic_squared,
    e_dtilde,
    e_type,
    energy,
    eta,
    eta_d,
    eta_type,
    kappa,
    phi0_squared,
    poly_monic,
    potential_B,
    potential_D,
    ptilde1,
    ptilde2,
    rho,
    shift_params,
)
from .gridpoly import evaluate, divide_exact, interpolate
from .krein_adler import index_ell
from .structural import (
    c_eta,
    c_eta_n,
    c_eta_prime,
    lambda_m,
    lambda_product,
    varphi_m,
)
from .exact import pochhammer as ph, q_pochhammer as qp


def x_shift_sum(p: Params, M: int, j: int, x: int):
    """First-order coefficient of the Lambda ratio under an N shift (X_{M,j})."""
    t = eta_type(p)
    N = p.N
    if t == 1:
        return sum((S(1, -x + N - M + 1 + l) for l in range(M - j + 1)), S(0))
    if t == 2:
        d = eta_d(p)
        r = sum((S(1, -x + N - M + 1 + l) for l in range(M - j + 1)), S(0))
        return r + sum((1 / (x + N + 1 + d + l) for l in range(j - 1)), S(0))
    q = S(p.q)
    if t == 3:
        r = S(1 - j)
        for l in range(M - j + 1):
            r -= 1 / (1 - q ** (x - N + M - 1 - l))
        return r
    if t == 4:
        r = S(j - 1)
        for l in range(M - j + 1):
            r += 1 / (1 - q ** (-x + N - M + 1 + l))
        return r
    d = eta_d(p)
    r = sum((1 / (1 - q ** (-x + N - M + 1 + l)) for l in range(M - j + 1)), S(0))
    return r + sum((1 / (1 - d * q ** (x + N + 1 + l)) for l in range(j - 1)), S(0))


def y_shift_sum(p: Params, M: int, j: int, x: int):
    """Closed form of Lambda(x+j-1) * X_{M,j}(x), finite at the Lambda zeros."""
    t = eta_type(p)
    N = p.N
    if t == 1:
        total = S(0)
        for l in range(M - j + 1):
            total += ph(S(-x - j + 1), N - M + j + l) * ph(S(-x + N - M + l + 2), M - j - l)
        return S((-1) ** (N + 1)) * total
    if t == 2:
        d = eta_d(p)
        s1 = S(0)
        for l in range(M - j + 1):
            s1 += ph(S(-x - j + 1), N - M + j + l) * ph(S(-x + N - M + l + 2), M - j - l)
        s2 = S(0)
        for l in range(j - 1):
            s2 += ph(x + j - 1 + d, N - j + 2 + l) * ph(x + N + l + 2 + d, j - 2 - l)
        return S((-1) ** (N + 1)) * (ph(x + j - 1 + d, N + 1) * s1 + ph(S(-x - j + 1), N + 1) * s2)
    q = S(p.q)
    if t == 3:
        total = S(0)
        for l in range(M - j + 1):
            total += qp(q ** (x + j - 1 - N), q, M - j - l) * qp(q ** (x - N + M - l), q, N - M + j + l)
        return (1 - j) * lambda_product(p, x + j - 1) - q ** (N * (N + 1) // 2) * total
    if t == 4:
        total = S(0)
        for l in range(M - j + 1):
            total += qp(q ** (-x - j + 1), q, N - M + j + l) * qp(q ** (-x + N - M + l + 2), q, M - j - l)
        return (j - 1) * lambda_product(p, x + j - 1) + S((-1) ** (N + 1)) * q ** (
            -(N * (N + 1) // 2)
        ) * total
    d = eta_d(p)
    s1 = S(0)
    for l in range(M - j + 1):
        s1 += qp(q ** (-x - j + 1), q, N - M + j + l) * qp(q ** (-x + N - M + l + 2), q, M - j - l)
    s2 = S(0)
    for l in range(j - 1):
        s2 += qp(d * q ** (x + j - 1), q, N - j + 2 + l) * qp(d * q ** (x + N + l + 2), q, j - 2 - l)
    return (
        S((-1) ** (N + 1)) * q ** (-(N * (N + 1) // 2))
        * (qp(d * q ** (x + j - 1), q, N + 1) * s1 + qp(q ** (-x - j + 1), q, N + 1) * s2)
    )


class AdditionSystem:
    """A state-adding deformation: parameters plus seed labels above N."""

    def __init__(self, p: Params, labels, fault=None):
        labels = tuple(sorted(labels))
        if len(set(labels)) != len(labels):
            raise ParameterError("labels must be mutually distinct")
        if labels and labels[0] <= p.N:
            raise ParameterError("state-adding labels need d_j > N")
        if p.N < 1:
            raise ParameterError("system needs N >= 1")
        M = len(labels)
        if M > p.N:
            raise ParameterError("need M <= N")
        self.params = p
        self.labels = labels
        self.M = M
        self.m_labels = tuple(d - p.N - 1 for d in labels)
        self.ell_dp = index_ell(self.m_labels)
        self.grid = range(-M, p.N + 1)
        self.levels = tuple(range(p.N + 1)) + labels
        self.p_delta = shift_params(p, 1)
        self.p_prime = shift_params(p, p.N + 1, p.N + 1)
        self.p_prime_down = shift_params(p, p.N + 1, p.N)  # lambda' - delta_bar
        self.p_bar = shift_params(p, 0, -M)                # lambda - M*delta_bar
        self.p_m = shift_params(p, M)
        self.fault = fault
        self._cache = {}

    # -- denominator polynomial -------------------------------------------

    def _xi_from(self, base: Params, pref, x: int):
        seeds = [(lambda y, m=m: poly_monic(base, m, y)) for m in self.m_labels]
        w = casoratian(seeds, x)
        return pref * w / (c_eta(base, self.m_labels) * varphi_m(base, self.M, x))

    def xi_monic(self, x: int):
        """Monic denominator polynomial at lambda (degree ell_D' in eta(x; lambda+(M-1)delta))."""
        key = ("xi", x)
        if key not in self._cache:
            pref = rho(self.params) ** ((self.params.N + 1) * self.ell_dp)
            self._cache[key] = self._xi_from(self.p_prime, pref, x - self.params.N - 1)
        return self._cache[key]

    def xi_monic_delta(self, x: int):
        """Monic denominator polynomial at lambda + delta."""
        key = ("xid", x)
        if key not in self._cache:
            pref = rho(self.params) ** (self.params.N * self.ell_dp)
            self._cache[key] = self._xi_from(self.p_prime_down, pref, x - self.params.N)
        return self._cache[key]

    def xi(self, x: int):
        """Denominator polynomial normalised to 1 at x = -M."""
        anchor = self.xi_monic(-self.M)
        if anchor == 0:
            raise ParameterError("Xi anchor vanishes at x = -M")
        return self.xi_monic(x) / anchor

    # -- polynomial construction -------------------------------------------

    def _eta_var(self, x: int):
        return eta(self.p_m, x)

    def _lambda_delta_poly(self):
        key = "lamdelta"
        if key not in self._cache:

            def val(x):
                r = ONE
                for j in range(1, self.M + 1):
                    r = r * lambda_product(self.p_delta, x + j - 1)
                return r

            self._cache[key] = self._interp(val, self.M * self.params.N)
        return self._cache[key]

    def _interp(self, val, deg: int):
        pts = []
        seen = set()
        x = -self.M
        guard = 0
        while len(pts) < deg + 3:
            guard += 1
            if guard > 6 * (deg + 20):
                raise ParameterError("could not collect interpolation nodes")
            t = self._eta_var(x)
            if t not in seen:
                try:
                    v = val(x)
                except (ParameterError, ZeroDivisionError):
                    v = None
                if v is not None:
                    seen.add(t)
                    pts.append((t, v))
            x += 1
        coeffs = interpolate(pts[: deg + 1])
        for t, v in pts[deg + 1:]:
            if evaluate(coeffs, t) != v:
                raise ParameterError("interpolated values exceed the claimed degree")
        return coeffs

    def _rho_lead(self):
        M, N = self.M, self.params.N
        if self.fault == "drop_rho_lead":
            return ONE
        return rho(self.params) ** ((M * (M - 1) // 2) * N)

    def poly_coeffs(self, n: int):
        """Coefficients of the level-n polynomial in eta(x; lambda+M*delta)."""
        key = ("qc", n)
        if key not in self._cache:
            if n in self.labels:
                i = self.labels.index(n) + 1
                coeffs = self._added_coeffs(i, include_third=True)
            else:
                p = self.params
                seeds = [(lambda y, d=d: poly_monic(p, d, y)) for d in self.labels]
                seeds.append(lambda y: poly_monic(p, n, y))
                cn = c_eta_n(p, self.labels, n)

                def val(x):
                    w = casoratian(seeds, x)
                    return w / (cn * varphi_m(p, self.M + 1, x))

                num = self._interp(val, self.ell_dp + n + self.M * p.N)
                quot = divide_exact(num, self._lambda_delta_poly())
                coeffs = [self._rho_lead() * c for c in quot]
            self._cache[key] = coeffs
        return self._cache[key]

    def _r_column(self, i: int, x: int, include_third: bool):
        """Replacement column entries R_j(x), j = 1..M+1, for the i-th seed."""
        p = self.params
        d_i = self.labels[i - 1]
        m_i = self.m_labels[i - 1]
        rr = rho(p) ** ((p.N + 1) * m_i)
        col = []
        for j in range(1, self.M + 2):
            xj = x + j - 1
            r = (
                rr * y_shift_sum(p, self.M, j, x) * poly_monic(self.p_prime, m_i, xj - p.N - 1)
                + ptilde1(p, d_i, xj)
            )
            if include_third:
                r = r + rr * lambda_product(p, xj) * ptilde2(p, m_i, xj)
            col.append(r)
        return col

    def _added_coeffs(self, i: int, include_third: bool):
        p = self.params
        d_i = self.labels[i - 1]
        cpr = c_eta_prime(p, self.labels, i)
        pref = rho(p) ** (-d_i) / cpr * self._rho_lead()

        def val(x):
            rows = []
            rcol = self._r_column(i, x, include_third)
            for j in range(1, self.M + 2):
                xj = x + j - 1
                rows.append([poly_monic(p, d, xj) for d in self.labels] + [rcol[j - 1]])
            det = det_bareiss(rows)
            return det / varphi_m(p, self.M + 1, x)

        num = self._interp(val, self.ell_dp + d_i + self.M * p.N)
        quot = divide_exact(num, self._lambda_delta_poly())
        return [pref * c for c in quot]

    def added_coeffs_without_third_term(self, i: int):
        """Added-level polynomial built with the grid-vanishing term dropped."""
        return self._added_coeffs(i, include_third=False)

    def value(self, n: int, x: int):
        """Monic-normalised polynomial value at integer x."""
        return evaluate(self.poly_coeffs(n), self._eta_var(x))

    def value_normalized(self, n: int, x: int):
        anchor = self.value(n, -self.M)
        if anchor == 0:
            raise ParameterError("polynomial vanishes at the x=-M anchor")
        return self.value(n, x) / anchor

    # -- deformed system ----------------------------------------------------

    def _b_coeff(self, x: int):
        b = potential_B(self.p_bar, x + self.M)
        if b == 0:
            return S(0)
        den = self.xi_monic(x + 1)
        if den == 0:
            raise ParameterError("weight singular: Xi vanishes on the grid")
        return b * self.xi_monic(x) / den

    def _d_coeff(self, x: int):
        d = potential_D(self.p_bar, x + self.M)
        if d == 0:
            return S(0)
        den = self.xi_monic(x)
        if den == 0:
            raise ParameterError("weight singular: Xi vanishes on the grid")
        return d * self.xi_monic(x + 1) / den

    def potential_b(self, x: int):
        """Deformed up potential; vanishes at x = N."""
        c = self._b_coeff(x)
        if c == 0:
            return c
        return c * self.xi_monic_delta(x + 1) / self.xi_monic_delta(x)

    def potential_d(self, x: int):
        """Deformed down potential; vanishes at x = -M."""
        c = self._d_coeff(x)
        if c == 0:
            return c
        return c * self.xi_monic_delta(x - 1) / self.xi_monic_delta(x)

    def matrix(self):
        """Similarity-transformed tridiagonal operator, rows x = -M..N."""
        rows = []
        for x in self.grid:
            row = {}
            if x + 1 in self.grid:
                row[x + 1] = -self._b_coeff(x)
            if x - 1 in self.grid:
                row[x - 1] = -self._d_coeff(x)
            row[x] = self.potential_b(x) + self.potential_d(x)
            rows.append(row)
        return rows

    def apply_matrix(self, vec):
        rows = self.matrix()
        out = []
        for x, row in zip(self.grid, rows):
            out.append(sum((c * vec[y] for y, c in row.items()), S(0)))
        return out

    def eigen_residual(self, n: int):
        vec = {x: self.value(n, x) for x in self.grid}
        en = energy(self.params, n)
        return [hv - en * vec[x] for x, hv in zip(self.grid, self.apply_matrix(vec))]

    def weight(self, x: int):
        den = self.xi_monic(x) * self.xi_monic(x + 1)
        if den == 0:
            raise ParameterError("weight singular: Xi vanishes on the grid")
        return phi0_squared(self.p_bar, x + self.M) / den

    def orthogonality_sum(self, n: int, m: int):
        return sum(
            (self.weight(x) * self.value(n, x) * self.value(m, x) for x in self.grid), S(0)
        )

    def norm_squared(self, n: int):
        """Closed-form monic normalisation constant for n in {0..N} or n = d_i."""
        p = self.params
        M, N = self.M, p.N
        binm2 = M * (M - 1) // 2
        common = kappa(p) ** binm2 * rho(p) ** (-2 * (2 * N + 1) * binm2)
        common = common * lambda_m(p, M, 0) / phi0_squared(self.p_bar, M)
        common = common * varphi_m(p, M, N + 1) ** 2 / varphi_m(self.p_prime, M, 0) ** 2
        cdp = c_eta(self.p_prime, self.m_labels)
        en = energy(p, n)
        if n in self.labels:
            i = self.labels.index(n) + 1
            r = d_prime_monic_squared(p, n) * common
            for j, d in enumerate(self.labels, start=1):
                bj = potential_B(shift_params(p, j - 1), 0)
                if j == i:
                    r = r * bj
                else:
                    r = r * bj / (en - energy(p, d))
            r = r * c_eta_prime(p, self.labels, i) ** 2 / cdp ** 2
            r = r * rho(p) ** (2 * n) * kappa(p) ** (-n)
            t = e_type(p)
            if t == 2:
                r = r / (2 * n + e_dtilde(p))
            elif t == 5:
                r = r / (1 - e_dtilde(p) * S(p.q) ** (2 * n))
            return r
        r = d_monic_squared(p, n) * common
        for j, d in enumerate(self.labels, start=1):
            bj = potential_B(shift_params(p, j - 1), 0)
            r = r * bj / (en - energy(p, d))
        r = r * c_eta_n(p, self.labels, n) ** 2 / cdp ** 2
        return r

    def rank(self):
        """Exact rank of the matrix of all level vectors on the grid."""
        rows = [[self.value(n, x) for x in self.grid] for n in self.levels]
        return _rank(rows)


def is_regular(sys: AdditionSystem) -> bool:
    """True when Xi is zero-free on every point the operator and weight use.

    Index sets violating the parity condition may place a zero of Xi on the
    grid (an ill-defined weight); this probes for it.
    """
    try:
        for x in sys.grid:
            sys.weight(x)
            sys.potential_b(x)
            sys.potential_d(x)
    except (ParameterError, ZeroDivisionError):
        return False
    return True


def addition_sets(p: Params, M: int, m_max: int, violating: bool, count: int = 1,
                  exclude=()):
    """First `count` regular seed-label sets with m_j <= m_max.

    `violating` selects sets that break the parity condition d_j - d_{j-1}
    odd (d_0 = N); the scan order is lexicographic in the m labels, so the
    choice is deterministic.
    """
    from itertools import combinations

    found = []
    for ms in combinations(range(m_max + 1), M):
        labels = tuple(p.N + 1 + m for m in ms)
        if labels in exclude:
            continue
        seq = (p.N,) + labels
        ok_parity = all((b - a) % 2 == 1 for a, b in zip(seq, seq[1:]))
        if ok_parity == violating:
            continue
        if is_regular(AdditionSystem(p, labels)):
            found.append(labels)
            if len(found) >= count:
                break
    return found


def _rank(rows):
    m = [[S(v) for v in row] for row in rows]
    rank = 0
    cols = len(m[0]) if m else 0
    for c in range(cols):
        piv = None
        for r in range(rank, len(m)):
            if m[r][c] != 0:
                piv = r
                break
        if piv is None:
            continue
        m[rank], m[piv] = m[piv], m[rank]
        pv = m[rank][c]
        for r in range(rank + 1, len(m)):
            if m[r][c] != 0:
                f = m[r][c] / pv
                for cc in range(c, cols):
                    m[r][cc] -= f * m[rank][cc]
        rank += 1
    return rank
