"""State-deleting multi-step Darboux transformations.

Deleting the levels D = {d_1 < ... < d_M} (all <= N) produces a system of
order N-M+1 on the grid 0..N-M whose eigenvectors are Casoratian-built
polynomials in eta(x; lambda+M*delta).  This module exposes the denominator
polynomial, the deformed polynomials (normalised and monic), the deformed
potentials and tridiagonal operator, orthogonality sums, closed-form norms,
the admissibility test for weight positivity, and the forward-shift
identities.

Everything is algebraic: construction and orthogonality work for any
parameter vector and any index set; positivity of the weight is a separate
question answered by the positivity module.
"""

from .casoratian import casoratian
from .exact import S, ONE
from .families import (
    ParameterError,
    Params,
    d_squared,
    energy,
    eta,
    kappa,
    leading_coeff,
    phi0_squared,
    poly,
    poly_monic,
    potential_B,
    potential_D,
    shift_params,
    varphi,
)
from .structural import c_eta, c_eta_n, varphi_m


def index_ell(labels) -> int:
    """sum d_j - M(M-1)/2: degree offset of the denominator polynomial."""
    M = len(labels)
    return sum(labels) - M * (M - 1) // 2


def index_ell_ka(labels) -> int:
    """sum d_j - M(M+1)/2: degree offset of the deleted-system polynomials."""
    M = len(labels)
    return sum(labels) - M * (M + 1) // 2


def index_mu(labels) -> int:
    """Smallest non-negative integer not in the label set."""
    m = 0
    while m in labels:
        m += 1
    return m


def index_shifted(labels, i: int):
    """The label set with every entry shifted by i."""
    shifted = tuple(d + i for d in labels)
    if any(d < 0 for d in shifted):
        raise ParameterError("shifted labels must stay non-negative")
    return shifted


def ka_admissible(labels) -> bool:
    """prod_j (m - d_j) >= 0 for every non-negative integer m.

    The sign is constant beyond max(D), so a finite scan decides it.
    """
    labels = tuple(labels)
    if not labels:
        return True
    for m in range(max(labels) + 2):
        prod = 1
        for d in labels:
            prod *= m - d
        if prod < 0:
            return False
    return True


def ka_admissible_parity(labels) -> bool:
    """Equivalent complement form: consecutive gaps of Z>=0 \\ D are odd."""
    labels = set(labels)
    comp = [m for m in range(max(labels, default=-1) + 3) if m not in labels]
    return all((b - a) % 2 == 1 for a, b in zip(comp, comp[1:]))


def c_ka(p: Params, labels):
    """Normalisation constant of the denominator Casoratian (ordered labels)."""
    M = len(labels)
    r = S((-1) ** (M * (M - 1) // 2)) * kappa(p) ** (-(M * (M - 1) * (M - 2) // 6))
    for j in range(M):
        bj = potential_B(shift_params(p, j), 0)
        for k in range(j + 1, M):
            r = r * (energy(p, labels[k]) - energy(p, labels[j])) / bj
    return r


def c_ka_n(p: Params, labels, n: int):
    return c_ka(p, tuple(labels) + (n,))


class DeletionSystem:
    """A state-deleting deformation: parameters plus the deleted label set."""

    def __init__(self, p: Params, labels, fault=None):
        labels = tuple(sorted(labels))
        if len(set(labels)) != len(labels):
            raise ParameterError("labels must be mutually distinct")
        if labels and (labels[0] < 0 or labels[-1] > p.N):
            raise ParameterError("state-deleting labels need 0 <= d_j <= N")
        if p.N < 1:
            raise ParameterError("system needs N >= 1")
        M = len(labels)
        if M > p.N:
            raise ParameterError("need M <= N")
        self.params = p
        self.labels = labels
        self.M = M
        self.mu = index_mu(labels)
        self.ell = index_ell(labels)
        self.ell_ka = index_ell_ka(labels)
        self.grid = range(0, p.N - M + 1)
        self.levels = tuple(n for n in range(p.N + 1) if n not in labels)
        self.p_shift = shift_params(p, M)
        self.fault = fault
        self._seeds = [(lambda x, d=d: poly(p, d, x)) for d in labels]
        self._seeds_monic = [(lambda x, d=d: poly_monic(p, d, x)) for d in labels]
        self._c_den = c_ka(p, labels)
        self._cache = {}

    def admissible(self) -> bool:
        return ka_admissible(self.labels)

    # -- polynomial pieces ------------------------------------------------

    def xi(self, x: int):
        """Denominator polynomial, normalised to 1 at x=0."""
        key = ("xi", x)
        if key not in self._cache:
            w = casoratian(self._seeds, x)
            self._cache[key] = w / (self._c_den * varphi_m(self.params, self.M, x))
        return self._cache[key]

    def p_ka(self, n: int, x: int):
        """Deleted-system polynomial, normalised to 1 at x=0; 0 for n in D."""
        if n in self.labels:
            return S(0)
        key = ("p", n, x)
        if key not in self._cache:
            w = casoratian(self._seeds + [lambda y: poly(self.params, n, y)], x)
            c = c_ka_n(self.params, self.labels, n)
            self._cache[key] = w / (c * varphi_m(self.params, self.M + 1, x))
        return self._cache[key]

    def xi_monic(self, x: int):
        w = casoratian(self._seeds_monic, x)
        return w / (c_eta(self.params, self.labels) * varphi_m(self.params, self.M, x))

    def p_ka_monic(self, n: int, x: int):
        if n in self.labels:
            return S(0)
        w = casoratian(self._seeds_monic + [lambda y: poly_monic(self.params, n, y)], x)
        c = c_eta_n(self.params, self.labels, n)
        return w / (c * varphi_m(self.params, self.M + 1, x))

    # -- deformed system ---------------------------------------------------

    def _b_coeff(self, x: int):
        # coefficient of the up-shift in the similarity-transformed operator
        b = potential_B(self.p_shift, x)
        if b == 0:
            return S(0)
        return kappa(self.params) ** self.M * b * self.xi(x) / self.xi(x + 1)

    def _d_coeff(self, x: int):
        d = potential_D(self.p_shift, x)
        if d == 0:
            return S(0)
        return kappa(self.params) ** self.M * d * self.xi(x + 1) / self.xi(x)

    def potential_b(self, x: int):
        """Deformed up potential; vanishes at x = N-M."""
        c = self._b_coeff(x)
        if c == 0:
            return c
        pm = self.p_ka(self.mu, x)
        if pm == 0:
            raise ParameterError("deformed potential undefined: P_mu vanishes on grid")
        return c * self.p_ka(self.mu, x + 1) / pm

    def potential_d(self, x: int):
        """Deformed down potential; vanishes at x = 0."""
        c = self._d_coeff(x)
        if c == 0:
            return c
        pm = self.p_ka(self.mu, x)
        if pm == 0:
            raise ParameterError("deformed potential undefined: P_mu vanishes on grid")
        return c * self.p_ka(self.mu, x - 1) / pm

    def matrix(self):
        """Similarity-transformed tridiagonal operator, rows x = 0..N-M."""
        emu = energy(self.params, self.mu)
        rows = []
        for x in self.grid:
            row = {}
            if x + 1 in self.grid:
                row[x + 1] = -self._b_coeff(x)
            if x - 1 in self.grid:
                row[x - 1] = -self._d_coeff(x)
            row[x] = self.potential_b(x) + self.potential_d(x) + emu
            rows.append(row)
        return rows

    def apply_matrix(self, vec):
        """Matrix action on a grid vector indexed by 0..N-M."""
        rows = self.matrix()
        out = []
        for x, row in zip(self.grid, rows):
            out.append(sum((c * vec[y] for y, c in row.items()), S(0)))
        return out

    def eigen_residual(self, n: int):
        """H~ v - E_n v on the grid for the level-n polynomial vector."""
        vec = {x: self.p_ka(n, x) for x in self.grid}
        en = energy(self.params, n)
        return [hv - en * vec[x] for x, hv in zip(self.grid, self.apply_matrix(vec))]

    def weight(self, x: int):
        den = self.xi(x) * self.xi(x + 1)
        if den == 0:
            raise ParameterError("weight singular: Xi vanishes on the grid")
        return phi0_squared(self.p_shift, x) / den

    def orthogonality_sum(self, n: int, m: int):
        return sum(
            (self.weight(x) * self.p_ka(n, x) * self.p_ka(m, x) for x in self.grid), S(0)
        )

    def norm_squared(self, n: int):
        """Closed-form d^KA_n^2 for n in the surviving level set."""
        M = self.M
        r = d_squared(self.params, n) * kappa(self.params) ** (-(M * (M - 1) // 2))
        if self.fault == "drop_kappa_norm":
            r = d_squared(self.params, n)
        en = energy(self.params, n)
        for j in range(M):
            r = r * (en - energy(self.params, self.labels[j])) / potential_B(
                shift_params(self.params, j), 0
            )
        return r

    def forward_shift_check(self, window=None) -> bool:
        """P_{D,0}(x; lambda) == Xi_{D^[-1]}(x; lambda+delta) for d_j >= 1."""
        if any(d < 1 for d in self.labels):
            raise ParameterError("forward-shift identity needs all d_j >= 1")
        down = DeletionSystem(shift_params(self.params, 1), index_shifted(self.labels, -1))
        if window is None:
            window = range(-1, self.params.N - self.M + 3)
        return all(self.p_ka(0, x) == down.xi(x) for x in window)

    def matrix_mu0_form(self):
        """Operator rebuilt from the shifted denominator polynomial (d_j >= 1)."""
        if any(d < 1 for d in self.labels):
            raise ParameterError("mu=0 form needs all d_j >= 1")
        down = DeletionSystem(shift_params(self.params, 1), index_shifted(self.labels, -1))
        rows = []
        for x in self.grid:
            row = {}
            bc = self._b_coeff(x)
            dc = self._d_coeff(x)
            if x + 1 in self.grid:
                row[x + 1] = -bc
            if x - 1 in self.grid:
                row[x - 1] = -dc
            diag = S(0)
            if bc != 0:
                diag += bc * down.xi(x + 1) / down.xi(x)
            if dc != 0:
                diag += dc * down.xi(x - 1) / down.xi(x)
            row[x] = diag
            rows.append(row)
        return rows


def forward_shift_on_original(p: Params, n: int, x: int):
    """B(0)/varphi(x) * (P_n(x) - P_n(x+1)), which must be E_n P_{n-1}(x; lambda+delta)."""
    return potential_B(p, 0) / varphi(p, x) * (poly(p, n, x) - poly(p, n, x + 1))


def is_regular(sys: DeletionSystem) -> bool:
    """True when the deformed operator and weight are free of grid singularities.

    Admissible label sets in the positivity regime always are; non-admissible
    ones may put a zero of Xi or of P_mu on the grid, which this probes.
    """
    try:
        for x in sys.grid:
            sys.weight(x)
            sys.potential_b(x)
            sys.potential_d(x)
    except (ParameterError, ZeroDivisionError):
        return False
    return True


def regular_nonadmissible_sets(p: Params, M: int, count: int = 1):
    """First `count` non-admissible label sets that construct cleanly.

    Deterministic scan in lexicographic order; used by the verification
    suites to exercise the algebraic-validity claims off the positivity
    regime.
    """
    from itertools import combinations

    found = []
    for labels in combinations(range(p.N + 1), M):
        if ka_admissible(labels):
            continue
        sys = DeletionSystem(p, labels)
        if is_regular(sys):
            found.append(labels)
            if len(found) >= count:
                break
    return found
