"""The twelve finite discrete orthogonal polynomial systems.

Each family carries a parameter vector (N plus named rationals, with the
q-family parameters stored multiplicatively), the shift vectors delta /
delta_bar, the constants kappa and rho, and evaluators for the energies,
sinusoidal coordinate, potentials, ground-state weight, polynomials
(normalised and monic), norms and the two first-order companion polynomial
families used by the level-adding construction.

All evaluators return exact rationals.  The monic polynomial evaluators are
written over a generic commutative ring ("cv" dictionaries of base values) so
that the test suite can re-run them on first-order jets; production wraps
them with exact scalars.

Conventions:
  * For R the parameter a = -N is implied, for qR a = q^{-N}; both are
    exposed through Params.__getitem__ but not stored.
  * Normalised polynomials and tabulated leading coefficients exist only for
    n <= N; the monic forms are total on n >= 0.
  * Negative N values are permitted on Params so that shifted parameter
    vectors can be formed; grid-building code validates N >= 1 itself.
"""

from dataclasses import dataclass, replace
from functools import lru_cache

from .exact import (
    S,
    ONE,
    Scalar,
    binomial,
    factorial,
    pochhammer as ph,
    q_pochhammer as qp,
    q_binomial,
    to_str,
)

TAGS = ("H", "K", "R", "dH", "dqqK", "qH", "qK", "qqK", "aqK", "qR", "dqH", "dqK")


class ParameterError(ValueError):
    """Ill-defined parameter combination (degenerate denominator, bad range)."""


@dataclass(frozen=True)
class Params:
    """One family plus a concrete rational parameter vector."""

    family: str
    N: int
    q: object = None
    extra: tuple = ()

    def __getitem__(self, name):
        for k, v in self.extra:
            if k == name:
                return v
        if self.family == "R" and name == "a":
            return S(-self.N)
        if self.family == "qR" and name == "a":
            return S(self.q) ** (-self.N)
        raise KeyError(f"{self.family} has no parameter {name!r}")

    def names(self):
        return tuple(k for k, _ in self.extra)


def _fam(p: Params):
    return _REGISTRY[p.family]


def make_params(family: str, N: int, q=None, **extra) -> Params:
    """Validated user-facing constructor; see params_from_dict for JSON input."""
    if family not in _REGISTRY:
        raise ParameterError(f"unknown family {family!r}")
    fam = _REGISTRY[family]
    if fam.is_q:
        if q is None:
            raise ParameterError(f"{family} needs q")
        q = S(q)
        if not (0 < q < 1):
            raise ParameterError("q must satisfy 0 < q < 1")
    elif q is not None:
        raise ParameterError(f"{family} takes no q")
    if set(extra) != set(fam.names):
        raise ParameterError(f"{family} needs parameters {fam.names}, got {tuple(extra)}")
    if not isinstance(N, int) or N < 1:
        raise ParameterError("N must be a positive integer")
    vals = tuple(sorted((k, S(v)) for k, v in extra.items()))
    p = Params(family, N, q, vals)
    fam.check_well_defined(p)
    return p


def params_from_dict(doc: dict) -> Params:
    """Parse the JSON parameter document ({"family":..,"N":..,"q":"1/2",...})."""
    doc = dict(doc)
    family = doc.pop("family")
    N = doc.pop("N")
    q = doc.pop("q", None)
    return make_params(family, int(N), q=q, **doc)


def params_to_dict(p: Params) -> dict:
    doc = {"family": p.family, "N": p.N}
    if p.q is not None:
        doc["q"] = to_str(p.q)
    for k, v in p.extra:
        doc[k] = to_str(v)
    return doc


def shift_params(p: Params, k_delta: int = 0, k_delta_bar: int = 0) -> Params:
    """lambda + k1*delta + k2*delta_bar with the family's tabulated shifts."""
    fam = _fam(p)
    steps = {}
    for name, s in fam.delta.items():
        steps[name] = steps.get(name, 0) + k_delta * s
    for name, s in fam.delta_bar.items():
        steps[name] = steps.get(name, 0) + k_delta_bar * s
    new_extra = []
    for name, v in p.extra:
        k = steps.get(name, 0)
        if k:
            v = v * S(p.q) ** k if fam.is_q else v + k
        new_extra.append((name, v))
    return replace(p, N=p.N + steps.get("N", 0), extra=tuple(new_extra))


# ---------------------------------------------------------------------------
# type-generic pieces: sinusoidal coordinate, energies, varphi
# ---------------------------------------------------------------------------

def eta_type(p: Params) -> int:
    return _fam(p).eta_t


def e_type(p: Params) -> int:
    return _fam(p).e_t


def eta_d(p: Params):
    """The d parameter of the coordinate for types (ii)/(v); None otherwise."""
    return _fam(p).eta_d(p)


def e_dtilde(p: Params):
    return _fam(p).e_dt(p)


def kappa(p: Params):
    k = _fam(p).kappa_pow
    return ONE if k == 0 else S(p.q) ** k


def rho(p: Params):
    k = _fam(p).rho_pow
    return ONE if k == 0 else S(p.q) ** k


def eta(p: Params, x: int):
    t = _fam(p).eta_t
    if t == 1:
        return S(x)
    if t == 2:
        return x * (x + eta_d(p))
    q = S(p.q)
    if t == 3:
        return 1 - q ** x
    if t == 4:
        return q ** (-x) - 1
    return (q ** (-x) - 1) * (1 - eta_d(p) * q ** x)


def energy(p: Params, n: int):
    t = _fam(p).e_t
    if t == 1:
        return S(n)
    if t == 2:
        return n * (n + e_dtilde(p))
    q = S(p.q)
    if t == 3:
        return 1 - q ** n
    if t == 4:
        return q ** (-n) - 1
    return (q ** (-n) - 1) * (1 - e_dtilde(p) * q ** n)


def varphi(p: Params, x: int):
    """(eta(x+1)-eta(x))/eta(1), tabulated per coordinate type."""
    t = _fam(p).eta_t
    if t == 1:
        return ONE
    if t == 2:
        d = eta_d(p)
        if 1 + d == 0:
            raise ParameterError("varphi undefined: eta(1) = 0")
        return (2 * x + 1 + d) / (1 + d)
    q = S(p.q)
    if t == 3:
        return q ** x
    if t == 4:
        return q ** (-x)
    d = eta_d(p)
    if 1 - d * q == 0:
        raise ParameterError("varphi undefined: eta(1) = 0")
    return q ** (-x) * (1 - d * q ** (2 * x + 1)) / (1 - d * q)


# ---------------------------------------------------------------------------
# family dispatch for potentials, weights, polynomials, norms
# ---------------------------------------------------------------------------

def potential_B(p: Params, x: int):
    try:
        return _fam(p).B(p, x)
    except ZeroDivisionError:
        raise ParameterError(f"B({x}) has a vanishing denominator for {p.family}")


def potential_D(p: Params, x: int):
    try:
        return _fam(p).D(p, x)
    except ZeroDivisionError:
        raise ParameterError(f"D({x}) has a vanishing denominator for {p.family}")


@lru_cache(maxsize=None)
def phi0_squared(p: Params, x: int):
    """Ground-state weight squared via the B/D product, anchored at phi0(0)=1."""
    if x == 0:
        return ONE
    try:
        if x > 0:
            return phi0_squared(p, x - 1) * potential_B(p, x - 1) / potential_D(p, x)
        return phi0_squared(p, x + 1) * potential_D(p, x + 1) / potential_B(p, x)
    except ZeroDivisionError:
        raise ParameterError(f"phi0^2({x}) undefined for {p.family}")


def phi0_squared_closed(p: Params, x: int):
    """Tabulated closed form of phi0(x)^2, valid on 0 <= x <= N."""
    return _fam(p).phi0_sq(p, x)


@lru_cache(maxsize=None)
def poly_monic(p: Params, n: int, x: int):
    """Monic polynomial value at integer x; total on n >= 0."""
    fam = _fam(p)
    return fam.monic(fam.cv(p, x), n)


def ill_factor(p: Params, n: int):
    """The single N-bound factor (-N)_n resp. (q^{-N};q)_n that dies for n > N."""
    if _fam(p).is_q:
        return qp(S(p.q) ** (-p.N), S(p.q), n)
    return ph(S(-p.N), n)


def ill_factor_replaced(p: Params, n: int):
    """Level-adding replacement: (-N)_N (1)_m resp. (q^{-N};q)_N (q;q)_m, n=N+1+m."""
    if n <= p.N:
        raise ParameterError("replacement form only applies for n > N")
    m = n - p.N - 1
    if _fam(p).is_q:
        q = S(p.q)
        return qp(q ** (-p.N), q, p.N) * qp(q, q, m)
    return ph(S(-p.N), p.N) * ph(ONE, m)


def leading_coeff(p: Params, n: int):
    """Tabulated c_n; ill-defined for n > N (use the monic route there)."""
    if n > p.N:
        raise ParameterError("c_n is ill-defined for n > N")
    return _fam(p).cn_red(p, n) / ill_factor(p, n)


def leading_coeff_universal(p: Params, n: int):
    """Product expression for c_n over energies, eta(j) and B(0; shifted)."""
    r = S((-1) ** n) * kappa(p) ** (-(n * (n - 1) // 2))
    en = energy(p, n)
    for j in range(1, n + 1):
        r = r * (en - energy(p, j - 1)) / (eta(p, j) * potential_B(shift_params(p, j - 1), 0))
    return r


def poly(p: Params, n: int, x: int):
    """Normalised polynomial (value 1 at x=0); defined for n <= N."""
    return leading_coeff(p, n) * poly_monic(p, n, x)


def d_squared(p: Params, n: int):
    """Tabulated normalisation d_n^2 of the orthogonality relation, 0<=n<=N."""
    if not 0 <= n <= p.N:
        raise ParameterError("d_n^2 is tabulated for 0 <= n <= N")
    return ill_factor(p, n) * _fam(p).dsq_red(p, n)


def norm_squared_inv(p: Params, n: int):
    return 1 / d_squared(p, n)


def d_monic_squared(p: Params, n: int):
    """c_n^2 d_n^2, the monic-normalisation constant, for n <= N."""
    if not 0 <= n <= p.N:
        raise ParameterError("monic d_n^2 needs 0 <= n <= N; see d_prime_monic_squared")
    fam = _fam(p)
    return fam.cn_red(p, n) ** 2 * fam.dsq_red(p, n) / ill_factor(p, n)


def d_prime_monic_squared(p: Params, n: int):
    """The n > N analogue of c_n^2 d_n^2 with the N-bound factor replaced."""
    fam = _fam(p)
    return fam.cn_red(p, n) ** 2 * fam.dsq_red(p, n) / ill_factor_replaced(p, n)


def ptilde1(p: Params, n: int, x: int):
    """First-order companion of the monic polynomial under an N shift."""
    return _fam(p).pt1(p, n, x)


def ptilde2(p: Params, m: int, x: int):
    """First-order companion of the reflected monic polynomial at lambda'."""
    return _fam(p).pt2(p, m, x)


def b_simplifier(p: Params, m: int):
    """The constant absorbed into ptilde2's definition (-2m, -m or 0)."""
    return _fam(p).b_const(m)


def default_params(family: str, N: int) -> Params:
    """Documented default parameter instances inside the positivity ranges.

    Chosen so that every denominator met on the extended integer grid is
    nonzero for all shifts used by the M <= 2, N <= 5 verification sweeps
    (non-integer d for the quadratic coordinates, q-parameters that are not
    integer powers of q).
    """
    q = S(1, 2)
    table = {
        "H": dict(a=S(1), b=S(2)),
        "K": dict(p=S(2, 5)),
        "R": dict(b=S(8), c=S(1, 2), d=S(7, 3)),
        "dH": dict(a=S(1, 2), b=S(10, 3)),
        "dqqK": dict(p=S(33)),
        "qH": dict(a=S(1, 3), b=S(1, 5)),
        "qK": dict(p=S(1, 2)),
        "qqK": dict(p=S(200)),
        "aqK": dict(p=S(2, 3)),
        "qR": dict(b=S(1, 200), c=S(3, 5), d=S(1, 5)),
        "dqH": dict(a=S(1, 3), b=S(1, 5)),
        "dqK": dict(p=S(1, 2)),
    }
    kw = table[family]
    if _REGISTRY[family].is_q:
        return make_params(family, N, q=q, **kw)
    return make_params(family, N, **kw)


# ---------------------------------------------------------------------------
# shared inner sums of the first-order companions
# ---------------------------------------------------------------------------

def _inner1(mNk, nk: int):
    # sum_l (-N+k)_l (-N+k+l+1)_{nk-1-l}
    return sum((ph(mNk, l) * ph(mNk + l + 1, nk - 1 - l) for l in range(nk)), S(0))


def _inner1_q(qNik, q, nk: int):
    # sum_l q^{-N+k+l} (q^{-N+k};q)_l (q^{-N+k+l+1};q)_{nk-1-l}
    total = S(0)
    for l in range(nk):
        total += qNik * q ** l * qp(qNik, q, l) * qp(qNik * q ** (l + 1), q, nk - 1 - l)
    return total


# ---------------------------------------------------------------------------
# the twelve families
# ---------------------------------------------------------------------------

class _H:
    tag = "H"
    is_q = False
    names = ("a", "b")
    delta = {"a": 1, "b": 1, "N": -1}
    delta_bar = {"N": -1}
    eta_t, e_t = 1, 2
    kappa_pow = rho_pow = 0

    @staticmethod
    def check_well_defined(p):
        pass

    @staticmethod
    def eta_d(p):
        return None

    @staticmethod
    def e_dt(p):
        return p["a"] + p["b"] - 1

    @staticmethod
    def B(p, x):
        return (x + p["a"]) * (p.N - x)

    @staticmethod
    def D(p, x):
        return x * (p["b"] + p.N - x)

    @staticmethod
    def phi0_sq(p, x):
        return binomial(p.N, x) * ph(p["a"], x) / ph(p["b"] + p.N - x, x)

    @staticmethod
    def cv(p, x):
        return {"a": p["a"], "b": p["b"], "mN": S(-p.N), "mx": S(-x)}

    @staticmethod
    def monic(cv, n):
        a, b, mN, mx = cv["a"], cv["b"], cv["mN"], cv["mx"]
        total = 0
        for k in range(n + 1):
            total = total + (
                ph(a + k, n - k) * ph(mN + k, n - k) / ph(a + b + (n - 1 + k), n - k)
                * ph(S(-n), k) * ph(mx, k) / factorial(k)
            )
        return total

    @staticmethod
    def cn_red(p, n):
        return ph(p["a"] + p["b"] + n - 1, n) / ph(p["a"], n)

    @staticmethod
    def dsq_red(p, n):
        a, b, N = p["a"], p["b"], p.N
        return (
            S((-1) ** n) * ph(a, n) * (2 * n + a + b - 1) * ph(b, N)
            / (factorial(n) * ph(b, n) * ph(a + b + n - 1, N + 1))
        )

    @staticmethod
    def pt1(p, n, x):
        a, b, N = p["a"], p["b"], p.N
        total = S(0)
        for k in range(n):
            total += (
                ph(a + k, n - k) / ph(a + b + n - 1 + k, n - k)
                * ph(S(-n), k) * ph(S(-x), k) / factorial(k)
                * _inner1(S(-N + k), n - k)
            )
        return total

    @staticmethod
    def pt2(p, m, x):
        a, b, N = p["a"], p["b"], p.N
        total = S(0)
        for k in range(m + 1):
            bracket = S(0)
            for l in range(m - k):
                bracket += (
                    1 / (a + N + 1 + k + l)
                    + S(1, N + 2 + k + l)
                    - 2 / (a + b + 2 * N + 1 + m + k + l)
                )
            for l in range(k):
                bracket += S(1, -x + N + 1 + l)
            total += (
                ph(a + N + 1 + k, m - k) * ph(S(N + 2 + k), m - k)
                / ph(a + b + 2 * N + 1 + m + k, m - k)
                * ph(S(-m), k) * ph(S(-x + N + 1), k) / factorial(k)
                * bracket
            )
        return total

    @staticmethod
    def b_const(m):
        return S(0)


class _K:
    tag = "K"
    is_q = False
    names = ("p",)
    delta = {"N": -1}
    delta_bar = {"N": -1}
    eta_t, e_t = 1, 1
    kappa_pow = rho_pow = 0

    @staticmethod
    def check_well_defined(p):
        if p["p"] == 0 or p["p"] == 1:
            raise ParameterError("K needs p not in {0, 1}")

    @staticmethod
    def eta_d(p):
        return None

    @staticmethod
    def e_dt(p):
        return None

    @staticmethod
    def B(p, x):
        return p["p"] * (p.N - x)

    @staticmethod
    def D(p, x):
        return (1 - p["p"]) * x

    @staticmethod
    def phi0_sq(p, x):
        pp = p["p"]
        return binomial(p.N, x) * (pp / (1 - pp)) ** x

    @staticmethod
    def cv(p, x):
        return {"p": p["p"], "mN": S(-p.N), "mx": S(-x)}

    @staticmethod
    def monic(cv, n):
        pp, mN, mx = cv["p"], cv["mN"], cv["mx"]
        total = 0
        for k in range(n + 1):
            total = total + (
                ph(mN + k, n - k) * ph(S(-n), k) * ph(mx, k) / factorial(k) * pp ** (n - k)
            )
        return total

    @staticmethod
    def cn_red(p, n):
        return p["p"] ** (-n)

    @staticmethod
    def dsq_red(p, n):
        pp = p["p"]
        return S((-1) ** n) / factorial(n) * (pp / (1 - pp)) ** n * (1 - pp) ** p.N

    @staticmethod
    def pt1(p, n, x):
        pp, N = p["p"], p.N
        total = S(0)
        for k in range(n):
            total += (
                ph(S(-n), k) * ph(S(-x), k) / factorial(k) * pp ** (n - k)
                * _inner1(S(-N + k), n - k)
            )
        return total

    @staticmethod
    def pt2(p, m, x):
        pp, N = p["p"], p.N
        total = S(0)
        for k in range(m + 1):
            bracket = sum((S(1, N + 2 + k + l) for l in range(m - k)), S(0))
            bracket += sum((S(1, -x + N + 1 + l) for l in range(k)), S(0))
            total += (
                ph(S(N + 2 + k), m - k) * ph(S(-m), k) * ph(S(-x + N + 1), k)
                / factorial(k) * pp ** (m - k) * bracket
            )
        return total

    @staticmethod
    def b_const(m):
        return S(0)


class _R:
    tag = "R"
    is_q = False
    names = ("b", "c", "d")
    delta = {"b": 1, "c": 1, "d": 1, "N": -1}
    delta_bar = {"d": 1, "N": -1}
    eta_t, e_t = 2, 2
    kappa_pow = rho_pow = 0

    @staticmethod
    def check_well_defined(p):
        if p["d"] == 1:
            raise ParameterError("R needs d != 1")

    @staticmethod
    def eta_d(p):
        return p["d"]

    @staticmethod
    def e_dt(p):
        return p["a"] + p["b"] + p["c"] - p["d"] - 1

    @staticmethod
    def B(p, x):
        a, b, c, d = p["a"], p["b"], p["c"], p["d"]
        return -(x + a) * (x + b) * (x + c) * (x + d) / ((2 * x + d) * (2 * x + 1 + d))

    @staticmethod
    def D(p, x):
        a, b, c, d = p["a"], p["b"], p["c"], p["d"]
        return -(x + d - a) * (x + d - b) * (x + d - c) * x / ((2 * x - 1 + d) * (2 * x + d))

    @staticmethod
    def phi0_sq(p, x):
        a, b, c, d = p["a"], p["b"], p["c"], p["d"]
        num = ph(a, x) * ph(b, x) * ph(c, x) * ph(d, x)
        den = ph(1 + d - a, x) * ph(1 + d - b, x) * ph(1 + d - c, x) * factorial(x)
        return num / den * (2 * x + d) / d

    @staticmethod
    def cv(p, x):
        return {
            "a": p["a"], "b": p["b"], "c": p["c"], "dt": _R.e_dt(p),
            "mx": S(-x), "xd": x + p["d"],
        }

    @staticmethod
    def monic(cv, n):
        a, b, c, dt, mx, xd = cv["a"], cv["b"], cv["c"], cv["dt"], cv["mx"], cv["xd"]
        total = 0
        for k in range(n + 1):
            total = total + (
                ph(a + k, n - k) * ph(b + k, n - k) * ph(c + k, n - k)
                / ph(dt + n + k, n - k)
                * ph(S(-n), k) * ph(mx, k) * ph(xd, k) / factorial(k)
            )
        return total

    @staticmethod
    def cn_red(p, n):
        return ph(_R.e_dt(p) + n, n) / (ph(p["b"], n) * ph(p["c"], n))

    @staticmethod
    def dsq_red(p, n):
        a, b, c, d, N = p["a"], p["b"], p["c"], p["d"], p.N
        dt = _R.e_dt(p)
        head = (
            ph(b, n) * ph(c, n) * ph(dt, n)
            / (ph(1 + dt - a, n) * ph(1 + dt - b, n) * ph(1 + dt - c, n) * factorial(n))
            * (2 * n + dt) / dt
        )
        tail = (
            S((-1) ** N) * ph(1 + d - a, N) * ph(1 + d - b, N) * ph(1 + d - c, N)
            / (ph(dt + 1, N) * ph(d + 1, 2 * N))
        )
        return head * tail

    @staticmethod
    def pt1(p, n, x):
        b, c, d, N = p["b"], p["c"], p["d"], p.N
        dt = _R.e_dt(p)
        total = S(0)
        for k in range(n):
            inner = S(0)
            for l in range(n - k):
                inner += (
                    ph(S(-N + k), l) * ph(S(-N + k + l + 1), n - k - 1 - l)
                    - ph(S(-N + k), n - k) / (dt + n + k + l)
                )
            total += (
                ph(b + k, n - k) * ph(c + k, n - k) / ph(dt + n + k, n - k)
                * ph(S(-n), k) * ph(S(-x), k) * ph(x + d, k) / factorial(k)
                * inner
            )
        return total

    @staticmethod
    def pt2(p, m, x):
        b, c, d, N = p["b"], p["c"], p["d"], p.N
        dt = _R.e_dt(p)
        total = S(0)
        for k in range(m + 1):
            bracket = S(0)
            for l in range(m - k):
                bracket += (
                    S(1, N + 2 + k + l)
                    + 1 / (b + N + 1 + k + l)
                    + 1 / (c + N + 1 + k + l)
                    - 1 / (dt + 2 * N + 2 + m + k + l)
                )
            for l in range(k):
                bracket += S(1, -x + N + 1 + l) + 1 / (x + N + 1 + d + l)
            total += (
                ph(S(N + 2 + k), m - k) * ph(b + N + 1 + k, m - k) * ph(c + N + 1 + k, m - k)
                / ph(dt + 2 * N + 2 + m + k, m - k)
                * ph(S(-m), k) * ph(S(-x + N + 1), k) * ph(x + N + 1 + d, k) / factorial(k)
                * bracket
            )
        return total

    @staticmethod
    def b_const(m):
        return S(0)


class _dH:
    tag = "dH"
    is_q = False
    names = ("a", "b")
    delta = {"a": 1, "N": -1}
    delta_bar = {"b": 1, "N": -1}
    eta_t, e_t = 2, 1
    kappa_pow = rho_pow = 0

    @staticmethod
    def check_well_defined(p):
        if p["a"] + p["b"] in (1, 2):
            raise ParameterError("dH needs a+b not in {1, 2}")

    @staticmethod
    def eta_d(p):
        return p["a"] + p["b"] - 1

    @staticmethod
    def e_dt(p):
        return None

    @staticmethod
    def B(p, x):
        a, b, N = p["a"], p["b"], p.N
        return (x + a) * (x + a + b - 1) * (N - x) / ((2 * x - 1 + a + b) * (2 * x + a + b))

    @staticmethod
    def D(p, x):
        a, b, N = p["a"], p["b"], p.N
        return x * (x + b - 1) * (x + a + b + N - 1) / ((2 * x - 2 + a + b) * (2 * x - 1 + a + b))

    @staticmethod
    def phi0_sq(p, x):
        a, b, N = p["a"], p["b"], p.N
        return (
            binomial(N, x) * ph(a, x) * (2 * x + a + b - 1) * ph(a + b, N)
            / (ph(b, x) * ph(x + a + b - 1, N + 1))
        )

    @staticmethod
    def cv(p, x):
        return {
            "a": p["a"], "mN": S(-p.N),
            "mx": S(-x), "xab": x + p["a"] + p["b"] - 1,
        }

    @staticmethod
    def monic(cv, n):
        a, mN, mx, xab = cv["a"], cv["mN"], cv["mx"], cv["xab"]
        total = 0
        for k in range(n + 1):
            total = total + (
                ph(a + k, n - k) * ph(mN + k, n - k)
                * ph(S(-n), k) * ph(xab, k) * ph(mx, k) / factorial(k)
            )
        return total

    @staticmethod
    def cn_red(p, n):
        return 1 / ph(p["a"], n)

    @staticmethod
    def dsq_red(p, n):
        a, b, N = p["a"], p["b"], p.N
        return (
            S((-1) ** n) * ph(a, n) * ph(b, N)
            / (factorial(n) * ph(b + N - n, n) * ph(a + b, N))
        )

    @staticmethod
    def pt1(p, n, x):
        a, b, N = p["a"], p["b"], p.N
        total = S(0)
        for k in range(n):
            total += (
                ph(a + k, n - k)
                * ph(S(-n), k) * ph(x + a + b - 1, k) * ph(S(-x), k) / factorial(k)
                * _inner1(S(-N + k), n - k)
            )
        return total

    @staticmethod
    def pt2(p, m, x):
        a, b, N = p["a"], p["b"], p.N
        total = S(0)
        for k in range(m + 1):
            bracket = S(0)
            for l in range(m - k):
                bracket += 1 / (a + N + 1 + k + l) + S(1, N + 2 + k + l)
            for l in range(k):
                bracket += 1 / (x + a + b + N + l) + S(1, -x + N + 1 + l)
            total += (
                ph(a + N + 1 + k, m - k) * ph(S(N + 2 + k), m - k)
                * ph(S(-m), k) * ph(x + a + b + N, k) * ph(S(-x + N + 1), k) / factorial(k)
                * bracket
            )
        return total

    @staticmethod
    def b_const(m):
        return S(0)


class _dqqK:
    tag = "dqqK"
    is_q = True
    names = ("p",)
    delta = {"N": -1}
    delta_bar = {"p": 1, "N": -1}
    eta_t, e_t = 3, 4
    kappa_pow = -1
    rho_pow = 1

    @staticmethod
    def check_well_defined(p):
        if p["p"] == 0:
            raise ParameterError("dqqK needs p != 0")

    @staticmethod
    def eta_d(p):
        return None

    @staticmethod
    def e_dt(p):
        return None

    @staticmethod
    def B(p, x):
        q, pp, N = S(p.q), p["p"], p.N
        return q ** (-x - N - 1) / pp * (1 - q ** (N - x))

    @staticmethod
    def D(p, x):
        q, pp = S(p.q), p["p"]
        return (q ** (-x) - 1) * (1 - q ** (-x) / pp)

    @staticmethod
    def phi0_sq(p, x):
        q, pp, N = S(p.q), p["p"], p.N
        return q_binomial(N, x, q) * pp ** (-x) * q ** (-N * x) / qp(q ** (-x) / pp, q, x)

    @staticmethod
    def cv(p, x):
        q = S(p.q)
        return {"p": p["p"], "qNi": q ** (-p.N), "qxi": q ** (-x), "qx": q ** x, "q": q}

    @staticmethod
    def monic(cv, n):
        pp, qNi, qxi, qx, q = cv["p"], cv["qNi"], cv["qxi"], cv["qx"], cv["q"]
        total = 0
        for k in range(n + 1):
            total = total + (
                qp(qNi * q ** k, q, n - k)
                * qp(q ** (-n), q, k) * qp(qxi, q, k) / qp(q, q, k)
                * pp ** (k - n) * qx ** k * q ** (k + n * (n - 1) // 2)
            )
        return total

    @staticmethod
    def cn_red(p, n):
        return p["p"] ** n * S(p.q) ** (-(n * (n - 1) // 2))

    @staticmethod
    def dsq_red(p, n):
        q, pp, N = S(p.q), p["p"], p.N
        piN = 1 / pp * q ** (-N)
        return (
            S((-1) ** n) * q ** (N * n - n * (n - 1) // 2) / qp(q, q, n)
            * pp ** (-n) * q ** (n * (n - 1 - N)) / qp(piN, q, n)
            * qp(piN, q, N)
        )

    @staticmethod
    def pt1(p, n, x):
        q, pp, N = S(p.q), p["p"], p.N
        total = S(0)
        for k in range(n):
            total += (
                qp(q ** (-n), q, k) * qp(q ** (-x), q, k) / qp(q, q, k)
                * pp ** (k - n) * q ** (k * x + k + n * (n - 1) // 2)
                * _inner1_q(q ** (-N + k), q, n - k)
            )
        return total

    @staticmethod
    def pt2(p, m, x):
        q, pp, N = S(p.q), p["p"], p.N
        total = S(0)
        for k in range(m + 1):
            bracket = S(0)
            for l in range(m - k):
                bracket += 1 / (1 - q ** (N + 2 + k + l))
            for l in range(k):
                bracket += 1 / (1 - q ** (-x + N + 1 + l))
            total += (
                qp(q ** (N + 2 + k), q, m - k)
                * qp(q ** (-m), q, k) * qp(q ** (-x + N + 1), q, k) / qp(q, q, k)
                * pp ** (k - m) * q ** (k * (x + 1) - (N + 1) * m + m * (m - 1) // 2)
                * bracket
            )
        return total

    @staticmethod
    def b_const(m):
        return S(0)


class _qH:
    tag = "qH"
    is_q = True
    names = ("a", "b")
    delta = {"a": 1, "b": 1, "N": -1}
    delta_bar = {"N": -1}
    eta_t, e_t = 4, 5
    kappa_pow = -1
    rho_pow = -1

    @staticmethod
    def check_well_defined(p):
        if p["a"] == 0 or p["b"] == 0:
            raise ParameterError("qH needs a, b != 0")

    @staticmethod
    def eta_d(p):
        return None

    @staticmethod
    def e_dt(p):
        return p["a"] * p["b"] / S(p.q)

    @staticmethod
    def B(p, x):
        q, a = S(p.q), p["a"]
        return (1 - a * q ** x) * (q ** (x - p.N) - 1)

    @staticmethod
    def D(p, x):
        q, a, b = S(p.q), p["a"], p["b"]
        return a / q * (1 - q ** x) * (q ** (x - p.N) - b)

    @staticmethod
    def phi0_sq(p, x):
        q, a, b, N = S(p.q), p["a"], p["b"], p.N
        return q_binomial(N, x, q) * qp(a, q, x) / (qp(b * q ** (N - x), q, x) * a ** x)

    @staticmethod
    def cv(p, x):
        q = S(p.q)
        return {
            "a": p["a"], "ab": p["a"] * p["b"],
            "qNi": q ** (-p.N), "qxi": q ** (-x), "q": q,
        }

    @staticmethod
    def monic(cv, n):
        a, ab, qNi, qxi, q = cv["a"], cv["ab"], cv["qNi"], cv["qxi"], cv["q"]
        total = 0
        for k in range(n + 1):
            total = total + (
                qp(a * q ** k, q, n - k) * qp(qNi * q ** k, q, n - k)
                / qp(ab * q ** (n - 1 + k), q, n - k)
                * qp(q ** (-n), q, k) * qp(qxi, q, k) / qp(q, q, k) * q ** k
            )
        return total

    @staticmethod
    def cn_red(p, n):
        q, a, b = S(p.q), p["a"], p["b"]
        return qp(a * b * q ** (n - 1), q, n) / qp(a, q, n)

    @staticmethod
    def dsq_red(p, n):
        q, a, b, N = S(p.q), p["a"], p["b"], p.N
        ab = a * b
        return (
            S((-1) ** n) * q ** (N * n - n * (n - 1) // 2)
            * qp(a, q, n) * qp(ab / q, q, n) * (1 - ab * q ** (2 * n - 1))
            * qp(b, q, N) * a ** (N - n)
            / (qp(q, q, n) * qp(ab * q ** N, q, n) * qp(b, q, n)
               * (1 - ab / q) * qp(ab, q, N))
        )

    @staticmethod
    def pt1(p, n, x):
        q, a, b, N = S(p.q), p["a"], p["b"], p.N
        ab = a * b
        total = S(0)
        for k in range(n):
            total += (
                qp(a * q ** k, q, n - k) / qp(ab * q ** (n - 1 + k), q, n - k)
                * qp(q ** (-n), q, k) * qp(q ** (-x), q, k) / qp(q, q, k) * q ** k
                * _inner1_q(q ** (-N + k), q, n - k)
            )
        return total

    @staticmethod
    def pt2(p, m, x):
        q, a, b, N = S(p.q), p["a"], p["b"], p.N
        ab = a * b
        total = S(0)
        for k in range(m + 1):
            bracket = S(0)
            for l in range(m - k):
                bracket += (
                    1 / (1 - a * q ** (N + 1 + k + l))
                    + 1 / (1 - q ** (N + 2 + k + l))
                    - 2 / (1 - ab * q ** (2 * N + 1 + m + k + l))
                )
            for l in range(k):
                bracket -= 1 / (1 - q ** (x - N - 1 - l))
            total += (
                qp(a * q ** (N + 1 + k), q, m - k) * qp(q ** (N + 2 + k), q, m - k)
                / qp(ab * q ** (2 * N + 1 + m + k), q, m - k)
                * qp(q ** (-m), q, k) * qp(q ** (-x + N + 1), q, k) / qp(q, q, k) * q ** k
                * bracket
            )
        return total

    @staticmethod
    def b_const(m):
        return S(0)


class _qK:
    tag = "qK"
    is_q = True
    names = ("p",)
    delta = {"p": 2, "N": -1}
    delta_bar = {"N": -1}
    eta_t, e_t = 4, 5
    kappa_pow = -1
    rho_pow = -1

    @staticmethod
    def check_well_defined(p):
        if p["p"] == 0:
            raise ParameterError("qK needs p != 0")

    @staticmethod
    def eta_d(p):
        return None

    @staticmethod
    def e_dt(p):
        return -p["p"]

    @staticmethod
    def B(p, x):
        return S(p.q) ** (x - p.N) - 1

    @staticmethod
    def D(p, x):
        return p["p"] * (1 - S(p.q) ** x)

    @staticmethod
    def phi0_sq(p, x):
        q, pp, N = S(p.q), p["p"], p.N
        return q_binomial(N, x, q) * pp ** (-x) * q ** (x * (x - 1) // 2 - x * N)

    @staticmethod
    def cv(p, x):
        q = S(p.q)
        return {"p": p["p"], "qNi": q ** (-p.N), "qxi": q ** (-x), "q": q}

    @staticmethod
    def monic(cv, n):
        pp, qNi, qxi, q = cv["p"], cv["qNi"], cv["qxi"], cv["q"]
        total = 0
        for k in range(n + 1):
            total = total + (
                qp(qNi * q ** k, q, n - k) / qp(-pp * q ** (n + k), q, n - k)
                * qp(q ** (-n), q, k) * qp(qxi, q, k) / qp(q, q, k) * q ** k
            )
        return total

    @staticmethod
    def cn_red(p, n):
        return qp(-p["p"] * S(p.q) ** n, S(p.q), n)

    @staticmethod
    def dsq_red(p, n):
        q, pp, N = S(p.q), p["p"], p.N
        return (
            S((-1) ** n) * q ** (N * n - n * (n - 1) // 2)
            * qp(-pp, q, n) * (1 + pp * q ** (2 * n))
            * pp ** (N - n) * q ** (N * (N + 1) // 2 - n * (n + 1) // 2)
            / (qp(q, q, n) * qp(-pp * q ** (N + 1), q, n) * (1 + pp) * qp(-pp * q, q, N))
        )

    @staticmethod
    def pt1(p, n, x):
        q, pp, N = S(p.q), p["p"], p.N
        total = S(0)
        for k in range(n):
            total += (
                1 / qp(-pp * q ** (n + k), q, n - k)
                * qp(q ** (-n), q, k) * qp(q ** (-x), q, k) / qp(q, q, k) * q ** k
                * _inner1_q(q ** (-N + k), q, n - k)
            )
        return total

    @staticmethod
    def pt2(p, m, x):
        q, pp, N = S(p.q), p["p"], p.N
        total = S(0)
        for k in range(m + 1):
            bracket = S(0)
            for l in range(m - k):
                e = 2 * N + 2 + m + k + l
                bracket += (
                    1 / (1 - q ** (N + 2 + k + l))
                    - (1 - pp * q ** e) / (1 + pp * q ** e)
                )
            for l in range(k):
                bracket -= 1 / (1 - q ** (x - N - 1 - l))
            total += (
                qp(q ** (N + 2 + k), q, m - k) / qp(-pp * q ** (2 * N + 2 + m + k), q, m - k)
                * qp(q ** (-m), q, k) * qp(q ** (-x + N + 1), q, k) / qp(q, q, k) * q ** k
                * bracket
            )
        return total

    @staticmethod
    def b_const(m):
        return S(0)


class _qqK:
    tag = "qqK"
    is_q = True
    names = ("p",)
    delta = {"p": 1, "N": -1}
    delta_bar = {"N": -1}
    eta_t, e_t = 4, 3
    kappa_pow = 1
    rho_pow = -1

    @staticmethod
    def check_well_defined(p):
        if p["p"] == 0:
            raise ParameterError("qqK needs p != 0")

    @staticmethod
    def eta_d(p):
        return None

    @staticmethod
    def e_dt(p):
        return None

    @staticmethod
    def B(p, x):
        q, pp = S(p.q), p["p"]
        return q ** x / pp * (q ** (x - p.N) - 1)

    @staticmethod
    def D(p, x):
        q, pp = S(p.q), p["p"]
        return (1 - q ** x) * (1 - q ** (x - p.N - 1) / pp)

    @staticmethod
    def phi0_sq(p, x):
        q, pp, N = S(p.q), p["p"], p.N
        return (
            q_binomial(N, x, q) * pp ** (-x) * q ** (x * (x - 1 - N))
            / qp(q ** (-N) / pp, q, x)
        )

    @staticmethod
    def cv(p, x):
        q = S(p.q)
        return {"p": p["p"], "qNi": q ** (-p.N), "qxi": q ** (-x), "q": q}

    @staticmethod
    def monic(cv, n):
        pp, qNi, qxi, q = cv["p"], cv["qNi"], cv["qxi"], cv["q"]
        total = 0
        for k in range(n + 1):
            total = total + (
                qp(qNi * q ** k, q, n - k)
                * qp(q ** (-n), q, k) * qp(qxi, q, k) / qp(q, q, k)
                * pp ** (k - n) * q ** ((n + 1) * k - n * n)
            )
        return total

    @staticmethod
    def cn_red(p, n):
        return p["p"] ** n * S(p.q) ** (n * n)

    @staticmethod
    def dsq_red(p, n):
        q, pp, N = S(p.q), p["p"], p.N
        return (
            S((-1) ** n) * q ** (N * n - n * (n - 1) // 2)
            * pp ** (-n) * q ** (-N * n)
            / (qp(q, q, n) * qp(q ** (-n) / pp, q, n))
            * qp(q ** (-N) / pp, q, N)
        )

    @staticmethod
    def pt1(p, n, x):
        q, pp, N = S(p.q), p["p"], p.N
        total = S(0)
        for k in range(n):
            total += (
                qp(q ** (-n), q, k) * qp(q ** (-x), q, k) / qp(q, q, k)
                * pp ** (k - n) * q ** ((n + 1) * k - n * n)
                * _inner1_q(q ** (-N + k), q, n - k)
            )
        return total

    @staticmethod
    def pt2(p, m, x):
        q, pp, N = S(p.q), p["p"], p.N
        total = S(0)
        for k in range(m + 1):
            bracket = S(0)
            for l in range(m - k):
                bracket += 1 / (1 - q ** (N + 2 + k + l))
            for l in range(k):
                bracket -= 1 / (1 - q ** (x - N - 1 - l))
            total += (
                qp(q ** (N + 2 + k), q, m - k)
                * qp(q ** (-m), q, k) * qp(q ** (-x + N + 1), q, k) / qp(q, q, k)
                * (pp * q ** (N + 1)) ** (k - m) * q ** ((m + 1) * k - m * m)
                * bracket
            )
        return total

    @staticmethod
    def b_const(m):
        return S(0)


class _aqK:
    tag = "aqK"
    is_q = True
    names = ("p",)
    delta = {"p": 1, "N": -1}
    delta_bar = {"N": -1}
    eta_t, e_t = 4, 4
    kappa_pow = -1
    rho_pow = -1

    @staticmethod
    def check_well_defined(p):
        if p["p"] == 0:
            raise ParameterError("aqK needs p != 0")

    @staticmethod
    def eta_d(p):
        return None

    @staticmethod
    def e_dt(p):
        return None

    @staticmethod
    def B(p, x):
        q, pp = S(p.q), p["p"]
        return (q ** (x - p.N) - 1) * (1 - pp * q ** (x + 1))

    @staticmethod
    def D(p, x):
        q, pp = S(p.q), p["p"]
        return pp * q ** (x - p.N) * (1 - q ** x)

    @staticmethod
    def phi0_sq(p, x):
        q, pp, N = S(p.q), p["p"], p.N
        return q_binomial(N, x, q) * qp(pp * q, q, x) / (pp * q) ** x

    @staticmethod
    def cv(p, x):
        q = S(p.q)
        return {"p": p["p"], "qNi": q ** (-p.N), "qxi": q ** (-x), "q": q}

    @staticmethod
    def monic(cv, n):
        pp, qNi, qxi, q = cv["p"], cv["qNi"], cv["qxi"], cv["q"]
        total = 0
        for k in range(n + 1):
            total = total + (
                qp(pp * q ** (1 + k), q, n - k) * qp(qNi * q ** k, q, n - k)
                * qp(q ** (-n), q, k) * qp(qxi, q, k) / qp(q, q, k) * q ** k
            )
        return total

    @staticmethod
    def cn_red(p, n):
        return 1 / qp(p["p"] * S(p.q), S(p.q), n)

    @staticmethod
    def dsq_red(p, n):
        q, pp, N = S(p.q), p["p"], p.N
        return (
            S((-1) ** n) * q ** (N * n - n * (n - 1) // 2)
            * qp(pp * q, q, n) * (pp * q) ** (N - n) / qp(q, q, n)
        )

    @staticmethod
    def pt1(p, n, x):
        q, pp, N = S(p.q), p["p"], p.N
        total = S(0)
        for k in range(n):
            total += (
                qp(pp * q ** (1 + k), q, n - k)
                * qp(q ** (-n), q, k) * qp(q ** (-x), q, k) / qp(q, q, k) * q ** k
                * _inner1_q(q ** (-N + k), q, n - k)
            )
        return total

    @staticmethod
    def pt2(p, m, x):
        q, pp, N = S(p.q), p["p"], p.N
        total = S(0)
        for k in range(m + 1):
            bracket = S(k)
            for l in range(m - k):
                bracket += (
                    1 / (1 - pp * q ** (N + 2 + k + l))
                    + 1 / (1 - q ** (N + 2 + k + l))
                )
            for l in range(k):
                bracket += 1 / (1 - q ** (-x + N + 1 + l))
            total += (
                qp(pp * q ** (N + 2 + k), q, m - k) * qp(q ** (N + 2 + k), q, m - k)
                * qp(q ** (-m), q, k) * qp(q ** (-x + N + 1), q, k) / qp(q, q, k) * q ** k
                * bracket
            )
        return total

    @staticmethod
    def b_const(m):
        return S(-2 * m)


class _qR:
    tag = "qR"
    is_q = True
    names = ("b", "c", "d")
    delta = {"b": 1, "c": 1, "d": 1, "N": -1}
    delta_bar = {"d": 1, "N": -1}
    eta_t, e_t = 5, 5
    kappa_pow = -1
    rho_pow = -1

    @staticmethod
    def check_well_defined(p):
        if p["d"] == S(p.q):
            raise ParameterError("qR needs d != q")
        if p["d"] == 0 or p["b"] == 0 or p["c"] == 0:
            raise ParameterError("qR needs b, c, d != 0")

    @staticmethod
    def eta_d(p):
        return p["d"]

    @staticmethod
    def e_dt(p):
        return p["a"] * p["b"] * p["c"] / (p["d"] * S(p.q))

    @staticmethod
    def B(p, x):
        q, a, b, c, d = S(p.q), p["a"], p["b"], p["c"], p["d"]
        num = (1 - a * q ** x) * (1 - b * q ** x) * (1 - c * q ** x) * (1 - d * q ** x)
        return -num / ((1 - d * q ** (2 * x)) * (1 - d * q ** (2 * x + 1)))

    @staticmethod
    def D(p, x):
        q, a, b, c, d = S(p.q), p["a"], p["b"], p["c"], p["d"]
        dt = _qR.e_dt(p)
        num = (1 - d * q ** x / a) * (1 - d * q ** x / b) * (1 - d * q ** x / c) * (1 - q ** x)
        return -dt * num / ((1 - d * q ** (2 * x - 1)) * (1 - d * q ** (2 * x)))

    @staticmethod
    def phi0_sq(p, x):
        q, a, b, c, d = S(p.q), p["a"], p["b"], p["c"], p["d"]
        dt = _qR.e_dt(p)
        num = qp(a, q, x) * qp(b, q, x) * qp(c, q, x) * qp(d, q, x)
        den = (
            qp(d * q / a, q, x) * qp(d * q / b, q, x) * qp(d * q / c, q, x)
            * qp(q, q, x) * dt ** x
        )
        return num / den * (1 - d * q ** (2 * x)) / (1 - d)

    @staticmethod
    def cv(p, x):
        q = S(p.q)
        return {
            "a": p["a"], "b": p["b"], "c": p["c"], "dt": _qR.e_dt(p),
            "qxi": q ** (-x), "dqx": p["d"] * q ** x, "q": q,
        }

    @staticmethod
    def monic(cv, n):
        a, b, c, dt = cv["a"], cv["b"], cv["c"], cv["dt"]
        qxi, dqx, q = cv["qxi"], cv["dqx"], cv["q"]
        total = 0
        for k in range(n + 1):
            total = total + (
                qp(a * q ** k, q, n - k) * qp(b * q ** k, q, n - k) * qp(c * q ** k, q, n - k)
                / qp(dt * q ** (n + k), q, n - k)
                * qp(q ** (-n), q, k) * qp(qxi, q, k) * qp(dqx, q, k) / qp(q, q, k) * q ** k
            )
        return total

    @staticmethod
    def cn_red(p, n):
        q = S(p.q)
        return qp(_qR.e_dt(p) * q ** n, q, n) / (qp(p["b"], q, n) * qp(p["c"], q, n))

    @staticmethod
    def dsq_red(p, n):
        q, a, b, c, d, N = S(p.q), p["a"], p["b"], p["c"], p["d"], p.N
        dt = _qR.e_dt(p)
        head = (
            qp(b, q, n) * qp(c, q, n) * qp(dt, q, n)
            / (qp(dt * q / a, q, n) * qp(dt * q / b, q, n) * qp(dt * q / c, q, n)
               * qp(q, q, n) * d ** n)
            * (1 - dt * q ** (2 * n)) / (1 - dt)
        )
        tail = (
            S((-1) ** N)
            * qp(d * q / a, q, N) * qp(d * q / b, q, N) * qp(d * q / c, q, N)
            * dt ** N * q ** (N * (N + 1) // 2)
            / (qp(dt * q, q, N) * qp(d * q, q, 2 * N))
        )
        return head * tail

    @staticmethod
    def pt1(p, n, x):
        q, b, c, d, N = S(p.q), p["b"], p["c"], p["d"], p.N
        dt = _qR.e_dt(p)
        total = S(0)
        for k in range(n):
            inner = S(0)
            for l in range(n - k):
                inner += (
                    qp(q ** (-N + k), q, l) * qp(q ** (-N + k + l + 1), q, n - k - 1 - l)
                    - qp(q ** (-N + k), q, n - k) / (1 - dt * q ** (n + k + l))
                )
            total += (
                qp(b * q ** k, q, n - k) * qp(c * q ** k, q, n - k)
                / qp(dt * q ** (n + k), q, n - k)
                * qp(q ** (-n), q, k) * qp(q ** (-x), q, k) * qp(d * q ** x, q, k)
                / qp(q, q, k) * q ** k
                * inner
            )
        return total

    @staticmethod
    def pt2(p, m, x):
        q, b, c, d, N = S(p.q), p["b"], p["c"], p["d"], p.N
        dt = _qR.e_dt(p)
        total = S(0)
        for k in range(m + 1):
            bracket = S(0)
            for l in range(m - k):
                bracket += (
                    1 / (1 - q ** (N + 2 + k + l))
                    + 1 / (1 - b * q ** (N + 1 + k + l))
                    + 1 / (1 - c * q ** (N + 1 + k + l))
                    - 1 / (1 - dt * q ** (2 * N + 2 + m + k + l))
                )
            for l in range(k):
                bracket += (
                    1 / (1 - q ** (-x + N + 1 + l))
                    + 1 / (1 - d * q ** (x + N + 1 + l))
                )
            total += (
                qp(q ** (N + 2 + k), q, m - k)
                * qp(b * q ** (N + 1 + k), q, m - k) * qp(c * q ** (N + 1 + k), q, m - k)
                / qp(dt * q ** (2 * N + 2 + m + k), q, m - k)
                * qp(q ** (-m), q, k) * qp(q ** (-x + N + 1), q, k)
                * qp(d * q ** (x + N + 1), q, k) / qp(q, q, k) * q ** k
                * bracket
            )
        return total

    @staticmethod
    def b_const(m):
        return S(-2 * m)


class _dqH:
    tag = "dqH"
    is_q = True
    names = ("a", "b")
    delta = {"a": 1, "N": -1}
    delta_bar = {"b": 1, "N": -1}
    eta_t, e_t = 5, 4
    kappa_pow = -1
    rho_pow = -1

    @staticmethod
    def check_well_defined(p):
        q = S(p.q)
        if p["a"] * p["b"] in (q, q ** 2):
            raise ParameterError("dqH needs ab not in {q, q^2}")
        if p["a"] == 0 or p["b"] == 0:
            raise ParameterError("dqH needs a, b != 0")

    @staticmethod
    def eta_d(p):
        return p["a"] * p["b"] / S(p.q)

    @staticmethod
    def e_dt(p):
        return None

    @staticmethod
    def B(p, x):
        q, a, b, N = S(p.q), p["a"], p["b"], p.N
        ab = a * b
        num = (q ** (x - N) - 1) * (1 - a * q ** x) * (1 - ab * q ** (x - 1))
        return num / ((1 - ab * q ** (2 * x - 1)) * (1 - ab * q ** (2 * x)))

    @staticmethod
    def D(p, x):
        q, a, b, N = S(p.q), p["a"], p["b"], p.N
        ab = a * b
        num = a * q ** (x - N - 1) * (1 - q ** x) * (1 - ab * q ** (x + N - 1)) * (1 - b * q ** (x - 1))
        return num / ((1 - ab * q ** (2 * x - 2)) * (1 - ab * q ** (2 * x - 1)))

    @staticmethod
    def phi0_sq(p, x):
        q, a, b, N = S(p.q), p["a"], p["b"], p.N
        ab = a * b
        return (
            q_binomial(N, x, q) * qp(a, q, x) * qp(ab / q, q, x)
            / (qp(ab * q ** N, q, x) * qp(b, q, x) * a ** x)
            * (1 - ab * q ** (2 * x - 1)) / (1 - ab / q)
        )

    @staticmethod
    def cv(p, x):
        q = S(p.q)
        return {
            "a": p["a"], "qNi": q ** (-p.N),
            "qxi": q ** (-x), "abqx": p["a"] * p["b"] * q ** (x - 1), "q": q,
        }

    @staticmethod
    def monic(cv, n):
        a, qNi, qxi, abqx, q = cv["a"], cv["qNi"], cv["qxi"], cv["abqx"], cv["q"]
        total = 0
        for k in range(n + 1):
            total = total + (
                qp(a * q ** k, q, n - k) * qp(qNi * q ** k, q, n - k)
                * qp(q ** (-n), q, k) * qp(abqx, q, k) * qp(qxi, q, k)
                / qp(q, q, k) * q ** k
            )
        return total

    @staticmethod
    def cn_red(p, n):
        return 1 / qp(p["a"], S(p.q), n)

    @staticmethod
    def dsq_red(p, n):
        q, a, b, N = S(p.q), p["a"], p["b"], p.N
        return (
            S((-1) ** n) * q ** (N * n - n * (n - 1) // 2)
            * qp(a, q, n) * qp(b, q, N) * a ** (N - n)
            / (qp(q, q, n) * qp(b * q ** (N - n), q, n) * qp(a * b, q, N))
        )

    @staticmethod
    def pt1(p, n, x):
        q, a, b, N = S(p.q), p["a"], p["b"], p.N
        ab = a * b
        total = S(0)
        for k in range(n):
            total += (
                qp(a * q ** k, q, n - k)
                * qp(q ** (-n), q, k) * qp(ab * q ** (x - 1), q, k) * qp(q ** (-x), q, k)
                / qp(q, q, k) * q ** k
                * _inner1_q(q ** (-N + k), q, n - k)
            )
        return total

    @staticmethod
    def pt2(p, m, x):
        q, a, b, N = S(p.q), p["a"], p["b"], p.N
        ab = a * b
        total = S(0)
        for k in range(m + 1):
            bracket = S(0)
            for l in range(m - k):
                bracket += (
                    1 / (1 - a * q ** (N + 1 + k + l))
                    + 1 / (1 - q ** (N + 2 + k + l))
                )
            for l in range(k):
                bracket += (
                    1 / (1 - ab * q ** (x + N + l))
                    + 1 / (1 - q ** (-x + N + 1 + l))
                )
            total += (
                qp(a * q ** (N + 1 + k), q, m - k) * qp(q ** (N + 2 + k), q, m - k)
                * qp(q ** (-m), q, k) * qp(ab * q ** (x + N), q, k)
                * qp(q ** (-x + N + 1), q, k) / qp(q, q, k) * q ** k
                * bracket
            )
        return total

    @staticmethod
    def b_const(m):
        return S(-2 * m)


class _dqK:
    tag = "dqK"
    is_q = True
    names = ("p",)
    delta = {"p": 1, "N": -1}
    delta_bar = {"p": 1, "N": -1}
    eta_t, e_t = 5, 4
    kappa_pow = -1
    rho_pow = -1

    @staticmethod
    def check_well_defined(p):
        if p["p"] == 0:
            raise ParameterError("dqK needs p != 0")

    @staticmethod
    def eta_d(p):
        return -p["p"]

    @staticmethod
    def e_dt(p):
        return None

    @staticmethod
    def B(p, x):
        q, pp, N = S(p.q), p["p"], p.N
        num = (q ** (x - N) - 1) * (1 + pp * q ** x)
        return num / ((1 + pp * q ** (2 * x)) * (1 + pp * q ** (2 * x + 1)))

    @staticmethod
    def D(p, x):
        q, pp, N = S(p.q), p["p"], p.N
        num = pp * q ** (2 * x - N - 1) * (1 - q ** x) * (1 + pp * q ** (x + N))
        return num / ((1 + pp * q ** (2 * x - 1)) * (1 + pp * q ** (2 * x)))

    @staticmethod
    def phi0_sq(p, x):
        q, pp, N = S(p.q), p["p"], p.N
        return (
            q_binomial(N, x, q)
            * qp(-pp, q, x) * pp ** (-x) * q ** (-(x * (x + 1) // 2))
            / qp(-pp * q ** (N + 1), q, x)
            * (1 + pp * q ** (2 * x)) / (1 + pp)
        )

    @staticmethod
    def cv(p, x):
        q = S(p.q)
        return {"qNi": q ** (-p.N), "qxi": q ** (-x), "mpqx": -p["p"] * q ** x, "q": q}

    @staticmethod
    def monic(cv, n):
        qNi, qxi, mpqx, q = cv["qNi"], cv["qxi"], cv["mpqx"], cv["q"]
        total = 0
        for k in range(n + 1):
            total = total + (
                qp(qNi * q ** k, q, n - k)
                * qp(q ** (-n), q, k) * qp(qxi, q, k) * qp(mpqx, q, k)
                / qp(q, q, k) * q ** k
            )
        return total

    @staticmethod
    def cn_red(p, n):
        return ONE

    @staticmethod
    def dsq_red(p, n):
        q, pp, N = S(p.q), p["p"], p.N
        return (
            S((-1) ** n) * q ** (N * n - n * (n - 1) // 2)
            * pp ** (N - n) * q ** (-N * n + n * (n - 1) // 2 + N * (N + 1) // 2)
            / (qp(q, q, n) * qp(-pp * q, q, N))
        )

    @staticmethod
    def pt1(p, n, x):
        q, pp, N = S(p.q), p["p"], p.N
        total = S(0)
        for k in range(n):
            total += (
                qp(q ** (-n), q, k) * qp(q ** (-x), q, k) * qp(-pp * q ** x, q, k)
                / qp(q, q, k) * q ** k
                * _inner1_q(q ** (-N + k), q, n - k)
            )
        return total

    @staticmethod
    def pt2(p, m, x):
        q, pp, N = S(p.q), p["p"], p.N
        total = S(0)
        for k in range(m + 1):
            bracket = S(0)
            for l in range(m - k):
                bracket += 1 / (1 - q ** (N + 2 + k + l))
            for l in range(k):
                bracket += (
                    -1 / (1 - q ** (x - N - 1 - l))
                    + 1 / (1 + pp * q ** (x + N + 1 + l))
                )
            total += (
                qp(q ** (N + 2 + k), q, m - k)
                * qp(q ** (-m), q, k) * qp(q ** (-x + N + 1), q, k)
                * qp(-pp * q ** (x + N + 1), q, k) / qp(q, q, k) * q ** k
                * bracket
            )
        return total

    @staticmethod
    def b_const(m):
        return S(-m)


_REGISTRY = {f.tag: f for f in (_H, _K, _R, _dH, _dqqK, _qH, _qK, _qqK, _aqK, _qR, _dqH, _dqK)}
