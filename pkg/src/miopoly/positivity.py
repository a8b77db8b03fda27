"""Weight-positivity machinery for the deformed systems.

Everything is decided by exact sign evaluation: a weight is positive, zero,
or negative, with no thresholds, and a zero counts as a violation.  The
parameter-range predicate, the class (a)/(b) split and the parity condition
on the added labels reproduce the observed positivity rule for class (a);
for class (b) only a documented search for positive instances is provided,
since no definite parameter range is known.
"""

from dataclasses import dataclass

from .exact import S
from .families import Params, default_params, make_params, phi0_squared
from .krein_adler import DeletionSystem
from .state_adding import AdditionSystem

CLASS_A = ("H", "K", "dqqK", "qH", "qK", "aqK", "dqK")
CLASS_B = ("R", "dH", "qqK", "qR", "dqH")


def family_class(tag: str) -> str:
    if tag in CLASS_A:
        return "a"
    if tag in CLASS_B:
        return "b"
    raise ValueError(f"unknown family {tag!r}")


def in_range_m(p: Params, M: int) -> bool:
    """Positivity range of the original potentials after an M-step deformation."""
    tag = p.family
    if tag == "H":
        return p["a"] > 0 and p["b"] > 0
    if tag == "K":
        return 0 < p["p"] < 1
    if tag == "R":
        b, c, d = p["b"], p["c"], p["d"]
        return b > p.N + d and d > M and 0 < c < 1 + d - M and d != M + 1
    if tag == "dH":
        a, b = p["a"], p["b"]
        return a > 0 and b > M and (a + b) not in (M + 1, M + 2)
    q = S(p.q)
    if tag == "dqqK":
        return p["p"] > q ** (-p.N)
    if tag == "qH":
        return 0 < p["a"] < 1 and 0 < p["b"] < 1
    if tag == "qK":
        return p["p"] > 0
    if tag == "qqK":
        return p["p"] > q ** (-p.N - M)
    if tag == "aqK":
        return 0 < p["p"] < q ** (-1)
    if tag == "qR":
        b, c, d = p["b"], p["c"], p["d"]
        return (
            0 < b < d * q ** p.N and d < q ** M and d * q ** (1 - M) < c < 1
            and d != q ** (M + 1)
        )
    if tag == "dqH":
        a, b = p["a"], p["b"]
        return (
            0 < a < 1 and 0 < b * q ** (-M) < 1
            and a * b not in (q ** (M + 1), q ** (M + 2))
        )
    if tag == "dqK":
        return p["p"] > 0
    raise ValueError(f"unknown family {tag!r}")


def parity_condition(labels, N: int) -> bool:
    """d_j - d_{j-1} odd with d_0 = N, for ascending labels above N."""
    labels = tuple(sorted(labels))
    if any(d <= N for d in labels):
        raise ValueError("parity condition applies to labels above N")
    seq = (N,) + labels
    return all((b - a) % 2 == 1 for a, b in zip(seq, seq[1:]))


def parity_condition_m_form(labels, N: int) -> bool:
    """Equivalent form: m_1, m_3, ... even and m_2, m_4, ... odd."""
    ms = tuple(sorted(d - N - 1 for d in labels))
    return all(m % 2 == (j % 2) for j, m in enumerate(ms))


@dataclass(frozen=True)
class Verdict:
    phi0_positive: bool
    xi_product_positive: bool
    first_violation: int | None

    @property
    def positive(self) -> bool:
        return self.phi0_positive and self.xi_product_positive


def scan_addition(sys: AdditionSystem) -> Verdict:
    """Exact signs of the level-adding weight over the full grid -M..N."""
    phi_ok = True
    xi_ok = True
    first = None
    for x in sys.grid:
        if phi0_squared(sys.p_bar, x + sys.M) <= 0:
            phi_ok = False
            first = x if first is None else first
        if sys.xi_monic(x) * sys.xi_monic(x + 1) <= 0:
            xi_ok = False
            first = x if first is None else first
    return Verdict(phi_ok, xi_ok, first)


def scan_deletion(sys: DeletionSystem) -> Verdict:
    """Exact signs of the level-deleting weight over the grid 0..N-M."""
    phi_ok = True
    xi_ok = True
    first = None
    for x in sys.grid:
        if phi0_squared(sys.p_shift, x) <= 0:
            phi_ok = False
            first = x if first is None else first
        if sys.xi(x) * sys.xi(x + 1) <= 0:
            xi_ok = False
            first = x if first is None else first
    return Verdict(phi_ok, xi_ok, first)


def class_b_candidates(tag: str, N: int, M: int, steps: int = 8):
    """Documented parameter walk along the steering direction for class (b).

    Follows the qualitative guidance: large p for qqK, large b for dH,
    small b for dqH, large d for R, small d for qR.
    """
    q = S(1, 2)
    for t in range(1, steps + 1):
        if tag == "R":
            d = M + t + S(1, 3)
            yield make_params("R", N, b=N + d + 1, c=S(1, 2), d=d)
        elif tag == "dH":
            yield make_params("dH", N, a=S(1, 2), b=M + t + S(1, 3))
        elif tag == "qqK":
            yield make_params("qqK", N, q=q, p=S(3, 2) * S(2) ** (N + M + t))
        elif tag == "qR":
            d = S(4, 5) * q ** (M + t)
            yield make_params("qR", N, q=q, b=d * q ** (N + 1), c=S(3, 5), d=d)
        elif tag == "dqH":
            yield make_params("dqH", N, q=q, a=S(1, 3), b=S(4, 5) * q ** (M + t))
        else:
            raise ValueError(f"{tag} is not a class (b) family")


def find_class_b_instance(tag: str, N: int, M: int, labels, steps: int = 8):
    """First steering-walk instance whose addition weight is positive.

    Returns (params, verdict) or None; records data, makes no range claim.
    """
    for p in class_b_candidates(tag, N, M, steps):
        if not in_range_m(p, M):
            continue
        try:
            v = scan_addition(AdditionSystem(p, labels))
        except Exception:
            continue
        if v.positive:
            return p, v
    return None
