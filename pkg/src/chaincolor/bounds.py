"""Iterated logarithms, the Lambert W function, the inverse P_r and the
closed-form chromatic bounds of the four chain-graph families.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .errors import DomainError, NoConvergence

LN2 = math.log(2.0)
_EXP_SAFE = 700.0


def iter_log(x: float, j: int) -> float:
    """log2 applied j times."""
    if j < 0:
        raise DomainError("iteration count must be nonnegative")
    for _ in range(j):
        if x <= 0:
            raise DomainError(f"log of nonpositive value {x}")
        x = math.log2(x)
    return x


def log_star(x: float) -> int:
    """Least j with log^(j) x <= 1."""
    if x <= 0:
        raise DomainError("log* needs a positive argument")
    j = 0
    while x > 1:
        x = math.log2(x)
        j += 1
    return j


def lambert_w(x: float, tol: float = 1e-12, max_iter: int = 100) -> float:
    """Principal branch of W on the positive reals, by Halley's method."""
    if not x > 0:
        raise DomainError("lambert_w is defined here for x > 0 only")
    if math.isinf(x):
        return math.inf
    if math.log(x) > _EXP_SAFE:
        return lambert_w_of_exp(math.log(x), tol, max_iter)
    w = math.log1p(x)
    scale = x
    for _ in range(max_iter):
        ew = math.exp(w)
        f = w * ew - x
        if abs(f) <= tol * scale:
            return w
        wp1 = w + 1.0
        w -= f / (ew * wp1 - (w + 2.0) * f / (2.0 * wp1))
    ew = math.exp(w)
    if abs(w * ew - x) <= tol * scale:
        return w
    raise NoConvergence(f"Halley iteration for W({x}) did not converge")


def lambert_w_of_exp(L: float, tol: float = 1e-12, max_iter: int = 100) -> float:
    """W(e^L) for large L, solving w + ln w = L by Newton's method."""
    w = L - math.log(L) if L > 1 else 1.0
    for _ in range(max_iter):
        step = (w + math.log(w) - L) / (1.0 + 1.0 / w)
        w -= step
        if abs(step) <= tol * max(1.0, abs(w)):
            return w
    raise NoConvergence(f"Newton iteration for W(e^{L}) did not converge")


def lower_map_log2(n: float, r: int) -> float:
    """log2 of n -> 2^(2n + 2^(n / 2^(r-2)))."""
    e = n / 2 ** (r - 2)
    return 2 * n + (2 ** e if e < 1000 else math.inf)


def _ln(m) -> float:
    return math.log(m)


def p_r_closed(m, r: int) -> float:
    """Closed-form inverse of n -> 2^(2n + 2^(n / 2^(r-2))) through Lambert W."""
    if r < 2:
        raise DomainError("P_r needs r >= 2")
    if m < 2:
        raise DomainError("P_r needs m >= 2")
    ln_m = _ln(m)
    c = 2.0 ** (1 - r)
    ln_arg = c * ln_m + math.log(c) + math.log(LN2)
    w = lambert_w(math.exp(ln_arg)) if ln_arg <= _EXP_SAFE else lambert_w_of_exp(ln_arg)
    return (2 * ln_m - 2.0 ** r * w) / (4 * LN2)


def p_r_bisect(m, r: int, iters: int = 200) -> float:
    target = _ln(m) / LN2
    if target < 1:
        raise DomainError("P_r needs m >= 2")
    # F(n) >= 2^(n / 2^(r-2)) gives a finite bracket
    lo, hi = 0.0, min(target / 2, 2 ** (r - 2) * math.log2(target) + 1)
    for _ in range(iters):
        mid = (lo + hi) / 2
        if lower_map_log2(mid, r) < target:
            lo = mid
        else:
            hi = mid
        if hi - lo <= 1e-15 * max(1.0, hi):
            break
    return (lo + hi) / 2


def p_r(m, r: int, rel_tol: float = 1e-9) -> float:
    """P_r(m), cross-checked against a bisection inverse."""
    closed = p_r_closed(m, r)
    bis = p_r_bisect(m, r)
    if abs(closed - bis) > rel_tol * max(1.0, abs(bis)):
        raise NoConvergence(f"P_{r}({m}): closed form {closed} disagrees with bisection {bis}")
    return closed


# -- closed-form bounds --------------------------------------------------------


@dataclass
class BoundReport:
    family: str
    params: dict
    upper: float
    lower: float
    flags: list = field(default_factory=list)
    upper_log2: float = math.nan
    lower_log2: float = math.nan


def _pow2(e: float, flags: list) -> float:
    if e > 1023:
        if "saturated" not in flags:
            flags.append("saturated")
        return math.inf
    return 2.0 ** e


def _precondition_U(m, R: int, delta: int) -> bool:
    """log^(2 delta - 2) m >= 2^(2^(2 + 2R))."""
    if delta < 1:
        return False
    try:
        top = iter_log(m, 2 * delta - 2)
    except DomainError:
        return False
    if top <= 1:
        return False
    return math.log2(top) >= 2 ** (2 + 2 * R)


def bound_table(spec) -> BoundReport:
    """Evaluate the upper and lower chromatic bounds for one family."""
    fam, m, d = spec.family, spec.m, spec.delta
    flags: list = []
    L = iter_log(m, 2 * d)
    if L <= 0:
        raise DomainError(f"log^({2 * d}) {m} = {L} is not positive")
    lg = math.log2(L)
    if fam in ("U", "Z"):
        R = spec.R
        up_e = 2 ** (2 + 2 * R)
        lo_e = (R - 2 * d - 4) / 2
        flags += ["asymptotic-upper", "asymptotic-lower"]
        if not _precondition_U(m, R, d):
            flags.append("precondition-unmet")
        params = {"m": m, "R": R, "delta": d}
    elif fam == "W":
        r, s = spec.r, spec.sigma
        up_e = 2 ** (2 + r ** (s + d - 2) * (r + 1))
        lo_e = (r ** (s + d - 2) * (r - 1) - 5) / 2
        flags.append("asymptotic-lower")
        if L < 1:
            flags.append("precondition-unmet")
        params = {"m": m, "r": r, "sigma": s, "delta": d}
    else:
        up_e = 2 ** (2 + 2 * (2 * d + 1))
        lo_e = 0.0
        if not _precondition_U(m, 2 * d + 1, d):
            flags.append("precondition-unmet")
        params = {"m": m, "delta": d}
    up_log2 = up_e + lg
    lo_log2 = lo_e + lg
    return BoundReport(str(spec), params, _pow2(up_e, flags) * L, _pow2(lo_e, flags) * L,
                       flags, up_log2, lo_log2)
