"""Second-order loop amplitude and the virtual-exchange renormalization stack.

The continuum loop Gamma_{k_f k_i}(n) collects two dressed c/c transitions
with an intermediate continuum propagation; its imaginary part is a finite
residue sum over open channels and its real part a principal-value integral.
The bound-state route is described by the continuum-bound-continuum
amplitude B_{k_f k_i}(n), whose pole at integer effective energy is tamed
by summing virtual multi-photon exchange processes: the pole position
shifts by alpha, acquires the width eta_R = beta * (1 + gamma), and the
residue is normalized by Z.

All series over sideband indices truncate adaptively (geometric decay of
the q-factors); truncation caps are recorded in diagnostics rather than
silently ignored.
"""

from __future__ import annotations

import cmath
import functools
import math
from dataclasses import dataclass, field
from typing import Dict, List

import numpy as np

from .amplitudes import b_coefficient, b_coefficient_bc
from .errors import DomainError
from .model import q_factor
from .quadrature import adaptive_quad, pv_integral

__all__ = [
    "LoopValue",
    "RenormFactors",
    "gamma_loop",
    "gamma_elastic_closed",
    "b_bare",
    "alpha_shift",
    "beta_width",
    "renorm_factors",
    "b_renorm",
]

_SERIES_CAP = 64       # hard cap on series terms
_SERIES_EPS = 1e-15    # relative cutoff for geometric series tails


@dataclass(frozen=True)
class LoopValue:
    """Real/imaginary parts of a loop amplitude with bookkeeping.

    ``im`` comes from the finite open-channel residue sum; ``re`` carries
    the principal-value quadrature error estimate in diagnostics.
    """

    re: float
    im: float
    n: int
    diagnostics: Dict = field(default_factory=dict, repr=False)

    @property
    def value(self) -> complex:
        return complex(self.re, self.im)


@dataclass(frozen=True)
class RenormFactors:
    """Corrected pole parameters of the c/b/c amplitude."""

    alpha: float
    beta: float
    gamma_factor: float
    eta_R: float
    eps_R: float
    Z: complex
    n0: int


def _a_array(k_out, k_in, n: int, g0: float):
    """Vectorized c/c Fourier coefficient; one argument may be an array.

    No pole guards: quadrature callers keep nodes off the removed
    diagonal and the k_out**2 == k_in**2 lines.
    """
    if n == 0:
        return np.zeros(np.broadcast(np.asarray(k_out), np.asarray(k_in)).shape,
                        dtype=complex)
    sign = 1.0 if n > 0 else (-1.0 if n % 2 == 0 else 1.0)
    bracket = q_factor(k_in, abs(n), g0) - (-1) ** n * q_factor(k_out, abs(n), g0)
    return ((1j / math.pi) * (k_out * k_in / (k_out * k_out - k_in * k_in))
            / (k_out + k_in) * bracket * sign)


def _decay_count(q: float, cap: int = _SERIES_CAP // 2, floor: int = 10) -> int:
    """Number of sideband orders until q**m underflows the series cutoff."""
    if q <= 0.0:
        return floor
    if q >= 1.0:
        return cap
    need = int(math.ceil(math.log(1e-18) / math.log(q)))
    return min(cap, max(floor, need))


def _pv_over_halfline(f, poles: List[float], split: float, tol: float):
    """PV integral of ``f`` over [0, inf) with simple poles inside (0, split).

    Partitions [0, split] at midpoints between consecutive poles, applies
    residue-subtraction PV on each piece, and adds the tan-transformed
    tail from ``split``.  Returns (value, error_estimate).
    """
    poles = sorted(poles)
    value, err = 0.0, 0.0
    if poles:
        cuts = [0.0]
        cuts.extend(0.5 * (p1 + p2) for p1, p2 in zip(poles, poles[1:]))
        cuts.append(split)
        for (a, b), p in zip(zip(cuts, cuts[1:]), poles):
            res = pv_integral(f, p, a, b, tol=tol)
            value += res.value.real if np.iscomplexobj(res.value) else res.value
            err += res.error_estimate
    else:
        res = adaptive_quad(f, 0.0, split, tol=tol)
        value += complex(res.value).real
        err += res.error_estimate

    def tail(u):
        x = np.tan(u)
        return np.asarray(f(x)) * (1.0 + x * x)

    res = adaptive_quad(tail, math.atan(split), 0.5 * math.pi, tol=tol)
    value += complex(res.value).real
    err += res.error_estimate
    return value, err


@functools.lru_cache(maxsize=4096)
def gamma_loop(k_f: float, k_i: float, n: int, g0: float, tol: float = 1e-8) -> LoopValue:
    """Second-order continuum loop amplitude Gamma_{k_f k_i}(n).

    im = -pi * sum over open channels l of A_{k_f k_l}(n-l) A_{k_l k_i}(l) / k_l;
    re = principal value over the intermediate momentum of the full
    channel sum, with the propagator poles at open k_l and the transition
    poles at k_i (and k_f for n != 0) all treated symmetrically.  The
    l-truncation is adaptive with a diagnostics flag on cap hit.
    """
    if k_f <= 0 or k_i <= 0:
        raise DomainError(f"wavenumbers must be positive, got ({k_f}, {k_i})")
    diag: Dict = {}
    if g0 == 0:
        return LoopValue(re=0.0, im=0.0, n=n, diagnostics={"channels": []})
    eps_i = 0.5 * k_i * k_i

    q_i = float(q_factor(k_i, 1, g0))
    L = max(_decay_count(q_i), abs(n) + 2, int(math.floor(eps_i)) + 2)
    diag["l_max"] = L
    diag["truncation_capped"] = L >= _SERIES_CAP // 2
    ls = [l for l in range(-L, L + 1) if l != 0 and l != n]
    diag["channels"] = ls

    # finite residue sum over open intermediate channels
    im_total = 0.0
    for l in ls:
        kl2 = k_i * k_i + 2 * l
        if kl2 <= 0:
            continue
        kl = math.sqrt(kl2)
        prod = (_a_array(k_f, kl, n - l, g0) * _a_array(kl, k_i, l, g0)).real
        im_total += prod / kl
    im_total *= -math.pi

    def integrand(k):
        k = np.asarray(k, dtype=float)
        total = np.zeros(k.shape, dtype=float)
        for l in ls:
            prod = (_a_array(k_f, k, n - l, g0) * _a_array(k, k_i, l, g0)).real
            total += prod / (eps_i - 0.5 * k * k + l)
        return total

    pole_set = {k_i}
    if n != 0:
        pole_set.add(k_f)
    for l in ls:
        kl2 = k_i * k_i + 2 * l
        # channels within 1e-6 of threshold are left to the plain panels:
        # their principal-value weight scales like k_l ln k_l and the
        # residue extraction degenerates there
        if kl2 > 1e-12:
            pole_set.add(math.sqrt(kl2))
    poles = sorted(pole_set)
    split = max(4.0 * k_i, 4.0 * k_f, 4.0 * g0, 8.0, 1.5 * poles[-1])
    re_total, err = _pv_over_halfline(integrand, poles, split, tol)
    diag["error_estimate"] = err
    diag["poles"] = poles
    return LoopValue(re=re_total, im=im_total, n=n, diagnostics=diag)


def _decaying_lambda(kbar: complex) -> complex:
    """Root lambda = sqrt(kbar**2 + 1) - kbar with |lambda| <= 1.

    On the closed-channel continuation kbar = -i|k|/g0 the principal
    square root picks the growing branch; selecting the smaller-modulus
    root keeps the analytically continued q-factors bounded.
    """
    s = cmath.sqrt(kbar * kbar + 1.0)
    lam_plus = s - kbar
    lam_minus = -s - kbar
    return lam_plus if abs(lam_plus) <= abs(lam_minus) else lam_minus


def gamma_elastic_closed(k_i: float, g0: float,
                         include_closed: bool = False) -> LoopValue:
    """Closed-form elastic loop: finite channel sums, no quadrature.

    Im is the open-channel residue sum expressed through the scaled
    momenta kbar = k / g0; Re is the two-part analytic evaluation of the
    principal-value integral (a log-weighted residue sum over the
    propagator poles plus the log-weighted term of the transition pole at
    k_i).  With ``include_closed`` the closed channels are added through
    the k_l -> -i |k_l| continuation on the bounded root branch.
    """
    if k_i <= 0:
        raise DomainError(f"k_i must be positive, got {k_i}")
    if g0 <= 0:
        raise DomainError(f"g0 must be positive, got {g0}")
    kbi = k_i / g0
    kap_i = math.sqrt(kbi * kbi + 1.0)
    lam_i = kap_i - kbi

    def q_i(m):
        return lam_i ** m

    L = max(_decay_count(lam_i if kbi > 1 else 0.5), int(math.floor(0.5 * k_i * k_i)) + 2)
    total = 0.0 + 0.0j
    for l in range(-L, L + 1):
        if l == 0:
            continue
        kl2 = k_i * k_i + 2 * l
        if kl2 >= 0:
            kl = math.sqrt(kl2)
            ln_kl2 = math.log(kl2) if kl2 > 0 else 0.0
            kbl = kl / g0
            lam_l = _decaying_lambda(kbl)
        elif include_closed:
            kl = -1j * math.sqrt(-kl2)
            # continuation from the upper half k-plane: k_l**2 -> |k_l|**2 e^{-i pi}
            ln_kl2 = math.log(-kl2) - 1j * math.pi
            kbl = kl / g0
            lam_l = _decaying_lambda(kbl)
        else:
            continue

        def q_l(m):
            return lam_l ** m

        am = abs(l)
        if kl2 >= 0:
            bracket = q_l(am) - (-1) ** l * q_i(am)
            im_term = (-(k_i * k_i / (4.0 * math.pi)) * (kl / l ** 2)
                       / (k_i + kl) ** 2 * abs(bracket) ** 2)
        else:
            bracket = q_l(am) - (-1) ** l * q_i(am)
            im_term = (-(k_i * k_i / (4.0 * math.pi)) * (kl / l ** 2)
                       / (k_i + kl) ** 2 * bracket ** 2)

        a1 = (q_l(am) * (1.0 / (kbl * (kbl - kbi)) + (-1) ** l / (kbl * (kbl + kbi)))
              - 2.0 / (kbl * kbl - kbi * kbi) * q_i(am))
        b1 = (q_l(am - 1) * (lam_l ** 2 - 1.0)
              * (1.0 / (kbl * (kbl - kbi)) + (-1) ** (l - 1) / (kbl * (kbl + kbi)))
              - 2.0 / (kbl * kbl - kbi * kbi) * q_i(am - 1) * (lam_i ** 2 - 1.0))
        i1 = (k_i * k_i / (16.0 * math.pi ** 2)) * (kl * kl * ln_kl2 / l ** 2) \
            * (a1 * b1) / g0 ** 3

        a2 = (0.5 * q_i(am + 1) / (kap_i ** 2 * kbi)
              - 0.5 * (am + 1) * q_i(am) / (kap_i * kbi)
              - lam_i ** (am + 1) / (kap_i ** 2 * kbi)
              - 0.25 * q_i(am) / (kap_i ** 2 * kbi) * (lam_i - kbi)
              + 0.25 * (-1) ** l * q_i(am) / kbi ** 2)
        b2 = (q_i(am) / (kap_i ** 2 * kbi) * (lam_i ** 2 - 1.0)
              - am * q_i(am - 1) / (kap_i * kbi) * (lam_i ** 2 - 1.0)
              - 4.0 * lam_i ** (am + 2) / (kap_i ** 2 * kbi)
              - 0.5 * q_i(am - 1) / (kap_i ** 2 * kbi) * (lam_i ** 2 - 1.0)
              * (lam_i - kbi)
              + 0.5 * (-1) ** (l - 1) * q_i(am - 1) / kbi ** 2 * (lam_i ** 2 - 1.0))
        i2 = -(k_i ** 4 * math.log(k_i * k_i) / (4.0 * math.pi ** 2)) \
            * (a2 * b2) / (l ** 2 * g0 ** 3)

        total += i1 + i2 + 1j * im_term
    return LoopValue(re=float(total.real), im=float(total.imag), n=0,
                     diagnostics={"l_max": L, "include_closed": include_closed})


def _b_pair(k_f: float, k_i: float, m_out: int, m_in: int, g0: float) -> complex:
    """Product B_{k_f b}(m_out) * B_{b k_i}(m_in); zero for even indices."""
    if m_out % 2 == 0 or m_in % 2 == 0:
        return 0.0 + 0.0j
    return b_coefficient(k_f, m_out, g0) * b_coefficient_bc(k_i, m_in, g0)


def b_bare(k_f: float, k_i: float, n: int, eps_i: float, g0: float,
           eta: float) -> complex:
    """Bare c/b/c amplitude with the convergence regulator ``eta`` > 0.

    Sum over intermediate sideband offsets n0 of
    B_{k_f b}(n + n0) B_{b k_i}(-n0) / (eps_i + g0**2/8 - n0 + i eta);
    only odd n + n0 and odd n0 contribute, so the amplitude vanishes for
    odd n.  The n0-series truncates on geometric decay.
    """
    if eta <= 0:
        raise DomainError(f"eta must be positive, got {eta}")
    eps_t = eps_i + g0 * g0 / 8.0
    total = 0.0 + 0.0j
    acc = 0.0
    terms = 0
    for a in range(1, _SERIES_CAP + 1):
        # walk outward: n0 = +a, -a
        layer = 0.0
        for n0 in (a, -a):
            num = _b_pair(k_f, k_i, n + n0, -n0, g0)
            if num == 0:
                continue
            term = num / (eps_t - n0 + 1j * eta)
            total += term
            layer += abs(term)
            terms += 1
        acc += layer
        if acc > 0 and layer < _SERIES_EPS * acc and a > max(2, abs(n) + 1):
            break
    return total


@functools.lru_cache(maxsize=4096)
def alpha_shift(n0: int, eps_i: float, g0: float, tol: float = 1e-8) -> float:
    """Real pole-position shift from four bound-state transitions.

    2 * sum_l PV int_0^inf dk |B_{k b}(n0 + l)|**2 / (eps_k - eps_i - l);
    the channel sum runs over odd n0 + l with adaptive truncation.
    """
    if g0 <= 0:
        raise DomainError(f"g0 must be positive, got {g0}")
    k_i = math.sqrt(2.0 * eps_i)
    q_i = float(q_factor(max(k_i, 1.0), 1, g0))
    M = _decay_count(q_i)
    total = 0.0
    for m in range(-M, M + 1):
        if m % 2 == 0:
            continue
        l = m - n0
        am = abs(m)

        def integrand(k, _l=l, _am=am):
            k = np.asarray(k, dtype=float)
            mod2 = (g0 / math.pi) * q_factor(k, _am, g0) ** 2 \
                / (k * k + 0.25 * g0 * g0)
            return mod2 / (0.5 * k * k - eps_i - _l)

        kl2 = 2.0 * (eps_i + l)
        poles = [math.sqrt(kl2)] if kl2 > 0 else []
        split = max(4.0 * k_i, 4.0 * g0, 8.0, (1.5 * poles[0]) if poles else 0.0)
        value, _ = _pv_over_halfline(integrand, poles, split, tol)
        total += value
    return 2.0 * total


@functools.lru_cache(maxsize=4096)
def beta_width(n0: int, eps_i: float, g0: float) -> float:
    """Width seed: open-channel flux of the bound-state route, >= 0.

    sum over open l of (2 pi / k_l) |B_{k_l b}(n0 + l)|**2 with
    k_l = sqrt(2 (eps_i + l)).
    """
    if g0 <= 0:
        raise DomainError(f"g0 must be positive, got {g0}")
    k_i = math.sqrt(2.0 * eps_i)
    q_i = float(q_factor(max(k_i, 1.0), 1, g0))
    M = _decay_count(q_i)
    total = 0.0
    for m in range(-M, M + 1):
        if m % 2 == 0:
            continue
        l = m - n0
        kl2 = 2.0 * (eps_i + l)
        if kl2 <= 0:
            continue
        kl = math.sqrt(kl2)
        total += (2.0 * math.pi / kl) * abs(b_coefficient(kl, m, g0)) ** 2
    return total


def renorm_factors(n: int, n0: int, k_f: float, k_i: float, eps_i: float,
                   g0: float) -> RenormFactors:
    """Corrected pole parameters for the n0-term of the c/b/c amplitude.

    eps_R = eps_i + g0**2/8 + alpha(n0); eta_R = beta(n0) (1 + gamma_n);
    gamma_n folds the loop amplitude into the width, and Z normalizes the
    residue with the full complex loop values (the elastic limit reduces
    to the familiar 1 - (2 pi i / k_i)[4 Gamma(0) - sum ...] form).
    """
    alpha = alpha_shift(n0, eps_i, g0)
    beta = beta_width(n0, eps_i, g0)
    eps_R = eps_i + g0 * g0 / 8.0 + alpha

    loop0 = gamma_loop(k_i, k_i, 0, g0)
    ratio = 0.0 + 0.0j
    loop_n = loop0
    b_out = _b_pair(k_f, k_i, n + n0, -n0, g0)
    if n == 0:
        ratio = 1.0 + 0.0j
    elif b_out != 0:
        loop_n = gamma_loop(k_f, k_i, n, g0)
        ratio = b_coefficient(k_i, n0, g0) / b_coefficient(k_f, n + n0, g0)
    gamma_factor = float((2.0 * math.pi / k_i)
                         * (loop0.value + ratio * loop_n.value).imag)
    eta_R = beta * (1.0 + gamma_factor)

    # residue normalization; the l-sum reuses the corrected denominators
    from .amplitudes import a_coefficient
    a_n = a_coefficient(k_f, k_i, n, g0) if n != 0 else 0.0
    lsum = 0.0 + 0.0j
    for l in range(-_SERIES_CAP // 2, _SERIES_CAP // 2 + 1):
        if l == n0:
            continue
        num = _b_pair(k_f, k_i, n + l, -l, g0)
        if num == 0:
            continue
        lsum += num * ratio / (eps_R - l + 1j * eta_R)
    Z = 1.0 - (2j * math.pi / k_i) * (2.0 * loop0.value
                                      + ratio * (2.0 * loop_n.value - a_n)
                                      - lsum)
    return RenormFactors(alpha=alpha, beta=beta, gamma_factor=gamma_factor,
                         eta_R=eta_R, eps_R=eps_R, Z=Z, n0=n0)


def _nearest_odd(x: float) -> int:
    """Odd integer closest to x (ties resolved downward)."""
    lo = 2 * math.floor((x - 1.0) / 2.0) + 1
    hi = lo + 2
    return int(lo if abs(x - lo) <= abs(x - hi) else hi)


def b_renorm(k_f: float, k_i: float, n: int, eps_i: float, g0: float) -> complex:
    """Renormalized c/b/c amplitude, finite for all real incoming energies.

    Only the dominant term n0 (the odd integer nearest the effective
    energy) can approach its pole, so only that term carries the corrected
    denominator eps_R - n0 + i eta_R and the residue normalization Z; the
    off-resonant terms keep their bare real denominators, where the same
    corrections are suppressed by the pole distance.
    """
    if g0 == 0:
        return 0.0 + 0.0j
    eps_t = eps_i + g0 * g0 / 8.0
    n0_star = _nearest_odd(eps_t)
    fac = renorm_factors(n, n0_star, k_f, k_i, eps_i, g0)
    total = 0.0 + 0.0j
    acc = 0.0
    for a in range(1, _SERIES_CAP + 1):
        layer = 0.0
        for n0 in (a, -a):
            num = _b_pair(k_f, k_i, n + n0, -n0, g0)
            if num == 0:
                continue
            if n0 == n0_star:
                term = fac.Z * num / (fac.eps_R - n0 + 1j * fac.eta_R)
            else:
                term = num / (eps_t - n0)
            total += term
            layer += abs(term)
        acc += layer
        if acc > 0 and layer < _SERIES_EPS * acc and a > max(2, abs(n) + 1):
            break
    return total
