"""Shared high-precision and sampling oracles for the test suite.

Everything here is deliberately independent of the library's fast paths:
mpmath re-implementations evaluate the same formulas at 50+ digits, and
the Rice sampler draws the exact construction (two Gaussians plus a
line-of-sight component) rather than the mixture approximation.
"""

from __future__ import annotations

import math

import mpmath as mp
import numpy as np

from ris_outage import MisalignmentStats

mp.mp.dps = 50

SPEED_OF_LIGHT = 299792458.0


# --- special-function / series oracles -------------------------------------


def mp_hyp1f2_brute(a, b1, b2, z, n_terms=800):
    """Plain extended-precision partial sum, no acceleration."""
    a, b1, b2, z = map(mp.mpf, map(str, (a, b1, b2, z)))
    term = mp.mpf(1)
    total = mp.mpf(1)
    for n in range(n_terms):
        term *= (a + n) * z / ((b1 + n) * (b2 + n) * (n + 1))
        total += term
    return total


def bessel_k_quadrature(nu: float, x: float) -> float:
    """Integral representation K_nu(x) = int_0^inf e^(-x cosh t) cosh(nu t) dt."""
    from scipy.integrate import quad

    # e^(-x cosh t) is negligible once x cosh t - |nu| t >> 745
    t_max = max(5.0, math.acosh((745.0 + 60.0 * abs(nu)) / x) + 2.0) if x < 745 else 6.0
    val, _ = quad(
        lambda t: math.exp(-x * math.cosh(t) + math.log(math.cosh(nu * t)) if nu else -x * math.cosh(t)),
        0.0,
        t_max,
        epsabs=0.0,
        epsrel=1e-13,
        limit=400,
    )
    return val


# --- generalized-K oracles ---------------------------------------------------


def _mp_kg_pdf(k, m, xx):
    return (
        lambda t: 4
        * xx ** (k + m)
        / (mp.gamma(k) * mp.gamma(m))
        * t ** (k + m - 1)
        * mp.besselk(k - m, 2 * xx * t)
    )


def mp_cdf_A(k_a, m_a, xi, x):
    """50-digit CDF of the generalized-K law.

    Routes: two-branch expansion for moderate arguments, density
    quadrature near integer k - m, complement tail integral once the
    expansion argument grows (where hypergeometric cancellation would
    need hundreds of digits)."""
    k, m, xx = mp.mpf(str(k_a)), mp.mpf(str(m_a)), mp.mpf(str(xi))
    x = mp.mpf(str(x))
    if x <= 0:
        return mp.mpf(0)
    pdf = _mp_kg_pdf(k, m, xx)
    d = k - m
    z = xx * xx * x * x
    if abs(d - mp.nint(d)) < mp.mpf("1e-8"):
        return mp.quad(pdf, [0, x])
    if z < 400:
        total = mp.mpf(0)
        for s, o in ((m, k), (k, m)):
            coef = mp.gamma(o - s) * xx ** (2 * s) * x ** (2 * s) / (
                s * mp.gamma(k) * mp.gamma(m)
            )
            total += coef * mp.hyp1f2(s, 1 + s, 1 + s - o, z)
        return total
    # complement: no cancellation, integrand decays like e^(-2 xi t)
    span = (k + m + 200) / (2 * xx)
    tail = mp.quad(pdf, [x, x + span, x + 8 * span])
    return 1 - tail


def mp_x_saturated(k_a, m_a, xi) -> float:
    """x beyond which 1 - F_A < ~1e-45 (float-side union bound)."""
    import scipy.special as sc

    return float(
        math.sqrt(sc.gammainccinv(k_a, 1e-45) * sc.gammainccinv(m_a, 1e-45)) / xi
    )


def mp_cdf_Ae2e(k_a, m_a, xi, b_o, zeta, x, dps=40):
    """Extended-precision defining integral for the end-to-end CDF."""
    with mp.workdps(dps):
        b_o_m, zeta_m, x_m = map(mp.mpf, map(str, (b_o, zeta, x)))
        x_sat = mp.mpf(str(mp_x_saturated(k_a, m_a, xi)))

        def integrand(t):
            u = x_m / (b_o_m * t ** (1 / zeta_m))
            if u >= x_sat:
                return mp.mpf(1)
            return mp_cdf_A(k_a, m_a, xi, u)

        t_sat = (x_m / (b_o_m * x_sat)) ** zeta_m
        if t_sat >= 1:
            return mp.mpf(1)
        t_sat = max(t_sat, mp.mpf(0))
        return t_sat + mp.quad(integrand, [t_sat, 1])


def mp_moment_match(d1, d2, n_elements):
    """Extended-precision re-implementation of the moment matching chain."""
    with mp.workdps(60):
        def env_moment(d, n):
            return sum(
                mp.mpf(str(a)) * mp.gamma(mp.mpf(str(b)) + mp.mpf(n) / 2)
                * mp.mpf(str(d.rate)) ** (-(mp.mpf(str(b)) + mp.mpf(n) / 2))
                for a, b in d.terms
            )

        mu = [env_moment(d1, n) * env_moment(d2, n) for n in range(7)]
        cur = list(mu)
        for _ in range(n_elements - 1):
            cur = [
                sum(mp.binomial(l, j) * cur[j] * mu[l - j] for j in range(l + 1))
                for l in range(7)
            ]
        mu2, mu4, mu6 = cur[2], cur[4], cur[6]
        a_c = mu6 * mu2 + mu2**2 * mu4 - 2 * mu4**2
        b_c = mu6 * mu2 - 4 * mu4**2 + 3 * mu2**2 * mu4
        c_c = 2 * mu2**2 * mu4
        disc = mp.sqrt(b_c * b_c - 4 * a_c * c_c)
        r1 = (-b_c + disc) / (2 * a_c)
        r2 = (-b_c - disc) / (2 * a_c)
        k_a, m_a = max(r1, r2), min(r1, r2)
        xi = mp.sqrt(k_a * m_a / mu2)
        return float(k_a), float(m_a), float(xi), float(mu2)


# --- geometry oracle ---------------------------------------------------------


def mp_geometry_chain(cfg):
    """50-digit re-evaluation of the full geometry pipeline."""
    l2, w_o, f, cn2 = map(mp.mpf, map(str, (cfg.l2, cfg.w_o, cfg.f, cfg.cn2)))
    alpha, theta, phi = map(mp.mpf, map(str, (cfg.alpha, cfg.theta, cfg.phi)))
    sigma_p, sigma_o, d_x = map(
        mp.mpf, map(str, (cfg.sigma_p, cfg.sigma_o, cfg.d_x))
    )
    c = mp.mpf(str(SPEED_OF_LIGHT))
    k_wave = 2 * mp.pi * f / c
    rho_c = (mp.mpf("0.55") * cn2 * k_wave**2 * l2) ** (mp.mpf(-3) / 5)
    spread = c * l2 / (mp.pi * f * w_o**2)
    w = w_o * mp.sqrt(1 + (1 + 2 * w_o**2 / rho_c**2) * spread**2)
    rho_y = mp.cos(phi) ** 2 + mp.sin(phi) ** 2 * mp.cos(theta) ** 2
    rho_z = mp.sin(phi) ** 2
    rho_yz = -mp.cos(phi) * mp.sin(phi) * mp.sin(theta)
    disc = mp.sqrt((rho_y - rho_z) ** 2 + 4 * rho_yz**2)
    rho_min = 2 / (rho_y + rho_z + disc)
    rho_max = 2 / (rho_y + rho_z - disc)
    v_min = alpha / w * mp.sqrt(mp.pi / (2 * rho_min))
    v_max = alpha / w * mp.sqrt(mp.pi / (2 * rho_max))
    b_o = mp.erf(v_min) * mp.erf(v_max)
    k_min = mp.sqrt(mp.pi) * rho_min * mp.erf(v_min) / (2 * v_min * mp.exp(-v_min**2))
    k_max = mp.sqrt(mp.pi) * rho_max * mp.erf(v_max) / (2 * v_max * mp.exp(-v_max**2))
    k_m = (k_min + k_max) / 2
    zeta = k_m * w**2 / (4 * sigma_p**2 + 4 * d_x**2 * sigma_o**2)
    return {
        "rho_l2": float(rho_c),
        "w_l2": float(w),
        "rho_min": float(rho_min),
        "rho_max": float(rho_max),
        "v_min": float(v_min),
        "v_max": float(v_max),
        "b_o": float(b_o),
        "k_min": float(k_min),
        "k_max": float(k_max),
        "k_m": float(k_m),
        "zeta": float(zeta),
    }


# --- exact Rice sampler (oracle for the mixture approximation) ---------------


def sample_rice_exact(k_r: float, rng: np.random.Generator, size) -> np.ndarray:
    """Exact unit-mean-power Rice envelope: deterministic LOS amplitude
    sqrt(K/(1+K)) plus complex Gaussian scatter of power 1/(1+K)."""
    nu = math.sqrt(k_r / (1.0 + k_r))
    sigma = math.sqrt(1.0 / (2.0 * (1.0 + k_r)))
    re = nu + sigma * rng.standard_normal(size)
    im = sigma * rng.standard_normal(size)
    return np.hypot(re, im)


# --- misc helpers -------------------------------------------------------------


def make_stats(b_o: float, zeta: float) -> MisalignmentStats:
    """Synthetic misalignment statistics; only (b_o, zeta) drive the
    distributional code paths, the intermediates are bookkeeping."""
    return MisalignmentStats(
        b_o=b_o, zeta=zeta, w_l2=0.1, rho_l2=1.0, v_min=1.0, v_max=0.7,
        rho_min=1.0, rho_max=2.0, k_min=2.0, k_max=3.0, k_m=2.5,
    )
