"""Independent closed-form oracles used by the test suite.

These deliberately avoid the package's quadrature and recurrence code
paths: Gaussian bimoments come from the covariance recursion, the Airy
value from its Maclaurin series, and one-sided power integrals from the
Gamma function.
"""
import math

import numpy as np


def gaussian_bimoments(delta: float, sigma: float, N: int) -> np.ndarray:
    """Moments of exp(-(delta/2)x^2 - (sigma/2)y^2 + xy) over the real plane.

    mu[n, m] = mu00 * E[x^n y^m] for the centered Gaussian with covariance
    inv([[delta, -1], [-1, sigma]]); E follows the Isserlis recursion
    E[x^n y^m] = (n-1) Sxx E[x^(n-2) y^m] + m Sxy E[x^(n-1) y^(m-1)].
    """
    det = delta * sigma - 1.0
    if det <= 0:
        raise ValueError("quadratic form not positive definite")
    sxx = sigma / det
    sxy = 1.0 / det
    syy = delta / det
    mu00 = 2.0 * math.pi / math.sqrt(det)
    E = np.zeros((N + 3, N + 3))
    E[0, 0] = 1.0
    for total in range(1, 2 * (N + 1) + 1):
        for n in range(total + 1):
            m = total - n
            if n > N + 2 or m > N + 2:
                continue
            if n >= 1:
                acc = 0.0
                if n >= 2:
                    acc += (n - 1) * sxx * E[n - 2, m]
                if m >= 1:
                    acc += m * sxy * E[n - 1, m - 1]
                E[n, m] = acc
            else:  # n == 0, m >= 1: mirror recursion in y
                acc = 0.0
                if m >= 2:
                    acc += (m - 1) * syy * E[0, m - 2]
                E[0, m] = acc
    return mu00 * E[: N + 1, : N + 1]


def gaussian_generating(delta: float, sigma: float, z: complex, w: complex) -> complex:
    """F(z, w) = mu00 * exp((sigma z^2 + 2zw + delta w^2) / (2(delta sigma - 1)))."""
    det = delta * sigma - 1.0
    mu00 = 2.0 * math.pi / math.sqrt(det)
    return mu00 * np.exp((sigma * z * z + 2 * z * w + delta * w * w) / (2 * det))


def airy_maclaurin(z: complex, terms: int = 60) -> complex:
    """Ai(z) from its everywhere-convergent Maclaurin series."""
    c1 = 3.0 ** (-2.0 / 3.0) / math.gamma(2.0 / 3.0)
    c2 = 3.0 ** (-1.0 / 3.0) / math.gamma(1.0 / 3.0)
    f = 0j
    g = 0j
    tf = 1.0 + 0j   # z^(3k)/(3k)! * prod(3j+1)
    tg = complex(z)  # z^(3k+1)/(3k+1)! * prod(3j+2)
    for k in range(terms):
        f += tf
        g += tg
        tf *= (3 * k + 1) * z ** 3 / ((3 * k + 1) * (3 * k + 2) * (3 * k + 3))
        tg *= (3 * k + 2) * z ** 3 / ((3 * k + 2) * (3 * k + 3) * (3 * k + 4))
    return c1 * f - c2 * g


def halfline_power_gaussian(lam: float) -> float:
    """int_0^inf x^lam exp(-x^2) dx = Gamma((lam+1)/2) / 2."""
    return math.gamma((lam + 1.0) / 2.0) / 2.0


def shifted_gaussian_moment(p: int, c: float) -> float:
    """int_R y^p exp(c y - y^2) dy, by differentiating exp(c^2/4) sqrt(pi)
    through the binomial shift y -> t + c/2."""
    base = math.sqrt(math.pi) * math.exp(c * c / 4.0)
    total = 0.0
    for k in range(0, p + 1):
        if (p - k) % 2:
            continue
        q = p - k
        # E[t^q] for the unnormalized exp(-t^2): Gamma((q+1)/2) pattern
        central = math.gamma((q + 1) / 2.0) / math.gamma(0.5)
        total += math.comb(p, k) * (c / 2.0) ** k * central
    return base * total
