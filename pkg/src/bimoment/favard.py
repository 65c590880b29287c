"""Constructive Favard-style reconstruction of a bimoment table.

Given recurrence data (gammas, triangular coefficient arrays, and the
degree-zero normalizations) there is exactly one bimoment table making
the generated polynomial sequences biorthogonal. The construction is
inductive: mu_00 first, then for each N the row mu_{N,j}, the column
mu_{i,N} (each unknown enters a single orthogonality equation with unit
coefficient thanks to monicity), and finally the corner mu_{N,N} from
the diagonal pairing L(p_N|s_N) = gamma_{N-1}*gamma_t_{N-1}, which is
the ratio of the successive leading-minor products and is linear in the
corner unknown.
"""
from __future__ import annotations

import numpy as np

from .errors import ZeroGamma
from .tables import PROV_RECURRENCE, BimomentTable, RecurrenceSystem, pair_apply


def favard_reconstruct(rec: RecurrenceSystem, N: int) -> BimomentTable:
    """Unique size-N bimoment table biorthogonalizing the sequences of rec.

    Requires gamma_n != 0 != gamma_t_n for n < N and pi0, sigma0 != 0.
    Leading minors of the result satisfy
    Delta_n = (pi0*sigma0)^(-1) * prod_{k<=n-2} gamma_k*gamma_t_k.
    """
    if N > rec.order:
        raise ValueError(f"recurrence data stored to order {rec.order} < {N}")
    if complex(rec.pi0) == 0 or complex(rec.sigma0) == 0:
        raise ZeroGamma(-1, "pi0*sigma0")
    for n in range(N):
        if complex(rec.gamma[n]) == 0:
            raise ZeroGamma(n, "gamma")
        if complex(rec.gamma_t[n]) == 0:
            raise ZeroGamma(n, "gamma_t")

    ahat, bhat, h = rec.monic_transform()
    p, s = rec.monic_polynomials()
    mu = np.zeros((N + 1, N + 1), dtype=complex)
    mu[0, 0] = h[0]
    for n in range(1, N + 1):
        pn = p[n].coeffs
        # row: 0 = L(p_n | s_j), ascending j < n; unknown mu[n, j] has
        # coefficient pn[n]*sj[j] = 1 by monicity
        for j in range(n):
            sj = s[j].coeffs
            acc = pn[:n] @ mu[:n, : j + 1] @ sj
            if j > 0:
                acc += mu[n, :j] @ sj[:j]
            mu[n, j] = -acc
        # column: 0 = L(p_i | s_n), ascending i < n
        sn = s[n].coeffs
        for i in range(n):
            pi = p[i].coeffs
            acc = pi @ mu[: i + 1, :n] @ sn[:n]
            if i > 0:
                acc += pi[:i] @ mu[:i, n]
            mu[i, n] = -acc
        # corner: L(p_n | s_n) = h_n, linear in mu[n, n] with unit coefficient
        acc = pn[:n] @ mu[:n, : n + 1] @ sn + mu[n, :n] @ sn[:n]
        mu[n, n] = h[n] - acc
    return BimomentTable(mu, np.full((N + 1, N + 1), PROV_RECURRENCE, dtype=np.int8))


def favard_verify(rec: RecurrenceSystem, table: BimomentTable) -> float:
    """Largest biorthogonality defect of table against rec.

    Rebuilds the polynomial sequences from the recurrence and returns
    max_{n,m <= N} |L(p_n|s_m) - h_n delta_{nm}| / max(1, max|h|), the
    monic-frame residual (identically the normalized-sequence defect
    when all gammas are 1 and pi0*sigma0 = 1).
    """
    N = min(table.size, rec.order)
    _, _, h = rec.monic_transform()
    p, s = rec.monic_polynomials()
    scale = max(1.0, max(abs(v) for v in h[: N + 1]))
    worst = 0.0
    for n in range(N + 1):
        for m in range(N + 1):
            expect = h[n] if n == m else 0.0
            got = pair_apply(table, p[n], s[m])
            worst = max(worst, abs(got - expect))
    return worst / scale


def leading_minor_prediction(rec: RecurrenceSystem, n: int) -> complex:
    """(pi0*sigma0)^(-1) * prod_{k=0}^{n-2} gamma_k gamma_t_k, the value
    every Delta_n of the reconstructed table must take."""
    if n == 0:
        return 1.0 + 0j
    val = 1.0 / (complex(rec.pi0) * complex(rec.sigma0))
    for k in range(n - 1):
        val *= complex(rec.gamma[k]) * complex(rec.gamma_t[k])
    return val


# --- JSON serialization (external interface) ---

def _c2pair(z) -> list:
    z = complex(z)
    return [z.real, z.imag]


def _pair2c(v) -> complex:
    return complex(v[0], v[1])


def recurrence_to_json_dict(rec: RecurrenceSystem) -> dict:
    return {
        "gamma": [_c2pair(g) for g in rec.gamma],
        "gamma_t": [_c2pair(g) for g in rec.gamma_t],
        "a": [[_c2pair(v) for v in row] for row in rec.a],
        "b": [[_c2pair(v) for v in row] for row in rec.b],
        "pi0": _c2pair(rec.pi0),
        "sigma0": _c2pair(rec.sigma0),
    }


def recurrence_from_json_dict(d: dict) -> RecurrenceSystem:
    return RecurrenceSystem(
        gamma=[_pair2c(v) for v in d["gamma"]],
        gamma_t=[_pair2c(v) for v in d["gamma_t"]],
        a=[[_pair2c(v) for v in row] for row in d["a"]],
        b=[[_pair2c(v) for v in row] for row in d["b"]],
        pi0=_pair2c(d["pi0"]),
        sigma0=_pair2c(d["sigma0"]),
    )
