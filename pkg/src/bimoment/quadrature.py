"""Adaptive complex-contour quadrature and the fundamental functionals.

The engine integrates W(x) * g(x) dx along a Contour with 15-point
Gauss-Kronrod panels and bisection, vectorized over the components of g.
Unbounded pieces are truncated where the sampled integrand has dropped
~20 decades below its running maximum; multivalued weight factors are
continued along the path from a fixed anchor point so branch choices do
not depend on truncation or panel counts.

Double integrals over product contours are evaluated iterated: the inner
Laplace transform is computed (vectorized in the outer nodes and in the
monomial power) on every outer panel.
"""
from __future__ import annotations

import cmath
import math
import os
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .errors import (
    AssumptionBViolated,
    DivergentCoupling,
    DivergentTail,
    QuadratureStall,
)
from .tables import PROV_QUADRATURE, BimomentTable
from .weights import (
    Arc,
    Contour,
    InRay,
    OutRay,
    Seg,
    WeightSpec,
    default_truncation,
    direction_decays,
    normalize_potential,
    trace_sdc,
)

# 15-point Kronrod nodes/weights with the embedded 7-point Gauss rule
_XGK = np.array([
    -0.991455371120813, -0.949107912342759, -0.864864423359769,
    -0.741531185599394, -0.586087235467691, -0.405845151377397,
    -0.207784955007898, 0.0, 0.207784955007898, 0.405845151377397,
    0.586087235467691, 0.741531185599394, 0.864864423359769,
    0.949107912342759, 0.991455371120813,
])
_WGK = np.array([
    0.022935322010529, 0.063092092629979, 0.104790010322250,
    0.140653259715525, 0.169004726639267, 0.190350578064785,
    0.204432940075298, 0.209482141084728, 0.204432940075298,
    0.190350578064785, 0.169004726639267, 0.140653259715525,
    0.104790010322250, 0.063092092629979, 0.022935322010529,
])
_WG = np.array([
    0.129484966168870, 0.279705391489277, 0.381830050505119,
    0.417959183673469, 0.381830050505119, 0.279705391489277,
    0.129484966168870,
])
_GAUSS_IDX = np.arange(1, 15, 2)

MAX_PANELS_PER_PIECE = 2 ** 14


def default_tolerance() -> float:
    """Base relative tolerance; BIMOMENT_TOL overrides it."""
    env = os.environ.get("BIMOMENT_TOL")
    if env:
        try:
            return float(env)
        except ValueError:
            pass
    return 1e-10


# --- path preparation -----------------------------------------------------

@dataclass
class _QPiece:
    """Bounded piece with the continued args of every tracked singularity
    pinned at its start."""

    geom: object                  # Seg or Arc
    theta_in: dict                # sing index -> arg at t = 0

    def thetas(self, spec: WeightSpec, t: np.ndarray) -> dict:
        out = {}
        x = self.geom.point(t)
        for idx, th0 in self.theta_in.items():
            X = spec.singularities[idx].location
            out[idx] = th0 + _relative_angle(self.geom, X, x, t)
        return out

    def theta_out(self, spec: WeightSpec) -> dict:
        t = np.array([1.0])
        out = {}
        x = self.geom.point(t)
        for idx, th0 in self.theta_in.items():
            X = spec.singularities[idx].location
            out[idx] = th0 + float(_relative_angle(self.geom, X, x, t)[0])
        return out


def _relative_angle(geom, X: complex, x: np.ndarray, t: np.ndarray) -> np.ndarray:
    """Continuous change of arg(x - X) along the piece relative to t = 0.

    Exact for segments (a segment subtends < pi from any external point),
    exact for arcs centered at X, and valid for short sub-arcs (the
    builder splits arcs until their chord is small against the distance
    to every tracked singularity).
    """
    if isinstance(geom, Arc) and abs(geom.center - X) <= 1e-14 * max(1.0, abs(X)):
        return (geom.th1 - geom.th0) * np.asarray(t)
    x0 = geom.point(np.array([0.0]))[0]
    d0 = x0 - X
    if abs(d0) == 0.0:
        # radial piece leaving the singularity: the direction is constant
        return np.zeros_like(np.asarray(t, dtype=float))
    return np.angle((x - X) / d0)


def _subdivide_for_tracking(geom, spec: WeightSpec):
    """Split arcs until each sub-arc is short against its distance to every
    tracked singularity (keeps the relative-angle formula single-valued)."""
    tracked = [s for s in spec.singularities if s.tracked]
    if isinstance(geom, Seg) or not tracked:
        return [geom]
    out = []
    stack = [geom]
    while stack:
        arc = stack.pop()
        span = abs(arc.th1 - arc.th0)
        chord = 2 * arc.radius * math.sin(min(span / 2, math.pi / 2))
        mid = arc.point(np.array([0.5]))[0]
        centered = any(abs(arc.center - s.location) <= 1e-14 * max(1.0, abs(s.location))
                       for s in tracked)
        dmin = min((abs(mid - s.location) for s in tracked
                    if abs(arc.center - s.location) > 1e-14 * max(1.0, abs(s.location))),
                   default=np.inf)
        if span <= math.pi / 2 and (centered or chord <= 0.6 * dmin or dmin == np.inf):
            out.append(arc)
        else:
            thm = 0.5 * (arc.th0 + arc.th1)
            stack.append(Arc(arc.center, arc.radius, thm, arc.th1))
            stack.append(Arc(arc.center, arc.radius, arc.th0, thm))
    # stack order reversed the pieces; restore path order
    out.sort(key=lambda a: (a.th0 - geom.th0) * (1 if geom.th1 >= geom.th0 else -1))
    return out


def _truncate_ray(spec: WeightSpec, ray, gprobe) -> float:
    """Length at which the sampled |W * g| has fallen ~20 decades below its
    running maximum along the ray. Raises DivergentTail when the direction
    is not a decay direction or the samples keep growing."""
    u = ray.direction / abs(ray.direction)
    if not direction_decays(spec, u):
        raise DivergentTail(
            f"ray direction {u:.4f} is not inside a decay sector"
        )
    x0 = ray.end if isinstance(ray, InRay) else ray.start
    # start where the potential alone is already a few digits down
    d = spec.d
    T = max(1.0, (8.0 / max(abs(spec.v_top), 1e-12)) ** (1.0 / (d + 1)))
    logmax = -np.inf
    grows = 0
    for _ in range(200):
        x = x0 + T * u
        lw = spec.log_weight_principal(np.array([x]))[0].real
        g = gprobe(np.array([x]))
        ga = float(np.max(np.abs(g)))
        logm = lw + (math.log(ga) if ga > 0 else -np.inf)
        if logm > logmax:
            grows += 1
            logmax = logm
        else:
            grows = 0
        if logm < logmax - 46.0:
            return T
        if grows > 60:
            raise DivergentTail("integrand keeps growing along the ray")
        T *= 1.35
    raise DivergentTail("truncation search exhausted")


def _prepare(contour: Contour, spec: WeightSpec, gprobe) -> list:
    """Materialize rays, split arcs, and chain the branch continuation,
    re-anchored at the contour's fixed anchor point."""
    geoms = []
    for p in contour.pieces:
        if isinstance(p, (InRay, OutRay)):
            T = _truncate_ray(spec, p, gprobe)
            geoms.extend(_subdivide_for_tracking(p.materialize(T), spec))
        else:
            geoms.extend(_subdivide_for_tracking(p, spec))
    tracked = [i for i, s in enumerate(spec.singularities) if s.tracked]
    if not tracked:
        return [_QPiece(g, {}) for g in geoms]

    start = geoms[0].point(np.array([0.0]))[0]
    theta = {}
    for i in tracked:
        X = spec.singularities[i].location
        if abs(start - X) <= 1e-14 * max(1.0, abs(X)):
            nxt = geoms[0].point(np.array([1e-6]))[0]
            theta[i] = cmath.phase(nxt - X)
        else:
            theta[i] = cmath.phase(start - X)
    qpieces = []
    best = (np.inf, None)
    for g in geoms:
        qp = _QPiece(g, dict(theta))
        qpieces.append(qp)
        p0 = g.point(np.array([0.0]))[0]
        dist = abs(p0 - contour.anchor_point)
        if dist < best[0]:
            best = (dist, dict(theta))
        theta = qp.theta_out(spec)
    anchor_theta = best[1]
    # re-anchor: principal branch holds at the anchor point, not at the
    # (truncation-dependent) far start
    shift = {}
    for i in tracked:
        X = spec.singularities[i].location
        principal = cmath.phase(contour.anchor_point - X) \
            if abs(contour.anchor_point - X) > 0 else anchor_theta[i]
        shift[i] = principal - anchor_theta[i]
    for qp in qpieces:
        qp.theta_in = {i: th + shift[i] for i, th in qp.theta_in.items()}
    return qpieces


# --- panel machinery ------------------------------------------------------

def _panel_eval(spec: WeightSpec, qp: _QPiece, t0: float, t1: float, gfun):
    mid = 0.5 * (t0 + t1)
    half = 0.5 * (t1 - t0)
    t = mid + half * _XGK
    x = qp.geom.point(t)
    dx = qp.geom.velocity(t)
    w = spec.weight_tracked(x, qp.thetas(spec, t))
    g = np.atleast_2d(gfun(x))
    f = g * (w * dx)[None, :]
    if not np.all(np.isfinite(f)):
        raise QuadratureStall("non-finite integrand sample")
    k15 = half * (f @ _WGK)
    g7 = half * (f[:, _GAUSS_IDX] @ _WG)
    err = np.abs(k15 - g7)
    return k15, err


def integrate_contour(contour: Contour, spec: WeightSpec, gfun, ncomp: int,
                      rtol: Optional[float] = None, atol: float = 0.0,
                      presplit: int = 1, max_panels: int = MAX_PANELS_PER_PIECE):
    """integral of W(x) g(x) dx over the contour; g vector-valued.

    Returns (values, errors) with shapes (ncomp,). Tolerance per
    component is max(atol, rtol * (1 + |I_comp|)); panels split worst
    first until every component converges.
    """
    if rtol is None:
        rtol = default_tolerance()
    qpieces = _prepare(contour, spec, gfun)

    cap = 256
    meta = np.zeros((cap, 3))            # piece index, t0, t1
    vals_arr = np.zeros((cap, ncomp), dtype=complex)
    errs_arr = np.zeros((cap, ncomp))
    count = 0

    def push(ip, t0, t1):
        nonlocal count, cap, meta, vals_arr, errs_arr
        if count == cap:
            cap *= 2
            meta = np.resize(meta, (cap, 3))
            vals_arr = np.resize(vals_arr, (cap, ncomp))
            errs_arr = np.resize(errs_arr, (cap, ncomp))
        v, e = _panel_eval(spec, qpieces[ip], t0, t1, gfun)
        meta[count] = (ip, t0, t1)
        vals_arr[count] = v
        errs_arr[count] = e
        count += 1

    for ip, qp in enumerate(qpieces):
        n0 = presplit
        if isinstance(qp.geom, Seg) and abs(qp.geom.b - qp.geom.a) > 3.0:
            n0 = max(presplit, 6)
        cuts = np.linspace(0.0, 1.0, n0 + 1)
        for i in range(n0):
            push(ip, cuts[i], cuts[i + 1])

    budget = max_panels * len(qpieces)
    while True:
        total = vals_arr[:count].sum(axis=0)
        toterr = errs_arr[:count].sum(axis=0)
        totabs = np.abs(vals_arr[:count]).sum(axis=0)
        tol = np.maximum(atol, rtol * (1.0 + np.abs(total)))
        # roundoff floor: the error estimate cannot drop below machine eps
        # times the mass being cancelled along the path
        denom = np.maximum(0.25 * tol, 5e-15 * totabs)
        bad = toterr > denom
        if not bad.any():
            break
        if count >= budget:
            if np.all(toterr <= np.maximum(20 * tol, 10 * 5e-15 * totabs)):
                break
            raise QuadratureStall(
                f"tolerance unreachable: err {float(np.max(toterr / tol)):.2e}x target "
                f"with {count} panels"
            )
        # split the panel worst-placed relative to the unmet tolerances, so
        # large-magnitude components cannot starve small ones
        scores = (errs_arr[:count][:, bad] / denom[bad]).max(axis=1)
        k = int(np.argmax(scores))
        ip, t0, t1 = int(meta[k, 0]), meta[k, 1], meta[k, 2]
        # drop panel k by swapping in the last one
        count -= 1
        meta[k] = meta[count]
        vals_arr[k] = vals_arr[count]
        errs_arr[k] = errs_arr[count]
        tm = 0.5 * (t0 + t1)
        push(ip, t0, tm)
        push(ip, tm, t1)

    # deterministic ordered reduction
    order = np.lexsort((meta[:count, 1], meta[:count, 0]))
    total = vals_arr[:count][order].sum(axis=0)
    toterr = errs_arr[:count][order].sum(axis=0)
    totabs = np.abs(vals_arr[:count][order]).sum(axis=0)
    return total, np.maximum(toterr, 2e-16 * totabs)


# --- public single-contour transforms -------------------------------------

def laplace(contour: Contour, spec: WeightSpec, z: complex, m: int = 0,
            rtol: Optional[float] = None) -> complex:
    """int_Gamma x^m W(x) e^(xz) dx."""
    vals, _ = laplace_many(contour, spec, np.array([z]), m, rtol=rtol)
    return complex(vals[m, 0])


def laplace_with_error(contour: Contour, spec: WeightSpec, z: complex,
                       m: int = 0, rtol: Optional[float] = None,
                       presplit: int = 1):
    vals, errs = laplace_many(contour, spec, np.array([z]), m, rtol=rtol,
                              presplit=presplit)
    return complex(vals[m, 0]), float(errs[m, 0])


def laplace_many(contour: Contour, spec: WeightSpec, zs: np.ndarray,
                 max_m: int, rtol: Optional[float] = None, presplit: int = 1):
    """All transforms int x^m W e^(xz) dx for m = 0..max_m and each z.

    Returns (values, errors) of shape (max_m + 1, len(zs)).
    """
    zs = np.asarray(zs, dtype=complex)
    nz = len(zs)
    ncomp = (max_m + 1) * nz

    def gfun(x):
        ez = np.exp(np.multiply.outer(zs, x))              # (nz, nx)
        pows = np.ones((max_m + 1, len(x)), dtype=complex)  # (m, nx)
        for m in range(1, max_m + 1):
            pows[m] = pows[m - 1] * x
        return (pows[:, None, :] * ez[None, :, :]).reshape(ncomp, len(x))

    vals, errs = integrate_contour(contour, spec, gfun, ncomp, rtol=rtol,
                                   presplit=presplit)
    return vals.reshape(max_m + 1, nz), errs.reshape(max_m + 1, nz)


# --- fundamental functionals ----------------------------------------------

@dataclass
class FunctionalHandle:
    """One fundamental functional: a pair of marginal weights and one
    contour on each sphere, coupled through e^(rho * x * y)."""

    wx: WeightSpec
    wy: WeightSpec
    cx: Contour
    cy: Contour
    i: int = 0
    j: int = 0
    rho: float = 1.0
    _cache: dict = field(default_factory=dict)

    def table(self, N: int, rtol: Optional[float] = None) -> BimomentTable:
        key = (N, rtol, self.rho)
        if key not in self._cache:
            self._cache[key] = bimoment_table(self, N, rtol=rtol)
        return self._cache[key][0]

    def table_errors(self, N: int, rtol: Optional[float] = None) -> np.ndarray:
        key = (N, rtol, self.rho)
        if key not in self._cache:
            self._cache[key] = bimoment_table(self, N, rtol=rtol)
        return self._cache[key][1]


def _gaussian_coupling_guard(handle: FunctionalHandle):
    """Refuse the d1 = d2 = 1 regime unless the coupled quadratic form is
    convergent on the chosen contour tails."""
    wx, wy = handle.wx, handle.wy
    if wx.d != 1 or wy.d != 1:
        return
    delta = 2.0 * wx.Vplus.coeff(2)
    sigma = 2.0 * wy.Vplus.coeff(2)
    if abs(delta * sigma) <= 1.0 + 1e-12:
        raise DivergentCoupling(
            f"|delta*sigma| = {abs(delta * sigma):.6g} <= 1: factorized product "
            "contours diverge"
        )
    for u in handle.cx.ray_directions():
        for v in handle.cy.ray_directions():
            u = u / abs(u)
            v = v / abs(v)
            a = (delta / 2 * u * u).real
            b = (sigma / 2 * v * v).real
            c = handle.rho * (u * v).real
            if a <= 0 or b <= 0 or (c > 0 and c * c >= 4 * a * b):
                raise DivergentCoupling(
                    "coupled quadratic form not negative definite along "
                    f"tail directions ({u:.3f}, {v:.3f})"
                )


def bimoment_table(handle: FunctionalHandle, N: int,
                   rtol: Optional[float] = None):
    """mu[n, m] = int_Gx W1(x) x^n Psi_m(x) dx with
    Psi_m(x) = int_Gy y^m W2(y) e^(rho x y) dy, for n, m = 0..N.

    Returns (BimomentTable, per-entry error array). The double integral
    over the product surface is evaluated iterated; inner transforms are
    computed on the outer panel nodes, vectorized over m.
    """
    if rtol is None:
        rtol = default_tolerance()
    if handle.wx.d < 1 or handle.wy.d < 1:
        raise DivergentCoupling("both marginal weights need d >= 1")
    _gaussian_coupling_guard(handle)
    inner_rtol = rtol * 1e-2
    ncomp = (N + 1) * (N + 1)

    def gfun(x):
        zs = handle.rho * np.asarray(x, dtype=complex)
        psi, _ = laplace_many(handle.cy, handle.wy, zs, N, rtol=inner_rtol)
        pows = np.ones((N + 1, len(x)), dtype=complex)
        for n in range(1, N + 1):
            pows[n] = pows[n - 1] * x
        return (pows[:, None, :] * psi[None, :, :]).reshape(ncomp, len(x))

    vals, errs = integrate_contour(handle.cx, handle.wx, gfun, ncomp, rtol=rtol)
    mu = vals.reshape(N + 1, N + 1)
    err = errs.reshape(N + 1, N + 1) + inner_rtol * 10 * (1.0 + np.abs(mu))
    table = BimomentTable(mu, np.full((N + 1, N + 1), PROV_QUADRATURE, dtype=np.int8))
    return table, err


def generating_eval(handle: FunctionalHandle, z: complex, w: complex,
                    rtol: Optional[float] = None) -> complex:
    """F(z, w) = int_Gx W1(x) e^(xz) Psi(w + rho x) dx, the entire
    generating function of the handle's bimoments."""
    if rtol is None:
        rtol = default_tolerance()
    if handle.wx.d < 1 or handle.wy.d < 1:
        raise DivergentCoupling("both marginal weights need d >= 1")
    _gaussian_coupling_guard(handle)
    inner_rtol = rtol * 1e-2

    def gfun(x):
        zs = w + handle.rho * np.asarray(x, dtype=complex)
        psi, _ = laplace_many(handle.cy, handle.wy, zs, 0, rtol=inner_rtol)
        return (psi[0] * np.exp(np.asarray(x) * z))[None, :]

    vals, _ = integrate_contour(handle.cx, handle.wx, gfun, 1, rtol=rtol)
    return complex(vals[0])


def rho_factorization_check(handle: FunctionalHandle,
                            grid=(-0.25, 0.0, 0.25),
                            rtol: Optional[float] = None) -> float:
    """Decoupling check at rho = 0: the iterated double integral with unit
    kernel must factor into Xi(z) * Psi(w). Returns the max relative
    discrepancy over the (z, w) grid."""
    zero = FunctionalHandle(wx=handle.wx, wy=handle.wy, cx=handle.cx,
                            cy=handle.cy, i=handle.i, j=handle.j, rho=0.0)
    worst = 0.0
    for z in grid:
        xi = laplace(handle.cx, handle.wx, z, 0, rtol=rtol)
        for w in grid:
            it = generating_eval(zero, z, w, rtol=rtol)
            psi = laplace(handle.cy, handle.wy, w, 0, rtol=rtol)
            fac = xi * psi
            worst = max(worst, abs(it - fac) / max(1.0, abs(fac)))
    return worst


def rho_sweep(handle: FunctionalHandle, rhos, z: complex = 0.2, w: complex = -0.1,
              rtol: Optional[float] = None) -> list:
    """|A(rho) - Xi(z)Psi(w)| along a kernel sweep (reported, not asserted)."""
    xi = laplace(handle.cx, handle.wx, z, 0, rtol=rtol)
    psi = laplace(handle.cy, handle.wy, w, 0, rtol=rtol)
    out = []
    for r in rhos:
        h = FunctionalHandle(wx=handle.wx, wy=handle.wy, cx=handle.cx,
                             cy=handle.cy, rho=float(r))
        out.append(abs(generating_eval(h, z, w, rtol=rtol) - xi * psi))
    return out


# --- certificates ----------------------------------------------------------

@dataclass
class IndependenceReport:
    rank: int
    expected: int
    sv_ratio: float
    singular_values: np.ndarray

    @property
    def passed(self) -> bool:
        return self.rank == self.expected


def independence_certificate(handles: list, N: int,
                             rank_rel_tol: float = 1e-8,
                             rtol: Optional[float] = None) -> IndependenceReport:
    """Numerical rank of the stacked, row-normalized bimoment tables.

    The handles span the solution space of the moment recurrences; full
    rank len(handles) realizes their linear independence.
    """
    if (N + 1) ** 2 < len(handles):
        raise ValueError("(N+1)^2 must be at least the number of handles")
    rows = []
    for h in handles:
        v = h.table(N, rtol=rtol).entries.ravel()
        nrm = np.linalg.norm(v)
        rows.append(v / (nrm if nrm > 0 else 1.0))
    A = np.array(rows)
    sv = np.linalg.svd(A, compute_uv=False)
    rank = int(np.sum(sv > rank_rel_tol * sv[0]))
    return IndependenceReport(rank=rank, expected=len(handles),
                              sv_ratio=float(sv[-1] / sv[0]), singular_values=sv)


@dataclass
class AsymptoticReport:
    k: int
    zs: list
    ratios: list          # |F_k| / |predicted leading term|
    phase_defects: list   # |arg F_k - arg predicted| mod 2pi, in radians
    slope: float          # log-log decay rate of |ratio - 1|
    K_settled: bool

    @property
    def passed(self) -> bool:
        # the leading term must be confirmed and the correction must die
        # at least about as fast as 1/z
        return abs(self.ratios[-1] - 1.0) <= 0.05 and self.slope <= -0.7


def predicted_leading(spec: WeightSpec, z: complex, k: int) -> complex:
    """K sqrt(2 pi/d) z^((2A+1-d)/(2d)) omega^(k(A-1/2))
    exp(d/(d+1) z^((d+1)/d) omega^k) for the normalized potential."""
    d = spec.d
    A = spec.A_total
    omega = cmath.exp(2j * math.pi / d)
    zp = z ** ((2 * A + 1 - d) / (2 * d))
    op = cmath.exp((2j * math.pi / d) * k * (A - 0.5))
    ex = cmath.exp(d / (d + 1) * z ** ((d + 1) / d) * omega ** k)
    return math.sqrt(2 * math.pi / d) * zp * op * ex


def asymptotic_check(spec: WeightSpec, k: int, zs, rtol: Optional[float] = None,
                     auto_normalize: bool = True) -> AsymptoticReport:
    """Quadrature over traced steepest-descent contours against the
    predicted leading term, along increasing |z| inside the dual sector."""
    if auto_normalize:
        spec, _ = normalize_potential(spec)
    ratios, phases = [], []
    # the constant K is the limit of the essential factor exp(sum E_j); in
    # this canonical normalization that limit is 1, settled when the
    # principal parts are already negligible at the truncation radius
    far = 10.0 * default_truncation(spec)
    tail = 0.0
    for sng in spec.singularities:
        for q, e in enumerate(sng.essential, start=1):
            tail += abs(e) / abs(far - sng.location) ** q
    settled = tail <= 1e-8
    for z in zs:
        z = complex(z)
        sdc = trace_sdc(spec, z, k)
        F = laplace(sdc, spec, z, 0, rtol=rtol)
        P = predicted_leading(spec, z, k)
        ratios.append(abs(F) / abs(P))
        dphi = cmath.phase(F / P)
        phases.append(abs(dphi))
    devs = np.array([max(abs(r - 1.0), 1e-14) for r in ratios])
    mags = np.log(np.abs(np.array([complex(z) for z in zs])))
    if len(zs) >= 2:
        slope = float(np.polyfit(mags, np.log(devs), 1)[0])
    else:
        slope = 0.0
    return AsymptoticReport(k=k, zs=[complex(z) for z in zs], ratios=ratios,
                            phase_defects=phases, slope=slope, K_settled=settled)


# --- problem setup ----------------------------------------------------------

@dataclass
class ProblemSetup:
    """Weights, contours, and the full family of fundamental functionals
    for a validated semiclassical spec."""

    wx: WeightSpec
    wy: WeightSpec
    contours_x: list
    contours_y: list
    handles: list  # row-major over (i, j)

    def handle(self, i: int, j: int) -> FunctionalHandle:
        return self.handles[i * len(self.contours_y) + j]


def make_setup(spec) -> ProblemSetup:
    """Build both marginal weights, their contour families, and all
    s1*s2 fundamental functionals for an irreducible validated spec."""
    from .weights import build_contours, build_weight

    if spec.reducible:
        raise AssumptionBViolated(
            "pair shares a factor: reduce_common_factor / delta_solutions apply"
        )
    wx = build_weight(spec.A1, spec.B1)
    wy = build_weight(spec.A2, spec.B2)
    cxs = build_contours(wx)
    cys = build_contours(wy)
    handles = [FunctionalHandle(wx=wx, wy=wy, cx=cx, cy=cy, i=i, j=j)
               for i, cx in enumerate(cxs) for j, cy in enumerate(cys)]
    return ProblemSetup(wx=wx, wy=wy, contours_x=cxs, contours_y=cys,
                        handles=handles)
