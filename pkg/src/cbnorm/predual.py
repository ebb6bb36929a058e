"""The standard predual norm on a finite group and its duality partners.

For a function f on G the predual norm is the quotient norm of the
Haagerup tensor square of l1(G) by the kernel of convolution,

    q_norm(f) = min { ||mu||_{l1 (x)_h l1} : m0(mu) = f },
    (m0 mu)(r) = sum_{s t = r} mu(s, t),

computed here from the dual side: the annihilator of the kernel is the
space of symbols U(s, t) = u(s t), so

    q_norm(f) = sup { Re sum_r u(r) f(r) : ||[u(s t)]||_Schur <= 1 },

one SDP whose maximizer u* is returned as a certificate.  The ball is
closed under unimodular scalars, so the real-part maximum equals the
modulus supremum.

Convention check for the pairing (two lines): if f = g * h then the
rank-one tensor g (x) h maps to f under m0, and

    <U, g (x) h> = sum_{s,t} u(s t) g(s) h(t)
                 = sum_x u(x) sum_{s t = x} g(s) h(t) = sum_x u(x) f(x),

so pairing a multiplier with the image of f is the plain bilinear sum
sum u(s) f(s), which is what :func:`pairing` computes.

The primal route (minimize the l1 (x)_h l1 norm over preimages of f) is
kept as a cross-check: weak duality between the two programs is itself a
test, and on a finite group both values agree.
"""

from __future__ import annotations

import numpy as np

from . import linalg, sdp
from .groups import FiniteGroup, left_regular_matrix
from .harmonic import Multiplier
from .schur import NormReport

__all__ = [
    "convolve_m0",
    "q_norm",
    "pairing",
    "c_star_norm",
]


def _as_function(g: FiniteGroup, f, name: str = "f") -> np.ndarray:
    vals = np.asarray(f, dtype=complex)
    if vals.shape != (g.order,):
        raise ValueError(f"{name} must have length {g.order}, got shape {vals.shape}")
    if not np.all(np.isfinite(vals.real)) or not np.all(np.isfinite(vals.imag)):
        raise ValueError(f"{name} contains non-finite values")
    return vals


def convolve_m0(mu: np.ndarray, g: FiniteGroup) -> np.ndarray:
    """Multiplication map on kernels: (m0 mu)(r) = sum over s t = r of mu(s, t)."""
    mu = linalg.as_matrix(mu, "mu")
    if mu.shape != (g.order, g.order):
        raise ValueError(f"kernel shape {mu.shape} does not match group order {g.order}")
    n = g.order
    out = np.zeros(n, dtype=complex)
    s_idx = np.arange(n)
    for r in g.elements():
        out[r] = np.sum(mu[s_idx, g.cayley[g.inverse[s_idx], r]])
    return out


def _q_norm_dual(g: FiniteGroup, vals: np.ndarray,
                 tols: sdp.Tolerances) -> tuple[float, float, np.ndarray]:
    """Support-function SDP over the invariant Schur ball."""
    n = g.order
    is_complex = bool(np.any(vals.imag != 0.0))
    prob = sdp.SdpProblem()
    z = prob.add_psd_block(2 * n)
    w = prob.add_nonneg_block(2 * n)

    # maximize Re sum_x u(x) f(x) with u(x) read off the representative (e, x)
    objective: list[sdp.Term] = []
    for x in g.elements():
        if vals[x].real != 0.0:
            objective.append(("re", z, 0, n + x, -float(vals[x].real)))
        if vals[x].imag != 0.0:
            objective.append(("im", z, 0, n + x, float(vals[x].imag)))
    if not objective:
        return 0.0, 0.0, np.zeros(n, dtype=complex)
    prob.set_objective(objective)

    # tie U(s, t) = U(e, s t) for s != e, making the symbol a function of s t
    for s in range(1, n):
        for t in g.elements():
            x = g.mul(s, t)
            prob.add_constraint(
                [("re", z, s, n + t, 1.0), ("re", z, 0, n + x, -1.0)], 0.0
            )
            if is_complex:
                prob.add_constraint(
                    [("im", z, s, n + t, 1.0), ("im", z, 0, n + x, -1.0)], 0.0
                )
    for p in range(2 * n):
        prob.add_constraint([("re", z, p, p, 1.0), ("var", w, p, 0, 1.0)], 1.0)

    sol = sdp.require_optimal(sdp.solve(prob, tols), "q_norm")
    block = np.asarray(sol.Z[0], dtype=complex)[:n, n:]
    # average each product class for the certificate (entries are tied anyway)
    optimizer = np.zeros(n, dtype=complex)
    for x in g.elements():
        members = [(s, g.mul(g.inv(s), x)) for s in g.elements()]
        optimizer[x] = np.mean([block[s, t] for s, t in members])
    if not is_complex:
        optimizer = optimizer.real.astype(complex)
    return -sol.primal_objective, -sol.gap, optimizer


def _q_norm_primal(g: FiniteGroup, vals: np.ndarray, tols: sdp.Tolerances) -> float:
    """min ||mu||_{l1 (x)_h l1} over m0-preimages of f.

    Uses the epigraph of the predual Haagerup norm: ||mu||_h is the least
    sum of diagonal weights lam, nu with [[diag lam, conj(mu)/2],
    [mu^T/2, diag nu]] PSD, so the program pins the corner blocks to be
    diagonal and constrains the class sums of mu.
    """
    n = g.order
    is_complex = bool(np.any(vals.imag != 0.0))
    prob = sdp.SdpProblem()
    z = prob.add_psd_block(2 * n)
    prob.set_objective([("re", z, p, p, 1.0) for p in range(2 * n)])

    # corner blocks diagonal
    for base in (0, n):
        for p in range(n):
            for q in range(p + 1, n):
                prob.add_constraint([("re", z, base + p, base + q, 1.0)], 0.0)
                if is_complex:
                    prob.add_constraint([("im", z, base + p, base + q, 1.0)], 0.0)

    # mu := 2 * conj(B) with B the off-diagonal block; m0(mu) = f becomes
    # sum over s t = r of B(s, t) = conj(f(r)) / 2
    for r in g.elements():
        cols = g.cayley[g.inverse, r]  # t with s t = r, indexed by s
        re_terms: list[sdp.Term] = [("re", z, s, n + int(cols[s]), 1.0) for s in range(n)]
        prob.add_constraint(re_terms, float(vals[r].real) / 2.0)
        im_terms: list[sdp.Term] = [("im", z, s, n + int(cols[s]), 1.0) for s in range(n)]
        prob.add_constraint(im_terms, -float(vals[r].imag) / 2.0)

    sol = sdp.require_optimal(sdp.solve(prob, tols), "q_norm primal cross-check")
    return sol.primal_objective


def q_norm(f, g: FiniteGroup, method: str = "dual",
           tols: sdp.Tolerances = sdp.Tolerances()) -> NormReport:
    """Standard-predual norm of a function on a finite group.

    ``method='dual'`` (default) solves the support-function program and
    returns the maximizing multiplier u* in ``optimizer`` with the pairing
    tightness in ``residual``.  ``method='primal'`` minimizes the predual
    Haagerup norm over convolution preimages.
    """
    vals = _as_function(g, f)
    if method == "dual":
        norm, gap, optimizer = _q_norm_dual(g, vals, tols)
        tightness = abs(complex(np.sum(optimizer * vals)) - norm)
        return NormReport(norm=norm, gap=gap, optimizer=optimizer, residual=tightness)
    if method == "primal":
        value = _q_norm_primal(g, vals, tols)
        return NormReport(norm=value, gap=0.0)
    raise ValueError("method must be 'dual' or 'primal'")


def pairing(u: Multiplier, f, g: FiniteGroup | None = None) -> complex:
    """<u, q(f)> = sum_s u(s) f(s), the bilinear module pairing."""
    if not isinstance(u.carrier, FiniteGroup):
        raise ValueError("pairing requires a finite group carrier")
    group = u.carrier if g is None else g
    if group.order != u.carrier.order:
        raise ValueError("multiplier and function live on different groups")
    vals = _as_function(group, f)
    return complex(np.sum(np.asarray(u.values) * vals))


def c_star_norm(f, g: FiniteGroup) -> float:
    """Operator norm of convolution by f on l2(G); the reduced-algebra norm."""
    vals = _as_function(g, f)
    return linalg.operator_norm(left_regular_matrix(g, vals))
