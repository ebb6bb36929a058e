"""Schur multiplier norms, factorizations and the predual Haagerup norm.

A Schur symbol is a complex matrix u on a finite index set I x J acting on
matrices entrywise.  Its multiplier norm equals the best factorization

    u(i, j) = <xi(i), eta(j)>,   norm = max_i ||xi(i)|| * max_j ||eta(j)||,

and is computed as the semidefinite program

    min t  s.t.  [[X, u], [u*, Y]] >= 0,  diag(X) <= t,  diag(Y) <= t,

whose optimal block matrix is factored to extract the witness families.
The norm on n x n matrices of symbols uses the same program with the
diagonal bounds replaced by per-index n x n blocks X(s) <= t I_n.

The predual norm on l1(I) (x)_h l1(J) is the support function of the Schur
unit ball and is computed as a single maximization SDP; the ball is closed
under multiplication by unimodular scalars, so maximizing the real part of
the pairing yields the modulus supremum.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import linalg, sdp

# optional observer for factorization witnesses; the acceptance runner
# uses it to collect every witness residual produced during a suite run.
_witness_hook = None


def install_witness_hook(hook) -> None:
    global _witness_hook
    _witness_hook = hook


__all__ = [
    "SchurFactorization",
    "NormReport",
    "schur_apply",
    "schur_norm",
    "schur_norm_block",
    "schur_norm_lower_bound",
    "factorization_residual",
    "two_sided_apply",
    "slice_map",
    "haagerup_predual_norm",
]


@dataclass(frozen=True)
class SchurFactorization:
    """Vector families witnessing u(i,j) = <xi(i), eta(j)>."""

    dim: int
    xi: np.ndarray   # |I| x dim
    eta: np.ndarray  # |J| x dim

    def bound(self) -> float:
        """max_i ||xi(i)|| * max_j ||eta(j)|| - an upper bound for the norm."""
        nx = np.sqrt(np.sum(np.abs(self.xi) ** 2, axis=1))
        ne = np.sqrt(np.sum(np.abs(self.eta) ** 2, axis=1))
        return float((np.max(nx) if nx.size else 0.0) * (np.max(ne) if ne.size else 0.0))

    def symbol(self) -> np.ndarray:
        """The symbol reproduced by the factorization."""
        return self.xi @ self.eta.conj().T


@dataclass
class NormReport:
    """A computed norm together with its certificate data."""

    norm: float
    gap: float
    witness: SchurFactorization | None = None
    residual: float | None = None
    lower_bound: bool = False          # set for word-ball section carriers
    kernel: np.ndarray | None = None   # trace-minimization witness kernels
    optimizer: np.ndarray | None = None  # dual-side maximizers


def schur_apply(u: np.ndarray, x: np.ndarray) -> np.ndarray:
    """Entrywise product of the symbol with a matrix of the same shape."""
    u = linalg.as_matrix(u, "symbol")
    x = linalg.as_matrix(x, "matrix")
    if u.shape != x.shape:
        raise ValueError(f"shape mismatch: symbol {u.shape} vs matrix {x.shape}")
    return u * x


def _ball_constraints(prob: sdp.SdpProblem, z: int, w: int, n_total: int,
                      is_complex: bool, u: np.ndarray, offset: int) -> None:
    """Pin the off-diagonal block of [[X, u], [u*, Y]] and bound the diagonal.

    ``offset`` locates the column block; the nonneg block ``w`` holds t at
    index 0 and one slack per diagonal entry after it.
    """
    ni, nj = u.shape
    for i in range(ni):
        for j in range(nj):
            prob.add_constraint([("re", z, i, offset + j, 1.0)], float(u[i, j].real))
            if is_complex:
                prob.add_constraint([("im", z, i, offset + j, 1.0)], float(u[i, j].imag))
    for p in range(n_total):
        prob.add_constraint(
            [("re", z, p, p, 1.0), ("var", w, 0, 0, -1.0), ("var", w, 1 + p, 0, 1.0)],
            0.0,
        )


def schur_norm(u: np.ndarray, tols: sdp.Tolerances = sdp.Tolerances()) -> NormReport:
    """Multiplier norm of a symbol with a factorization witness."""
    u = linalg.as_matrix(u, "symbol")
    ni, nj = u.shape
    n_total = ni + nj
    is_complex = bool(np.any(u.imag != 0.0))

    prob = sdp.SdpProblem()
    z = prob.add_psd_block(n_total)
    w = prob.add_nonneg_block(1 + n_total)
    prob.set_objective([("var", w, 0, 0, 1.0)])
    _ball_constraints(prob, z, w, n_total, is_complex, u, ni)

    sol = sdp.require_optimal(sdp.solve(prob, tols), "schur_norm")
    norm = sol.primal_objective
    block = np.asarray(sol.Z[0], dtype=complex)
    block = 0.5 * (block + block.conj().T)
    scale = max(1.0, float(np.max(np.abs(block))))
    factor = linalg.psd_factor(block, tol=1e-7 * scale, rank_tol=1e-9 * scale)
    witness = SchurFactorization(dim=factor.shape[1], xi=factor[:ni], eta=factor[ni:])
    residual, bound = factorization_residual(u, witness)
    if _witness_hook is not None:
        _witness_hook(u, witness, residual, bound)
    return NormReport(norm=norm, gap=sol.gap, witness=witness, residual=residual)


def schur_norm_block(symbols: list[list[np.ndarray]],
                     tols: sdp.Tolerances = sdp.Tolerances()) -> NormReport:
    """Norm of an n x n matrix of Schur symbols on a common index set.

    Solves  min t  with one PSD matrix over the doubled index set whose
    off-diagonal block carries every symbol entry, and whose per-index
    n x n diagonal blocks are bounded by t I_n through PSD slack blocks.
    """
    n = len(symbols)
    if n == 0 or any(len(row) != n for row in symbols):
        raise ValueError("symbols must form a square, nonempty array")
    mats = [[linalg.as_matrix(symbols[i][j], f"symbols[{i}][{j}]") for j in range(n)]
            for i in range(n)]
    na, nb = mats[0][0].shape
    if any(m.shape != (na, nb) for row in mats for m in row):
        raise ValueError("all symbols must share one shape")
    is_complex = any(np.any(m.imag != 0.0) for row in mats for m in row)

    rows, cols = n * na, n * nb
    prob = sdp.SdpProblem()
    z = prob.add_psd_block(rows + cols)
    w = prob.add_nonneg_block(1)
    slack_x = [prob.add_psd_block(n) for _ in range(na)]
    slack_y = [prob.add_psd_block(n) for _ in range(nb)]
    prob.set_objective([("var", w, 0, 0, 1.0)])

    # row (s, i) at s*n + i, column (t, j) at rows + t*n + j
    for i in range(n):
        for j in range(n):
            for s in range(na):
                for t in range(nb):
                    p, q = s * n + i, rows + t * n + j
                    val = mats[i][j][s, t]
                    prob.add_constraint([("re", z, p, q, 1.0)], float(val.real))
                    if is_complex:
                        prob.add_constraint([("im", z, p, q, 1.0)], float(val.imag))

    def bound_block(base: int, s: int, slack: int) -> None:
        # Z[base+s*n : .., same] + slack = t I_n
        for i in range(n):
            for j in range(i, n):
                p, q = base + s * n + i, base + s * n + j
                terms: list[sdp.Term] = [("re", z, p, q, 1.0), ("re", slack, i, j, 1.0)]
                if i == j:
                    terms.append(("var", w, 0, 0, -1.0))
                prob.add_constraint(terms, 0.0)
                if is_complex and i != j:
                    prob.add_constraint(
                        [("im", z, p, q, 1.0), ("im", slack, i, j, 1.0)], 0.0
                    )

    for s in range(na):
        bound_block(0, s, slack_x[s])
    for t in range(nb):
        bound_block(rows, t, slack_y[t])

    sol = sdp.require_optimal(sdp.solve(prob, tols), "schur_norm_block")
    return NormReport(norm=sol.primal_objective, gap=sol.gap)


def factorization_residual(u: np.ndarray, f: SchurFactorization) -> tuple[float, float]:
    """(max entrywise reproduction error, factorization norm bound)."""
    u = linalg.as_matrix(u, "symbol")
    if f.xi.shape[0] != u.shape[0] or f.eta.shape[0] != u.shape[1]:
        raise ValueError(
            f"witness shape ({f.xi.shape[0]},{f.eta.shape[0]}) does not match "
            f"symbol {u.shape}"
        )
    residual = float(np.max(np.abs(u - f.symbol()))) if u.size else 0.0
    return residual, f.bound()


def two_sided_apply(pairs: list[tuple[np.ndarray, np.ndarray]],
                    a: np.ndarray) -> np.ndarray:
    """sum_k v_k a w_k for a finite family of operator pairs."""
    a = linalg.as_matrix(a, "matrix")
    if not pairs:
        raise ValueError("empty term list")
    out: np.ndarray | None = None
    for k, (v, w) in enumerate(pairs):
        v = linalg.as_matrix(v, f"v[{k}]")
        w = linalg.as_matrix(w, f"w[{k}]")
        if v.shape[1] != a.shape[0] or a.shape[1] != w.shape[0]:
            raise ValueError(
                f"term {k}: dimensions {v.shape} x {a.shape} x {w.shape} do not compose"
            )
        term = v @ a @ w
        out = term if out is None else out + term
    return out


def slice_map(functional: np.ndarray,
              pairs: list[tuple[np.ndarray, np.ndarray]],
              side: str) -> np.ndarray:
    """Slice of sum_k v_k (x) w_k by a trace-pairing functional.

    left:  sum_k tr(F^T v_k) w_k       right: sum_k tr(F^T w_k) v_k
    """
    if side not in ("left", "right"):
        raise ValueError("side must be 'left' or 'right'")
    F = linalg.as_matrix(functional, "functional")
    if not pairs:
        raise ValueError("empty term list")
    out: np.ndarray | None = None
    for k, (v, w) in enumerate(pairs):
        v = linalg.as_matrix(v, f"v[{k}]")
        w = linalg.as_matrix(w, f"w[{k}]")
        sliced, kept = (v, w) if side == "left" else (w, v)
        if F.shape != sliced.shape:
            raise ValueError(f"term {k}: functional shape {F.shape} != {sliced.shape}")
        term = np.sum(F * sliced) * kept
        out = term if out is None else out + term
    return out


def haagerup_predual_norm(mu: np.ndarray,
                          tols: sdp.Tolerances = sdp.Tolerances()) -> NormReport:
    """Norm of mu in l1 (x)_h l1: sup |<u, mu>| over the Schur unit ball.

    One SDP maximizes Re sum_ij u(i,j) mu(i,j) over symbols u in the ball;
    the optimizer u* is returned.
    """
    mu = linalg.as_matrix(mu, "mu")
    ni, nj = mu.shape
    n_total = ni + nj
    is_complex = bool(np.any(mu.imag != 0.0))

    prob = sdp.SdpProblem()
    z = prob.add_psd_block(n_total)
    w = prob.add_nonneg_block(n_total)
    objective: list[sdp.Term] = []
    for i in range(ni):
        for j in range(nj):
            val = mu[i, j]
            if val.real != 0.0:
                objective.append(("re", z, i, ni + j, -float(val.real)))
            if val.imag != 0.0:
                objective.append(("im", z, i, ni + j, float(val.imag)))
    if not objective:
        return NormReport(norm=0.0, gap=0.0, optimizer=np.zeros((ni, nj), dtype=complex))
    prob.set_objective(objective)
    for p in range(n_total):
        prob.add_constraint([("re", z, p, p, 1.0), ("var", w, p, 0, 1.0)], 1.0)

    sol = sdp.require_optimal(sdp.solve(prob, tols), "haagerup_predual_norm")
    block = np.asarray(sol.Z[0], dtype=complex)
    optimizer = block[:ni, ni:]
    if is_complex:
        optimizer = optimizer.copy()
    else:
        optimizer = optimizer.real.astype(complex)
    return NormReport(norm=-sol.primal_objective, gap=-sol.gap, optimizer=optimizer)


def schur_norm_lower_bound(u: np.ndarray, trials: int = 200, iters: int = 60,
                           seed: int = 0) -> float:
    """Certified lower bound for the multiplier norm by unitary search.

    Maximizes ||u o x|| over seeded random unitaries x with alternating
    local ascent (top singular pair, then the trace-norm-attaining unitary).
    Every evaluated value is a true lower bound; the norm itself is the
    supremum over the whole unit ball, which the unitaries span.
    """
    u = linalg.as_matrix(u, "symbol")
    ni, nj = u.shape
    if u.size == 0:
        return 0.0
    rng = np.random.default_rng(seed)
    best = 0.0
    for _ in range(trials):
        g = rng.standard_normal((ni, nj)) + 1j * rng.standard_normal((ni, nj))
        gu, _, gv = np.linalg.svd(g, full_matrices=False)
        x = gu @ gv  # random partial isometry (unitary when square)
        prev = -1.0
        for _ in range(iters):
            prod = u * x
            uu, ss, vv = np.linalg.svd(prod)
            val = float(ss[0])
            best = max(best, val)
            if val - prev <= 1e-13 * (1.0 + val):
                break
            prev = val
            phi, psi = uu[:, 0], vv[0].conj()
            # maximize Re phi* (u o x) psi = Re tr(B^T x) over ||x|| <= 1,
            # attained at the polar isometry of B^T's adjoint factorization
            b = np.conj(phi)[:, None] * u * psi[None, :]
            ua, _, vah = np.linalg.svd(b.T, full_matrices=False)
            x = vah.conj().T @ ua.conj().T
    return best
