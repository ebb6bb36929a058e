"""Deterministic dense semidefinite-programming solver.

Every norm computation in this package compiles into the standard primal
form

    minimize    sum_b <C_b, Z_b>
    subject to  sum_b <A_kb, Z_b> = b_k      (k = 1..m)
                Z_b PSD (Hermitian blocks) or entrywise nonnegative,

whose dual is  max b.y  s.t.  S_b = C_b - sum_k y_k A_kb >= 0.

The solver is an infeasible-start primal-dual path-following method with
the HKM direction and a Mehrotra predictor-corrector step.  Complex
Hermitian blocks are compiled to real symmetric blocks of twice the size
through X -> [[Re X, -Im X], [Im X, Re X]], with data halved so that the
reported objectives equal the complex values.  There is no randomization
anywhere: identical inputs give identical outputs on one platform.

Problem data is entered through sparse terms.  A term is a tuple

    ("re", block, p, q, w)   contributing  w * Re Z[p, q]
    ("im", block, p, q, w)   contributing  w * Im Z[p, q]
    ("var", block, i, 0, w)  contributing  w * x[i]   (nonneg block)

to the objective or to the left-hand side of a constraint.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
import scipy.linalg

__all__ = [
    "Block",
    "SdpProblem",
    "SdpSolution",
    "SolutionCheck",
    "Tolerances",
    "SolverError",
    "solve",
    "verify_solution",
]

Term = tuple[str, int, int, int, float]

_STEP_FRACTION = 0.98  # fraction of the distance to the cone boundary

# optional observer invoked after every solve; used by the acceptance
# runner to verify each solution independently.  Never affects results.
_audit_hook = None


def install_audit_hook(hook) -> None:
    global _audit_hook
    _audit_hook = hook


class SolverError(RuntimeError):
    """Raised when a norm computation needs an optimal SDP solution and has none."""


@dataclass(frozen=True)
class Tolerances:
    """Termination tolerances; all must be positive."""

    gap_tol: float = 1e-7
    feas_tol: float = 1e-8
    max_iterations: int = 200

    def __post_init__(self) -> None:
        if self.gap_tol <= 0 or self.feas_tol <= 0 or self.max_iterations <= 0:
            raise ValueError("tolerances must be positive")


@dataclass(frozen=True)
class Block:
    kind: str  # "psd" | "nonneg"
    size: int


class SdpProblem:
    """Standard-form conic program assembled from sparse Hermitian terms."""

    def __init__(self) -> None:
        self.blocks: list[Block] = []
        self.objective: list[Term] = []
        self.constraints: list[tuple[list[Term], float]] = []

    def add_psd_block(self, size: int) -> int:
        if size < 1:
            raise ValueError("psd block size must be >= 1")
        self.blocks.append(Block("psd", size))
        return len(self.blocks) - 1

    def add_nonneg_block(self, size: int) -> int:
        if size < 1:
            raise ValueError("nonneg block size must be >= 1")
        self.blocks.append(Block("nonneg", size))
        return len(self.blocks) - 1

    def set_objective(self, terms: list[Term]) -> None:
        self._check_terms(terms)
        self.objective = list(terms)

    def add_constraint(self, terms: list[Term], rhs: float) -> None:
        self._check_terms(terms)
        if not terms:
            raise ValueError("constraint has no terms")
        self.constraints.append((list(terms), float(rhs)))

    # -- validation -----------------------------------------------------

    def _check_terms(self, terms: list[Term]) -> None:
        for kind, b, p, q, w in terms:
            if b < 0 or b >= len(self.blocks):
                raise ValueError(f"term references unknown block {b}")
            blk = self.blocks[b]
            if kind == "var":
                if blk.kind != "nonneg":
                    raise ValueError("'var' terms require a nonneg block")
                if not 0 <= p < blk.size:
                    raise ValueError(f"nonneg index {p} out of range")
            elif kind in ("re", "im"):
                if blk.kind != "psd":
                    raise ValueError(f"'{kind}' terms require a psd block")
                if not (0 <= p < blk.size and 0 <= q < blk.size):
                    raise ValueError(f"psd index ({p},{q}) out of range")
                if kind == "im" and p == q:
                    raise ValueError("diagonal entries of Hermitian blocks are real")
            else:
                raise ValueError(f"unknown term kind {kind!r}")
            if not np.isfinite(w):
                raise ValueError("term weight must be finite")

    def validate(self) -> None:
        """Check the structural invariants of the problem."""
        if not self.constraints:
            raise ValueError("problem has no constraints")
        total = 0
        for blk in self.blocks:
            # Hermitian n x n blocks have n^2 real degrees of freedom
            total += blk.size**2 if blk.kind == "psd" else blk.size
        if len(self.constraints) > total:
            raise ValueError(
                f"{len(self.constraints)} constraints exceed the real dimension {total}"
            )
        # Terms assemble Hermitian data by construction; verify anyway so a
        # hand-built problem cannot smuggle in a non-Hermitian block.
        for k, (terms, _) in enumerate(self.constraints):
            for b, mat in _dense_blocks(self, terms).items():
                if self.blocks[b].kind == "psd":
                    asym = float(np.max(np.abs(mat - mat.conj().T)))
                    if asym > 1e-12 * max(1.0, float(np.max(np.abs(mat)))):
                        raise ValueError(f"constraint {k}: block {b} is not Hermitian")


# -- dense views used by validation and verification ---------------------


def _dense_blocks(problem: SdpProblem, terms: list[Term]) -> dict[int, np.ndarray]:
    """Assemble the complex matrices/vectors described by a term list."""
    out: dict[int, np.ndarray] = {}
    for kind, b, p, q, w in terms:
        blk = problem.blocks[b]
        if b not in out:
            shape = (blk.size, blk.size) if blk.kind == "psd" else (blk.size,)
            out[b] = np.zeros(shape, dtype=complex)
        if kind == "var":
            out[b][p] += w
        elif kind == "re":
            if p == q:
                out[b][p, p] += w
            else:
                out[b][p, q] += 0.5 * w
                out[b][q, p] += 0.5 * w
        else:  # "im"
            out[b][p, q] += 0.5j * w
            out[b][q, p] -= 0.5j * w
    return out


def _term_value(problem: SdpProblem, terms: list[Term], Z: list[np.ndarray]) -> float:
    """Evaluate <A, Z> for the (Hermitian) data described by ``terms``."""
    total = 0.0
    for kind, b, p, q, w in terms:
        if kind == "var":
            total += w * float(np.real(Z[b][p]))
        elif kind == "re":
            total += w * float(np.real(Z[b][p, q]))
        else:
            total += w * float(np.imag(Z[b][p, q]))
    return total


# -- compilation to the real solver core ----------------------------------


@dataclass
class _RealBlock:
    kind: str          # "psd" | "nonneg"
    size: int          # real size (2n for embedded complex psd blocks)
    complex: bool      # True when this block came from complex data
    # symmetric-pair constraint data: A_k = sum c * (E_pq + E_qp) over its pairs
    pair_p: np.ndarray = field(default_factory=lambda: np.zeros(0, dtype=np.intp))
    pair_q: np.ndarray = field(default_factory=lambda: np.zeros(0, dtype=np.intp))
    pair_c: np.ndarray = field(default_factory=lambda: np.zeros(0))
    pair_owner: np.ndarray = field(default_factory=lambda: np.zeros(0, dtype=np.intp))
    C: np.ndarray | None = None            # dense objective (size,size) or (size,)
    U: np.ndarray | None = None            # nonneg: dense (m, size) constraint stack


def _embed_entries(acc: dict, n: int, is_complex: bool, kind: str,
                   p: int, q: int, w: float) -> None:
    """Accumulate real symmetric matrix entries of one term into ``acc``.

    ``acc`` maps (row, col) to the real matrix entry value; both orientations
    are stored.  The Hermitian data is A[p,q] = a, A[q,p] = conj(a) with
    a = w/2 ("re", off-diagonal), a = w ("re", diagonal) or a = i w/2 ("im").
    For complex blocks A embeds as [[Re A, -Im A], [Im A, Re A]] / 2.
    """
    if kind == "re":
        a = complex(w if p == q else 0.5 * w)
    else:
        a = 0.5j * w
    oriented = [(p, q, a)] if p == q else [(p, q, a), (q, p, a.conjugate())]
    entries: list[tuple[int, int, float]] = []
    if not is_complex:
        entries.extend((r, s, v.real) for r, s, v in oriented)
    else:
        for (r, s, v) in oriented:
            entries.append((r, s, 0.5 * v.real))
            entries.append((r + n, s + n, 0.5 * v.real))
            entries.append((r, s + n, -0.5 * v.imag))
            entries.append((r + n, s, 0.5 * v.imag))
    for (r, s, v) in entries:
        if v != 0.0:
            acc[(r, s)] = acc.get((r, s), 0.0) + v


def _compile(problem: SdpProblem) -> tuple[list[_RealBlock], np.ndarray]:
    problem.validate()
    m = len(problem.constraints)
    # a psd block is embedded iff any objective/constraint term uses "im" on it
    is_complex = [False] * len(problem.blocks)
    for terms in [problem.objective] + [t for t, _ in problem.constraints]:
        for kind, b, _, _, w in terms:
            if kind == "im" and w != 0.0:
                is_complex[b] = True

    blocks: list[_RealBlock] = []
    for b, blk in enumerate(problem.blocks):
        if blk.kind == "nonneg":
            rb = _RealBlock("nonneg", blk.size, False)
            rb.C = np.zeros(blk.size)
            rb.U = np.zeros((m, blk.size))
        else:
            size = 2 * blk.size if is_complex[b] else blk.size
            rb = _RealBlock("psd", size, is_complex[b])
            rb.C = np.zeros((size, size))
        blocks.append(rb)

    # objective
    for kind, b, p, q, w in problem.objective:
        rb = blocks[b]
        if kind == "var":
            rb.C[p] += w
        else:
            acc: dict = {}
            _embed_entries(acc, problem.blocks[b].size, rb.complex, kind, p, q, w)
            for (r, s), v in acc.items():
                rb.C[r, s] += v

    # constraints
    rhs = np.zeros(m)
    pair_lists: list[list[tuple[int, int, float, int]]] = [[] for _ in problem.blocks]
    for k, (terms, bk) in enumerate(problem.constraints):
        rhs[k] = bk
        accs: dict[int, dict] = {}
        for kind, b, p, q, w in terms:
            if kind == "var":
                blocks[b].U[k, p] += w
            else:
                acc = accs.setdefault(b, {})
                _embed_entries(acc, problem.blocks[b].size, blocks[b].complex,
                               kind, p, q, w)
        for b, acc in accs.items():
            # store each symmetric pair once: c*(E_rs + E_sr) has A[r,s] = c
            # off the diagonal and A[r,r] = 2c on it
            for (r, s), v in acc.items():
                if v == 0.0 or r > s:
                    continue
                pair_lists[b].append((r, s, v if r != s else 0.5 * v, k))

    for b, plist in enumerate(pair_lists):
        if not plist or blocks[b].kind != "psd":
            continue
        plist.sort(key=lambda t: (t[3], t[0], t[1]))
        rb = blocks[b]
        rb.pair_p = np.array([t[0] for t in plist], dtype=np.intp)
        rb.pair_q = np.array([t[1] for t in plist], dtype=np.intp)
        rb.pair_c = np.array([t[2] for t in plist])
        rb.pair_owner = np.array([t[3] for t in plist], dtype=np.intp)
    return blocks, rhs


# -- real solver core ------------------------------------------------------


def _apply_A(blocks: list[_RealBlock], m: int, X: list[np.ndarray]) -> np.ndarray:
    """A(X): works for non-symmetric X too (the A_k are symmetric)."""
    out = np.zeros(m)
    for rb, Xb in zip(blocks, X):
        if rb.kind == "nonneg":
            out += rb.U @ Xb
        elif rb.pair_p.size:
            vals = rb.pair_c * (Xb[rb.pair_p, rb.pair_q] + Xb[rb.pair_q, rb.pair_p])
            out += np.bincount(rb.pair_owner, weights=vals, minlength=m)
    return out


def _apply_At(blocks: list[_RealBlock], y: np.ndarray) -> list[np.ndarray]:
    """A*(y) per block."""
    out: list[np.ndarray] = []
    for rb in blocks:
        if rb.kind == "nonneg":
            out.append(rb.U.T @ y)
        else:
            M = np.zeros((rb.size, rb.size))
            if rb.pair_p.size:
                w = rb.pair_c * y[rb.pair_owner]
                np.add.at(M, (rb.pair_p, rb.pair_q), w)
                np.add.at(M, (rb.pair_q, rb.pair_p), w)
            out.append(M)
    return out


_CHUNK = 768  # row-chunk size for the Schur-complement gather


def _schur_complement(blocks: list[_RealBlock], m: int, X: list[np.ndarray],
                      Sinv: list[np.ndarray]) -> np.ndarray:
    """M[k,l] = sum_b tr(A_kb X_b A_lb Sinv_b); symmetric positive definite."""
    M = np.zeros((m, m))
    for rb, Xb, Sib in zip(blocks, X, Sinv):
        if rb.kind == "nonneg":
            scaled = rb.U * (Xb / Sib)
            M += scaled @ rb.U.T
            continue
        P = rb.pair_p.size
        if not P:
            continue
        p, q, c, owner = rb.pair_p, rb.pair_q, rb.pair_c, rb.pair_owner
        comb = owner * m
        for lo in range(0, P, _CHUNK):
            hi = min(lo + _CHUNK, P)
            pp, qq, cc = p[lo:hi], q[lo:hi], c[lo:hi]
            # tr((E_pq+E_qp) X (E_p'q'+E_q'p') Sinv) expanded in four gathers;
            # X and Sinv are symmetric here
            H = Xb[np.ix_(qq, p)] * Sib[np.ix_(pp, q)]
            H += Xb[np.ix_(qq, q)] * Sib[np.ix_(pp, p)]
            H += Xb[np.ix_(pp, p)] * Sib[np.ix_(qq, q)]
            H += Xb[np.ix_(pp, q)] * Sib[np.ix_(qq, p)]
            H *= cc[:, None] * c[None, :]
            idx = (comb[lo:hi][:, None] + owner[None, :]).ravel()
            M += np.bincount(idx, weights=H.ravel(), minlength=m * m).reshape(m, m)
    return 0.5 * (M + M.T)


def _max_step_psd(Xb: np.ndarray, Db: np.ndarray) -> float:
    """Largest alpha with X + alpha D PSD (X positive definite)."""
    L = np.linalg.cholesky(Xb)
    W = scipy.linalg.solve_triangular(L, Db, lower=True)
    W = scipy.linalg.solve_triangular(L, W.T, lower=True)
    lam = float(np.linalg.eigvalsh(0.5 * (W + W.T))[0])
    return np.inf if lam >= -1e-14 else -1.0 / lam


def _max_step(blocks: list[_RealBlock], X: list[np.ndarray],
              D: list[np.ndarray]) -> float:
    alpha = np.inf
    for rb, Xb, Db in zip(blocks, X, D):
        if rb.kind == "nonneg":
            neg = Db < 0
            if np.any(neg):
                alpha = min(alpha, float(np.min(-Xb[neg] / Db[neg])))
        else:
            alpha = min(alpha, _max_step_psd(Xb, Db))
    return alpha


def _chol_factor(M: np.ndarray):
    """Cholesky with a deterministic escalating diagonal bump on failure."""
    m = M.shape[0]
    bump = 1e-14 * max(1.0, float(np.trace(M)) / m)
    for attempt in range(6):
        try:
            return scipy.linalg.cho_factor(
                M if attempt == 0 else M + bump * np.eye(m), lower=True
            )
        except np.linalg.LinAlgError:
            bump *= 100.0
    raise np.linalg.LinAlgError("Schur complement is numerically singular")


@dataclass
class SdpSolution:
    """Primal-dual certificate returned by :func:`solve` (complex level)."""

    status: str                     # "optimal" | "infeasible" | "max_iterations"
    Z: list[np.ndarray]
    y: np.ndarray
    S: list[np.ndarray]
    primal_objective: float
    dual_objective: float
    gap: float                      # primal_objective - dual_objective
    iterations: int
    infeasibility: str | None = None  # "primal" | "dual" when status=="infeasible"


def _recover(blocks: list[_RealBlock], mats: list[np.ndarray]) -> list[np.ndarray]:
    """Back out complex blocks from the real embedding (no symmetrization,
    so residual non-Hermitian parts remain visible to verification)."""
    out = []
    for rb, Mb in zip(blocks, mats):
        if rb.kind == "nonneg" or not rb.complex:
            out.append(Mb.copy())
        else:
            n = rb.size // 2
            out.append(Mb[:n, :n] + 1j * Mb[n:, :n])
    return out


def solve(problem: SdpProblem, tols: Tolerances = Tolerances()) -> SdpSolution:
    """Run the interior-point method.  Deterministic; see the module docstring."""
    blocks, b = _compile(problem)
    m = b.size
    nu = sum(rb.size for rb in blocks)

    # data norms for the identity-multiple interior start
    anorms = np.zeros(m)
    for rb in blocks:
        if rb.kind == "nonneg":
            anorms += np.sum(rb.U * rb.U, axis=1)
        elif rb.pair_p.size:
            w = np.where(rb.pair_p == rb.pair_q, 4.0, 2.0) * rb.pair_c**2
            anorms += np.bincount(rb.pair_owner, weights=w, minlength=m)
    anorms = np.sqrt(anorms)
    cnorm = max(float(np.linalg.norm(rb.C)) for rb in blocks)
    tau_p = max(10.0, np.sqrt(nu), float(np.max(nu * np.abs(b) / (1.0 + anorms))))
    tau_d = max(10.0, np.sqrt(nu), float(np.max(anorms)), cnorm)

    def eye_like(rb: _RealBlock, t: float) -> np.ndarray:
        return t * (np.eye(rb.size) if rb.kind == "psd" else np.ones(rb.size))

    X = [eye_like(rb, tau_p) for rb in blocks]
    S = [eye_like(rb, tau_d) for rb in blocks]
    y = np.zeros(m)

    bscale = 1.0 + float(np.max(np.abs(b)))
    cscale = 1.0 + max(
        float(np.max(np.abs(rb.C))) if rb.C is not None and rb.C.size else 0.0
        for rb in blocks
    )

    def inner(Alist: list[np.ndarray], Blist: list[np.ndarray]) -> float:
        return float(
            sum(np.sum(Ab * Bb) for Ab, Bb in zip(Alist, Blist))
        )

    status = "max_iterations"
    infeasibility: str | None = None
    best = None
    best_score = np.inf
    it = 0

    for it in range(1, tols.max_iterations + 1):
        rp = b - _apply_A(blocks, m, X)
        Aty = _apply_At(blocks, y)
        Rd = [rb.C - At - Sb for rb, At, Sb in zip(blocks, Aty, S)]
        pobj = inner([rb.C for rb in blocks], X)
        dobj = float(b @ y)
        mu = inner(X, S) / nu

        pres = float(np.max(np.abs(rp))) / bscale
        dres = max(float(np.max(np.abs(R))) for R in Rd) / cscale
        relgap = abs(pobj - dobj) / (1.0 + abs(pobj) + abs(dobj))
        score = max(pres, dres, relgap)
        if score < best_score:
            best_score = score
            best = ([Xb.copy() for Xb in X], y.copy(), [Sb.copy() for Sb in S],
                    pobj, dobj, it - 1)
        if (pres <= 0.5 * tols.feas_tol and dres <= 0.5 * tols.feas_tol
                and relgap <= 0.4 * tols.gap_tol):
            status = "optimal"
            break

        # divergence-based infeasibility certificates
        ynorm = float(np.max(np.abs(y))) if m else 0.0
        if ynorm > 1e8 * bscale:
            yhat = y / ynorm
            Shat = _apply_At(blocks, yhat)
            mineig = min(
                float(np.linalg.eigvalsh(-0.5 * (Ab + Ab.T))[0]) if rb.kind == "psd"
                else float(np.min(-Ab))
                for rb, Ab in zip(blocks, Shat)
            )
            if float(b @ yhat) > 1e-6 and mineig > -1e-8:
                status, infeasibility = "infeasible", "primal"
                break
        xnorm = max(float(np.max(np.abs(Xb))) for Xb in X)
        if xnorm > 1e8 * tau_p:
            Xhat = [Xb / xnorm for Xb in X]
            if (inner([rb.C for rb in blocks], Xhat) < -1e-6
                    and float(np.max(np.abs(_apply_A(blocks, m, Xhat)))) < 1e-8):
                status, infeasibility = "infeasible", "dual"
                break

        Sinv = []
        for rb, Sb in zip(blocks, S):
            if rb.kind == "nonneg":
                Sinv.append(Sb)  # placeholder; nonneg handled via vectors
            else:
                Lc = np.linalg.cholesky(Sb)
                Sinv.append(scipy.linalg.cho_solve((Lc, True), np.eye(rb.size)))

        M = _schur_complement(blocks, m, X, Sinv)
        factor = _chol_factor(M)

        def solve_M(rhs_vec: np.ndarray) -> np.ndarray:
            sol = scipy.linalg.cho_solve(factor, rhs_vec)
            sol += scipy.linalg.cho_solve(factor, rhs_vec - M @ sol)
            return sol

        def newton(Rc: list[np.ndarray]):
            """Solve the HKM system for complementarity residual Rc."""
            rhs = rp.copy()
            for rb, Xb, Rdb, Rcb, Sib in zip(blocks, X, Rd, Rc, Sinv):
                if rb.kind == "nonneg":
                    rhs += rb.U @ ((Xb * Rdb - Rcb) / Sib)
                else:
                    V = (Xb @ Rdb - Rcb) @ Sib
                    if rb.pair_p.size:
                        vals = rb.pair_c * (V[rb.pair_p, rb.pair_q]
                                            + V[rb.pair_q, rb.pair_p])
                        rhs += np.bincount(rb.pair_owner, weights=vals, minlength=m)
            dy = solve_M(rhs)
            dS = [Rdb - At for Rdb, At in zip(Rd, _apply_At(blocks, dy))]
            dX = []
            for rb, Xb, dSb, Rcb, Sib in zip(blocks, X, dS, Rc, Sinv):
                if rb.kind == "nonneg":
                    dX.append((Rcb - Xb * dSb) / Sib)
                else:
                    D = (Rcb - Xb @ dSb) @ Sib
                    dX.append(0.5 * (D + D.T))
            return dX, dy, dS

        # predictor
        Rc_aff = [
            -Xb * Sb if rb.kind == "nonneg" else -(Xb @ Sb)
            for rb, Xb, Sb in zip(blocks, X, S)
        ]
        dXa, dya, dSa = newton(Rc_aff)
        ap = min(1.0, _max_step(blocks, X, dXa))
        ad = min(1.0, _max_step(blocks, S, dSa))
        mu_aff = inner(
            [Xb + ap * D for Xb, D in zip(X, dXa)],
            [Sb + ad * D for Sb, D in zip(S, dSa)],
        ) / nu
        sigma = min(1.0, max(0.0, (mu_aff / mu)) ** 3)

        # corrector
        Rc = []
        for rb, Ra, dXb, dSb in zip(blocks, Rc_aff, dXa, dSa):
            if rb.kind == "nonneg":
                Rc.append(sigma * mu + Ra - dXb * dSb)
            else:
                Rc.append(sigma * mu * np.eye(rb.size) + Ra - dXb @ dSb)
        dX, dy, dS = newton(Rc)

        ap = min(1.0, _STEP_FRACTION * _max_step(blocks, X, dX))
        ad = min(1.0, _STEP_FRACTION * _max_step(blocks, S, dS))
        X = [Xb + ap * Db for Xb, Db in zip(X, dX)]
        y = y + ad * dy
        S = [Sb + ad * Db for Sb, Db in zip(S, dS)]

    if status != "optimal" and best is not None:
        X, y, S, pobj, dobj, _ = best
        pobj = inner([rb.C for rb in blocks], X)
        dobj = float(b @ y)
    else:
        pobj = inner([rb.C for rb in blocks], X)
        dobj = float(b @ y)

    solution = SdpSolution(
        status=status,
        Z=_recover(blocks, X),
        y=np.asarray(y, dtype=float),
        S=_recover(blocks, S),
        primal_objective=pobj,
        dual_objective=dobj,
        gap=pobj - dobj,
        iterations=it,
        infeasibility=infeasibility,
    )
    if _audit_hook is not None:
        _audit_hook(problem, solution)
    return solution


# -- independent verification ---------------------------------------------


@dataclass
class SolutionCheck:
    """Residual report recomputed from scratch, independent of the solver."""

    primal_objective: float
    dual_objective: float
    gap: float
    gap_rel: float
    constraint_residual: float
    constraint_residual_rel: float
    dual_residual: float
    dual_residual_rel: float
    min_eig_primal: float
    min_eig_dual: float

    def within(self, tols: Tolerances) -> bool:
        return (
            self.gap_rel <= tols.gap_tol
            and self.constraint_residual_rel <= tols.feas_tol
            and self.dual_residual_rel <= tols.feas_tol
            and self.min_eig_primal >= -tols.feas_tol
            and self.min_eig_dual >= -tols.feas_tol
        )


def verify_solution(problem: SdpProblem, sol: SdpSolution,
                    tols: Tolerances = Tolerances()) -> SolutionCheck:
    """Recompute objectives, residuals and eigenvalue floors from problem data."""
    m = len(problem.constraints)
    bvec = np.array([rhs for _, rhs in problem.constraints])
    pobj = _term_value(problem, problem.objective, sol.Z)
    dobj = float(bvec @ sol.y) if m else 0.0

    res = np.array([
        _term_value(problem, terms, sol.Z) - rhs
        for terms, rhs in problem.constraints
    ])
    cres = float(np.max(np.abs(res))) if m else 0.0

    # dual slack: C - A*(y) compared against the reported S
    deltas: list[np.ndarray] = []
    for b, blk in enumerate(problem.blocks):
        shape = (blk.size, blk.size) if blk.kind == "psd" else (blk.size,)
        deltas.append(np.zeros(shape, dtype=complex))
    dense_objective = _dense_blocks(problem, problem.objective)
    for b, mat in dense_objective.items():
        deltas[b] += mat
    for k, (terms, _) in enumerate(problem.constraints):
        yk = float(sol.y[k])
        for b, mat in _dense_blocks(problem, terms).items():
            deltas[b] -= yk * mat
    dres = 0.0
    cscale = 1.0
    for b, blk in enumerate(problem.blocks):
        diff = deltas[b] - sol.S[b]
        dres = max(dres, float(np.max(np.abs(diff))) if diff.size else 0.0)
        dense_c = dense_objective.get(b)
        if dense_c is not None and dense_c.size:
            cscale = max(cscale, float(np.max(np.abs(dense_c))))

    def mineig(blockmats: list[np.ndarray]) -> float:
        worst = np.inf
        for blk, Mb in zip(problem.blocks, blockmats):
            if blk.kind == "nonneg":
                worst = min(worst, float(np.min(np.real(Mb))))
            else:
                H = 0.5 * (Mb + Mb.conj().T)
                worst = min(worst, float(np.linalg.eigvalsh(H)[0]))
        return worst

    bscale = 1.0 + (float(np.max(np.abs(bvec))) if m else 0.0)
    return SolutionCheck(
        primal_objective=pobj,
        dual_objective=dobj,
        gap=pobj - dobj,
        gap_rel=abs(pobj - dobj) / (1.0 + abs(pobj)),
        constraint_residual=cres,
        constraint_residual_rel=cres / bscale,
        dual_residual=dres,
        dual_residual_rel=dres / cscale,
        min_eig_primal=mineig(sol.Z),
        min_eig_dual=mineig(sol.S),
    )


def require_optimal(sol: SdpSolution, context: str) -> SdpSolution:
    """Raise :class:`SolverError` unless the solution is optimal."""
    if sol.status != "optimal":
        raise SolverError(f"{context}: solver returned status {sol.status!r}")
    return sol
