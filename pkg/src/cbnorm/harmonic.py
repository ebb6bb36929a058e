"""Multiplier norms on finite groups and word-ball sections.

A multiplier is a complex function u on a group G (or on the words of a
free-group section).  Its two-variable symbol U(s, t) = u(s t^-1) is the
group-invariant Schur symbol, and the completely bounded multiplier norm
of u equals the Schur norm of U.  For a word-ball section the same matrix
yields a certified lower bound for the ambient group's norm.

Fourier-algebra norm and the trace pairing
------------------------------------------

Kernels on G x G pair with functions through the convention that a
rank-one kernel built from f and g is the matrix

    M(x, y) = f(y) g(x),

so the trace norm of M equals ||f||_2 ||g||_2 and extends to the full
projective norm.  The induced map onto functions is

    (P M)(t) = sum_s M(s, t^-1 s),

and the Fourier-algebra norm of u is min { ||M||_1 : P M = u }, an SDP
through the trace-norm epigraph.  The index order in M is deliberate;
here is the one-page check that fixes it.  Take M = I/|G|, which is the
rank-one convention applied to f = g = delta_e summed over translates:

    (P M)(t) = (1/|G|) sum_s [s == t^-1 s] = [t == e],

so P(I/|G|) = delta_e, and since the identity has trace norm 1 the norm
of delta_e is at most 1.  Conversely its Herz-Schur symbol is the
identity matrix with Schur norm 1, and the Schur norm never exceeds the
Fourier-algebra norm, so both equal 1 exactly.  Had the convention been
M(x, y) = f(x) g(y), the same kernel would map to t |-> trace along the
anti-diagonal and the delta_e example would fail on any nonabelian group.

The averaging projection onto invariant symbols is

    (E U)(s, t) = (1/|G|) sum_r U(sr, tr),

a mean of simultaneous row/column translations: each translate of an
invariant symbol u(st^-1) is itself, E is idempotent, and convexity over
permutation-conjugated copies keeps the Schur norm from increasing.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Mapping, Sequence

import numpy as np

from . import linalg, sdp
from .groups import FiniteGroup, FiniteSection, Word
from .schur import NormReport, schur_norm

__all__ = [
    "Multiplier",
    "herz_schur_matrix",
    "cb_norm",
    "cb_norm_sections",
    "invariance_check",
    "average_project",
    "multiplier_from_invariant",
    "a_norm",
    "p_map",
    "builtin_multiplier",
]

SectionValues = Mapping[Word, complex]


@dataclass(frozen=True, eq=False)
class Multiplier:
    """A function on a finite group or on the words of a section."""

    carrier: FiniteGroup | FiniteSection
    values: np.ndarray | SectionValues

    @staticmethod
    def on_group(group: FiniteGroup, values: Sequence[complex]) -> "Multiplier":
        v = np.asarray(values, dtype=complex)
        if v.shape != (group.order,):
            raise ValueError(f"expected {group.order} values, got shape {v.shape}")
        if not np.all(np.isfinite(v.real)) or not np.all(np.isfinite(v.imag)):
            raise ValueError("multiplier values must be finite")
        return Multiplier(carrier=group, values=v)

    @staticmethod
    def on_section(section: FiniteSection,
                   values: SectionValues | Callable[[Word], complex]) -> "Multiplier":
        needed = sorted(section.product_words(), key=lambda w: (len(w), w))
        if callable(values):
            table = {w: complex(values(w)) for w in needed}
        else:
            table = {}
            for w in needed:
                if w not in values:
                    raise ValueError(f"no value for required product word {w!r}")
                table[w] = complex(values[w])
        return Multiplier(carrier=section, values=table)

    def value_list(self) -> np.ndarray:
        """Values on the carrier's own elements (group order or section words)."""
        if isinstance(self.carrier, FiniteGroup):
            return np.asarray(self.values)
        return np.array([self.values[w] for w in self.carrier.words])


def herz_schur_matrix(u: Multiplier) -> np.ndarray:
    """The invariant symbol U(s, t) = u(s t^-1) on the carrier."""
    if isinstance(u.carrier, FiniteGroup):
        g = u.carrier
        vals = np.asarray(u.values)
        return vals[g.cayley[:, g.inverse]]
    section = u.carrier
    out = np.zeros((section.size, section.size), dtype=complex)
    for i in range(section.size):
        row = section.mul_inv[i]
        for j in range(section.size):
            word = row[j]
            try:
                out[i, j] = u.values[word]
            except KeyError:
                raise ValueError(f"no value for required product word {word!r}") from None
    return out


def cb_norm(u: Multiplier, tols: sdp.Tolerances = sdp.Tolerances()) -> NormReport:
    """Completely bounded multiplier norm (Schur norm of the invariant symbol).

    On a word-ball section the value is a certified lower bound for the
    ambient group and the report is flagged accordingly.
    """
    report = schur_norm(herz_schur_matrix(u), tols)
    report.lower_bound = isinstance(u.carrier, FiniteSection)
    return report


def cb_norm_sections(values: SectionValues | Callable[[Word], complex],
                     sections: Sequence[FiniteSection],
                     tols: sdp.Tolerances = sdp.Tolerances()) -> list[NormReport]:
    """Lower bounds along a nested family of sections (nondecreasing)."""
    if not sections:
        return []
    for small, large in zip(sections, sections[1:]):
        if not set(small.words) <= set(large.words):
            raise ValueError("sections must be nested")
    return [cb_norm(Multiplier.on_section(sec, values), tols) for sec in sections]


def invariance_check(U: np.ndarray, g: FiniteGroup) -> float:
    """max over r, s, t of |U(sr, t) - U(s, t r^-1)|; zero iff invariant."""
    U = linalg.as_matrix(U, "symbol")
    if U.shape != (g.order, g.order):
        raise ValueError(f"symbol shape {U.shape} does not match group order {g.order}")
    worst = 0.0
    for r in g.elements():
        left = U[g.cayley[:, r], :]
        right = U[:, g.cayley[:, g.inv(r)]]
        worst = max(worst, float(np.max(np.abs(left - right))))
    return worst


def average_project(U: np.ndarray, g: FiniteGroup) -> np.ndarray:
    """Mean of the translates U(sr, tr): the projection onto invariant symbols.

    The orbits of (s, t) -> (sr, tr) are the level sets of s t^-1; each
    orbit receives one mean value, so the output passes
    :func:`invariance_check` exactly and exact fixed points are returned
    unchanged (E is idempotent bitwise).
    """
    U = linalg.as_matrix(U, "symbol")
    if U.shape != (g.order, g.order):
        raise ValueError(f"symbol shape {U.shape} does not match group order {g.order}")
    if invariance_check(U, g) == 0.0:
        return U.copy()
    out = np.empty_like(U)
    ts = np.arange(g.order)
    for x in g.elements():
        rows = g.cayley[x, ts]  # pairs (s, t) with s t^-1 = x
        out[rows, ts] = np.sum(U[rows, ts]) / g.order
    return out


def multiplier_from_invariant(U: np.ndarray, g: FiniteGroup,
                              tol: float = 1e-12) -> Multiplier:
    """Recover u with U(s, t) = u(s t^-1) from an invariant symbol.

    Reads u along the first row and cross-checks every other row for
    consistency to ``tol``.
    """
    U = linalg.as_matrix(U, "symbol")
    vals = U[0, g.inverse]  # u(x) = U(e, x^-1)
    scale = max(1.0, float(np.max(np.abs(U))))
    for s in g.elements():
        # row s determines u(x) = U(s, x^-1 s)
        cols = g.cayley[g.inverse, s]
        row_vals = U[s, cols]
        if float(np.max(np.abs(row_vals - vals))) > tol * scale:
            raise ValueError(f"symbol is not invariant: row {s} disagrees with row 0")
    return Multiplier.on_group(g, vals)


def p_map(M: np.ndarray, g: FiniteGroup) -> np.ndarray:
    """(P M)(t) = sum_s M(s, t^-1 s): kernels onto functions."""
    M = linalg.as_matrix(M, "kernel")
    if M.shape != (g.order, g.order):
        raise ValueError(f"kernel shape {M.shape} does not match group order {g.order}")
    n = g.order
    out = np.zeros(n, dtype=complex)
    s_idx = np.arange(n)
    for t in g.elements():
        out[t] = np.sum(M[s_idx, g.cayley[g.inv(t), s_idx]])
    return out


def a_norm(u: Multiplier, tols: sdp.Tolerances = sdp.Tolerances()) -> NormReport:
    """Fourier-algebra norm: min { ||M||_1 : P M = u } via the trace epigraph.

    The SDP has one PSD block [[W1, M], [M*, W2]] with objective
    (tr W1 + tr W2)/2 and the |G| linear constraints (P M)(t) = u(t).
    Returns the minimizing kernel M.
    """
    if not isinstance(u.carrier, FiniteGroup):
        raise ValueError("a_norm requires a finite group carrier")
    g = u.carrier
    n = g.order
    vals = np.asarray(u.values)
    is_complex = bool(np.any(vals.imag != 0.0))

    prob = sdp.SdpProblem()
    z = prob.add_psd_block(2 * n)
    prob.set_objective([("re", z, p, p, 0.5) for p in range(2 * n)])
    for t in g.elements():
        cols = g.cayley[g.inv(t), :]
        re_terms: list[sdp.Term] = [("re", z, s, n + int(cols[s]), 1.0) for s in range(n)]
        prob.add_constraint(re_terms, float(vals[t].real))
        if is_complex:
            im_terms: list[sdp.Term] = [("im", z, s, n + int(cols[s]), 1.0) for s in range(n)]
            prob.add_constraint(im_terms, float(vals[t].imag))

    sol = sdp.require_optimal(sdp.solve(prob, tols), "a_norm")
    kernel = np.asarray(sol.Z[0], dtype=complex)[:n, n:]
    residual = float(np.max(np.abs(p_map(kernel, g) - vals)))
    return NormReport(norm=sol.primal_objective, gap=sol.gap,
                      residual=residual, kernel=kernel)


# -- built-in multiplier families -------------------------------------------


def builtin_multiplier(spec: str, carrier: FiniteGroup | FiniteSection,
                       seed: int = 0) -> Multiplier:
    """Families used by the command line.

    ``decay:r``          r^{|x|} by word length (sections only)
    ``indicator:i,j,..`` indicator of carrier elements by index
    ``random:seed``      seeded complex gaussian values
    """
    kind, _, arg = spec.partition(":")
    if kind == "decay":
        if not isinstance(carrier, FiniteSection):
            raise ValueError("decay multipliers need a word-ball section")
        ratio = float(arg)
        return Multiplier.on_section(carrier, lambda w: ratio ** len(w))
    if kind == "indicator":
        indices = sorted(int(tok) for tok in arg.split(",") if tok != "")
        if isinstance(carrier, FiniteGroup):
            if any(not 0 <= i < carrier.order for i in indices):
                raise ValueError("indicator index out of range")
            vals = np.zeros(carrier.order, dtype=complex)
            vals[indices] = 1.0
            return Multiplier.on_group(carrier, vals)
        if any(not 0 <= i < carrier.size for i in indices):
            raise ValueError("indicator index out of range")
        chosen = {carrier.words[i] for i in indices}
        return Multiplier.on_section(carrier, lambda w: 1.0 if w in chosen else 0.0)
    if kind == "random":
        rng = np.random.default_rng(int(arg) if arg else seed)
        if isinstance(carrier, FiniteGroup):
            vals = rng.standard_normal(carrier.order) + 1j * rng.standard_normal(carrier.order)
            return Multiplier.on_group(carrier, vals / np.sqrt(2.0))
        needed = sorted(carrier.product_words(), key=lambda w: (len(w), w))
        table = {
            w: complex(rng.standard_normal() + 1j * rng.standard_normal()) / np.sqrt(2.0)
            for w in needed
        }
        return Multiplier.on_section(carrier, table)
    raise ValueError(f"unknown multiplier family {spec!r}")
