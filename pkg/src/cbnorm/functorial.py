"""Pullback, restriction, extension and quotient-lift of multipliers.

The norm relations these operations satisfy (pullback along a surjection
is isometric, restriction to a subgroup never increases the norm,
extension by zero from a subgroup is isometric, lifting through a
quotient is isometric) are tested postconditions, not runtime checks:
each operation returns the transported multiplier, and
:func:`compare_cb_norms` runs the two SDPs for the verification bundle.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from . import sdp
from .groups import FiniteGroup, GroupHomomorphism, subgroup_group
from .harmonic import Multiplier, cb_norm

__all__ = [
    "pullback",
    "restrict",
    "extend_zero",
    "lift_from_quotient",
    "NormComparison",
    "compare_cb_norms",
]


def _group_values(u: Multiplier) -> tuple[FiniteGroup, np.ndarray]:
    if not isinstance(u.carrier, FiniteGroup):
        raise ValueError("operation requires a finite group carrier")
    return u.carrier, np.asarray(u.values)


def pullback(u: Multiplier, sigma: GroupHomomorphism) -> Multiplier:
    """u o sigma, a multiplier on the source of sigma."""
    target, vals = _group_values(u)
    if sigma.target.order != target.order:
        raise ValueError("homomorphism target does not match the multiplier's group")
    return Multiplier.on_group(sigma.source, vals[sigma.map])


def restrict(u: Multiplier, subgroup: Sequence[int]) -> tuple[Multiplier, list[int]]:
    """Restriction to a validated subgroup, realized as its own group.

    Returns the restricted multiplier together with the embedding list
    (subgroup element i of the new carrier is ``embedding[i]`` in G).
    """
    g, vals = _group_values(u)
    h, embedding = subgroup_group(g, subgroup)
    return Multiplier.on_group(h, vals[np.asarray(embedding)]), embedding


def extend_zero(u: Multiplier, g: FiniteGroup, embedding: Sequence[int]) -> Multiplier:
    """Extend a subgroup multiplier by zero to the ambient group."""
    h, vals = _group_values(u)
    emb = np.asarray(embedding, dtype=np.intp)
    if emb.shape != (h.order,):
        raise ValueError("embedding length does not match the subgroup order")
    if np.any(emb < 0) or np.any(emb >= g.order) or len(set(emb.tolist())) != h.order:
        raise ValueError("embedding is not an injection into the ambient group")
    if emb[0] != 0:
        raise ValueError("embedding must send the identity to the identity")
    out = np.zeros(g.order, dtype=complex)
    out[emb] = vals
    return Multiplier.on_group(g, out)


def lift_from_quotient(u: Multiplier, q: GroupHomomorphism) -> Multiplier:
    """u o q for a quotient projection q: the coset-constant lift."""
    return pullback(u, q)


@dataclass(frozen=True)
class NormComparison:
    """Verification bundle for a norm relation between two multipliers."""

    norm_in: float
    norm_out: float

    @property
    def difference(self) -> float:
        return self.norm_out - self.norm_in


def compare_cb_norms(u_in: Multiplier, u_out: Multiplier,
                     tols: sdp.Tolerances = sdp.Tolerances()) -> NormComparison:
    """Run both multiplier-norm SDPs for a transported pair."""
    return NormComparison(
        norm_in=cb_norm(u_in, tols).norm,
        norm_out=cb_norm(u_out, tols).norm,
    )
