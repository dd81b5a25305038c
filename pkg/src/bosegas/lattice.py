"""Momentum-lattice enumeration and convergent lattice sums.

Excitation momenta on the unit torus form the integer lattice scaled by
2*pi, with the zero mode removed.  Shells collect all modes of equal
squared integer norm; lattice sums are accumulated shell by shell in a
fixed order with exactly rounded summation, and carry an explicit tail
bound obtained by comparing the beyond-cutoff sum with a displaced radial
integral.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, Sequence

import numpy as np

TWO_PI = 2.0 * math.pi

__all__ = [
    "TWO_PI",
    "Mode",
    "Shell",
    "SumResult",
    "enumerate_shells",
    "modes_up_to",
    "lattice_sum",
    "tail_norm_bound",
]


@dataclass(frozen=True)
class Mode:
    """A single excitation mode: integer triple ``n`` with momentum ``p = scale*n``."""

    n: tuple[int, int, int]
    p: tuple[float, float, float]
    p_sq: float

    def __post_init__(self):
        if self.n == (0, 0, 0):
            raise ValueError("the zero mode is not an excitation mode")

    @property
    def norm_sq(self) -> int:
        n1, n2, n3 = self.n
        return n1 * n1 + n2 * n2 + n3 * n3

    def negated(self) -> tuple[int, int, int]:
        return (-self.n[0], -self.n[1], -self.n[2])


def _make_mode(n: tuple[int, int, int], scale: float) -> Mode:
    p = (scale * n[0], scale * n[1], scale * n[2])
    norm_sq = n[0] * n[0] + n[1] * n[1] + n[2] * n[2]
    return Mode(n=n, p=p, p_sq=scale * scale * norm_sq)


@dataclass(frozen=True)
class Shell:
    """All modes with a common squared integer norm."""

    norm_sq: int
    members: tuple[Mode, ...]

    @property
    def multiplicity(self) -> int:
        return len(self.members)


@dataclass(frozen=True)
class SumResult:
    """Value of a cutoff lattice sum together with a beyond-cutoff tail bound."""

    value: float
    tail_bound: float
    cutoff_norm_sq: int


@lru_cache(maxsize=32)
def enumerate_shells(max_norm_sq: int, momentum_scale: float = TWO_PI) -> tuple[Shell, ...]:
    """Enumerate shells with 1 <= |n|^2 <= max_norm_sq, ascending in |n|^2.

    Within a shell members are sorted lexicographically by (n1, n2, n3),
    so two calls with equal arguments produce identical ordered output.
    Norms not represented by any integer triple (e.g. 7) are simply absent.
    """
    if max_norm_sq < 1:
        raise ValueError("max_norm_sq must be >= 1")
    m = math.isqrt(max_norm_sq)
    axis = np.arange(-m, m + 1)
    n1, n2, n3 = np.meshgrid(axis, axis, axis, indexing="ij")
    triples = np.stack([n1.ravel(), n2.ravel(), n3.ravel()], axis=1)
    norms = (triples**2).sum(axis=1)
    keep = (norms >= 1) & (norms <= max_norm_sq)
    triples = triples[keep]
    norms = norms[keep]

    shells: list[Shell] = []
    for norm in np.unique(norms):
        rows = triples[norms == norm]
        rows = rows[np.lexsort((rows[:, 2], rows[:, 1], rows[:, 0]))]
        members = tuple(
            _make_mode((int(r[0]), int(r[1]), int(r[2])), momentum_scale) for r in rows
        )
        shells.append(Shell(norm_sq=int(norm), members=members))
    return tuple(shells)


def modes_up_to(max_norm_sq: int, momentum_scale: float = TWO_PI) -> tuple[Mode, ...]:
    """All modes with |n|^2 <= max_norm_sq, flattened in shell order."""
    out: list[Mode] = []
    for shell in enumerate_shells(max_norm_sq, momentum_scale):
        out.extend(shell.members)
    return tuple(out)


@lru_cache(maxsize=8)
def _multiplicities(limit: int) -> tuple[int, ...]:
    """r3(j) (number of integer triples of squared norm j) for 0 <= j <= limit."""
    m = math.isqrt(limit)
    counts = [0] * (limit + 1)
    for a in range(-m, m + 1):
        for b in range(-m, m + 1):
            base = a * a + b * b
            if base > limit:
                continue
            for c in range(-m, m + 1):
                j = base + c * c
                if j <= limit:
                    counts[j] += 1
    return tuple(counts)


def tail_norm_bound(cutoff_norm_sq: int, s: float) -> float:
    """Upper bound for sum over |n|^2 > cutoff of |n|^(-2s), for s > 3/2.

    The first shells past the cutoff are summed exactly; the remainder is
    bounded by the radial integral over the union of unit cells, each of
    which lies at radius >= |n| - sqrt(3)/2.
    """
    if s <= 1.5:
        raise ValueError("tail exponent must exceed 3/2 for a summable tail")
    switch = max(cutoff_norm_sq, 64)
    counts = _multiplicities(switch)
    exact = math.fsum(
        counts[j] * j ** (-s) for j in range(cutoff_norm_sq + 1, switch + 1) if counts[j]
    )
    t0 = math.sqrt(switch) - math.sqrt(3.0)
    geometry = (1.0 + math.sqrt(3.0) / (2.0 * t0)) ** 2
    integral = geometry * 4.0 * math.pi * t0 ** (3.0 - 2.0 * s) / (2.0 * s - 3.0)
    return exact + integral


def lattice_sum(
    f: Callable[[Mode], float],
    max_norm_sq: int,
    tail_exponent: float,
    momentum_scale: float = TWO_PI,
) -> SumResult:
    """Shell-ordered compensated sum of ``f`` over modes with |n|^2 <= cutoff.

    ``tail_exponent`` s > 3/2 models the decay |f| <= C * |n|^(-2s) beyond
    the cutoff; C is estimated from the outermost evaluated shell, which
    presumes |f(n)| * |n|^(2s) is non-increasing past the cutoff.
    """
    if tail_exponent <= 1.5:
        raise ValueError("tail exponent must exceed 3/2 for a summable tail")
    shells = enumerate_shells(max_norm_sq, momentum_scale)
    shell_sums = [math.fsum(f(mode) for mode in shell.members) for shell in shells]
    value = math.fsum(shell_sums)

    outer = shells[-1]
    c_tail = max(abs(f(mode)) for mode in outer.members) * outer.norm_sq**tail_exponent
    bound = c_tail * tail_norm_bound(max_norm_sq, tail_exponent)
    return SumResult(value=value, tail_bound=bound, cutoff_norm_sq=max_norm_sq)


def shell_values(
    fn: Callable[[float], float], shells: Sequence[Shell]
) -> "np.ndarray":
    """Evaluate a function of p_sq once per shell (shell-constant quantities)."""
    return np.array([fn(shell.members[0].p_sq) for shell in shells])
