"""Radial scattering and truncated-ball solvers, and the correlation kernels.

Everything radial is solved through the substitution u(r) = r*f(r), which
turns the three-dimensional problems into regular one-dimensional ODEs:

* zero-energy scattering: u'' = (V/2) u on (0, r_max), u(0) = 0; outside the
  support u is affine and the scattering length is read off u(r) = r - a.
* truncated-ball problem: u'' = (V/2 - lambda) u on (0, R) with the
  reflecting boundary condition u'(R) = u(R)/R and normalization u(R) = R,
  lambda being the smallest such eigenvalue.

From the ball solution the correlation kernels are obtained as radial
Fourier transforms evaluated by composite Simpson quadrature on uniform
grids (two resolutions, so every transform carries its own error
estimate):

* eta_p = -w_hat(|p|/N) / N^2 with w = 1 - f on the ball,
* tau_p = -log(1 + 2 (V f)_hat(|p|/N) / |p|^2)/4 - eta_p,
* nu_p  = -log(1 + 16 pi a / |p|^2)/4.

Momenta use the unit-torus convention p = 2*pi*n, energies |p|^2.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Iterable, Sequence

import numpy as np
from scipy.integrate import solve_ivp

from .bogoliubov import nu_coefficient
from .errors import BracketFailure, KernelError, QuadratureError, SolverError
from .lattice import Mode

__all__ = [
    "RadialPotential",
    "ScatteringSolution",
    "NeumannSolution",
    "KernelTable",
    "solve_scattering",
    "energy_functional",
    "solve_neumann",
    "eta_coefficients",
    "tau_coefficients",
    "nu_coefficients",
    "kernel_identity_residuals",
    "kernel_table",
    "potential_fourier",
]

_FOUR_PI = 4.0 * math.pi


# ---------------------------------------------------------------------------
# potentials
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class RadialPotential:
    """Radial, non-negative, compactly supported interaction potential.

    Use the class methods to construct one of the supported kinds; direct
    construction is discouraged because it skips shape-specific checks.
    """

    kind: str
    support_radius: float
    params: tuple = ()
    grid: tuple = ()
    values: tuple = ()

    @classmethod
    def soft_sphere(cls, v0: float, radius: float) -> "RadialPotential":
        if v0 < 0:
            raise ValueError("soft-sphere height must be non-negative")
        if radius <= 0:
            raise ValueError("soft-sphere radius must be positive")
        return cls(kind="soft_sphere", support_radius=radius, params=(v0, radius))

    @classmethod
    def gaussian_truncated(
        cls, v0: float, width: float, support_radius: float
    ) -> "RadialPotential":
        if v0 < 0:
            raise ValueError("gaussian height must be non-negative")
        if width <= 0 or support_radius <= 0:
            raise ValueError("gaussian width and support must be positive")
        return cls(
            kind="gaussian_truncated",
            support_radius=support_radius,
            params=(v0, width, support_radius),
        )

    @classmethod
    def tabulated(cls, grid: Sequence[float], values: Sequence[float]) -> "RadialPotential":
        g = np.asarray(grid, dtype=float)
        v = np.asarray(values, dtype=float)
        if g.ndim != 1 or g.shape != v.shape or len(g) < 2:
            raise ValueError("tabulated potential needs matching 1-d grid and values")
        if not np.all(np.diff(g) > 0) or g[0] < 0:
            raise ValueError("tabulated grid must be increasing and non-negative")
        if np.any(v < 0):
            raise ValueError("potential values must be non-negative")
        return cls(
            kind="tabulated",
            support_radius=float(g[-1]),
            grid=tuple(float(x) for x in g),
            values=tuple(float(x) for x in v),
        )

    def __call__(self, r):
        r = np.asarray(r, dtype=float)
        if self.kind == "soft_sphere":
            v0, radius = self.params
            out = np.where(r <= radius, v0, 0.0)
        elif self.kind == "gaussian_truncated":
            v0, width, support = self.params
            out = np.where(r <= support, v0 * np.exp(-(r * r) / (2.0 * width * width)), 0.0)
        elif self.kind == "tabulated":
            out = np.interp(r, self.grid, self.values, left=self.values[0], right=0.0)
            out = np.where(r <= self.support_radius, out, 0.0)
        else:  # pragma: no cover
            raise ValueError(f"unknown potential kind {self.kind!r}")
        return out if out.ndim else float(out)

    @property
    def max_value(self) -> float:
        if self.kind == "soft_sphere":
            return self.params[0]
        if self.kind == "gaussian_truncated":
            return self.params[0]
        return max(self.values)

    @property
    def is_zero(self) -> bool:
        return self.max_value == 0.0

    def breakpoints(self) -> tuple[float, ...]:
        """Radii where the potential may be non-smooth (integration is split there)."""
        if self.kind == "tabulated":
            return tuple(x for x in self.grid if 0.0 < x <= self.support_radius)
        return (self.support_radius,)


def zero_potential(support_radius: float = 0.5) -> RadialPotential:
    """The identically-zero interaction (free gas)."""
    return RadialPotential.soft_sphere(0.0, support_radius)


# ---------------------------------------------------------------------------
# piecewise dense ODE solutions
# ---------------------------------------------------------------------------

class _PiecewiseSolution:
    """Dense evaluator for u, u' assembled from per-segment IVP solutions."""

    def __init__(self, segments, scale: float = 1.0):
        self._segments = segments  # list of (lo, hi, OdeSolution)
        self._scale = scale

    def rescaled(self, scale: float) -> "_PiecewiseSolution":
        return _PiecewiseSolution(self._segments, self._scale * scale)

    def _eval(self, r, row: int):
        r = np.atleast_1d(np.asarray(r, dtype=float))
        out = np.empty_like(r)
        for lo, hi, sol in self._segments:
            mask = (r >= lo) & (r <= hi)
            if mask.any():
                out[mask] = sol(r[mask])[row]
        return out * self._scale

    def u(self, r):
        return self._eval(r, 0)

    def u_prime(self, r):
        return self._eval(r, 1)


def _segment_potential(potential: RadialPotential, lo: float, hi: float):
    """Potential restricted to (lo, hi): endpoint values are one-sided limits.

    Breakpoints sit exactly on segment boundaries, so sampling the raw
    potential there would leak the value from the neighbouring segment
    (e.g. the soft-sphere top at its own support radius).
    """
    lo_in = np.nextafter(lo, hi)
    hi_in = np.nextafter(hi, lo)

    def v(r):
        return potential(np.clip(r, lo_in, hi_in))

    return v


def _integrate_radial(
    potential: RadialPotential,
    r_end: float,
    lam: float,
    tol: float,
) -> _PiecewiseSolution:
    """Integrate u'' = (V/2 - lam) u from u(0)=0, u'(0)=1, split at breakpoints."""
    cuts = [0.0] + [b for b in potential.breakpoints() if b < r_end] + [r_end]
    y = [0.0, 1.0]
    segments = []
    for lo, hi in zip(cuts[:-1], cuts[1:]):
        v_seg = _segment_potential(potential, lo, hi)

        def rhs(r, y, v_seg=v_seg):
            return [y[1], (0.5 * v_seg(r) - lam) * y[0]]

        res = solve_ivp(
            rhs,
            (lo, hi),
            y,
            method="DOP853",
            rtol=tol,
            atol=tol * 1e-3,
            dense_output=True,
        )
        if not res.success:  # pragma: no cover
            raise SolverError(f"radial integration failed on [{lo}, {hi}]: {res.message}")
        segments.append((lo, hi, res.sol))
        y = [res.y[0][-1], res.y[1][-1]]
    return _PiecewiseSolution(segments)


# ---------------------------------------------------------------------------
# zero-energy scattering
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ScatteringSolution:
    """Zero-energy scattering solution, normalized so u(r) = r - a outside the support."""

    a: float
    grid: np.ndarray
    u: np.ndarray
    r_max: float
    potential: RadialPotential
    tol: float
    dense: _PiecewiseSolution = field(repr=False)

    def f(self, r):
        """The scattering profile f = u/r (f(0) is the limit u'(0))."""
        r = np.atleast_1d(np.asarray(r, dtype=float))
        out = np.empty_like(r)
        small = r < 1e-12 * self.r_max
        out[~small] = self.dense.u(r[~small]) / r[~small]
        if small.any():
            out[small] = self.dense.u_prime(np.zeros(small.sum()))
        return out


def solve_scattering(
    potential: RadialPotential, r_max: float, tol: float = 1e-10
) -> ScatteringSolution:
    """Solve the zero-energy radial problem and read off the scattering length.

    Integrates u'' = (V/2) u outward from u(0) = 0 with an adaptive
    high-order explicit scheme at local tolerance ``tol`` (integration is
    split at potential breakpoints, so discontinuous potentials such as the
    soft sphere lose no accuracy).  Outside the support u is affine,
    u = c (r - a); the solution is rescaled so c = 1.
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    if r_max <= potential.support_radius:
        raise SolverError(
            "r_max must exceed the potential support to reach the affine regime"
        )
    dense = _integrate_radial(potential, r_max, lam=0.0, tol=tol)
    c = float(dense.u_prime(r_max)[0])
    if not (c > 0):
        raise SolverError("scattering solution failed to stay positive outward")
    a = r_max - float(dense.u(r_max)[0]) / c
    if a < 0.0:
        # non-negative potentials have non-negative length; only roundoff
        # from the free problem may dip below zero
        if a < -10.0 * tol * max(1.0, r_max):
            raise SolverError(f"negative scattering length {a:g} from the solver")
        a = 0.0
    dense = dense.rescaled(1.0 / c)

    grid = np.linspace(0.0, r_max, 2001)
    u = dense.u(grid)
    sample = np.linspace(potential.support_radius, r_max, 17)
    affine_err = float(np.max(np.abs(dense.u(sample) - (sample - a))))
    if affine_err > 10.0 * tol * max(1.0, r_max):
        raise SolverError(f"affine regime not reached to tolerance ({affine_err:.3e})")
    return ScatteringSolution(
        a=a, grid=grid, u=u, r_max=r_max, potential=potential, tol=tol, dense=dense
    )


def energy_functional(sol: ScatteringSolution, include_tail: bool = True) -> float:
    """Scattering length via the radial energy integral, cross-checking the ODE route.

    Evaluates int_0^{r_max} [ (u' - u/r)^2 + V u^2 / 2 ] dr; with
    ``include_tail`` the analytic remainder a^2/r_max of the affine tail is
    added, without it the value converges to ``a`` from below at rate
    1/r_max.
    """
    segs = [0.0] + [b for b in sol.potential.breakpoints() if b < sol.r_max] + [sol.r_max]
    pieces = []
    for lo, hi in zip(segs[:-1], segs[1:]):
        n = max(512, 2 * int(64 * (hi - lo) / max(sol.potential.support_radius, 1e-6)))
        n += n % 2
        r, w = _simpson_rule(lo, hi, n)
        u = sol.dense.u(r)
        up = sol.dense.u_prime(r)
        with np.errstate(divide="ignore", invalid="ignore"):
            defect = up - u / r
        defect[r == 0.0] = 0.0  # u ~ u'(0) r near the origin, the defect vanishes
        v_seg = _segment_potential(sol.potential, lo, hi)
        integrand = defect * defect + 0.5 * v_seg(r) * u * u
        pieces.append(float(w @ integrand))
    value = math.fsum(pieces)
    if include_tail:
        value += sol.a * sol.a / sol.r_max
    return value


# ---------------------------------------------------------------------------
# truncated-ball eigenproblem
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class NeumannSolution:
    """Ground state of the truncated-ball problem, normalized to u(R) = R."""

    R: float
    lam: float
    grid: np.ndarray
    u: np.ndarray
    potential: RadialPotential
    boundary_residual: float
    dense: _PiecewiseSolution = field(repr=False)

    def f(self, r):
        r = np.atleast_1d(np.asarray(r, dtype=float))
        out = np.empty_like(r)
        small = r < 1e-12 * self.R
        out[~small] = self.dense.u(r[~small]) / r[~small]
        if small.any():
            out[small] = self.dense.u_prime(np.zeros(small.sum()))
        return out


def _interior_nodes(dense: _PiecewiseSolution, R: float, lam: float) -> int:
    n = max(2001, int(20.0 * math.sqrt(max(lam, 1e-30)) * R / math.pi) | 1)
    r = np.linspace(R * 1e-6, R, n)
    sign = np.sign(dense.u(r))
    sign = sign[sign != 0]
    return int(np.count_nonzero(sign[1:] != sign[:-1]))


def solve_neumann(
    potential: RadialPotential, R: float, tol: float = 1e-10
) -> NeumannSolution:
    """Shoot for the smallest eigenvalue of the truncated-ball problem.

    For each trial lambda the radial equation is integrated outward and the
    boundary defect g(lambda) = u'(R) - u(R)/R is evaluated.  Below the
    ground eigenvalue g > 0 and u has no interior zero; above it either
    g < 0 or a node has entered.  That predicate is monotone, so bisection
    on the bracket [0, pi^2/R^2 + max(V)/2] converges to the ground
    eigenvalue; bracket failure is reported, never silent.
    """
    if R <= potential.support_radius:
        raise SolverError("ball radius must exceed the potential support")
    if potential.is_zero:
        grid = np.linspace(0.0, R, 2001)
        dense = _integrate_radial(potential, R, lam=0.0, tol=tol)
        return NeumannSolution(
            R=R, lam=0.0, grid=grid, u=grid.copy(), potential=potential,
            boundary_residual=0.0, dense=dense,
        )

    def boundary_defect(dense: _PiecewiseSolution) -> float:
        return float(dense.u_prime(R)[0] - dense.u(R)[0] / R)

    def above_ground(lam: float) -> bool:
        dense = _integrate_radial(potential, R, lam, tol)
        return boundary_defect(dense) < 0.0 or _interior_nodes(dense, R, lam) > 0

    lo, hi = 0.0, math.pi**2 / (R * R) + 0.5 * potential.max_value
    if above_ground(lo):
        raise BracketFailure("boundary defect not positive at lambda = 0")
    if not above_ground(hi):
        raise BracketFailure("no eigenvalue below pi^2/R^2 + max(V)/2")
    for _ in range(80):
        mid = 0.5 * (lo + hi)
        if mid == lo or mid == hi:
            break
        if above_ground(mid):
            hi = mid
        else:
            lo = mid
    lam = 0.5 * (lo + hi)

    dense = _integrate_radial(potential, R, lam, tol)
    residual = float(dense.u_prime(R)[0] - dense.u(R)[0] / R)
    if abs(residual) > 1e-5 * max(1.0, abs(dense.u(R)[0]) / R):
        raise BracketFailure(f"shooting residual {residual:.3e} did not close")
    if _interior_nodes(dense, R, lam) > 0:
        raise BracketFailure("converged to an excited state (interior node present)")
    dense = dense.rescaled(R / float(dense.u(R)[0]))
    grid = np.linspace(0.0, R, 2001)
    return NeumannSolution(
        R=R, lam=lam, grid=grid, u=dense.u(grid), potential=potential,
        boundary_residual=residual, dense=dense,
    )


# ---------------------------------------------------------------------------
# radial Fourier transforms
# ---------------------------------------------------------------------------

def _simpson_rule(lo: float, hi: float, n_intervals: int):
    r = np.linspace(lo, hi, n_intervals + 1)
    w = np.ones(n_intervals + 1)
    w[1:-1:2] = 4.0
    w[2:-1:2] = 2.0
    w *= (hi - lo) / n_intervals / 3.0
    return r, w


class _RadialTransform:
    """Sine transform (4 pi / k) * int G(r) sin(k r) dr with an error estimate.

    The profile G is sampled once on composite Simpson grids split at the
    given breakpoints; each evaluation also returns the difference against
    the half-resolution rule, which bounds the quadrature error.
    """

    def __init__(self, profile: Callable, lo: float, hi: float,
                 inner_breaks: Iterable[float], points_per_unit: float):
        cuts = [lo] + sorted(b for b in inner_breaks if lo < b < hi) + [hi]
        self._pieces = []
        for a, b in zip(cuts[:-1], cuts[1:]):
            n = max(64, int((b - a) * points_per_unit))
            n += (-n) % 4  # divisible by 4 so the coarse rule is Simpson too
            r, w = _simpson_rule(a, b, n)
            rc, wc = _simpson_rule(a, b, n // 2)
            g = np.asarray(profile(r), dtype=float)
            self._pieces.append((r, w, g, wc, g[::2]))
        self.h = max((p[0][1] - p[0][0]) for p in self._pieces)

    def moments(self, powers: Sequence[int]) -> list[float]:
        out = []
        for q in powers:
            out.append(math.fsum(float(w @ (g * r**q)) for r, w, g, _, _ in self._pieces))
        return out

    def __call__(self, k: float, r_span: float) -> tuple[float, float]:
        if k * r_span < 1e-3:
            m1, m3, m5 = self.moments([1, 3, 5])
            value = _FOUR_PI * (m1 - k * k * m3 / 6.0 + k**4 * m5 / 120.0)
            return value, abs(_FOUR_PI * k**6 * self.moments([7])[0] / 5040.0)
        if k * self.h > 0.6:
            raise QuadratureError(
                f"wave number {k:g} beyond quadrature resolution (h = {self.h:g})"
            )
        fine = 0.0
        coarse = 0.0
        for r, w, g, wc, gc in self._pieces:
            fine += float(w @ (g * np.sin(k * r)))
            coarse += float(wc @ (gc * np.sin(k * r[::2])))
        value = _FOUR_PI / k * fine
        return value, abs(_FOUR_PI / k * (fine - coarse))


def _ball_w_transform(neumann: NeumannSolution, points_per_unit: float = 4000.0):
    """Transform of w = 1 - f on the ball; the profile r*w equals r - u."""
    return _RadialTransform(
        lambda r: r - neumann.dense.u(r),
        0.0,
        neumann.R,
        neumann.potential.breakpoints(),
        points_per_unit,
    )


def _ball_u_transform(neumann: NeumannSolution, points_per_unit: float = 4000.0):
    """Transform of f restricted to the ball; the profile r*f equals u."""
    return _RadialTransform(
        lambda r: neumann.dense.u(r),
        0.0,
        neumann.R,
        neumann.potential.breakpoints(),
        points_per_unit,
    )


def _vf_transform(neumann: NeumannSolution, points_per_unit: float = 40000.0):
    """Transform of V*f on the support; the profile r*V*f equals V*u."""
    support = neumann.potential.support_radius
    inner = [b for b in neumann.potential.breakpoints() if b < support]
    return _RadialTransform(
        lambda r: neumann.potential(r) * neumann.dense.u(r),
        0.0,
        support,
        inner,
        points_per_unit,
    )


def potential_fourier(potential: RadialPotential, points_per_unit: float = 40000.0):
    """Radial Fourier transform of the bare potential as a callable of k >= 0."""
    support = potential.support_radius
    inner = [b for b in potential.breakpoints() if b < support]
    transform = _RadialTransform(
        lambda r: r * np.asarray(potential(r), dtype=float),
        0.0, support, inner, points_per_unit,
    )

    def v_hat(k: float) -> float:
        return transform(abs(k), support)[0]

    return v_hat


# ---------------------------------------------------------------------------
# correlation kernels
# ---------------------------------------------------------------------------

def _unique_shells(modes: Sequence[Mode]) -> tuple[np.ndarray, np.ndarray]:
    """Sorted unique p_sq values and the index of each mode's shell."""
    p_sq = np.array([m.p_sq for m in modes])
    uniq, inverse = np.unique(p_sq, return_inverse=True)
    return uniq, inverse


def eta_coefficients(
    neumann: NeumannSolution, N: int, modes: Sequence[Mode]
) -> np.ndarray:
    """Pair-correlation kernel eta_p = -w_hat(|p|/N)/N^2, equal on every shell.

    w = 1 - f is the ball solution's defect from 1, extended by zero; its
    radial transform is evaluated by quadrature on the solver grid, with
    the small-k series branch below |k| r_max < 1e-3.
    """
    transform = _ball_w_transform(neumann)
    uniq, inverse = _unique_shells(modes)
    values = np.empty(len(uniq))
    for i, p_sq in enumerate(uniq):
        k = math.sqrt(p_sq) / N
        values[i] = -transform(k, neumann.R)[0] / (N * N)
    return values[inverse]


def tau_coefficients(
    eta: np.ndarray,
    neumann: NeumannSolution,
    N: int,
    modes: Sequence[Mode],
) -> np.ndarray:
    """Residual kernel tau_p = -log(1 + 2 (Vf)_hat(|p|/N)/|p|^2)/4 - eta_p."""
    transform = _vf_transform(neumann)
    uniq, inverse = _unique_shells(modes)
    log_part = np.empty(len(uniq))
    for i, p_sq in enumerate(uniq):
        k = math.sqrt(p_sq) / N
        vf = transform(k, neumann.potential.support_radius)[0]
        arg = 2.0 * vf / p_sq
        if 1.0 + arg <= 0.0:
            raise KernelError(
                f"log argument {1.0 + arg:g} <= 0 at p_sq = {p_sq:g}; quadrature failure"
            )
        log_part[i] = -0.25 * math.log1p(arg)
    return log_part[inverse] - np.asarray(eta, dtype=float)


def nu_coefficients(a: float, modes: Sequence[Mode]) -> np.ndarray:
    """Limit kernel nu_p = -log(1 + 16 pi a/|p|^2)/4 <= 0."""
    if a < 0:
        raise ValueError("scattering length must be non-negative")
    uniq, inverse = _unique_shells(modes)
    values = np.array([nu_coefficient(p_sq, a) for p_sq in uniq])
    return values[inverse]


def kernel_identity_residuals(
    neumann: NeumannSolution, N: int, modes: Sequence[Mode]
) -> tuple[np.ndarray, np.ndarray]:
    """Residual of |p|^2 eta_p + (Vf)_hat/2 - lambda (chi f)_hat per mode.

    Both sides are evaluated by independent quadratures; the second return
    value is the accumulated quadrature tolerance against which the
    residual should be judged.
    """
    w_tr = _ball_w_transform(neumann)
    u_tr = _ball_u_transform(neumann)
    vf_tr = _vf_transform(neumann)
    uniq, inverse = _unique_shells(modes)
    res = np.empty(len(uniq))
    tol = np.empty(len(uniq))
    for i, p_sq in enumerate(uniq):
        k = math.sqrt(p_sq) / N
        w_hat, w_err = w_tr(k, neumann.R)
        vf_hat, vf_err = vf_tr(k, neumann.potential.support_radius)
        chif_hat, chif_err = u_tr(k, neumann.R)
        res[i] = -k * k * w_hat + 0.5 * vf_hat - neumann.lam * chif_hat
        tol[i] = 10.0 * (k * k * w_err + 0.5 * vf_err + neumann.lam * chif_err)
        tol[i] += 1e-9 * abs(0.5 * vf_hat)
    return res[inverse], tol[inverse]


@dataclass(frozen=True)
class KernelTable:
    """Per-mode kernel values together with the transform they came from."""

    N: int
    modes: tuple[Mode, ...]
    eta: np.ndarray
    tau: np.ndarray
    nu: np.ndarray
    w_check_hat: Callable = field(repr=False)

    def shell_rows(self) -> list[tuple[int, float, float, float, float]]:
        """One (norm_sq, |p|, eta, tau, nu) row per shell, ascending."""
        seen: dict[int, tuple] = {}
        for i, mode in enumerate(self.modes):
            key = mode.norm_sq
            if key not in seen:
                p_abs = math.sqrt(mode.p_sq)
                seen[key] = (key, p_abs, float(self.eta[i]), float(self.tau[i]), float(self.nu[i]))
        return [seen[k] for k in sorted(seen)]

    def to_csv(self, comments: Sequence[str] = ()) -> str:
        lines = [f"# {c}" for c in comments]
        lines.append("norm_sq,p_abs,eta,tau,nu")
        for norm_sq, p_abs, eta, tau, nu in self.shell_rows():
            lines.append(f"{norm_sq},{p_abs!r},{eta!r},{tau!r},{nu!r}")
        return "\n".join(lines) + "\n"


def kernel_table(
    potential: RadialPotential,
    N: int,
    ell: float,
    modes: Sequence[Mode],
    tol: float = 1e-10,
    scattering_r_max: float | None = None,
    scattering: ScatteringSolution | None = None,
    neumann: NeumannSolution | None = None,
) -> KernelTable:
    """Solve both radial problems and assemble eta, tau, nu on the given modes.

    ``ell`` is the ball-radius parameter (ball radius N*ell); it must keep
    the ball inside the unit cell, ell < 1/2.  Precomputed solutions may be
    passed to avoid repeating the solves.
    """
    if not (0.0 < ell < 0.5):
        raise ValueError("ell must lie in (0, 1/2) so the ball fits the torus")
    r_max = scattering_r_max or max(20.0 * potential.support_radius, 10.0)
    scat = scattering or solve_scattering(potential, r_max=r_max, tol=tol)
    if neumann is None:
        neumann = solve_neumann(potential, R=N * ell, tol=tol)
    if abs(neumann.R - N * ell) > 1e-9 * max(1.0, N * ell):
        raise ValueError("precomputed ball solution has the wrong radius")
    eta = eta_coefficients(neumann, N, modes)
    tau = tau_coefficients(eta, neumann, N, modes)
    nu = nu_coefficients(scat.a, modes)
    transform = _ball_w_transform(neumann)
    return KernelTable(
        N=N,
        modes=tuple(modes),
        eta=eta,
        tau=tau,
        nu=nu,
        w_check_hat=lambda k: transform(abs(k), neumann.R)[0],
    )
