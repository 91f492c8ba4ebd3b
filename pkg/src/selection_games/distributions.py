"""Laws on [0, 1] and the expectation queries the equilibrium recursions need.

A ``ValueDistribution`` is a finite list of atoms plus a piecewise-polynomial
density.  Everything downstream (prophet values, stage games, equilibrium
recursions, efficiency ratios) asks this module for expectations, so the
queries here are computed exactly wherever the integrand is polynomial
against the density, and by adaptive composite Simpson quadrature otherwise.

Conventions fixed once and used everywhere:

* The CDF is right-continuous; ``cdf(x)`` includes the mass of an atom at
  ``x``.
* An oriented integral over ``[lo, hi]`` against the law excludes an atom
  sitting exactly at ``lo`` and includes one at ``hi``
  (see :meth:`ValueDistribution.partial_expectation`).
* Distributions are immutable after construction; all queries are pure.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from functools import cached_property
from typing import Callable, Iterable, Sequence

import numpy as np

from .errors import IntegrationError, SpecValidationError

MASS_TOL = 1e-12

_LEGENDRE_CACHE: dict[int, tuple[np.ndarray, np.ndarray]] = {}


def _leggauss(m: int) -> tuple[np.ndarray, np.ndarray]:
    if m not in _LEGENDRE_CACHE:
        _LEGENDRE_CACHE[m] = np.polynomial.legendre.leggauss(m)
    return _LEGENDRE_CACHE[m]


def _gauss_on(lo: float, hi: float, f: Callable[[np.ndarray], np.ndarray], m: int) -> float:
    """Gauss-Legendre quadrature of f on [lo, hi]; exact for poly degree <= 2m-1."""
    if hi <= lo:
        return 0.0
    xs, ws = _leggauss(m)
    mid, half = (lo + hi) / 2.0, (hi - lo) / 2.0
    return float(half * np.dot(ws, f(mid + half * xs)))


def adaptive_simpson(
    f: Callable[[float], float],
    lo: float,
    hi: float,
    tol: float = 1e-10,
    max_depth: int = 40,
) -> float:
    """Adaptive composite Simpson rule with absolute tolerance ``tol``.

    Raises :class:`IntegrationError` on a non-finite integrand evaluation.
    """
    if hi <= lo:
        return 0.0

    def ev(x: float) -> float:
        y = f(x)
        if not math.isfinite(y):
            raise IntegrationError(f"non-finite integrand value at x={x!r}")
        return y

    def simpson(a: float, fa: float, fm: float, fb: float, b: float) -> float:
        return (b - a) / 6.0 * (fa + 4.0 * fm + fb)

    def recurse(a, fa, fm, fb, b, whole, eps, depth):
        m = (a + b) / 2.0
        lm, rm = (a + m) / 2.0, (m + b) / 2.0
        flm, frm = ev(lm), ev(rm)
        left = simpson(a, fa, flm, fm, m)
        right = simpson(m, fm, frm, fb, b)
        delta = left + right - whole
        if depth <= 0:
            raise IntegrationError("adaptive Simpson depth exhausted")
        if abs(delta) <= 15.0 * eps:
            return left + right + delta / 15.0
        return recurse(a, fa, flm, fm, m, left, eps / 2.0, depth - 1) + recurse(
            m, fm, frm, fb, b, right, eps / 2.0, depth - 1
        )

    fa, fb = ev(lo), ev(hi)
    fm = ev((lo + hi) / 2.0)
    whole = simpson(lo, fa, fm, fb, hi)
    return recurse(lo, fa, fm, fb, hi, whole, tol, max_depth)


def _poly_eval(coeffs: Sequence[float], x: np.ndarray | float):
    """Evaluate an ascending-coefficient polynomial."""
    acc = 0.0
    for c in reversed(coeffs):
        acc = acc * x + c
    return acc


def _poly_antideriv(coeffs: Sequence[float]) -> tuple[float, ...]:
    return (0.0,) + tuple(c / (k + 1) for k, c in enumerate(coeffs))


@dataclass(frozen=True)
class DensityPiece:
    lo: float
    hi: float
    coeffs: tuple[float, ...]

    def __call__(self, x):
        return _poly_eval(self.coeffs, x)

    @property
    def mass(self) -> float:
        anti = _poly_antideriv(self.coeffs)
        return _poly_eval(anti, self.hi) - _poly_eval(anti, self.lo)


@dataclass(frozen=True)
class _CdfSegment:
    """CDF restricted to [lo, hi): a polynomial (constant where no density)."""

    lo: float
    hi: float
    coeffs: tuple[float, ...]

    def __call__(self, x):
        return _poly_eval(self.coeffs, x)


@dataclass(frozen=True)
class ValueDistribution:
    """A law on [0, 1]: atoms plus a piecewise-polynomial density.

    ``atoms``
        tuple of ``(value, mass)`` pairs, sorted by value, values distinct,
        masses in (0, 1].
    ``pieces``
        tuple of :class:`DensityPiece`, disjoint and sorted; polynomial
        coefficients are in ascending order.

    Total mass must be 1 within ``MASS_TOL``.
    """

    atoms: tuple[tuple[float, float], ...] = ()
    pieces: tuple[DensityPiece, ...] = ()

    def __post_init__(self) -> None:
        prev = -1.0
        for x, m in self.atoms:
            if not (0.0 <= x <= 1.0):
                raise SpecValidationError(f"atom value {x!r} outside [0, 1]")
            if not (0.0 < m <= 1.0):
                raise SpecValidationError(f"atom mass {m!r} outside (0, 1]")
            if x <= prev:
                raise SpecValidationError("atom values must be distinct and sorted")
            prev = x
        prev = 0.0
        for p in self.pieces:
            if not (0.0 <= p.lo < p.hi <= 1.0):
                raise SpecValidationError(f"density piece [{p.lo}, {p.hi}] invalid")
            if p.lo < prev:
                raise SpecValidationError("density pieces must be disjoint and sorted")
            grid = np.linspace(p.lo, p.hi, 65)
            if np.min(p(grid)) < -1e-9:
                raise SpecValidationError("density piece is negative")
            prev = p.hi
        total = sum(m for _, m in self.atoms) + sum(p.mass for p in self.pieces)
        if abs(total - 1.0) > MASS_TOL:
            raise SpecValidationError(f"total mass {total!r} != 1")

    # -- structure ---------------------------------------------------------

    def is_continuous(self) -> bool:
        return not self.atoms

    @cached_property
    def _segments(self) -> tuple[_CdfSegment, ...]:
        """CDF as polynomials on the partition induced by atoms and pieces."""
        cuts = {0.0, 1.0}
        cuts.update(x for x, _ in self.atoms)
        for p in self.pieces:
            cuts.add(p.lo)
            cuts.add(p.hi)
        pts = sorted(cuts)
        segments: list[_CdfSegment] = []
        acc = sum(m for x, m in self.atoms if x == 0.0)
        for u, v in zip(pts[:-1], pts[1:]):
            coeffs: tuple[float, ...] = (acc,)
            for p in self.pieces:
                if p.lo <= u and v <= p.hi:
                    anti = _poly_antideriv(p.coeffs)
                    shifted = list(anti)
                    # pin the constant so the segment equals acc at its left end
                    shifted[0] += acc - _poly_eval(anti, u)
                    coeffs = tuple(shifted)
                    break
            segments.append(_CdfSegment(u, v, coeffs))
            # advance the accumulated mass to v (density over [u, v] + atom at v)
            acc = float(_poly_eval(coeffs, v))
            acc += sum(m for x, m in self.atoms if x == v)
        return tuple(segments)

    @cached_property
    def _seg_lows(self) -> np.ndarray:
        return np.array([s.lo for s in self._segments])

    # -- basic queries ------------------------------------------------------

    def cdf(self, x) -> float | np.ndarray:
        """Right-continuous CDF, clamped outside [0, 1]."""
        scalar = np.isscalar(x) or np.asarray(x).ndim == 0
        xs = np.atleast_1d(np.asarray(x, dtype=float))
        shape = xs.shape
        xs = xs.ravel()
        out = np.empty_like(xs)
        idx = np.searchsorted(self._seg_lows, xs, side="right") - 1
        idx = np.clip(idx, 0, len(self._segments) - 1)
        for k, seg in enumerate(self._segments):
            mask = idx == k
            if np.any(mask):
                out[mask] = seg(xs[mask])
        out = np.where(xs >= 1.0, 1.0, out)
        out = np.where(xs < 0.0, 0.0, out)
        out = np.clip(out, 0.0, 1.0)
        if scalar:
            return float(out[0])
        return out.reshape(shape)

    def mean(self) -> float:
        return float(sum(x * w for x, w in self.atoms) + self.density_moment(0.0, 1.0, 1))

    def density_moment(self, lo: float, hi: float, degree: int) -> float:
        """Exact integral of x^degree * density over [lo, hi] (atoms excluded)."""
        total = 0.0
        for p in self.pieces:
            a, b = max(lo, p.lo), min(hi, p.hi)
            if b <= a:
                continue
            shifted = tuple(0.0 for _ in range(degree)) + tuple(p.coeffs)
            anti = _poly_antideriv(shifted)
            total += _poly_eval(anti, b) - _poly_eval(anti, a)
        return float(total)

    def atom_sum(self, lo: float, hi: float, g: Callable[[float], float]) -> float:
        """Sum of mass * g(x) over atoms in the half-open interval (lo, hi]."""
        return float(sum(m * g(x) for x, m in self.atoms if lo < x <= hi))

    # -- integral kernels ----------------------------------------------------

    def partial_expectation(
        self,
        lo: float,
        hi: float,
        g: Callable[[float], float],
        tol: float = 1e-10,
        max_depth: int = 40,
    ) -> float:
        """Integral of g against the law over (lo, hi] (atom convention:
        exclude at ``lo``, include at ``hi``); adaptive Simpson on density
        pieces."""
        if not (0.0 <= lo <= hi <= 1.0):
            raise SpecValidationError("partial_expectation requires 0 <= lo <= hi <= 1")
        total = self.atom_sum(lo, hi, g)
        for p in self.pieces:
            a, b = max(lo, p.lo), min(hi, p.hi)
            if b <= a:
                continue
            total += adaptive_simpson(lambda x: g(x) * float(p(x)), a, b, tol, max_depth)
        return float(total)

    def integral_cdf(self, lo: float, hi: float) -> float:
        """Exact integral of the CDF over [lo, hi] (Lebesgue, in x)."""
        total = 0.0
        for seg in self._segments:
            a, b = max(lo, seg.lo), min(hi, seg.hi)
            if b <= a:
                continue
            anti = _poly_antideriv(seg.coeffs)
            total += _poly_eval(anti, b) - _poly_eval(anti, a)
        if hi > 1.0:
            total += hi - max(lo, 1.0)
        return float(total)

    def _survival_power_integral(self, lo: float, n: int) -> float:
        """Exact integral of 1 - F(x)^n over [lo, 1]."""
        lo = min(max(lo, 0.0), 1.0)
        total = 0.0
        for seg in self._segments:
            a, b = max(lo, seg.lo), min(1.0, seg.hi)
            if b <= a:
                continue
            deg = (len(seg.coeffs) - 1) * n
            m = max(4, deg // 2 + 2)
            total += _gauss_on(a, b, lambda x: 1.0 - np.clip(seg(x), 0.0, 1.0) ** n, m)
        return float(total)

    def expect_max_with(self, k: float) -> float:
        """E(X v k) for k in [0, 1], computed as k + integral_k^1 (1 - F)."""
        k = min(max(k, 0.0), 1.0)
        return float(k + self._survival_power_integral(k, 1))

    def expect_order_max_with(self, n: int, k: float) -> float:
        """E(max(X_1..X_n) v k) = k + integral_k^1 (1 - F^n)."""
        if n < 1:
            raise SpecValidationError("order statistic index n must be >= 1")
        k = min(max(k, 0.0), 1.0)
        return float(k + self._survival_power_integral(k, n))

    def order_max_with_vec(self, n: int, ks: np.ndarray) -> np.ndarray:
        """Vectorized :meth:`expect_order_max_with` over an array of floors."""
        ks = np.clip(np.asarray(ks, dtype=float), 0.0, 1.0)
        # suffix integrals of (1 - F^n) at segment boundaries
        segs = self._segments
        suffix = np.zeros(len(segs) + 1)
        for i in range(len(segs) - 1, -1, -1):
            seg = segs[i]
            deg = (len(seg.coeffs) - 1) * n
            m = max(4, deg // 2 + 2)
            part = _gauss_on(seg.lo, min(seg.hi, 1.0), lambda x: 1.0 - np.clip(seg(x), 0.0, 1.0) ** n, m)
            suffix[i] = suffix[i + 1] + part
        idx = np.clip(np.searchsorted(self._seg_lows, ks, side="right") - 1, 0, len(segs) - 1)
        out = np.empty_like(ks)
        xs, ws = _leggauss(32)
        for i, seg in enumerate(segs):
            mask = idx == i
            if not np.any(mask):
                continue
            k = ks[mask]
            b = min(seg.hi, 1.0)
            mid = (k + b) / 2.0
            half = (b - k) / 2.0
            nodes = mid[:, None] + half[:, None] * xs[None, :]
            vals = 1.0 - np.clip(_poly_eval(seg.coeffs, nodes), 0.0, 1.0) ** n
            out[mask] = suffix[i + 1] + half * (vals @ ws)
        return ks + np.where(ks >= 1.0, 0.0, out)

    def top_two_expectation(self, n: int) -> float:
        """E(first order statistic + second order statistic) of n samples."""
        if n < 2:
            raise SpecValidationError("top_two_expectation requires n >= 2")

        def tail(x, seg):
            F = np.clip(seg(x), 0.0, 1.0)
            # P(max > x) + P(second-best > x)
            return (1.0 - F**n) + (1.0 - F**n - n * F ** (n - 1) * (1.0 - F))

        total = 0.0
        for seg in self._segments:
            b = min(seg.hi, 1.0)
            if b <= seg.lo:
                continue
            deg = (len(seg.coeffs) - 1) * n
            m = max(4, deg // 2 + 2)
            total += _gauss_on(seg.lo, b, lambda x: tail(x, seg), m)
        return float(total)

    # -- sampling -------------------------------------------------------------

    def sample(self, rng: np.random.Generator, size: int | None = None) -> float | np.ndarray:
        """i.i.d. draws; deterministic given the generator state."""
        scalar = size is None
        count = 1 if scalar else int(size)
        u = rng.random(count)
        out = np.empty(count)
        # component table: atoms first, then pieces, in order
        weights = [m for _, m in self.atoms] + [p.mass for p in self.pieces]
        edges = np.concatenate([[0.0], np.cumsum(weights)])
        edges[-1] = 1.0
        comp = np.clip(np.searchsorted(edges, u, side="right") - 1, 0, len(weights) - 1)
        for i, (x, _) in enumerate(self.atoms):
            out[comp == i] = x
        base = len(self.atoms)
        for j, p in enumerate(self.pieces):
            mask = comp == base + j
            if not np.any(mask):
                continue
            target = (u[mask] - edges[base + j]) / (edges[base + j + 1] - edges[base + j])
            if len(p.coeffs) == 1:
                # constant density: invert in closed form
                out[mask] = p.lo + target * (p.hi - p.lo)
                continue
            # invert the within-piece CDF by bisection
            anti = _poly_antideriv(p.coeffs)
            lo_val = _poly_eval(anti, p.lo)
            mass = p.mass
            lo = np.full(target.shape, p.lo)
            hi = np.full(target.shape, p.hi)
            for _ in range(50):
                mid = (lo + hi) / 2.0
                cm = (_poly_eval(anti, mid) - lo_val) / mass
                takes = cm < target
                lo = np.where(takes, mid, lo)
                hi = np.where(takes, hi, mid)
            out[mask] = (lo + hi) / 2.0
        if scalar:
            return float(out[0])
        return out

    # -- identity ---------------------------------------------------------------

    def cache_key(self) -> tuple:
        return (self.atoms, tuple((p.lo, p.hi, p.coeffs) for p in self.pieces))


# -- constructors ----------------------------------------------------------------


def uniform() -> ValueDistribution:
    return ValueDistribution(pieces=(DensityPiece(0.0, 1.0, (1.0,)),))


def discrete(atoms: Iterable[tuple[float, float]]) -> ValueDistribution:
    pairs = tuple(sorted((float(x), float(m)) for x, m in atoms))
    return ValueDistribution(atoms=pairs)


def point_mass(v: float) -> ValueDistribution:
    return discrete([(v, 1.0)])


def two_point(lo: float = 1.0 / 3.0, hi: float = 2.0 / 3.0, p_lo: float = 0.5) -> ValueDistribution:
    return discrete([(lo, p_lo), (hi, 1.0 - p_lo)])


def mixture_with_uniform(eta: float, base: ValueDistribution) -> ValueDistribution:
    """(1 - eta) * base + eta * Uniform[0, 1]."""
    if not (0.0 < eta < 1.0):
        raise SpecValidationError("mixture weight eta must be in (0, 1)")
    atoms = tuple((x, (1.0 - eta) * m) for x, m in base.atoms)
    pieces = [DensityPiece(p.lo, p.hi, tuple((1.0 - eta) * c for c in p.coeffs)) for p in base.pieces]
    merged = _merge_uniform(pieces, eta)
    return ValueDistribution(atoms=atoms, pieces=tuple(merged))


def _merge_uniform(pieces: list[DensityPiece], eta: float) -> list[DensityPiece]:
    """Add a constant density eta on [0, 1] to existing pieces."""
    cuts = {0.0, 1.0}
    for p in pieces:
        cuts.add(p.lo)
        cuts.add(p.hi)
    pts = sorted(cuts)
    out = []
    for u, v in zip(pts[:-1], pts[1:]):
        coeffs = [eta]
        for p in pieces:
            if p.lo <= u and v <= p.hi:
                cs = list(p.coeffs)
                cs[0] += eta
                coeffs = cs
                break
        out.append(DensityPiece(u, v, tuple(coeffs)))
    return out


def piecewise_poly(pieces: Iterable[tuple[float, float, Sequence[float]]]) -> ValueDistribution:
    return ValueDistribution(
        pieces=tuple(DensityPiece(float(lo), float(hi), tuple(float(c) for c in cs)) for lo, hi, cs in pieces)
    )


# -- external spec representation --------------------------------------------------


def parse_spec(spec: dict | str) -> ValueDistribution:
    """Parse the JSON distribution spec.

    Accepted forms::

        {"type": "uniform"}
        {"type": "discrete", "atoms": [{"x": 0.5, "p": 1.0}, ...]}
        {"type": "mixture", "eta": 0.01, "discrete": {...}}
        {"type": "piecewise_poly", "pieces": [{"lo": 0, "hi": 1, "coeffs": [1.0]}]}
    """
    if isinstance(spec, str):
        try:
            spec = json.loads(spec)
        except json.JSONDecodeError as exc:
            raise SpecValidationError(f"distribution spec is not valid JSON: {exc}") from exc
    if not isinstance(spec, dict):
        raise SpecValidationError("distribution spec must be a JSON object")
    kind = spec.get("type")
    if kind == "uniform":
        return uniform()
    if kind == "discrete":
        atoms = spec.get("atoms")
        if not isinstance(atoms, list) or not atoms:
            raise SpecValidationError("field 'atoms' must be a non-empty list")
        try:
            return discrete([(a["x"], a["p"]) for a in atoms])
        except (KeyError, TypeError) as exc:
            raise SpecValidationError("each atom needs fields 'x' and 'p'") from exc
    if kind == "mixture":
        if "eta" not in spec or "discrete" not in spec:
            raise SpecValidationError("mixture spec needs fields 'eta' and 'discrete'")
        base = parse_spec(dict(spec["discrete"], type="discrete"))
        return mixture_with_uniform(float(spec["eta"]), base)
    if kind == "piecewise_poly":
        pieces = spec.get("pieces")
        if not isinstance(pieces, list) or not pieces:
            raise SpecValidationError("field 'pieces' must be a non-empty list")
        try:
            return piecewise_poly([(p["lo"], p["hi"], p["coeffs"]) for p in pieces])
        except (KeyError, TypeError) as exc:
            raise SpecValidationError("each piece needs fields 'lo', 'hi', 'coeffs'") from exc
    if kind == "mixture_general":
        # free-form atoms + pieces, as produced by spec_dict for mixed laws
        try:
            atoms = tuple((float(a["x"]), float(a["p"])) for a in spec.get("atoms", []))
            pieces = tuple(
                DensityPiece(float(p["lo"]), float(p["hi"]), tuple(float(c) for c in p["coeffs"]))
                for p in spec.get("pieces", [])
            )
        except (KeyError, TypeError) as exc:
            raise SpecValidationError("malformed 'atoms'/'pieces' in mixture_general") from exc
        return ValueDistribution(atoms=atoms, pieces=pieces)
    raise SpecValidationError(f"unknown distribution type {kind!r}")


def spec_dict(d: ValueDistribution) -> dict:
    """Serialize back to the JSON spec form (always piecewise-general)."""
    if not d.pieces:
        return {"type": "discrete", "atoms": [{"x": x, "p": m} for x, m in d.atoms]}
    if not d.atoms:
        if len(d.pieces) == 1 and d.pieces[0].coeffs == (1.0,):
            return {"type": "uniform"}
        return {
            "type": "piecewise_poly",
            "pieces": [{"lo": p.lo, "hi": p.hi, "coeffs": list(p.coeffs)} for p in d.pieces],
        }
    return {
        "type": "mixture_general",
        "atoms": [{"x": x, "p": m} for x, m in d.atoms],
        "pieces": [{"lo": p.lo, "hi": p.hi, "coeffs": list(p.coeffs)} for p in d.pieces],
    }
