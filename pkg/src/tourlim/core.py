"""Core types and conversions for tournaments, step kernels and score data.

Vertices, blocks and cells are 0-indexed throughout.  A step kernel on n
blocks is stored as the n x n matrix of its values on the uniform grid of
squares; a score function on m cells is stored as the vector of its cell
means on the intervals ((i)/m, (i+1)/m].  All objects are immutable after
construction (their arrays are frozen) and every operation in this package
is a pure function of its inputs, so shared instances are safe to use from
concurrent code.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from typing import Literal

import numpy as np

TOL = 1e-12
"""Comparison tolerance for float-stored structural invariants."""


class ValidationError(ValueError):
    """An input violates a structural contract or fails a required check.

    When the rejection came from one of the checkers in
    :mod:`tourlim.conditions`, the offending report is attached.
    """

    def __init__(self, message: str, report=None):
        super().__init__(message)
        self.report = report


def _freeze(a: np.ndarray) -> np.ndarray:
    a.setflags(write=False)
    return a


def _float_array(x, name: str, ndim: int) -> np.ndarray:
    try:
        a = np.array(x, dtype=float)
    except (TypeError, ValueError) as exc:
        raise ValidationError(f"field '{name}' must be numeric") from exc
    if a.ndim != ndim:
        raise ValidationError(f"field '{name}' must be {ndim}-dimensional")
    if a.size == 0:
        raise ValidationError(f"field '{name}' must be non-empty")
    if not np.all(np.isfinite(a)):
        raise ValidationError(f"field '{name}' contains non-finite entries")
    return a


def _clip_unit(a: np.ndarray, name: str) -> np.ndarray:
    # tolerate rounding-level excursions, reject anything larger
    if np.any(a < -TOL) or np.any(a > 1 + TOL):
        raise ValidationError(f"field '{name}' has entries outside [0, 1]")
    return np.clip(a, 0.0, 1.0)


# ---------------------------------------------------------------------------
# domain types


@dataclass(frozen=True, eq=False)
class ScoreSequence:
    """Per-vertex out-scores of a finite (generalised) tournament.

    ``kind`` is "integer" for ordinary tournaments (values stored as int64)
    and "real" for generalised ones.  Values must be non-negative; whether
    they are actually realizable is the business of the Landau checker, not
    of construction.
    """

    values: np.ndarray
    kind: Literal["integer", "real"] = "real"

    def __post_init__(self):
        if self.kind not in ("integer", "real"):
            raise ValidationError("field 'kind' must be 'integer' or 'real'")
        v = _float_array(self.values, "values", ndim=1)
        if np.any(v < -TOL):
            raise ValidationError("field 'values' has negative entries")
        v = np.maximum(v, 0.0)
        if self.kind == "integer":
            if not np.all(v == np.round(v)):
                raise ValidationError(
                    "field 'values' must be integral for kind='integer'"
                )
            v = v.astype(np.int64)
        object.__setattr__(self, "values", _freeze(v))

    @property
    def n(self) -> int:
        return len(self.values)

    def to_json_dict(self) -> dict:
        return {"values": [v.item() for v in self.values], "kind": self.kind}

    @classmethod
    def from_json_dict(cls, d: dict) -> "ScoreSequence":
        if not isinstance(d, dict) or "values" not in d:
            raise ValidationError("field 'values' is missing")
        return cls(np.asarray(d["values"]), d.get("kind", "real"))


@dataclass(frozen=True, eq=False)
class ScoreFunction:
    """A piecewise-constant function [0,1] -> [0,1], stored as cell means."""

    cells: np.ndarray

    def __post_init__(self):
        c = _clip_unit(_float_array(self.cells, "cells", ndim=1), "cells")
        object.__setattr__(self, "cells", _freeze(c))

    @property
    def m(self) -> int:
        return len(self.cells)

    def to_json_dict(self) -> dict:
        return {"cells": [float(c) for c in self.cells]}

    @classmethod
    def from_json_dict(cls, d: dict) -> "ScoreFunction":
        if not isinstance(d, dict) or "cells" not in d:
            raise ValidationError("field 'cells' is missing")
        return cls(np.asarray(d["cells"]))


@dataclass(frozen=True, eq=False)
class GeneralizedTournament:
    """An n x n skew matrix alpha with alpha(i,j) + alpha(j,i) = 1 off the
    zero diagonal.  Entries in {0, 1} make it an ordinary tournament."""

    alpha: np.ndarray

    def __post_init__(self):
        a = _float_array(self.alpha, "alpha", ndim=2)
        n = a.shape[0]
        if a.shape != (n, n):
            raise ValidationError("field 'alpha' must be square")
        if np.any(np.abs(np.diag(a)) > TOL):
            raise ValidationError("field 'alpha' must have a zero diagonal")
        a = _clip_unit(a, "alpha")
        np.fill_diagonal(a, 0.0)
        skew = a + a.T
        np.fill_diagonal(skew, 1.0)
        if np.any(np.abs(skew - 1.0) > TOL):
            raise ValidationError(
                "field 'alpha' violates alpha(i,j) + alpha(j,i) = 1"
            )
        object.__setattr__(self, "alpha", _freeze(a))

    @property
    def n(self) -> int:
        return self.alpha.shape[0]

    @property
    def is_tournament(self) -> bool:
        off = ~np.eye(self.n, dtype=bool)
        a = self.alpha[off]
        return bool(np.all((a == 0.0) | (a == 1.0)))

    def to_json_dict(self) -> dict:
        return {"n": self.n, "alpha": [[float(x) for x in row] for row in self.alpha]}

    @classmethod
    def from_json_dict(cls, d: dict) -> "GeneralizedTournament":
        if not isinstance(d, dict) or "alpha" not in d:
            raise ValidationError("field 'alpha' is missing")
        g = cls(np.asarray(d["alpha"]))
        if "n" in d and d["n"] != g.n:
            raise ValidationError("field 'n' does not match the alpha matrix")
        return g


@dataclass(frozen=True, eq=False)
class StepKernel:
    """A kernel constant on the uniform n x n grid of squares, stored as the
    block matrix M with M(i,j) + M(j,i) = 1 and M(i,i) = 1/2."""

    blocks: np.ndarray

    def __post_init__(self):
        m = _float_array(self.blocks, "blocks", ndim=2)
        n = m.shape[0]
        if m.shape != (n, n):
            raise ValidationError("field 'blocks' must be square")
        if np.any(np.abs(np.diag(m) - 0.5) > TOL):
            raise ValidationError("field 'blocks' must have 1/2 on the diagonal")
        m = _clip_unit(m, "blocks")
        np.fill_diagonal(m, 0.5)
        if np.any(np.abs(m + m.T - 1.0) > TOL):
            raise ValidationError(
                "field 'blocks' violates M(i,j) + M(j,i) = 1"
            )
        object.__setattr__(self, "blocks", _freeze(m))

    @property
    def n(self) -> int:
        return self.blocks.shape[0]

    def to_json_dict(self) -> dict:
        return {"n": self.n, "blocks": [[float(x) for x in row] for row in self.blocks]}

    @classmethod
    def from_json_dict(cls, d: dict) -> "StepKernel":
        if not isinstance(d, dict) or "blocks" not in d:
            raise ValidationError("field 'blocks' is missing")
        w = cls(np.asarray(d["blocks"]))
        if "n" in d and d["n"] != w.n:
            raise ValidationError("field 'n' does not match the blocks matrix")
        return w

    def refine(self, factor: int = 2) -> "StepKernel":
        """Split every block into factor^2 equal sub-blocks (same kernel a.e.)."""
        if factor < 1:
            raise ValidationError("refinement factor must be >= 1")
        m = np.kron(self.blocks, np.ones((factor, factor)))
        return StepKernel(m)


_PATTERN_SPEC = re.compile(r"^S_?\{?(\d+)[,;](\d+)\}?$")


@dataclass(frozen=True)
class DigraphPattern:
    """A small simple digraph used as a density probe.

    Vertices are 0..k-1; edges are ordered pairs without self-loops and
    without both orientations of the same pair.
    """

    k: int
    edges: frozenset

    def __post_init__(self):
        if self.k < 1:
            raise ValidationError("pattern must have at least one vertex")
        edges = frozenset((int(u), int(v)) for (u, v) in self.edges)
        for u, v in edges:
            if not (0 <= u < self.k and 0 <= v < self.k):
                raise ValidationError("pattern edge endpoint out of range")
            if u == v:
                raise ValidationError("pattern may not contain self-loops")
            if (v, u) in edges:
                raise ValidationError("pattern may not contain a 2-cycle")
        object.__setattr__(self, "edges", edges)

    @classmethod
    def cycle(cls, k: int) -> "DigraphPattern":
        """Directed k-cycle 0 -> 1 -> ... -> k-1 -> 0 (k >= 3)."""
        if k < 3:
            raise ValidationError("a directed cycle pattern needs k >= 3")
        return cls(k, frozenset((i, (i + 1) % k) for i in range(k)))

    @classmethod
    def transitive(cls, k: int) -> "DigraphPattern":
        """Transitive tournament pattern with edges (i, j) for i < j."""
        return cls(k, frozenset((i, j) for i in range(k) for j in range(i + 1, k)))

    @classmethod
    def star(cls, m: int, n: int) -> "DigraphPattern":
        """Centre vertex with m out-neighbours and n in-neighbours.

        Its kernel density is the (m, n) score moment: the integral of
        f(x)^m (1 - f(x))^n over the centre position x.
        """
        if m < 0 or n < 0:
            raise ValidationError("star indices must be non-negative")
        out_edges = {(0, 1 + i) for i in range(m)}
        in_edges = {(1 + m + j, 0) for j in range(n)}
        return cls(1 + m + n, frozenset(out_edges | in_edges))

    @classmethod
    def from_spec(cls, spec: str) -> "DigraphPattern":
        """Parse "C3", "C4", "T5", "S1,1", "S_{2,0}" and friends."""
        spec = spec.strip()
        if spec.startswith("C") and spec[1:].isdigit():
            return cls.cycle(int(spec[1:]))
        if spec.startswith("T") and spec[1:].isdigit():
            return cls.transitive(int(spec[1:]))
        m = _PATTERN_SPEC.match(spec)
        if m:
            return cls.star(int(m.group(1)), int(m.group(2)))
        raise ValidationError(f"unknown pattern spec '{spec}'")

    def converse(self) -> "DigraphPattern":
        return DigraphPattern(self.k, frozenset((v, u) for (u, v) in self.edges))


@dataclass(frozen=True, eq=False)
class DegreeDistribution:
    """An atomic probability distribution on [0, 1].

    Atoms are kept sorted with exact duplicates merged; an empirical sample
    list enters through :meth:`from_samples` as equal-weight atoms.
    """

    positions: np.ndarray
    weights: np.ndarray

    def __post_init__(self):
        p = _clip_unit(_float_array(self.positions, "positions", 1), "positions")
        w = _float_array(self.weights, "weights", 1)
        if p.shape != w.shape:
            raise ValidationError("positions and weights differ in length")
        if np.any(w <= 0):
            raise ValidationError("field 'weights' must be positive")
        if abs(math.fsum(w) - 1.0) > TOL:
            raise ValidationError("field 'weights' must sum to 1")
        # canonical form: sorted positions, exact duplicates merged
        order = np.argsort(p, kind="stable")
        p, w = p[order], w[order]
        uniq, inverse = np.unique(p, return_inverse=True)
        merged = np.zeros_like(uniq)
        np.add.at(merged, inverse, w)
        object.__setattr__(self, "positions", _freeze(uniq))
        object.__setattr__(self, "weights", _freeze(merged))

    @classmethod
    def from_atoms(cls, atoms) -> "DegreeDistribution":
        pos, wts = zip(*atoms)
        return cls(np.asarray(pos, dtype=float), np.asarray(wts, dtype=float))

    @classmethod
    def from_samples(cls, samples) -> "DegreeDistribution":
        s = np.asarray(samples, dtype=float)
        if s.ndim != 1 or s.size == 0:
            raise ValidationError("field 'samples' must be a non-empty vector")
        return cls(s, np.full(s.size, 1.0 / s.size))

    def mean(self) -> float:
        return float(np.dot(self.positions, self.weights))

    def to_csv(self) -> str:
        lines = ["position,weight"]
        lines += [f"{float(p)!r},{float(w)!r}" for p, w in zip(self.positions, self.weights)]
        return "\n".join(lines) + "\n"

    @classmethod
    def from_csv(cls, text: str) -> "DegreeDistribution":
        lines = [ln for ln in text.strip().splitlines() if ln.strip()]
        if not lines or lines[0].strip() != "position,weight":
            raise ValidationError("field 'position,weight' header is missing")
        atoms = []
        for ln in lines[1:]:
            try:
                p, w = ln.split(",")
                atoms.append((float(p), float(w)))
            except ValueError as exc:
                raise ValidationError(f"malformed CSV row '{ln}'") from exc
        return cls.from_atoms(atoms)


@dataclass(frozen=True, eq=False)
class MomentSequence:
    """A putative power-moment vector (a_0, ..., a_K) of a [0,1] function.

    Entries must lie in [0, 1]; a_0 = 1 and monotonicity are *reported* by
    the Hausdorff checker rather than enforced here, so that invalid inputs
    can be diagnosed with a witness.
    """

    a: np.ndarray

    def __post_init__(self):
        a = _clip_unit(_float_array(self.a, "a", 1), "a")
        object.__setattr__(self, "a", _freeze(a))

    @property
    def order(self) -> int:
        return len(self.a) - 1

    def to_json_dict(self) -> dict:
        return {"a": [float(x) for x in self.a]}

    @classmethod
    def from_json_dict(cls, d: dict) -> "MomentSequence":
        if not isinstance(d, dict) or "a" not in d:
            raise ValidationError("field 'a' is missing")
        return cls(np.asarray(d["a"]))


# ---------------------------------------------------------------------------
# conversions and rearrangements


def step_kernel_from_tournament(g: GeneralizedTournament) -> StepKernel:
    """The step kernel of a finite (generalised) tournament: off-diagonal
    blocks copy alpha, diagonal blocks are 1/2."""
    m = g.alpha.copy()
    np.fill_diagonal(m, 0.5)
    return StepKernel(m)


def scores_of_tournament(g: GeneralizedTournament) -> ScoreSequence:
    """Row sums of alpha.  Integer kind when g is an ordinary tournament."""
    if g.is_tournament:
        vals = np.sum(g.alpha, axis=1).astype(np.int64)
        return ScoreSequence(vals, "integer")
    vals = np.array([math.fsum(row) for row in g.alpha])
    return ScoreSequence(vals, "real")


def score_function_of_kernel(w: StepKernel) -> ScoreFunction:
    """Cell means of the outdegree profile f(x) = integral of W(x, .).

    Row sums are accumulated with exactly rounded summation so that
    score-preserving constructions (the cyclic perturbation in particular)
    compare as exactly equal at double precision.
    """
    n = w.n
    cells = np.array([math.fsum(row) / n for row in w.blocks])
    return ScoreFunction(cells)


def converse(x):
    """Reverse every orientation.  An exact involution (plain transpose)."""
    if isinstance(x, GeneralizedTournament):
        return GeneralizedTournament(x.alpha.T.copy())
    if isinstance(x, StepKernel):
        return StepKernel(x.blocks.T.copy())
    raise TypeError("converse expects a GeneralizedTournament or StepKernel")


def decreasing_rearrangement(f: ScoreFunction) -> ScoreFunction:
    return ScoreFunction(np.sort(f.cells)[::-1].copy())


def increasing_rearrangement(f: ScoreFunction) -> ScoreFunction:
    return ScoreFunction(np.sort(f.cells))


def rearrangement_permutation(f: ScoreFunction, decreasing: bool = True) -> np.ndarray:
    """The measure-preserving relabelling sigma with f[sigma] sorted.

    On a grid the transformation is just the sorting permutation of the
    cells; ties are broken by original index (stable sort).
    """
    key = -f.cells if decreasing else f.cells
    return np.argsort(key, kind="stable")


def degree_distribution(w: StepKernel, marginal: str = "out") -> DegreeDistribution:
    """Outdegree (or indegree) marginal of the kernel degree distribution.

    Atoms sit at the score-function cell values with weight 1/n each; the
    joint distribution is concentrated on the line x + y = 1, so either
    marginal determines it.
    """
    cells = score_function_of_kernel(w).cells
    if marginal == "out":
        pos = cells
    elif marginal == "in":
        pos = 1.0 - cells
    else:
        raise ValidationError("marginal must be 'out' or 'in'")
    n = len(pos)
    return DegreeDistribution(pos.copy(), np.full(n, 1.0 / n))


def wasserstein1(mu: DegreeDistribution, nu: DegreeDistribution) -> float:
    """Exact Wasserstein-1 distance between two atomic distributions.

    Computed as the area between the two CDF step functions, by merging
    their breakpoints.
    """
    xs = np.union1d(mu.positions, nu.positions)
    f_mu = np.cumsum(mu.weights)[np.searchsorted(mu.positions, xs, side="right") - 1]
    f_nu = np.cumsum(nu.weights)[np.searchsorted(nu.positions, xs, side="right") - 1]
    # searchsorted index -1 means "no atom yet": CDF value 0 there
    f_mu = np.where(np.searchsorted(mu.positions, xs, side="right") == 0, 0.0, f_mu)
    f_nu = np.where(np.searchsorted(nu.positions, xs, side="right") == 0, 0.0, f_nu)
    if len(xs) < 2:
        return 0.0
    gaps = np.diff(xs)
    return float(np.sum(np.abs(f_mu[:-1] - f_nu[:-1]) * gaps))
