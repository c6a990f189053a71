"""Validity checkers: Landau, Eplett, the prefix-integral and point-symmetry
score-function conditions, irreducibility, Avery simplicity, and Hausdorff
moment tests.

Every checker returns a :class:`ValidityReport`; on failure the report
carries a witness holding both sides of the first violated inequality, so
callers (and tests) can re-evaluate it.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .core import (
    MomentSequence,
    ScoreFunction,
    ScoreSequence,
    ValidationError,
    increasing_rearrangement,
)

DEFAULT_TOL = 1e-9
"""Tolerance for checks on real-kind data (integer data is checked exactly)."""

#: the irreducible score sequences realised by a unique isomorphism class
SIMPLE_BLOCKS = frozenset({(0,), (1, 1, 1), (1, 1, 2, 2), (2, 2, 2, 2, 2)})


@dataclass(frozen=True)
class ValidityReport:
    valid: bool
    witness: dict | None = None

    def __post_init__(self):
        if not self.valid and self.witness is None:
            raise ValidationError("an invalid report must carry a witness")

    def to_json_dict(self) -> dict:
        return {"valid": self.valid, "witness": self.witness}


def check_landau(s: ScoreSequence, tol: float = DEFAULT_TOL) -> ValidityReport:
    """Realizability of a score sequence by a (generalised) tournament.

    Sorts non-decreasingly and checks the prefix sums against k(k-1)/2,
    with equality at the full prefix.  Checking prefixes of the sorted
    sequence suffices because any k-subset sum dominates the smallest-k sum.
    """
    n = s.n
    if s.kind == "integer":
        d = sorted(int(v) for v in s.values)
        prefix = 0
        for k in range(1, n):
            prefix += d[k - 1]
            bound = k * (k - 1) // 2
            if prefix < bound:
                return ValidityReport(False, {
                    "check": "landau-prefix", "k": k,
                    "sum": prefix, "bound": bound,
                })
        total = prefix + d[-1]
        if total != n * (n - 1) // 2:
            return ValidityReport(False, {
                "check": "landau-total",
                "sum": total, "bound": n * (n - 1) // 2,
            })
        return ValidityReport(True)

    d = np.sort(np.asarray(s.values, dtype=float))
    prefix = np.cumsum(d)
    for k in range(1, n):
        bound = k * (k - 1) / 2
        if prefix[k - 1] < bound - tol:
            return ValidityReport(False, {
                "check": "landau-prefix", "k": k,
                "sum": float(prefix[k - 1]), "bound": bound,
            })
    total, bound = float(prefix[-1]), n * (n - 1) / 2
    if abs(total - bound) > tol:
        return ValidityReport(False, {
            "check": "landau-total", "sum": total, "bound": bound,
        })
    return ValidityReport(True)


def check_eplett(s: ScoreSequence, tol: float = DEFAULT_TOL) -> ValidityReport:
    """Realizability by a self-converse (generalised) tournament: Landau
    plus the pairing d_i + d_{n+1-i} = n - 1 in sorted order."""
    landau = check_landau(s, tol)
    if not landau.valid:
        return landau
    n = s.n
    d = np.sort(np.asarray(s.values, dtype=float))
    exact = s.kind == "integer"
    for i in range(n):
        pair = float(d[i] + d[n - 1 - i])
        bad = (pair != n - 1) if exact else (abs(pair - (n - 1)) > tol)
        if bad:
            return ValidityReport(False, {
                "check": "eplett-pair", "i": i + 1,
                "sum": pair, "required": float(n - 1),
            })
    return ValidityReport(True)


def check_condition_I(f: ScoreFunction, tol: float = DEFAULT_TOL) -> ValidityReport:
    """Prefix-integral lower bound for score functions.

    The minimum of the integral of f over a set of measure r is the prefix
    integral of the increasing rearrangement, so it is enough to check, for
    every grid point r = k/m, that this prefix integral is at least r^2/2,
    with equality at r = 1.  Between grid points the integral is linear in
    r while the bound is convex, so grid points suffice.
    """
    cells = increasing_rearrangement(f).cells
    m = len(cells)
    prefix = np.cumsum(cells) / m
    for k in range(1, m):
        r = k / m
        if prefix[k - 1] < r * r / 2 - tol:
            return ValidityReport(False, {
                "check": "prefix-integral", "k": k, "r": r,
                "integral": float(prefix[k - 1]), "bound": r * r / 2,
            })
    if abs(prefix[-1] - 0.5) > tol:
        return ValidityReport(False, {
            "check": "total-mass", "integral": float(prefix[-1]), "required": 0.5,
        })
    return ValidityReport(True)


def check_condition_II(f: ScoreFunction, tol: float = DEFAULT_TOL) -> ValidityReport:
    """Point symmetry of a score function: f(x) + f(1-x) = 1 cell-wise.

    For odd m this tests the middle cell against 1/2.
    """
    c = f.cells
    m = len(c)
    for i in range(m):
        pair = float(c[i] + c[m - 1 - i])
        if abs(pair - 1.0) > tol:
            return ValidityReport(False, {
                "check": "point-symmetry", "i": i + 1,
                "sum": pair, "required": 1.0,
            })
    return ValidityReport(True)


def irreducible_decomposition(s: ScoreSequence) -> list[ScoreSequence]:
    """Split a sorted integer score sequence at every prefix equality.

    Each block is returned renormalised (the count of lower-block vertices
    subtracted from its scores) and is itself irreducible: an equality
    inside a block would have been an equality of the original sequence.
    """
    if s.kind != "integer":
        raise ValidationError("irreducible decomposition needs an integer sequence")
    rep = check_landau(s)
    if not rep.valid:
        raise ValidationError("score sequence fails the Landau check", rep)
    d = sorted(int(v) for v in s.values)
    blocks: list[ScoreSequence] = []
    start = 0
    prefix = 0
    for k in range(1, s.n + 1):
        prefix += d[k - 1]
        if prefix == k * (k - 1) // 2:
            block = [x - start for x in d[start:k]]
            blocks.append(ScoreSequence(np.asarray(block), "integer"))
            start = k
    return blocks


def is_simple_avery(s: ScoreSequence) -> bool:
    """Whether exactly one isomorphism class realises the sequence: every
    irreducible block must be one of {0}, {1,1,1}, {1,1,2,2}, {2,2,2,2,2}."""
    blocks = irreducible_decomposition(s)
    return all(tuple(int(v) for v in b.values) in SIMPLE_BLOCKS for b in blocks)


def check_hausdorff_moments(a: MomentSequence, order: int) -> ValidityReport:
    """Finite truncation of the two classical moment criteria.

    (ii) all iterated differences sum((-1)^k C(m,k) a_{n+k}) with
    n + m <= order are non-negative (down to -1e-12), and
    (iii) the Hankel matrix [a_{n+m}] for n, m <= order//2 has smallest
    eigenvalue >= -1e-9.  The m = 1 differences are exactly the
    non-increasing requirement on moments of a [0,1]-valued function.
    """
    if order < 0:
        raise ValidationError("order must be non-negative")
    if a.order < order:
        raise ValidationError(f"need at least {order + 1} moments, got {a.order + 1}")
    vals = a.a
    if abs(vals[0] - 1.0) > 1e-12:
        return ValidityReport(False, {
            "check": "a0", "value": float(vals[0]), "required": 1.0,
        })
    for m in range(order + 1):
        for n in range(order + 1 - m):
            diff = math.fsum(
                (-1) ** k * math.comb(m, k) * vals[n + k] for k in range(m + 1)
            )
            if diff < -1e-12:
                return ValidityReport(False, {
                    "check": "difference", "n": n, "m": m, "value": float(diff),
                })
    half = order // 2
    hankel = np.array([[vals[i + j] for j in range(half + 1)] for i in range(half + 1)])
    lam = float(np.linalg.eigvalsh(hankel)[0])
    if lam < -1e-9:
        return ValidityReport(False, {
            "check": "hankel", "min_eigenvalue": lam,
        })
    return ValidityReport(True)


def moments_of_score_function(f: ScoreFunction, order: int) -> MomentSequence:
    """Power moments a_k = mean(cells^k) for k = 0..order."""
    if order < 0:
        raise ValidationError("order must be non-negative")
    m = f.m
    a = [math.fsum(f.cells**k) / m for k in range(order + 1)]
    return MomentSequence(np.asarray(a))
