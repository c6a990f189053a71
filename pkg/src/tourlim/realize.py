"""Constructive realizations.

Score sequences are realised by a max-flow on the pair/vertex network: one
unit of flow per unordered vertex pair, routed to one of its endpoints and
drained through per-vertex arcs of capacity d_i.  A feasible flow of value
n(n-1)/2 exists exactly when the Landau inequalities hold, and with integer
capacities the integral max flow yields a 0/1 tournament directly.

The same augmenting-path solver handles both kinds: integer scores run on
exact integers, real scores are first scaled to a common (dyadic) integer
grid when one exists, and otherwise run in floating point with a residual
threshold of 1e-12.
"""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .conditions import DEFAULT_TOL, check_condition_I, check_eplett, check_landau
from .core import (
    GeneralizedTournament,
    ScoreFunction,
    ScoreSequence,
    StepKernel,
    ValidationError,
    scores_of_tournament,
    step_kernel_from_tournament,
)

_SCALE_LIMIT = 1 << 20  # largest common denominator used for exact scaling


@dataclass(frozen=True)
class FlowArc:
    src: int
    dst: int
    capacity: float

    def __post_init__(self):
        if self.capacity < 0:
            raise ValidationError("flow arc capacities must be non-negative")


@dataclass(frozen=True)
class FlowNetwork:
    """The realization network of a score sequence.

    Node ids: 0 is the source, 1..P are the pair nodes for the unordered
    pairs in lexicographic order, P+1..P+n the vertex nodes, P+n+1 the sink.
    """

    n: int
    labels: tuple
    arcs: tuple
    source: int
    sink: int

    @property
    def num_nodes(self) -> int:
        return len(self.labels)


def build_flow_network(s: ScoreSequence) -> FlowNetwork:
    n = s.n
    pairs = [(i, j) for i in range(n) for j in range(i + 1, n)]
    labels = ["source"]
    labels += [("pair", i, j) for (i, j) in pairs]
    labels += [("vertex", i) for i in range(n)]
    labels += ["sink"]
    source, sink = 0, len(labels) - 1
    vertex_node = lambda i: 1 + len(pairs) + i
    arcs = []
    for p, (i, j) in enumerate(pairs):
        arcs.append(FlowArc(source, 1 + p, 1))
        arcs.append(FlowArc(1 + p, vertex_node(i), 1))
        arcs.append(FlowArc(1 + p, vertex_node(j), 1))
    for i, d in enumerate(s.values):
        arcs.append(FlowArc(vertex_node(i), sink, float(d)))
    return FlowNetwork(n, tuple(labels), tuple(arcs), source, sink)


class _Dinic:
    """Blocking-flow max flow; exact on integers, eps-thresholded on floats."""

    def __init__(self, num_nodes: int, eps=0):
        self.eps = eps
        self.head = [[] for _ in range(num_nodes)]
        self.to: list[int] = []
        self.cap: list = []

    def add_edge(self, u: int, v: int, c) -> int:
        eid = len(self.to)
        self.to.append(v)
        self.cap.append(c)
        self.to.append(u)
        self.cap.append(0 * c)  # keeps int capacities int
        self.head[u].append(eid)
        self.head[v].append(eid + 1)
        return eid

    def flow_on(self, eid: int):
        return self.cap[eid ^ 1]

    def _levels(self, s: int, t: int):
        level = [-1] * len(self.head)
        level[s] = 0
        queue = deque([s])
        while queue:
            u = queue.popleft()
            for eid in self.head[u]:
                v = self.to[eid]
                if level[v] < 0 and self.cap[eid] > self.eps:
                    level[v] = level[u] + 1
                    queue.append(v)
        return level if level[t] >= 0 else None

    def _augment(self, s: int, t: int, level, iters):
        # iterative DFS for one augmenting path in the level graph
        path: list[int] = []
        u = s
        while True:
            if u == t:
                bottleneck = min(self.cap[e] for e in path)
                for e in path:
                    self.cap[e] -= bottleneck
                    self.cap[e ^ 1] += bottleneck
                return bottleneck
            moved = False
            while iters[u] < len(self.head[u]):
                eid = self.head[u][iters[u]]
                v = self.to[eid]
                if self.cap[eid] > self.eps and level[v] == level[u] + 1:
                    path.append(eid)
                    u = v
                    moved = True
                    break
                iters[u] += 1
            if not moved:
                if u == s:
                    return None
                level[u] = -1
                u = self.to[path.pop() ^ 1]

    def max_flow(self, s: int, t: int):
        total = 0
        while True:
            level = self._levels(s, t)
            if level is None:
                return total
            iters = [0] * len(self.head)
            while True:
                pushed = self._augment(s, t, level, iters)
                if pushed is None:
                    break
                total += pushed


def _dyadic_denominator(values) -> int | None:
    """Common denominator of float values when small enough for exact flow."""
    den = 1
    for v in values:
        den = math.lcm(den, Fraction(float(v)).denominator)
        if den > _SCALE_LIMIT:
            return None
    return den


def _exact_landau(scaled: list[int], den: int) -> bool:
    d = sorted(scaled)
    prefix = 0
    n = len(d)
    for k in range(1, n):
        prefix += d[k - 1]
        if prefix < den * (k * (k - 1) // 2):
            return False
    return prefix + d[-1] == den * (n * (n - 1) // 2)


def _arithmetic_mode(s: ScoreSequence):
    """(unit, eps): exact integer flow grid when available, else floats."""
    if s.kind == "integer":
        return 1, 0
    den = _dyadic_denominator(s.values)
    if den is not None:
        scaled = [int(Fraction(float(v)) * den) for v in s.values]
        if _exact_landau(scaled, den):
            return den, 0
    return 1.0, 1e-12


def realize_scores(s: ScoreSequence, tol: float = DEFAULT_TOL) -> GeneralizedTournament:
    """A (generalised) tournament whose score sequence is s, in order.

    Raises :class:`ValidationError` with the failing report when s is not
    Landau-valid.  Integer input yields a 0/1 tournament.
    """
    report = check_landau(s, tol)
    if not report.valid:
        raise ValidationError("score sequence is not realizable", report)
    n = s.n
    if n == 1:
        return GeneralizedTournament(np.zeros((1, 1)))
    unit, eps = _arithmetic_mode(s)
    exact = eps == 0

    net = build_flow_network(s)
    solver = _Dinic(net.num_nodes, eps=eps)
    win_arc = {}
    for arc in net.arcs:
        cap = int(Fraction(arc.capacity) * unit) if exact else float(arc.capacity)
        eid = solver.add_edge(arc.src, arc.dst, cap)
        src, dst = net.labels[arc.src], net.labels[arc.dst]
        if isinstance(src, tuple) and src[0] == "pair" and dst == ("vertex", src[1]):
            win_arc[(src[1], src[2])] = eid

    value = solver.max_flow(net.source, net.sink)
    expected = (n * (n - 1) // 2) * unit
    if exact:
        feasible = value == expected
    else:
        feasible = abs(value - expected) <= 100 * tol * max(1.0, float(expected))
    if not feasible:
        raise RuntimeError(
            "internal consistency error: Landau-valid sequence gave an "
            f"infeasible flow ({value} < {expected})"
        )

    alpha = np.zeros((n, n))
    for (i, j), eid in win_arc.items():
        a = min(1.0, max(0.0, float(solver.flow_on(eid) / unit)))
        alpha[i, j] = a
        alpha[j, i] = 1.0 - a
    return GeneralizedTournament(alpha)


def _resampled_cells(f: ScoreFunction, n: int) -> tuple[np.ndarray, int]:
    """Cells of f on the coarsest uniform grid refined by both m and n."""
    m = f.m
    if m % n == 0:
        return f.cells, m
    grid = math.lcm(m, n)
    return np.repeat(f.cells, grid // m), grid


def discretize_score_function(
    f: ScoreFunction, n: int, tol: float = DEFAULT_TOL
) -> ScoreSequence:
    """The n-vertex generalised score sequence induced by a score function.

    d_i = n^2 * integral over the i-th n-cell of (f(x) - 1/(2n)), computed
    exactly from cell means; the prefix-integral condition on f guarantees
    the result is Landau-valid, which is asserted.
    """
    if n < 1:
        raise ValidationError("vertex count must be at least 1")
    report = check_condition_I(f, tol)
    if not report.valid:
        raise ValidationError(
            "score function fails the prefix-integral condition", report
        )
    cells, grid = _resampled_cells(f, n)
    per = grid // n
    scale = n * n / grid
    d = np.array([
        scale * math.fsum(cells[i * per:(i + 1) * per]) - 0.5 for i in range(n)
    ])
    d[(d < 0) & (d > -tol)] = 0.0  # rounding dust only
    seq = ScoreSequence(d, "real")
    out = check_landau(seq, tol)
    if not out.valid:  # unreachable for condition-I input
        raise RuntimeError(f"discretization produced an invalid sequence: {out.witness}")
    return seq


def kernel_from_score_function(
    f: ScoreFunction, n: int, tol: float = DEFAULT_TOL
) -> StepKernel:
    """An n-block step kernel whose score function is the n-cell average of f."""
    seq = discretize_score_function(f, n, tol)
    kernel = step_kernel_from_tournament(realize_scores(seq, tol))
    cells, grid = _resampled_cells(f, n)
    per = grid // n
    target = np.array([
        math.fsum(cells[i * per:(i + 1) * per]) / per for i in range(n)
    ])
    got = np.array([math.fsum(row) / n for row in kernel.blocks])
    if np.max(np.abs(got - target)) > max(tol, 1e-9):  # unreachable
        raise RuntimeError("realized kernel does not average the score function")
    return kernel


def symmetrize_self_converse(
    g: GeneralizedTournament, tol: float = DEFAULT_TOL
) -> GeneralizedTournament:
    """Average a tournament with its reversed relabelling to force the
    self-converse identity alpha(i,j) + alpha(rho(i), rho(j)) = 1, rho(i) =
    n-1-i, exactly, without changing the score sequence.

    Requires the Eplett pairing on the scores (otherwise averaging would
    move them).  The result is returned with rows sorted by score.
    """
    scores = scores_of_tournament(g)
    report = check_eplett(scores, tol)
    if not report.valid:
        raise ValidationError("scores do not satisfy the Eplett pairing", report)
    n = g.n
    order = np.argsort(np.asarray(scores.values, dtype=float), kind="stable")
    a = g.alpha[np.ix_(order, order)]
    rho = lambda i: n - 1 - i
    out = np.zeros((n, n))
    for i in range(n):
        for j in range(i + 1, n):
            p, q = rho(j), rho(i)
            if (p, q) < (i, j):
                continue  # orbit already handled from its partner pair
            v = (a[i, j] + 1.0 - a[rho(i), rho(j)]) / 2.0
            out[i, j], out[j, i] = v, 1.0 - v
            out[p, q], out[q, p] = v, 1.0 - v
    return GeneralizedTournament(out)


def realize_self_converse(
    s: ScoreSequence, tol: float = DEFAULT_TOL
) -> GeneralizedTournament:
    """A self-converse generalised tournament with (sorted) score sequence s.

    Integer input may come back with 1/2 entries: the averaging step
    produces a generalised witness even when a 0/1 self-converse tournament
    exists.
    """
    report = check_eplett(s, tol)
    if not report.valid:
        raise ValidationError("score sequence fails the Eplett check", report)
    return symmetrize_self_converse(realize_scores(s, tol), tol)
