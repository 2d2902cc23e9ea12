"""Ground-truth subdivision containment by exhaustive backtracking.

``contains_subdivision`` decides whether a host digraph contains a
subdivision of a pattern digraph and, when it does, returns an explicit
:class:`SubdivisionCertificate`.  The search is exhaustive within an
explicit node budget; running out of budget raises ``BudgetExceeded``
and is never confused with a definite "no".

This module is the independent checker for every constructive finder in
the package: finders must never disagree with it, and every certificate
from any source can be validated here against its pattern.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field

from .core import Digraph, Path
from .errors import BudgetExceeded, ParseError
from . import menger as _menger

DEFAULT_BUDGET = 10**7


@dataclass
class SearchBudget:
    """Backtracking-node allowance shared across one search."""

    max_nodes: int = DEFAULT_BUDGET
    consumed: int = 0

    def charge(self, amount: int = 1, **context) -> None:
        self.consumed += amount
        if self.consumed > self.max_nodes:
            raise BudgetExceeded(details={"consumed": self.consumed, **context})


@dataclass(frozen=True)
class SubdivisionCertificate:
    """Witness that a host contains a subdivision of a pattern.

    ``branch`` maps each pattern vertex to a distinct host vertex and
    ``paths`` maps each pattern arc (x, y) to a host dipath from
    branch[x] to branch[y]; paths for different arcs share no internal
    vertices and no internal vertex is a branch image.
    """

    branch: dict[int, int] = field(default_factory=dict)
    paths: dict[tuple[int, int], Path] = field(default_factory=dict)

    def vertices(self) -> set[int]:
        used = set(self.branch.values())
        for p in self.paths.values():
            used.update(p)
        return used

    def arcs(self) -> set[tuple[int, int]]:
        out = set()
        for p in self.paths.values():
            out.update(zip(p, p[1:]))
        return out

    def to_json(self) -> str:
        payload = {
            "branch": {str(k): v for k, v in sorted(self.branch.items())},
            "paths": [
                {"from": x, "to": y, "vertices": list(p)}
                for (x, y), p in sorted(self.paths.items())
            ],
        }
        return json.dumps(payload, indent=2)

    @classmethod
    def from_json(cls, text: str) -> "SubdivisionCertificate":
        try:
            payload = json.loads(text)
            branch = {int(k): int(v) for k, v in payload["branch"].items()}
            paths = {
                (int(e["from"]), int(e["to"])): tuple(int(v) for v in e["vertices"])
                for e in payload["paths"]
            }
        except (KeyError, TypeError, ValueError, json.JSONDecodeError) as exc:
            raise ParseError(f"bad certificate JSON: {exc}") from exc
        return cls(branch=branch, paths=paths)


@dataclass(frozen=True)
class ValidationReport:
    ok: bool
    violation: str | None = None

    def __bool__(self) -> bool:
        return self.ok


def validate_certificate(host: Digraph, pattern: Digraph, cert: SubdivisionCertificate) -> ValidationReport:
    """Check every certificate invariant; report the first violation.

    Never raises: malformed input is just an invalid certificate.
    """
    try:
        branch = cert.branch
        if sorted(branch) != list(range(pattern.n)):
            return ValidationReport(False, "branch arity mismatch")
        images = list(branch.values())
        if len(set(images)) != len(images):
            return ValidationReport(False, "branch map not injective")
        if not all(0 <= w < host.n for w in images):
            return ValidationReport(False, "branch image out of range")

        pattern_arcs = set(pattern.arcs())
        if set(cert.paths) != pattern_arcs:
            return ValidationReport(False, "path set does not match pattern arcs")

        image_set = set(images)
        seen_internal: set[int] = set()
        for (x, y), p in sorted(cert.paths.items()):
            if len(p) < 2:
                return ValidationReport(False, f"path for ({x}, {y}) shorter than one arc")
            if p[0] != branch[x] or p[-1] != branch[y]:
                return ValidationReport(False, f"path for ({x}, {y}) has wrong endpoints")
            if len(set(p)) != len(p):
                return ValidationReport(False, f"path for ({x}, {y}) repeats a vertex")
            for i in range(len(p) - 1):
                if not (0 <= p[i] < host.n and 0 <= p[i + 1] < host.n) or not host.has_arc(p[i], p[i + 1]):
                    return ValidationReport(False, f"arc absent: ({p[i]}, {p[i + 1]})")
            inner = set(p[1:-1])
            if inner & image_set:
                return ValidationReport(False, f"path for ({x}, {y}) passes through a branch vertex")
            if inner & seen_internal:
                return ValidationReport(False, "internal overlap")
            seen_internal |= inner
        return ValidationReport(True)
    except Exception as exc:  # malformed certificates must not throw
        return ValidationReport(False, f"malformed certificate: {exc}")


# ---------------------------------------------------------------------------
# automorphisms and symmetry pruning
# ---------------------------------------------------------------------------

_AUTO_LIMIT = 8


def automorphisms(pattern: Digraph) -> list[tuple[int, ...]]:
    """All arc-preserving vertex permutations, by brute force.

    Only used for patterns with at most 8 vertices; larger patterns get
    the identity alone.
    """
    if pattern.n > _AUTO_LIMIT:
        return [tuple(range(pattern.n))]
    arcs = set(pattern.arcs())
    degs = [(pattern.out_degree(v), pattern.in_degree(v)) for v in pattern.vertices()]
    out = []
    for perm in itertools.permutations(range(pattern.n)):
        if any(degs[v] != degs[perm[v]] for v in range(pattern.n)):
            continue
        if all((perm[u], perm[v]) in arcs for u, v in arcs):
            out.append(perm)
    return out


def _orbit_minimal(assignment: list[int], autos: list[tuple[int, ...]]) -> bool:
    """True iff the branch tuple is lexicographically first in its orbit.

    Composing a valid branch map with a pattern automorphism yields
    another valid branch map of the same subdivision, so only the
    orbit-minimal representative needs to be explored.
    """
    base = tuple(assignment)
    for sigma in autos:
        if tuple(assignment[sigma[i]] for i in range(len(assignment))) < base:
            return False
    return True


# ---------------------------------------------------------------------------
# the backtracking search
# ---------------------------------------------------------------------------

def _disjoint_cycle_flow(d: Digraph, w: int, limit: int) -> int:
    """Max number of directed cycles through w pairwise meeting only at w,
    capped at ``limit``; unit vertex capacities via splitting."""
    net = _menger._UnitFlow()
    for v in d.vertices():
        net.add_arc(("in", v), ("out", v))
    key = (("in", w), ("out", w))
    net.cap[key] = net.orig[key] = 0
    for u, v in d.arcs():
        net.add_arc(("out", u), ("in", v))
        akey = (("out", u), ("in", v))
        net.cap[akey] = net.orig[akey] = d.n
    net.freeze()
    return net.max_flow(("out", w), ("in", w), limit)


def _cycle_needs(pattern: Digraph) -> list[int]:
    """Per pattern vertex: how many pairwise internally disjoint pattern
    cycles pass through it.  Subdivisions preserve this, so host images
    must support at least as many."""
    return [
        _disjoint_cycle_flow(pattern, x, pattern.n + 1) for x in pattern.vertices()
    ]


def contains_subdivision(
    host: Digraph,
    pattern: Digraph,
    budget: SearchBudget | int | None = None,
) -> SubdivisionCertificate | None:
    """Certificate for a pattern subdivision in the host, or ``None``.

    Branch vertices are tried in increasing host id; pattern arcs are
    embedded in a fixed order grouping each pattern vertex's arcs
    together, each by a shortest-first simple dipath search that
    backtracks across earlier arcs.  ``None`` means the search space was
    exhausted.  Determinism: the certificate depends only on the inputs.

    Candidate images are pre-filtered by degrees and by disjoint-cycle
    counts (a pattern vertex lying on k mutually disjoint pattern cycles
    needs a host image on k mutually disjoint host cycles), and a
    reachability lookahead prunes doomed partial embeddings.
    """
    budget = _as_budget(budget)
    if pattern.n == 0:
        return SubdivisionCertificate()
    if host.n < pattern.n:
        return None

    autos = automorphisms(pattern)
    p_arcs = sorted(pattern.arcs(), key=lambda arc: (max(arc), arc))
    need = [(pattern.out_degree(v), pattern.in_degree(v)) for v in pattern.vertices()]
    cycle_need = _cycle_needs(pattern)
    candidates = []
    for v in pattern.vertices():
        pool = [
            w
            for w in host.vertices()
            if host.out_degree(w) >= need[v][0] and host.in_degree(w) >= need[v][1]
        ]
        if cycle_need[v] >= 2:
            pool = [w for w in pool if _disjoint_cycle_flow(host, w, cycle_need[v]) >= cycle_need[v]]
        if not pool:
            return None
        candidates.append(pool)

    assignment: list[int] = []

    def assign(depth: int) -> SubdivisionCertificate | None:
        if depth == pattern.n:
            if not _orbit_minimal(assignment, autos):
                return None
            return embed_arcs(0, {}, frozenset(assignment))
        used = set(assignment)
        for w in candidates[depth]:
            if w in used:
                continue
            budget.charge(1, phase="branch", depth=depth)
            assignment.append(w)
            found = assign(depth + 1)
            if found is not None:
                return found
            assignment.pop()
        return None

    def viable(idx: int, occupied: frozenset) -> bool:
        """Every remaining arc must still admit some dipath on its own."""
        for j in range(idx, len(p_arcs)):
            x, y = p_arcs[j]
            s, t = assignment[x], assignment[y]
            budget.charge(1, phase="lookahead")
            if not _reaches(host, s, t, occupied - {s, t}):
                return False
        return True

    def embed_arcs(idx: int, chosen: dict, occupied: frozenset) -> SubdivisionCertificate | None:
        if idx == len(p_arcs):
            return SubdivisionCertificate(
                branch={v: assignment[v] for v in range(pattern.n)},
                paths=dict(chosen),
            )
        if not viable(idx, occupied):
            return None
        x, y = p_arcs[idx]
        s, t = assignment[x], assignment[y]
        for path in _simple_paths_shortest_first(host, s, t, occupied - {s, t}, budget):
            chosen[(x, y)] = path
            found = embed_arcs(idx + 1, chosen, occupied | frozenset(path[1:-1]))
            if found is not None:
                return found
            del chosen[(x, y)]
        return None

    return assign(0)


def _reaches(host: Digraph, s: int, t: int, blocked: frozenset) -> bool:
    if s == t:
        return False
    seen = {s}
    frontier = [s]
    while frontier:
        nxt = []
        for u in frontier:
            for v in host.out_nbrs(u):
                if v == t:
                    return True
                if v not in seen and v not in blocked:
                    seen.add(v)
                    nxt.append(v)
        frontier = nxt
    return False


def _simple_paths_shortest_first(host: Digraph, s: int, t: int, blocked: frozenset, budget: SearchBudget):
    """Yield simple s-t dipaths avoiding ``blocked``, shortest lengths first.

    Iterative deepening on the exact path length, pruned by live BFS
    distances to the target; within one length, paths come in
    lexicographic vertex order.
    """
    if s == t:
        return
    rev_dist = _distances_to(host, t, blocked)
    if s not in rev_dist:
        return
    max_len = host.n - len(blocked) - 1
    for length in range(rev_dist[s], max_len + 1):
        stack: list[int] = [s]
        on_path = {s}

        def dfs(u: int, remaining: int):
            budget.charge(1, phase="path", source=s, target=t)
            if remaining == 0:
                if u == t:
                    yield tuple(stack)
                return
            for v in host.out_nbrs(u):
                if v in blocked or v in on_path or v == t and remaining != 1:
                    continue
                if rev_dist.get(v, host.n + 1) > remaining - 1:
                    continue
                stack.append(v)
                on_path.add(v)
                yield from dfs(v, remaining - 1)
                stack.pop()
                on_path.discard(v)

        yield from dfs(s, length)


def _distances_to(host: Digraph, t: int, blocked) -> dict[int, int]:
    """BFS distances toward t along reversed arcs, skipping blocked vertices."""
    dist = {t: 0}
    frontier = [t]
    while frontier:
        nxt = []
        for u in frontier:
            for w in host.in_nbrs(u):
                if w not in dist and w not in blocked:
                    dist[w] = dist[u] + 1
                    nxt.append(w)
        frontier = nxt
    return dist


def _as_budget(budget) -> SearchBudget:
    if budget is None:
        return SearchBudget()
    if isinstance(budget, int):
        return SearchBudget(max_nodes=budget)
    return budget


# ---------------------------------------------------------------------------
# even directed cycles
# ---------------------------------------------------------------------------

def has_even_dicycle(d: Digraph, budget: SearchBudget | int | None = None) -> bool:
    """True iff some directed cycle of even length exists.

    Digons are found immediately; otherwise simple cycles are
    enumerated exhaustively (each rooted at its minimum vertex) under
    the node budget.
    """
    budget = _as_budget(budget)
    for u, v in d.arcs():
        if d.has_arc(v, u):
            return True

    for root in d.vertices():
        stack = [root]
        on_path = {root}
        found = _even_cycle_dfs(d, root, stack, on_path, budget)
        if found:
            return True
    return False


def _even_cycle_dfs(d: Digraph, root: int, stack: list[int], on_path: set[int], budget: SearchBudget) -> bool:
    u = stack[-1]
    for v in d.out_nbrs(u):
        budget.charge(1, phase="even-cycle", root=root)
        if v == root:
            if len(stack) % 2 == 0:
                return True
            continue
        if v < root or v in on_path:
            continue
        stack.append(v)
        on_path.add(v)
        if _even_cycle_dfs(d, root, stack, on_path, budget):
            return True
        stack.pop()
        on_path.discard(v)
    return False
