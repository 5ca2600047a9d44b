"""Subgraph containment testing, specialized forbidden-configuration
detectors, the dense-and-left-compressed rewriting loop, and the
symmetrize-and-clean iteration."""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from math import comb

from .hypergraph import (
    Hypergraph,
    compress,
    covers_pairs,
    induced,
    link_diff,
    named,
    relabel,
)
from .lagrangian import DEFAULT_CONFIG, OptimizerConfig, densify, is_dense, maximize


@dataclass(frozen=True)
class EmbeddingMap:
    """Injective, edge-preserving vertex map witnessing containment."""

    assignment: tuple[tuple[int, int], ...]  # (pattern vertex, host vertex)

    def __post_init__(self):
        hosts = [h for _, h in self.assignment]
        if len(set(hosts)) != len(hosts):
            raise ValueError("embedding must be injective")

    def as_dict(self) -> dict[int, int]:
        return dict(self.assignment)

    def verify(self, pattern: Hypergraph, host: Hypergraph) -> bool:
        m = self.as_dict()
        if set(m) != set(range(1, pattern.n + 1)):
            return False
        es = host.edge_set()
        return all(tuple(sorted(m[v] for v in e)) in es for e in pattern.edges)

    def to_json(self) -> dict:
        return {"assignment": {str(p): h for p, h in self.assignment}}


def _pattern_order(pattern: Hypergraph) -> list[int]:
    # most-constrained first: highest degree seeds, then vertices sharing
    # edges with already-ordered ones
    deg = {v: 0 for v in range(1, pattern.n + 1)}
    for e in pattern.edges:
        for v in e:
            deg[v] += 1
    ordered: list[int] = []
    placed: set[int] = set()
    while len(ordered) < pattern.n:
        best = None
        best_key = None
        for v in range(1, pattern.n + 1):
            if v in placed:
                continue
            attach = sum(1 for e in pattern.edges if v in e and any(u in placed for u in e))
            key = (attach, deg[v], -v)
            if best_key is None or key > best_key:
                best, best_key = v, key
        ordered.append(best)
        placed.add(best)
    return ordered


def _contains_edges(n: int, edges: tuple, pattern: Hypergraph):
    """Backtracking embedding search of pattern into (n, edges)."""
    if pattern.n > n:
        return None
    es = set(edges)
    host_deg = [0] * (n + 1)
    for e in edges:
        for v in e:
            host_deg[v] += 1
    pdeg = [0] * (pattern.n + 1)
    for e in pattern.edges:
        for v in e:
            pdeg[v] += 1
    order = _pattern_order(pattern)
    pos = {v: i for i, v in enumerate(order)}
    # edges fully decided once vertex at position i is placed
    ready = [[] for _ in range(pattern.n)]
    for e in pattern.edges:
        ready[max(pos[v] for v in e)].append(e)
    # for forward pruning: edges with exactly one vertex after position i
    complet = {}
    if pattern.r == 3:
        for e in edges:
            for a, b in itertools.combinations(e, 2):
                complet.setdefault((a, b), []).append(sum(e) - a - b)

    assign = {}
    used = [False] * (n + 1)

    def feasible_forward(i: int) -> bool:
        if pattern.r != 3:
            return True
        for e in pattern.edges:
            idxs = sorted(pos[v] for v in e)
            if idxs[1] <= i < idxs[2]:
                a, b = sorted(assign[v] for v in e if pos[v] <= i)
                cands = complet.get((a, b))
                if not cands or not any(not used[c] for c in cands):
                    return False
        return True

    def extend(i: int):
        if i == pattern.n:
            return EmbeddingMap(tuple(sorted(assign.items())))
        p = order[i]
        for h in range(1, n + 1):
            if used[h] or host_deg[h] < pdeg[p]:
                continue
            assign[p] = h
            ok = True
            for e in ready[i]:
                if tuple(sorted(assign[v] for v in e)) not in es:
                    ok = False
                    break
            if ok and feasible_forward(i):
                used[h] = True
                found = extend(i + 1)
                used[h] = False
                if found is not None:
                    return found
            del assign[p]
        return None

    return extend(0)


def contains(g: Hypergraph, pattern: Hypergraph):
    """A witness embedding of the pattern into g, or None.  The search
    places pattern vertices most-constrained first and tries host vertices
    in increasing id, so the first witness is deterministic."""
    if g.r != pattern.r:
        raise ValueError(f"uniformity mismatch: host r={g.r}, pattern r={pattern.r}")
    return _contains_edges(g.n, g.edges, pattern)


def is_free(g: Hypergraph, pattern: Hypergraph) -> bool:
    return contains(g, pattern) is None


# ---------------------------------------------------------------------------
# linear paths, specialized


def _path_masks(edges) -> list[int]:
    masks = []
    for e in edges:
        m = 0
        for v in e:
            m |= 1 << v
        masks.append(m)
    return masks


def _find_path_sequence(masks: list[int], t: int, required: int | None = None):
    """Indices of t edges forming a linear path: consecutive edges share
    exactly one vertex, the rest are pairwise disjoint.  If ``required``
    is given, that edge index must participate."""
    nedges = len(masks)
    if nedges < t:
        return None

    def extend(seq: list[int], used_before: int):
        if len(seq) == t:
            if required is None or required in seq:
                return list(seq)
            return None
        cur = masks[seq[-1]]
        for j in range(nedges):
            if j in seq:
                continue
            mj = masks[j]
            if (mj & used_before) == 0 and (mj & cur).bit_count() == 1:
                seq.append(j)
                found = extend(seq, used_before | cur)
                seq.pop()
                if found:
                    return found
        return None

    for i in range(nedges):
        found = extend([i], 0)
        if found:
            return found
    return None


def contains_linear_path(g: Hypergraph, t: int):
    """Witness embedding of the 3-uniform linear path with t edges, by a
    DFS over edge sequences with the path's intersection pattern; agrees
    with contains(g, linear_path(t)) but is much faster inside inner
    loops."""
    if g.r != 3:
        raise ValueError(f"needs a 3-uniform graph, got r={g.r}")
    if g.n < 2 * t + 1:
        return None
    masks = _path_masks(g.edges)
    seq = _find_path_sequence(masks, t)
    if seq is None:
        return None
    return _path_embedding(g, seq, t)


def _path_embedding(g: Hypergraph, seq: list[int], t: int) -> EmbeddingMap:
    # pattern edge i is {2i-1, 2i, 2i+1}; shared host vertices sit at the
    # odd joints, leftover vertices fill the free slots in increasing order
    edges = [set(g.edges[j]) for j in seq]
    assign: dict[int, int] = {}
    for i in range(t - 1):
        (shared,) = edges[i] & edges[i + 1]
        assign[2 * i + 3] = shared
    first_free = sorted(edges[0] - {assign.get(3, -1)})
    assign[1], assign[2] = first_free[0], first_free[1]
    if t == 1:
        assign[3] = first_free[2]
    for i in range(2, t + 1):
        e = edges[i - 1]
        rest = sorted(e - {assign.get(2 * i - 1, -1), assign.get(2 * i + 1, -1)})
        assign[2 * i] = rest[0]
        if 2 * i + 1 not in assign and len(rest) > 1:
            assign[2 * i + 1] = rest[1]
    return EmbeddingMap(tuple(sorted(assign.items())))


def creates_linear_path(edge_masks: list[int], new_mask: int, t: int) -> bool:
    """Whether adding the edge with bitmask ``new_mask`` creates a linear
    path of t edges through it; ``edge_masks`` are the existing edges.
    Used as the incremental prune inside enumerations."""
    masks = edge_masks + [new_mask]
    return _find_path_sequence(masks, t, required=len(masks) - 1) is not None


def contains_core(g: Hypergraph, pattern: Hypergraph, p: int) -> bool:
    """Whether some p vertices of g induce a copy of the pattern while
    every pair of them is covered by an edge of g (the covering edge need
    not stay inside the p-set)."""
    if p < pattern.n:
        raise ValueError(f"core size {p} smaller than pattern order {pattern.n}")
    if p > g.n:
        return False
    covered: set[tuple[int, int]] = set()
    for e in g.edges:
        covered.update(itertools.combinations(e, 2))
    for c in itertools.combinations(range(1, g.n + 1), p):
        if all(pr in covered for pr in itertools.combinations(c, 2)):
            if contains(induced(g, c), pattern) is not None:
                return True
    return False


# ---------------------------------------------------------------------------
# dense and left-compressed rewriting


_K8_FLOOR = comb(8, 3) / 8**3 - 0.005


def left_compress_loop(g: Hypergraph, t: int, lambda_floor: float | None = None,
                       config: OptimizerConfig = DEFAULT_CONFIG,
                       max_rounds: int | None = None) -> Hypergraph:
    """Rewrite a path-free 3-graph into a dense, left-compressed, path-free
    one of no smaller Lagrangian.

    Each round takes a dense subgraph with the same optimum, relabels by
    descending optimum weight (ties broken by current id), and applies one
    compression toward a smaller index; compression preserves path-freeness
    on the inputs this loop accepts.  For t=4 the input must have optimum
    at least ``lambda_floor`` (default the near-complete threshold), the
    precondition under which compressions cannot create the length-4 path.

    Termination: after the weight-ordered relabeling, a compression moves
    every rerouted edge strictly down in componentwise rank, so the sum of
    vertex ids over edges strictly decreases within a round; a generous
    round cap guards the alternation with relabeling.
    """
    if g.r != 3:
        raise ValueError(f"needs a 3-uniform graph, got r={g.r}")
    if t not in (3, 4):
        raise ValueError(f"loop supports path lengths 3 and 4, got {t}")
    if contains_linear_path(g, t) is not None:
        raise ValueError(f"input contains a linear path of length {t}")
    if t == 4:
        if lambda_floor is None:
            lambda_floor = _K8_FLOOR
        if maximize(g, config).value < lambda_floor - 1e-9:
            raise ValueError(
                f"optimum below the required floor {lambda_floor:.6f} for t=4 rewriting")
    cur = g
    rounds = 0
    cap = max_rounds if max_rounds is not None else 60 + 12 * comb(max(g.n, 3), 3)
    while True:
        rounds += 1
        if rounds > cap:
            raise RuntimeError("left_compress_loop failed to terminate within the round cap")
        cur, opt = densify(cur, config)
        ws = opt.weighting.as_floats()
        order = sorted(range(1, cur.n + 1), key=lambda v: (-ws[v - 1], v))
        mapping = {old: new for new, old in enumerate(order, start=1)}
        cur = relabel(cur, mapping)
        moved = None
        for j in range(2, cur.n + 1):
            for i in range(1, j):
                if link_diff(cur, j, i):
                    moved = (i, j)
                    break
            if moved:
                break
        if moved is None:
            return cur
        cur = compress(cur, *moved)
        if contains_linear_path(cur, t) is not None:
            raise RuntimeError(
                f"compression {moved} created a length-{t} path; loop preconditions violated")


# ---------------------------------------------------------------------------
# symmetrization and cleaning


def _alpha_dense(edges: set, alive: list[int], r: int, alpha: float) -> bool:
    if not alive:
        return False
    deg = {v: 0 for v in alive}
    for e in edges:
        for v in e:
            deg[v] += 1
    need = alpha * comb(len(alive) - 1, r - 1)
    return min(deg.values()) >= need


def symmetrize_clean(g: Hypergraph, alpha: float, max_rounds: int | None = None) -> Hypergraph:
    """Iterate: pick two nonadjacent vertices with different links, the
    higher degree first (ties by smallest ids); give every vertex of the
    lower one's link-equality class a copy of the higher one's link; then
    while the graph is not alpha-dense (minimum degree at least alpha
    times the full degree), delete a minimum-degree vertex, except that a
    minimum-degree vertex inside the class just symmetrized *to* is spared
    and a just-symmetrized source vertex is deleted instead, while any
    remain.  Stops when no nonadjacent pair with different links is left;
    the survivors are renumbered 1..k in increasing original id.

    The result is a blowup of its induced subgraph on one representative
    per link-equality class.
    """
    if not 0 < alpha <= 1:
        raise ValueError(f"alpha must be in (0, 1], got {alpha}")
    alive = list(range(1, g.n + 1))
    edges = set(g.edges)
    cap = max_rounds if max_rounds is not None else 4 * g.n * g.n + 64
    for _round in range(cap):
        if not alive or not edges:
            break
        deg = {v: 0 for v in alive}
        links: dict[int, frozenset] = {v: frozenset() for v in alive}
        by_vertex: dict[int, list] = {v: [] for v in alive}
        for e in edges:
            for v in e:
                deg[v] += 1
                by_vertex[v].append(e)
        for v in alive:
            links[v] = frozenset(tuple(x for x in e if x != v) for e in by_vertex[v])
        adjacent: set[tuple[int, int]] = set()
        for e in edges:
            adjacent.update(itertools.combinations(sorted(e), 2))
        pick = None
        for u in alive:
            for v in alive:
                if u == v:
                    continue
                a, b = min(u, v), max(u, v)
                if (a, b) in adjacent or links[u] == links[v]:
                    continue
                if deg[u] >= deg[v]:
                    if pick is None or (u, v) < pick:
                        pick = (u, v)
        if pick is None:
            break
        u, v = pick
        cls_v = sorted(w for w in alive if links[w] == links[v])
        cls_u = set(w for w in alive if links[w] == links[u])
        for w in cls_v:
            edges = {e for e in edges if w not in e}
        for w in cls_v:
            for f in links[u]:
                if w not in f:
                    edges.add(tuple(sorted(f + (w,))))
        # cleaning: a graph with no edges left is cleaned down to nothing
        sources = list(cls_v)
        while alive and not (edges and _alpha_dense(edges, alive, g.r, alpha)):
            d = {x: 0 for x in alive}
            for e in edges:
                for x in e:
                    d[x] += 1
            z = min(alive, key=lambda x: (d[x], x))
            if z in cls_u and sources:
                victim = sources.pop(0)
            else:
                victim = z
            alive.remove(victim)
            edges = {e for e in edges if victim not in e}
        if not edges:
            break
    else:
        raise RuntimeError("symmetrize_clean failed to terminate within the round cap")
    keep = sorted(alive)
    mapping = {old: new for new, old in enumerate(keep, start=1)}
    out = sorted(tuple(sorted(mapping[v] for v in e)) for e in edges)
    return Hypergraph(g.r, len(keep), tuple(out))


# ---------------------------------------------------------------------------
# structure reports


@dataclass(frozen=True)
class StructureCheck:
    check: str
    violated: bool
    witness: EmbeddingMap | tuple | None = None

    def to_json(self) -> dict:
        out = {"check": self.check, "violated": self.violated}
        if isinstance(self.witness, EmbeddingMap):
            out["witness_embedding"] = self.witness.to_json()
        elif self.witness is not None:
            out["witness"] = list(self.witness)
        return out


@dataclass(frozen=True)
class StructureReport:
    checks: tuple[StructureCheck, ...]

    @property
    def violated(self) -> bool:
        return any(c.violated for c in self.checks)

    def to_json(self) -> dict:
        return {"checks": [c.to_json() for c in self.checks], "violated": self.violated}


def check_structures(g: Hypergraph, config: OptimizerConfig = DEFAULT_CONFIG) -> StructureReport:
    """Structural consequences a graph in this regime must satisfy.

    For a covering-pairs, length-4-path-free graph on at least 9 vertices:
    no disjoint pair of length-2 paths (F1) and no edge disjoint from a
    length-3 path (F2) may embed; when additionally the optimum is within
    0.005 of the near-complete threshold, no central triple with three
    pendant edges (F3) may embed.  For a dense graph on at least 5
    (resp. 4) vertices, some two edges intersect in exactly 1 (resp. 2)
    vertices.
    """
    checks: list[StructureCheck] = []
    if g.r == 3 and g.n >= 9 and contains_linear_path(g, 4) is None:
        # the freeness guarantees only bind covering-pairs graphs; scans on
        # other inputs still report witnesses (detector sanity) but are not
        # violations
        covering = covers_pairs(g)
        for name in ("F1", "F2"):
            w = contains(g, named(name))
            checks.append(StructureCheck(f"{name.lower()}-free", covering and w is not None, w))
        if covering and maximize(g, config).value >= _K8_FLOOR:
            w = contains(g, named("F3"))
            checks.append(StructureCheck("f3-free", w is not None, w))
    if g.r == 3 and g.n >= 4 and is_dense(g, config):
        for size, min_n in ((1, 5), (2, 4)):
            if g.n >= min_n:
                found = None
                for e1, e2 in itertools.combinations(g.edges, 2):
                    if len(set(e1) & set(e2)) == size:
                        found = (e1, e2)
                        break
                checks.append(StructureCheck(
                    f"intersecting-pair-{size}", found is None, found))
    return StructureReport(tuple(checks))
