"""Evaluate and maximize the edge-monomial polynomial of a hypergraph over
the probability simplex, certify optima through first-order conditions,
and extract dense subgraphs.

The maximizer runs three strategies and keeps the best result:

* symmetry reduction — weight-exchangeable vertex classes collapse to
  single block variables with multiplicities, which solves complete and
  near-complete graphs essentially in closed form;
* projected gradient ascent with backtracking line search on the simplex,
  run batched over random restarts plus the uniform start;
* support enumeration on the reduced problem when it is small enough,
  as an exactness backstop.

The best point is polished by a guarded Newton iteration on the active
support, then certified: a result is "certified" only if its first-order
residual is below ``kkt_tol`` and eight extra random starts fail to beat
its value by more than ``kkt_tol``.  Certification is a stationarity
check, not a proof of global optimality; the value is always a valid
lower bound for the true maximum.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from math import comb

import numpy as np

from .hypergraph import Hypergraph, equivalence_classes, induced

__all__ = [
    "WeightVector",
    "OptimumResult",
    "OptimizerConfig",
    "evaluate",
    "gradient",
    "maximize",
    "closed_form",
    "ClosedForm",
    "motzkin_straus",
    "is_dense",
    "densify",
    "lagrangian_density_lower_bound",
]


# ---------------------------------------------------------------------------
# weight vectors


@dataclass(frozen=True)
class WeightVector:
    """A point of the standard simplex: n nonnegative weights of unit sum.

    mode "rational" (all entries Fraction, exact unit sum) or "float"
    (unit sum within 1e-12).
    """

    weights: tuple

    def __post_init__(self):
        ws = self.weights
        if any(w < 0 for w in ws):
            raise ValueError("weights must be nonnegative")
        if self.mode == "rational":
            if sum(ws, Fraction(0)) != 1:
                raise ValueError("rational weights must sum to exactly 1")
        elif ws and abs(math.fsum(ws) - 1.0) > 1e-12:
            raise ValueError("float weights must sum to 1 within 1e-12")

    @property
    def mode(self) -> str:
        return "rational" if self.weights and all(isinstance(w, Fraction) for w in self.weights) else "float"

    @property
    def n(self) -> int:
        return len(self.weights)

    @classmethod
    def uniform(cls, n: int) -> "WeightVector":
        return cls(tuple(Fraction(1, n) for _ in range(n)))

    def as_floats(self) -> tuple[float, ...]:
        return tuple(float(w) for w in self.weights)


def _coerce_weights(g: Hypergraph, x):
    ws = x.weights if isinstance(x, WeightVector) else tuple(x)
    if len(ws) != g.n:
        raise ValueError(f"weight vector has length {len(ws)}, graph has n={g.n}")
    if any(w < 0 for w in ws):
        raise ValueError("weights must be nonnegative")
    return ws


def evaluate(g: Hypergraph, x):
    """Sum over edges of the product of the member weights.  Exact when
    the weights are Fractions, compensated float summation otherwise."""
    ws = _coerce_weights(g, x)
    if ws and all(isinstance(w, Fraction) for w in ws):
        total = Fraction(0)
        for e in g.edges:
            p = Fraction(1)
            for v in e:
                p *= ws[v - 1]
            total += p
        return total
    terms = []
    for e in g.edges:
        p = 1.0
        for v in e:
            p *= ws[v - 1]
        terms.append(p)
    return math.fsum(terms)


def gradient(g: Hypergraph, x):
    """Partial derivatives: entry i sums, over edges through i, the product
    of the other member weights."""
    ws = _coerce_weights(g, x)
    rational = bool(ws) and all(isinstance(w, Fraction) for w in ws)
    if rational:
        out = [Fraction(0)] * g.n
        for e in g.edges:
            for v in e:
                p = Fraction(1)
                for u in e:
                    if u != v:
                        p *= ws[u - 1]
                out[v - 1] += p
        return out
    acc: list[list[float]] = [[] for _ in range(g.n)]
    for e in g.edges:
        for v in e:
            p = 1.0
            for u in e:
                if u != v:
                    p *= ws[u - 1]
            acc[v - 1].append(p)
    return [math.fsum(a) for a in acc]


# ---------------------------------------------------------------------------
# reduced block problem


class _BlockProblem:
    """max  sum_j c_j * prod_k y_k^(A_jk)  over the standard simplex.

    Built from a hypergraph by collapsing each weight-exchangeable class to
    one variable; ``mults[k]`` vertices share weight y_k / mults[k], and the
    coefficients absorb the multiplicities.
    """

    def __init__(self, expo: np.ndarray, coeffs: np.ndarray, mults: np.ndarray, classes):
        self.expo = expo          # (T, m) small nonneg ints
        self.coeffs = coeffs      # (T,)
        self.mults = mults        # (m,)
        self.classes = classes    # tuple of vertex tuples, aligned with columns
        self.m = expo.shape[1] if expo.size else len(mults)
        self.degree = int(expo.sum(axis=1).max()) if len(coeffs) else 0
        # monomials are homogeneous of the uniformity degree, so each term
        # is a degree-long multiset of columns; gather+product beats powers
        T = len(coeffs)
        self._cols = np.zeros((T, self.degree), dtype=np.int64)
        for t in range(T):
            c = []
            for k in range(self.m):
                c.extend([k] * int(expo[t, k]))
            self._cols[t] = c
        # gradient data: for variable k, terms touching k with k lowered once
        self._gcols = []
        for k in range(self.m):
            ak = expo[:, k] if T else np.zeros(0, dtype=np.int64)
            rows = np.nonzero(ak)[0]
            gc = np.zeros((len(rows), max(self.degree - 1, 0)), dtype=np.int64)
            for idx, t in enumerate(rows):
                c = []
                for l in range(self.m):
                    c.extend([l] * int(expo[t, l] - (1 if l == k else 0)))
                gc[idx] = c
            self._gcols.append((gc, (coeffs[rows] * ak[rows]) if len(rows) else np.zeros(0)))

    @classmethod
    def from_graph(cls, g: Hypergraph):
        part = equivalence_classes(g)
        classes = part.classes
        m = len(classes)
        idx = {}
        for k, c in enumerate(classes):
            for v in c:
                idx[v] = k
        mults = np.array([len(c) for c in classes], dtype=float)
        sig_counts: dict[tuple[int, ...], int] = {}
        for e in g.edges:
            sig = [0] * m
            for v in e:
                sig[idx[v]] += 1
            sig_counts[tuple(sig)] = sig_counts.get(tuple(sig), 0) + 1
        T = len(sig_counts)
        expo = np.zeros((T, m), dtype=np.int64)
        coeffs = np.zeros(T)
        for t, (sig, cnt) in enumerate(sorted(sig_counts.items())):
            expo[t] = sig
            # vertex weight = y_k / |class k|
            scale = 1.0
            for k, a in enumerate(sig):
                scale /= mults[k] ** a
            coeffs[t] = cnt * scale
        return cls(expo, coeffs, mults, classes)

    def value(self, Y: np.ndarray) -> np.ndarray:
        if not len(self.coeffs):
            return np.zeros(Y.shape[:-1])
        P = Y[..., self._cols].prod(axis=-1)
        return P @ self.coeffs

    def grad(self, Y: np.ndarray) -> np.ndarray:
        out = np.zeros_like(Y)
        for k in range(self.m):
            gc, cf = self._gcols[k]
            if len(cf):
                P = Y[..., gc].prod(axis=-1)
                out[..., k] = P @ cf
        return out

    def hessian(self, y: np.ndarray) -> np.ndarray:
        H = np.zeros((self.m, self.m))
        if not len(self.coeffs):
            return H
        expo = self.expo
        for k in range(self.m):
            ak = expo[:, k]
            rows = np.nonzero(ak)[0]
            if not len(rows):
                continue
            exk = expo[rows].copy()
            exk[:, k] -= 1
            cfk = self.coeffs[rows] * ak[rows]
            for l in range(self.m):
                al = exk[:, l]
                sel = np.nonzero(al)[0]
                if not len(sel):
                    continue
                ex2 = exk[sel].copy()
                ex2[:, l] -= 1
                P = np.prod(y[None, :] ** ex2, axis=-1)
                H[k, l] = np.dot(cfk[sel] * al[sel], P)
        return H

    def expand(self, y: np.ndarray) -> np.ndarray:
        """Block weights back to per-vertex weights."""
        n = sum(len(c) for c in self.classes)
        x = np.zeros(n)
        for k, c in enumerate(self.classes):
            w = y[k] / self.mults[k]
            for v in c:
                x[v - 1] = w
        return x


def _project_rows(V: np.ndarray) -> np.ndarray:
    """Euclidean projection of each row onto the standard simplex."""
    B, m = V.shape
    U = np.sort(V, axis=1)[:, ::-1]
    css = np.cumsum(U, axis=1) - 1.0
    j = np.arange(1, m + 1)
    cond = U - css / j > 0
    rho = m - 1 - np.argmax(cond[:, ::-1], axis=1)
    tau = css[np.arange(B), rho] / (rho + 1)
    return np.maximum(V - tau[:, None], 0.0)


def _pga(problem: _BlockProblem, Y0: np.ndarray, masks: np.ndarray | None, iters: int, tol: float):
    """Batched projected gradient ascent with backtracking line search.
    Rows with a support mask keep the masked-out coordinates at zero;
    stalled rows are retired from the batch as they converge."""
    outY = Y0.astype(float).copy()
    if masks is not None:
        outY = outY * masks
        s = outY.sum(axis=1, keepdims=True)
        s[s == 0] = 1.0
        outY /= s
    outF = problem.value(outY)
    idx = np.arange(len(outY))
    Y = outY.copy()
    F = outF.copy()
    M = masks.copy() if masks is not None else None
    eta = np.full(len(Y), 0.25)
    stall = np.zeros(len(Y), dtype=int)
    for _ in range(iters):
        G = problem.grad(Y)
        if M is not None:
            G = G * M
        cand = Y
        fc = F
        for _half in range(22):
            step = Y + eta[:, None] * G
            if M is not None:
                step = np.where(M > 0, step, -1e30)
            cand = _project_rows(step)
            fc = problem.value(cand)
            bad = fc < F
            if not bad.any():
                break
            eta = np.where(bad, eta * 0.5, eta)
        accept = fc >= F
        gain = np.where(accept, fc - F, 0.0)
        Y = np.where(accept[:, None], cand, Y)
        F = np.where(accept, fc, F)
        eta = np.where(accept, np.minimum(eta * 1.25, 1e3), eta)
        stall = np.where(gain < tol, stall + 1, 0)
        done = stall >= 5
        if done.any():
            outY[idx[done]] = Y[done]
            outF[idx[done]] = F[done]
            keep = ~done
            idx, Y, F, eta, stall = idx[keep], Y[keep], F[keep], eta[keep], stall[keep]
            if M is not None:
                M = M[keep]
            if not len(idx):
                break
    if len(idx):
        outY[idx] = Y
        outF[idx] = F
    return outY, outF


def _newton_polish(problem: _BlockProblem, y_in: np.ndarray, max_rounds: int = 8):
    """Sharpen a stationary point: Newton on the equal-partial system over
    the active support (with an explicit multiplier variable), then grow
    the support while any inactive variable has a partial above the common
    value, which is a first-order improvement direction.  Never returns a
    point worse than the input."""
    m = problem.m
    y = y_in.copy()
    support = set(np.nonzero(y > 1e-9)[0].tolist()) or {int(np.argmax(y))}
    y[[k for k in range(m) if k not in support]] = 0.0
    if y.sum() <= 0:
        return y_in
    y /= y.sum()
    for _round in range(max_rounds):
        support = {k for k in support if y[k] > 1e-12} or {int(np.argmax(y))}
        S = sorted(support)
        s = len(S)
        g = problem.grad(y[None, :])[0]
        mu = float(np.mean(g[S]))
        for _it in range(40):
            F = np.append(g[S] - mu, y[S].sum() - 1.0)
            base_res = float(np.max(np.abs(F)))
            if base_res < 1e-14:
                break
            H = problem.hessian(y)
            J = np.zeros((s + 1, s + 1))
            J[:s, :s] = H[np.ix_(S, S)]
            J[:s, s] = -1.0
            J[s, :s] = 1.0
            try:
                delta = np.linalg.solve(J, -F)
            except np.linalg.LinAlgError:
                break
            step = 1.0
            moved = False
            for _bt in range(30):
                y2 = y.copy()
                y2[S] = y[S] + step * delta[:s]
                mu2 = mu + step * delta[s]
                if (y2[S] >= -1e-12).all():
                    y2 = np.clip(y2, 0.0, None)
                    g2 = problem.grad(y2[None, :])[0]
                    F2 = np.append(g2[S] - mu2, y2[S].sum() - 1.0)
                    if float(np.max(np.abs(F2))) <= base_res * (1.0 - 0.2 * step) + 1e-16:
                        y, mu, g = y2, mu2, g2
                        moved = True
                        break
                step *= 0.5
            if not moved:
                break
        g = problem.grad(y[None, :])[0]
        val = float(problem.value(y[None, :])[0])
        grow = [k for k in range(m) if k not in support and g[k] > problem.degree * val + 1e-12]
        if not grow:
            break
        k = max(grow, key=lambda k: g[k])
        support.add(k)
        y[k] = max(y[k], 1e-4)
        y = y / y.sum()
    if float(problem.value(y[None, :])[0]) < float(problem.value(y_in[None, :])[0]):
        return y_in
    return y


# ---------------------------------------------------------------------------
# results and configuration


@dataclass(frozen=True)
class OptimizerConfig:
    restarts: int = 64
    seed: int = 0
    exact_support_n: int = 8
    kkt_tol: float = 1e-8
    iterations: int = 400
    value_tol: float = 1e-9

    def cheap(self) -> "OptimizerConfig":
        """Profile for bulk evaluation inside enumerations."""
        return OptimizerConfig(restarts=8, seed=self.seed, exact_support_n=0,
                               kkt_tol=self.kkt_tol, iterations=160, value_tol=self.value_tol)


DEFAULT_CONFIG = OptimizerConfig()


@dataclass(frozen=True)
class OptimumResult:
    value: float
    weighting: WeightVector
    support: tuple[int, ...]
    kkt_residual: float
    restarts: int
    mode: str
    certified: bool
    seed: int
    exact_value: Fraction | None = None
    exact_weights: tuple[Fraction, ...] | None = None

    def to_json(self) -> dict:
        out = {
            "value": self.value,
            "weights": list(self.weighting.as_floats()),
            "support": list(self.support),
            "kkt_residual": self.kkt_residual,
            "certified": self.certified,
            "seed": self.seed,
            "restarts": self.restarts,
            "mode": self.mode,
        }
        if self.exact_value is not None:
            out["exact_value"] = str(self.exact_value)
        return out


def _dirichlet(rng: np.random.Generator, rows: int, m: int) -> np.ndarray:
    z = rng.exponential(1.0, size=(rows, m))
    z /= z.sum(axis=1, keepdims=True)
    return z


def _try_rational_snap(g: Hypergraph, x: np.ndarray, value: float, support):
    """Snap weights to small rationals and verify stationarity exactly.
    Returns (exact_value, exact_weights) or None."""
    snapped = []
    for w in x:
        fr = Fraction(float(w)).limit_denominator(3150)
        if abs(float(fr) - float(w)) > 1e-9:
            return None
        snapped.append(fr)
    if sum(snapped, Fraction(0)) != 1:
        return None
    if any(w < 0 for w in snapped):
        return None
    exact_val = evaluate(g, snapped)
    if float(exact_val) < value - 1e-9:
        return None
    grads = gradient(g, snapped)
    target = g.r * exact_val
    for v in range(1, g.n + 1):
        if snapped[v - 1] > 0:
            if grads[v - 1] != target:
                return None
        elif grads[v - 1] > target:
            return None
    return exact_val, tuple(snapped)


def maximize(g: Hypergraph, config: OptimizerConfig = DEFAULT_CONFIG) -> OptimumResult:
    """Best Lagrangian value found together with its certificate data."""
    if g.n == 0 or not g.edges:
        ws = tuple([1.0 / g.n] * g.n) if g.n else ()
        support = tuple(range(1, g.n + 1))
        return OptimumResult(0.0, WeightVector(ws), support, 0.0, 0, "float", True, config.seed)

    problem = _BlockProblem.from_graph(g)
    m = problem.m
    rng = np.random.default_rng(config.seed)

    starts = [np.full((1, m), 1.0 / m)]
    masks = [np.ones((1, m))]
    if config.restarts > 0:
        starts.append(_dirichlet(rng, config.restarts, m))
        masks.append(np.ones((config.restarts, m)))
    if 0 < m <= config.exact_support_n and m > 1:
        sup_rows = []
        for bits in range(1, 2 ** m):
            row = np.array([(bits >> k) & 1 for k in range(m)], dtype=float)
            sup_rows.append(row)
        sup = np.array(sup_rows)
        starts.append(sup / sup.sum(axis=1, keepdims=True))
        masks.append(sup)
    Y0 = np.vstack(starts)
    M0 = np.vstack(masks)
    Y, f = _pga(problem, Y0, M0, config.iterations, 1e-14)
    best = int(np.argmax(f))
    y = _newton_polish(problem, Y[best])

    x = problem.expand(y)
    if x.sum() > 0:
        x = x / x.sum()

    # certification data in the original vertex space; the reported value
    # is recomputable as evaluate(g, weighting)
    value = float(evaluate(g, x.tolist()))
    grads = np.array(gradient(g, x.tolist()))
    support = tuple(int(v + 1) for v in np.nonzero(x > 1e-10)[0])
    if support:
        kkt = float(max(abs(grads[v - 1] - g.r * value) for v in support))
    else:
        kkt = 0.0

    extra = _dirichlet(np.random.default_rng(config.seed + 0x9E3779B9), 8, m)
    _, f_extra = _pga(problem, extra, np.ones_like(extra), config.iterations, 1e-14)
    beaten = float(f_extra.max(initial=0.0)) > value + config.kkt_tol
    certified = (kkt <= config.kkt_tol) and not beaten

    mode = "float"
    exact_value = None
    exact_weights = None
    if certified:
        snap = _try_rational_snap(g, x, value, support)
        if snap is not None:
            exact_value, exact_weights = snap
            mode = "rational-certified"
            value = float(exact_value)
            x = np.array([float(w) for w in exact_weights])
    wv = WeightVector(tuple(float(w) for w in x))
    return OptimumResult(value, wv, support, kkt, config.restarts, mode, certified,
                         config.seed, exact_value, exact_weights)


# ---------------------------------------------------------------------------
# closed forms


@dataclass(frozen=True)
class ClosedForm:
    value: float
    blocks: tuple[tuple[int, float], ...] | None = None  # (class size, per-vertex weight)


def closed_form(name: str, t: int | None = None, r: int = 3) -> ClosedForm:
    """Known exact optima for complete and near-complete graphs, plus the
    block bound for the completion of the 9-vertex pendant-star family.

    Names: "K" (needs t, r), "K4_minus", "K6_minus", "K8_minus",
    "F3_completion_bound".
    """
    key = name.replace("-", "_minus").replace("^", "").upper()
    if key == "K":
        if t is None:
            raise ValueError("closed_form('K') needs t")
        return ClosedForm(comb(t, r) / t**r, ((t, 1.0 / t),))
    if key == "K4_MINUS":
        # one free vertex weight a, three symmetric weights b; 3ab^2 with a+3b=1
        return ClosedForm(4.0 / 81.0, ((1, 1.0 / 3.0), (3, 2.0 / 9.0)))
    if key == "K6_MINUS":
        # a^3 - 3a^2 + a at its critical point a = (3 - sqrt 6)/3
        a = (3.0 - math.sqrt(6.0)) / 3.0
        return ClosedForm(a**3 - 3 * a**2 + a, ((3, a), (3, (1 - 3 * a) / 3)))
    if key == "K8_MINUS":
        a = (4.0 - math.sqrt(13.0)) / 3.0
        return ClosedForm((5 * a**3 - 20 * a**2 + 5 * a) / 3.0, ((5, a), (3, (1 - 5 * a) / 3)))
    if key == "F3_COMPLETION_BOUND":
        # blocks: 3 hub vertices at weight x, 6 pendant vertices at weight y
        y = (math.sqrt(873.0) - 15.0) / 162.0
        x = (1.0 - 6.0 * y) / 3.0
        return ClosedForm(x**3 + 8 * y**3 + 18 * x**2 * y + 45 * x * y**2, ((3, x), (6, y)))
    raise ValueError(f"unknown closed form {name!r}")


# ---------------------------------------------------------------------------
# graphs as quadratic programs


def motzkin_straus(g2: Hypergraph) -> tuple[float, int]:
    """For a 2-graph, the Lagrangian equals (1/2)(1 - 1/w) where w is the
    clique number; returns (lambda, w).  Edgeless graphs have w = 1."""
    if g2.r != 2:
        raise ValueError(f"needs a 2-uniform graph, got r={g2.r}")
    adj = [0] * (g2.n + 1)
    for (a, b) in g2.edges:
        adj[a] |= 1 << b
        adj[b] |= 1 << a
    best = 1 if g2.n else 0

    def expand(cand: int, size: int):
        nonlocal best
        while cand:
            if size + cand.bit_count() <= best:
                return
            v = (cand & -cand).bit_length() - 1
            cand &= cand - 1
            if size + 1 > best:
                best = size + 1
            expand(cand & adj[v], size + 1)

    full = 0
    for v in range(1, g2.n + 1):
        full |= 1 << v
    expand(full, 0)
    if best <= 1:
        return 0.0, best
    return 0.5 * (1.0 - 1.0 / best), best


# ---------------------------------------------------------------------------
# density


def is_dense(g: Hypergraph, config: OptimizerConfig = DEFAULT_CONFIG, strictness_tol: float = 1e-9) -> bool:
    """True iff deleting any single vertex strictly lowers the optimum.
    (Monotonicity under induced subgraphs makes single-vertex deletions
    sufficient.)  The empty graph is not dense by convention."""
    if not g.edges or g.n == 0:
        return False
    base = maximize(g, config).value
    for v in range(1, g.n + 1):
        sub = induced(g, [u for u in range(1, g.n + 1) if u != v])
        if maximize(sub, config).value >= base - strictness_tol:
            return False
    return True


def densify(g: Hypergraph, config: OptimizerConfig = DEFAULT_CONFIG, strictness_tol: float = 1e-9):
    """A dense subgraph with the same optimum value (within tolerance),
    found by repeatedly restricting to the support of a maximizer and
    dropping vertices whose deletion is not strict.  Returns the subgraph
    and its optimum."""
    cur = g
    while True:
        res = maximize(cur, config)
        if cur.n == 0 or not cur.edges:
            return cur, res
        if len(res.support) < cur.n:
            cur = induced(cur, res.support)
            continue
        weak = None
        for v in range(1, cur.n + 1):
            sub = induced(cur, [u for u in range(1, cur.n + 1) if u != v])
            if maximize(sub, config).value >= res.value - strictness_tol:
                weak = v
                break
        if weak is None:
            return cur, res
        cur = induced(cur, [u for u in range(1, cur.n + 1) if u != weak])


def lagrangian_density_lower_bound(g: Hypergraph, config: OptimizerConfig = DEFAULT_CONFIG,
                                   forbidden: Hypergraph | None = None) -> float:
    """r! times the optimum of a witness graph; the caller asserts the
    witness avoids the forbidden configuration (pass it to verify)."""
    if forbidden is not None:
        from .freeness import is_free

        if not is_free(g, forbidden):
            raise ValueError("witness graph contains the forbidden configuration")
    return math.factorial(g.r) * maximize(g, config).value
