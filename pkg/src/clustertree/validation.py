"""Independent oracles and the statistical validation experiments.

The oracles here deliberately avoid the sweep code path: components come
from explicitly materialized graphs, and the single-linkage reference is
driven by a minimum spanning tree from scipy.  The experiments draw from the
synthetic densities and report reproducible per-trial outcomes; acceptance
gates over their success rates live in the test suite.
"""

from __future__ import annotations

import operator
from dataclasses import dataclass, field
from typing import Union

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import connected_components as _cc
from scipy.sparse.csgraph import minimum_spanning_tree as _mst

from .estimators import EdgeRule, build_tree
from .geometry import PointSet, knn_radii, pairwise_distances
from .pruning import PrunedTree, prune
from .scales import ScaleParams, r_of_lambda
from .synthetic import (PiecewiseConstant1D, sample, separation_certificate,
                        sup_on_interval, true_level_components, two_bump)
from .tree import ClusterTree, MergeEvent

__all__ = [
    "ExperimentReport",
    "Violation",
    "brute_force_components",
    "single_linkage_oracle",
    "check_separation_connectedness",
    "knn_disconnection_experiment",
    "false_cluster_audit",
    "pruning_recovery_experiment",
    "hartigan_consistency_curve",
    "points_in_interval",
]


@dataclass
class ExperimentReport:
    """Everything needed to rerun and audit one experiment."""

    name: str
    trials: int
    successes: int
    skipped: int
    parameters: dict
    seeds: list
    metrics: dict
    per_trial: list = field(default_factory=list)

    def __post_init__(self):
        if not (0 <= self.successes <= self.trials):
            raise ValueError(
                f"successes {self.successes} outside 0..trials={self.trials}")

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "trials": self.trials,
            "successes": self.successes,
            "skipped": self.skipped,
            "parameters": self.parameters,
            "seeds": self.seeds,
            "metrics": self.metrics,
            "per_trial": self.per_trial,
        }


def _rule_adjacency(dist: np.ndarray, radii: np.ndarray, rule: EdgeRule, r: float) -> np.ndarray:
    """Literal edge predicate of each rule at radius r (no activation radii).

    The ball rule's "within distance alpha*r" is phrased as d/alpha <= r so
    the float rounding matches the stored merge radii; probing a partition at
    an exact threshold then lands on the same side in both code paths.
    """
    if rule.variant == "rsl":
        adj = dist / rule.alpha <= r
    elif rule.variant == "knn":
        adj = dist <= rule.alpha * np.maximum(radii[:, None], radii[None, :])
    else:
        adj = dist <= rule.alpha * np.minimum(radii[:, None], radii[None, :])
    np.fill_diagonal(adj, False)
    return adj


def brute_force_components(ps: PointSet, k: int, rule: EdgeRule, r: float) -> list[list[int]]:
    """Connected components of the literal graph at radius r.

    Materializes the vertex set {i : r_k(i) <= r} and the rule's edges, then
    runs a stock traversal (scipy's connected_components).  Shares nothing
    with the activation-radius sweep beyond the metric itself.
    """
    if not (r >= 0.0):
        raise ValueError(f"radius must be nonnegative, got {r}")
    radii = knn_radii(ps, k).radii
    active = np.flatnonzero(radii <= r)
    if len(active) == 0:
        return []
    dist = pairwise_distances(ps)
    adj = _rule_adjacency(dist, radii, rule, r)[np.ix_(active, active)]
    ncomp, labels = _cc(csr_matrix(adj), directed=False)
    comps = [[] for _ in range(ncomp)]
    for local, i in enumerate(active):
        comps[labels[local]].append(int(i))
    return sorted((sorted(c) for c in comps), key=lambda c: c[0])


def _brute_force_components_python(ps: PointSet, k: int, rule: EdgeRule, r: float,
                                   reverse: bool = False) -> list[list[int]]:
    """Pure-Python stack traversal of the same literal graph.

    Used to cross-check the scipy traversal under a different visit order
    (``reverse`` walks neighbors high-to-low).
    """
    if not (r >= 0.0):
        raise ValueError(f"radius must be nonnegative, got {r}")
    radii = knn_radii(ps, k).radii
    active = [int(i) for i in np.flatnonzero(radii <= r)]
    dist = pairwise_distances(ps)
    adj = _rule_adjacency(dist, radii, rule, r)
    active_set = set(active)
    seen: set[int] = set()
    comps: list[list[int]] = []
    order = list(reversed(active)) if reverse else active
    for start in order:
        if start in seen:
            continue
        comp = []
        stack = [start]
        seen.add(start)
        while stack:
            u = stack.pop()
            comp.append(u)
            neighbors = [int(v) for v in np.flatnonzero(adj[u]) if int(v) in active_set]
            if reverse:
                neighbors.reverse()
            for v in neighbors:
                if v not in seen:
                    seen.add(v)
                    stack.append(v)
        comps.append(sorted(comp))
    return sorted(comps, key=lambda c: c[0])


def single_linkage_oracle(ps: PointSet) -> ClusterTree:
    """Classical single linkage via an external minimum spanning tree.

    Births at nearest-neighbor distances, merges along MST edges in weight
    order.  Must agree event-for-event with the ball-growing sweep at
    (k=2, alpha=1, variant "rsl"); the test suite holds it to that.
    Requires pairwise-distinct points (zero-weight edges are invisible to
    the sparse MST representation).
    """
    n = ps.n
    if n < 2:
        raise ValueError(f"single linkage needs at least two points, got {n}")
    dist = pairwise_distances(ps)
    off = dist + np.diag(np.full(n, np.inf))
    nn = off.min(axis=1)
    if np.any(nn == 0.0):
        raise ValueError("duplicate points are not supported by the MST oracle")

    mst = _mst(csr_matrix(dist)).tocoo()
    edges = sorted(
        (float(w), min(int(i), int(j)), max(int(i), int(j)))
        for i, j, w in zip(mst.row, mst.col, mst.data)
    )

    # standalone union bookkeeping, kept separate from the sweep's structure
    parent = list(range(n))
    comp_id = list(range(n))

    def find(i: int) -> int:
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    events: list[MergeEvent] = []
    birth_order = np.lexsort((np.arange(n), nn))
    bi = 0
    for w, i, j in edges:
        while bi < n and nn[birth_order[bi]] <= w:
            p = int(birth_order[bi])
            events.append(MergeEvent.birth(float(nn[p]), p))
            bi += 1
        ri, rj = find(i), find(j)
        if ri == rj:
            continue
        ida, idb = comp_id[ri], comp_id[rj]
        events.append(MergeEvent.merge(float(w), ida, idb))
        parent[rj] = ri
        comp_id[ri] = min(ida, idb)
    while bi < n:
        p = int(birth_order[bi])
        events.append(MergeEvent.birth(float(nn[p]), p))
        bi += 1

    return ClusterTree(n=n, events=events,
                       provenance={"estimator": "single-linkage-oracle", "k": 2, "alpha": 1.0})


def points_in_interval(ps: PointSet, interval: tuple[float, float]) -> list[int]:
    """Indices of 1-d points falling in the closed interval."""
    if ps.d != 1:
        raise ValueError("interval membership is defined for 1-d point sets")
    lo, hi = interval
    x = ps.points[:, 0]
    return [int(i) for i in np.flatnonzero((x >= lo) & (x <= hi))]


def _side_ok(labels: np.ndarray, side: list[int]) -> bool:
    """All of ``side`` born and inside a single component."""
    vals = labels[side]
    return bool(np.all(vals >= 0) and len(np.unique(vals)) == 1)


def check_separation_connectedness(density: PiecewiseConstant1D, n: int, p: ScaleParams,
                                   lam: float, trials: int, seed: int) -> ExperimentReport:
    """Monte Carlo check that certified clusters separate and cohere.

    Per trial, samples n points and builds both the ball-growing tree and the
    mutual k-NN tree with p's (k, alpha).  Success for a tree: at the radius
    of the certificate's level, the samples inside each certified side sit in
    one component each, and the two components differ.  Trials with an empty
    side are vacuous and reported as skipped; a level above the density's
    maximum leaves nothing to separate, so every trial is skipped.
    """
    if not true_level_components(density, lam):
        return ExperimentReport(
            name="separation-connectedness",
            trials=trials,
            successes=0,
            skipped=trials,
            parameters={"n": n, "k": p.k, "alpha": p.alpha, "c_delta": p.c_delta,
                        "delta": p.delta, "lambda": lam},
            seeds=[[int(seed), t] for t in range(trials)],
            metrics={"vacuous": True},
            per_trial=[{"seed": [int(seed), t], "skipped": True} for t in range(trials)],
        )
    cert = separation_certificate(density, lam)
    if cert is None:
        raise ValueError(f"density admits no separation certificate at level {lam}")
    r_star = r_of_lambda(cert.level, p)
    rules = (("rsl", EdgeRule("rsl", p.alpha)), ("mknn", EdgeRule("mknn", p.alpha)))
    counts = {name: 0 for name, _ in rules}
    both = 0
    skipped = 0
    per_trial = []
    seeds = []
    for t in range(trials):
        ts = [int(seed), t]
        seeds.append(ts)
        ps = sample(density, n, ts)
        in_a = points_in_interval(ps, cert.a)
        in_b = points_in_interval(ps, cert.a_prime)
        if not in_a or not in_b:
            skipped += 1
            per_trial.append({"seed": ts, "skipped": True})
            continue
        entry = {"seed": ts, "skipped": False}
        trial_all = True
        for name, rule in rules:
            tree = build_tree(ps, p.k, rule)
            labels = tree.labels_at(r_star)
            ok = (_side_ok(labels, in_a) and _side_ok(labels, in_b)
                  and labels[in_a[0]] != labels[in_b[0]])
            counts[name] += ok
            trial_all &= ok
            entry[f"{name}_ok"] = bool(ok)
        both += trial_all
        per_trial.append(entry)
    effective = trials - skipped
    metrics = {
        "r_star": r_star,
        "certificate_level": cert.level,
        "certificate_sigma": cert.sigma,
        "certificate_eps": cert.eps,
        "effective_trials": effective,
    }
    for name, _ in rules:
        metrics[f"{name}_successes"] = counts[name]
        metrics[f"{name}_rate"] = counts[name] / effective if effective else float("nan")
    return ExperimentReport(
        name="separation-connectedness",
        trials=trials,
        successes=both,
        skipped=skipped,
        parameters={"n": n, "k": p.k, "alpha": p.alpha, "c_delta": p.c_delta,
                    "delta": p.delta, "lambda": lam},
        seeds=seeds,
        metrics=metrics,
        per_trial=per_trial,
    )


def knn_disconnection_experiment(lam: float, big_lambda: float, k: int, alpha: float,
                                 n: int, trials: int, seed: int) -> ExperimentReport:
    """How often the mutual k-NN graph avoids bridging the first bump.

    Samples the two-bump profile and reports the fraction of trials in which
    no mutual edge joins the left dense region to the rest, over the whole
    graph (every vertex present).  The hypotheses under which at least 1/2
    is guaranteed are enforced up front.
    """
    k = operator.index(k)
    n = operator.index(n)
    if not (big_lambda > 32.0 * lam):
        raise ValueError(
            f"hypothesis failed: bump density {big_lambda} must exceed "
            f"32 * bridge density = {32.0 * lam}")
    if not (k <= big_lambda / (64.0 * lam)):
        raise ValueError(
            f"hypothesis failed: k={k} must not exceed bump/(64*bridge) = "
            f"{big_lambda / (64.0 * lam)}")
    if not (1.0 <= alpha <= 2.0):
        raise ValueError(f"hypothesis failed: alpha={alpha} must lie in [1, 2]")
    if k < 1:
        raise ValueError(f"k must be at least 1, got {k}")
    if k > n:
        raise ValueError(f"k={k} exceeds the number of points n={n}")

    density = two_bump(lam, big_lambda)
    boundary = density.segments[0][0]  # right edge of the left bump
    disconnected = 0
    per_trial = []
    seeds = []
    for t in range(trials):
        ts = [int(seed), t]
        seeds.append(ts)
        ps = sample(density, n, ts)
        x = ps.points[:, 0]
        radii = knn_radii(ps, k).radii
        left = x < boundary
        # necessary conditions for a crossing mutual edge; exact test on the rest
        cand_a = np.flatnonzero(left & (boundary - x <= alpha * radii))
        cand_b = np.flatnonzero(~left & (x - boundary <= alpha * radii))
        has_edge = False
        for a in cand_a:
            if has_edge:
                break
            for b in cand_b:
                d = x[b] - x[a]
                if d <= alpha * min(radii[a], radii[b]):
                    has_edge = True
                    break
        disconnected += not has_edge
        per_trial.append({"seed": ts, "crossing_edge": bool(has_edge),
                          "candidates": [int(len(cand_a)), int(len(cand_b))]})
    return ExperimentReport(
        name="mutual-knn-disconnection",
        trials=trials,
        successes=disconnected,
        skipped=0,
        parameters={"bridge_density": lam, "bump_density": big_lambda,
                    "k": k, "alpha": alpha, "n": n},
        seeds=seeds,
        metrics={"disconnected_fraction": disconnected / trials if trials else float("nan")},
        per_trial=per_trial,
    )


@dataclass(frozen=True)
class Violation:
    """Two disjoint tree components that one true cluster should contain."""

    component_a: tuple[int, float]   # (id, creation radius)
    component_b: tuple[int, float]
    level: float                     # min density over the union of members


def false_cluster_audit(tree: Union[ClusterTree, PrunedTree], density: PiecewiseConstant1D,
                        ps: PointSet) -> list[Violation]:
    """All pairs of disjoint components that co-inhabit one true cluster.

    For each pair of vertex-disjoint components (across all levels), the
    reference level is the minimum true density over their member points; the
    pair is flagged when one connected component of {f >= level} contains
    both member sets.  Points outside the support raise.
    """
    if ps.d != 1:
        raise ValueError("the audit is defined for 1-d point sets")
    index = tree.index if isinstance(tree, PrunedTree) else tree
    if index.n != ps.n:
        raise ValueError(f"tree has n={index.n} but the point set has n={ps.n}")
    x = ps.points[:, 0]
    fvals = np.array([density.value_at(xi) for xi in x])

    nr = index.node_radius
    par = index.node_parent
    total = index.node_count
    par_radius = np.where(par >= 0, nr[np.where(par >= 0, par, 0)], np.inf)
    # components that actually appear at some level: born, not swallowed by
    # an equal-radius parent merge
    eligible = np.flatnonzero(np.isfinite(nr) & (par_radius > nr))
    if len(eligible) < 2:
        return []

    order = index.leaf_order
    fo = fvals[order]
    xo = x[order]
    lo = np.empty(len(eligible), dtype=np.int64)
    hi = np.empty(len(eligible), dtype=np.int64)
    minf = np.empty(len(eligible))
    ext_lo = np.empty(len(eligible))
    ext_hi = np.empty(len(eligible))
    for row, v in enumerate(eligible):
        a, b = index.node_span(int(v))
        lo[row], hi[row] = a, b
        minf[row] = fo[a:b].min()
        ext_lo[row] = xo[a:b].min()
        ext_hi[row] = xo[a:b].max()

    disjoint = (hi[:, None] <= lo[None, :]) | (hi[None, :] <= lo[:, None])
    pair_level = np.minimum(minf[:, None], minf[None, :])

    flagged = np.zeros_like(disjoint)
    for level in np.unique(minf):
        comps = true_level_components(density, float(level))
        t_id = np.full(len(eligible), -1)
        for ci, (s, e) in enumerate(comps):
            inside = (ext_lo >= s) & (ext_hi <= e)
            t_id[inside & (t_id < 0)] = ci
        same = (t_id[:, None] == t_id[None, :]) & (t_id[:, None] >= 0)
        flagged |= disjoint & (pair_level == level) & same

    out = []
    iu, ju = np.nonzero(np.triu(flagged, k=1))
    comp_ids = index.node_component
    for a, b in zip(iu, ju):
        va, vb = int(eligible[a]), int(eligible[b])
        out.append(Violation(
            component_a=(int(comp_ids[va]), float(nr[va])),
            component_b=(int(comp_ids[vb]), float(nr[vb])),
            level=float(pair_level[a, b]),
        ))
    return out


def pruning_recovery_experiment(density: PiecewiseConstant1D, n: int, p: ScaleParams,
                                lam: float, eps: float, trials: int,
                                seed: int) -> ExperimentReport:
    """Does pruning keep certified clusters apart while erasing false ones?

    Requires the margin: sup of the density over the separator thickening
    strictly below (1 - 2*eps) * level - eps_tilde.  Per trial, builds the
    ball-growing tree, prunes with p, then records (i) whether the two
    certified sides remain separated and internally connected at the level's
    radius in the pruned tree, and (ii) the false-cluster audits of the raw
    and pruned trees.
    """
    cert = separation_certificate(density, lam)
    if cert is None:
        raise ValueError(f"density admits no separation certificate at level {lam}")
    if not (0 < eps < 1):
        raise ValueError(f"eps must lie in (0, 1), got {eps}")
    sep_sup = sup_on_interval(density, cert.separator - cert.sigma,
                              cert.separator + cert.sigma)
    margin = (1.0 - 2.0 * eps) * cert.level - p.eps_tilde
    if not (sep_sup < margin):
        raise ValueError(
            f"margin violated: separator density {sep_sup} must stay below "
            f"(1 - 2*eps) * level - eps_tilde = {margin}")
    r_star = r_of_lambda(cert.level, p)
    rule = EdgeRule("rsl", p.alpha)

    recovered = 0
    fragmented = 0
    clean_after = 0
    skipped = 0
    per_trial = []
    seeds = []
    for t in range(trials):
        ts = [int(seed), t]
        seeds.append(ts)
        ps = sample(density, n, ts)
        in_a = points_in_interval(ps, cert.a)
        in_b = points_in_interval(ps, cert.a_prime)
        if not in_a or not in_b:
            skipped += 1
            per_trial.append({"seed": ts, "skipped": True})
            continue
        tree = build_tree(ps, p.k, rule)
        pruned = prune(tree, p)
        labels = pruned.labels_at(r_star)
        sep_ok = (_side_ok(labels, in_a) and _side_ok(labels, in_b)
                  and labels[in_a[0]] != labels[in_b[0]])
        raw_bad = len(false_cluster_audit(tree, density, ps))
        pruned_bad = len(false_cluster_audit(pruned, density, ps))
        recovered += sep_ok
        if raw_bad > 0:
            fragmented += 1
            clean_after += pruned_bad == 0
        per_trial.append({"seed": ts, "skipped": False, "recovered": bool(sep_ok),
                          "raw_violations": raw_bad, "pruned_violations": pruned_bad})
    effective = trials - skipped
    return ExperimentReport(
        name="pruning-recovery",
        trials=trials,
        successes=recovered,
        skipped=skipped,
        parameters={"n": n, "k": p.k, "alpha": p.alpha, "c_delta": p.c_delta,
                    "eps_tilde": p.eps_tilde, "lambda": lam, "eps": eps},
        seeds=seeds,
        metrics={
            "r_star": r_star,
            "effective_trials": effective,
            "recovery_rate": recovered / effective if effective else float("nan"),
            "fragmented_trials": fragmented,
            "pruned_clean_trials": clean_after,
            "pruned_clean_rate": clean_after / fragmented if fragmented else float("nan"),
        },
        per_trial=per_trial,
    )


def hartigan_consistency_curve(density: PiecewiseConstant1D, p: ScaleParams, lam: float,
                               n_grid: list[int], trials: int, seed: int) -> ExperimentReport:
    """Disjointness probability of the two true clusters across sample sizes.

    For each n in the grid: sample, build the ball-growing tree with p's
    (k, alpha), and test whether the smallest clusters containing each true
    component's samples are vertex-disjoint.  Reports one empirical rate per
    grid point; consistency predicts the rates approach 1.
    """
    comps = true_level_components(density, lam)
    if len(comps) < 2:
        raise ValueError(f"level {lam} does not split the density into two clusters")
    side_a, side_b = comps[0], comps[1]
    rule = EdgeRule("rsl", p.alpha)
    rates = []
    counts = []
    skipped = 0
    seeds = []
    for gi, n in enumerate(n_grid):
        succ = 0
        eff = 0
        for t in range(trials):
            ts = [int(seed), gi, t]
            seeds.append(ts)
            ps = sample(density, int(n), ts)
            in_a = points_in_interval(ps, side_a)
            in_b = points_in_interval(ps, side_b)
            if not in_a or not in_b:
                skipped += 1
                continue
            tree = build_tree(ps, p.k, rule)
            succ += tree.disjoint_at(in_a, in_b)
            eff += 1
        rates.append(succ / eff if eff else float("nan"))
        counts.append([succ, eff])
    return ExperimentReport(
        name="hartigan-consistency-curve",
        trials=trials * len(n_grid),
        successes=int(sum(c[0] for c in counts)),
        skipped=skipped,
        parameters={"k": p.k, "alpha": p.alpha, "lambda": lam,
                    "n_grid": [int(n) for n in n_grid]},
        seeds=seeds,
        metrics={"rates": rates, "final_rate": rates[-1], "counts": counts},
        per_trial=[],
    )
