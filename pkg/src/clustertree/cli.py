"""Command-line front door: build, cut, prune, draw, and validate trees.

Subcommands mirror the library:

    clustertree tree points.csv --k 5 --out tree.json
    clustertree cut tree.json --cut-r 0.25 --out labels.csv
    clustertree cut tree.json --cut-lambda 2.0 --c0 1 --out labels.csv
    clustertree prune tree.json --eps-tilde 0.5 --out pruned.json
    clustertree dendrogram tree.json --out tree.svg
    clustertree validate separation --n 1980 --k 40 --trials 20 --seed 1 --out rep.json

A JSON config file whose keys mirror the long flags can supply defaults for
any option; pass it with --config or point the CLUSTERTREE_CONFIG environment
variable at it.  Exit codes: 0 success, 2 usage, 3 bad data, 4 bad parameter.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys

import numpy as np

from .dendrogram import render_dendrogram
from .estimators import VARIANTS, EdgeRule, build_tree
from .pruning import prune
from .scales import SQRT2, ScaleParams, r_of_lambda
from .synthetic import two_bump
from .treeio import (DataError, read_config, read_points_csv, read_tree_json,
                     write_labels_csv, write_tree_json)
from .validation import (check_separation_connectedness, hartigan_consistency_curve,
                         knn_disconnection_experiment, pruning_recovery_experiment)

_CONFIG_ENV = "CLUSTERTREE_CONFIG"

EXPERIMENTS = ("separation", "disconnection", "pruning", "hartigan")


def _add_scale_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--delta", type=float, default=None,
                   help="confidence parameter in (0,1) (default 0.1)")
    p.add_argument("--c0", type=float, default=None,
                   help="deviation constant; C_delta = 2*c0*ln(2/delta). "
                        "Omit for C_delta = 0 (plug-in scale)")
    p.add_argument("--eps-tilde", type=float, default=None,
                   help="pruning aggressiveness (default 0)")


def build_parser() -> argparse.ArgumentParser:
    top = argparse.ArgumentParser(prog="clustertree",
                                  description="cluster tree estimation from samples")
    sub = top.add_subparsers(dest="command", required=True)

    pt = sub.add_parser("tree", help="build a cluster tree from a point CSV")
    pt.add_argument("input", help="CSV of points, one row per point")
    pt.add_argument("--k", type=int, default=None, help="neighborhood size")
    pt.add_argument("--alpha", type=float, default=None,
                    help="edge slack factor (default sqrt 2)")
    pt.add_argument("--rule", choices=VARIANTS, default=None,
                    help="graph rule (default rsl)")
    pt.add_argument("--out", required=True, help="output tree JSON path")
    pt.add_argument("--config", default=None)

    pc = sub.add_parser("cut", help="label points at a radius or density level")
    pc.add_argument("tree", help="tree JSON path")
    pc.add_argument("--cut-r", type=float, default=None, help="cut radius")
    pc.add_argument("--cut-lambda", type=float, default=None,
                    help="cut density level, mapped to a radius")
    _add_scale_flags(pc)
    pc.add_argument("--out", required=True, help="output labels CSV path")
    pc.add_argument("--config", default=None)

    pp = sub.add_parser("prune", help="prune a tree by level lookup")
    pp.add_argument("tree", help="tree JSON path")
    _add_scale_flags(pp)
    pp.add_argument("--prune-low-levels", action="store_const", const=True, default=None,
                    help="also reconnect everything above the low-density cutoff radius")
    pp.add_argument("--out", required=True, help="output pruned tree JSON path")
    pp.add_argument("--config", default=None)

    pd = sub.add_parser("dendrogram", help="render a tree as SVG")
    pd.add_argument("tree", help="tree JSON path")
    pd.add_argument("--width", type=int, default=None)
    pd.add_argument("--height", type=int, default=None)
    pd.add_argument("--max-leaves", type=int, default=None,
                    help="render cap (default 2000)")
    pd.add_argument("--out", required=True, help="output SVG path")
    pd.add_argument("--config", default=None)

    pv = sub.add_parser("validate", help="run a statistical validation experiment")
    pv.add_argument("experiment", choices=EXPERIMENTS)
    pv.add_argument("--lam", type=float, default=None,
                    help="bridge density of the synthetic profile (default 1)")
    pv.add_argument("--big-lambda", type=float, default=None,
                    help="bump density of the synthetic profile (default 4)")
    pv.add_argument("--level", type=float, default=None,
                    help="density level probed (default: the bump density)")
    pv.add_argument("--n", type=int, default=None, help="sample size per trial")
    pv.add_argument("--n-grid", default=None,
                    help="comma-separated sample sizes (hartigan only)")
    pv.add_argument("--k", type=int, default=None)
    pv.add_argument("--alpha", type=float, default=None)
    pv.add_argument("--eps", type=float, default=None,
                    help="separation slack for the pruning margin (default 0.2)")
    _add_scale_flags(pv)
    pv.add_argument("--trials", type=int, default=None)
    pv.add_argument("--seed", type=int, default=None)
    pv.add_argument("--out", required=True, help="output report JSON path")
    pv.add_argument("--config", default=None)
    return top


def _merge_config(args: argparse.Namespace) -> None:
    path = getattr(args, "config", None) or os.environ.get(_CONFIG_ENV)
    if not path:
        return
    cfg = read_config(path)
    for key, value in cfg.items():
        dest = key.replace("-", "_")
        if hasattr(args, dest) and getattr(args, dest) is None:
            setattr(args, dest, value)


def _require(args: argparse.Namespace, name: str):
    value = getattr(args, name.replace("-", "_"))
    if value is None:
        raise ValueError(f"missing required parameter --{name} (flag or config)")
    return value


def _c_delta(args: argparse.Namespace) -> float:
    delta = args.delta if args.delta is not None else 0.1
    if args.c0 is None:
        return 0.0
    return 2.0 * float(args.c0) * math.log(2.0 / delta)


def _scale_params(args: argparse.Namespace, n: int, k: int, d: int,
                  alpha: float) -> ScaleParams:
    return ScaleParams(
        n=n, k=k, d=d, alpha=alpha,
        delta=args.delta if args.delta is not None else 0.1,
        c_delta=_c_delta(args),
        eps_tilde=args.eps_tilde if args.eps_tilde is not None else 0.0,
    )


def _np_default(obj):
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, np.floating):
        return float(obj)
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    raise TypeError(f"not JSON serializable: {type(obj)}")


def _tree_meta(meta: dict, what: str) -> tuple[int, int, int, float]:
    for key in ("n", "d", "k", "alpha"):
        if meta.get(key) is None:
            raise DataError(f"tree JSON lacks {key!r}, required to {what}")
    return int(meta["n"]), int(meta["d"]), int(meta["k"]), float(meta["alpha"])


def cmd_tree(args: argparse.Namespace) -> int:
    ps = read_points_csv(args.input)
    k = int(_require(args, "k"))
    alpha = float(args.alpha) if args.alpha is not None else SQRT2
    rule = EdgeRule(args.rule or "rsl", alpha)
    tree = build_tree(ps, k, rule)
    write_tree_json(tree, ps.d, args.out)
    print(f"wrote {args.out}")
    return 0


def cmd_cut(args: argparse.Namespace) -> int:
    tree, meta = read_tree_json(args.tree)
    if (args.cut_r is None) == (args.cut_lambda is None):
        raise ValueError("cut needs exactly one of --cut-r and --cut-lambda")
    if args.cut_r is not None:
        r = float(args.cut_r)
    else:
        n, d, k, alpha = _tree_meta(meta, "map a density level to a radius")
        p = _scale_params(args, n, k, d, alpha)
        r = r_of_lambda(float(args.cut_lambda), p)
    write_labels_csv(args.out, tree.labels_at(r))
    print(f"wrote {args.out}")
    return 0


def cmd_prune(args: argparse.Namespace) -> int:
    tree, meta = read_tree_json(args.tree)
    n, d, k, alpha = _tree_meta(meta, "prune")
    p = _scale_params(args, n, k, d, alpha)
    pruned = prune(tree, p, reconnect_low_levels=bool(args.prune_low_levels))
    write_tree_json(pruned, d, args.out)
    print(f"wrote {args.out}")
    return 0


def cmd_dendrogram(args: argparse.Namespace) -> int:
    tree, _ = read_tree_json(args.tree)
    kwargs = {}
    if args.width is not None:
        kwargs["width"] = int(args.width)
    if args.height is not None:
        kwargs["height"] = int(args.height)
    if args.max_leaves is not None:
        kwargs["max_leaves"] = int(args.max_leaves)
    svg = render_dendrogram(tree, **kwargs)
    with open(args.out, "w", encoding="utf-8") as fh:
        fh.write(svg)
    print(f"wrote {args.out}")
    return 0


def cmd_validate(args: argparse.Namespace) -> int:
    lam = float(args.lam) if args.lam is not None else 1.0
    big = float(args.big_lambda) if args.big_lambda is not None else 4.0
    level = float(args.level) if args.level is not None else big
    k = int(_require(args, "k"))
    alpha = float(args.alpha) if args.alpha is not None else SQRT2
    trials = int(args.trials) if args.trials is not None else 100
    seed = int(args.seed) if args.seed is not None else 0

    if args.experiment == "disconnection":
        n = int(_require(args, "n"))
        report = knn_disconnection_experiment(lam, big, k=k, alpha=alpha, n=n,
                                              trials=trials, seed=seed)
    else:
        density = two_bump(lam, big)
        if args.experiment == "hartigan":
            grid_raw = _require(args, "n-grid")
            if isinstance(grid_raw, str):
                grid = [int(c) for c in grid_raw.split(",") if c.strip()]
            else:
                grid = [int(c) for c in grid_raw]
            p = _scale_params(args, max(grid), k, 1, alpha)
            report = hartigan_consistency_curve(density, p, level, grid, trials, seed)
        else:
            n = int(_require(args, "n"))
            p = _scale_params(args, n, k, 1, alpha)
            if args.experiment == "separation":
                report = check_separation_connectedness(density, n, p, level, trials, seed)
            else:
                eps = float(args.eps) if args.eps is not None else 0.2
                report = pruning_recovery_experiment(density, n, p, level, eps,
                                                     trials, seed)
    with open(args.out, "w", encoding="utf-8") as fh:
        json.dump(report.to_dict(), fh, indent=2, default=_np_default)
        fh.write("\n")
    print(f"wrote {args.out}")
    return 0


_DISPATCH = {
    "tree": cmd_tree,
    "cut": cmd_cut,
    "prune": cmd_prune,
    "dendrogram": cmd_dendrogram,
    "validate": cmd_validate,
}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        _merge_config(args)
        return _DISPATCH[args.command](args)
    except DataError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except (ValueError, TypeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 4


if __name__ == "__main__":
    sys.exit(main())
