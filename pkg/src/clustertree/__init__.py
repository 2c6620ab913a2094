"""Cluster tree estimation from samples.

Grows neighborhood graphs over a point set, records the birth/merge
filtration as a cluster tree, prunes spurious structure by level lookup, and
ships synthetic densities plus statistical experiments for checking the
estimator's separation, connectedness, and consistency behavior.
"""

from .dendrogram import render_dendrogram
from .estimators import EdgeRule, activation_schedule, build_tree, edge_activation
from .geometry import (KnnRadii, PointSet, distance, knn_radii, pairwise_distances,
                       unit_ball_volume)
from .pruning import PrunedTree, low_level_cutoff, lookup_radius, prune
from .scales import (ScaleParams, k_min_knn, lambda_tilde, lower_mass_threshold,
                     r_floor, r_of_lambda, sample_size_bound, upper_mass_threshold)
from .synthetic import (Blob, PiecewiseConstant1D, SeparatedBlobs, SeparationCertificate,
                        sample, separation_certificate, sup_on_interval,
                        true_level_components, two_bump)
from .tree import ClusterTree, MergeEvent, UnionFind
from .treeio import (DataError, read_points_csv, read_tree_json, write_labels_csv,
                     write_tree_json)
from .validation import (ExperimentReport, Violation, brute_force_components,
                         check_separation_connectedness, false_cluster_audit,
                         hartigan_consistency_curve, knn_disconnection_experiment,
                         pruning_recovery_experiment, single_linkage_oracle)

__version__ = "0.1.0"

__all__ = [
    "Blob",
    "ClusterTree",
    "DataError",
    "EdgeRule",
    "ExperimentReport",
    "KnnRadii",
    "MergeEvent",
    "PiecewiseConstant1D",
    "PointSet",
    "PrunedTree",
    "ScaleParams",
    "SeparatedBlobs",
    "SeparationCertificate",
    "UnionFind",
    "Violation",
    "activation_schedule",
    "brute_force_components",
    "build_tree",
    "check_separation_connectedness",
    "distance",
    "edge_activation",
    "false_cluster_audit",
    "hartigan_consistency_curve",
    "k_min_knn",
    "knn_disconnection_experiment",
    "knn_radii",
    "lambda_tilde",
    "low_level_cutoff",
    "lookup_radius",
    "lower_mass_threshold",
    "pairwise_distances",
    "prune",
    "pruning_recovery_experiment",
    "r_floor",
    "r_of_lambda",
    "render_dendrogram",
    "sample",
    "sample_size_bound",
    "separation_certificate",
    "single_linkage_oracle",
    "sup_on_interval",
    "true_level_components",
    "two_bump",
    "unit_ball_volume",
    "upper_mass_threshold",
    "write_labels_csv",
    "write_tree_json",
    "read_points_csv",
    "read_tree_json",
]
