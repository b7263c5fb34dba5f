"""Mine structural change patterns from version-control history.

Successive file versions are parsed into aterms, diffed structurally, woven
into insertions/deletions/mutations with statement context, grouped by a
thresholded tree similarity, and generalized into templates by
antiunification.
"""

from .antiunify import antiunify2, antiunify_n, apply_substitution, render_template
from .aterm import AInt, AList, Appl, ATerm, MetaVar, equal, parse_aterm, render_aterm, size
from .diff import EditOp, EditTree, edit_trees, match_score
from .frontend import LanguageProfile, MINILANG, ingest_aterm_file, load_profile, parse_source
from .pipeline import RunConfig, RunReport, analyze, explain_group, run_pipeline
from .similarity import boolean_matrix, delta, distance_matrix, sweep_group_counts, threshold_groups
from .vcs import VersionPair, pair_to_changes, walk_history
from .weave import Change, ChangeKind, extract_changes, weave

__all__ = [
    "AInt", "AList", "Appl", "ATerm", "MetaVar", "equal", "parse_aterm", "render_aterm", "size",
    "EditOp", "EditTree", "edit_trees", "match_score",
    "LanguageProfile", "MINILANG", "ingest_aterm_file", "load_profile", "parse_source",
    "Change", "ChangeKind", "extract_changes", "weave",
    "boolean_matrix", "delta", "distance_matrix", "sweep_group_counts", "threshold_groups",
    "antiunify2", "antiunify_n", "apply_substitution", "render_template",
    "VersionPair", "pair_to_changes", "walk_history",
    "RunConfig", "RunReport", "analyze", "explain_group", "run_pipeline",
]  # fmt: skip
