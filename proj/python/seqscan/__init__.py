"""Case/control change point segmentation of sequencing read streams."""

from ._core import (
    CombinedProcess,
    IntervalStat,
    cbs_segment,
    ci_band,
    cp_likelihoods,
    exhaustive_scan,
    glr,
    iterative_grid_scan,
    log_glr_full,
    match_changepoints,
    mbic,
    merge_reads,
    posterior_weights,
    score,
    segment,
    select_k,
    simulate,
    to_genomic,
)

__all__ = [
    "CombinedProcess",
    "IntervalStat",
    "cbs_segment",
    "ci_band",
    "cp_likelihoods",
    "exhaustive_scan",
    "glr",
    "iterative_grid_scan",
    "log_glr_full",
    "match_changepoints",
    "mbic",
    "merge_reads",
    "posterior_weights",
    "score",
    "segment",
    "select_k",
    "simulate",
    "to_genomic",
]
