"""Condensed nearest neighbor and its Gaussian-kernel perceptron view."""

from ._core import (
    Dataset,
    Error,
    bound_infimum,
    cnn_bound,
    generate_blobs,
    generate_uniform,
    load_csv,
    margin,
    parse_csv,
    run_cnn,
    run_mp,
    sufficient_sigma,
    verify_neighborly,
)

__all__ = [
    "Dataset",
    "Error",
    "bound_infimum",
    "cnn_bound",
    "generate_blobs",
    "generate_uniform",
    "load_csv",
    "margin",
    "parse_csv",
    "run_cnn",
    "run_mp",
    "sufficient_sigma",
    "verify_neighborly",
]
