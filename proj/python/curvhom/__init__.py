"""Curvature homogeneity tools for the metrics g_f = grad f (x) grad f + 2 dx.dy."""

import json

from ._core import (
    DomainError,
    Field,
    FitError,
    HypothesisError,
    ParseError,
    admissible_basis,
    alpha,
    alpha_closed_form,
    alpha_via_phi,
    build_R_phi,
    curvature,
    metric,
    nabla_curvature,
    recover_phi,
    second_ff,
)
from . import _core

__all__ = [
    "DomainError",
    "Field",
    "FitError",
    "HypothesisError",
    "ParseError",
    "admissible_basis",
    "alpha",
    "alpha_closed_form",
    "alpha_via_phi",
    "basis_dump",
    "build_R_phi",
    "curvature",
    "metric",
    "model_dump",
    "nabla_curvature",
    "recover_phi",
    "scan_alpha",
    "second_ff",
    "spectral",
    "tensor_dump",
    "verify",
]


def tensor_dump(field, x, y=None):
    """Same document as `curvhom tensors`."""
    return json.loads(_core._tensor_dump(field, x, y))


def model_dump(p):
    return json.loads(_core._model_dump(p))


def basis_dump(field, x, y=None, tol=1e-9):
    return json.loads(_core._basis_dump(field, x, y, tol))


def scan_alpha(field, axes):
    """axes: list of (start, stop, count). Returns (csv_text, summary_dict)."""
    csv, summary = _core._scan_alpha(field, [tuple(a) for a in axes])
    return csv, json.loads(summary)


def spectral(kind, field, x, n=50, seed=1729, tol=1e-7):
    return json.loads(_core._sample_constancy(kind, field, x, n, seed, tol))


def verify(field, theta=None, seed=1729, tol=None, points=10):
    """List of check dicts: name, residual, tolerance, pass, skipped, note."""
    return _core._run_verify(field, theta, seed, tol, points)
