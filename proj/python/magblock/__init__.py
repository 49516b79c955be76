"""Weak-drive magnon blockade simulator."""

import json

from ._core import (
    IoError,
    NumericalError,
    SystemParams,
    ValidationError,
    __version__,
    effective_nonlinearity,
    eigenvalues_closed_form,
    eigenvalues_numeric,
    exceptional_point_coupling,
    g2_analytic,
    g2_numeric,
    optimal_detuning,
    preset_names,
    pt_region,
    reference_parameters,
    run_json,
    steady_state_amplitudes,
    steady_state_density,
    steady_state_linear_solve,
    validate,
)


def run(config=None, **overrides):
    """Run a sweep or preset from a flat config dict; returns a list of tables.

    Each table is a dict with name, columns, rows (2-D numpy array) and
    metadata (dict).
    """
    doc = dict(config or {})
    doc.update(overrides)
    tables = run_json(json.dumps(doc))
    for t in tables:
        t["metadata"] = json.loads(t["metadata"])
    return tables
