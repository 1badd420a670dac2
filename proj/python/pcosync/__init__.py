"""Pulse-coupled oscillator synchronization toolkit.

Thin Python layer over the C++ core: phase response functions, coupling
topologies, the averaged-model integrator, the event-driven pulse
simulator, spectral rate bounds and Monte Carlo sweeps.
"""

import json as _json

from ._pcosync import (  # noqa: F401
    PI,
    PhaseResponseFunction,
    PrfBounds,
    Topology,
    Trajectory,
    check_inner_sync_conditions,
    check_invariance,
    compute_bounds,
    fit_rate,
    incidence_matrix,
    integrate,
    is_connected,
    laplacian,
    run_pulse_sim,
    symmetric_eigen,
    validate_admissibility,
    vector_field,
    verify_tanh_rate_monotonicity,
    wrap_to_pi,
    __version__,
)
from . import _pcosync as _core


def inner_rate_bound(topology, qg, ql, eps_bar, grid_points=10000):
    """Rate bound for deviations inside (-pi/2, pi/2), as a dict."""
    return _json.loads(_core.inner_rate_bound(topology, qg, ql, eps_bar, grid_points))


def outer_rate_bound(topology, qg, ql, eps_bar, grid_points=10000):
    """Rate bound for eps_bar in [pi/2, pi), as a dict."""
    return _json.loads(_core.outer_rate_bound(topology, qg, ql, eps_bar, grid_points))


def check_outer_sync_conditions(topology, qg, ql, eps_bar, grid_points=10000):
    """Outer-regime sufficient conditions with numeric margins, as a dict."""
    return _json.loads(_core.check_outer_sync_conditions(topology, qg, ql, eps_bar, grid_points))


def run_grid(config):
    """Run a Monte Carlo sweep from a config dict (or JSON string)."""
    if not isinstance(config, str):
        config = _json.dumps(config)
    return _json.loads(_core.run_grid(config))


def run_grid_file(path):
    """Run a Monte Carlo sweep from an experiment JSON file."""
    return _json.loads(_core.run_grid_file(str(path)))


def desync_census(config):
    """Count unsynchronized runs for a single-cell config dict/JSON string."""
    if not isinstance(config, str):
        config = _json.dumps(config)
    return _core.desync_census(config)
