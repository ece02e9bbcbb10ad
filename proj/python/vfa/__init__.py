"""Blackjack draw experiments and distribution-shift tests.

Thin wrapper over the C++ core: configs and bundles are plain dicts here and
JSON text on the C++ side.
"""
import json as _json

from . import _vfa
from ._vfa import (
    ConfigError,
    DataQualityError,
    DivergenceUndefinedError,
    IoError,
    LoadError,
    TestDegenerateError,
    TrialLog,
    UsageError,
    VfaError,
    anderson_darling_k,
    chi_squared_gof,
    chi_squared_sf,
    dealer_should_hit,
    detect_shift,
    hand_value,
    kl_divergence,
    load_log,
    parse_log,
    parse_rank,
    player_should_hit,
    regularized_gamma_q,
    to_probabilities,
)

__all__ = [
    "ConfigError", "DataQualityError", "DivergenceUndefinedError", "IoError", "LoadError",
    "TestDegenerateError", "TrialLog", "UsageError", "VfaError",
    "analyze", "anderson_darling_k", "baseline", "chi_squared_gof", "chi_squared_sf", "config_hash",
    "dealer_should_hit", "detect_shift", "hand_value", "kl_divergence", "load_log", "parse_log",
    "parse_rank", "play_scripted", "player_should_hit", "regularized_gamma_q", "render_report",
    "run", "summary", "to_probabilities",
]


def run(config, output=None, resume=False):
    """Run an experiment described by a config dict; returns a TrialLog."""
    return _vfa.run_experiment(_json.dumps(config), output, resume)


def baseline(seed=0, trials=1000, output=None, parallelism=0, experiment_id="baseline"):
    """Control run with a freshly shuffled deck per hand."""
    config = {"experiment_id": experiment_id, "agent": "control", "seed": seed, "trials": trials,
              "parallelism": parallelism}
    return run(config, output)


def config_hash(config):
    return _vfa.config_hash(_json.dumps(config))


def play_scripted(cards):
    """Play one hand with a fixed draw order; returns the trial record as a dict."""
    return _json.loads(_vfa.play_scripted(list(cards)))


def summary(log):
    return _json.loads(log.summary_json())


def analyze(observed, control, smoothing_alpha=0.5):
    """Four shift comparisons (cards and final totals, per actor) as a dict."""
    return _json.loads(_vfa.analyze(observed, control, smoothing_alpha))


def render_report(bundle, format="table"):
    return _vfa.render_report(_json.dumps(bundle), format)
