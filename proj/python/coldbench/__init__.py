"""Python access to the coldbench core: experiments, metrics, trace replay
and an in-process fridge service."""

import json as _json

from . import _core
from ._core import ConfigError, NotFound, compute_metrics, welch_t_test

__all__ = [
    "ConfigError",
    "FridgeService",
    "NotFound",
    "compute_metrics",
    "default_config",
    "generate_script",
    "replay",
    "run_experiment",
    "welch_t_test",
]


def default_config():
    """Built-in calibrated testbed configuration as a dict."""
    return _json.loads(_core.default_config_json())


def _config_text(config):
    return None if config is None else _json.dumps(config)


def run_experiment(flavor="soda", steps=50, seed=1, config=None):
    """Run one scripted experiment; returns {"summary": ..., "truths": [...]}."""
    return _json.loads(_core.run_experiment_json(flavor, steps, seed, _config_text(config)))


def replay(trace_text, config=None):
    """Detection events produced by replaying a trace."""
    return _json.loads(_core.replay_json(trace_text, _config_text(config)))


def generate_script(steps, items, positions=4, seed=1):
    """Step descriptions such as "add(coke,2)", "remove(coke,2)" or "none"."""
    return _json.loads(_core.generate_script_json(steps, list(items), positions, seed))


class FridgeService:
    """In-process event service with dict-based events."""

    def __init__(self, data_dir=None):
        self._svc = _core.FridgeService(None if data_dir is None else str(data_dir))

    def register_fridge(self):
        return self._svc.register_fridge()

    def publish(self, fridge_id, event):
        return self._svc.publish_json(fridge_id, _json.dumps(event))

    def state(self, fridge_id):
        return _json.loads(self._svc.state_json(fridge_id))

    def history(self, fridge_id):
        return _json.loads(self._svc.history_json(fridge_id))

    def poll(self, fridge_id, cursor=0, timeout_ms=0):
        return _json.loads(self._svc.poll_json(fridge_id, cursor, timeout_ms))
