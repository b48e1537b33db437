"""Heisenberg group geometry and singular integral experiments."""

import json
import os

from ._heislab import *  # noqa: F401,F403
from ._heislab import _run, suite_names


def run(suite, params=None, seed=1, out="heislab_out", threads=0):
    """Run an experiment suite; returns the written files and the checks."""
    cfg = {"suite": suite, "seed": seed, "threads": threads, "out": os.fspath(out)}
    if params is not None:
        cfg[suite] = params
    return _run(json.dumps(cfg))


__all__ = [name for name in dir() if not name.startswith("_")]
