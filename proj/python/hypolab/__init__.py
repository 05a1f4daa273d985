"""Python access to the hypolab probes."""

import json as _json

from ._core import (
    Coefficient,
    HypolabError,
    __version__,
    barrier_params,
    ground_states,
    interpolation_constant,
    japanese_bracket,
    lambda_growth,
    mp_check,
    schema_version,
    split_point,
)
from ._core import run as _run


def run(config, seed=None):
    """Runs an experiment; `config` is a dict or JSON string. Returns (exit_code, report dict)."""
    text = config if isinstance(config, str) else _json.dumps(config)
    code, report = _run(text, seed)
    return code, _json.loads(report)


__all__ = [
    "Coefficient",
    "HypolabError",
    "__version__",
    "barrier_params",
    "ground_states",
    "interpolation_constant",
    "japanese_bracket",
    "lambda_growth",
    "mp_check",
    "run",
    "schema_version",
    "split_point",
]
