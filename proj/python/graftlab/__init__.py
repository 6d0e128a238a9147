"""Grafted collar numerics: chart invariants, seam variations, strip solves, identities."""

import json as _json

from ._graftlab import *  # noqa: F401,F403
from ._graftlab import verify as _verify


def verify_reports(**overrides):
    """Identity suite as a list of dicts; keyword arguments override config keys."""
    return _json.loads(_verify({k: str(v) for k, v in overrides.items()}))
