"""Bundled experiment defaults."""

import json
from functools import lru_cache
from pathlib import Path

from lambertw_tails.models import HillStudySpec

DEFAULTS_PATH = Path(__file__).parent.parent / "data" / "defaults.json"


@lru_cache(maxsize=1)
def load_defaults() -> dict:
    """Load the defaults JSON shipped with the package."""
    with open(DEFAULTS_PATH) as f:
        return json.load(f)


def default_study_spec(**overrides) -> HillStudySpec:
    """Hill study with the bundled nu grid and Lambert W x t parameters."""
    data = {**load_defaults()["hill_study"], **overrides}
    return HillStudySpec(**data)


def reference_fit(name: str) -> dict:
    return load_defaults()["latam_reference_fits"][name]
