import os

import pytest

from co3geo.suite import SuiteRunner

REPO = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))
GENS = os.path.join(REPO, "data", "co3_generators_276.txt")
CACHE = os.path.join(REPO, ".co3geo-cache")


@pytest.fixture(scope="session")
def runner():
    """One shared pipeline for everything touching the big group.

    The runner builds each stage lazily and memoizes it, so the whole
    test session pays for calibration, the Sylow model and the
    normalizer table exactly once.
    """
    return SuiteRunner(GENS, cache_dir=CACHE)


@pytest.fixture(scope="session")
def gens_path():
    return GENS
