import sys
from pathlib import Path

import pytest

from hegram.buckets import layout_for_buckets
from hegram.contexts import ContextConfig, PlainContext, SimulatedContext

REPO_ROOT = Path(__file__).resolve().parent.parent
FIXTURES_DIR = REPO_ROOT / "fixtures"

sys.path.insert(0, str(Path(__file__).resolve().parent))


@pytest.fixture
def layout10():
    return layout_for_buckets(0, 100, 10)


@pytest.fixture
def plain_ctx():
    ctx = PlainContext()
    ctx.keygen()
    return ctx


@pytest.fixture
def sim_ctx():
    ctx = SimulatedContext(ContextConfig(kind="simulated", rng_seed=42))
    ctx.keygen()
    return ctx


@pytest.fixture
def fixtures_dir():
    return FIXTURES_DIR
