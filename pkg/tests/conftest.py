from pathlib import Path

import pytest
from hypothesis import settings

from intent_ran.harness.config import bundled_path
from intent_ran.intent_codec import load_intent
from intent_ran.ontology import build_knowledge_base
from intent_ran.sig import load_sig_json

settings.register_profile("default", deadline=None, max_examples=100)
settings.load_profile("default")

GOLDEN = Path(__file__).parent / "golden"


@pytest.fixture
def intent_path() -> Path:
    return bundled_path("energy_saving_intent.yaml")


@pytest.fixture
def intent_text(intent_path) -> str:
    return intent_path.read_text(encoding="utf-8")


@pytest.fixture
def doc(intent_path):
    return load_intent(intent_path)


@pytest.fixture
def sig_model():
    return load_sig_json(bundled_path("sig_model.json").read_text(encoding="utf-8"))


@pytest.fixture
def ontology(doc):
    return build_knowledge_base(doc)


ACCEPTANCE_KEY = pytest.StashKey[list]()


def pytest_configure(config):
    config.stash[ACCEPTANCE_KEY] = []


@pytest.fixture
def acceptance_log(request) -> list:
    return request.config.stash[ACCEPTANCE_KEY]


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    lines = config.stash.get(ACCEPTANCE_KEY, [])
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
