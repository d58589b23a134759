import re

import pytest

from emoarc.ingest import LabeledCorpus, LabelScheme
from emoarc.lexstore import EmotionLexicon

_CRITERION = re.compile(r"test_acceptance\.py::test_(a\d+)_", re.IGNORECASE)
_titles: dict[str, str] = {}


def pytest_collection_modifyitems(items):
    for item in items:
        m = _CRITERION.search(item.nodeid)
        if m:
            doc = (item.function.__doc__ or item.name).strip().splitlines()[0]
            _titles[item.nodeid] = f"{m.group(1).upper():<4}{doc}"


def pytest_terminal_summary(terminalreporter):
    """One line per acceptance criterion, in collection order."""
    outcome = {}
    for key in ("passed", "failed", "skipped", "error"):
        for rep in terminalreporter.stats.get(key, []):
            if rep.nodeid in _titles and (rep.when == "call" or key != "passed"):
                outcome[rep.nodeid] = key.upper()
    if not outcome:
        return
    terminalreporter.section("acceptance criteria")
    for nodeid, title in _titles.items():
        if nodeid in outcome:
            terminalreporter.write_line(f"{outcome[nodeid]:<8}{title}")


@pytest.fixture
def tiny_corpus():
    return LabeledCorpus.from_lists(
        ["a", "b", "c", "d"], [0, 1, 1, 0], LabelScheme.continuous(0, 1), corpus_id="tiny"
    )


@pytest.fixture
def valence_lex():
    return EmotionLexicon("valence", "continuous", (-1.0, 1.0), {"good": 0.8, "bad": -0.6})
