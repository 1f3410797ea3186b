import pytest
from hypothesis import strategies as st

from gentorsion.words import Word


def words(n_gens=2, max_size=12):
    letters = st.sampled_from([x for g in range(1, n_gens + 1) for x in (g, -g)])
    return st.lists(letters, max_size=max_size).map(Word)


@pytest.fixture
def fixtures_dir(tmp_path, monkeypatch):
    monkeypatch.setenv("GENTORSION_FIXTURES", str(tmp_path))
    return tmp_path


# one line per acceptance criterion, printed after the run
ACCEPTANCE: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE, key=lambda s: int(s.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)
