import contextlib

import pytest

# criterion number -> (title, passed, detail); filled by the acceptance tests
CRITERIA: dict = {}


@contextlib.contextmanager
def criterion(number: int, title: str):
    """Record PASS only if the block finishes without an assertion or error."""
    detail: list = []
    CRITERIA[number] = (title, False, "did not finish")
    try:
        yield detail
    except BaseException as exc:
        CRITERIA[number] = (title, False, f"{type(exc).__name__}: {str(exc).splitlines()[0] if str(exc) else ''}")
        raise
    CRITERIA[number] = (title, True, "; ".join(detail))


@pytest.fixture(scope="session")
def corpus_2d():
    from makai.corpus import evaluate_corpus
    return evaluate_corpus(2)


@pytest.fixture(scope="session")
def corpus_3d():
    from makai.corpus import evaluate_corpus
    return evaluate_corpus(3)


@pytest.fixture(scope="session")
def corpus(corpus_2d, corpus_3d):
    return corpus_2d + corpus_3d


def pytest_terminal_summary(terminalreporter):
    if not CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(CRITERIA):
        title, ok, detail = CRITERIA[number]
        line = f"criterion {number:2d} {'PASS' if ok else 'FAIL'}  {title}"
        if detail:
            line += f"  [{detail}]"
        terminalreporter.write_line(line)
