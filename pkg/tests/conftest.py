import pytest

from lingroth.fixtures import load_corpus
from lingroth.grothendieck import GrCategory


@pytest.fixture(scope="session")
def corpus():
    return load_corpus()


@pytest.fixture(scope="session")
def gr(corpus):
    cache = {}

    def get(name):
        if name not in cache:
            cache[name] = GrCategory(corpus[name])
        return cache[name]

    return get


ACCEPTANCE = pytest.StashKey[dict]()


@pytest.fixture
def criterion(request):
    """Record one acceptance line; the verdict is FAIL unless the test body completes."""
    results = request.config.stash.setdefault(ACCEPTANCE, {})
    state = {}

    def start(number, title):
        state.update(number=number, title=title)
        results[number] = (title, False)

    yield start
    if state:
        failed = request.node.stash.get(_FAILED, False)
        results[state["number"]] = (state["title"], not failed)
        line = f"criterion {state['number']}: {'PASS' if not failed else 'FAIL'}  {state['title']}"
        print(line)


_FAILED = pytest.StashKey[bool]()


@pytest.hookimpl(wrapper=True)
def pytest_runtest_makereport(item, call):
    rep = yield
    if rep.when == "call" and rep.failed:
        item.stash[_FAILED] = True
    return rep


def pytest_terminal_summary(terminalreporter, config):
    results = config.stash.get(ACCEPTANCE, {})
    if not results:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(results):
        title, ok = results[number]
        terminalreporter.write_line(f"criterion {number}: {'PASS' if ok else 'FAIL'}  {title}")
