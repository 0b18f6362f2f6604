import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from monocone.io import Catalog  # noqa: E402
from monocone.poset import Poset  # noqa: E402


@pytest.fixture(scope="session")
def catalog() -> Catalog:
    return Catalog.embedded()


def chain(n: int) -> Poset:
    els = [chr(ord("a") + i) for i in range(n)]
    return Poset.from_covers(els, list(zip(els, els[1:])), name=f"chain{n}")


def antichain(n: int) -> Poset:
    return Poset.from_covers([chr(ord("a") + i) for i in range(n)], [], name=f"antichain{n}")


def diamond() -> Poset:
    return Poset.from_covers("abcd", [("a", "b"), ("a", "c"), ("b", "d"), ("c", "d")], name="diamond")


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    lines = getattr(mod, "ACCEPTANCE_LINES", None)
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
