import os
import sys

import numpy as np
import pytest

ROOT = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))
GOLDEN_DIR = os.path.join(ROOT, "tests", "golden")
sys.path.append(ROOT)

from src.utils.logging_utils import set_verbosity  # noqa: E402


def pytest_addoption(parser):
    parser.addoption("--update-golden", action="store_true", default=False,
                     help="Rewrite tests/golden/*.txt from the current reports")


@pytest.fixture(autouse=True)
def quiet():
    set_verbosity(False)
    yield
    set_verbosity(True)


@pytest.fixture
def fixtures_dir():
    return os.path.join(ROOT, "fixtures")


@pytest.fixture
def rng():
    return np.random.default_rng(20240517)


@pytest.fixture(scope="session")
def cli():
    """scripts/causal_glue.py loaded as a module, so main() can be called in-process."""
    import importlib.util
    path = os.path.join(ROOT, "scripts", "causal_glue.py")
    spec = importlib.util.spec_from_file_location("causal_glue", path)
    module = importlib.util.module_from_spec(spec)
    spec.loader.exec_module(module)
    return module


@pytest.fixture
def golden(request):
    """
    Compare a report with tests/golden/<name>.txt.

    A missing file is recorded from the current report and the test is
    skipped; --update-golden rewrites every file.
    """
    update = request.config.getoption("--update-golden")

    def _check(name, text):
        path = os.path.join(GOLDEN_DIR, f"{name}.txt")
        if update or not os.path.exists(path):
            os.makedirs(GOLDEN_DIR, exist_ok=True)
            with open(path, "w", encoding="utf-8", newline="\n") as f:
                f.write(text)
            pytest.skip(f"recorded {os.path.relpath(path, ROOT)}")
        with open(path, "r", encoding="utf-8", newline="") as f:
            assert text == f.read()
    return _check
