from pathlib import Path

import pytest


@pytest.fixture(autouse=True)
def workdir(tmp_path, monkeypatch):
    '''
    Runs each command line test in its own temporary directory, so relative
    --out and data paths never collide between tests.
    '''

    monkeypatch.chdir(tmp_path)
    yield Path(tmp_path)
