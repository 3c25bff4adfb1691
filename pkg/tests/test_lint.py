#!/usr/bin/env python3

# Copyright (C) 2026 hdqlr developers
# This code is licensed under Apache License 2.0 (see LICENSE for details)

import glob
import shutil
import subprocess
from pathlib import Path

import pytest

import hdqlr

ROOT = Path(hdqlr.__file__).parent.parent


@pytest.fixture
def flake8():
    executable = shutil.which('flake8')
    if executable is None:
        pytest.skip('flake8 is not installed')
    return executable


def __filelist():
    files = glob.glob(str(ROOT / 'hdqlr' / '**' / '*.py'), recursive=True)
    files += glob.glob(str(ROOT / 'tests' / '*.py'))
    return sorted(files)


@pytest.mark.parametrize('file', __filelist())
def test_lint_flake8(flake8, file):
    result = subprocess.run([flake8, '--config', str(ROOT / '.flake8'), file],
                            capture_output=True, text=True)

    assert result.returncode == 0, result.stdout


if __name__ == '__main__':
    pytest.main(['-s', '-q', __file__])
