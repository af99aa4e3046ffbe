# !/usr/bin/env python3

import os
import random
import tempfile
from pathlib import Path
from typing import Optional

import numpy as np


def set_seed(seed: Optional[int]) -> None:
    """set seed

    Args:
        seed (Optional[int]): fixed seed number
    """
    random.seed(seed)
    np.random.seed(seed)


def atomic_write_text(path: Path, text: str) -> Path:
    """write a text file atomically (temp file in the same directory, then rename)

    Args:
        path (Path): destination
        text (str): file content

    Returns:
        Path: destination
    """
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)

    fd, tmp_name = tempfile.mkstemp(prefix=f".{path.name}.", dir=path.parent)
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="\n") as stream:
            stream.write(text)
        os.replace(tmp_name, path)
    except BaseException:
        if os.path.exists(tmp_name):
            os.remove(tmp_name)
        raise

    return path
