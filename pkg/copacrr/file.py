"""
The file module contains the functions used to find, read and write the files of an experiment:
config files, caches, checkpoints and run files.
"""
from typing import Literal, Iterator
import os
import json
import hashlib
import tempfile
from functools import lru_cache

from .error import ConfigError, DataError

CACHE_ENV_VAR = 'COPACRR_CACHE_DIR'
_DEFAULT_CACHE_DIR = '.copacrr-cache'

def _open_json_file(path: str) -> dict:
    """Open any json file."""
    try:
        with open(path, 'r', encoding='utf-8') as f:
            return json.load(f)
    except FileNotFoundError as error:
        raise ConfigError(f"The file {path} does not exist.") from error
    except json.JSONDecodeError as error:
        raise ConfigError(f"The file {path} is not a valid json file: {error}") from error
    except UnicodeDecodeError as error:
        raise ConfigError(f"The file {path} is not valid utf-8 ({error.reason} at byte {error.start}).") from error

def get_cache_dir(configured: str | None = None) -> str:
    """
    Return the cache directory.

    The environment variable COPACRR_CACHE_DIR is used when no directory is configured.
    """
    if configured:
        return configured
    return os.environ.get(CACHE_ENV_VAR, _DEFAULT_CACHE_DIR)

def get_file(folder: Literal['sim', 'querysim', 'embeddings'], file: str, cache_dir: str | None = None):
    """
    Return the full path of a file of the cache.

    params:
    ----
    - folder: the folder of the file inside the cache.
    - file: the name of the file.
    - cache_dir: the configured cache directory, if any.
    """
    return os.path.join(get_cache_dir(cache_dir), folder, file).replace('\\', '/')

def load_json_file(path: str) -> dict:
    """Load a json file."""
    return _open_json_file(path)

def save_json_file(path: str, data: dict):
    """Save a json file, atomically."""
    atomic_write(path, json.dumps(data, indent=4, sort_keys=True).encode('utf-8'))

def atomic_write(path: str, data: bytes):
    """Write the bytes in a temporary file of the same folder then rename it to its final name."""
    folder = os.path.dirname(os.path.abspath(path))
    os.makedirs(folder, exist_ok=True)
    fd, tmp_path = tempfile.mkstemp(dir=folder, prefix='.tmp-')
    try:
        with os.fdopen(fd, 'wb') as f:
            f.write(data)
        os.replace(tmp_path, path)
    except BaseException:
        if os.path.exists(tmp_path):
            os.remove(tmp_path)
        raise

@lru_cache(maxsize=16)
def _file_digest(path: str, size: int, mtime: float) -> str:
    # size and mtime are part of the lru key so that a modified file is hashed again.
    sha = hashlib.sha256()
    with open(path, 'rb') as f:
        for chunk in iter(lambda: f.read(1 << 20), b''):
            sha.update(chunk)
    return sha.hexdigest()

def file_digest(path: str) -> str:
    """Return the sha256 of the content of a file."""
    stat = os.stat(path)
    return _file_digest(os.path.abspath(path), stat.st_size, stat.st_mtime)

def content_key(*parts) -> str:
    """Return a hexadecimal key hashing every part, used to name the content-addressed cache files."""
    sha = hashlib.sha256()
    for part in parts:
        if isinstance(part, (list, tuple)):
            part = '\x1f'.join(str(p) for p in part)
        sha.update(str(part).encode('utf-8'))
        sha.update(b'\x1e')
    return sha.hexdigest()

def read_lines(path: str) -> Iterator[tuple[int, str]]:
    """
    Yield the number and the text of every line of a utf-8 file, the line ending removed.
    A missing file or a line that is not valid utf-8 raises a DataError naming the file and the line.
    """
    try:
        with open(path, 'rb') as f:
            for number, raw in enumerate(f, start=1):
                try:
                    yield number, raw.decode('utf-8').rstrip('\r\n')
                except UnicodeDecodeError as error:
                    raise DataError(f"{path}, line {number}: not valid utf-8 ({error.reason} at byte {error.start}).") from error
    except FileNotFoundError as error:
        raise DataError(f"The file {path} does not exist.") from error

def read_text(path: str) -> str:
    """Return the content of a utf-8 file, raising a DataError when it is missing or not valid utf-8."""
    try:
        with open(path, 'rb') as f:
            data = f.read()
    except FileNotFoundError as error:
        raise DataError(f"The file {path} does not exist.") from error
    try:
        return data.decode('utf-8')
    except UnicodeDecodeError as error:
        line = data.count(b'\n', 0, error.start) + 1
        raise DataError(f"{path}, line {line}: not valid utf-8 ({error.reason} at byte {error.start}).") from error
