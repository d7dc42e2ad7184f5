"""The logger is used to write line-delimited json records: the training log and the evaluation records."""
import os
import json
import time

class Logger:
    """
    A logger stores one json object per line.
    It is used to follow the training (epoch, mean loss, validation ERR) and to save the evaluation records.

    Params:
    ----
    - path: str, the file of the log. Its folder is created if needed.
    - debug: bool, whether the debugging records are written.
    - stamp: bool, whether a 'timestamp' (ms since the creation of the logger) is added to every record.
    Reports that must be reproducible byte for byte are written with stamp=False.
    - flush_frequency: int, the minimal time between two flushes, in ms.
    """
    def __init__(self, path: str, debug: bool = False, stamp: bool = True, flush_frequency: int = 5000, append: bool = False) -> None:

        self.path = path
        self.debug = debug
        self.stamp = stamp
        self.flush_frequency = flush_frequency
        self._start = time.monotonic()
        self._last_flush = self._start
        self._file = None
        folder = os.path.dirname(os.path.abspath(path))
        os.makedirs(folder, exist_ok=True)
        self._file = open(path, 'a' if append else 'w', encoding='utf-8') # pylint: disable=consider-using-with
        # The file stays open while the logger lives, records are frequent.

    def write(self, data: dict, is_it_debugging: bool = False):
        """
        Write a new line in the log.

        Params:
        ----
        data: dict, the data to save in the log.
        is_it_debugging: bool, specify if the line is for debugging or not.
        """
        if self._file is None:
            return
        if self.debug or not is_it_debugging:
            record = dict(data)
            if self.stamp:
                record['timestamp'] = int((time.monotonic() - self._start) * 1000)
            json.dump(record, self._file, sort_keys=True)
            self._file.write('\n')
            self.update()

    def update(self):
        """Flush the file if the last flush is old enough."""
        now = time.monotonic()
        if (now - self._last_flush) * 1000 > self.flush_frequency:
            self._file.flush()
            self._last_flush = now

    def close(self):
        """Close the file."""
        if self._file is not None:
            self._file.close()
            self._file = None

    def __enter__(self):
        return self

    def __exit__(self, *exc):
        self.close()

    def __del__(self):
        self.close()

def read_records(path: str) -> list[dict]:
    """Read the records of a log."""
    with open(path, 'r', encoding='utf-8') as f:
        return [json.loads(line) for line in f if line.strip()]
