"""The report module formats the evaluation results as aligned plain-text tables and json records."""
from typing import Sequence

from ..file import atomic_write
from ..logger import Logger

def _cell(value) -> str:
    if isinstance(value, float):
        return f"{value:.4f}"
    return str(value)

def format_table(header: Sequence[str], rows: Sequence[Sequence], title: str | None = None) -> str:
    """Return the rows as a table whose columns are aligned, the first one on the left and the others on the right."""
    cells = [[str(h) for h in header]] + [[_cell(v) for v in row] for row in rows]
    widths = [max(len(row[i]) for row in cells) for i in range(len(header))]
    lines = [title] if title else []
    for index, row in enumerate(cells):
        line = '  '.join(c.ljust(w) if i == 0 else c.rjust(w) for i, (c, w) in enumerate(zip(row, widths)))
        lines.append(line.rstrip())
        if index == 0:
            lines.append('  '.join('-' * w for w in widths))
    return '\n'.join(lines) + '\n'

def write_report(path: str, tables: Sequence[str], records: Sequence[dict]):
    """Write the tables in path and the records, one json object per line, in path.jsonl."""
    atomic_write(path, '\n'.join(tables).encode('utf-8'))
    with Logger(path + '.jsonl', stamp=False) as logger:
        for record in records:
            logger.write(record)
