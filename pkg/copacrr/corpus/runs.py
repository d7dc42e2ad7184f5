"""The runs module contains the ranked lists of documents and the TREC run file reader and writer."""
from typing import NamedTuple, Iterable, Sequence
import logging

from ..error import DataError
from ..file import atomic_write, read_lines

LOGGER = logging.getLogger(__name__)

class RunEntry(NamedTuple):
    """A ranked document."""

    doc_id: str
    score: float
    rank: int

class RankedList:
    """
    A RankedList is the ordered list of documents returned for one query.
    Ranks start at 1, scores never increase with the rank and the documents are unique.
    """

    def __init__(self, query_id: str, entries: Sequence[RunEntry]):
        self.query_id = query_id
        self.entries = tuple(entries)
        seen = set()
        for position, entry in enumerate(self.entries):
            if entry.rank != position + 1:
                raise DataError(f"Query {query_id}: the document {entry.doc_id} has rank {entry.rank} at position {position + 1}.")
            if entry.doc_id in seen:
                raise DataError(f"Query {query_id}: the document {entry.doc_id} is ranked twice.")
            seen.add(entry.doc_id)
            if position and entry.score > self.entries[position - 1].score:
                raise DataError(f"Query {query_id}: the scores increase at rank {entry.rank}.")

    @classmethod
    def from_scores(cls, query_id: str, scored: Iterable[tuple[str, float]]) -> 'RankedList':
        """Rank the (doc_id, score) pairs by decreasing score, the ties keeping their given order."""
        ordered = sorted(scored, key=lambda pair: -pair[1])
        return cls(query_id, [RunEntry(doc_id, float(score), rank) for rank, (doc_id, score) in enumerate(ordered, start=1)])

    @property
    def doc_ids(self) -> list[str]:
        """The documents, in rank order."""
        return [entry.doc_id for entry in self.entries]

    def __len__(self):
        return len(self.entries)

    def __iter__(self):
        return iter(self.entries)

    def top(self, depth: int | None) -> 'RankedList':
        """Return the list truncated to its first depth documents."""
        if depth is None or depth >= len(self.entries):
            return self
        return RankedList(self.query_id, self.entries[:depth])

def read_run(path: str) -> list[RankedList]:
    """
    Read a TREC run file, whose lines are 'query_id Q0 doc_id rank score tag'.
    The documents of each query are ordered by rank. If the scores increase with the rank,
    the documents are re-sorted by decreasing score and a warning is logged.
    """
    rows: dict[str, list[tuple[int, float, str]]] = {}
    for number, line in read_lines(path):
        columns = line.split()
        if not columns:
            continue
        if len(columns) != 6:
            raise DataError(f"{path}, line {number}: expected 6 columns, got {len(columns)}.")
        query_id, _, doc_id, rank, score, _ = columns
        try:
            rows.setdefault(query_id, []).append((int(rank), float(score), doc_id))
        except ValueError as error:
            raise DataError(f"{path}, line {number}: invalid rank {rank} or score {score}.") from error

    lists = []
    for query_id, query_rows in rows.items():
        query_rows.sort(key=lambda row: row[0])
        scores = [score for _, score, _ in query_rows]
        if any(later > earlier for earlier, later in zip(scores, scores[1:])):
            LOGGER.warning("%s: the scores of query %s increase with the rank, the documents are re-sorted by score.", path, query_id)
        doc_ids = [doc_id for _, _, doc_id in query_rows]
        if len(set(doc_ids)) != len(doc_ids):
            raise DataError(f"{path}: a document is ranked twice for query {query_id}.")
        lists.append(RankedList.from_scores(query_id, [(doc_id, score) for _, score, doc_id in query_rows]))
    return lists

def format_run(lists: Iterable[RankedList], tag: str) -> str:
    """Return the TREC run lines of the ranked lists."""
    lines = []
    for ranked in lists:
        for entry in ranked:
            lines.append(f"{ranked.query_id} Q0 {entry.doc_id} {entry.rank} {entry.score:.6f} {tag}\n")
    return ''.join(lines)

def write_run(lists: Iterable[RankedList], path: str, tag: str):
    """Write the ranked lists as a TREC run file, atomically."""
    if not tag or any(c.isspace() for c in tag):
        raise DataError(f"The run tag must be a non-empty word, got '{tag}'.")
    atomic_write(path, format_run(lists, tag).encode('utf-8'))
