"""The judgments module contains the relevance grades of the TREC Web Track and the qrels reader."""
from enum import IntEnum
from itertools import combinations

from ..error import DataError
from ..file import read_lines

class Grade(IntEnum):
    """The six relevance levels of the TREC Web Track qrels."""

    JUNK = -2
    NREL = 0
    REL = 1
    HREL = 2
    KEY = 3
    NAV = 4

# The merged grades, after merge_labels
NREL = 0
REL = 1
HREL = 2
MERGED_MAX_GRADE = HREL
RAW_MAX_GRADE = int(Grade.NAV)

LABEL_PAIRS = {
    'HRel-NRel': (HREL, NREL),
    'HRel-Rel': (HREL, REL),
    'Rel-NRel': (REL, NREL),
}

_MERGE = {
    Grade.JUNK: NREL,
    Grade.NREL: NREL,
    Grade.REL: REL,
    Grade.HREL: HREL,
    Grade.KEY: HREL,
    Grade.NAV: None,
}

def merge_labels(grade: int) -> int | None:
    """
    Merge a raw grade into NRel (0), Rel (1) or HRel (2).
    Junk and NRel become NRel, HRel and Key become HRel, Nav is excluded (None).
    """
    try:
        return _MERGE[Grade(grade)]
    except ValueError as error:
        raise DataError(f"Unknown relevance grade code {grade}.") from error

def label_pair_name(high: int, low: int) -> str | None:
    """Return the name of the label pair of two merged grades, the first being higher."""
    for name, pair in LABEL_PAIRS.items():
        if pair == (high, low):
            return name
    return None

class Judgments:
    """
    The judgments map (query_id, doc_id) to a raw grade.
    The merged view maps the same keys to merged grades, without the Nav entries.
    """

    def __init__(self, grades: dict[tuple[str, str], int]):
        for grade in set(grades.values()):
            merge_labels(grade) # raises on an unknown code
        self._grades = dict(grades)
        self._merged = {}
        for key, grade in self._grades.items():
            merged = merge_labels(grade)
            if merged is not None:
                self._merged[key] = merged
        self._by_query: dict[str, dict[str, int]] = {}
        for (query_id, doc_id), grade in self._merged.items():
            self._by_query.setdefault(query_id, {})[doc_id] = grade
        self._raw_by_query: dict[str, dict[str, int]] = {}
        for (query_id, doc_id), grade in self._grades.items():
            self._raw_by_query.setdefault(query_id, {})[doc_id] = grade

    def __len__(self):
        return len(self._grades)

    def raw(self, query_id: str, doc_id: str) -> int | None:
        """Return the raw grade of a document, None if it is not judged."""
        return self._grades.get((query_id, doc_id))

    def merged(self, query_id: str, doc_id: str) -> int | None:
        """Return the merged grade of a document, None if it is not judged or is Nav."""
        return self._merged.get((query_id, doc_id))

    def grade(self, query_id: str, doc_id: str, merge: bool = True) -> int:
        """Return the grade used by the metrics: 0 for an unjudged document, raw grades are clipped at 0."""
        if merge:
            return self._merged.get((query_id, doc_id), 0)
        return max(0, self._grades.get((query_id, doc_id), 0))

    def query_ids(self) -> list[str]:
        """Return the sorted ids of the queries having a merged judgment."""
        return sorted(self._by_query)

    def for_query(self, query_id: str, merge: bool = True) -> dict[str, int]:
        """Return the judged documents of a query with their merged (or raw) grades."""
        return dict((self._by_query if merge else self._raw_by_query).get(query_id, {}))

    def graded_pairs(self, query_id: str) -> list[tuple[str, str, int, int]]:
        """
        Return every pair (higher doc, lower doc, higher grade, lower grade)
        of judged documents of a query with different merged grades, in a deterministic order.
        """
        docs = sorted(self._by_query.get(query_id, {}).items())
        pairs = []
        for (doc_a, grade_a), (doc_b, grade_b) in combinations(docs, 2):
            if grade_a > grade_b:
                pairs.append((doc_a, doc_b, grade_a, grade_b))
            elif grade_b > grade_a:
                pairs.append((doc_b, doc_a, grade_b, grade_a))
        return pairs

def read_qrels(path: str) -> Judgments:
    """Read a TREC qrels file, whose lines are 'query_id 0 doc_id grade'."""
    grades = {}
    for number, line in read_lines(path):
        columns = line.split()
        if not columns:
            continue
        if len(columns) != 4:
            raise DataError(f"{path}, line {number}: expected 4 columns, got {len(columns)}.")
        query_id, _, doc_id, grade = columns
        try:
            grade = int(grade)
        except ValueError as error:
            raise DataError(f"{path}, line {number}: the grade {grade} is not an integer.") from error
        try:
            merge_labels(grade)
        except DataError as error:
            raise DataError(f"{path}, line {number}: {error}") from error
        grades[(query_id, doc_id)] = grade
    return Judgments(grades)
