"""
The documents module contains the documents and queries of a collection,
the tokenizer, and the readers of the document and query files.
"""
from dataclasses import dataclass, field
from collections import Counter
import logging
import os
import re

from .idf import compute_idf, normalize_idf
from ..error import DataError
from ..file import read_lines, read_text

LOGGER = logging.getLogger(__name__)

_SPLIT = re.compile(r'[\W_]+')
NO_YEAR = 'all'

def tokenize(text: str) -> list[str]:
    """Lowercase the text and split it on every non-alphanumeric character, dropping the empty tokens."""
    return [token for token in _SPLIT.split(text.lower()) if token]

@dataclass(frozen=True)
class Document:
    """A document of the collection: its id and its ordered lowercase terms, possibly none."""

    doc_id: str
    tokens: tuple[str, ...]

    def __post_init__(self):
        if not self.doc_id:
            raise DataError("A document must have a non-empty id.")

    @property
    def is_empty(self) -> bool:
        """Whether the document contains no term."""
        return not self.tokens

@dataclass(frozen=True)
class Query:
    """A query: its id, its terms, the normalized idf of every term and the year (topic set) it belongs to."""

    query_id: str
    tokens: tuple[str, ...]
    idf_norm: tuple[float, ...] = field(default=())
    year: str = NO_YEAR

    def __post_init__(self):
        if not self.tokens:
            raise DataError(f"The query {self.query_id} contains no term.")
        if self.idf_norm and len(self.idf_norm) != len(self.tokens):
            raise DataError(f"The query {self.query_id} has {len(self.tokens)} terms but {len(self.idf_norm)} idfs.")

def _read_tsv(path: str, min_columns: int):
    """Yield the line number and the columns of every non-empty line of a tab-separated file."""
    for number, line in read_lines(path):
        if not line.strip():
            continue
        columns = line.split('\t')
        if len(columns) < min_columns:
            raise DataError(f"{path}, line {number}: expected at least {min_columns} tab-separated columns.")
        yield number, columns

def read_documents(path: str) -> dict[str, Document]:
    """
    Read the documents of a collection.

    The path is either a directory of utf-8 text files named <doc_id>.txt,
    or a tab-separated file with the lines 'doc_id \\t text'.
    """
    documents = {}
    if os.path.isdir(path):
        for name in sorted(os.listdir(path)):
            if name.endswith('.txt'):
                doc_id = name[:-len('.txt')]
                documents[doc_id] = Document(doc_id, tuple(tokenize(read_text(os.path.join(path, name)))))
    else:
        for number, columns in _read_tsv(path, 1):
            doc_id = columns[0].strip()
            if not doc_id:
                raise DataError(f"{path}, line {number}: empty document id.")
            documents[doc_id] = Document(doc_id, tuple(tokenize('\t'.join(columns[1:]))))
    empty = sum(doc.is_empty for doc in documents.values())
    if empty:
        LOGGER.warning("%d documents of %s contain no term.", empty, path)
    return documents

def read_queries(path: str) -> list[tuple[str, tuple[str, ...], str]]:
    """Read a tab-separated query file with the lines 'query_id \\t text [\\t year]'."""
    queries = []
    for number, columns in _read_tsv(path, 2):
        tokens = tuple(tokenize(columns[1]))
        if not tokens:
            raise DataError(f"{path}, line {number}: the query {columns[0]} contains no term.")
        year = columns[2].strip() if len(columns) > 2 and columns[2].strip() else NO_YEAR
        queries.append((columns[0].strip(), tokens, year))
    return queries

class Corpus:
    """
    The corpus contains the documents and the queries of a collection.
    The document frequencies are computed over the documents, and used to weight the query terms.
    The corpus is not modified once loaded.
    """

    def __init__(self, documents: dict[str, Document], raw_queries: list[tuple[str, tuple[str, ...], str]]):
        self.documents = documents
        self.n_docs = max(1, len(documents))
        self.df = Counter()
        for doc in documents.values():
            self.df.update(set(doc.tokens))
        self.queries: dict[str, Query] = {}
        for query_id, tokens, year in raw_queries:
            idfs = [compute_idf(min(self.df[t], self.n_docs), self.n_docs) for t in tokens]
            self.queries[query_id] = Query(query_id, tokens, tuple(normalize_idf(idfs)), year)

    @classmethod
    def load(cls, docs_path: str, queries_path: str) -> 'Corpus':
        """Load a corpus from a document path and a query file."""
        return cls(read_documents(docs_path), read_queries(queries_path))

    def years(self) -> dict[str, list[str]]:
        """Return the query ids of every year, sorted."""
        years: dict[str, list[str]] = {}
        for query in self.queries.values():
            years.setdefault(query.year, []).append(query.query_id)
        return {year: sorted(ids) for year, ids in sorted(years.items())}

    def get_document(self, doc_id: str) -> Document | None:
        """Return the document, or None if its text is not available."""
        return self.documents.get(doc_id)
