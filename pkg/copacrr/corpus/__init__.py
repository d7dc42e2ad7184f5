"""The corpus package reads the documents, queries, judgments and runs of a TREC-style collection."""
from .documents import Document, Query, Corpus, tokenize, read_documents, read_queries, NO_YEAR
from .idf import compute_idf, normalize_idf
from .judgments import (
    Grade, Judgments, merge_labels, read_qrels, label_pair_name, LABEL_PAIRS, NREL, REL, HREL,
    MERGED_MAX_GRADE, RAW_MAX_GRADE
)
from .runs import RankedList, RunEntry, read_run, write_run, format_run

__all__ = ['Document', 'Query', 'Corpus', 'tokenize', 'read_documents', 'read_queries', 'NO_YEAR',
           'compute_idf', 'normalize_idf', 'Grade', 'Judgments', 'merge_labels', 'read_qrels', 'label_pair_name',
           'LABEL_PAIRS', 'NREL', 'REL', 'HREL', 'MERGED_MAX_GRADE', 'RAW_MAX_GRADE',
           'RankedList', 'RunEntry', 'read_run', 'write_run', 'format_run']
