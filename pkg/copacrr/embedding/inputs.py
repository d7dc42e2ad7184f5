"""
The inputs module builds the two inputs of the model for a (query, document) pair:
the term similarity matrix and the query-context similarity vector.
"""
from dataclasses import dataclass
import numpy as np

from .table import EmbeddingTable
from ..corpus import Query, Document
from ..error import ConfigError, DataError

def _cosine(a: np.ndarray, b: np.ndarray) -> float:
    """Cosine similarity, 0 when one of the vectors is zero."""
    norms = np.linalg.norm(a) * np.linalg.norm(b)
    if norms == 0:
        return 0.0
    return float(np.clip(np.dot(a, b) / norms, -1.0, 1.0))

def term_sim(a: str, b: str, table: EmbeddingTable) -> float:
    """
    Return the similarity of two terms: 1 for the same term (even out of vocabulary),
    the cosine of their vectors if both are in the table, 0 otherwise.
    """
    if a == b:
        return 1.0
    vec_a, vec_b = table.get(a), table.get(b)
    if vec_a is None or vec_b is None:
        return 0.0
    return _cosine(vec_a, vec_b)

def build_sim_matrix(query: Query, doc: Document, table: EmbeddingTable, l_q: int, l_d: int) -> np.ndarray:
    """
    Build the (l_q, l_d) similarity matrix of a query and a document.
    Only the first l_d document terms are kept, and the cells out of the query or the document are 0.
    """
    if len(query.tokens) > l_q:
        raise ConfigError(f"The query {query.query_id} has {len(query.tokens)} terms, more than l_q={l_q}.")
    if l_d < 1:
        raise ConfigError(f"l_d must be at least 1, got {l_d}.")
    sim = np.zeros((l_q, l_d))
    q_tokens = list(query.tokens)
    d_tokens = list(doc.tokens[:l_d])
    if not d_tokens:
        return sim
    q_units, _ = table.lookup(q_tokens, unit=True)
    d_units, _ = table.lookup(d_tokens, unit=True)
    block = np.clip(q_units @ d_units.T, -1.0, 1.0)
    exact = np.array(q_tokens, dtype=object)[:, None] == np.array(d_tokens, dtype=object)[None, :]
    block[exact] = 1.0
    sim[:len(q_tokens), :len(d_tokens)] = block
    return sim

def query_vec(query: Query, table: EmbeddingTable) -> np.ndarray:
    """Return the mean vector of the in-vocabulary terms of the query."""
    vectors, mask = table.lookup(query.tokens)
    if not mask.any():
        raise DataError(f"Every term of the query {query.query_id} is out of vocabulary.")
    return vectors[mask].mean(axis=0)

def context_vec(doc: Document, i: int, w_c: int, table: EmbeddingTable) -> np.ndarray:
    """
    Return the mean vector of the in-vocabulary terms of the window [i - w_c, i + w_c] of the document,
    clipped to the document, or a zero vector when the window contains no in-vocabulary term.
    """
    if not 0 <= i < len(doc.tokens):
        raise ValueError(f"The position {i} is out of the document {doc.doc_id} of length {len(doc.tokens)}.")
    window = doc.tokens[max(0, i - w_c):min(len(doc.tokens), i + w_c + 1)]
    vectors, mask = table.lookup(window)
    if not mask.any():
        return np.zeros(table.dimension)
    return vectors[mask].mean(axis=0)

def build_querysim(query: Query, doc: Document, table: EmbeddingTable, w_c: int, l_d: int, q_vector: np.ndarray = None) -> np.ndarray:
    """
    Build the querysim vector of length l_d: at each position j of the first l_d document terms,
    the cosine between the context vector of j and the query vector, 0 elsewhere.
    """
    if q_vector is None:
        q_vector = query_vec(query, table)
    querysim = np.zeros(l_d)
    length = min(len(doc.tokens), l_d)
    if length == 0:
        return querysim
    # the windows of the first l_d positions reach at most w_c terms further.
    reach = min(len(doc.tokens), l_d + w_c)
    vectors, mask = table.lookup(doc.tokens[:reach])
    sums = np.vstack([np.zeros(table.dimension), np.cumsum(vectors, axis=0)])
    counts = np.concatenate([[0], np.cumsum(mask)])
    positions = np.arange(length)
    low = np.maximum(0, positions - w_c)
    high = np.minimum(reach, positions + w_c + 1)
    window_counts = counts[high] - counts[low]
    window_sums = sums[high] - sums[low]
    contexts = np.divide(window_sums, window_counts[:, None], out=np.zeros_like(window_sums), where=window_counts[:, None] > 0)
    norms = np.linalg.norm(contexts, axis=1) * np.linalg.norm(q_vector)
    cosines = np.divide(contexts @ q_vector, norms, out=np.zeros(length), where=norms > 0)
    querysim[:length] = np.clip(cosines, -1.0, 1.0)
    return querysim

@dataclass(frozen=True)
class SimInput:
    """
    The inputs of the model for one (query, document) pair.

    - sim: (l_q, l_d) term similarities, 0 in the padded cells.
    - querysim: (l_d,) context-query similarities, 0 in the padded cells.
    - idf: (l_q,) normalized idf of the query terms, 0 for the padded rows.
    - q_len: the number of query terms.
    - d_len: the number of document terms kept, at most l_d.
    """

    sim: np.ndarray
    querysim: np.ndarray
    idf: np.ndarray
    q_len: int
    d_len: int

    @property
    def l_q(self) -> int:
        """The number of rows of the similarity matrix."""
        return self.sim.shape[0]

    @property
    def l_d(self) -> int:
        """The number of columns of the similarity matrix."""
        return self.sim.shape[1]

def idf_row(query: Query, l_q: int) -> np.ndarray:
    """Return the normalized idfs of the query padded with 0 to l_q."""
    idf = np.zeros(l_q)
    idf[:len(query.idf_norm)] = query.idf_norm
    return idf

def build_sim_input(query: Query, doc: Document, table: EmbeddingTable, l_q: int, l_d: int, w_c: int) -> SimInput:
    """Build both inputs of a (query, document) pair."""
    return SimInput(
        sim=build_sim_matrix(query, doc, table, l_q, l_d),
        querysim=build_querysim(query, doc, table, w_c, l_d),
        idf=idf_row(query, l_q),
        q_len=len(query.tokens),
        d_len=min(len(doc.tokens), l_d),
    )
