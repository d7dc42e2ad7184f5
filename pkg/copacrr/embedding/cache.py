"""
The cache module stores the inputs of the model as content-addressed .npy files,
so that the similarity matrices are computed once per (embeddings, query, document, dimensions).
"""
import io
import os
import numpy as np

from .table import EmbeddingTable
from .inputs import SimInput, build_sim_matrix, build_querysim, idf_row
from ..corpus import Query, Document
from ..file import get_file, atomic_write, content_key
from ..error import CheckpointError

SIM = 'sim'
QUERYSIM = 'querysim'

class SimCache:
    """
    The SimCache computes the SimInput of (query, document) pairs and stores them on disk.
    Every file is a .npy array named after the hash of everything its content depends on:
    - the sim entries depend on the embeddings, the query terms, the first l_d document terms, l_q and l_d.
    - the querysim entries depend on the embeddings, the query terms, the first l_d + w_c document terms, w_c and l_d.
    Changing w_c thus invalidates the querysim entries only.

    Params:
    ----
    - table: the embedding table.
    - embeddings_digest: str, the hash of the embedding file.
    - cache_dir: the cache directory, None for the default one.
    - persist: bool, with False nothing is written on disk.
    """

    def __init__(self, table: EmbeddingTable, embeddings_digest: str, cache_dir: str | None = None, persist: bool = True):
        self.table = table
        self.digest = embeddings_digest
        self.cache_dir = cache_dir
        self.persist = persist
        self.hits = 0
        self.misses = 0
        self.pair_hits = 0
        self.pair_misses = 0

    def sim_key(self, query: Query, doc: Document, l_q: int, l_d: int) -> str:
        """Return the name of the sim entry of a pair."""
        return content_key(SIM, self.digest, query.tokens, doc.tokens[:l_d], l_q, l_d)

    def querysim_key(self, query: Query, doc: Document, w_c: int, l_d: int) -> str:
        """Return the name of the querysim entry of a pair."""
        return content_key(QUERYSIM, self.digest, query.tokens, doc.tokens[:l_d + w_c], w_c, l_d)

    def _fetch(self, folder: str, key: str, compute) -> np.ndarray:
        path = get_file(folder, key + '.npy', self.cache_dir)
        if self.persist and os.path.exists(path):
            try:
                array = np.load(path, allow_pickle=False)
            except (ValueError, OSError) as error:
                raise CheckpointError(f"The cache file {path} is corrupted: {error}") from error
            self.hits += 1
            return array
        array = compute()
        self.misses += 1
        if self.persist:
            buffer = io.BytesIO()
            np.save(buffer, array, allow_pickle=False)
            atomic_write(path, buffer.getvalue())
        return array

    def sim(self, query: Query, doc: Document, l_q: int, l_d: int) -> np.ndarray:
        """Return the similarity matrix of a pair, from the cache if possible."""
        return self._fetch(SIM, self.sim_key(query, doc, l_q, l_d), lambda: build_sim_matrix(query, doc, self.table, l_q, l_d))

    def querysim(self, query: Query, doc: Document, w_c: int, l_d: int, q_vector: np.ndarray | None) -> np.ndarray:
        """
        Return the querysim vector of a pair, from the cache if possible.
        q_vector is None for the queries without any in-vocabulary term: their querysim is zero.
        """
        if q_vector is None:
            return np.zeros(l_d)
        return self._fetch(
            QUERYSIM, self.querysim_key(query, doc, w_c, l_d),
            lambda: build_querysim(query, doc, self.table, w_c, l_d, q_vector)
        )

    def sim_input(self, query: Query, doc: Document, l_q: int, l_d: int, w_c: int, q_vector: np.ndarray | None) -> SimInput:
        """Return the SimInput of a pair."""
        misses = self.misses
        sim_input = SimInput(
            sim=self.sim(query, doc, l_q, l_d),
            querysim=self.querysim(query, doc, w_c, l_d, q_vector),
            idf=idf_row(query, l_q),
            q_len=len(query.tokens),
            d_len=min(len(doc.tokens), l_d),
        )
        if self.misses == misses:
            self.pair_hits += 1
        else:
            self.pair_misses += 1
        return sim_input
