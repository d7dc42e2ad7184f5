"""
The table module contains the EmbeddingTable, the pre-trained word vectors,
with its word2vec text reader and its binary cache.
"""
import struct
import numpy as np

from ..error import DataError, CheckpointError
from ..file import atomic_write, read_lines

BINARY_MAGIC = b'CPEM'
BINARY_VERSION = 1

class EmbeddingTable:
    """
    An EmbeddingTable maps terms to vectors of the same dimension.
    The vectors are read-only: the embeddings are never trained.
    A term absent from the table is out of vocabulary (OOV): get returns None, never a zero vector.

    Params:
    ----
    - terms: the terms, in the order of the rows of the matrix.
    - vectors: array of shape (len(terms), dimension).
    """

    def __init__(self, terms: list[str], vectors: np.ndarray):
        vectors = np.array(vectors, dtype=np.float64)
        if vectors.ndim != 2 or vectors.shape[0] != len(terms):
            raise DataError(f"{len(terms)} terms cannot be paired with a matrix of shape {vectors.shape}.")
        if not np.all(np.isfinite(vectors)):
            raise DataError("The embedding vectors contain non-finite values.")
        self.terms = list(terms)
        self._index = {term: row for row, term in enumerate(self.terms)}
        if len(self._index) != len(self.terms):
            raise DataError("A term appears twice in the embedding table.")
        vectors.flags.writeable = False
        self._vectors = vectors
        norms = np.linalg.norm(vectors, axis=1, keepdims=True)
        units = np.divide(vectors, norms, out=np.zeros_like(vectors), where=norms > 0)
        units.flags.writeable = False
        self._units = units

    @property
    def dimension(self) -> int:
        """The dimension of the vectors."""
        return self._vectors.shape[1]

    @property
    def vectors(self) -> np.ndarray:
        """The read-only matrix of the vectors."""
        return self._vectors

    def __len__(self):
        return len(self.terms)

    def __contains__(self, term: str):
        return term in self._index

    def get(self, term: str) -> np.ndarray | None:
        """Return the vector of a term, or None if the term is out of vocabulary."""
        row = self._index.get(term)
        return None if row is None else self._vectors[row]

    def lookup(self, tokens, unit: bool = False) -> tuple[np.ndarray, np.ndarray]:
        """
        Return the matrix of the vectors of the tokens (zeros for the OOV tokens)
        and the boolean mask of the in-vocabulary tokens.
        With unit=True, the vectors are normalized (a zero vector stays zero).
        """
        rows = np.array([self._index.get(t, -1) for t in tokens], dtype=np.int64)
        mask = rows >= 0
        source = self._units if unit else self._vectors
        matrix = np.zeros((len(rows), self.dimension))
        matrix[mask] = source[rows[mask]]
        return matrix, mask

    def save_binary(self, path: str):
        """
        Save the table in the binary cache format: the magic bytes CPEM, the version (u16), the dimension (u32),
        the number of terms (u32), every term as a u16 byte length and its utf-8 bytes,
        then the matrix as little-endian 32 bits floats.
        """
        parts = [BINARY_MAGIC, struct.pack('<HII', BINARY_VERSION, self.dimension, len(self.terms))]
        for term in self.terms:
            encoded = term.encode('utf-8')
            parts.append(struct.pack('<H', len(encoded)))
            parts.append(encoded)
        parts.append(self._vectors.astype('<f4').tobytes())
        atomic_write(path, b''.join(parts))

    @classmethod
    def load_binary(cls, path: str) -> 'EmbeddingTable':
        """Load a table saved with save_binary."""
        with open(path, 'rb') as f:
            data = f.read()
        if data[:4] != BINARY_MAGIC:
            raise CheckpointError(f"{path} is not an embedding cache file.")
        try:
            version, dimension, count = struct.unpack_from('<HII', data, 4)
            if version != BINARY_VERSION:
                raise CheckpointError(f"{path}: unsupported embedding cache version {version}.")
            offset = 4 + struct.calcsize('<HII')
            terms = []
            for _ in range(count):
                (length,) = struct.unpack_from('<H', data, offset)
                offset += 2
                terms.append(data[offset:offset + length].decode('utf-8'))
                offset += length
            vectors = np.frombuffer(data, dtype='<f4', count=count * dimension, offset=offset)
        except (struct.error, ValueError, UnicodeDecodeError) as error:
            raise CheckpointError(f"{path}: truncated or corrupted embedding cache ({error}).") from error
        return cls(terms, vectors.reshape(count, dimension))

    @classmethod
    def load_word2vec_text(cls, path: str) -> 'EmbeddingTable':
        """Load a word2vec text file: a header 'count dim', then lines 'term v1 ... vdim'."""
        lines = read_lines(path)
        _, header = next(lines, (1, ''))
        header = header.split()
        if len(header) != 2:
            raise DataError(f"{path}, line 1: expected the header 'count dimension'.")
        try:
            count, dimension = int(header[0]), int(header[1])
        except ValueError as error:
            raise DataError(f"{path}, line 1: invalid header ({error}).") from error
        if count < 0 or dimension < 1:
            raise DataError(f"{path}, line 1: invalid header {count} {dimension}.")
        terms = []
        vectors = np.zeros((count, dimension))
        for number, line in lines:
            if not line.strip():
                continue
            columns = line.rstrip().split(' ')
            if len(columns) != dimension + 1:
                raise DataError(f"{path}, line {number}: expected a term and {dimension} values.")
            if len(terms) == count:
                raise DataError(f"{path}, line {number}: more vectors than the {count} announced.")
            try:
                vectors[len(terms)] = [float(v) for v in columns[1:]]
            except ValueError as error:
                raise DataError(f"{path}, line {number}: invalid number ({error}).") from error
            terms.append(columns[0])
        if len(terms) != count:
            raise DataError(f"{path}: {count} vectors announced but {len(terms)} found.")
        return cls(terms, vectors)

    @classmethod
    def load(cls, path: str) -> 'EmbeddingTable':
        """Load a table from the binary cache format or from the word2vec text format."""
        try:
            with open(path, 'rb') as f:
                magic = f.read(4)
        except FileNotFoundError as error:
            raise DataError(f"The embedding file {path} does not exist.") from error
        if magic == BINARY_MAGIC:
            return cls.load_binary(path)
        return cls.load_word2vec_text(path)

    def write_word2vec_text(self, path: str):
        """Save the table in the word2vec text format."""
        lines = [f"{len(self.terms)} {self.dimension}\n"]
        for term, vector in zip(self.terms, self._vectors):
            lines.append(term + ' ' + ' '.join(repr(float(v)) for v in vector) + '\n')
        atomic_write(path, ''.join(lines).encode('utf-8'))
