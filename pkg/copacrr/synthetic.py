"""
The synthetic module generates small collections with a planted relevance signal,
to train and compare the model variants without the TREC collections.

Two signals can be planted:
- ngram: the relevant documents contain the query terms as a contiguous n-gram, repeated for the highly relevant ones,
  while the non-relevant documents contain the same terms scattered.
- ambiguity: every query holds a polysemous term. All the documents contain it as often,
  but the relevant ones surround it with the query sense and the non-relevant ones with the other sense.
"""
from dataclasses import dataclass, field
from typing import Literal
import os
import numpy as np

from .embedding import EmbeddingTable
from .file import atomic_write, save_json_file
from .error import ConfigError

NGRAM = 'ngram'
AMBIGUITY = 'ambiguity'
MODES = (NGRAM, AMBIGUITY)

_QUERY_LENGTH = 3
_SENSE_WORDS = 12
_WINDOW = 4

@dataclass
class SyntheticCollection:
    """A generated collection: the vectors, the documents, the queries with their year, the grades and an initial run."""

    terms: list[str]
    vectors: np.ndarray
    documents: dict[str, list[str]] = field(default_factory=dict)
    queries: dict[str, tuple[list[str], str]] = field(default_factory=dict)
    grades: dict[tuple[str, str], int] = field(default_factory=dict)
    run: dict[str, list[tuple[str, float]]] = field(default_factory=dict)

    @property
    def table(self) -> EmbeddingTable:
        """The embedding table of the collection."""
        return EmbeddingTable(self.terms, self.vectors)

    @property
    def max_query_length(self) -> int:
        """The number of terms of the longest query."""
        return max(len(tokens) for tokens, _ in self.queries.values())

    @property
    def max_document_length(self) -> int:
        """The number of terms of the longest document."""
        return max(len(tokens) for tokens in self.documents.values())

class _Vocabulary:
    """Collect the terms and their vectors, in creation order."""

    def __init__(self, rng: np.random.Generator, dimension: int):
        self.rng = rng
        self.dimension = dimension
        self.terms: list[str] = []
        self.vectors: list[np.ndarray] = []

    def add(self, term: str, vector: np.ndarray | None = None) -> str:
        """Add a term, with a random unit vector when none is given."""
        if vector is None:
            vector = self.random_direction()
        self.terms.append(term)
        self.vectors.append(vector)
        return term

    def random_direction(self) -> np.ndarray:
        """Return a random unit vector."""
        vector = self.rng.normal(size=self.dimension)
        return vector / np.linalg.norm(vector)

def _grade_counts(n_docs: int) -> list[int]:
    """A fifth of highly relevant, a third of relevant, the rest non-relevant; every grade appears at least once."""
    hrel = max(1, n_docs // 5)
    rel = max(1, n_docs // 3)
    nrel = max(1, n_docs - hrel - rel)
    return [2] * hrel + [1] * rel + [0] * nrel

def _insert(filler: list[str], blocks: list[list[str]], rng: np.random.Generator) -> list[str]:
    """Insert the blocks at random, non-overlapping places of the filler text."""
    positions = sorted(rng.choice(len(filler) + 1, size=len(blocks), replace=True).tolist())
    document = []
    previous = 0
    for position, block in zip(positions, blocks):
        document.extend(filler[previous:position])
        document.extend(block)
        previous = position
    document.extend(filler[previous:])
    return document

def _filler(rng: np.random.Generator, fillers: list[str], length: int) -> list[str]:
    return [fillers[i] for i in rng.integers(0, len(fillers), size=length)]

def _ngram_documents(rng, query: list[str], grade: int, fillers: list[str], length: int) -> list[str]:
    if grade == 2:
        blocks = [list(query)] * 3
    elif grade == 1:
        blocks = [list(query)] + [[term] for term in query]
    else:
        # as many exact matches as a relevant document, never contiguous
        blocks = [[term] for term in query] * 2
    filler = _filler(rng, fillers, max(1, length - sum(len(b) for b in blocks)))
    document = _insert(filler, blocks, rng)
    if grade == 0:
        i = 0
        while i < len(document) - 1:
            if document[i] in query and document[i + 1] in query:
                document.insert(i + 1, fillers[int(rng.integers(len(fillers)))])
            i += 1
    return document

def _sense_block(rng, term: str, sense: list[str]) -> list[str]:
    context = [sense[i] for i in rng.integers(0, len(sense), size=2 * _WINDOW)]
    return context[:_WINDOW] + [term] + context[_WINDOW:]

def _ambiguity_documents(rng, term: str, senses: tuple[list[str], list[str]], grade: int, fillers: list[str], length: int) -> list[str]:
    query_sense, other_sense = senses
    if grade == 2:
        blocks = [_sense_block(rng, term, query_sense), _sense_block(rng, term, query_sense)]
    elif grade == 1:
        blocks = [_sense_block(rng, term, query_sense), _sense_block(rng, term, other_sense)]
    else:
        blocks = [_sense_block(rng, term, other_sense), _sense_block(rng, term, other_sense)]
    filler = _filler(rng, fillers, max(1, length - sum(len(b) for b in blocks)))
    return _insert(filler, blocks, rng)

def generate(
    mode: Literal['ngram', 'ambiguity'] = NGRAM,
    n_queries: int = 50,
    n_docs: int = 20,
    dimension: int = 50,
    seed: int = 0,
    years: int = 1,
    doc_length: int = 60,
    n_fillers: int = 400
) -> SyntheticCollection:
    """
    Generate a collection. The same arguments always give the same collection.

    Params:
    ----
    - mode: 'ngram' or 'ambiguity', the planted signal.
    - n_queries, n_docs: the number of queries and of judged documents per query.
    - dimension: the dimension of the vectors.
    - seed: the seed of the generator.
    - years: the queries are spread over this number of years, named y1, y2, ...
    - doc_length: the approximate number of terms of a document.
    - n_fillers: the number of terms carrying no signal.
    """
    if mode not in MODES:
        raise ConfigError(f"Unknown synthetic mode {mode}, expected one of {', '.join(MODES)}.")
    if n_queries < 1 or n_docs < 3 or dimension < 2 or years < 1 or doc_length < 8:
        raise ConfigError("The synthetic collection needs a query, three documents per query, two dimensions and a year.")
    rng = np.random.default_rng(seed)
    vocabulary = _Vocabulary(rng, dimension)
    fillers = [vocabulary.add(f"w{i}") for i in range(n_fillers)]
    collection = SyntheticCollection([], np.zeros((0, dimension)))
    for q in range(n_queries):
        query_id = f"q{q + 1}"
        year = f"y{q % years + 1}"
        if mode == NGRAM:
            query = [vocabulary.add(f"t{q + 1}x{j}") for j in range(_QUERY_LENGTH)]
        else:
            query_direction, other_direction = vocabulary.random_direction(), vocabulary.random_direction()
            # every sense word is noisy, their mean over a window points to the sense
            noise = 2.0
            query_sense = [vocabulary.add(f"s{q + 1}a{j}", query_direction + noise * vocabulary.random_direction()) for j in range(_SENSE_WORDS)]
            other_sense = [vocabulary.add(f"s{q + 1}b{j}", other_direction + noise * vocabulary.random_direction()) for j in range(_SENSE_WORDS)]
            polysemous = vocabulary.add(f"p{q + 1}", (query_direction + other_direction) / 2)
            cue = vocabulary.add(f"c{q + 1}", query_direction + noise * vocabulary.random_direction())
            query = [polysemous, cue]
        collection.queries[query_id] = (query, year)
        scored = []
        for d, grade in enumerate(_grade_counts(n_docs)):
            doc_id = f"{query_id}d{d + 1}"
            length = int(rng.integers(doc_length // 2, doc_length + 1))
            if mode == NGRAM:
                tokens = _ngram_documents(rng, query, grade, fillers, length)
            else:
                tokens = _ambiguity_documents(rng, query[0], (query_sense, other_sense), grade, fillers, length)
            collection.documents[doc_id] = tokens
            collection.grades[(query_id, doc_id)] = grade
            scored.append((doc_id, grade + 2.0 * float(rng.normal())))
        scored.sort(key=lambda pair: -pair[1])
        collection.run[query_id] = scored
    collection.terms = vocabulary.terms
    collection.vectors = np.array(vocabulary.vectors)
    return collection

def write_collection(collection: SyntheticCollection, folder: str, seed: int = 0) -> dict[str, str]:
    """
    Write the collection in folder: embeddings.txt (word2vec text), docs.tsv, queries.tsv, qrels.txt, initial.run
    and a config.json pointing to them, with l_q and l_d large enough for the collection.
    Return the written paths.
    """
    os.makedirs(folder, exist_ok=True)
    paths = {name: os.path.join(folder, file).replace('\\', '/') for name, file in (
        ('embeddings', 'embeddings.txt'), ('docs', 'docs.tsv'), ('queries', 'queries.tsv'),
        ('qrels', 'qrels.txt'), ('run', 'initial.run'), ('config', 'config.json')
    )}
    collection.table.write_word2vec_text(paths['embeddings'])
    atomic_write(paths['docs'], ''.join(f"{doc_id}\t{' '.join(tokens)}\n" for doc_id, tokens in collection.documents.items()).encode('utf-8'))
    with_years = len({year for _, year in collection.queries.values()}) > 1
    atomic_write(paths['queries'], ''.join(
        f"{query_id}\t{' '.join(tokens)}" + (f"\t{year}" if with_years else '') + '\n'
        for query_id, (tokens, year) in collection.queries.items()
    ).encode('utf-8'))
    atomic_write(paths['qrels'], ''.join(
        f"{query_id} 0 {doc_id} {grade}\n" for (query_id, doc_id), grade in collection.grades.items()
    ).encode('utf-8'))
    atomic_write(paths['run'], ''.join(
        f"{query_id} Q0 {doc_id} {rank} {score:.6f} synthetic\n"
        for query_id, scored in collection.run.items()
        for rank, (doc_id, score) in enumerate(scored, start=1)
    ).encode('utf-8'))
    save_json_file(paths['config'], {
        'embeddings': paths['embeddings'],
        'docs': paths['docs'],
        'queries': paths['queries'],
        'qrels': paths['qrels'],
        'runs': [paths['run']],
        'l_q': max(collection.max_query_length, 2),
        'l_d': collection.max_document_length,
        'seed': seed,
    })
    return paths
