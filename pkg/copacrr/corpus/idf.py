"""The idf module computes the inverse document frequencies of the query terms."""
from typing import Sequence
import numpy as np

def compute_idf(df: int, n_docs: int) -> float:
    """
    Return the smoothed inverse document frequency of a term,
    ln((n_docs - df + 0.5) / (df + 0.5)), clamped below at 0.

    Params:
    ----
    - df: int, the number of documents containing the term, between 0 and n_docs.
    - n_docs: int, the number of documents of the collection, at least 1.
    """
    if n_docs < 1:
        raise ValueError(f"The collection must contain at least one document, got {n_docs}.")
    if not 0 <= df <= n_docs:
        raise ValueError(f"The document frequency must be within [0, {n_docs}], got {df}.")
    return max(0.0, float(np.log((n_docs - df + 0.5) / (df + 0.5))))

def normalize_idf(idfs: Sequence[float]) -> list[float]:
    """Normalize the idfs of the terms of a query with a softmax: the weights are positive and sum to 1."""
    if len(idfs) == 0:
        raise ValueError("Cannot normalize the idfs of an empty query.")
    values = np.asarray(idfs, dtype=np.float64)
    exps = np.exp(values - values.max())
    return list(exps / exps.sum())
