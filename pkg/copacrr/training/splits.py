"""The splits module produces the train, validation and test query sets of the experiments."""
from dataclasses import dataclass
from typing import Sequence, Iterator
import numpy as np

from ..error import ConfigError, DataError

@dataclass(frozen=True)
class Fold:
    """One combination of years: the model is trained on train_years and selected on validation_years."""

    name: str
    train_years: tuple[str, ...]
    validation_years: tuple[str, ...]
    test_years: tuple[str, ...] = ()

    def __post_init__(self):
        roles = (self.train_years, self.validation_years, self.test_years)
        seen = set()
        for years in roles:
            overlap = seen & set(years)
            if overlap:
                raise ConfigError(f"The fold {self.name} gives two roles to the years {', '.join(sorted(overlap))}.")
            seen |= set(years)
        if not self.train_years or not self.validation_years:
            raise ConfigError(f"The fold {self.name} needs at least one training and one validation year.")

    def resolve(self, years: dict[str, list[str]]) -> 'FoldQueries':
        """Return the query ids of every role."""
        def collect(role: tuple[str, ...]) -> tuple[str, ...]:
            missing = [year for year in role if year not in years]
            if missing:
                raise DataError(f"No query belongs to the years {', '.join(missing)} of the fold {self.name}.")
            return tuple(sorted(q for year in role for q in years[year]))
        return FoldQueries(self.name, collect(self.train_years), collect(self.validation_years), collect(self.test_years))

@dataclass(frozen=True)
class FoldQueries:
    """The query ids of the train, validation and test sets of a fold."""

    name: str
    train: tuple[str, ...]
    validation: tuple[str, ...]
    test: tuple[str, ...] = ()

    def __post_init__(self):
        if set(self.train) & set(self.validation) or set(self.train) & set(self.test) or set(self.validation) & set(self.test):
            raise ConfigError(f"The fold {self.name} puts a query in two sets.")

class SplitPlan:
    """A named list of folds."""

    def __init__(self, folds: Sequence[Fold]):
        names = [fold.name for fold in folds]
        if len(set(names)) != len(names):
            raise ConfigError("Two folds share the same name.")
        self.folds = list(folds)

    def __iter__(self) -> Iterator[Fold]:
        return iter(self.folds)

    def __len__(self):
        return len(self.folds)

    def for_test_year(self, year: str) -> list[Fold]:
        """Return the folds testing a year."""
        return [fold for fold in self.folds if year in fold.test_years]

def round_robin(years: Sequence[str]) -> SplitPlan:
    """
    For every test year, every validation year among the others, train on the remaining years.
    With six years, this gives five folds per test year.
    """
    years = sorted(set(years))
    if len(years) < 3:
        raise ConfigError(f"The round robin needs at least three years, got {len(years)}.")
    folds = []
    for test in years:
        others = [y for y in years if y != test]
        for validation in others:
            train = tuple(y for y in others if y != validation)
            folds.append(Fold(f"test={test},val={validation}", train, (validation,), (test,)))
    return SplitPlan(folds)

def holdout(query_ids: Sequence[str], fraction: float, seed: int, name: str = 'holdout') -> FoldQueries:
    """Split the queries into a training and a validation set, the validation set holding a fraction of them."""
    query_ids = sorted(set(query_ids))
    if len(query_ids) < 2:
        raise DataError(f"At least two queries are needed to hold out a validation set, got {len(query_ids)}.")
    if not 0 < fraction < 1:
        raise ConfigError(f"The validation fraction must be in ]0, 1[, got {fraction}.")
    order = np.random.default_rng(seed).permutation(len(query_ids))
    size = min(len(query_ids) - 1, max(1, round(fraction * len(query_ids))))
    validation = tuple(sorted(query_ids[i] for i in order[:size]))
    train = tuple(sorted(query_ids[i] for i in order[size:]))
    return FoldQueries(name, train, validation)
