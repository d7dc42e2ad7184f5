"""The config class is used to interact with the run config file."""
import os

from .file import load_json_file, CACHE_ENV_VAR
from .error import ConfigError
from .model import ModelConfig, CROSS_ENTROPY
from .corpus import LABEL_PAIRS

# key -> (type, default). A list type is written as (list, item type).
SCHEMA = {
    # paths
    'embeddings': (str, None),
    'docs': (str, None),
    'queries': (str, None),
    'qrels': (str, None),
    'runs': ((list, str), []),
    'checkpoint': (str, None),
    'output': (str, 'output'),
    'cache_dir': (str, None),
    # run
    'seed': (int, 0),
    'workers': (int, 1),
    # model
    'l_q': (int, 16),
    'l_d': (int, 800),
    'l_g': (int, 3),
    'n_f': (int, 32),
    'n_s': (int, 3),
    'n_c': (int, 4),
    'w_c': (int, 4),
    'hidden_sizes': ((list, int), [16, 16]),
    'cascade': (bool, True),
    'disamb': (bool, True),
    'shuffle': (bool, True),
    'loss': (str, CROSS_ENTROPY),
    # training
    'learning_rate': (float, 1e-3),
    'batch_size': (int, 16),
    'iterations': (int, 150),
    'batches_per_iteration': (int, 32),
    'label_pairs': ((list, str), list(LABEL_PAIRS)),
    'train_years': ((list, str), []),
    'validation_years': ((list, str), []),
    'test_years': ((list, str), []),
    'validation_fraction': (float, 0.2),
    'rerank_depth': (int, 100),
    # evaluation
    'k': (int, 20),
    'tie_credit': (float, 0.0),
    'merge_labels': (bool, True),
    # sweeps and ablation
    'sweep_n_c': ((list, int), [1, 2, 3, 4, 5]),
    'sweep_w_c': ((list, int), [0, 1, 2, 4, 6, 8]),
    'ablate_seeds': ((list, int), [0]),
    # synthetic corpus
    'synth_mode': (str, 'ngram'),
    'synth_queries': (int, 50),
    'synth_docs': (int, 20),
    'synth_dim': (int, 50),
    'synth_years': (int, 1),
}

_MODEL_KEYS = ('l_q', 'l_d', 'l_g', 'n_f', 'n_s', 'n_c', 'w_c', 'hidden_sizes', 'cascade', 'disamb', 'shuffle', 'loss')
_TRUE = ('true', '1', 'yes', 'on')
_FALSE = ('false', '0', 'no', 'off')

def _convert_item(key: str, kind: type, value):
    if kind is bool:
        if isinstance(value, bool):
            return value
        if isinstance(value, str) and value.lower() in _TRUE + _FALSE:
            return value.lower() in _TRUE
        raise ConfigError(f"The value of {key} must be a boolean, got {value!r}.")
    if kind is int and isinstance(value, float) and not value.is_integer():
        raise ConfigError(f"The value of {key} must be an integer, got {value!r}.")
    if kind in (int, float) and isinstance(value, bool):
        raise ConfigError(f"The value of {key} must be a number, got {value!r}.")
    try:
        return kind(value)
    except (TypeError, ValueError) as error:
        raise ConfigError(f"The value of {key} must be of type {kind.__name__}, got {value!r}.") from error

# The items of these lists are paths, never split on commas.
VERBATIM_LISTS = {'runs'}

def _split_items(key: str, value) -> list:
    items = []
    for item in value:
        if isinstance(item, str) and key not in VERBATIM_LISTS:
            items.extend(part.strip() for part in item.split(',') if part.strip())
        else:
            items.append(item)
    return items

def convert(key: str, value):
    """
    Convert a value to the type of the key in the schema.
    The strings of the command line are accepted: 'true'/'false' for the booleans, comma-separated items for the lists.
    A list can also be given as several strings (a repeated flag), each of them split on commas,
    except the lists of paths, whose strings are taken as they are.
    """
    if key not in SCHEMA:
        raise ConfigError(f"Unknown config key {key}.")
    kind, _ = SCHEMA[key]
    if value is None:
        return None
    if isinstance(kind, tuple):
        _, item_kind = kind
        if isinstance(value, str):
            value = [value]
        if not isinstance(value, (list, tuple)):
            raise ConfigError(f"The value of {key} must be a list, got {value!r}.")
        return [_convert_item(key, item_kind, item) for item in _split_items(key, value)]
    return _convert_item(key, kind, value)

class RunConfig:
    """
    The RunConfig is used to interact with the run config file.
    The file is a flat json object whose keys are listed in SCHEMA; the unknown keys are rejected.
    The command line flags override the file, and the cache directory can also be given by the COPACRR_CACHE_DIR
    environment variable, which overrides the file but not the flags.
    """

    def __init__(self, data: dict | None = None, overrides: dict | None = None) -> None:
        data = dict(data or {})
        overrides = {key: value for key, value in (overrides or {}).items() if value is not None}
        unknown = sorted((set(data) | set(overrides)) - set(SCHEMA))
        if unknown:
            raise ConfigError(f"Unknown config keys: {', '.join(unknown)}.")
        if os.environ.get(CACHE_ENV_VAR):
            data['cache_dir'] = os.environ[CACHE_ENV_VAR]
        data.update(overrides)
        self._data = {key: convert(key, data[key]) if key in data else default for key, (_, default) in SCHEMA.items()}
        self._validate()

    @classmethod
    def load(cls, path: str | None, overrides: dict | None = None) -> 'RunConfig':
        """Load the config file, if any, and apply the overrides."""
        data = load_json_file(path) if path else {}
        if not isinstance(data, dict):
            raise ConfigError(f"The config file {path} must contain a json object.")
        return cls(data, overrides)

    def _validate(self):
        for key in ('seed', 'iterations', 'rerank_depth'):
            if self._data[key] < 0:
                raise ConfigError(f"{key} must not be negative, got {self._data[key]}.")
        for key in ('workers', 'batch_size', 'batches_per_iteration', 'k'):
            if self._data[key] < 1:
                raise ConfigError(f"{key} must be at least 1, got {self._data[key]}.")
        if self._data['learning_rate'] < 0:
            raise ConfigError(f"The learning rate must not be negative, got {self._data['learning_rate']}.")
        if not 0 < self._data['validation_fraction'] < 1:
            raise ConfigError(f"validation_fraction must be in ]0, 1[, got {self._data['validation_fraction']}.")
        if not 0 <= self._data['tie_credit'] <= 1:
            raise ConfigError(f"tie_credit must be in [0, 1], got {self._data['tie_credit']}.")
        for name in self._data['label_pairs']:
            if name not in LABEL_PAIRS:
                raise ConfigError(f"Unknown label pair {name}, expected one of {', '.join(LABEL_PAIRS)}.")
        self.model_config() # raises on invalid model values

    def get(self, key: str, default=None):
        """Get the value of a config key."""
        if key not in SCHEMA:
            raise ConfigError(f"Unknown config key {key}.")
        value = self._data[key]
        return default if value is None else value

    def to_dict(self) -> dict:
        """Return the full config, defaults included."""
        return dict(self._data)

    def with_overrides(self, **overrides) -> 'RunConfig':
        """Return a copy of the config with some values replaced."""
        data = dict(self._data)
        data.update(overrides)
        copy = RunConfig.__new__(RunConfig)
        copy._data = {key: convert(key, value) for key, value in data.items()}
        copy._validate()
        return copy

    def model_config(self) -> ModelConfig:
        """Return the ModelConfig described by the model keys."""
        return ModelConfig(**{key: self._data[key] for key in _MODEL_KEYS})

    def require_paths(self, *keys: str):
        """Verify that the paths of the keys are configured and exist, before any work begins."""
        for key in keys:
            values = self._data[key]
            if not values:
                raise ConfigError(f"The path {key} is required by this command, use --{key.replace('_', '-')}.")
            for path in values if isinstance(values, list) else [values]:
                if not os.path.exists(path):
                    raise ConfigError(f"The path {path} given for {key} does not exist.")

    @property
    def seed(self) -> int:
        """Return the seed of every random generator."""
        return self._data['seed']

    @property
    def workers(self) -> int:
        """Return the number of threads used to compute the examples of a batch."""
        return self._data['workers']

    @property
    def cache_dir(self) -> str | None:
        """Return the configured cache directory."""
        return self._data['cache_dir']

    @property
    def output(self) -> str:
        """Return the output path."""
        return self._data['output']

    @property
    def k(self) -> int:
        """Return the cutoff of ERR."""
        return self._data['k']

    @property
    def merge(self) -> bool:
        """Return whether the grades are merged before the evaluation."""
        return self._data['merge_labels']
