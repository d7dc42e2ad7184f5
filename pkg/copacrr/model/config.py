"""The config module contains the ModelConfig and the names of the model variants."""
from dataclasses import dataclass, asdict, replace, fields

from ..error import ConfigError

CROSS_ENTROPY = 'cross_entropy'
MAX_MARGIN = 'max_margin'

# variant name -> (cascade, disamb, shuffle)
VARIANTS = {
    'PACRR': (False, False, False),
    'C-PACRR': (True, False, False),
    'D-PACRR': (False, True, False),
    'S-PACRR': (False, False, True),
    'CD-PACRR': (True, True, False),
    'CS-PACRR': (True, False, True),
    'DS-PACRR': (False, True, True),
    'Co-PACRR': (True, True, True),
}

@dataclass(frozen=True)
class ModelConfig:
    """
    The hyper-parameters of the model.

    - l_q, l_d: the dimensions of the similarity matrix.
    - l_g: the largest n-gram size; the unigram matrix is the similarity matrix itself.
    - n_f: the number of filters per convolution.
    - n_s: the number of signals kept by the k-max pooling.
    - n_c: the number of cascade positions, cpos = [1/n_c, 2/n_c, ..., 100%].
    - w_c: the half-width of the context windows.
    - hidden_sizes: the sizes of the hidden dense layers.
    - cascade, disamb, shuffle: the three components of the model.
    - loss: 'cross_entropy' or 'max_margin'.
    """

    l_q: int = 16
    l_d: int = 800
    l_g: int = 3
    n_f: int = 32
    n_s: int = 3
    n_c: int = 4
    w_c: int = 4
    hidden_sizes: tuple[int, ...] = (16, 16)
    cascade: bool = True
    disamb: bool = True
    shuffle: bool = True
    loss: str = CROSS_ENTROPY

    def __post_init__(self):
        object.__setattr__(self, 'hidden_sizes', tuple(int(h) for h in self.hidden_sizes))
        for name in ('l_q', 'l_d', 'l_g', 'n_f', 'n_s', 'n_c'):
            if int(getattr(self, name)) < 1:
                raise ConfigError(f"{name} must be at least 1, got {getattr(self, name)}.")
        if self.w_c < 0:
            raise ConfigError(f"w_c must not be negative, got {self.w_c}.")
        if any(h < 1 for h in self.hidden_sizes):
            raise ConfigError(f"The hidden sizes must be positive, got {self.hidden_sizes}.")
        if self.loss not in (CROSS_ENTROPY, MAX_MARGIN):
            raise ConfigError(f"Unknown loss {self.loss}, expected {CROSS_ENTROPY} or {MAX_MARGIN}.")

    @property
    def cpos(self) -> list[float]:
        """The cascade positions, as fractions of the document."""
        return [(s + 1) / self.n_c for s in range(self.n_c)]

    @property
    def boundaries(self) -> list[int]:
        """The exclusive ends of the pooled prefixes: ceil(cpos * l_d) with the cascade, [l_d] without."""
        if not self.cascade:
            return [self.l_d]
        return [-(-(s + 1) * self.l_d // self.n_c) for s in range(self.n_c)]

    @property
    def variant(self) -> str:
        """The name of the variant, e.g. CS-PACRR."""
        for name, toggles in VARIANTS.items():
            if toggles == (self.cascade, self.disamb, self.shuffle):
                return name
        raise ConfigError("Unreachable toggle combination.")

    def with_variant(self, name: str) -> 'ModelConfig':
        """Return the same config with the components of another variant."""
        if name not in VARIANTS:
            raise ConfigError(f"Unknown variant {name}, expected one of {', '.join(VARIANTS)}.")
        cascade, disamb, shuffle = VARIANTS[name]
        return replace(self, cascade=cascade, disamb=disamb, shuffle=shuffle)

    def to_dict(self) -> dict:
        """Return the config as a json-compatible dict."""
        data = asdict(self)
        data['hidden_sizes'] = list(self.hidden_sizes)
        return data

    @classmethod
    def from_dict(cls, data: dict) -> 'ModelConfig':
        """Create a config from a dict, rejecting the unknown keys."""
        known = {f.name for f in fields(cls)}
        unknown = set(data) - known
        if unknown:
            raise ConfigError(f"Unknown model config keys: {', '.join(sorted(unknown))}.")
        return cls(**data)

def pooled_feature_width(config: ModelConfig) -> int:
    """
    Return the width of a row of the pooled matrix P:
    l_g * n_s signals, doubled by the disambiguation, times n_c with the cascade, plus the idf.
    """
    return config.l_g * config.n_s * (2 if config.disamb else 1) * (config.n_c if config.cascade else 1) + 1
