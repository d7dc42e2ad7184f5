"""The commands of the copacrr command line."""
from .cli import cli, main
from .prepare import cmd_prepare, PrepareReport
from .train import cmd_train
from .rerank import cmd_rerank
from .evaluate import cmd_eval, EvalReport
from .ablate import cmd_ablate, cmd_sweep, compare, Comparison
from .synth import cmd_synth
