"""The command line entry point for the copacrr commands."""
import argparse
import logging
import sys

from .prepare import cmd_prepare
from .train import cmd_train
from .rerank import cmd_rerank
from .evaluate import cmd_eval
from .ablate import cmd_ablate, cmd_sweep
from .synth import cmd_synth
from ..config import SCHEMA, VERBATIM_LISTS
from ..config import RunConfig
from ..error import CopacrrException

LOGGER = logging.getLogger('copacrr')

PREPARE = 'prepare'
TRAIN = 'train'
RERANK = 'rerank'
EVAL = 'eval'
ABLATE = 'ablate'
SWEEP = 'sweep'
SYNTH = 'synth'

COMMANDS = {
    PREPARE: (cmd_prepare, "Compute and cache the inputs of every judged pair."),
    TRAIN: (cmd_train, "Train a model and save the checkpoint of its best epoch."),
    RERANK: (cmd_rerank, "Rerank the initial runs with a checkpoint."),
    EVAL: (cmd_eval, "Report the ERR of the runs, reranked with a checkpoint if one is given."),
    ABLATE: (cmd_ablate, "Compare the eight variants under the same seeds and folds."),
    SWEEP: (cmd_sweep, "Compare several cascade positions and context windows."),
    SYNTH: (cmd_synth, "Write a synthetic collection with a planted relevance signal."),
}

def _type_name(kind) -> str:
    if isinstance(kind, tuple):
        return f"{kind[1].__name__},..."
    return kind.__name__

def build_parser() -> argparse.ArgumentParser:
    """Return the parser of the command line: a subcommand, a config file and one flag per config key."""
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument('--config', help="A json file with the config keys.")
    common.add_argument('--verbose', action='store_true', help="Log the debugging messages.")
    for key, (kind, default) in SCHEMA.items():
        if isinstance(kind, tuple):
            help_text = f"default: {default}. Repeat the flag to add items" + (
                "." if key in VERBATIM_LISTS else ", or separate them with commas."
            )
            common.add_argument(
                '--' + key.replace('_', '-'), dest=key, default=None, action='append',
                metavar=_type_name(kind).upper(), help=help_text
            )
        else:
            common.add_argument(
                '--' + key.replace('_', '-'), dest=key, default=None, metavar=_type_name(kind).upper(),
                help=f"default: {default}"
            )
    parser = argparse.ArgumentParser(prog='copacrr', description="Train and evaluate the Co-PACRR re-ranking model.")
    subparsers = parser.add_subparsers(dest='command', required=True)
    for name, (_, description) in COMMANDS.items():
        subparsers.add_parser(name, parents=[common], help=description, description=description)
    return parser

def main(argv: list[str] | None = None) -> int:
    """Run a command and return its exit code: 0 on success, the exit code of the error otherwise."""
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.INFO, format="%(levelname)s %(name)s: %(message)s")
    overrides = {key: getattr(args, key) for key in SCHEMA}
    try:
        config = RunConfig.load(args.config, overrides)
        command, _ = COMMANDS[args.command]
        command(config)
    except CopacrrException as error:
        LOGGER.error("%s: %s", type(error).__name__, error)
        return error.exit_code
    except Exception: # pylint: disable=broad-except
        LOGGER.exception("Unexpected error.")
        return 1
    return 0

def cli():
    """Execute a command called by the command line 'copacrr ...'"""
    sys.exit(main())
