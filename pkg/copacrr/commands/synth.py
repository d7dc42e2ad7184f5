"""The synth command writes a synthetic collection with a planted relevance signal."""
import logging

from ..config import RunConfig
from ..synthetic import generate, write_collection

LOGGER = logging.getLogger(__name__)

def cmd_synth(config: RunConfig) -> dict[str, str]:
    """Write the collection in the output folder, with a config.json usable by the other commands."""
    collection = generate(
        config.get('synth_mode'),
        n_queries=config.get('synth_queries'),
        n_docs=config.get('synth_docs'),
        dimension=config.get('synth_dim'),
        seed=config.seed,
        years=config.get('synth_years'),
    )
    paths = write_collection(collection, config.output, config.seed)
    LOGGER.info("Synthetic %s collection written in %s, use --config %s.", config.get('synth_mode'), config.output, paths['config'])
    return paths
