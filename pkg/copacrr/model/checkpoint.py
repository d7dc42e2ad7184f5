"""
The checkpoint module saves and loads the parameters of a model.

Layout, little-endian:
- the magic bytes CPRK and the version (u16),
- the length (u32) and the utf-8 json of the ModelConfig,
- the number of tensors (u32), then every tensor in the declared order:
  its number of dimensions (u8), its dimensions (u32 each) and its values (32 bits floats),
- the CRC32 (u32) of every preceding byte.
"""
import json
import struct
import zlib
import numpy as np

from .config import ModelConfig
from .params import ModelParams
from ..error import CheckpointError
from ..file import atomic_write

MAGIC = b'CPRK'
VERSION = 1

def dump_checkpoint(params: ModelParams) -> bytes:
    """Return the bytes of the checkpoint of the parameters."""
    config = json.dumps(params.config.to_dict(), sort_keys=True).encode('utf-8')
    parts = [MAGIC, struct.pack('<H', VERSION), struct.pack('<I', len(config)), config, struct.pack('<I', len(params.arrays))]
    for array in params.arrays:
        parts.append(struct.pack('<B', array.ndim))
        parts.append(struct.pack(f'<{array.ndim}I', *array.shape))
        parts.append(np.ascontiguousarray(array, dtype='<f4').tobytes())
    body = b''.join(parts)
    return body + struct.pack('<I', zlib.crc32(body))

def save_checkpoint(params: ModelParams, path: str):
    """Save the parameters, atomically."""
    atomic_write(path, dump_checkpoint(params))

def parse_checkpoint(data: bytes, source: str = 'checkpoint') -> ModelParams:
    """Rebuild the parameters from the bytes of a checkpoint."""
    if data[:4] != MAGIC:
        raise CheckpointError(f"{source} is not a checkpoint.")
    if len(data) < 10 or struct.unpack('<I', data[-4:])[0] != zlib.crc32(data[:-4]):
        raise CheckpointError(f"{source}: the checksum does not match, the file is corrupted.")
    try:
        (version,) = struct.unpack_from('<H', data, 4)
        if version != VERSION:
            raise CheckpointError(f"{source}: unsupported checkpoint version {version}.")
        (length,) = struct.unpack_from('<I', data, 6)
        offset = 10
        config = ModelConfig.from_dict(json.loads(data[offset:offset + length].decode('utf-8')))
        offset += length
        (count,) = struct.unpack_from('<I', data, offset)
        offset += 4
        arrays = []
        for _ in range(count):
            (ndim,) = struct.unpack_from('<B', data, offset)
            offset += 1
            shape = struct.unpack_from(f'<{ndim}I', data, offset)
            offset += 4 * ndim
            size = int(np.prod(shape))
            values = np.frombuffer(data, dtype='<f4', count=size, offset=offset)
            offset += 4 * size
            arrays.append(values.astype(np.float64).reshape(shape))
    except (struct.error, ValueError, UnicodeDecodeError) as error:
        raise CheckpointError(f"{source}: truncated or corrupted checkpoint ({error}).") from error
    return ModelParams(config, arrays)

def load_checkpoint(path: str) -> ModelParams:
    """Load the parameters saved in a checkpoint file."""
    try:
        with open(path, 'rb') as f:
            data = f.read()
    except FileNotFoundError as error:
        raise CheckpointError(f"The checkpoint {path} does not exist.") from error
    return parse_checkpoint(data, path)
