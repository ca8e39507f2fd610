"""
Binary container of named float64 tensors.

Layout (little-endian): 8-byte magic, uint32 version, uint32 count, then per
entry uint32 name length, utf-8 name, uint32 rank, uint64 dims, raw float64
values in row-major order.
"""
from collections import OrderedDict
import logging
import os
import struct
import numpy as np
import torch

from ..exceptions import CheckpointError

logger = logging.getLogger(__name__)

MAGIC = b'PYLSCKPT'
VERSION = 1


def encode(tensors):
    """
    Parameters
    ----------
    tensors : dict
        name -> array or tensor

    Returns
    -------
    blob : bytes
    """
    chunks = [MAGIC, struct.pack('<II', VERSION, len(tensors))]
    for name, value in tensors.items():
        if isinstance(value, torch.Tensor):
            value = value.detach().cpu().numpy()
        arr = np.array(value, dtype='<f8', order='C')
        key = name.encode('utf-8')
        chunks.append(struct.pack('<I', len(key)))
        chunks.append(key)
        chunks.append(struct.pack('<I', arr.ndim))
        chunks.append(struct.pack('<%dQ' % arr.ndim, *arr.shape))
        chunks.append(arr.tobytes())
    return b''.join(chunks)


class _Reader(object):
    def __init__(self, blob):
        self.blob = blob
        self.pos = 0

    def take(self, n):
        if self.pos + n > len(self.blob):
            raise CheckpointError('checkpoint truncated at byte %d' % self.pos)
        chunk = self.blob[self.pos:self.pos + n]
        self.pos += n
        return chunk

    def unpack(self, fmt):
        return struct.unpack(fmt, self.take(struct.calcsize(fmt)))


def decode(blob):
    """
    Parameters
    ----------
    blob : bytes

    Returns
    -------
    tensors : OrderedDict
        name -> float64 np.ndarray
    """
    r = _Reader(blob)
    if r.take(len(MAGIC)) != MAGIC:
        raise CheckpointError('not a checkpoint (bad magic)')
    version, count = r.unpack('<II')
    if version != VERSION:
        raise CheckpointError('unsupported checkpoint version %d' % version)
    tensors = OrderedDict()
    for _ in range(count):
        (n,) = r.unpack('<I')
        try:
            name = r.take(n).decode('utf-8')
        except UnicodeDecodeError as err:
            raise CheckpointError('corrupt tensor name: %s' % err)
        (rank,) = r.unpack('<I')
        dims = r.unpack('<%dQ' % rank)
        size = int(np.prod(dims, dtype=np.int64))
        data = np.frombuffer(r.take(8 * size), dtype='<f8')
        tensors[name] = data.reshape(dims).astype(np.float64)
    if r.pos != len(blob):
        raise CheckpointError('%d trailing bytes' % (len(blob) - r.pos))
    return tensors


def save_checkpoint(path, tensors):
    blob = encode(tensors)
    tmp = path + '.tmp'
    with open(tmp, 'wb') as f:
        f.write(blob)
    os.replace(tmp, path)
    logger.info('wrote checkpoint %s (%d tensors)', path, len(tensors))


def load_checkpoint(path):
    try:
        with open(path, 'rb') as f:
            blob = f.read()
    except OSError as err:
        raise CheckpointError('cannot read checkpoint %s: %s' % (path, err))
    return decode(blob)
