"""Simulated disk of fixed-size blocks with IO accounting.

A read counts as sequential when it hits the physical successor of the last
block read from disk, otherwise as random. Buffer hits count nothing.
"""
import logging
import uuid
from contextlib import contextmanager
from pathlib import Path
from typing import NamedTuple

from .cache import BufferPool, Strategy

__all__ = ("BlockStoreError", "IoReport", "Extent", "BlockStore", "StreamWriter")

log = logging.getLogger(__name__)

BLOCK_FILE = "blocks.bin"


class BlockStoreError(Exception):
    pass


class IoReport(NamedTuple):
    random_reads: int = 0
    sequential_reads: int = 0
    writes: int = 0
    normalized_cost: float = 0.0

    @property
    def reads(self):
        return self.random_reads + self.sequential_reads


class Extent(NamedTuple):
    """A byte range of a store, addressed from the start of block 0."""
    offset: int
    length: int

    def blocks(self, page_size):
        if self.length == 0:
            return range(0)
        return range(self.offset // page_size, (self.offset + self.length - 1) // page_size + 1)

    def sub(self, start, length):
        if start < 0 or start + length > self.length:
            raise BlockStoreError(f"sub-extent {start}+{length} exceeds extent of {self.length} bytes")
        return Extent(self.offset + start, length)


class BlockStore:
    def __init__(self, page_size=4096, buffer_blocks=1024, sequential_discount=20):
        if page_size <= 0:
            raise BlockStoreError(f"page size must be positive, got {page_size}")

        self.page_size = page_size
        self.buffer_blocks = buffer_blocks
        self.sequential_discount = sequential_discount
        self.pool = BufferPool(buffer_blocks)

        self._data = bytearray()
        self._random = 0
        self._sequential = 0
        self._writes = 0
        self._last_physical = None
        self._writer = None

        # Physical block reads in order, when enabled.
        self.trace = None

    @property
    def n_blocks(self):
        return len(self._data) // self.page_size

    def _payload(self, block_id):
        start = block_id * self.page_size
        return bytes(self._data[start:start + self.page_size])

    def append(self, payload):
        if len(payload) > self.page_size:
            raise BlockStoreError(f"payload of {len(payload)} bytes exceeds the page size of {self.page_size}")

        block_id = self.n_blocks
        self._data += payload
        self._data += bytes(self.page_size - len(payload))
        self._writes += 1
        return block_id

    def read(self, block_id):
        if not 0 <= block_id < self.n_blocks:
            raise BlockStoreError(f"block out of range: {block_id} (store has {self.n_blocks} blocks)")

        payload = self.pool.get(block_id)
        if payload is not None:
            return payload

        if self._last_physical is not None and block_id == self._last_physical + 1:
            self._sequential += 1
        else:
            self._random += 1

        self._last_physical = block_id
        if self.trace is not None:
            self.trace.append(block_id)

        payload = self._payload(block_id)
        self.pool.put(block_id, payload)
        return payload

    def read_extent(self, extent: Extent):
        blocks = extent.blocks(self.page_size)
        if not blocks:
            return b""

        data = b"".join(self.read(b) for b in blocks)
        start = extent.offset - blocks.start * self.page_size
        return data[start:start + extent.length]

    def pin(self, block_id):
        return self.pool.pin(block_id, self.read(block_id))

    def pin_extent(self, extent: Extent):
        return [b for b in extent.blocks(self.page_size) if self.pin(b)]

    def unpin(self, block_id):
        return self.pool.unpin(block_id)

    def discard(self, block_id):
        self.pool.discard(block_id)

    def writer(self):
        if self._writer is not None and not self._writer.closed:
            raise BlockStoreError("a stream writer is already open on this store")
        self._writer = StreamWriter(self)
        return self._writer

    def report(self) -> IoReport:
        cost = self._random + self._sequential / self.sequential_discount
        return IoReport(self._random, self._sequential, self._writes, cost)

    def reset(self, *, flush=True, writes=False):
        self._random = 0
        self._sequential = 0
        self._last_physical = None
        if writes:
            self._writes = 0
        if flush:
            self.pool.clear()

    @contextmanager
    def resident(self):
        """Swap in an unbounded pool holding every block, so no read reaches the counters."""
        previous, self.pool = self.pool, BufferPool(self.n_blocks, Strategy.raw)
        for block_id in range(self.n_blocks):
            self.pool.put(block_id, self._payload(block_id))
        try:
            yield self
        finally:
            self.pool = previous

    def enable_trace(self):
        self.trace = []
        return self.trace

    def manifest(self):
        return {"page_size": self.page_size, "blocks": self.n_blocks}

    def save(self, directory):
        directory = Path(directory)
        directory.mkdir(parents=True, exist_ok=True)
        p = directory / BLOCK_FILE
        temp_file = p.with_name(f"{uuid.uuid4()}-{p.name}.tmp")
        with temp_file.open("wb") as fp:
            fp.write(self._data)

        temp_file.replace(p)
        log.info("Wrote %s blocks of %s bytes to %s.", self.n_blocks, self.page_size, p)
        return self.manifest()

    @classmethod
    def load(cls, directory, entry, *, buffer_blocks=1024, sequential_discount=20):
        p = Path(directory) / BLOCK_FILE
        try:
            data = p.read_bytes()
        except OSError as e:
            raise BlockStoreError(f"could not read {p}: {e}") from None

        page_size = entry["page_size"]
        if len(data) != entry["blocks"] * page_size:
            raise BlockStoreError(f"{p} holds {len(data)} bytes, manifest expects {entry['blocks']} blocks "
                                  f"of {page_size} bytes")

        self = cls(page_size, buffer_blocks, sequential_discount)
        self._data = bytearray(data)
        return self

    def __repr__(self):
        return f"<BlockStore blocks={self.n_blocks} page_size={self.page_size} pool={self.pool!r}>"


class StreamWriter:
    """Packs variable-length blobs onto consecutive blocks of a store."""

    def __init__(self, store: BlockStore):
        self.store = store
        self._page = bytearray()
        self.closed = False

    @property
    def offset(self):
        return self.store.n_blocks * self.store.page_size + len(self._page)

    def write(self, data) -> Extent:
        if self.closed:
            raise BlockStoreError("write on a closed stream writer")

        extent = Extent(self.offset, len(data))
        page_size = self.store.page_size
        view = memoryview(data)
        while view:
            room = page_size - len(self._page)
            self._page += view[:room]
            view = view[room:]
            if len(self._page) == page_size:
                self.store.append(bytes(self._page))
                self._page.clear()

        return extent

    def align(self):
        """Pads the current block so the next write starts a fresh one."""
        if self._page:
            self.store.append(bytes(self._page))
            self._page.clear()

    def close(self):
        if not self.closed:
            self.align()
            self.closed = True

    def __enter__(self):
        return self

    def __exit__(self, *args):
        self.close()
