import enum
import logging

import lru

__all__ = ("Strategy", "BufferPool")

log = logging.getLogger(__name__)


class Strategy(enum.Enum):
    lru = 1
    raw = 2


class BufferPool:
    """Block buffer with least-recently-used eviction and pinning.

    Pinned blocks live outside the LRU and are never evicted, but they count
    toward ``capacity``: the LRU shrinks by one slot for every pinned block.
    One slot always stays available for unpinned blocks, so a pin that would
    take it is refused.

    ``Strategy.raw`` is an unbounded dictionary.
    """

    def __init__(self, capacity, strategy=Strategy.lru):
        if capacity < 0:
            raise ValueError(f"buffer capacity must be non-negative, got {capacity}")

        self.capacity = capacity
        self.strategy = strategy
        self._pinned = {}

        if strategy is Strategy.lru and capacity > 0:
            self._blocks = lru.LRU(capacity)
        elif strategy is Strategy.lru:
            # Nothing is ever buffered.
            self._blocks = None
        else:
            self._blocks = {}

    def __len__(self):
        return len(self._pinned) + (len(self._blocks) if self._blocks is not None else 0)

    def __contains__(self, block_id):
        return block_id in self._pinned or (self._blocks is not None and block_id in self._blocks)

    @property
    def pinned(self):
        return frozenset(self._pinned)

    def get(self, block_id):
        try:
            return self._pinned[block_id]
        except KeyError:
            pass

        if self._blocks is None:
            return None

        try:
            # Subscripting refreshes recency.
            return self._blocks[block_id]
        except KeyError:
            return None

    def put(self, block_id, payload):
        if self._blocks is None or block_id in self._pinned:
            return
        self._blocks[block_id] = payload

    def pin(self, block_id, payload):
        if block_id in self._pinned:
            return True

        if self.strategy is Strategy.lru and len(self._pinned) + 1 >= self.capacity:
            log.debug("Refused to pin block %s, %s of %s slots are pinned.", block_id, len(self._pinned), self.capacity)
            self.put(block_id, payload)
            return False

        if self._blocks is not None:
            try:
                del self._blocks[block_id]
            except KeyError:
                pass

        self._pinned[block_id] = payload
        self._resize()
        return True

    def unpin(self, block_id):
        try:
            payload = self._pinned.pop(block_id)
        except KeyError:
            return False

        self._resize()
        self.put(block_id, payload)
        return True

    def discard(self, block_id):
        self._pinned.pop(block_id, None)
        if self._blocks is not None:
            try:
                del self._blocks[block_id]
            except KeyError:
                pass
        self._resize()

    def clear(self):
        self._pinned.clear()
        if self._blocks is not None:
            self._blocks.clear()
        self._resize()

    def _resize(self):
        if self.strategy is Strategy.lru and self._blocks is not None:
            self._blocks.set_size(self.capacity - len(self._pinned))

    def __repr__(self):
        return f"<BufferPool strategy={self.strategy.name} capacity={self.capacity} size={len(self)}>"
