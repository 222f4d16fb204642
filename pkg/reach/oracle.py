"""In-memory reference answers for reachability queries.

The item spreads in time order; within a tick it closes over the connected
components of the active contacts, so multi-hop hand-offs take no time.
"""
from typing import NamedTuple, Optional

from reach.utils import ReachabilityQuery, TimeInterval
from reach.utils.model import check_query
from reach.utils.unionfind import UnionFind


class ReachResult(NamedTuple):
    reachable: bool
    # Last tick of the smallest interval prefix that already reaches the destination.
    earliest_reach: Optional[int] = None


def spread(network, source, interval: TimeInterval, *, stop_at=None):
    """Earliest tick at which each object holds an item released by ``source``.

    ``network`` is anything exposing ``pairs_at(t)``. Stops right after the
    tick at which ``stop_at`` is reached.
    """
    reached = {source: interval.start}
    if stop_at == source:
        return reached

    for t in interval.ticks():
        pairs = network.pairs_at(t)
        if not pairs:
            continue

        members = sorted({o for pair in pairs for o in pair})
        index = {o: i for i, o in enumerate(members)}
        uf = UnionFind(len(members))
        for a, b in pairs:
            uf.union(index[a], index[b])

        for group in uf.groups():
            objects = [members[i] for i in group]
            if any(o in reached for o in objects):
                for o in objects:
                    reached.setdefault(o, t)

        if stop_at is not None and stop_at in reached:
            break

    return reached


def oracle_reach(contacts, q: ReachabilityQuery) -> ReachResult:
    check_query(q, contacts.n_objects, contacts.horizon)
    reached = spread(contacts, q.source, q.interval, stop_at=q.destination)
    try:
        return ReachResult(True, reached[q.destination])
    except KeyError:
        return ReachResult(False, None)
