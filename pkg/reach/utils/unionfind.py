__all__ = ("UnionFind",)


class UnionFind:
    """Disjoint sets over the dense integers ``0..size-1``.

    Union by rank with path compression.

    >>> uf = UnionFind(4)
    >>> uf.union(0, 1)
    >>> uf.union(2, 1)
    >>> uf.find(2) == uf.find(0)
    True
    >>> uf.find(3)
    3
    """
    __slots__ = ("parent", "rank")

    def __init__(self, size):
        self.parent = list(range(size))
        self.rank = [0] * size

    def find(self, x):
        parent = self.parent
        root = x
        while parent[root] != root:
            root = parent[root]

        while parent[x] != root:
            parent[x], x = root, parent[x]

        return root

    def union(self, x, y):
        x, y = self.find(x), self.find(y)
        if x == y:
            return

        if self.rank[x] < self.rank[y]:
            x, y = y, x

        self.parent[y] = x
        if self.rank[x] == self.rank[y]:
            self.rank[x] += 1

    def groups(self, elements=None):
        """Returns the sets as sorted lists, ordered by their smallest element."""
        out = {}
        for x in (range(len(self.parent)) if elements is None else sorted(elements)):
            out.setdefault(self.find(x), []).append(x)

        return sorted(out.values(), key=lambda g: g[0])
