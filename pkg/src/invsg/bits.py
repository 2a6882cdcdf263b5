"""Small helpers for element sets stored as Python int bitmasks."""


def bits(m):
    """Yield the set positions of m in increasing order."""
    while m:
        low = m & -m
        yield low.bit_length() - 1
        m ^= low


def mask_of(items):
    m = 0
    for i in items:
        m |= 1 << i
    return m


def popcount(m):
    return m.bit_count()


def lowest(m):
    return (m & -m).bit_length() - 1


def full(n):
    return (1 << n) - 1


def to_bitstring(m, n):
    """Element i is character i, so the string reads left to right by id."""
    return "".join("1" if (m >> i) & 1 else "0" for i in range(n))


def from_bitstring(s):
    return mask_of(i for i, c in enumerate(s) if c == "1")


def subsets(m, max_size=None):
    """All submasks of m, smallest first, optionally bounded in size."""
    items = list(bits(m))
    k = len(items) if max_size is None else min(max_size, len(items))
    from itertools import combinations
    for size in range(k + 1):
        for combo in combinations(items, size):
            yield mask_of(combo)
