"""Builtin families of finite inverse semigroups, in canonical element order."""
import json
from itertools import combinations, permutations

from .core import verify
from .errors import ParseError, TooLarge


def sym_inv(n):
    """Symmetric inverse monoid on n points: all partial bijections.

    A chart is a tuple f with f[i] the image of i or -1; (st)(x) = s(t(x)).
    Order: idempotents first, then by rank, then lexicographically.
    """
    if n < 0 or n > 4:
        raise TooLarge(f"sym_inv:{n} not supported (n <= 4)", count=n)
    charts = []
    for k in range(n + 1):
        for dom in combinations(range(n), k):
            for img in permutations(range(n), k):
                f = [-1] * n
                for x, y in zip(dom, img):
                    f[x] = y
                charts.append(tuple(f))

    def is_idem(f):
        return all(y == -1 or y == x for x, y in enumerate(f))

    def rank(f):
        return sum(1 for y in f if y != -1)

    charts.sort(key=lambda f: (not is_idem(f), rank(f), f))
    pos = {f: i for i, f in enumerate(charts)}

    def compose(s, t):
        return tuple(-1 if t[x] == -1 else s[t[x]] for x in range(n))

    table = [[pos[compose(s, t)] for t in charts] for s in charts]
    labels = ["".join("-" if y == -1 else str(y) for y in f) or "e" for f in charts]
    return verify(table, labels=labels)


def brandt(n):
    """Combinatorial Brandt semigroup: zero and matrix units e_ij."""
    if n < 1:
        raise ParseError("brandt needs n >= 1")
    if n * n + 1 > 400:
        raise TooLarge(f"brandt:{n} too large", count=n * n + 1)
    units = [(i, i) for i in range(n)]
    units += [(i, j) for i in range(n) for j in range(n) if i != j]
    pos = {u: k + 1 for k, u in enumerate(units)}
    elems = [None] + units
    table = []
    for a in elems:
        row = []
        for b in elems:
            if a is None or b is None or a[1] != b[0]:
                row.append(0)
            else:
                row.append(pos[a[0], b[1]])
        table.append(row)
    labels = ["0"] + [f"e{i + 1}{j + 1}" for i, j in units]
    return verify(table, labels=labels)


def chain(n):
    """The chain 0 < 1 < ... < n-1 under minimum."""
    if n < 1:
        raise ParseError("chain needs n >= 1")
    if n > 400:
        raise TooLarge(f"chain:{n} too large", count=n)
    table = [[min(a, b) for b in range(n)] for a in range(n)]
    return verify(table)


def boolean(n):
    """All subsets of n atoms under intersection."""
    if n < 0 or n > 7:
        raise TooLarge(f"boolean:{n} too large", count=2 ** max(n, 0))
    sets = sorted(range(2 ** n), key=lambda m: (m.bit_count(), m))
    pos = {m: i for i, m in enumerate(sets)}
    table = [[pos[a & b] for b in sets] for a in sets]
    labels = ["{" + ",".join(str(i) for i in range(n) if m >> i & 1) + "}" for m in sets]
    return verify(table, labels=labels)


def semilattice(labels, leq_pairs):
    """Meet semilattice from a finite poset given by generating pairs a <= b."""
    n = len(labels)
    le = [[i == j for j in range(n)] for i in range(n)]
    for a, b in leq_pairs:
        le[a][b] = True
    for k in range(n):
        for i in range(n):
            if le[i][k]:
                for j in range(n):
                    if le[k][j]:
                        le[i][j] = True
    for i in range(n):
        for j in range(n):
            if i != j and le[i][j] and le[j][i]:
                raise ParseError(f"not antisymmetric: {labels[i]}, {labels[j]}")
    table = []
    for a in range(n):
        row = []
        for b in range(n):
            lower = [c for c in range(n) if le[c][a] and le[c][b]]
            top = [c for c in lower if all(le[x][c] for x in lower)]
            if not top:
                raise ParseError(f"no meet for {labels[a]}, {labels[b]}")
            row.append(top[0])
        table.append(row)
    return verify(table, labels=labels)


def semilattice_from_file(path):
    """Poset JSON: {"elements": [labels...], "leq": [[a, b], ...]} (labels or ids)."""
    d = _read_json(path)
    try:
        labels = [str(x) for x in d["elements"]]
        pairs = d.get("leq", [])
    except (KeyError, TypeError):
        raise ParseError("poset JSON needs 'elements' and 'leq'")
    idx = {lab: i for i, lab in enumerate(labels)}

    def ref(x):
        if isinstance(x, int) and 0 <= x < len(labels):
            return x
        if str(x) in idx:
            return idx[str(x)]
        raise ParseError(f"unknown poset element {x!r}")

    return semilattice(labels, [(ref(a), ref(b)) for a, b in pairs])


def group0(table, labels=None):
    """A finite group with a zero adjoined, ordered 0, identity, others."""
    n = len(table)
    from .core import verify as _verify
    G = _verify(table)
    if G.one is None or any(G.table[a][G.inv[a]] != G.one for a in range(n)):
        raise ParseError("group table is not a group")
    if labels is None:
        labels = G.labels
    order = [G.one] + [g for g in range(n) if g != G.one]
    pos = {g: i + 1 for i, g in enumerate(order)}
    elems = [None] + order
    out = [[0 if a is None or b is None else pos[G.table[a][b]] for b in elems]
           for a in elems]
    labs = ["0"] + [str(labels[g]) for g in order]
    return verify(out, labels=labs)


def cyclic_table(k):
    return [[(a + b) % k for b in range(k)] for a in range(k)]


def group0_from_spec(arg):
    """'Zk' for the cyclic group of order k, otherwise a JSON file path."""
    if arg.startswith("Z") and arg[1:].isdigit():
        k = int(arg[1:])
        if k < 1 or k > 200:
            raise TooLarge(f"cyclic group Z{k} too large", count=k)
        return group0(cyclic_table(k), labels=[f"g{i}" for i in range(k)])
    d = _read_json(arg)
    try:
        return group0(d["table"], d.get("labels"))
    except (KeyError, TypeError):
        raise ParseError("group JSON needs a 'table'")


def _read_json(path):
    try:
        with open(path) as fh:
            return json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise ParseError(f"cannot read {path}: {exc}")


def generate(name):
    """Build a semigroup from a generator name such as 'brandt:2'."""
    kind, _, arg = name.partition(":")
    if kind in ("sym_inv", "brandt", "chain", "boolean"):
        try:
            k = int(arg)
        except ValueError:
            raise ParseError(f"bad size in {name!r}")
        return {"sym_inv": sym_inv, "brandt": brandt, "chain": chain,
                "boolean": boolean}[kind](k)
    if kind == "semilattice":
        return semilattice_from_file(arg)
    if kind == "group0":
        return group0_from_spec(arg)
    raise ParseError(f"unknown generator {name!r}")


# Small named semilattices used as extra test material.
V3 = (["0", "a", "b"], [(0, 1), (0, 2)])
M3 = (["0", "a", "b", "c", "1"], [(0, 1), (0, 2), (0, 3), (1, 4), (2, 4), (3, 4)])
N5 = (["0", "a", "b", "c", "1"], [(0, 1), (1, 2), (0, 3), (2, 4), (3, 4)])


def corpus(max_size=None):
    """The standard set of small test semigroups, keyed by name."""
    out = {}
    for name in ["chain:2", "chain:3", "chain:4", "chain:5", "boolean:1", "boolean:2",
                 "boolean:3", "brandt:2", "brandt:3", "sym_inv:2", "group0:Z2",
                 "group0:Z3"]:
        out[name] = generate(name)
    out["semilattice:V3"] = semilattice(*V3)
    out["semilattice:M3"] = semilattice(*M3)
    out["semilattice:N5"] = semilattice(*N5)
    if max_size is not None:
        out = {k: v for k, v in out.items() if v.n <= max_size}
    return out
