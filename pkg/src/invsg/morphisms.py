"""Homomorphisms between finite inverse semigroups: checking and search."""
from .bits import bits
from .errors import CheckFailed


class Morphism:
    def __init__(self, source, target, mapping, name=""):
        if len(mapping) != source.n:
            raise CheckFailed("map length does not match the source")
        self.source = source
        self.target = target
        self.map = list(mapping)
        self.name = name

    def __call__(self, s):
        return self.map[s]

    def image_of(self, A):
        out = 0
        for a in bits(A):
            out |= 1 << self.map[a]
        return out

    def preimage_of(self, B):
        out = 0
        for s, v in enumerate(self.map):
            if B >> v & 1:
                out |= 1 << s
        return out

    def hom_failure(self):
        return hom_failure(self.source, self.target, self.map)

    def is_homomorphism(self):
        return self.hom_failure() is None

    def is_injective(self):
        return len(set(self.map)) == len(self.map)

    def is_surjective(self):
        return len(set(self.map)) == self.target.n

    def to_dict(self, source="", target=""):
        return {"source": source, "target": target, "map": list(self.map)}


class Isomorphism(Morphism):
    def __init__(self, source, target, mapping, name=""):
        super().__init__(source, target, mapping, name)
        inv = [-1] * target.n
        for s, v in enumerate(self.map):
            inv[v] = s
        if -1 in inv or source.n != target.n:
            raise CheckFailed("not a bijection")
        self.inverse = Morphism(target, source, inv)
        if self.hom_failure() is not None or self.inverse.hom_failure() is not None:
            raise CheckFailed("not an isomorphism", witness=self.hom_failure())


def hom_failure(S, T, f):
    tS, tT = S.table, T.table
    for a in range(S.n):
        fa = f[a]
        row = tS[a]
        trow = tT[fa]
        for b in range(S.n):
            if f[row[b]] != trow[f[b]]:
                return [a, b]
    return None


def preserves_binary_joins(S, T, f):
    """f(a v b) = f(a) v f(b) for every compatible pair with a join in S."""
    for a in range(S.n):
        for b in bits(S.compat[a]):
            if b <= a:
                continue
            j = S.lub((1 << a) | (1 << b))
            if j is None:
                continue
            if not T.compatible(f[a], f[b]):
                return [a, b]
            if T.lub((1 << f[a]) | (1 << f[b])) != f[j]:
                return [a, b]
    return None


def is_distributive_morphism(S, T, f):
    """Homomorphism preserving joins of nonempty finite compatible sets.

    Joins of larger sets are iterated binary joins in a distributive source.
    """
    return hom_failure(S, T, f) is None and preserves_binary_joins(S, T, f) is None


def homomorphisms(S, T, fixed=None, injective=False, candidates=None, limit=None):
    """Generate all homomorphisms S -> T as lists, extending `fixed` {s: t}.

    Backtracking over elements with forward propagation of products and
    inverses. `candidates` optionally maps each s to allowed images.
    """
    n = S.n
    tS, tT = S.table, T.table
    assign = [-1] * n
    used = [0] * T.n
    trail = []
    found = 0

    def cand(s):
        if candidates is not None:
            return candidates[s]
        if S.is_idem[s]:
            return list(bits(T.idempotents))
        return range(T.n)

    def put(s, v, queue):
        if assign[s] >= 0:
            return assign[s] == v
        if injective and used[v]:
            return False
        if candidates is not None and v not in candidates[s]:
            return False
        if S.is_idem[s] and not T.is_idem[v]:
            return False
        assign[s] = v
        used[v] += 1
        trail.append(s)
        queue.append(s)
        return True

    def propagate(queue):
        while queue:
            a = queue.pop()
            va = assign[a]
            if not put(S.inv[a], T.inv[va], queue):
                return False
            for b in range(n):
                vb = assign[b]
                if vb < 0:
                    continue
                if not put(tS[a][b], tT[va][vb], queue):
                    return False
                if not put(tS[b][a], tT[vb][va], queue):
                    return False
        return True

    def undo(mark):
        while len(trail) > mark:
            s = trail.pop()
            used[assign[s]] -= 1
            assign[s] = -1

    def rec():
        nonlocal found
        try:
            s = assign.index(-1)
        except ValueError:
            found += 1
            yield list(assign)
            return
        for v in cand(s):
            if limit is not None and found >= limit:
                return
            mark = len(trail)
            if put(s, v, []) and propagate([s]):
                yield from rec()
            undo(mark)

    queue = []
    for s, v in (fixed or {}).items():
        if not put(s, v, queue):
            return
    if not propagate(queue):
        return
    yield from rec()


def _profile(S, s):
    return (S.is_idem[s], S.down[s].bit_count(), S.up[s].bit_count(),
            S.compat[s].bit_count(), s == S.zero, s == S.one,
            S.is_idem[S.mul(s, s)], S.down[S.d(s)].bit_count())


def find_isomorphism(S, T):
    """An Isomorphism S -> T or None. Candidates are refined by order profiles;
    ties resolve towards least ids so results are deterministic."""
    if S.n != T.n or S.idempotents.bit_count() != T.idempotents.bit_count():
        return None
    pt = {}
    for t in range(T.n):
        pt.setdefault(_profile(T, t), []).append(t)
    cands = []
    for s in range(S.n):
        c = pt.get(_profile(S, s))
        if not c:
            return None
        cands.append(c)
    for f in homomorphisms(S, T, injective=True, candidates=cands, limit=1):
        return Isomorphism(S, T, f)
    return None


def identity(S):
    return Isomorphism(S, S, list(range(S.n)))
