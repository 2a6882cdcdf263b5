"""Coverages on a finite inverse semigroup.

A coverage assigns to each element a a family C(a) of subsets of a↓.
Builtin kinds: trivial, join, dense and tight. Dense and tight covers are
decided from the arrow relation instead of being listed.
"""
from dataclasses import dataclass, field
from itertools import product

from .bits import bits, mask_of, subsets
from .core import verify
from .errors import NotDistributive, UnsupportedKind, NoZero, CheckFailed, ParseError

KINDS = ("trivial", "join", "dense", "tight", "custom")
# kinds whose cover families are closed upward inside a↓
MONOTONE = ("join", "dense", "tight")


def arrow(S, a, B):
    """a -> B: every nonzero x <= a shares a nonzero lower bound with some b in B."""
    if S.zero is None:
        raise NoZero("the arrow relation needs a zero")
    DB = S.nonzero(S.down_closure(B))
    for x in bits(S.nonzero(S.down[a])):
        if not S.down[x] & DB:
            return False
    return True


class Coverage:
    def __init__(self, S, kind, covers=None):
        if kind not in KINDS:
            raise UnsupportedKind(f"unknown coverage kind {kind!r}")
        self.S = S
        self.kind = kind
        if kind == "custom":
            self.table = {a: sorted(set(covers.get(a, ()))) for a in range(S.n)}
        else:
            self.table = None
        self._memo = {}

    @property
    def monotone(self):
        return self.kind in MONOTONE

    def is_cover(self, a, X):
        S = self.S
        if self.kind == "custom":
            return X in self.table[a]
        if X & ~S.down[a]:
            return False
        if self.kind == "trivial":
            return X == 1 << a
        key = (a, X)
        hit = self._memo.get(key)
        if hit is None:
            if self.kind == "join":
                hit = S.lub(X) == a
            else:
                hit = arrow(S, a, X)
            self._memo[key] = hit
        return hit

    def has_cover_inside(self, a, room):
        """Some X in C(a) with X a subset of room."""
        S = self.S
        if self.kind == "custom":
            return any(X & ~room == 0 for X in self.table[a])
        if self.kind == "trivial":
            return bool(room >> a & 1)
        return self.is_cover(a, room & S.down[a])

    def minimal_cover_inside(self, a, room):
        """An inclusion-minimal cover of a inside room (greedy), or None."""
        if self.kind == "custom":
            inside = [X for X in self.table[a] if X & ~room == 0]
            return min(inside, key=lambda X: (X.bit_count(), X)) if inside else None
        if self.kind == "trivial":
            return 1 << a if room >> a & 1 else None
        X = room & self.S.down[a]
        if not self.is_cover(a, X):
            return None
        for x in sorted(bits(X), key=lambda x: (x != self.S.zero, x)):
            if self.is_cover(a, X & ~(1 << x)):
                X &= ~(1 << x)
        return X

    def covers(self, a, cap=None):
        """All members of C(a) with at most cap elements, smallest first."""
        if self.kind == "custom":
            out = [X for X in self.table[a] if cap is None or X.bit_count() <= cap]
            return sorted(out, key=lambda X: (X.bit_count(), X))
        if self.kind == "trivial":
            return [1 << a]
        return [X for X in subsets(self.S.down[a], cap) if self.is_cover(a, X)]

    def minimal_covers(self, a, cap=None):
        cs = self.covers(a, cap)
        out = []
        for X in cs:
            if not any(Y & ~X == 0 for Y in out):
                out.append(X)
        return out

    def cover_lists(self, cap=None):
        return {a: [sorted(bits(X)) for X in self.covers(a, cap)] for a in range(self.S.n)}


def builtin_coverage(S, kind):
    if kind == "join" and not S.is_distributive:
        raise NotDistributive("join coverage needs a distributive semigroup",
                              witness=S.distributivity_witness)
    if kind in ("dense", "tight") and S.zero is None:
        raise NoZero("dense and tight coverages need a zero")
    if kind == "custom":
        raise UnsupportedKind("use custom_coverage for explicit cover lists")
    return Coverage(S, kind)


def custom_coverage(S, covers):
    """covers: {element: [iterable of ids, ...]} with element an id or label."""
    lab = {l: i for i, l in enumerate(S.labels)}

    def ref(x):
        if isinstance(x, int) and 0 <= x < S.n:
            return x
        if isinstance(x, str) and x.isdigit() and int(x) < S.n:
            return int(x)
        if str(x) in lab:
            return lab[str(x)]
        raise ParseError(f"unknown element {x!r} in coverage")

    table = {}
    for key, fams in covers.items():
        a = ref(key)
        table.setdefault(a, [])
        for fam in fams:
            table[a].append(mask_of(ref(x) for x in fam))
    return Coverage(S, "custom", table)


def coverage_from_dict(S, d):
    try:
        return custom_coverage(S, d["covers"])
    except (KeyError, TypeError, AttributeError):
        raise ParseError("coverage JSON needs {'covers': {element: [[ids...], ...]}}")


# axioms

@dataclass
class AxiomReport:
    ok: bool = True
    cap: int = 4
    exact_ri: bool = True
    violations: list = field(default_factory=list)
    counts: dict = field(default_factory=dict)

    def fail(self, axiom, witness):
        if not any(v["axiom"] == axiom for v in self.violations):
            self.violations.append({"axiom": axiom, "witness": witness})
        self.ok = False

    def first(self):
        return self.violations[0] if self.violations else None

    def to_dict(self):
        return {"ok": self.ok, "cap": self.cap, "exact_RI": self.exact_ri,
                "violations": self.violations, "counts": self.counts}


def check_axioms(cov, cap=4, exact_limit=16):
    """Check (R), (I), (MS), (T) and report the first violation of each.

    (R) and (I) range over every cover (exact while |a↓| <= exact_limit);
    (MS) and (T) over covers with at most cap elements. For kinds whose
    families are closed upward the (T) hypotheses range over minimal covers,
    which is equivalent once that closure is confirmed (also checked here).
    """
    S = cov.S
    rep = AxiomReport(cap=cap)
    n = S.n

    def lst(X):
        return sorted(bits(X))

    for a in range(n):
        if not cov.is_cover(a, 1 << a):
            rep.fail("R", {"a": a})
    full_covers = {}
    for a in range(n):
        if cov.kind == "custom" or S.down[a].bit_count() <= exact_limit:
            full_covers[a] = cov.covers(a)
        else:
            rep.exact_ri = False
            full_covers[a] = cov.covers(a, cap)
    for a in range(n):
        for X in full_covers[a]:
            if not cov.is_cover(S.inv[a], S.set_inv(X)):
                rep.fail("I", {"a": a, "X": lst(X)})
                break
    capped = {a: [X for X in full_covers[a] if X.bit_count() <= cap] for a in range(n)}
    if cov.monotone:
        for a in range(n):
            for X in capped[a]:
                if X.bit_count() >= cap:
                    continue
                for y in bits(S.down[a] & ~X):
                    if not cov.is_cover(a, X | 1 << y):
                        rep.fail("upward", {"a": a, "X": lst(X), "y": y})
    ms = 0
    for a in range(n):
        for b in range(n):
            ab = S.mul(a, b)
            for X in capped[a]:
                for Y in capped[b]:
                    ms += 1
                    if not cov.is_cover(ab, S.set_mul(X, Y)):
                        rep.fail("MS", {"a": a, "b": b, "X": lst(X), "Y": lst(Y)})
    hyp = capped
    if cov.monotone:
        hyp = {a: [X for X in cov.minimal_covers(a, cap)] for a in range(n)}
    t = 0
    for a in range(n):
        for X in capped[a]:
            xs = lst(X)
            for choice in product(*(hyp[x] for x in xs)):
                t += 1
                U = 0
                for Xi in choice:
                    U |= Xi
                if not cov.is_cover(a, U):
                    rep.fail("T", {"a": a, "X": xs, "parts": [lst(Xi) for Xi in choice]})
                    break
    rep.counts = {"MS": ms, "T": t}
    return rep


def meet_family(S, X, Y):
    """{x ^ y : x in X, y in Y}; None if some meet is missing."""
    out = 0
    for x in bits(X):
        for y in bits(Y):
            m = S.meet(x, y)
            if m is None:
                return None
            out |= 1 << m
    return out


def d_family(S, X):
    return mask_of(S.d(x) for x in bits(X))


def check_cover_properties(cov, cap=4):
    """Instance checks of the basic cover identities. Returns a list of failures."""
    S = cov.S
    bad = []
    for a in range(S.n):
        da = S.d(a)
        cs = cov.covers(a, cap)
        for X in cs:
            if not cov.is_cover(da, d_family(S, X)):
                bad.append(("d(X) covers d(a)", a, X))
        for X in subsets(S.down[a], cap):
            if cov.is_cover(da, d_family(S, X)) != cov.is_cover(a, X):
                bad.append(("converse for X below a", a, X))
        for X in cs:
            for Y in cs:
                M = meet_family(S, X, Y)
                if M is None or M != S.set_mul(X, d_family(S, Y)) \
                        or M != S.set_mul(Y, d_family(S, X)):
                    bad.append(("X^Y = X d(Y)", a, X, Y))
                    continue
                if not cov.is_cover(a, M):
                    bad.append(("X^Y covers a", a, X, Y))
                for b in range(S.n):
                    if cov.is_cover(b, X) and not cov.is_cover(b, M):
                        bad.append(("X^Y covers b", a, b, X, Y))
    return bad


def is_idempotent_pure_coverage(cov):
    """A cover made of idempotents only covers idempotents."""
    S = cov.S
    E = S.idempotents
    for a in range(S.n):
        if not S.is_idem[a] and cov.has_cover_inside(a, E):
            return False
    return True


def common_cover(cov, a, b):
    """A member of C(a) and C(b), or None."""
    S = cov.S
    if cov.monotone:
        M = S.down[a] & S.down[b]
        if cov.is_cover(a, M) and cov.is_cover(b, M):
            return M
        return None
    for X in cov.covers(a):
        if cov.is_cover(b, X):
            return X
    return None


def equivalent(cov, a, b):
    return common_cover(cov, a, b) is not None


def is_separated(cov):
    S = cov.S
    for a in range(S.n):
        for b in range(a + 1, S.n):
            if equivalent(cov, a, b):
                return False
    return True


# separative quotient

class SeparativeQuotient:
    def __init__(self, cov, classes, sigma, quotient):
        self.cov = cov
        self.S = cov.S
        self.classes = classes
        self.sigma = sigma
        self.quotient = quotient
        self.reps = [min(bits(c)) for c in classes]

    def image(self, X):
        return mask_of(self.sigma[x] for x in bits(X))

    def to_dict(self):
        d = self.quotient.to_dict()
        d["sigma"] = list(self.sigma)
        return d


def separative_quotient(cov, cap=4):
    """Quotient by a == b <=> C(a) and C(b) share a cover (dense or tight only)."""
    if cov.kind not in ("dense", "tight"):
        raise UnsupportedKind("the separative quotient is defined for dense and tight coverages",
                              witness=cov.kind)
    S = cov.S
    n = S.n
    eq = [[equivalent(cov, a, b) for b in range(n)] for a in range(n)]
    for a in range(n):
        for b in range(n):
            if eq[a][b] != eq[b][a]:
                raise CheckFailed("cover relation not symmetric", witness=[a, b])
            if eq[a][b]:
                for c in range(n):
                    if eq[b][c] and not eq[a][c]:
                        raise CheckFailed("cover relation not transitive", witness=[a, b, c])
    classes = []
    sigma = [-1] * n
    for a in range(n):
        if sigma[a] < 0:
            cls = mask_of(b for b in range(n) if eq[a][b])
            for b in bits(cls):
                sigma[b] = len(classes)
            classes.append(cls)
    reps = [min(bits(c)) for c in classes]
    table = [[sigma[S.mul(x, y)] for y in reps] for x in reps]
    for a in range(n):
        for b in range(n):
            if sigma[S.mul(a, b)] != table[sigma[a]][sigma[b]]:
                raise CheckFailed("cover relation is not a congruence", witness=[a, b])
    labels = [S.labels[r] for r in reps]
    Q = verify(table, labels=labels)
    sq = SeparativeQuotient(cov, classes, sigma, Q)
    qcov = builtin_coverage(Q, cov.kind)
    if not is_separated(qcov):
        raise CheckFailed("quotient is not separative")
    for a in range(n):
        for X in cov.covers(a, cap):
            if not qcov.is_cover(sigma[a], sq.image(X)):
                raise CheckFailed("image of a cover is not a cover", witness=[a, sorted(bits(X))])
    bad = lift_failures(sq, cap)
    if bad:
        raise CheckFailed("a quotient cover does not lift", witness=bad[0])
    return sq


def lift_failures(sq, cap=4):
    """Covers Y of sigma(a) with no cover A of a such that sigma(A) = Y.

    The largest candidate is {x <= a : sigma(x) in Y}; covers are closed
    upward, so a lift exists iff that candidate works.
    """
    S, Q = sq.S, sq.quotient
    qcov = builtin_coverage(Q, sq.cov.kind)
    bad = []
    for a in range(S.n):
        for Y in qcov.covers(sq.sigma[a], cap):
            A = mask_of(x for x in bits(S.down[a]) if Y >> sq.sigma[x] & 1)
            if not (sq.cov.is_cover(a, A) and sq.image(A) == Y):
                bad.append([a, sorted(bits(Y))])
    return bad


def filter_transport(sq):
    """Check that A -> sigma(A) is an order isomorphism of tight (dense) filters
    and a groupoid isomorphism matching the basic open sets. Returns the map
    as a list of (min in S, min in quotient)."""
    from .filters import filters_of_class, filter_groupoid
    S, Q = sq.S, sq.quotient
    kind = sq.cov.kind
    src = filters_of_class(S, kind, sq.cov)
    dst = filters_of_class(Q, kind, builtin_coverage(Q, kind))
    dst_carriers = {F.carrier: F.min for F in dst}
    pairs = []
    for F in src:
        img = sq.image(F.carrier)
        if img not in dst_carriers:
            raise CheckFailed("image of a filter is not a filter of the quotient", witness=F.min)
        for x in range(S.n):
            if (img >> sq.sigma[x] & 1) != (F.carrier >> x & 1):
                raise CheckFailed("membership not reflected by sigma", witness=[F.min, x])
        pairs.append((F.min, dst_carriers[img]))
    if sorted(q for _, q in pairs) != sorted(F.min for F in dst):
        raise CheckFailed("filter transport is not a bijection")
    for F, p in zip(src, pairs):
        for G, q in zip(src, pairs):
            if (F.carrier & G.carrier == F.carrier) != \
                    (Q.up[p[1]] & Q.up[q[1]] == Q.up[p[1]]):
                raise CheckFailed("filter transport is not an order isomorphism")
    GS = filter_groupoid(S, kind, sq.cov)
    GQ = filter_groupoid(Q, kind)
    pt = [GQ.index[dict(pairs)[a]] for a in GS.mins]
    for i in range(GS.m):
        if pt[GS.inv[i]] != GQ.inv[pt[i]] or pt[GS.d[i]] != GQ.d[pt[i]]:
            raise CheckFailed("transport does not respect inverse or d")
        for j in range(GS.m):
            k = GS.mul[i][j]
            if (k >= 0) != (GQ.mul[pt[i]][pt[j]] >= 0) or (k >= 0 and pt[k] != GQ.mul[pt[i]][pt[j]]):
                raise CheckFailed("transport is not a functor", witness=[i, j])
    for s in range(S.n):
        Zs = GS.points_containing(s)
        img = mask_of(pt[i] for i in bits(Zs))
        if img != GQ.points_containing(sq.sigma[s]):
            raise CheckFailed("basic open sets do not correspond", witness=s)
    return pairs
