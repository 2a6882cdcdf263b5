"""Filters on a finite inverse semigroup and the groupoids they form.

On a finite semigroup every proper filter is a principal up-set a↑ with
a != 0, so a filter is stored by its minimum element.
"""
from dataclasses import dataclass

import numpy as np

from .bits import bits, mask_of
from .errors import (DifferentParents, NotDistributive, ClassNotClosed, CheckFailed,
                     NoZero, InvsgError)


@dataclass(frozen=True)
class Filter:
    parent: object
    min: int

    @property
    def carrier(self):
        return self.parent.up[self.min]

    def __contains__(self, s):
        return bool(self.carrier >> s & 1)

    def is_idempotent(self):
        return self.parent.is_idem[self.min]

    def __lt__(self, other):
        return self.min < other.min

    def __repr__(self):
        return f"Filter({self.parent.labels[self.min]}↑)"


def principal(S, a):
    if S.zero is not None and a == S.zero:
        raise InvsgError("the zero does not generate a proper filter")
    return Filter(S, a)


def all_filters(S, check=None):
    """All proper filters, sorted by minimum element.

    With check (default: for n <= 12) the list is compared with an
    exhaustive search over up-closed directed zero-free subsets.
    """
    out = [Filter(S, a) for a in range(S.n) if a != S.zero]
    if check is None:
        check = S.n <= 12
    if check:
        found = sorted(filters_by_search(S))
        if found != sorted(F.carrier for F in out):
            raise CheckFailed("filter enumeration disagrees with search", witness=found)
    return out


def filters_by_search(S):
    """Carriers of all nonempty up-closed directed subsets avoiding zero.

    Backtracking over elements from the top down; a branch is cut as soon
    as two chosen elements can no longer get a nonzero common lower bound.
    Makes no use of the fact that filters are principal.
    """
    nz = S.nonzero(S.all)
    order = sorted(range(S.n), key=lambda x: (S.up[x].bit_count(), x))
    down = S.down
    out = []

    def pairs_ok(inc, avail):
        items = list(bits(inc))
        for i, a in enumerate(items):
            for b in items[i:]:
                if not (down[a] & down[b] & avail):
                    return False
        return True

    def rec(i, inc, exc):
        if i == len(order):
            if inc and pairs_ok(inc, inc):
                out.append(inc)
            return
        x = order[i]
        if not (nz >> x & 1):
            rec(i + 1, inc, exc | (1 << x))
            return
        avail_inc = nz & ~exc
        if S.up[x] & ~(1 << x) & ~inc == 0:
            ok = True
            for a in bits(inc):
                if not (down[x] & down[a] & avail_inc):
                    ok = False
                    break
            if ok:
                rec(i + 1, inc | (1 << x), exc)
        exc2 = exc | (1 << x)
        if pairs_ok(inc, nz & ~exc2):
            rec(i + 1, inc, exc2)

    rec(0, 0, 0)
    return out


def is_filter_set(S, A):
    """Direct test that a set of elements is a proper filter."""
    if A == 0 or (S.zero is not None and A >> S.zero & 1):
        return False
    if S.up_closure(A) != A:
        return False
    items = list(bits(A))
    for i, a in enumerate(items):
        for b in items[i:]:
            if not (S.down[a] & S.down[b] & A):
                return False
    return True


def _same_parent(A, B):
    if A.parent is not B.parent:
        raise DifferentParents("filters over different semigroups")


def filter_inv(F):
    return Filter(F.parent, F.parent.inv[F.min])


def filter_d(F):
    return Filter(F.parent, F.parent.d(F.min))


def filter_r(F):
    return Filter(F.parent, F.parent.r(F.min))


def filter_mul(A, B):
    """A·B = (AB)↑ when d(A) = r(B), else None."""
    _same_parent(A, B)
    S = A.parent
    if S.d(A.min) != S.r(B.min):
        return None
    return Filter(S, S.mul(A.min, B.min))


def carrier_product(S, A, B):
    """(AB)↑ computed on carriers, for cross-checking filter_mul."""
    return S.up_closure(S.set_mul(A, B))


def carrier_d(S, A):
    return S.up_closure(S.set_mul(S.set_inv(A), A))


def carrier_r(S, A):
    return S.up_closure(S.set_mul(A, S.set_inv(A)))


# classification

def is_ultrafilter(F, check=True):
    """Maximal proper filter. Computed by inclusion and, with check, also by
    the closure condition: b meets every member of F nontrivially => b in F."""
    S = F.parent
    C = F.carrier
    by_inclusion = not any(G.carrier != C and G.carrier & C == C
                           for G in all_filters(S, check=False))
    if check:
        by_closure = ultra_by_closure(F)
        if by_closure != by_inclusion:
            raise CheckFailed("ultrafilter tests disagree", witness=F.min)
    return by_inclusion


def ultra_by_closure(F):
    S = F.parent
    C = F.carrier
    for b in range(S.n):
        if C >> b & 1:
            continue
        if all(S.nonzero(S.down[b] & S.down[a]) for a in bits(C)):
            return False
    return True


def is_consistent(S, A):
    """Nonempty and the whole set has a nonzero lower bound."""
    if S.zero is None:
        raise NoZero("consistency needs a zero")
    return A != 0 and S.nonzero(S.lower_bounds(A)) != 0


def maximal_consistent_supersets(S, A):
    """Maximal consistent sets containing A, sorted.

    A consistent set with nonzero lower bound x lies inside x↑, which is
    itself consistent; so the maximal ones are x↑ for minimal such x.
    """
    if not is_consistent(S, A):
        return []
    lbs = S.nonzero(S.lower_bounds(A))
    return sorted(S.up[x] for x in bits(S.minimal_elements(lbs)))


def _need_distributive(S):
    if not S.is_distributive:
        raise NotDistributive("prime filters need a distributive semigroup",
                              witness=S.distributivity_witness)


def is_prime(F, check=True):
    """a v b in F implies a in F or b in F, over existing binary joins."""
    S = F.parent
    _need_distributive(S)
    J = S.join_table
    inF = np.array([bool(F.carrier >> i & 1) for i in range(S.n)])
    jin = np.zeros_like(J, dtype=bool)
    has = J >= 0
    jin[has] = inF[J[has]]
    bad = has & jin & ~inF[:, None] & ~inF[None, :]
    result = not bad.any()
    if check and result != is_completely_prime(F):
        raise CheckFailed("prime and completely prime disagree", witness=F.min)
    return result


def is_completely_prime(F):
    """The join of any compatible set landing in F has a member in F.

    It is enough to test, for each x in F, the largest candidate set x↓ \\ F.
    """
    S = F.parent
    _need_distributive(S)
    C = F.carrier
    for x in bits(C):
        if S.lub(S.down[x] & ~C) == x:
            return False
    return True


def is_tight(F, cov):
    """F meets every cover of each of its elements."""
    S = F.parent
    C = F.carrier
    for x in bits(C):
        if cov.has_cover_inside(x, S.down[x] & ~C):
            return False
    return True


def tight_witness(F, cov):
    """(x, X) with x in F and X a cover of x missing F, minimal; or None."""
    S = F.parent
    C = F.carrier
    for x in bits(C):
        room = S.down[x] & ~C
        if cov.has_cover_inside(x, room):
            X = cov.minimal_cover_inside(x, room)
            return x, X
    return None


CLASSES = ("all", "ultra", "prime", "completely_prime", "tight", "dense")


def filters_of_class(S, cls, cov=None):
    """Filters of the named class; tight and dense use the builtin coverages
    unless one is passed."""
    fs = all_filters(S, check=False)
    if cls == "all":
        return fs
    if cls == "ultra":
        return [F for F in fs if is_ultrafilter(F)]
    if cls == "prime":
        return [F for F in fs if is_prime(F)]
    if cls == "completely_prime":
        return [F for F in fs if is_completely_prime(F)]
    if cls in ("tight", "dense"):
        if cov is None:
            from .coverages import builtin_coverage
            cov = builtin_coverage(S, cls)
        return [F for F in fs if is_tight(F, cov)]
    raise ValueError(f"unknown filter class {cls!r}")


# groupoids

class Groupoid:
    """A finite groupoid on points 0..m-1 with an explicit partial product."""

    def __init__(self, labels, inv, d, r, mul):
        self.m = len(labels)
        self.labels = list(labels)
        self.inv = list(inv)
        self.d = list(d)
        self.r = list(r)
        self.mul = [list(row) for row in mul]
        self.identities = mask_of(p for p in range(self.m) if self.d[p] == p)

    def objects(self):
        return list(bits(self.identities))

    def product(self, p, q):
        v = self.mul[p][q]
        return None if v < 0 else v

    def check_axioms(self):
        """Groupoid axioms; returns None or a witness of the first failure."""
        m = self.m
        ids = self.identities
        for p in range(m):
            if not (ids >> self.d[p] & 1 and ids >> self.r[p] & 1):
                return {"identity": p}
            if self.mul[p][self.d[p]] != p or self.mul[self.r[p]][p] != p:
                return {"unit": p}
            if self.mul[self.inv[p]][p] != self.d[p] or self.mul[p][self.inv[p]] != self.r[p]:
                return {"inverse": p}
            for q in range(m):
                defined = self.mul[p][q] >= 0
                if defined != (self.d[p] == self.r[q]):
                    return {"domain": [p, q]}
                if defined:
                    pq = self.mul[p][q]
                    if self.d[pq] != self.d[q] or self.r[pq] != self.r[p]:
                        return {"ends": [p, q]}
        for p in range(m):
            for q in range(m):
                pq = self.mul[p][q]
                if pq < 0:
                    continue
                for s in range(m):
                    qs = self.mul[q][s]
                    if qs < 0:
                        continue
                    if self.mul[pq][s] != self.mul[p][qs]:
                        return {"assoc": [p, q, s]}
        return None

    def to_dict(self):
        return {
            "objects": self.objects(),
            "arrows": [{"id": p, "label": self.labels[p], "d": self.d[p], "r": self.r[p]}
                       for p in range(self.m)],
            "product": [[v if v >= 0 else None for v in row] for row in self.mul],
        }

    def to_dot(self, name="G"):
        lines = [f"digraph {name} {{"]
        for o in self.objects():
            lines.append(f'  o{o} [label="{_esc(self.labels[o])}"];')
        for p in range(self.m):
            lines.append(f'  o{self.d[p]} -> o{self.r[p]} [label="{_esc(self.labels[p])}"];')
        lines.append("}")
        return "\n".join(lines) + "\n"


def _esc(s):
    return str(s).replace("\\", "\\\\").replace('"', '\\"')


class FilterGroupoid(Groupoid):
    """Groupoid of filters of a class, points ordered by minimum element."""

    def __init__(self, S, cls, filters):
        self.S = S
        self.cls = cls
        self.filters = sorted(filters)
        self.mins = [F.min for F in self.filters]
        self.index = {a: i for i, a in enumerate(self.mins)}
        idx = self.index

        def find(a, what):
            if a not in idx:
                raise ClassNotClosed(f"{what} leaves the class {cls}", witness=a)
            return idx[a]

        inv = [find(S.inv[a], "inverse") for a in self.mins]
        d = [find(S.d(a), "d") for a in self.mins]
        r = [find(S.r(a), "r") for a in self.mins]
        m = len(self.mins)
        mul = [[-1] * m for _ in range(m)]
        for i, F in enumerate(self.filters):
            for j, G in enumerate(self.filters):
                H = filter_mul(F, G)
                if H is not None:
                    mul[i][j] = find(H.min, "product")
        super().__init__([S.labels[a] for a in self.mins], inv, d, r, mul)
        bad = self.check_axioms()
        if bad is not None:
            raise CheckFailed("groupoid axioms fail", witness=bad)

    def points_containing(self, s):
        """Mask of points whose filter contains s."""
        up = self.S.up
        return mask_of(i for i, a in enumerate(self.mins) if up[a] >> s & 1)


def filter_groupoid(S, cls="all", cov=None):
    if S.zero is None:
        raise NoZero("filter groupoids need a zero")
    if cls == "dense":
        dense = filters_of_class(S, "dense", cov)
        tight = filters_of_class(S, "tight")
        if cov is None and [F.min for F in dense] != [F.min for F in tight]:
            raise CheckFailed("dense and tight filters differ on a finite semigroup")
        return FilterGroupoid(S, cls, dense)
    return FilterGroupoid(S, cls, filters_of_class(S, cls, cov))
