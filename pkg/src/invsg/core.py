"""Finite inverse semigroups given by a multiplication table.

Element sets are int bitmasks over element ids. All derived data (inverses,
natural partial order, compatibility) is computed once by `verify`.
"""
import json
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .bits import bits, mask_of, full
from .errors import (ParseError, NotAssociative, NotInverse, BadZero, NoZero,
                     AlreadyHasZero, NotCompatible, NotBelow, NotWeaklyBoolean)


class InvSemigroup:
    """A verified finite inverse semigroup. Build instances with `verify`."""

    def __init__(self, table, zero, one, inv, labels):
        n = len(table)
        self.n = n
        self.table = tuple(tuple(row) for row in table)
        self.zero = zero
        self.one = one
        self.inv = tuple(inv)
        self.labels = tuple(labels)
        T = np.array(self.table, dtype=np.int64).reshape(n, n)
        self.np_table = T
        self.is_idem = tuple(self.table[s][s] == s for s in range(n))
        self.idempotents = mask_of(s for s in range(n) if self.is_idem[s])
        self.dom = tuple(self.table[self.inv[s]][s] for s in range(n))
        self.ran = tuple(self.table[s][self.inv[s]] for s in range(n))
        idx = np.arange(n)
        # leq[s, t] <=> s = t d(s)
        dd = np.array(self.dom, dtype=np.int64)
        leq = (T[:, dd].T == idx[:, None]) if n else np.zeros((0, 0), bool)
        self.leq_matrix = leq
        self.down = tuple(_row_mask(leq[:, t]) for t in range(n))
        self.up = tuple(_row_mask(leq[s, :]) for s in range(n))
        iv = np.array(self.inv, dtype=np.int64)
        idem = np.array(self.is_idem, dtype=bool)
        if n:
            a = T[iv[:, None], idx[None, :]]  # s^-1 t
            b = T[idx[:, None], iv[None, :]]  # s t^-1
            comp = idem[a] & idem[b]
        else:
            comp = np.zeros((0, 0), bool)
        self.compat_matrix = comp
        self.compat = tuple(_row_mask(comp[s]) for s in range(n))
        self.all = full(n)

    # basic algebra

    def mul(self, s, t):
        return self.table[s][t]

    def d(self, s):
        return self.dom[s]

    def r(self, s):
        return self.ran[s]

    def leq(self, s, t):
        return bool(self.leq_matrix[s, t])

    def compatible(self, s, t):
        return bool(self.compat_matrix[s, t])

    def orthogonal(self, s, t):
        """s and t have no common lower bound other than zero."""
        common = self.down[s] & self.down[t]
        if self.zero is None:
            return common == 0
        return common == 1 << self.zero

    def label(self, s):
        return self.labels[s]

    def set_mul(self, A, B):
        out = 0
        tb = self.table
        bl = list(bits(B))
        for a in bits(A):
            row = tb[a]
            for b in bl:
                out |= 1 << row[b]
        return out

    def set_inv(self, A):
        return mask_of(self.inv[a] for a in bits(A))

    def down_closure(self, A):
        out = 0
        for a in bits(A):
            out |= self.down[a]
        return out

    def up_closure(self, A):
        out = 0
        for a in bits(A):
            out |= self.up[a]
        return out

    def is_compatible_set(self, A):
        for a in bits(A):
            if A & ~self.compat[a]:
                return False
        return True

    def incompatible_pair(self, A):
        for a in bits(A):
            bad = A & ~self.compat[a]
            if bad:
                return a, next(bits(bad))
        return None

    def nonzero(self, A):
        if self.zero is None:
            return A
        return A & ~(1 << self.zero)

    # extremal elements of a set

    def min_of(self, m):
        """Least element of the set m, or None."""
        for u in bits(m):
            if m & ~self.up[u] == 0:
                return u
        return None

    def max_of(self, m):
        for u in bits(m):
            if m & ~self.down[u] == 0:
                return u
        return None

    def maximal_elements(self, m):
        out = 0
        for u in bits(m):
            if m & self.up[u] == 1 << u:
                out |= 1 << u
        return out

    def minimal_elements(self, m):
        out = 0
        for u in bits(m):
            if m & self.down[u] == 1 << u:
                out |= 1 << u
        return out

    def lower_covers(self, s):
        """Maximal elements strictly below s."""
        return self.maximal_elements(self.down[s] & ~(1 << s))

    def upper_bounds(self, A):
        ub = self.all
        for a in bits(A):
            ub &= self.up[a]
        return ub

    def lower_bounds(self, A):
        lb = self.all
        for a in bits(A):
            lb &= self.down[a]
        return lb

    def lub(self, A):
        """Least upper bound of A under the natural order, or None.

        No compatibility requirement; the empty set has lub 0 if S has a zero.
        """
        return self.min_of(self.upper_bounds(A))

    def glb(self, A):
        return self.max_of(self.lower_bounds(A))

    def meet(self, s, t):
        return self.max_of(self.down[s] & self.down[t])

    def join(self, A):
        """Join of a compatible set (mask or iterable of ids), None if absent."""
        if not isinstance(A, int):
            A = mask_of(A)
        pair = self.incompatible_pair(A)
        if pair is not None:
            raise NotCompatible("join of incompatible elements", witness=pair)
        if A == 0:
            return self.zero
        return self.lub(A)

    @cached_property
    def join_table(self):
        """n x n array: join of compatible pairs, -1 if incompatible or absent."""
        n = self.n
        J = np.full((n, n), -1, dtype=np.int64)
        for a in range(n):
            for b in bits(self.compat[a]):
                if b < a:
                    continue
                j = self.lub((1 << a) | (1 << b))
                if j is not None:
                    J[a, b] = J[b, a] = j
        return J

    # derived structure

    def idempotent_list(self):
        return list(bits(self.idempotents))

    def restrict(self, elems):
        """Inverse subsemigroup on the given ids (closed under mul and inv).

        Returns (T, embedding) where embedding[i] is the id in self.
        """
        elems = sorted(elems)
        pos = {e: i for i, e in enumerate(elems)}
        table = [[pos[self.table[a][b]] for b in elems] for a in elems]
        labels = [self.labels[e] for e in elems]
        return verify(table, labels=labels), elems

    def idempotent_semilattice(self):
        return self.restrict(self.idempotent_list())

    def to_dict(self):
        return {"n": self.n, "zero": self.zero, "one": self.one,
                "table": [list(r) for r in self.table], "labels": list(self.labels)}

    def to_json(self):
        return json.dumps(self.to_dict(), separators=(",", ":"))

    def __repr__(self):
        return f"InvSemigroup(n={self.n}, zero={self.zero}, one={self.one})"

    # predicates (cached)

    @cached_property
    def distributivity_witness(self):
        """None if distributive, else a description of the first failure."""
        bad = self._missing_join()
        if bad is not None:
            return {"missing_join": bad}
        J = self.join_table
        T = self.np_table
        n = self.n
        for a in range(n):
            for b in bits(self.compat[a]):
                if b <= a:
                    continue
                j = int(J[a, b])
                left = J[T[:, a], T[:, b]]
                badl = np.flatnonzero(left != T[:, j])
                if badl.size:
                    return {"left": [int(badl[0]), a, b]}
                right = J[T[a, :], T[b, :]]
                badr = np.flatnonzero(right != T[j, :])
                if badr.size:
                    return {"right": [a, b, int(badr[0])]}
        return None

    def _missing_join(self):
        """Search nonempty compatible sets for one without a join.

        A state is (join so far, elements compatible with everything chosen);
        extending by c replaces the join with lub(join, c).
        """
        seen = set()
        stack = []
        for a in range(self.n):
            st = (a, self.compat[a])
            if st not in seen:
                seen.add(st)
                stack.append((a, self.compat[a], 1 << a))
        while stack:
            j, C, chosen = stack.pop()
            for c in bits(C & ~chosen):
                j2 = self.lub((1 << j) | (1 << c))
                if j2 is None:
                    return sorted(bits(chosen | (1 << c)))
                C2 = C & self.compat[c]
                st = (j2, C2)
                if st not in seen:
                    seen.add(st)
                    stack.append((j2, C2, chosen | (1 << c)))
        return None

    @cached_property
    def is_distributive(self):
        return self.distributivity_witness is None

    @cached_property
    def is_meet_semigroup(self):
        for s in range(self.n):
            for t in range(s + 1, self.n):
                if self.meet(s, t) is None:
                    return False
        return True

    @cached_property
    def has_weak_meet(self):
        """Each s-down meet t-down is generated by finitely many elements.

        Computed literally: the maximal elements must generate the set.
        """
        for s in range(self.n):
            for t in range(s, self.n):
                L = self.down[s] & self.down[t]
                if self.down_closure(self.maximal_elements(L)) != L:
                    return False
        return True

    @cached_property
    def idempotents_boolean(self):
        """E(S) is a generalized boolean algebra (needs a zero)."""
        if self.zero is None:
            return False
        E = self.idempotent_list()
        Emask = self.idempotents
        z = self.zero
        jn = {}
        for i, e in enumerate(E):
            for f in E[i:]:
                j = self.lub((1 << e) | (1 << f))
                if j is None or not self.is_idem[j]:
                    return False
                jn[e, f] = jn[f, e] = j
        tb = self.table
        for e in E:
            for f in E:
                for g in E:
                    if tb[e][jn[f, g]] != jn[tb[e][f], tb[e][g]]:
                        return False
        for e in E:
            below = self.down[e] & Emask
            for f in bits(below):
                if not any(tb[f][g] == z and jn[f, g] == e for g in bits(below)):
                    return False
        return True

    @cached_property
    def is_weakly_boolean(self):
        return self.is_distributive and self.idempotents_boolean

    @cached_property
    def is_boolean(self):
        return self.is_weakly_boolean and self.is_meet_semigroup

    @cached_property
    def is_pseudogroup(self):
        return self.is_distributive and self.zero is not None and self.one is not None


def _row_mask(row):
    return mask_of(int(i) for i in np.flatnonzero(row))


@dataclass(frozen=True)
class Predicates:
    is_distributive: bool
    is_meet_semigroup: bool
    is_weakly_boolean: bool
    is_boolean: bool
    is_pseudogroup: bool
    has_weak_meet: bool

    def to_dict(self):
        return dict(self.__dict__)


def predicates(S):
    if S.zero is None:
        raise NoZero("boolean-family predicates need a zero")
    return Predicates(S.is_distributive, S.is_meet_semigroup, S.is_weakly_boolean,
                      S.is_boolean, S.is_pseudogroup, S.has_weak_meet)


def verify(table, zero=None, one=None, labels=None):
    """Validate a multiplication table and return an InvSemigroup.

    zero/one are detected from the table; if given they must match.
    """
    try:
        T = np.array(table, dtype=np.int64)
    except (ValueError, TypeError) as exc:
        raise ParseError(f"table is not a rectangular integer array: {exc}")
    if T.size == 0:
        raise ParseError("empty table")
    if T.ndim != 2 or T.shape[0] != T.shape[1]:
        raise ParseError(f"table must be square, got shape {T.shape}")
    n = T.shape[0]
    if T.min() < 0 or T.max() >= n:
        raise ParseError("table entries out of range")
    idx = np.arange(n)
    left = T[T, :]                       # (ab)c
    right = T[idx[:, None, None], T[None, :, :]]  # a(bc)
    badm = left != right
    if badm.any():
        a, b, c = (int(x) for x in np.argwhere(badm)[0])
        raise NotAssociative(f"({a}*{b})*{c} != {a}*({b}*{c})", witness=[a, b, c])
    idem = T[idx, idx] == idx
    E = np.flatnonzero(idem)
    EE = T[np.ix_(E, E)]
    bad = EE != EE.T
    if bad.any():
        i, j = np.argwhere(bad)[0]
        raise NotInverse("idempotents do not commute", witness=[int(E[i]), int(E[j])])
    sts = T[T, idx[:, None]]            # sts[s, t] = (s t) s
    cond = (sts == idx[:, None]) & (sts.T == idx[None, :])
    counts = cond.sum(axis=1)
    if (counts != 1).any():
        s = int(np.flatnonzero(counts != 1)[0])
        raise NotInverse(f"element {s} has {int(counts[s])} inverses", witness=[s])
    inv = [int(np.flatnonzero(cond[s])[0]) for s in range(n)]
    zeros = [z for z in range(n) if (T[z, :] == z).all() and (T[:, z] == z).all()]
    found_zero = zeros[0] if zeros else None
    if zero is not None and zero != found_zero:
        raise BadZero(f"element {zero} is not absorbing", witness=[zero])
    ones = [u for u in range(n) if (T[u, :] == idx).all() and (T[:, u] == idx).all()]
    found_one = ones[0] if ones else None
    if one is not None and one != found_one:
        raise ParseError(f"element {one} is not an identity", witness=[one])
    if labels is None:
        labels = [str(i) for i in range(n)]
    labels = [str(x) for x in labels]
    if len(labels) != n:
        raise ParseError("label count does not match table size")
    return InvSemigroup(T.tolist(), found_zero, found_one, inv, labels)


def natural_order(S):
    return S.leq_matrix


def compatible(S, s, t):
    return S.compatible(s, t)


def orthogonal(S, s, t):
    return S.orthogonal(s, t)


def meet(S, s, t):
    return S.meet(s, t)


def join(S, A):
    return S.join(A)


def relative_complement(S, a, b):
    """The unique x <= a with b v x = a and b ^ x = 0."""
    if S.zero is None or not S.is_weakly_boolean:
        raise NotWeaklyBoolean("relative complement needs a weakly boolean semigroup")
    if not S.leq(b, a):
        raise NotBelow(f"{b} is not below {a}", witness=[b, a])
    z = S.zero
    found = []
    for x in bits(S.down[a]):
        if S.lub((1 << b) | (1 << x)) == a and S.meet(b, x) == z:
            found.append(x)
    if len(found) != 1:
        raise NotWeaklyBoolean(f"{len(found)} relative complements", witness=found)
    x = found[0]
    # same element via the idempotent complement of d(b) inside d(a)
    da, db = S.d(a), S.d(b)
    comps = [e for e in bits(S.down[da] & S.idempotents)
             if S.mul(e, db) == z and S.lub((1 << e) | (1 << db)) == da]
    assert len(comps) == 1 and S.mul(a, comps[0]) == x
    return x


def adjoin_zero(S):
    if S.zero is not None:
        raise AlreadyHasZero("semigroup already has a zero", witness=[S.zero])
    n = S.n
    table = [[0] * (n + 1)]
    for a in range(n):
        table.append([0] + [S.table[a][b] + 1 for b in range(n)])
    labels = ["0"] + list(S.labels)
    if "0" in S.labels:
        labels[0] = "z"
    return verify(table, labels=labels)


def from_dict(d):
    try:
        table = d["table"]
    except (KeyError, TypeError):
        raise ParseError("semigroup JSON needs a 'table'")
    if "n" in d and d["n"] != len(table):
        raise ParseError("'n' does not match table size")
    return verify(table, zero=d.get("zero"), one=d.get("one"), labels=d.get("labels"))


def load(path):
    try:
        with open(path) as fh:
            d = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise ParseError(f"cannot read {path}: {exc}")
    return from_dict(d)
