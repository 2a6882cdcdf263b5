"""Completions built from compatible order ideals.

C(S) is the set of nonempty compatible order ideals under subset product.
The other completions are subsets of C(S) cut out by a closure operator:
join closure for Idl(S), a coverage closure for C(S, C). Every completion
is returned as an ordinary InvSemigroup together with its carriers and the
embedding of S.
"""
from .bits import bits, mask_of, to_bitstring
from .core import verify
from .coverages import builtin_coverage, is_idempotent_pure_coverage, separative_quotient
from .errors import TooLarge, NotDistributive, NotIdempotentPure, NoZero, CheckFailed, \
    FlavorMismatch

MAX_SIZE = 24
MAX_IDEALS = 5000


class CompletionSemigroup:
    """A completion: `semigroup` is indexed like `carriers` (sorted as ints)."""

    def __init__(self, parent, flavor, carriers, semigroup, iota, base=None):
        self.parent = parent
        self.flavor = flavor
        self.carriers = list(carriers)
        self.semigroup = semigroup
        self.iota = list(iota)
        # the semigroup whose elements the carriers are made of
        self.base = parent if base is None else base
        self.index = {c: i for i, c in enumerate(self.carriers)}

    @property
    def n(self):
        return self.semigroup.n

    def to_dict(self):
        d = self.semigroup.to_dict()
        d["flavor"] = self.flavor
        d["iota"] = list(self.iota)
        d["carriers"] = [to_bitstring(c, self.base.n) for c in self.carriers]
        return d


def _labels(base, carriers):
    return ["{" + ",".join(base.labels[x] for x in bits(c)) + "}" for c in carriers]


def _check_size(S):
    if S.zero is None:
        raise NoZero("completions need a zero")
    if S.n > MAX_SIZE:
        raise TooLarge(f"completions are limited to {MAX_SIZE} elements", count=S.n)


def order_ideals(S, compatible=True, limit=MAX_IDEALS):
    """Nonempty order ideals of S (pairwise compatible ones by default), sorted."""
    order = sorted(range(S.n), key=lambda x: (S.down[x].bit_count(), x))
    out = []

    def rec(i, inc):
        if len(out) > limit:
            raise TooLarge(f"more than {limit} ideals", count=len(out))
        if i == len(order):
            if inc:
                out.append(inc)
            return
        x = order[i]
        if S.down[x] & ~(1 << x) & ~inc == 0 and (not compatible or inc & ~S.compat[x] == 0):
            rec(i + 1, inc | (1 << x))
        rec(i + 1, inc)

    rec(0, 0)
    return sorted(out)


def is_compatible_order_ideal(S, A):
    return A != 0 and S.down_closure(A) == A and S.is_compatible_set(A)


def _build(S, flavor, carriers, mul, base=None, iota_of=None):
    base = S if base is None else base
    carriers = sorted(carriers)
    index = {c: i for i, c in enumerate(carriers)}
    table = []
    for A in carriers:
        row = []
        for B in carriers:
            C = mul(A, B)
            if C not in index:
                raise CheckFailed(f"{flavor}: product leaves the carrier set",
                                  witness=[A, B, C])
            row.append(index[C])
        table.append(row)
    T = verify(table, labels=_labels(base, carriers))
    iota_of = iota_of or (lambda s: base.down[s])
    iota = [index[iota_of(s)] for s in range(S.n)]
    return CompletionSemigroup(S, flavor, carriers, T, iota, base)


def _check_hom(P, S):
    for s in range(S.n):
        for t in range(S.n):
            if P.iota[S.mul(s, t)] != P.semigroup.mul(P.iota[s], P.iota[t]):
                raise CheckFailed("embedding is not multiplicative", witness=[s, t])


def schein_completion(S):
    """C(S): compatible order ideals under subset product; iota(s) = s↓."""
    _check_size(S)
    ideals = order_ideals(S)
    P = _build(S, "schein", ideals, S.set_mul)
    _check_hom(P, S)
    return P


# join closure

def vee_closure(S, A):
    """Smallest order ideal containing A closed under existing compatible joins."""
    A = S.down_closure(A)
    while True:
        new = A
        for a in bits(A):
            for b in bits(A & S.compat[a]):
                if b <= a:
                    continue
                j = S.lub((1 << a) | (1 << b))
                if j is not None:
                    new |= S.down[j]
        if new == A:
            return A
        A = new


def closure_law_failures(S):
    """Instance checks of the four join-closure laws over all compatible ideals."""
    ideals = order_ideals(S)
    bad = []
    cl = {A: vee_closure(S, A) for A in ideals}
    for A in ideals:
        c = cl[A]
        if A & ~c:
            bad.append(("extensive", A))
        if vee_closure(S, c) != c:
            bad.append(("idempotent", A))
    for A in ideals:
        for B in ideals:
            if A & ~B == 0 and cl[A] & ~cl[B]:
                bad.append(("monotone", A, B))
            if S.set_mul(cl[A], cl[B]) != vee_closure(S, S.set_mul(A, B)):
                bad.append(("product", A, B))
    return bad


def idl_completion(S):
    """Idl(S): join-closed compatible order ideals with product (AB)^v."""
    _check_size(S)
    if not S.is_distributive:
        raise NotDistributive("Idl needs a distributive semigroup",
                              witness=S.distributivity_witness)
    ideals = [A for A in order_ideals(S) if vee_closure(S, A) == A]
    P = _build(S, "idl", ideals, lambda A, B: vee_closure(S, S.set_mul(A, B)))
    _check_hom(P, S)
    for a in range(S.n):
        for b in bits(S.compat[a]):
            j = S.lub((1 << a) | (1 << b))
            if j is not None and P.iota[j] != P.semigroup.lub(
                    (1 << P.iota[a]) | (1 << P.iota[b])):
                raise CheckFailed("iota does not preserve a join", witness=[a, b])
    return P


def finite_elements(P):
    """Mask of the finite elements of a completion.

    An element is finite when every covering by a compatible family has a
    finite subcovering. Every family in a finite carrier is itself finite,
    so the family serves as its own subcovering and all elements qualify.
    The closure properties of the finite elements are checked anyway.
    """
    T = P.semigroup
    K = T.all
    for a in bits(K):
        if not (K >> T.inv[a] & 1 and K >> T.d(a) & 1):
            raise CheckFailed("finite elements not closed under inverse")
        for b in bits(K):
            if not K >> T.mul(a, b) & 1:
                raise CheckFailed("finite elements not closed under product")
    return K


def restrict_completion(P, K, flavor):
    """The completion restricted to the element mask K (closed inverse subsemigroup)."""
    if K == P.semigroup.all:
        return CompletionSemigroup(P.parent, flavor, P.carriers, P.semigroup, P.iota, P.base)
    keep = sorted(bits(K))
    T, emb = P.semigroup.restrict(keep)
    pos = {e: i for i, e in enumerate(emb)}
    return CompletionSemigroup(P.parent, flavor, [P.carriers[e] for e in emb], T,
                               [pos[i] for i in P.iota], P.base)


def dist_completion(S):
    """D(S): finitely generated compatible ideals, which at finite scale is all of C(S)."""
    C = schein_completion(S)
    return restrict_completion(C, finite_elements(C), "dist")


# coverage closure

def cover_closure(cov, A):
    """x is in the closure of A when some cover of x lies inside A."""
    S = cov.S
    return mask_of(x for x in range(S.n) if cov.has_cover_inside(x, A))


def nucleus_failures(S, nu, elems=None):
    """Check the four nucleus laws of nu over the given ideals (default: all of C(S))."""
    elems = order_ideals(S) if elems is None else elems
    img = {A: nu(A) for A in elems}
    bad = []
    for A in elems:
        v = img[A]
        if A & ~v:
            bad.append(("extensive", A))
        if nu(v) != v:
            bad.append(("idempotent", A))
    for A in elems:
        for B in elems:
            if A & ~B == 0 and img[A] & ~img[B]:
                bad.append(("monotone", A, B))
            if S.set_mul(img[A], img[B]) & ~nu(S.set_mul(A, B)):
                bad.append(("product", A, B))
    return bad


def closed_completion(S, cov, cap=None):
    """C(S, C): ideals equal to their C-closure, product = closure of AB."""
    _check_size(S)
    if not is_idempotent_pure_coverage(cov):
        raise NotIdempotentPure("the coverage is not idempotent-pure")
    ideals = order_ideals(S)
    nu = lambda A: cover_closure(cov, A)
    for A in ideals:
        if not is_compatible_order_ideal(S, nu(A)):
            raise CheckFailed("closure of an ideal is not a compatible ideal", witness=A)
    bad = nucleus_failures(S, nu, ideals)
    if bad:
        raise CheckFailed("nucleus law fails", witness=bad[0])
    closed = [A for A in ideals if nu(A) == A]
    P = _build(S, "closed", closed, lambda A, B: nu(S.set_mul(A, B)),
               iota_of=lambda s: nu(S.down[s]))
    _check_hom(P, S)
    bad = cover_to_join_failures(P.iota, S, P.semigroup, cov, cap)
    if bad:
        raise CheckFailed("embedding does not send covers to joins", witness=bad[0])
    P.nucleus = nu
    P.coverage = cov
    return P


def cover_to_join_failures(theta, S, T, cov, cap=None):
    """Pairs (a, X) with X a cover of a but theta(a) != join theta(X).

    Cover families of the builtin kinds are closed upward and the join of
    a larger family can only grow towards theta(a), so minimal covers suffice.
    """
    bad = []
    for a in range(S.n):
        fams = cov.minimal_covers(a, cap) if cov.monotone else cov.covers(a, cap)
        for X in fams:
            img = mask_of(theta[x] for x in bits(X))
            if not T.is_compatible_set(img) or T.join(img) != theta[a]:
                bad.append((a, sorted(bits(X))))
    return bad


def _covered_pipeline(S, kind, flavor):
    if S.zero is None:
        raise NoZero("this completion needs a zero")
    cov = builtin_coverage(S, kind)
    sq = separative_quotient(cov)
    Q = sq.quotient
    qcov = builtin_coverage(Q, kind)
    P = closed_completion(Q, qcov)
    K = finite_elements(P)
    D = restrict_completion(P, K, flavor)
    D.parent = S
    D.base = Q
    D.quotient = sq
    D.iota = [D.iota[sq.sigma[s]] for s in range(S.n)]
    D.nucleus = P.nucleus
    _check_hom(D, S)
    bad = cover_to_join_failures(D.iota, S, D.semigroup, cov)
    if bad:
        raise CheckFailed(f"delta is not a {kind} map", witness=bad[0])
    if not D.semigroup.is_distributive:
        raise CheckFailed(f"{flavor} completion is not distributive")
    return D


def tight_completion(S):
    """D_t(S): tight quotient, then the tight-closed ideals; delta = iota sigma."""
    return _covered_pipeline(S, "tight", "tight")


def dense_pseudogroup(S):
    """P_d(S): the same pipeline with the dense coverage; checked boolean."""
    P = _covered_pipeline(S, "dense", "dense")
    T = tight_completion(S)
    if P.carriers != T.carriers or P.semigroup.table != T.semigroup.table:
        raise CheckFailed("dense and tight pipelines disagree")
    if not P.semigroup.is_boolean:
        raise CheckFailed("dense pseudogroup is not boolean")
    bad = star_failures(P.semigroup)
    if bad:
        raise CheckFailed("pseudocomplement law fails", witness=bad[0])
    return P


def star(T, e):
    """e* = join of the idempotents f with f ^ e = 0."""
    fs = mask_of(f for f in bits(T.idempotents) if T.meet(f, e) == T.zero)
    return T.join(fs)


def star_failures(T):
    bad = []
    for e in bits(T.idempotents):
        s = star(T, e)
        if s is None or T.meet(e, s) != T.zero or star(T, s) != e:
            bad.append(e)
    return bad


# the enveloping quantale

class Quantale:
    """Order ideals of a pseudogroup closed under compatible joins, by inclusion."""

    def __init__(self, S, elems):
        self.S = S
        self.elems = elems
        self.top = S.all
        self.bottom = 1 << S.zero

    def closure(self, A):
        A = A | self.bottom
        return vee_closure(self.S, A)

    def join(self, family):
        u = 0
        for A in family:
            u |= A
        return self.closure(u)

    def meet(self, A, B):
        return A & B


def enveloping_quantale(S, limit=MAX_IDEALS):
    if not S.is_pseudogroup:
        raise FlavorMismatch("the enveloping quantale needs a pseudogroup")
    _check_size(S)
    ideals = order_ideals(S, compatible=False, limit=limit)
    elems = [A for A in ideals if vee_closure(S, A) == A]
    if S.all not in elems:
        raise CheckFailed("the whole semigroup is not join-closed")
    return Quantale(S, elems)


# transport between prime filters and completely prime filters

def prime_transport(T):
    """Prime filters P of T against completely prime filters of Idl(T).

    P goes to {A : A meets P}; F goes back to {s : s↓ in F}. Returns the
    list of (min of P, index of the min of the image) after checking both
    maps are mutually inverse and preserve order.
    """
    from .filters import filters_of_class
    I = idl_completion(T)
    S = I.semigroup
    primes = filters_of_class(T, "prime")
    cps = filters_of_class(S, "completely_prime")
    cp_carriers = {F.carrier: F.min for F in cps}
    out = []
    for P in primes:
        up = mask_of(i for i, A in enumerate(I.carriers) if A & P.carrier)
        if up not in cp_carriers:
            raise CheckFailed("P^u is not completely prime", witness=P.min)
        back = mask_of(s for s in range(T.n) if up >> I.iota[s] & 1)
        if back != P.carrier:
            raise CheckFailed("transport is not invertible", witness=P.min)
        out.append((P.min, cp_carriers[up]))
    if sorted(q for _, q in out) != sorted(F.min for F in cps):
        raise CheckFailed("transport misses a completely prime filter")
    for p, q in out:
        for p2, q2 in out:
            if (T.up[p] & ~T.up[p2] == 0) != (S.up[q] & ~S.up[q2] == 0):
                raise CheckFailed("transport does not preserve order")
    return out
