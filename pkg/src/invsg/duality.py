"""The maps epsilon and eta, round trips, booleanizations and morphism predicates."""
from itertools import product as iproduct

from .bits import bits, mask_of, to_bitstring
from .completions import (CompletionSemigroup, dist_completion, enveloping_quantale,
                          nucleus_failures, cover_to_join_failures)
from .coverages import builtin_coverage
from .errors import (CheckFailed, NotBoolean, NotDistributive, NotWeaklyBoolean,
                     PreimageNotFilter, FlavorMismatch, NotCallitic, NotSurjective,
                     NotIdempotentPure, NoZero, TooLarge, NotCompatible)
from .core import verify, relative_complement
from .filters import filter_groupoid, filters_of_class, is_filter_set
from .groupoids import (basic_topology, patch_topology, bisection_semigroup, is_hausdorff,
                        is_boolean_groupoid)
from .morphisms import Morphism, Isomorphism, homomorphisms, is_distributive_morphism

UNIQUE_S, UNIQUE_T = 6, 12


def default_class(S):
    return "prime" if S.is_distributive else "all"


# maps of groupoids

class GroupoidMap:
    """A map of arrows between two TopGroupoids."""

    def __init__(self, source, target, mapping):
        self.source = source
        self.target = target
        self.map = list(mapping)

    def __call__(self, g):
        return self.map[g]

    def preimage(self, U):
        return mask_of(g for g, h in enumerate(self.map) if U >> h & 1)

    def image(self, A):
        return mask_of(self.map[g] for g in bits(A))

    def functor_failure(self):
        A, B, f = self.source.G, self.target.G, self.map
        for g in range(A.m):
            if f[A.d[g]] != B.d[f[g]] or f[A.r[g]] != B.r[f[g]]:
                return {"ends": g}
            for h in range(A.m):
                gh = A.mul[g][h]
                if gh >= 0 and B.mul[f[g]][f[h]] != f[gh]:
                    return {"product": [g, h]}
        return None

    def covering_failure(self):
        """For each g, f maps the arrows with domain d(g) bijectively onto
        the arrows with domain f(d(g))."""
        A, B, f = self.source.G, self.target.G, self.map
        for x in bits(A.identities):
            star = [g for g in range(A.m) if A.d[g] == x]
            imgs = [f[g] for g in star]
            want = sorted(h for h in range(B.m) if B.d[h] == f[x])
            if len(set(imgs)) != len(imgs):
                return {"star_injective": x}
            if sorted(imgs) != want:
                return {"star_surjective": x}
        return None

    def continuity_failure(self):
        for U in self.target.basis:
            P = self.preimage(U)
            if not self.source.is_open(P):
                return to_bitstring(U, self.target.m)
        return None

    def is_bijective(self):
        return sorted(self.map) == list(range(self.target.m))

    def is_homeomorphism(self):
        if not self.is_bijective():
            return False
        return all(self.image(self.source.nbhd[g]) == self.target.nbhd[self.map[g]]
                   for g in range(self.source.m))

    def is_isomorphism(self):
        return (self.is_homeomorphism() and self.functor_failure() is None)

    def to_dict(self):
        return {"map": list(self.map),
                "source": list(self.source.G.labels),
                "target": list(self.target.G.labels)}


# epsilon and spatiality

def epsilon(S, cls=None, topology=None):
    """s -> the open bisection of points containing s, in B(G(S)).

    Returns a Morphism with attributes `top` (the groupoid) and
    `bisections` (the BisectionSemigroup)."""
    cls = cls or default_class(S)
    T = topology or basic_topology(filter_groupoid(S, cls))
    G = T.G
    B = bisection_semigroup(T)
    img = []
    for s in range(S.n):
        U = G.points_containing(s)
        if U not in B.index:
            raise CheckFailed("U_s is not an open bisection", witness=s)
        img.append(B.index[U])
    e = Morphism(S, B.semigroup, img, name="epsilon")
    e.top, e.bisections = T, B
    bad = e.hom_failure()
    if bad is not None:
        raise CheckFailed("epsilon is not multiplicative", witness=bad)
    K = B.semigroup
    for s in range(S.n):
        for t in range(S.n):
            m = S.meet(s, t)
            if m is not None and img[m] != K.meet(img[s], img[t]):
                raise CheckFailed("epsilon does not preserve a meet", witness=[s, t])
            if S.is_distributive and S.compatible(s, t):
                j = S.lub((1 << s) | (1 << t))
                if j is not None and img[j] != K.lub((1 << img[s]) | (1 << img[t])):
                    raise CheckFailed("epsilon does not preserve a join", witness=[s, t])
    if S.zero is not None and B.sets[img[S.zero]] != 0:
        raise CheckFailed("the zero does not go to the empty bisection")
    return e


def separation_witnesses(S, cls=None):
    """For each b not below a, a filter of the class containing b and not a."""
    cls = cls or default_class(S)
    fs = filters_of_class(S, cls)
    out, missing = {}, []
    for b in range(S.n):
        for a in range(S.n):
            if S.leq(b, a):
                continue
            F = next((F for F in fs if F.carrier >> b & 1 and not F.carrier >> a & 1), None)
            if F is None:
                missing.append([b, a])
            else:
                out[(b, a)] = F.min
    return out, missing


def is_spatial(S, cls=None):
    """epsilon is injective; checked against the separation search."""
    report = spatial_report(S, cls)
    return report["spatial"]


def spatial_report(S, cls=None):
    e = epsilon(S, cls)
    inj = e.is_injective()
    wit, missing = separation_witnesses(S, cls)
    if inj != (not missing):
        raise CheckFailed("injectivity and separation disagree", witness=missing[:1])
    return {
        "spatial": inj,
        "class": cls or default_class(S),
        "epsilon": list(e.map),
        "separations": {f"{S.labels[b]}/{S.labels[a]}": S.labels[m]
                        for (b, a), m in sorted(wit.items())},
        "missing": missing,
    }


# eta

def eta(T):
    """g -> F_g, the filter of open bisections containing g, as a point of
    the prime filter groupoid of B(G) with its basic topology."""
    B = bisection_semigroup(T)
    K = B.semigroup
    if not K.is_distributive:
        raise NotDistributive("B(G) is not distributive")
    H = basic_topology(filter_groupoid(K, "prime"))
    GP = H.G
    img = []
    for g in range(T.m):
        containing = [A for A in B.sets if A >> g & 1]
        if not containing:
            raise CheckFailed("no open bisection contains a point", witness=g)
        least = containing[0]
        for A in containing:
            least &= A
        a = B.index.get(least)
        if a is None or a not in GP.index:
            raise CheckFailed("F_g is not a prime filter", witness=g)
        img.append(GP.index[a])
    f = GroupoidMap(T, H, img)
    f.bisections = B
    bad = f.functor_failure() or f.covering_failure() or f.continuity_failure()
    if bad is not None:
        raise CheckFailed("eta is not a continuous covering functor", witness=bad)
    return f


# round trips

def coherent_roundtrip(S):
    """epsilon: S -> KB(G_P(S)) for a finite distributive S, as an Isomorphism."""
    if not S.is_distributive:
        raise NotDistributive("needs a distributive semigroup",
                              witness=S.distributivity_witness)
    e = epsilon(S, "prime")
    iso = Isomorphism(S, e.target, e.map, name="epsilon")
    iso.top, iso.bisections = e.top, e.bisections
    return iso


def boolean_duality_roundtrip(S):
    """S -> KB(G_P(S)) for boolean S; G_P(S) = G_M(S) and it is hausdorff."""
    if not S.is_boolean:
        raise NotBoolean("the semigroup is not boolean",
                         witness=S.distributivity_witness)
    primes = [F.min for F in filters_of_class(S, "prime")]
    ultras = [F.min for F in filters_of_class(S, "ultra")]
    if primes != ultras:
        raise CheckFailed("prime and ultra filters differ", witness=[primes, ultras])
    iso = coherent_roundtrip(S)
    if not is_hausdorff(iso.top) or not is_boolean_groupoid(iso.top):
        raise CheckFailed("G_P(S) is not a boolean groupoid")
    return iso


def groupoid_roundtrip(T):
    """eta: G -> G_P(KB(G)) for a finite coherent groupoid; a homeomorphic
    isomorphism of groupoids."""
    f = eta(T)
    if not f.is_isomorphism():
        raise CheckFailed("eta is not an isomorphism", witness=f.map)
    return f


def roundtrip_report(S):
    iso = boolean_duality_roundtrip(S)
    return {"boolean": True, "points": len(iso.top.G.labels),
            "epsilon": list(iso.map), "inverse": list(iso.inverse.map)}


# booleanizations

class Booleanization(CompletionSemigroup):
    pass


def first_booleanization(S):
    """B(S) = KB of all filters with the patch topology; beta(s) = U_s.

    Also matches the filter groupoid of S with the prime groupoid of D(S),
    point a↑ going to the prime filter generated by a↓, and checks the match
    is an isomorphism for both the basic and the patch topologies.
    """
    if S.zero is None:
        raise NoZero("booleanization needs a zero")
    G = filter_groupoid(S, "all")
    P = patch_topology(G)
    B = bisection_semigroup(P)
    beta = []
    for s in range(S.n):
        beta.append(B.index[G.points_containing(s)])
    carriers = [mask_of(G.mins[p] for p in bits(A)) for A in B.sets]
    out = Booleanization(S, "booleanization", carriers, B.semigroup, beta, S)
    out.bisections = B
    out.top = P
    bad = Morphism(S, B.semigroup, beta).hom_failure()
    if bad is not None:
        raise CheckFailed("beta is not multiplicative", witness=bad)
    if not B.semigroup.is_weakly_boolean:
        raise CheckFailed("B(S) is not weakly boolean")
    # the homeomorphism with the prime groupoid of D(S)
    D = dist_completion(S)
    GP = filter_groupoid(D.semigroup, "prime")
    pm = []
    for a in G.mins:
        m = D.iota[a]
        if m not in GP.index:
            raise CheckFailed("a↓ does not generate a prime filter", witness=a)
        pm.append(GP.index[m])
    for Tsrc, Ttgt in ((basic_topology(G), basic_topology(GP)),
                       (P, patch_topology(GP))):
        f = GroupoidMap(Tsrc, Ttgt, pm)
        if not f.is_isomorphism():
            raise CheckFailed("filter groupoid of S does not match G_P(D(S))", witness=pm)
    out.point_map = pm
    out.dist = D
    return out


def _preimage_check(S, T, theta):
    for P in filters_of_class(T, "prime"):
        A = mask_of(s for s in range(S.n) if P.carrier >> theta[s] & 1)
        if A and not is_filter_set(S, A):
            raise PreimageNotFilter("preimage of a prime filter is not a filter",
                                    witness={"prime": P.min, "preimage": sorted(bits(A))})


def second_booleanization(S, T, theta, uniqueness=None):
    """The extension of theta: S -> T along beta: S -> B(S).

    A singleton {m↑} of B(S) goes to theta(m) minus the join of theta over the
    lower covers of m; a bisection goes to the join of its points. Returns a
    Morphism with a `report` dict.
    """
    theta = list(theta)
    if not T.is_weakly_boolean:
        raise NotWeaklyBoolean("the target is not weakly boolean")
    if Morphism(S, T, theta).hom_failure() is not None:
        raise CheckFailed("theta is not a homomorphism")
    _preimage_check(S, T, theta)
    Bz = first_booleanization(S)
    B, K = Bz.bisections, Bz.semigroup
    G = Bz.top.G
    piece = []
    for m in G.mins:
        low = [y for y in bits(S.lower_covers(m))]
        j = T.join(mask_of(theta[y] for y in low))
        piece.append(relative_complement(T, theta[m], j))
    bar = []
    for A in B.sets:
        try:
            v = T.join(mask_of(piece[p] for p in bits(A)))
        except NotCompatible as exc:
            raise CheckFailed("pieces of a bisection are not compatible",
                              witness=sorted(bits(A))) from exc
        bar.append(v)
    if any(bar[Bz.iota[s]] != theta[s] for s in range(S.n)):
        raise CheckFailed("the extension does not factor theta")
    if not is_distributive_morphism(K, T, bar):
        raise CheckFailed("the extension is not a morphism of distributive semigroups")
    if uniqueness is None:
        uniqueness = S.n <= UNIQUE_S and T.n <= UNIQUE_T
    report = {"factorizes": True, "source": S.n, "target": T.n, "booleanization": K.n}
    if uniqueness:
        fixed = {Bz.iota[s]: theta[s] for s in range(S.n)}
        count = sum(1 for f in homomorphisms(K, T, fixed=fixed)
                    if is_distributive_morphism(K, T, f))
        report["extensions"] = count
        report["unique"] = count == 1
        report["verified_at"] = [S.n, T.n]
        if count != 1:
            raise CheckFailed("the extension is not unique", witness=count)
    out = Morphism(K, T, bar, name="theta_bar")
    out.report = report
    out.booleanization = Bz
    return out


# morphism predicates

def is_meet_morphism(S, T, f):
    for s in range(S.n):
        for t in range(s, S.n):
            m = S.meet(s, t)
            if m is None:
                continue
            if T.meet(f[s], f[t]) != f[m]:
                return False
    return True


def dc1(S, T, f):
    """t <= f(s1), f(s2) implies t <= f(s) for some s <= s1, s2."""
    for s1 in range(S.n):
        for s2 in range(S.n):
            common = S.down[s1] & S.down[s2]
            reach = 0
            for s in bits(common):
                reach |= T.down[f[s]]
            if T.down[f[s1]] & T.down[f[s2]] & ~reach:
                return False
    return True


def dc2(S, T, f):
    img = mask_of(f)
    return all(F.carrier & img for F in filters_of_class(T, "prime"))


def is_pseudogroup_morphism(S, T, f):
    """Sends zero to zero and preserves joins of compatible pairs."""
    if S.zero is not None and f[S.zero] != T.zero:
        return False
    return is_distributive_morphism(S, T, f)


def is_callitic(S, T, f):
    """A pseudogroup meet morphism whose image meets every completely prime filter."""
    img = mask_of(f)
    return (is_pseudogroup_morphism(S, T, f) and is_meet_morphism(S, T, f)
            and all(F.carrier & img for F in filters_of_class(T, "completely_prime")))


def is_hypercallitic(S, T, f):
    """Every t is the join of the meets t ^ f(s)."""
    for t in range(T.n):
        parts = 0
        for s in range(S.n):
            m = T.meet(t, f[s])
            if m is None:
                raise FlavorMismatch("a meet is missing in the target", witness=[t, f[s]])
            parts |= 1 << m
        if T.join(parts) != t:
            return False
    return True


def is_idempotent_pure(S, T, f):
    return all(S.is_idem[s] for s in range(S.n) if T.is_idem[f[s]])


def quantale_map_is_frame(S, T, f, limit=400):
    """The induced map on join-closed ideals, A -> [f(A)↓]^v, tested for
    top, bottom, binary joins and meets. None when a quantale is too big."""
    try:
        QS = enveloping_quantale(S, limit=limit)
        QT = enveloping_quantale(T, limit=limit)
    except (TooLarge, FlavorMismatch):
        return None
    if len(QS.elems) > 64:
        return None

    def bar(A):
        return QT.closure(T.down_closure(mask_of(f[s] for s in bits(A))))

    if bar(QS.top) != QT.top or bar(QS.bottom) != QT.bottom:
        return False
    imgs = {A: bar(A) for A in QS.elems}
    for A in QS.elems:
        for B in QS.elems:
            if imgs[QS.join([A, B])] != QT.join([imgs[A], imgs[B]]):
                return False
            if imgs[QS.meet(A, B)] != QT.meet(imgs[A], imgs[B]):
                return False
    return True


def morphism_predicates(theta, cov=None):
    """Evaluate the morphism predicates of theta: S -> T.

    Predicates whose flavor does not apply are None. Known implications are
    asserted: hypercallitic gives callitic image condition, callitic into a
    (finite, hence spatial) pseudogroup gives hypercallitic, the quantale map
    is a frame map exactly when theta is hypercallitic, and for distributive
    S and T callitic agrees with (DC1) and (DC2).
    """
    S, T, f = theta.source, theta.target, theta.map
    if not T.is_distributive or T.zero is None:
        raise FlavorMismatch("the target must be distributive with zero")
    bad = theta.hom_failure()
    if bad is not None:
        raise CheckFailed("not a homomorphism", witness=bad)
    out = {"is_meet_morphism": is_meet_morphism(S, T, f),
           "is_idempotent_pure": is_idempotent_pure(S, T, f)}
    img = mask_of(f)
    meets_cp = all(F.carrier & img for F in filters_of_class(T, "completely_prime"))
    pseudo = is_pseudogroup_morphism(S, T, f)
    out["is_pseudogroup_morphism"] = pseudo
    out["is_callitic"] = pseudo and out["is_meet_morphism"] and meets_cp
    try:
        out["is_hypercallitic"] = is_hypercallitic(S, T, f)
    except FlavorMismatch:
        out["is_hypercallitic"] = None
    if S.zero is not None:
        out["is_tight_map"] = not cover_to_join_failures(f, S, T, builtin_coverage(S, "tight"))
        out["is_dense_map"] = not cover_to_join_failures(f, S, T, builtin_coverage(S, "dense"))
    else:
        out["is_tight_map"] = out["is_dense_map"] = None
    out["is_cover_to_join"] = (None if cov is None
                               else not cover_to_join_failures(f, S, T, cov))
    if S.is_distributive:
        out["satisfies_DC1"] = dc1(S, T, f)
        out["satisfies_DC2"] = dc2(S, T, f)
    else:
        out["satisfies_DC1"] = out["satisfies_DC2"] = None
    frame = None
    if S.is_pseudogroup and T.is_pseudogroup:
        frame = quantale_map_is_frame(S, T, f)
    out["quantale_frame_map"] = frame
    # implications
    hyper = out["is_hypercallitic"]
    if hyper and not meets_cp:
        raise CheckFailed("hypercallitic map whose image misses a completely prime filter")
    if out["is_callitic"] and hyper is False:
        raise CheckFailed("callitic map into a spatial target is not hypercallitic")
    if (frame is not None and hyper is not None and pseudo and out["is_meet_morphism"]
            and frame != hyper):
        raise CheckFailed("frame map and hypercallitic disagree")
    if out["satisfies_DC1"] is not None and pseudo:
        if out["is_callitic"] != (out["satisfies_DC1"] and out["satisfies_DC2"]):
            raise CheckFailed("callitic and (DC1)+(DC2) disagree")
    return out


# pullback along a callitic morphism

def pullback_functor(theta):
    """F -> theta^-1(F) from the prime filter groupoid of T to that of S.

    Checked to be a functor, a covering functor and continuous, with the
    basic open of s pulling back to the basic open of theta(s).
    """
    S, T, f = theta.source, theta.target, theta.map
    for X in (S, T):
        if not X.is_distributive:
            raise FlavorMismatch("pullback needs distributive semigroups")
    if not is_callitic(S, T, f):
        raise NotCallitic("theta is not callitic")
    GS = basic_topology(filter_groupoid(S, "prime"))
    GT = basic_topology(filter_groupoid(T, "prime"))
    img = []
    for F in GT.G.filters:
        A = mask_of(s for s in range(S.n) if F.carrier >> f[s] & 1)
        m = S.min_of(A)
        if m is None or S.up[m] != A or m not in GS.G.index:
            raise CheckFailed("preimage of a prime filter is not prime", witness=F.min)
        img.append(GS.G.index[m])
    g = GroupoidMap(GT, GS, img)
    bad = g.functor_failure() or g.covering_failure() or g.continuity_failure()
    if bad is not None:
        raise CheckFailed("pullback is not a continuous covering functor", witness=bad)
    for s in range(S.n):
        if g.preimage(GS.G.points_containing(s)) != GT.G.points_containing(f[s]):
            raise CheckFailed("basic opens do not pull back correctly", witness=s)
    return g


def _functors(A, B, limit=20000):
    """All continuous covering functors between small TopGroupoids, by brute force."""
    m, k = A.m, B.m
    if k ** m > limit:
        raise TooLarge("too many candidate maps", count=k ** m)
    out = []
    for f in iproduct(range(k), repeat=m):
        g = GroupoidMap(A, B, f)
        if (g.functor_failure() is None and g.covering_failure() is None
                and g.continuity_failure() is None):
            out.append(list(f))
    return out


def adjunction_check(S, T, limit=20000):
    """The correspondence between continuous covering functors alpha: G ->
    G(S) and callitic morphisms beta: S -> B(G).

    alpha goes to s -> alpha^-1(X_s); beta goes to g -> beta^-1(F_g). Both
    composites are checked to be identities on the enumerated sets.
    """
    if not S.is_pseudogroup:
        raise FlavorMismatch("needs a pseudogroup")
    GS = basic_topology(filter_groupoid(S, "prime"))
    B = bisection_semigroup(T)
    K = B.semigroup
    alphas = _functors(T, GS, limit)
    betas = [f for f in homomorphisms(S, K) if is_callitic(S, K, f)]

    def a2b(a):
        return [B.index[mask_of(g for g in range(T.m)
                                if GS.G.points_containing(s) >> a[g] & 1)]
                for s in range(S.n)]

    def b2a(b):
        out = []
        for g in range(T.m):
            A = mask_of(s for s in range(S.n) if B.sets[b[s]] >> g & 1)
            m = S.min_of(A)
            if m is None or S.up[m] != A or m not in GS.G.index:
                return None
            out.append(GS.G.index[m])
        return out

    for a in alphas:
        b = a2b(a)
        if not is_callitic(S, K, b) or b2a(b) != a:
            raise CheckFailed("alpha does not come back", witness=a)
    for b in betas:
        a = b2a(b)
        if a is None or a not in alphas or a2b(a) != b:
            raise CheckFailed("beta does not come back", witness=b)
    return {"functors": len(alphas), "callitic": len(betas)}


# nuclei from morphisms

def nucleus_from_morphism(theta):
    """For surjective idempotent-pure theta between pseudogroups, the nucleus
    nu = theta_* theta with theta_*(t) the join of {s : theta(s) <= t}.

    Returns (nu as a list on S, Isomorphism S_nu -> T) where S_nu is the set
    of fixed points with product nu(st).
    """
    S, T, f = theta.source, theta.target, theta.map
    if not (S.is_pseudogroup and T.is_pseudogroup):
        raise FlavorMismatch("needs pseudogroups")
    if theta.hom_failure() is not None:
        raise CheckFailed("not a homomorphism")
    if not theta.is_surjective():
        raise NotSurjective("theta is not surjective")
    if not is_idempotent_pure(S, T, f):
        raise NotIdempotentPure("theta is not idempotent-pure")
    lower = [S.join(mask_of(s for s in range(S.n) if T.leq(f[s], t))) for t in range(T.n)]
    nu = [lower[f[s]] for s in range(S.n)]
    # the nucleus laws on principal ideals
    nu_ideal = lambda A: S.down_closure(mask_of(nu[s] for s in bits(A)))
    bad = nucleus_failures(S, nu_ideal, [S.down[s] for s in range(S.n)])
    if bad:
        raise CheckFailed("nucleus law fails", witness=bad[0])
    fixed = [s for s in range(S.n) if nu[s] == s]
    pos = {s: i for i, s in enumerate(fixed)}
    table = [[pos[nu[S.mul(a, b)]] for b in fixed] for a in fixed]
    Snu = verify(table, labels=[S.labels[s] for s in fixed])
    iso = Isomorphism(Snu, T, [f[s] for s in fixed])
    return nu, iso
