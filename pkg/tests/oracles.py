"""Brute-force reference implementations, written straight from the
definitions on raw multiplication tables. They share no code with the
package beyond the tables themselves, and are only fit for tiny inputs.
"""
from itertools import combinations, product


def elements(T):
    return range(len(T))


def inverse(T, s):
    xs = [x for x in elements(T) if T[T[s][x]][s] == s and T[T[x][s]][x] == x]
    assert len(xs) == 1, (s, xs)
    return xs[0]


def is_idem(T, s):
    return T[s][s] == s


def leq(T, s, t):
    """s <= t iff s = t s^-1 s."""
    return s == T[t][T[inverse(T, s)][s]]


def zero_of(T):
    zs = [z for z in elements(T) if all(T[z][x] == z == T[x][z] for x in elements(T))]
    return zs[0] if zs else None


def compatible(T, s, t):
    si, ti = inverse(T, s), inverse(T, t)
    return is_idem(T, T[si][t]) and is_idem(T, T[s][ti])


def down(T, s):
    return {x for x in elements(T) if leq(T, x, s)}


def up(T, s):
    return {x for x in elements(T) if leq(T, s, x)}


def lub(T, A):
    ubs = [u for u in elements(T) if all(leq(T, a, u) for a in A)]
    least = [u for u in ubs if all(leq(T, u, v) for v in ubs)]
    return least[0] if least else None


def glb(T, A):
    lbs = [u for u in elements(T) if all(leq(T, u, a) for a in A)]
    top = [u for u in lbs if all(leq(T, v, u) for v in lbs)]
    return top[0] if top else None


def all_subsets(xs, max_size=None):
    xs = list(xs)
    k = len(xs) if max_size is None else min(max_size, len(xs))
    for r in range(k + 1):
        for c in combinations(xs, r):
            yield frozenset(c)


def is_filter(T, A):
    """Nonempty, up-closed, down-directed, zero-free."""
    z = zero_of(T)
    if not A or z in A:
        return False
    for a in A:
        if not up(T, a) <= A:
            return False
    for a in A:
        for b in A:
            if not any(leq(T, c, a) and leq(T, c, b) for c in A):
                return False
    return True


def filters(T):
    """All filters by exhaustive subset search (use for n <= 14)."""
    n = len(T)
    assert n <= 14
    return sorted((A for A in all_subsets(elements(T)) if is_filter(T, A)),
                  key=lambda A: sorted(A))


def filter_min(T, A):
    ms = [a for a in A if all(leq(T, a, b) for b in A)]
    return ms[0]


def ultrafilters(T):
    fs = filters(T)
    return [A for A in fs if not any(A < B for B in fs)]


def joins_exist_compatible(T):
    """All compatible pairs with their least upper bound, if any."""
    out = {}
    for a in elements(T):
        for b in elements(T):
            if compatible(T, a, b):
                out[a, b] = lub(T, [a, b])
    return out


def prime_filters(T):
    """a v b in F implies a in F or b in F (distributive inputs)."""
    J = joins_exist_compatible(T)
    out = []
    for A in filters(T):
        ok = True
        for (a, b), j in J.items():
            if j is not None and j in A and a not in A and b not in A:
                ok = False
                break
        if ok:
            out.append(A)
    return out


def arrow(T, a, X):
    """Every nonzero y <= a has a nonzero common lower bound with some x in X."""
    z = zero_of(T)
    for y in down(T, a):
        if y == z:
            continue
        if not any(w != z and leq(T, w, y) and leq(T, w, x) for x in X for w in elements(T)):
            return False
    return True


def tight_filters(T):
    """F meets every finite X <= a with a -> X, for each a in F."""
    out = []
    for A in filters(T):
        ok = True
        for a in A:
            for X in all_subsets(down(T, a)):
                if arrow(T, a, X) and not (X & A):
                    ok = False
                    break
            if not ok:
                break
        if ok:
            out.append(A)
    return out


def is_distributive(T):
    """Joins of compatible subsets exist and products distribute over them."""
    for A in all_subsets(elements(T)):
        if not all(compatible(T, a, b) for a in A for b in A):
            continue
        j = lub(T, A) if A else zero_of(T)
        if j is None:
            return False
        for s in elements(T):
            if A and lub(T, [T[s][a] for a in A]) != T[s][j]:
                return False
            if A and lub(T, [T[a][s] for a in A]) != T[j][s]:
                return False
    return True


def homomorphisms(S, T):
    """All maps S -> T with f(xy) = f(x)f(y), by exhaustive product."""
    n, m = len(S), len(T)
    out = []
    for f in product(range(m), repeat=n):
        if all(f[S[a][b]] == T[f[a]][f[b]] for a in range(n) for b in range(n)):
            out.append(list(f))
    return out


def isomorphic(S, T):
    if len(S) != len(T):
        return False
    n = len(S)
    from itertools import permutations
    for p in permutations(range(n)):
        if all(p[S[a][b]] == T[p[a]][p[b]] for a in range(n) for b in range(n)):
            return True
    return False


# groupoids and topology

def groupoid_bisections(G):
    """Subsets A with A^-1 A and A A^-1 made of identities (product defined
    when d(p) = r(q))."""
    ids = {p for p in range(G.m) if G.d[p] == p}
    out = []
    for A in all_subsets(range(G.m)):
        ok = True
        for p in A:
            for q in A:
                # p^-1 q defined when r(p) = r(q), p q^-1 when d(p) = d(q)
                if G.r[p] == G.r[q] and G.mul[G.inv[p]][q] not in ids:
                    ok = False
                if G.d[p] == G.d[q] and G.mul[p][G.inv[q]] not in ids:
                    ok = False
        if ok:
            out.append(A)
    return out


def topology(m, subbasis):
    """All open sets generated by a subbasis (unions of finite intersections)."""
    pts = frozenset(range(m))
    inter = {pts}
    changed = True
    base = {frozenset(B) for B in subbasis}
    while changed:
        changed = False
        for A in list(inter):
            for B in base:
                C = A & B
                if C not in inter:
                    inter.add(C)
                    changed = True
    opens = {frozenset()}
    for B in inter:
        opens |= {U | B for U in opens}
    return opens


def sober(m, opens):
    """Every nonempty open u that is prime (u <= V u W implies u <= V or
    u <= W) is the smallest open around exactly one point, and distinct
    points have distinct smallest opens."""
    opens = list(opens)
    nb = []
    for p in range(m):
        around = [U for U in opens if p in U]
        N = frozenset(range(m))
        for U in around:
            N &= U
        nb.append(N)
    for u in opens:
        if not u:
            continue
        prime = all(u <= V or u <= W for V in opens for W in opens if u <= V | W)
        if prime and sum(1 for p in range(m) if nb[p] == u) != 1:
            return False
    return len(set(nb)) == m


def hausdorff(m, opens):
    for p in range(m):
        for q in range(p + 1, m):
            if not any(p in U and q in V and not U & V for U in opens for V in opens):
                return False
    return True


def set_product(T, A, B):
    return frozenset(T[a][b] for a in A for b in B)


def up_closure(T, A):
    return frozenset(x for a in A for x in up(T, a))


def filter_groupoid(T, fs):
    """Arrows are the given filters; d(A) = (A^-1 A)↑, r(A) = (A A^-1)↑ and
    A.B = (AB)↑ when d(A) = r(B). Returns (arrows, d, r, mul) on indices."""
    fs = list(fs)
    idx = {A: i for i, A in enumerate(fs)}
    inv = lambda A: frozenset(inverse(T, a) for a in A)
    d = [idx[up_closure(T, set_product(T, inv(A), A))] for A in fs]
    r = [idx[up_closure(T, set_product(T, A, inv(A)))] for A in fs]
    mul = {}
    for i, A in enumerate(fs):
        for j, B in enumerate(fs):
            if d[i] == r[j]:
                mul[i, j] = idx[up_closure(T, set_product(T, A, B))]
    return fs, d, r, mul


def count_discrete_bisections(d, r):
    """Subsets of arrows with pairwise distinct domains and ranges."""
    m = len(d)
    count = 0

    def rec(p, used_d, used_r):
        nonlocal count
        if p == m:
            count += 1
            return
        rec(p + 1, used_d, used_r)
        if d[p] not in used_d and r[p] not in used_r:
            rec(p + 1, used_d | {d[p]}, used_r | {r[p]})

    rec(0, frozenset(), frozenset())
    return count


def compatible_order_ideals(T):
    out = []
    for A in all_subsets(elements(T)):
        if not A:
            continue
        if any(not down(T, a) <= A for a in A):
            continue
        if all(compatible(T, a, b) for a in A for b in A):
            out.append(A)
    return out
