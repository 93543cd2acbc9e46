"""Named verification suites over seeded pools, shared by the CLI and the test suite.

Each suite returns a :class:`SuiteResult` counting checked cases and keeping
the first few failure descriptions.  Sample counts scale with ``scale`` so the
CLI can run a quick pass; exhaustive suites ignore it.
"""

from __future__ import annotations

import itertools
import random
import time
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Sequence

import numpy as np

from . import gfp, oracles
from .errors import PolyhomError
from .fp import (
    FpPolyhom,
    FpWindow,
    all_subspaces,
    box_discrepancy,
    chi,
    chi_by_embedding,
    coset_family,
    fp_compose,
    fp_graph,
    is_p_power_weighted,
    realize_middle,
    reduce_to_middle,
    sandwich,
    split_blocks,
    theta,
    w_subspace,
    with_alpha,
)
from .groups import all_subgroups, index, intersect, is_normal, left_cosets
from .morphisms import (
    Polyhom,
    composition_indices,
    decompose,
    in_semigroup,
    is_lambda_weighted,
    lambda_generators,
    ph_compose,
    weight_from_alpha,
    weight_from_beta,
)
from .operators import RationalMatrix, angle_check, pi, pi_star, verify_partial_isometry
from .pools import (
    fp_pool,
    fp_structured,
    pool_groups,
    polyhom_pool,
    random_chain,
    random_fp,
    random_invertible,
    random_relation,
    structured_polyhoms,
    transvection,
    weighted_fp,
)
from .relations import image_of_set, pseudoinverse, rel_compose

MAX_REPORTED = 5


@dataclass
class SuiteResult:
    name: str
    checked: int = 0
    failures: list[str] = field(default_factory=list)
    failed: int = 0
    seconds: float = 0.0
    notes: list[str] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return self.checked > 0 and self.failed == 0

    def check(self, ok: bool, what: str | Callable[[], str]) -> None:
        self.checked += 1
        if not ok:
            self.failed += 1
            if len(self.failures) < MAX_REPORTED:
                self.failures.append(what() if callable(what) else what)

    def run(self, what: str, fn: Callable[[], bool]) -> None:
        """Count fn() as one case; a domain error counts as a failure."""
        try:
            ok = bool(fn())
        except (PolyhomError, AssertionError) as exc:
            self.check(False, f"{what}: {type(exc).__name__}: {exc}")
            return
        self.check(ok, what)

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return f"{status} {self.name}: {self.checked - self.failed}/{self.checked} in {self.seconds:.1f}s"


def _count(n: int, scale: float) -> int:
    return max(1, int(round(n * scale)))


def _stride(scale: float) -> int:
    """Exhaustive suites keep every k-th case when scaled down."""
    return 1 if scale >= 1 else max(1, int(round(1 / scale)))


def _composable_pairs(extra: Sequence) -> list[tuple[Polyhom, Polyhom]]:
    polys = [P for P in extra if isinstance(P, Polyhom)]
    return [(R, T) for R in polys for T in polys if R.target == T.source]


def _criterion_pairs(seed: int, count: int, extra: Sequence) -> list[tuple[Polyhom, Polyhom]]:
    rng = random.Random(seed)
    pairs = [tuple(random_chain(rng, 2)) for _ in range(count)]
    return _composable_pairs(extra) + pairs


# finite groups

def suite_functoriality(scale: float = 1.0, extra: Sequence = (), seed: int = 1) -> SuiteResult:
    """pi(T R) == pi(R) @ pi(T) on random composable pairs; every tenth also against plain Fraction lists."""
    res = SuiteResult("functoriality")
    for i, (R, T) in enumerate(_criterion_pairs(seed, _count(500, scale), extra)):
        def case(R=R, T=T, i=i):
            S = ph_compose(T, R)
            ok = pi(S) == pi(R) @ pi(T)
            if ok and i % 10 == 0:
                naive = oracles.naive_matmul(_naive_pi(R), _naive_pi(T))
                ok = naive == _naive_pi(S) == pi(S).to_fractions()
            return ok
        res.run(f"pair {i}: {R!r} then {T!r}", case)
    return res


def _naive_pi(P: Polyhom) -> list[list[Fraction]]:
    pairs = [] if P.is_zero else P.relation.pairs()
    w = 0 if P.is_zero else P.weight
    return oracles.naive_operator(pairs, w, P.source.point_mass, P.source.order, P.target.order)


def suite_weights(scale: float = 1.0, extra: Sequence = (), seed: int = 1) -> SuiteResult:
    """The weights recovered from the alpha and the beta composition formulas agree."""
    res = SuiteResult("weights")
    for i, (R, T) in enumerate(_criterion_pairs(seed, _count(500, scale), extra)):
        def case(R=R, T=T):
            if R.is_zero or T.is_zero:
                return True
            rel = rel_compose(T.relation, R.relation)
            i1, i2 = composition_indices(T, R)
            w_a = weight_from_alpha(R.alpha * T.alpha / i1, rel, R.source)
            w_b = weight_from_beta(R.beta * T.beta / i2, rel, T.target)
            S = ph_compose(T, R)
            # the marginal of the composed measure on dom S is alpha times the Haar measure
            dom = set(S.marginals().dom.elements)
            marg = oracles.naive_marginal_measure(S.relation.pairs(), S.weight, "source", S.source.order)
            flat = all(marg[g] == S.alpha * S.source.point_mass for g in dom)
            return w_a == w_b == S.weight and flat
        res.run(f"pair {i}", case)
    return res


def suite_associativity(scale: float = 1.0, extra: Sequence = (), seed: int = 3) -> SuiteResult:
    """(C B) A == C (B A) including alpha and beta."""
    res = SuiteResult("associativity")
    rng = random.Random(seed)
    for i in range(_count(200, scale)):
        A, B, C = random_chain(rng, 3)

        def case(A=A, B=B, C=C):
            left = ph_compose(ph_compose(C, B), A)
            right = ph_compose(C, ph_compose(B, A))
            return left == right and (left.alpha, left.beta) == (right.alpha, right.beta)
        res.run(f"triple {i}", case)
    return res


def suite_scalar_identity(scale: float = 1.0, extra: Sequence = (), seed: int = 4) -> SuiteResult:
    """pi_*(R) pi_*(T) == #(ker T & indef R) pi_*(T R), and the two index expressions agree."""
    res = SuiteResult("scalar-identity")
    rng = random.Random(seed)
    groups = pool_groups()
    for i in range(_count(200, scale)):
        G, H, K = (rng.choice(groups) for _ in range(3))
        R = random_relation(rng, G, H)
        T = random_relation(rng, H, K)

        def case(R=R, T=T):
            TR = rel_compose(T, R)
            domR, imR, kerR, indefR = R.marginals()
            domT, imT, kerT, indefT = T.marginals()
            c = intersect(kerT, indefR).order
            c2 = Fraction(indefT.order * intersect(indefR, domT).order, TR.marginals().indef.order)
            c3 = Fraction(kerR.order * intersect(kerT, imR).order, TR.marginals().ker.order)
            return pi_star(R) @ pi_star(T) == pi_star(TR).scale(c) and c == c2 == c3
        res.run(f"pair {i}", case)
    return res


def _polyhom_pool(scale: float, extra: Sequence, limit: int = 16) -> list[Polyhom]:
    extra_ph = [P for P in extra if isinstance(P, Polyhom) and not P.is_zero]
    return extra_ph + structured_polyhoms(limit) + polyhom_pool(seed=5, count=_count(300, scale), limit=limit)


def suite_partial_isometry(scale: float = 1.0, extra: Sequence = ()) -> SuiteResult:
    """pi* pi == alpha beta P(im | indef) and pi pi* == alpha beta P(dom | ker)."""
    res = SuiteResult("partial-isometry")
    for i, P in enumerate(_polyhom_pool(scale, extra)):
        res.run(f"polyhom {i}: {P!r}", lambda P=P: verify_partial_isometry(P)[0] == P.alpha * P.beta)
    return res


def suite_angle(scale: float = 1.0, extra: Sequence = ()) -> SuiteResult:
    """M @ M == sigma M for M = P Q P over every admissible quadruple, every pool group."""
    from .morphisms import MeasuredGroup

    res = SuiteResult("angle")
    for G in pool_groups():
        MG = MeasuredGroup(G)
        subs = all_subgroups(G)
        normal = [(F, D) for F in subs for D in subs if D.issubset(F) and is_normal(D, F)]
        for (F, D), (S, E) in itertools.permutations(normal, 2):
            def case(F=F, D=D, S=S, E=E):
                sigma = angle_check(MG, F, D, S, E)
                return sigma == Fraction(1, index(D, intersect(D, S)) * index(E, intersect(E, F)))
            res.run(f"{G.name}: ({F}, {D}) vs ({S}, {E})", case)
    return res


def suite_decomposition(scale: float = 1.0, extra: Sequence = ()) -> SuiteResult:
    """last . middle . first == P exactly, and pi factorizes accordingly."""
    res = SuiteResult("decomposition")
    for i, P in enumerate(_polyhom_pool(scale, extra)):
        def case(P=P):
            D = decompose(P)
            return D.recompose() == P and pi(P) == pi(D.first) @ pi(D.middle) @ pi(D.last)
        res.run(f"polyhom {i}: {P!r}", case)
    return res


def _indicator_columns(n: int, sets: Sequence[Sequence[int]]) -> np.ndarray:
    M = np.zeros((n, len(sets)), dtype=np.int64)
    for j, B in enumerate(sets):
        M[list(B), j] = 1
    return M


def suite_indicator(scale: float = 1.0, extra: Sequence = (), seed: int = 8) -> SuiteResult:
    """pi(P) 1_B == alpha 1_{preimage of B} for indef-invariant B in im, and the alpha/N variant."""
    res = SuiteResult("indicator")
    rng = random.Random(seed)
    for i, P in enumerate(_polyhom_pool(scale, extra, limit=12)):
        if P.source.order > 12 or P.target.order > 12:
            continue
        H = P.target.group
        _, im, _, indef = P.marginals()
        cosets = left_cosets(im, indef)
        A = pi(P)
        back = pseudoinverse(P.relation)

        # every union of indef-cosets inside im
        unions = [
            sorted(itertools.chain.from_iterable(c for c, keep in zip(cosets, mask) if keep))
            for mask in itertools.product((0, 1), repeat=len(cosets))
        ]

        def part_a(A=A, P=P, back=back, unions=unions):
            cols = RationalMatrix(_indicator_columns(P.target.order, unions), 1, P.target.point_mass, 1)
            got = A @ cols
            pre = [image_of_set(back, B) for B in unions]
            want = RationalMatrix(_indicator_columns(P.source.order, pre), 1, P.source.point_mass, 1).scale(P.alpha)
            return got == want
        res.run(f"polyhom {i} (a): {P!r}", part_a)

        # Z of index N in indef; D is Z x over representatives x of distinct indef-cosets
        for Z in all_subgroups(H):
            if not Z.issubset(indef):
                continue
            N = index(indef, Z)
            for _ in range(3):
                chosen = [c for c in cosets if rng.random() < 0.5] or [cosets[0]]
                reps = [rng.choice(c) for c in chosen]
                D = sorted({int(H.cayley[z, x]) for x in reps for z in Z.elements})

                def part_b(A=A, P=P, back=back, D=D, N=N):
                    got = A.apply([1 if h in D else 0 for h in range(P.target.order)])
                    pre = image_of_set(back, D)
                    want = tuple(P.alpha / N if g in pre else Fraction(0) for g in range(P.source.order))
                    return got == want
                res.run(f"polyhom {i} (b): N={N}, D={D}", part_b)
    return res


def suite_lambda(scale: float = 1.0, extra: Sequence = (), seed: int = 1) -> SuiteResult:
    """Composing polyhoms with alpha^-1, beta^-1 in the index semigroup stays inside it."""
    res = SuiteResult("lambda")
    for i, (R, T) in enumerate(_criterion_pairs(seed, _count(500, scale), extra)):
        gens = set()
        for X in (R.source, R.target, T.target):
            gens |= lambda_generators(X.group)
        if not (is_lambda_weighted(R, gens) and is_lambda_weighted(T, gens)):
            continue

        def case(R=R, T=T, gens=gens):
            S = ph_compose(T, R)
            if R.is_zero or T.is_zero:
                return S.is_zero
            i1, i2 = composition_indices(T, R)
            return is_lambda_weighted(S, gens) and in_semigroup(i1, gens) and in_semigroup(i2, gens)
        res.run(f"pair {i}", case)
    return res


# F_p model

def _oracle_compose_case(T: FpPolyhom, R: FpPolyhom) -> bool:
    p, n = R.p, R.n
    S = fp_compose(T, R)
    vecs, w = oracles.naive_fp_compose(T.basis, T.weight, R.basis, R.weight, p, n, R.window.point_mass)
    return oracles.naive_span(S.basis, p, 2 * n) == vecs and S.weight == w and is_p_power_weighted(S)


def suite_fp_oracle(scale: float = 1.0, extra: Sequence = (), seed: int = 9) -> SuiteResult:
    """fp_compose agrees with middle-vector enumeration."""
    res = SuiteResult("fp-oracle")
    w1 = FpWindow.radius(2, 1)
    pool1 = []
    for B in all_subspaces(2, 4):
        pool1.append(weighted_fp(w1, B))
        pool1.append(weighted_fp(w1, B, 1))
    pools = [
        pool1,
        fp_pool(FpWindow.radius(2, 2), seed, _count(30, scale)),
        fp_pool(FpWindow.radius(2, 3), seed + 1, _count(14, scale), max_dim=8),
    ]
    pools[0] = list(dict.fromkeys(pools[0]))
    extra_fp = [R for R in extra if isinstance(R, FpPolyhom) and not R.is_zero]
    for pool in pools:
        pool = pool + [R for R in extra_fp if R.window == pool[0].window]
        for R, T in itertools.product(pool, repeat=2):
            res.run(f"{R!r} then {T!r}", lambda R=R, T=T: _oracle_compose_case(T, R))
    rng = random.Random(seed + 2)
    w3 = FpWindow.radius(3, 3)
    for i in range(_count(500, scale)):
        R, T = random_fp(rng, w3, 5), random_fp(rng, w3, 5)
        res.run(f"p=3 pair {i}", lambda R=R, T=T: _oracle_compose_case(T, R))
    return res


def suite_theta(scale: float = 1.0, extra: Sequence = ()) -> SuiteResult:
    """ker = indef = W^m, dom = im = W^-m, alpha = beta = 1, idempotent."""
    res = SuiteResult("theta")
    for p in (2, 3):
        for N in range(0, 5):
            win = FpWindow.radius(p, N)
            for m in range(0, N + 1):
                def case(win=win, m=m):
                    t = theta(win, m)
                    mg = t.marginals()
                    Wm, Wmm = w_subspace(win, m), w_subspace(win, -m)
                    ok = all(np.array_equal(a, b) for a, b in ((mg.ker, Wm), (mg.indef, Wm), (mg.dom, Wmm), (mg.im, Wmm)))
                    ok = ok and t.alpha == t.beta == 1 and fp_compose(t, t) == t
                    if p ** (2 * N) <= 4096:
                        naive = oracles.naive_linear_marginals(oracles.naive_span(t.basis, p, 4 * N), 2 * N)
                        sizes = tuple(len(naive[k]) for k in ("dom", "im", "ker", "indef"))
                        ok = ok and sizes == (p ** Wmm.shape[0],) * 2 + (p ** Wm.shape[0],) * 2
                    return ok
                res.run(f"p={p} N={N} m={m}", case)
    return res


def sandwich_pool() -> list[FpPolyhom]:
    """Every one-dimensional carrier at p = 2, N = 3, transvection graphs, truncations and swaps."""
    win = FpWindow.radius(2, 3)
    n = win.dim
    out = []
    lines = itertools.takewhile(lambda B: B.shape[0] <= 1, all_subspaces(2, 2 * n))
    out.extend(weighted_fp(win, B) for B in lines if B.shape[0] == 1)
    for i in range(n):
        for j in range(n):
            if i != j:
                out.append(fp_graph(win, transvection(n, i, j)))
    out.extend(fp_structured(win))
    return list(dict.fromkeys(out))


def sandwich_families(win: FpWindow, max_span: int = 4):
    N = min(-win.lo, win.hi)
    for k in range(-N, N + 1):
        for l in range(-N, N + 1):
            if 0 <= k + l <= max_span and max(k, l, 0) <= N:
                yield k, l, coset_family(win, k, l)


def suite_sandwich(scale: float = 1.0, extra: Sequence = ()) -> SuiteResult:
    """discrepancy(theta_m R theta_m, R) == 0 on the (k, l) family whenever m >= max(k, l)."""
    res = SuiteResult("sandwich")
    win = FpWindow.radius(2, 3)
    families = list(sandwich_families(win))
    pool = sandwich_pool()[:: _stride(scale)] + [R for R in extra if isinstance(R, FpPolyhom) and R.window == win]
    for i, R in enumerate(pool):
        def case(R=R):
            sw = {m: sandwich(R, m) for m in range(0, 4)}
            for k, l, fam in families:
                for m in range(max(k, l, 0), 4):
                    if box_discrepancy(sw[m], R, fam) != 0:
                        return False
            return True
        res.run(f"relation {i}: {R!r}", case)
    return res


def _chi_case(g: np.ndarray, split: tuple[int, int, int], p: int, notes: dict) -> bool:
    X = chi(g, split, p)
    rk = gfp.rank(split_blocks(g, split)[1, 3], p)
    ok = X.alpha == Fraction(1, p**rk)
    ok = ok and chi_by_embedding(g, split, p) == X
    ok = ok and oracles.naive_span(X.basis, p, 2 * split[1]) == oracles.naive_chi(g, split, p)
    # beta: the exponent uses the kernel of chi(g); the kernel of g itself is always 0
    dims = X.marginal_dims()
    ok = ok and X.beta == Fraction(p) ** (-rk - dims[3] + dims[2])
    if dims[2] != 0:
        notes["kernel-distinguishes"] = notes.get("kernel-distinguishes", 0) + 1
    return ok


def suite_chi(scale: float = 1.0, extra: Sequence = (), seed: int = 12) -> SuiteResult:
    """alpha(chi(g)) == p^-rk g13, chi(g) equals the sandwich of the graph of g, and brute force."""
    res = SuiteResult("chi")
    notes: dict = {}
    p = 2
    # every invertible 4 x 4 matrix over F_2 with split (1, 2, 1)
    for bits in range(0, 1 << 16, _stride(scale)):
        g = np.array([(bits >> (15 - i)) & 1 for i in range(16)], dtype=np.int64).reshape(4, 4)
        if gfp.inverse(g, p) is None:
            continue
        res.run(f"split (1,2,1) g={g.tolist()}", lambda g=g: _chi_case(g, (1, 2, 1), p, notes))
    rng = random.Random(seed)
    for i in range(_count(1000, scale)):
        g = random_invertible(rng, 6, p)
        res.run(f"split (2,2,2) g={g.tolist()}", lambda g=g: _chi_case(g, (2, 2, 2), p, notes))
    res.notes.append(f"cases where dim ker chi(g) > 0: {notes.get('kernel-distinguishes', 0)}")
    return res


def suite_realization(scale: float = 1.0, extra: Sequence = ()) -> SuiteResult:
    """Every weighted relation on F_2^3 is the characteristic relation of some finitary g."""
    res = SuiteResult("realization")
    p, d = 2, 3
    mid = FpWindow.middle(p, d)
    for B in itertools.islice(all_subspaces(p, 2 * d), 0, None, _stride(scale)):
        n = d
        U, V = B[:, :n], B[:, n:]
        k = gfp.rank(gfp.left_nullspace(V, p) @ U, p) if B.shape[0] else 0
        j = gfp.rank(gfp.left_nullspace(U, p) @ V, p) if B.shape[0] else 0
        for mu in range(max(0, k - j), d + 1):
            Q = with_alpha(mid, B, Fraction(1, p**mu))
            res.run(f"{B.tolist()} alpha=2^-{mu}", lambda Q=Q: realize_middle(Q) is not None)
    for R in extra:
        if isinstance(R, FpPolyhom) and not R.is_zero:
            N = min(-R.window.lo, R.window.hi)
            for m in range(0, N + 1):
                def case(R=R, m=m):
                    Qm = reduce_to_middle(sandwich(R, m), -m, m)
                    return realize_middle(Qm) is not None
                res.run(f"{R!r} m={m}", case)
    return res


SUITES: dict[str, tuple[int, str, Callable[..., SuiteResult]]] = {
    "functoriality": (1, "pi of a composition is the product of the pi's", suite_functoriality),
    "weights": (2, "alpha- and beta-derived weights agree", suite_weights),
    "associativity": (3, "composition is associative with weights", suite_associativity),
    "scalar-identity": (4, "summation operators multiply up to #(ker T & indef R)", suite_scalar_identity),
    "partial-isometry": (5, "pi* pi and pi pi* are alpha beta times projections", suite_partial_isometry),
    "angle": (6, "P Q P squares to sigma times itself", suite_angle),
    "decomposition": (7, "three-factor decomposition recomposes exactly", suite_decomposition),
    "indicator": (8, "pi maps invariant indicators to scaled indicators", suite_indicator),
    "fp-oracle": (9, "F_p composition matches enumeration", suite_fp_oracle),
    "theta": (10, "truncation marginals and weights", suite_theta),
    "sandwich": (11, "sandwiches stabilize on coset boxes", suite_sandwich),
    "chi": (12, "characteristic relations and their alpha", suite_chi),
    "realization": (13, "finitary witnesses exist for F_2^3", suite_realization),
    "lambda": (14, "index-semigroup weights are closed under composition", suite_lambda),
}


def run_suite(name: str, scale: float = 1.0, extra: Sequence = ()) -> SuiteResult:
    if name not in SUITES:
        raise KeyError(name)
    start = time.perf_counter()
    res = SUITES[name][2](scale=scale, extra=extra)
    res.seconds = time.perf_counter() - start
    return res
