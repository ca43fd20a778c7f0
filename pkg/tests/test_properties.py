import itertools
from fractions import Fraction

from hypothesis import given, strategies as st

import splittings as sp
from splittings import tree_arithmetic as ta
from splittings.orbifold import B, M, BoundaryCircle, Orbifold2

from conftest import make_m3

M3 = make_m3()
BS23 = sp.validate_graph(sp.bs(2, 3))
BS12 = sp.validate_graph(sp.bs(1, 2))
MASTER = ta.master(M3)
SUBSETS = [
    ta.collapse(MASTER, s)
    for r in range(4)
    for s in itertools.combinations(MASTER.orbits, r)
]


def letters_for(g):
    alphabet = []
    for v in g.vertices:
        for n in (-3, -2, -1, 1, 2, 3):
            alphabet.append(("a", v, n))
    for e in g.edges:
        alphabet.append(("t", e.id, 1))
        alphabet.append(("t", e.id, -1))
    return st.lists(st.sampled_from(alphabet), min_size=0, max_size=7)


def words_for(g):
    return letters_for(g).map(lambda ls: sp.make_word(g, tuple(ls)))


# -- translation length ------------------------------------------------------

@given(words_for(M3))
def test_length_is_nonnegative_int(w):
    ell = sp.translation_length(M3, w)
    assert isinstance(ell, int) and ell >= 0


@given(words_for(M3), words_for(M3))
def test_conjugacy_invariance(w, c):
    conj = sp.concat(sp.concat(c, w), sp.inverse(c))
    assert sp.translation_length(M3, conj) == sp.translation_length(M3, w)


@given(words_for(BS23), st.integers(min_value=-4, max_value=4))
def test_power_law(w, n):
    ell = sp.translation_length(BS23, w)
    assert sp.translation_length(BS23, sp.power(w, n)) == abs(n) * ell


@given(words_for(M3))
def test_inverse_preserves_length(w):
    assert sp.translation_length(M3, sp.inverse(w)) == sp.translation_length(
        M3, w
    )


HYPERBOLIC_POOL = [
    w
    for w in sp.sample_words(BS23, 400, 6, seed=97)
    if not sp.is_elliptic(BS23, w)
][:80]


@given(st.sampled_from(HYPERBOLIC_POOL), st.sampled_from(HYPERBOLIC_POOL))
def test_axis_dichotomy(w1, w2):
    r = sp.axis_gap(BS23, w1, w2)  # IdentityViolation would fail the test
    l1 = sp.translation_length(BS23, w1)
    l2 = sp.translation_length(BS23, w2)
    lp = sp.translation_length(BS23, sp.concat(w1, w2))
    lm = sp.translation_length(BS23, sp.concat(sp.inverse(w1), w2))
    if r.kind == "meet":
        assert max(lp, lm) == l1 + l2
    else:
        assert lp == lm == l1 + l2 + 2 * r.gap


@given(words_for(BS12))
def test_oracle_agrees_when_valid(w):
    res = sp.ball_displacement_oracle(BS12, w, 8)
    if res.valid:
        assert res.value == sp.translation_length(BS12, w)


# -- modular homomorphism ----------------------------------------------------

@given(words_for(M3), words_for(M3))
def test_modular_multiplicative(w1, w2):
    q = sp.modular_homomorphism
    assert q(M3, sp.concat(w1, w2)) == q(M3, w1) * q(M3, w2)


@given(words_for(M3))
def test_modular_inverse(w):
    q = sp.modular_homomorphism
    assert q(M3, sp.inverse(w)) == 1 / q(M3, w)


# -- collapse lattice --------------------------------------------------------

@given(st.sampled_from(SUBSETS), st.sampled_from(SUBSETS), words_for(M3))
def test_modularity(k1, k2, w):
    lu = ta.length_in_collapse(MASTER, ta.lcm(k1, k2), w)
    li = ta.length_in_collapse(MASTER, ta.gcd(k1, k2), w)
    l1 = ta.length_in_collapse(MASTER, k1, w)
    l2 = ta.length_in_collapse(MASTER, k2, w)
    assert lu + li == l1 + l2


@given(st.sampled_from(SUBSETS), words_for(M3))
def test_collapse_never_longer_than_master(k, w):
    full = ta.collapse(MASTER, MASTER.orbits)
    assert ta.length_in_collapse(MASTER, k, w) <= ta.length_in_collapse(
        MASTER, full, w
    )


@given(st.sampled_from(SUBSETS))
def test_prime_factor_count(k):
    assert len(ta.prime_factors(k)) == len(k.kept)


@given(st.sampled_from(SUBSETS), st.sampled_from(SUBSETS))
def test_lcm_is_least_upper_bound(k1, k2):
    up = ta.lcm(k1, k2)
    assert ta.refines(up, k1) and ta.refines(up, k2)
    for other in SUBSETS:
        if ta.refines(other, k1) and ta.refines(other, k2):
            assert ta.refines(other, up)


@given(words_for(M3), st.sampled_from(SUBSETS), st.sampled_from(SUBSETS))
def test_elliptic_in_lcm_equivalence(w, k1, k2):
    res = ta.elliptic_in_lcm(MASTER, w, [k1, k2])
    assert res == (
        ta.length_in_collapse(MASTER, k1, w) == 0
        and ta.length_in_collapse(MASTER, k2, w) == 0
    )


# -- orbifolds ---------------------------------------------------------------

def circles_strategy():
    def build(tokens, orders):
        word = tuple(tokens)
        n = len(word)
        corners = []
        it = iter(orders)
        for i in range(n):
            if word[i] == M and word[(i + 1) % n] == M and n > 1:
                corners.append(2 + next(it) % 8)
            else:
                corners.append(None)
        return BoundaryCircle.mixed(word, tuple(corners))

    mixed = st.builds(
        build,
        st.lists(st.sampled_from([M, B]), min_size=1, max_size=6).filter(
            lambda t: M in t
        ),
        st.lists(st.integers(min_value=0, max_value=7), min_size=8, max_size=8),
    )
    return st.one_of(st.just(BoundaryCircle.plain()), mixed)


def orbifolds_strategy():
    return st.builds(
        lambda orientable, genus, cones, circles: sp.validate(
            Orbifold2(
                orientable,
                genus if orientable else max(1, genus),
                tuple(cones),
                tuple(circles),
            )
        ),
        st.booleans(),
        st.integers(min_value=0, max_value=2),
        st.lists(st.integers(min_value=2, max_value=9), max_size=3),
        st.lists(circles_strategy(), max_size=3),
    )


@given(orbifolds_strategy(), st.integers(min_value=2, max_value=12))
def test_cone_decrement(o, q):
    coned = sp.validate(
        Orbifold2(o.orientable, o.genus, o.cone_points + (q,), o.circles)
    )
    assert sp.euler_characteristic(coned) == sp.euler_characteristic(
        o
    ) - (1 - Fraction(1, q))


@given(orbifolds_strategy())
def test_hyperbolic_iff_negative(o):
    assert sp.is_hyperbolic(o) == (sp.euler_characteristic(o) < 0)


@given(orbifolds_strategy(), st.integers(min_value=0, max_value=11))
def test_verdicts_invariant_under_rotation(o, k):
    rotated = []
    for c in o.circles:
        if c.is_plain() or len(c.word) < 2:
            rotated.append(c)
            continue
        n = len(c.word)
        r = k % n
        word = tuple(c.word[(i + r) % n] for i in range(n))
        corners = tuple(c.corners[(i + r) % n] for i in range(n))
        rotated.append(BoundaryCircle.mixed(word, corners))
    o2 = sp.validate(
        Orbifold2(o.orientable, o.genus, o.cone_points, tuple(rotated))
    )
    assert o2 == o
    assert sp.euler_characteristic(o2) == sp.euler_characteristic(o)
    if sp.is_hyperbolic(o):
        assert sp.is_small(o2) == sp.is_small(o)
        assert sp.has_finite_mcg(o2) == sp.has_finite_mcg(o)


@given(orbifolds_strategy())
def test_verdicts_invariant_under_reflection(o):
    reflected = []
    for c in o.circles:
        if c.is_plain() or len(c.word) < 2:
            reflected.append(c)
            continue
        n = len(c.word)
        word = tuple(reversed(c.word))
        corners = tuple(c.corners[(n - 2 - j) % n] for j in range(n))
        reflected.append(BoundaryCircle.mixed(word, corners))
    o2 = sp.validate(
        Orbifold2(o.orientable, o.genus, o.cone_points, tuple(reflected))
    )
    assert o2 == o


# -- reduce ------------------------------------------------------------------

@given(st.integers(min_value=-4, max_value=4).filter(lambda x: x != 0),
       st.integers(min_value=-4, max_value=4).filter(lambda x: x != 0),
       st.integers(min_value=-3, max_value=3).filter(lambda x: x != 0))
def test_reduce_preserves_surviving_loop_modulus(lam, mu, unit_mu):
    g = sp.validate_graph(
        sp.graph(
            ("u", "v"),
            (("e", "u", "u", lam, mu), ("f", "u", "v", 1, unit_mu)),
        )
    )
    r = sp.reduce(g)
    assert sp.is_reduced(r)
    before = Fraction(g.edge("e").lam, g.edge("e").mu)
    after = Fraction(r.edge("e").lam, r.edge("e").mu)
    assert before == after
