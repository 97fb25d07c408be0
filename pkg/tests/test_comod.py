import random

import pytest
from hypothesis import given, strategies as st

from comodlim.coalg import corpus, grouplike_coalgebra, divided_power_coalgebra, trivial_coalgebra
from comodlim.comod import (
    ComodMorphism,
    Comodule,
    cofree,
    cofree_factorize,
    components,
    direct_sum,
    dual_oracle_ok,
    from_dual_module,
    generated_subcomodule,
    hom_space,
    quotient_comodule,
    random_comodule,
    random_morphism,
    restrict_coaction,
    to_dual_module,
    validate_comodule,
    validate_dual_hom,
    validate_morphism,
    zero_comodule,
)
from comodlim.errors import MixedCoalgebras, NotCoinvariant, ShapeError
from comodlim.exactlin import RationalMatrix, Subspace, contains, kronecker
from conftest import M, col

I = RationalMatrix.identity
G2 = grouplike_coalgebra(2)
DP2 = divided_power_coalgebra(2)
CORPUS = corpus()


def line(k):
    """The one-dimensional grouplike(2)-comodule graded by g_k."""
    return Comodule(G2, 1, col(*(1 if a == k else 0 for a in range(2))), f"L{k}")


# -- validation -------------------------------------------------------------------

@pytest.mark.parametrize("m", [0, 1, 3])
def test_trivial_coaction_is_identity(m):
    assert validate_comodule(Comodule(trivial_coalgebra(), m, I(m))).ok


def test_graded_line_validates():
    assert validate_comodule(line(0)).ok


def test_counit_failure_is_witnessed():
    # eps-contraction of (1, 1) is 2; coassociativity fails too: (1,0,0,1) vs (1,1,1,1)
    report = validate_comodule(Comodule(G2, 1, col(1, 1)))
    failed = {c.name: c for c in report.failures()}
    assert set(failed) == {"counit", "coassociativity"}
    assert failed["counit"].witness == 0


def test_morphism_examples():
    v = line(0)
    assert validate_morphism(v.identity()).ok
    assert validate_morphism(ComodMorphism(v, line(1), M([[0]]))).ok
    assert not validate_morphism(ComodMorphism(v, line(1), M([[1]]))).ok


def test_morphism_shape_checked():
    with pytest.raises(ShapeError):
        ComodMorphism(line(0), line(1), M([[1, 0]]))


def test_mixed_coalgebras_reported():
    other = Comodule(DP2, 1, col(1, 0))
    assert not validate_morphism(ComodMorphism(line(0), other, M([[0]]))).ok
    with pytest.raises(MixedCoalgebras):
        direct_sum([line(0), other])


# -- cofree -----------------------------------------------------------------------

def test_cofree_over_trivial():
    cf, p = cofree(trivial_coalgebra(), 3)
    assert cf.rho == I(3) and p == I(3)


@pytest.mark.parametrize("name", list(CORPUS))
def test_cofree_on_a_line_is_regular(name):
    c = CORPUS[name]
    cf, _ = cofree(c, 1)
    assert cf.rho == c.delta
    assert validate_comodule(cf).ok


def test_cofree_grouplike_2_of_2():
    cf, p = cofree(G2, 2)
    assert cf.dim == 4
    assert validate_comodule(cf).ok
    assert kronecker(G2.eps, I(4)) @ cf.rho == I(4)
    assert p.shape == (2, 4)


def test_cofree_factorize_on_a_line():
    cf, p = cofree(G2, 1)
    lift, kdim = cofree_factorize(line(0), M([[1]]), cf, p)
    assert lift.mat == col(1, 0)
    assert kdim == 0


def test_cofree_factorize_identity_gives_rho():
    v = random_comodule(DP2, 3, 5)
    cf, p = cofree(DP2, v.dim)
    lift, kdim = cofree_factorize(v, I(v.dim), cf, p)
    assert lift.mat == v.rho and p @ v.rho == I(v.dim) and kdim == 0


def test_cofree_factorize_recovers_comodule_maps():
    rng = random.Random(3)
    for c in CORPUS.values():
        v = random_comodule(c, 3, rng.randrange(1000))
        cf, p = cofree(c, 2)
        g = random_morphism(v, cf, rng)
        lift, kdim = cofree_factorize(v, p @ g.mat, cf, p)
        assert lift.mat == g.mat and kdim == 0


def test_cofree_factorize_shape_error():
    cf, p = cofree(G2, 2)
    with pytest.raises(ShapeError):
        cofree_factorize(line(0), M([[1]]), cf, p)


# -- direct sums ------------------------------------------------------------------

def test_direct_sum_examples():
    z, inj, pr = direct_sum([], G2)
    assert z.dim == 0 and inj == [] and pr == []
    s, inj, _ = direct_sum([line(0)])
    assert s.rho == line(0).rho and inj[0].mat == I(1)
    s, inj, pr = direct_sum([line(0), line(1)])
    assert s.rho == M([[1, 0], [0, 0], [0, 0], [0, 1]])
    for m in (*inj, *pr):
        assert validate_morphism(m).ok


def test_empty_sum_needs_coalgebra():
    with pytest.raises(ValueError):
        direct_sum([])


# -- components ------------------------------------------------------------------

def test_components():
    y = 3
    # c_1 (x) e_2
    w = col(*([0] * y + [0, 0, 1]))
    assert components(G2, w, y) == Subspace.span(col(0, 0, 1))
    assert components(G2, RationalMatrix.zeros(2 * y, 1), y).dim == 0
    w = col(1, 0, 0, 0, 1, 0)
    assert components(G2, w, y) == Subspace.span(M([[1, 0], [0, 1], [0, 0]]))
    with pytest.raises(ShapeError):
        components(G2, col(1, 2, 3), y)


# -- subcomodules ----------------------------------------------------------------

def test_generated_examples():
    cf, _ = cofree(DP2, 1)
    assert generated_subcomodule(cf, []).dim == 0
    triv = Comodule(trivial_coalgebra(), 2, I(2))
    assert generated_subcomodule(triv, [col(1, 0)]).space == Subspace.span(col(1, 0))
    # Delta c1 has a c0-component, so c1 generates everything
    sub = generated_subcomodule(cf, [col(0, 1)])
    assert sub.space == Subspace.full(2)
    assert sub.trace == (1, 2)


def test_generated_is_least_and_grows_strictly():
    rng = random.Random(11)
    for c in CORPUS.values():
        cf, _ = cofree(c, 2)
        seed = col(*(rng.randint(-1, 1) for _ in range(cf.dim)))
        sub = generated_subcomodule(cf, [seed])
        assert seed in sub.space
        assert validate_comodule(sub.restricted).ok
        assert all(a < b for a, b in zip(sub.trace, sub.trace[1:]))
        for _ in range(3):
            extra = col(*(rng.randint(-1, 1) for _ in range(cf.dim)))
            bigger = generated_subcomodule(cf, [seed, extra])
            assert contains(bigger.space, sub.space)


def test_restrict_examples():
    cf, _ = cofree(DP2, 1)
    assert restrict_coaction(cf, Subspace.full(2)).restricted.rho == cf.rho
    assert restrict_coaction(cf, Subspace.zero(2)).dim == 0
    with pytest.raises(NotCoinvariant) as err:
        restrict_coaction(cf, Subspace.span(col(0, 1)))
    assert [int(x) for x in err.value.witness] == [0, 1]


def test_inclusion_is_a_morphism():
    cf, _ = cofree(DP2, 1)
    sub = restrict_coaction(cf, Subspace.span(col(1, 0)))
    assert validate_morphism(sub.inclusion).ok


def test_quotient_examples():
    s, _, _ = direct_sum([line(0), line(1)])
    q, proj = quotient_comodule(s, restrict_coaction(s, Subspace.zero(2)))
    assert q.rho == s.rho and proj.mat == I(2)
    q, _ = quotient_comodule(s, restrict_coaction(s, Subspace.full(2)))
    assert q.dim == 0
    q, proj = quotient_comodule(s, restrict_coaction(s, Subspace.span(col(1, 0))))
    assert q.rho == line(1).rho
    assert validate_morphism(proj).ok


def test_zero_comodule_is_first_class():
    z = zero_comodule(G2)
    assert validate_comodule(z).ok
    assert hom_space(z, line(0)) == []
    assert validate_morphism(ComodMorphism(z, line(0), RationalMatrix.zeros(1, 0))).ok


# -- dual-module oracle ------------------------------------------------------------

def test_dual_over_trivial_is_scaling():
    v = Comodule(trivial_coalgebra(), 2, I(2))
    assert to_dual_module(v) == I(2)


def test_dual_of_regular_grouplike_is_coordinate_projections():
    cf, _ = cofree(G2, 1)
    act = to_dual_module(cf)
    n = 2
    # action of phi_a sits in columns k*n + a
    for a in range(n):
        block = act.submatrix(range(2), [k * n + a for k in range(2)])
        want = M([[1, 0], [0, 0]]) if a == 0 else M([[0, 0], [0, 1]])
        assert block == want


@given(st.sampled_from(list(CORPUS)), st.integers(1, 6), st.integers(0, 10**6))
def test_dual_round_trip(name, dim, seed):
    v = random_comodule(CORPUS[name], dim, seed)
    back = from_dual_module(v.coalgebra, to_dual_module(v))
    assert back.rho == v.rho
    assert dual_oracle_ok(v)


def test_dual_axioms_iff_comodule_axioms():
    rng = random.Random(5)
    invalid = 0
    for c in CORPUS.values():
        base = random_comodule(c, 3, rng.randrange(1000))
        assert dual_oracle_ok(base)
        for _ in range(20):
            rows = base.rho.to_rows()
            rows[rng.randrange(len(rows))][rng.randrange(base.dim)] += rng.choice([-1, 1])
            mutant = Comodule(c, base.dim, M(rows))
            ok = validate_comodule(mutant).ok
            invalid += not ok
            assert ok == dual_oracle_ok(mutant)
    assert invalid > 0


def test_dual_hom_matches_morphism_check():
    rng = random.Random(9)
    for c in CORPUS.values():
        v, w = random_comodule(c, 3, 1), random_comodule(c, 3, 2)
        f = random_morphism(v, w, rng)
        assert validate_dual_hom(f).ok
        if v.dim and w.dim:
            bad = ComodMorphism(v, w, f.mat + RationalMatrix.from_rows(
                [[1 if (i, j) == (0, 0) else 0 for j in range(v.dim)] for i in range(w.dim)]))
            assert validate_dual_hom(bad).ok == validate_morphism(bad).ok


# -- random generation ------------------------------------------------------------

@given(st.sampled_from(list(CORPUS)), st.integers(1, 8), st.integers(0, 10**6))
def test_random_comodule_valid_and_bounded(name, dim, seed):
    v = random_comodule(CORPUS[name], dim, seed)
    assert validate_comodule(v).ok
    assert v.dim <= 8
    assert v.rho.rank() == v.dim


def test_random_comodule_deterministic():
    a = random_comodule(CORPUS["matrix(2)"], 6, 99)
    b = random_comodule(CORPUS["matrix(2)"], 6, 99)
    assert a == b


def test_random_over_trivial_is_identity():
    v = random_comodule(trivial_coalgebra(), 4, 3)
    assert v.rho == I(v.dim)
