import random

import pytest

from comodlim.coalg import corpus, grouplike_coalgebra, divided_power_coalgebra
from comodlim.colimits import (
    coequalizer,
    coimage_factorization,
    cokernel,
    colimit_mediating,
    coproduct,
    finite_colimit,
    kernel_sub,
    pushout,
)
from comodlim.comod import (
    ComodMorphism,
    Comodule,
    direct_sum,
    quotient_comodule,
    random_comodule,
    random_morphism,
    restrict_coaction,
    validate_comodule,
    validate_morphism,
)
from comodlim.diagram import Arrow, Diagram, discrete
from comodlim.errors import ConeMismatch, ShapeError
from comodlim.exactlin import RationalMatrix, Subspace, intersect, subspace_sum
from conftest import M, col

I = RationalMatrix.identity
G2 = grouplike_coalgebra(2)
CORPUS = corpus()


def line(k):
    return Comodule(G2, 1, col(*(1 if a == k else 0 for a in range(2))), f"L{k}")


def graded_plane():
    s, inj, pr = direct_sum([line(0), line(1)])
    return s, inj, pr


# -- coproduct ----------------------------------------------------------------------

def test_empty_coproduct_is_zero():
    res = coproduct([], G2)
    assert res.apex.dim == 0 and res.legs == []


def test_singleton_coproduct_has_identity_leg():
    res = coproduct([line(1)])
    assert res.apex.rho == line(1).rho
    assert res.legs[0].mat == I(1)


def test_two_lines_block_interleaved():
    res = coproduct([line(0), line(1)])
    assert res.apex.rho == M([[1, 0], [0, 0], [0, 0], [0, 1]])
    assert res.certificate.ok


def test_coproduct_rejects_mixed_coalgebras():
    from comodlim.errors import ComodError

    other = Comodule(divided_power_coalgebra(2), 1, col(1, 0))
    with pytest.raises(ComodError):
        coproduct([line(0), other])


# -- coequalizer / cokernel ----------------------------------------------------------

def test_coequalizer_of_equal_maps_is_target():
    s, _, _ = graded_plane()
    f = ComodMorphism(s, s, M([[2, 0], [0, 3]]))
    res = coequalizer(f, f)
    assert res.apex.rho == s.rho
    assert res.legs[1].mat == I(2)


def test_coequalizer_surjective_against_zero():
    s, _, _ = graded_plane()
    f = s.identity()
    zero = ComodMorphism(s, s, RationalMatrix.zeros(2, 2))
    assert coequalizer(f, zero).apex.dim == 0


def test_coequalizer_kills_the_first_line():
    s, inj, _ = graded_plane()
    zero = ComodMorphism(line(0), s, RationalMatrix.zeros(2, 1))
    res = coequalizer(inj[0], zero)
    assert res.apex.rho == line(1).rho
    q = res.legs[1]
    assert q.mat @ inj[0].mat == q.mat @ zero.mat
    assert res.certificate.ok


def test_coequalizer_needs_parallel_pair():
    s, inj, _ = graded_plane()
    with pytest.raises(ShapeError):
        coequalizer(inj[0], s.identity())


def test_cokernel_examples():
    s, inj, _ = graded_plane()
    assert cokernel(ComodMorphism(s, s, RationalMatrix.zeros(2, 2))).apex.rho == s.rho
    assert cokernel(s.identity()).apex.dim == 0
    assert cokernel(inj[0]).apex.rho == line(1).rho


def test_cokernel_dimension_formula():
    rng = random.Random(21)
    for c in CORPUS.values():
        for _ in range(5):
            v, w = random_comodule(c, 3, rng.randrange(999)), random_comodule(c, 4, rng.randrange(999))
            f = random_morphism(v, w, rng)
            assert cokernel(f).apex.dim == w.dim - f.mat.rank()


# -- general finite colimits ----------------------------------------------------------

def test_discrete_colimit_is_coproduct():
    res = finite_colimit(discrete(G2, [line(0), line(1)]))
    assert res.apex.rho == coproduct([line(0), line(1)]).apex.rho


def test_single_object_no_arrows():
    v = random_comodule(CORPUS["matrix(2)"], 4, 8)
    res = finite_colimit(discrete(v.coalgebra, [v]))
    assert res.apex.rho == v.rho and res.legs[0].mat == I(v.dim)


def test_single_object_identity_arrow():
    v = random_comodule(CORPUS["divided_power(3)"], 3, 4)
    d = Diagram(v.coalgebra, [v], [Arrow("id", 0, 0, v.identity())], ["V"])
    res = finite_colimit(d)
    assert res.apex.rho == v.rho and res.legs[0].mat == I(v.dim)


def test_empty_colimit_is_zero():
    res = finite_colimit(Diagram(G2, [], [], []))
    assert res.apex.dim == 0


def test_pushout_of_quotients_matches_lattice_count():
    # X = three graded lines; quotients by A = <e0, e1> and B = <e1, e2>
    g3 = grouplike_coalgebra(3)
    lines = [Comodule(g3, 1, col(*(1 if a == k else 0 for a in range(3)))) for k in range(3)]
    x, _, _ = direct_sum(lines)
    for a_cols, b_cols in (([0, 1], [1, 2]), ([0], [1]), ([0, 1], [0])):
        a = Subspace.span(I(3).submatrix(range(3), a_cols))
        b = Subspace.span(I(3).submatrix(range(3), b_cols))
        qa, pa = quotient_comodule(x, restrict_coaction(x, a))
        qb, pb = quotient_comodule(x, restrict_coaction(x, b))
        res = pushout(pa, pb)
        meet = intersect(a, b)
        # dim X/A + dim X/B - dim X/(A meet B) = dim X/(A + B)
        assert res.apex.dim == qa.dim + qb.dim - (x.dim - meet.dim)
        assert res.apex.dim == x.dim - subspace_sum(a, b).dim
        assert res.certificate.ok


def test_pushout_needs_common_source():
    s, inj, _ = graded_plane()
    with pytest.raises(ShapeError):
        pushout(inj[0], inj[1])


def test_certificate_contents():
    s, inj, _ = graded_plane()
    res = pushout(inj[0], inj[0])
    names = {c.name for c in res.certificate.checks}
    assert "coaction unique" in names
    assert any(n.startswith("leg commutes") for n in names)
    assert res.coaction_kernel_dim == 0


# -- universality ------------------------------------------------------------------

def test_colimit_mediating_randomized():
    rng = random.Random(50)
    names = list(CORPUS)
    for k in range(50):
        c = CORPUS[names[k % len(names)]]
        a, b, s = (random_comodule(c, rng.randint(1, 3), rng.randrange(10**6)) for _ in range(3))
        res = pushout(random_morphism(s, a, rng), random_morphism(s, b, rng))
        t = random_comodule(c, rng.randint(1, 4), rng.randrange(10**6))
        u = random_morphism(res.apex, t, rng)
        med = colimit_mediating(res, t, [leg.then(u) for leg in res.legs])
        assert med.map.mat == u.mat
        assert med.uniqueness_kernel_dim == 0


def test_colimit_mediating_rejects_non_commuting():
    s, inj, _ = graded_plane()
    res = coequalizer(s.identity(), ComodMorphism(s, s, RationalMatrix.zeros(2, 2)))
    with pytest.raises(ConeMismatch):
        colimit_mediating(res, s, [s.identity(), s.identity()])


# -- kernels and coimages ------------------------------------------------------------

def test_kernel_sub_examples():
    s, _, pr = graded_plane()
    assert kernel_sub(s.identity()).dim == 0
    assert kernel_sub(ComodMorphism(s, s, RationalMatrix.zeros(2, 2))).space == Subspace.full(2)
    k = kernel_sub(pr[1])
    assert k.space == Subspace.span(col(1, 0))
    assert k.restricted.rho == line(0).rho
    assert validate_morphism(k.inclusion).ok


def test_coimage_identity_and_zero():
    v = random_comodule(CORPUS["divided_power(3)"], 3, 2)
    coim, k = coimage_factorization(v.identity())
    assert coim.mat == I(v.dim) and k.mat == I(v.dim)
    coim, k = coimage_factorization(ComodMorphism(v, v, RationalMatrix.zeros(v.dim, v.dim)))
    assert coim.dst.dim == 0


def test_coimage_rank_one():
    s, _, _ = graded_plane()
    f = ComodMorphism(s, s, M([[0, 0], [0, 5]]))
    coim, k = coimage_factorization(f)
    assert coim.dst.dim == 1
    assert k.mat @ coim.mat == f.mat
    assert validate_comodule(coim.dst).ok
    assert validate_morphism(coim).ok and validate_morphism(k).ok


def test_coimage_randomized():
    rng = random.Random(8)
    for c in CORPUS.values():
        for _ in range(4):
            v, w = random_comodule(c, 4, rng.randrange(999)), random_comodule(c, 4, rng.randrange(999))
            f = random_morphism(v, w, rng)
            coim, k = coimage_factorization(f)
            assert k.mat @ coim.mat == f.mat
            assert coim.mat.rank() == coim.mat.rows
            assert k.mat.rank() == k.mat.cols
            assert validate_morphism(coim).ok and validate_morphism(k).ok
