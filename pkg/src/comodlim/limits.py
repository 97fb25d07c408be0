"""Finite limits of comodules.

The underlying vector-space limit X of a diagram is generally not a comodule.
The comodule limit is instead found inside the cofree comodule C (x) X as the
largest subcomodule D on which every composite ``pi_i . p`` is a comodule
map, and the legs are ``pi_i . p . j`` for the inclusion j of D.

Two facts make this computable:

* Whether ``pi_i . p`` restricted to a subcomodule E is a comodule map can be
  decided one vector at a time.  On E the coaction is the restriction of
  Delta (x) Id, and ``pi_i . p`` is defined on all of C (x) X, so the condition
  at w is ``(Id (x) pi_i p)(Delta (x) Id) w = rho_i (pi_i p w)`` regardless
  of which E contains w.  Its solution set is a subspace W.
* The admissible subcomodules are exactly the coinvariant subspaces of W, and
  they are closed under sums, so the family has a top element.  It is found by
  the descending iteration E_{k+1} = {w in E_k : (Delta (x) Id) w in C (x) E_k}.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Sequence

from .coalg import Coalgebra
from .comod import (
    ComodMorphism,
    Comodule,
    Subcomodule,
    cofree,
    generated_subcomodule,
    hom_constraints,
    require_valid,
    restrict_coaction,
    validate_comodule,
    validate_morphism,
)
from .diagram import Diagram, MediatingResult, cospan, discrete, parallel_pair, validate_diagram
from .errors import ConeMismatch, FatalCorrectnessError, NoSolution, NotCoinvariant, ShapeError
from .exactlin import (
    RationalMatrix,
    Subspace,
    contains,
    image,
    intersect,
    kernel,
    kronecker,
    preimage_subspace,
    solve_factor,
    subspace_sum,
    vstack,
)
from .report import ValidationReport

I = RationalMatrix.identity


@dataclass
class ConeResult:
    diagram: Diagram
    apex: Comodule
    embedding: ComodMorphism              # j: apex -> C (x) X
    cofree: Comodule                      # C (x) X
    p: RationalMatrix                     # counit projection C (x) X -> X
    base_limit: RationalMatrix            # basis of X inside the sum of the object spaces
    base_projections: list[RationalMatrix]  # pi_i: X -> M_i
    legs: list[ComodMorphism]
    condition_space: Subspace             # W
    trace: tuple[int, ...]
    certificate: ValidationReport
    extra: dict = field(default_factory=dict)

    @property
    def d_space(self) -> Subspace:
        return Subspace.span(self.embedding.mat)


# --- subobject lattice ----------------------------------------------------

def _restrict_or_fatal(x: Comodule, s: Subspace, what: str) -> Subcomodule:
    try:
        return restrict_coaction(x, s)
    except NotCoinvariant as e:
        raise FatalCorrectnessError(f"{what} of subcomodules is not a subcomodule: {e}") from None


def _check_same_ambient(u1: Subcomodule, u2: Subcomodule) -> None:
    if u1.ambient != u2.ambient:
        raise ShapeError("subcomodules of different comodules")


def pullback_monos(u1: Subcomodule, u2: Subcomodule) -> Subcomodule:
    """Meet in the subobject lattice: intersection with the restricted coaction."""
    _check_same_ambient(u1, u2)
    return _restrict_or_fatal(u1.ambient, intersect(u1.space, u2.space), "intersection")


def subobject_join(u1: Subcomodule, u2: Subcomodule) -> Subcomodule:
    _check_same_ambient(u1, u2)
    return _restrict_or_fatal(u1.ambient, subspace_sum(u1.space, u2.space), "sum")


# --- the fixed point ------------------------------------------------------

def maximal_coinvariant_trace(c: Coalgebra, y_dim: int, w: Subspace) -> tuple[Subspace, tuple[int, ...]]:
    """Largest E inside w with (Delta (x) Id_Y)(E) in C (x) E, plus the dimension trace.

    The trace lists dim E_0, dim E_1, ...; it ends with the stable value
    repeated once, or at 0, which needs no confirming pass.
    """
    n = c.dim
    if w.ambient_dim != n * y_dim:
        raise ShapeError(f"subspace of dim-{w.ambient_dim} space is not inside C(x)Y, dim {n * y_dim}")
    coaction = kronecker(c.delta, I(y_dim))
    e = w
    trace = [e.dim]
    while e.dim:
        b = e.basis
        inside = preimage_subspace(coaction @ b, Subspace.span(kronecker(I(n), b)))
        nxt = Subspace.span(b @ inside.basis)
        trace.append(nxt.dim)
        if nxt.dim == e.dim:
            break
        e = nxt
    return e, tuple(trace)


def maximal_coinvariant_in(c: Coalgebra, y_dim: int, w: Subspace) -> Subspace:
    return maximal_coinvariant_trace(c, y_dim, w)[0]


def trace_is_well_formed(trace: Sequence[int]) -> bool:
    """Strictly decreasing, then either one repeat of the final value or a stop at 0."""
    if not trace:
        return False
    steps = list(zip(trace, trace[1:]))
    if trace[-1] != 0 and (not steps or steps[-1][0] != steps[-1][1]):
        return False
    if steps and steps[-1][0] == steps[-1][1]:
        steps = steps[:-1]
    return all(a > b for a, b in steps)


# --- limits ---------------------------------------------------------------

def base_limit(d: Diagram) -> tuple[RationalMatrix, list[RationalMatrix]]:
    """Vector-space limit: the equalizer subspace inside the product of the objects."""
    dims = [o.dim for o in d.objects]
    total = sum(dims)
    offsets = [sum(dims[:i]) for i in range(len(dims))]
    select = [I(total).submatrix(range(offsets[i], offsets[i] + dims[i]), range(total))
              for i in range(len(dims))]
    if d.arrows:
        eqs = vstack(*(a.morphism.mat @ select[a.src] - select[a.dst] for a in d.arrows), cols=total)
        x = kernel(eqs).basis
    else:
        x = I(total)
    return x, [s @ x for s in select]


def comodule_limit(d: Diagram, certify: bool = True) -> ConeResult:
    require_valid(validate_diagram(d))
    c = d.coalgebra
    n = c.dim
    bx, pis = base_limit(d)
    x_dim = bx.cols
    cf, p = cofree(c, x_dim)

    # W: vectors where every pi_i p intertwines Delta (x) Id with rho_i
    conditions = [kronecker(I(n), pi @ p) @ cf.rho - o.rho @ pi @ p
                  for pi, o in zip(pis, d.objects)]
    w = kernel(vstack(*conditions, cols=cf.dim))
    dspace, trace = maximal_coinvariant_trace(c, x_dim, w)

    sub = _restrict_or_fatal(cf, dspace, "top of the admissible family")
    apex = Comodule(c, sub.dim, sub.restricted.rho, "lim")
    j = ComodMorphism(apex, cf, dspace.basis)
    legs = [ComodMorphism(apex, o, pi @ p @ j.mat) for pi, o in zip(pis, d.objects)]

    cert = ValidationReport("cone certificate" if certify else "cone certificate (skipped)")
    if certify:
        for check in validate_comodule(apex).checks:
            cert.add(f"apex {check.name}", check.passed, check.witness)
        cert.add("j is a comodule map", validate_morphism(j).ok)
        cert.add("j is injective", j.mat.rank() == apex.dim)
        for i, leg in enumerate(legs):
            cert.add(f"leg {d.labels[i]} is a comodule map", validate_morphism(leg).ok, i)
        for k, a in enumerate(d.arrows):
            ok = a.morphism.mat @ legs[a.src].mat == legs[a.dst].mat
            cert.add(f"leg commutes with {a.label}", ok, k)
        cert.add("fixed-point trace", trace_is_well_formed(trace) and len(trace) <= cf.dim + 1,
                 detail=str(list(trace)))
        cert.add("rho of apex is injective", apex.rho.rank() == apex.dim)
    return ConeResult(d, apex, j, cf, p, bx, pis, legs, w, trace, cert)


def product(vs: Sequence[Comodule], coalgebra: Coalgebra | None = None, certify: bool = True
            ) -> ConeResult:
    if coalgebra is None:
        if not vs:
            raise ValueError("empty product needs an explicit coalgebra")
        coalgebra = vs[0].coalgebra
    return comodule_limit(discrete(coalgebra, vs), certify)


def pullback(f: ComodMorphism, g: ComodMorphism, certify: bool = True) -> ConeResult:
    if f.dst != g.dst:
        raise ShapeError("pullback needs maps with a common target")
    return comodule_limit(cospan(f, g), certify)


def equalizer(f: ComodMorphism, g: ComodMorphism, certify: bool = True) -> ConeResult:
    """Equalizer via the general limit, cross-checked against ker(f - g)."""
    if f.src != g.src or f.dst != g.dst:
        raise ShapeError("equalizer needs a parallel pair")
    lim = comodule_limit(parallel_pair(f, g), certify)
    direct = kernel(f.mat - g.mat)
    via_limit = image(lim.legs[0].mat)
    lim.extra["kernel_route"] = direct
    if certify:
        try:
            restrict_coaction(f.src, direct)
            coinvariant = True
        except NotCoinvariant:
            coinvariant = False
        lim.certificate.add("ker(f-g) is a subcomodule", coinvariant)
        lim.certificate.add("limit route equals kernel route", via_limit == direct)
    return lim


def _check_cone(apex: Comodule, legs: Sequence[ComodMorphism], d: Diagram) -> None:
    if len(legs) != len(d.objects):
        raise ConeMismatch(f"{len(legs)} legs for {len(d.objects)} objects")
    for i, leg in enumerate(legs):
        if leg.src != apex or leg.dst != d.objects[i]:
            raise ConeMismatch(f"leg {i} does not run from the cone apex to {d.labels[i]}")
        if not validate_morphism(leg).ok:
            raise ConeMismatch(f"leg {i} is not a comodule map")
    for a in d.arrows:
        if a.morphism.mat @ legs[a.src].mat != legs[a.dst].mat:
            raise ConeMismatch(f"legs do not commute with arrow {a.label}")


def mediating_morphism(cone_apex: Comodule, cone_legs: Sequence[ComodMorphism], lim: ConeResult
                       ) -> MediatingResult:
    """The comodule map q_U: U -> D with lim.legs[i] . q_U = cone_legs[i]."""
    _check_cone(cone_apex, cone_legs, lim.diagram)
    u = cone_apex
    n = u.coalgebra.dim
    stacked = vstack(*(leg.mat for leg in cone_legs), cols=u.dim)
    try:
        g, _ = solve_factor(lim.base_limit, stacked)
    except NoSolution:
        raise FatalCorrectnessError("compatible legs do not factor through the base limit") from None
    g_tilde = kronecker(I(n), g) @ u.rho
    if not contains(lim.d_space, image(g_tilde)):
        raise FatalCorrectnessError("lift of a cone leaves the maximal admissible subcomodule")
    q, _ = solve_factor(lim.embedding.mat, g_tilde)
    for leg, want in zip(lim.legs, cone_legs):
        if leg.mat @ q != want.mat:
            raise FatalCorrectnessError("mediating map does not reproduce the cone legs")
    # comodule maps h: U -> D with legs . h = 0
    legs_all = vstack(*(leg.mat for leg in lim.legs), cols=lim.apex.dim)
    homog = vstack(hom_constraints(u, lim.apex), kronecker(legs_all, I(u.dim)), cols=lim.apex.dim * u.dim)
    return MediatingResult(ComodMorphism(u, lim.apex, q), kernel(homog).dim)


def rational_realization(lim: ConeResult) -> tuple[Subspace, Comodule]:
    """The apex realized inside X via p . j, with its transported coaction.

    Also confirms the transported coaction is the only one making every
    pi_i restricted to the image a comodule map.
    """
    c = lim.apex.coalgebra
    n = c.dim
    pj = lim.p @ lim.embedding.mat
    if pj.rank() != lim.apex.dim:
        raise FatalCorrectnessError("p . j is not injective")
    img = image(pj)
    b = img.basis
    t, _ = solve_factor(b, pj)
    rho = kronecker(I(n), t) @ lim.apex.rho @ t.inverse()
    realized = Comodule(c, img.dim, rho, "realized")
    lhs = vstack(*(kronecker(I(n), pi @ b) for pi in lim.base_projections), cols=n * img.dim)
    rhs = vstack(*(o.rho @ pi @ b for pi, o in zip(lim.base_projections, lim.diagram.objects)),
                 cols=img.dim)
    try:
        forced, nullity = solve_factor(lhs, rhs)
    except NoSolution:
        raise FatalCorrectnessError("no coaction on the realized subspace") from None
    if nullity != 0 or forced != rho:
        raise FatalCorrectnessError("coaction on the realized subspace is not unique")
    return img, realized


def coinvariance_witnesses(c: Coalgebra, y_dim: int, w: Subspace, top: Subspace,
                           count: int = 20, seed: int = 0) -> list[bool]:
    """For seeded random vectors of w outside top: does their generated subcomodule escape w?

    ``top`` is the maximal coinvariant subspace of ``w`` inside the cofree
    comodule C (x) Y.  Every entry must be True; an empty list means w = top.
    """
    if w.dim == top.dim:
        return []
    cf, _ = cofree(c, y_dim)
    rng = random.Random(seed)
    out = []
    while len(out) < count:
        coeffs = [rng.randint(-3, 3) for _ in range(w.dim)]
        vec = w.basis @ RationalMatrix.column_vector(coeffs)
        if contains(top, Subspace.span(vec)):
            continue
        gen = generated_subcomodule(cf, [vec])
        out.append(not contains(w, gen.space))
    return out


def maximality_witnesses(lim: ConeResult, count: int = 20, seed: int = 0) -> list[bool]:
    x_dim = lim.base_limit.cols
    return coinvariance_witnesses(lim.apex.coalgebra, x_dim, lim.condition_space, lim.d_space,
                                  count, seed)


def direct_sum_comparison(lim: ConeResult) -> tuple[ComodMorphism, ComodMorphism, bool]:
    """Compare a product with the direct sum of its factors.

    Returns phi: S -> P (mediating map of the sum's projections), psi: P -> S
    (the legs stacked) and whether they are mutually inverse comodule maps.
    """
    from .comod import direct_sum

    objs = lim.diagram.objects
    s, _, projections = direct_sum(objs, lim.apex.coalgebra)
    phi = mediating_morphism(s, projections, lim)
    legs = vstack(*(leg.mat for leg in lim.legs), cols=lim.apex.dim)
    pr = vstack(*(m.mat for m in projections), cols=s.dim)
    try:
        psi_mat, nullity = solve_factor(pr, legs)
    except NoSolution:
        raise FatalCorrectnessError("product legs do not factor through the direct sum") from None
    psi = ComodMorphism(lim.apex, s, psi_mat)
    ok = (phi.uniqueness_kernel_dim == 0 and nullity == 0 and validate_morphism(psi).ok
          and psi_mat @ phi.map.mat == I(s.dim) and phi.map.mat @ psi_mat == I(lim.apex.dim))
    return phi.map, psi, ok
