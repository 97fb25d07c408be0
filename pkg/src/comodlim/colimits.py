"""Finite colimits of comodules and the coimage factorization.

The base-category colimit is a quotient of the direct sum of the objects; the
coaction on it is the unique solution of ``rho_V q_i = (Id (x) q_i) rho_i``.
Uniqueness holds because the q_i jointly surject, and is recorded as a
kernel dimension in the certificate.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .coalg import Coalgebra
from .comod import (
    ComodMorphism,
    Comodule,
    Subcomodule,
    direct_sum,
    generated_subcomodule,
    quotient_comodule,
    require_valid,
    restrict_coaction,
    validate_comodule,
    validate_morphism,
)
from .diagram import Diagram, MediatingResult, discrete, parallel_pair, span, validate_diagram
from .errors import ConeMismatch, FatalCorrectnessError, NoSolution, ShapeError
from .exactlin import RationalMatrix, hstack, image, kernel, kronecker, quotient, solve_factor
from .report import ValidationReport

I = RationalMatrix.identity


@dataclass
class CoconeResult:
    diagram: Diagram
    apex: Comodule
    legs: list[ComodMorphism]
    # q_i side by side: the surjection from the sum of the objects onto the apex
    projection: RationalMatrix
    coaction_kernel_dim: int
    certificate: ValidationReport


def _certify(d: Diagram, apex: Comodule, legs, nullity: int) -> ValidationReport:
    cert = ValidationReport("cocone certificate")
    cert.add("coaction unique", nullity == 0, detail=f"kernel dim {nullity}")
    apex_report = validate_comodule(apex)
    for check in apex_report.checks:
        cert.add(f"apex {check.name}", check.passed, check.witness)
    for i, leg in enumerate(legs):
        cert.add(f"leg {d.labels[i]} is a comodule map", validate_morphism(leg).ok, i)
    for k, a in enumerate(d.arrows):
        ok = legs[a.dst].mat @ a.morphism.mat == legs[a.src].mat
        cert.add(f"leg commutes with {a.label}", ok, k)
    return cert


def finite_colimit(d: Diagram, certify: bool = True) -> CoconeResult:
    require_valid(validate_diagram(d))
    c = d.coalgebra
    total, inj, _ = direct_sum(d.objects, c)
    # identify inj_dst(f(x)) with inj_src(x) for every arrow
    relations = [inj[a.dst].mat @ a.morphism.mat - inj[a.src].mat for a in d.arrows]
    q = quotient(total.dim, image(hstack(*relations, rows=total.dim)))
    legs_mat = [q.projection @ m.mat for m in inj]
    through = hstack(*legs_mat, rows=q.dim)
    target = hstack(*(kronecker(I(c.dim), qi) @ o.rho for qi, o in zip(legs_mat, d.objects)),
                    rows=c.dim * q.dim)
    try:
        rho, nullity = solve_factor(through, target, side="right")
    except NoSolution:
        raise FatalCorrectnessError("no coaction on the base colimit") from None
    apex = Comodule(c, q.dim, rho, "colim")
    legs = [ComodMorphism(o, apex, m) for o, m in zip(d.objects, legs_mat)]
    cert = _certify(d, apex, legs, nullity) if certify else ValidationReport("cocone certificate (skipped)")
    return CoconeResult(d, apex, legs, through, nullity, cert)


def coproduct(vs: Sequence[Comodule], coalgebra: Coalgebra | None = None, certify: bool = True
              ) -> CoconeResult:
    if coalgebra is None:
        if not vs:
            raise ValueError("empty coproduct needs an explicit coalgebra")
        coalgebra = vs[0].coalgebra
    d = discrete(coalgebra, vs)
    require_valid(validate_diagram(d))
    apex, inj, _ = direct_sum(vs, coalgebra)
    proj = hstack(*(m.mat for m in inj), rows=apex.dim)
    cert = _certify(d, apex, inj, 0) if certify else ValidationReport("cocone certificate (skipped)")
    return CoconeResult(d, apex, inj, proj, 0, cert)


def coequalizer(f: ComodMorphism, g: ComodMorphism, certify: bool = True) -> CoconeResult:
    if f.src != g.src or f.dst != g.dst:
        raise ShapeError("coequalizer needs a parallel pair")
    d = parallel_pair(f, g)
    require_valid(validate_diagram(d))
    diff = image(f.mat - g.mat)
    # image of a comodule map difference is already coinvariant; closing is a no-op check
    closure = generated_subcomodule(f.dst, diff.basis.columns())
    apex, q = quotient_comodule(f.dst, closure)
    legs = [f.then(q), q]
    proj = hstack(*(leg.mat for leg in legs))
    cert = ValidationReport("cocone certificate (skipped)")
    if certify:
        cert = _certify(d, apex, legs, 0)
        cert.add("image of f-g is coinvariant", closure.space == diff)
    return CoconeResult(d, apex, legs, proj, 0, cert)


def cokernel(f: ComodMorphism, certify: bool = True) -> CoconeResult:
    zero = ComodMorphism(f.src, f.dst, RationalMatrix.zeros(f.dst.dim, f.src.dim))
    return coequalizer(f, zero, certify)


def pushout(f: ComodMorphism, g: ComodMorphism, certify: bool = True) -> CoconeResult:
    if f.src != g.src:
        raise ShapeError("pushout needs maps with a common source")
    return finite_colimit(span(f, g), certify)


def colimit_mediating(res: CoconeResult, target: Comodule, legs: Sequence[ComodMorphism]
                      ) -> MediatingResult:
    """The unique comodule map u: apex -> target with u q_i = legs[i]."""
    d = res.diagram
    if len(legs) != len(d.objects):
        raise ConeMismatch(f"{len(legs)} legs for {len(d.objects)} objects")
    for i, leg in enumerate(legs):
        if leg.src != d.objects[i] or leg.dst != target or not validate_morphism(leg).ok:
            raise ConeMismatch(f"leg {i} is not a comodule map {d.labels[i]} -> target")
    for a in d.arrows:
        if legs[a.dst].mat @ a.morphism.mat != legs[a.src].mat:
            raise ConeMismatch(f"legs do not commute with arrow {a.label}")
    wanted = hstack(*(leg.mat for leg in legs), rows=target.dim)
    try:
        u, nullity = solve_factor(res.projection, wanted, side="right")
    except NoSolution:
        raise FatalCorrectnessError("compatible cocone does not factor through the colimit") from None
    m = ComodMorphism(res.apex, target, u)
    if not validate_morphism(m).ok:
        raise FatalCorrectnessError("mediating map is not a comodule map")
    return MediatingResult(m, nullity)


def kernel_sub(f: ComodMorphism) -> Subcomodule:
    """Kernel of a comodule map as a subcomodule of its source."""
    return restrict_coaction(f.src, kernel(f.mat))


def coimage_factorization(f: ComodMorphism) -> tuple[ComodMorphism, ComodMorphism]:
    """f = k . coim with coim: src ->> src/ker f and k: src/ker f >-> dst."""
    ker = kernel_sub(f)
    middle, coim = quotient_comodule(f.src, ker)
    try:
        k_mat, nullity = solve_factor(coim.mat, f.mat, side="right")
    except NoSolution:
        raise FatalCorrectnessError("map does not factor through its coimage") from None
    assert nullity == 0
    return coim, ComodMorphism(middle, f.dst, k_mat)
