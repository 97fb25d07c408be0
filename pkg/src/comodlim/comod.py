"""Left comodules over a finite-dimensional coalgebra.

A comodule V of dimension m over C (dimension n) carries ``rho`` of shape
(n*m) x m.  Row ``a*m + j`` of ``rho`` is the coefficient of ``c_a (x) v_j``.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Sequence

from .coalg import Coalgebra, DualAlgebra, dual_algebra
from .errors import InvalidStructure, MixedCoalgebras, NoSolution, NotCoinvariant, ShapeError
from .exactlin import (
    RationalMatrix,
    Subspace,
    block_diag,
    contains,
    hstack,
    kernel,
    kronecker,
    quotient,
    solve_factor,
    vstack,
)
from .report import ValidationReport, compare

I = RationalMatrix.identity
Z = RationalMatrix.zeros


@dataclass(frozen=True)
class Comodule:
    coalgebra: Coalgebra
    dim: int
    rho: RationalMatrix
    name: str = field(default="", compare=False)

    def block(self, a: int) -> RationalMatrix:
        """The m x m matrix v -> (c_a-component of rho(v))."""
        return self.rho.row_block(a * self.dim, (a + 1) * self.dim)

    def identity(self) -> "ComodMorphism":
        return ComodMorphism(self, self, I(self.dim))

    def __repr__(self) -> str:
        label = self.name or "?"
        return f"Comodule({label}, dim={self.dim}, over={self.coalgebra.name})"


@dataclass(frozen=True)
class ComodMorphism:
    src: Comodule
    dst: Comodule
    mat: RationalMatrix

    def __post_init__(self):
        if self.mat.shape != (self.dst.dim, self.src.dim):
            raise ShapeError(
                f"morphism matrix {self.mat.shape} does not fit {self.src.dim} -> {self.dst.dim}")

    def then(self, other: "ComodMorphism") -> "ComodMorphism":
        """``other`` after ``self``."""
        return ComodMorphism(self.src, other.dst, other.mat @ self.mat)

    def __repr__(self) -> str:
        return f"ComodMorphism({self.src.dim} -> {self.dst.dim})"


@dataclass(frozen=True)
class Subcomodule:
    ambient: Comodule
    space: Subspace
    restricted: Comodule
    trace: tuple[int, ...] = field(default=(), compare=False)

    @property
    def inclusion(self) -> ComodMorphism:
        return ComodMorphism(self.restricted, self.ambient, self.space.basis)

    @property
    def dim(self) -> int:
        return self.space.dim


def zero_comodule(c: Coalgebra) -> Comodule:
    return Comodule(c, 0, Z(0, 0), "0")


def same_coalgebra(*cs: Coalgebra) -> Coalgebra:
    first = cs[0]
    for c in cs[1:]:
        if c is not first and c != first:
            raise MixedCoalgebras(f"{first.name} vs {c.name}")
    return first


def validate_comodule(v: Comodule) -> ValidationReport:
    c = v.coalgebra
    n, m = c.dim, v.dim
    report = ValidationReport(f"comodule {v.name}".strip())
    ok = v.rho.shape == (n * m, m)
    report.add("shape", ok, detail="" if ok else f"rho is {v.rho.shape}, expected {(n * m, m)}")
    if not ok:
        return report
    compare(report, "coassociativity", kronecker(c.delta, I(m)) @ v.rho, kronecker(I(n), v.rho) @ v.rho)
    compare(report, "counit", kronecker(c.eps, I(m)) @ v.rho, I(m))
    return report


def validate_morphism(f: ComodMorphism) -> ValidationReport:
    report = ValidationReport("comodule morphism")
    try:
        c = same_coalgebra(f.src.coalgebra, f.dst.coalgebra)
    except MixedCoalgebras as e:
        report.add("same coalgebra", False, detail=str(e))
        return report
    lhs = kronecker(I(c.dim), f.mat) @ f.src.rho
    compare(report, "intertwines coactions", lhs, f.dst.rho @ f.mat)
    return report


def require_valid(report: ValidationReport) -> None:
    if not report.ok:
        raise InvalidStructure(str(report), report)


# --- Hom spaces -----------------------------------------------------------
#
# An unknown r x m matrix h is flattened row-major; then
#   vec(A h) = kron(A, I_m) vec(h)   and   vec(h B) = kron(I_r, B^T) vec(h).

def hom_constraints(src: Comodule, dst: Comodule) -> RationalMatrix:
    """Matrix K with K vec(h) = 0 iff h: src -> dst intertwines the coactions."""
    n = same_coalgebra(src.coalgebra, dst.coalgebra).dim
    r, m = dst.dim, src.dim
    blocks = [kronecker(I(r), src.block(a).T) - kronecker(dst.block(a), I(m)) for a in range(n)]
    return vstack(*blocks, cols=r * m)


def unvec(v: RationalMatrix, rows: int, cols: int) -> RationalMatrix:
    return RationalMatrix(rows, cols, v.entries())


def hom_space(src: Comodule, dst: Comodule) -> list[RationalMatrix]:
    """A basis of Hom(src, dst) as matrices."""
    ker = kernel(hom_constraints(src, dst))
    return [unvec(b, dst.dim, src.dim) for b in ker.basis.columns()]


def random_morphism(src: Comodule, dst: Comodule, rng: random.Random, scale: int = 2) -> ComodMorphism:
    basis = hom_space(src, dst)
    mat = Z(dst.dim, src.dim)
    for b in basis:
        mat = mat + b.scale(rng.randint(-scale, scale))
    return ComodMorphism(src, dst, mat)


# --- cofree comodules -----------------------------------------------------

def cofree(c: Coalgebra, x_dim: int) -> tuple[Comodule, RationalMatrix]:
    """C (x) X with coaction Delta (x) Id and the counit projection p onto X."""
    if x_dim < 0:
        raise ValueError("negative dimension")
    rho = kronecker(c.delta, I(x_dim))
    p = kronecker(c.eps, I(x_dim))
    return Comodule(c, c.dim * x_dim, rho, f"CF({x_dim})"), p


def cofree_factorize(v: Comodule, f: RationalMatrix, cf: Comodule, p: RationalMatrix
                     ) -> tuple[ComodMorphism, int]:
    """Lift a linear map f: V -> X to the unique comodule map f': V -> C (x) X.

    Returns the lift and the dimension of {h : h comodule map, p h = 0}, which
    is the uniqueness certificate (0 when the lift is unique).
    """
    n = v.coalgebra.dim
    if f.shape != (p.rows, v.dim):
        raise ShapeError(f"map {f.shape} does not go from dim {v.dim} to dim {p.rows}")
    lifted = ComodMorphism(v, cf, kronecker(I(n), f) @ v.rho)
    constraints = vstack(hom_constraints(v, cf), kronecker(p, I(v.dim)))
    return lifted, kernel(constraints).dim


# --- sums, components, subcomodules ---------------------------------------

def direct_sum(vs: Sequence[Comodule], coalgebra: Coalgebra | None = None
               ) -> tuple[Comodule, list[ComodMorphism], list[ComodMorphism]]:
    if not vs:
        if coalgebra is None:
            raise ValueError("empty direct sum needs an explicit coalgebra")
        z = zero_comodule(coalgebra)
        return z, [], []
    c = same_coalgebra(*(v.coalgebra for v in vs), *([coalgebra] if coalgebra else []))
    # block a of the sum's coaction is the block-diagonal of the summands' blocks
    blocks = [block_diag(*(v.block(a) for v in vs)) for a in range(c.dim)]
    total = sum(v.dim for v in vs)
    s = Comodule(c, total, vstack(*blocks, cols=total), "+".join(v.name or "?" for v in vs))
    injections, projections = [], []
    offset = 0
    for v in vs:
        idx = range(offset, offset + v.dim)
        inc = I(total).submatrix(range(total), idx)
        injections.append(ComodMorphism(v, s, inc))
        projections.append(ComodMorphism(s, v, inc.T))
        offset += v.dim
    return s, injections, projections


def components(c: Coalgebra, w: RationalMatrix, y_dim: int) -> Subspace:
    """Smallest U inside Y with w in C (x) U."""
    if w.rows != c.dim * y_dim:
        raise ShapeError(f"vector of length {w.rows} is not in C(x)Y with dim Y = {y_dim}")
    rows = [w.submatrix(range(a * y_dim, (a + 1) * y_dim), range(w.cols)) for a in range(c.dim)]
    return Subspace.span(hstack(*rows, rows=y_dim))


def generated_subcomodule(v: Comodule, seeds: Sequence[RationalMatrix]) -> Subcomodule:
    """Least coinvariant subspace containing ``seeds``; ``trace`` records the growth."""
    m = v.dim
    space = Subspace.of_vectors(m, list(seeds))
    trace = [space.dim]
    while True:
        image = v.rho @ space.basis
        pieces = [image.row_block(a * m, (a + 1) * m) for a in range(v.coalgebra.dim)]
        grown = Subspace.span(hstack(space.basis, *pieces))
        if grown == space:
            break
        space = grown
        trace.append(space.dim)
    sub = restrict_coaction(v, space)
    return Subcomodule(v, space, sub.restricted, tuple(trace))


def restrict_coaction(v: Comodule, s: Subspace) -> Subcomodule:
    """The subcomodule carried by ``s``; raises NotCoinvariant otherwise."""
    if s.ambient_dim != v.dim:
        raise ShapeError(f"subspace of dim-{s.ambient_dim} space inside a dim-{v.dim} comodule")
    n = v.coalgebra.dim
    b = s.basis
    through = kronecker(I(n), b)
    try:
        r, _ = solve_factor(through, v.rho @ b)
    except NoSolution:
        target = Subspace.span(through)
        for j, col in enumerate(b.columns()):
            if not contains(target, Subspace.span(v.rho @ col)):
                witness = [x for row in col.to_rows() for x in row]
                raise NotCoinvariant(
                    f"rho(basis vector {j}) leaves C(x)span; witness {[str(x) for x in witness]}",
                    witness) from None
        raise  # unreachable: some column must fail
    restricted = Comodule(v.coalgebra, s.dim, r, f"{v.name}|sub" if v.name else "")
    return Subcomodule(v, s, restricted)


def quotient_comodule(v: Comodule, s: Subcomodule) -> tuple[Comodule, ComodMorphism]:
    """V / S with the unique coaction making the projection a comodule map."""
    if s.ambient != v:
        raise InvalidStructure("subcomodule does not live in this comodule")
    n = v.coalgebra.dim
    q = quotient(v.dim, s.space)
    target = kronecker(I(n), q.projection) @ v.rho
    try:
        rho_q, nullity = solve_factor(q.projection, target, side="right")
    except NoSolution:
        raise InvalidStructure("subspace is not coinvariant, no induced coaction") from None
    if nullity:
        raise InvalidStructure("induced coaction is not unique")
    qc = Comodule(v.coalgebra, q.dim, rho_q, f"{v.name}/sub" if v.name else "")
    return qc, ComodMorphism(v, qc, q.projection)


# --- dual-module oracle ---------------------------------------------------
#
# A left C-comodule is a right module over the dual algebra C*:
#   v . phi_a = (c_a-component of rho(v)).
# The action is stored as an m x (m*n) matrix on V (x) C*.

def to_dual_module(v: Comodule) -> RationalMatrix:
    n, m = v.coalgebra.dim, v.dim
    rho = v.rho.entries()
    act = [0] * (m * m * n)
    for a in range(n):
        for j in range(m):
            for k in range(m):
                act[j * (m * n) + k * n + a] = rho[(a * m + j) * m + k]
    return RationalMatrix(m, m * n, act)


def from_dual_module(c: Coalgebra, action: RationalMatrix) -> Comodule:
    n, m = c.dim, action.rows
    if action.cols != m * n:
        raise ShapeError(f"action of shape {action.shape} does not fit dim {m} over C of dim {n}")
    act = action.entries()
    rho = [0] * (n * m * m)
    for a in range(n):
        for j in range(m):
            for k in range(m):
                rho[(a * m + j) * m + k] = act[j * (m * n) + k * n + a]
    return Comodule(c, m, RationalMatrix(n * m, m, rho))


def validate_dual_module(alg: DualAlgebra, action: RationalMatrix) -> ValidationReport:
    n, m = alg.dim, action.rows
    report = ValidationReport("dual module")
    compare(report, "associativity",
            action @ kronecker(action, I(n)), action @ kronecker(I(m), alg.mult))
    compare(report, "unit", action @ kronecker(I(m), alg.unit), I(m))
    return report


def validate_dual_hom(f: ComodMorphism) -> ValidationReport:
    """Module-homomorphism check for the dual actions of src and dst."""
    n = f.src.coalgebra.dim
    report = ValidationReport("dual module homomorphism")
    compare(report, "commutes with action",
            f.mat @ to_dual_module(f.src), to_dual_module(f.dst) @ kronecker(f.mat, I(n)))
    return report


def dual_oracle_ok(v: Comodule) -> bool:
    return validate_dual_module(dual_algebra(v.coalgebra), to_dual_module(v)).ok


# --- random generation ----------------------------------------------------

def _random_vector(rng: random.Random, dim: int) -> RationalMatrix:
    vals = [0] * dim
    for i in rng.sample(range(dim), min(dim, rng.randint(1, 3))):
        vals[i] = rng.choice([-2, -1, 1, 2])
    return RationalMatrix.column_vector(vals)


def _random_change_of_basis(rng: random.Random, m: int) -> RationalMatrix:
    perm = list(range(m))
    rng.shuffle(perm)
    lower = [[1 if i == j else (rng.choice([-1, 0, 0, 1]) if j < i else 0) for j in range(m)]
             for i in range(m)]
    return RationalMatrix.from_rows([lower[perm[i]] for i in range(m)], cols=m)


def _grow(rng, cf: Comodule, start: Subspace, cap: int, attempts: int) -> Subcomodule | None:
    best = None
    space = start
    for _ in range(attempts):
        seeds = space.basis.columns() + [_random_vector(rng, cf.dim)]
        g = generated_subcomodule(cf, seeds)
        if g.dim <= cap and g.dim > space.dim:
            space = g.space
            best = g
            if space.dim == cap:
                break
    return best


def random_comodule(c: Coalgebra, target_dim: int, seed: int) -> Comodule:
    """Seeded random comodule of dimension at most ``target_dim`` where possible.

    Built as a subquotient of a cofree comodule, so it is valid by
    construction; the actual dimension may be smaller than requested, or larger
    when no nonzero comodule of dimension <= target_dim was found.
    """
    rng = random.Random(seed)
    if target_dim <= 0:
        return zero_comodule(c)
    chosen: Subcomodule | None = None
    smallest: Subcomodule | None = None
    k0 = -(-target_dim // c.dim) + rng.randint(0, 1)
    for k in range(k0, k0 + 3):
        cf, _ = cofree(c, k)
        extra = rng.choice([0, 0, 1, 2])
        g = _grow(rng, cf, Subspace.zero(cf.dim), target_dim + extra, 4 * target_dim + 6)
        if g is None:
            one = generated_subcomodule(cf, [_random_vector(rng, cf.dim)])
            if one.dim and (smallest is None or one.dim < smallest.dim):
                smallest = one
            continue
        chosen = g
        break
    if chosen is None:
        result = smallest.restricted if smallest else zero_comodule(c)
    else:
        result = chosen.restricted
        if result.dim > target_dim or (result.dim > 1 and rng.random() < 0.3):
            for _ in range(8):
                coeffs = _random_vector(rng, result.dim)
                k_sub = generated_subcomodule(result, [coeffs])
                left = result.dim - k_sub.dim
                if 1 <= left <= target_dim:
                    result, _ = quotient_comodule(result, k_sub)
                    break
            if result.dim > target_dim:
                g = _grow(rng, cofree(c, target_dim)[0], Subspace.zero(c.dim * target_dim),
                          target_dim, 4 * target_dim + 6)
                if g is not None:
                    result = g.restricted
    t = _random_change_of_basis(rng, result.dim)
    rho = kronecker(I(c.dim), t.inverse()) @ result.rho @ t
    return Comodule(c, result.dim, rho, f"rand({c.name},{target_dim},{seed})")
