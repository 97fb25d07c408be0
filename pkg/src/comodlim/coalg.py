"""Coalgebras given by structure constants, plus their dual algebras.

A coalgebra of dimension n is stored as ``delta`` (n^2 x n, the map C -> C(x)C)
and ``eps`` (1 x n, the map C -> Q).  The unit object is the one-dimensional
space and the unitors are identity reindexings, so the counit law reads
``kron(eps, I) @ delta == I == kron(I, eps) @ delta``.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import flint

from .exactlin import RationalMatrix, kronecker
from .report import ValidationReport, compare

I = RationalMatrix.identity


@dataclass(frozen=True)
class Coalgebra:
    dim: int
    delta: RationalMatrix
    eps: RationalMatrix
    name: str = field(default="", compare=False)

    def __repr__(self) -> str:
        return f"Coalgebra({self.name or '?'}, dim={self.dim})"


def validate_coalgebra(c: Coalgebra) -> ValidationReport:
    n = c.dim
    report = ValidationReport(f"coalgebra {c.name}".strip())
    shapes_ok = c.delta.shape == (n * n, n) and c.eps.shape == (1, n)
    report.add("shape", shapes_ok, detail="" if shapes_ok else
               f"delta {c.delta.shape}, eps {c.eps.shape} for dim {n}")
    if not shapes_ok:
        return report
    d, e = c.delta, c.eps
    compare(report, "coassociativity", kronecker(d, I(n)) @ d, kronecker(I(n), d) @ d)
    compare(report, "left counit", kronecker(e, I(n)) @ d, I(n))
    compare(report, "right counit", kronecker(I(n), e) @ d, I(n))
    return report


def _from_terms(name: str, n: int, terms, counit) -> Coalgebra:
    # terms: iterable of (target basis index, left index, right index)
    delta = flint.fmpq_mat(n * n, n)
    for k, i, j in terms:
        delta[i * n + j, k] += 1
    eps = RationalMatrix(1, n, counit)
    return Coalgebra(n, RationalMatrix._wrap(delta), eps, name)


def trivial_coalgebra() -> Coalgebra:
    return Coalgebra(1, I(1), I(1), "trivial")


def grouplike_coalgebra(k: int) -> Coalgebra:
    """Basis g_1..g_k with Delta g = g (x) g and eps g = 1."""
    if k < 1:
        raise ValueError("grouplike coalgebra needs k >= 1")
    return _from_terms(f"grouplike({k})", k, [(i, i, i) for i in range(k)], [1] * k)


def divided_power_coalgebra(k: int) -> Coalgebra:
    """Basis c_0..c_{k-1} with Delta c_m = sum_{i+j=m} c_i (x) c_j."""
    if k < 1:
        raise ValueError("divided power coalgebra needs k >= 1")
    terms = [(m, i, m - i) for m in range(k) for i in range(m + 1)]
    return _from_terms(f"divided_power({k})", k, terms, [1] + [0] * (k - 1))


def matrix_coalgebra(k: int) -> Coalgebra:
    """Matrix units e_ij (index i*k+j) with Delta e_ij = sum_m e_im (x) e_mj."""
    if k < 1:
        raise ValueError("matrix coalgebra needs k >= 1")
    terms = [(i * k + j, i * k + m, m * k + j) for i in range(k) for j in range(k) for m in range(k)]
    counit = [1 if i == j else 0 for i in range(k) for j in range(k)]
    return _from_terms(f"matrix({k})", k * k, terms, counit)


def corpus() -> dict[str, Coalgebra]:
    """The coalgebras exercised by the acceptance suites."""
    cs = [
        trivial_coalgebra(),
        grouplike_coalgebra(2),
        grouplike_coalgebra(3),
        divided_power_coalgebra(2),
        divided_power_coalgebra(3),
        matrix_coalgebra(2),
    ]
    return {c.name: c for c in cs}


@dataclass(frozen=True)
class DualAlgebra:
    """Linear dual of a coalgebra: ``mult`` is n x n^2, ``unit`` is n x 1."""

    dim: int
    mult: RationalMatrix
    unit: RationalMatrix


def dual_algebra(c: Coalgebra) -> DualAlgebra:
    # (phi_a * phi_b)(c_k) = coefficient of c_a (x) c_b in Delta c_k
    return DualAlgebra(c.dim, c.delta.T, c.eps.T)


def validate_dual_algebra(a: DualAlgebra) -> ValidationReport:
    n = a.dim
    report = ValidationReport("dual algebra")
    shapes_ok = a.mult.shape == (n, n * n) and a.unit.shape == (n, 1)
    report.add("shape", shapes_ok)
    if not shapes_ok:
        return report
    m, u = a.mult, a.unit
    compare(report, "associativity", m @ kronecker(m, I(n)), m @ kronecker(I(n), m))
    compare(report, "left unit", m @ kronecker(u, I(n)), I(n))
    compare(report, "right unit", m @ kronecker(I(n), u), I(n))
    return report
