"""Evaluation of parsed sessions."""

from __future__ import annotations

import dataclasses
from dataclasses import dataclass, field

from .. import coalg as coalg_mod
from ..coalg import Coalgebra, validate_coalgebra
from ..colimits import (
    CoconeResult,
    coequalizer,
    coimage_factorization,
    cokernel,
    colimit_mediating,
    coproduct,
    finite_colimit,
    pushout,
)
from ..comod import (
    ComodMorphism,
    Comodule,
    cofree,
    quotient_comodule,
    random_comodule,
    restrict_coaction,
    validate_comodule,
    validate_morphism,
)
from ..diagram import Arrow, Diagram, validate_diagram
from ..errors import (
    CertificateFailure,
    ComodError,
    FatalCorrectnessError,
)
from ..exactlin import RationalMatrix, Subspace
from ..limits import (
    ConeResult,
    comodule_limit,
    direct_sum_comparison,
    equalizer,
    maximality_witnesses,
    mediating_morphism,
    product,
    pullback,
    rational_realization,
)
from ..report import ValidationReport
from .jsonio import certificate_block, emit_json, matrix_literal
from .syntax import (
    CoalgebraDef,
    ComoduleDef,
    ConstructionDef,
    DiagramDef,
    Directive,
    Matrix,
    Mediate,
    MorphismDef,
    ParseError,
    Session,
    SourceSpan,
    parse_session,
)

EXIT_OK, EXIT_INVALID, EXIT_CERTIFICATE, EXIT_FATAL = 0, 1, 2, 3


class EvalError(ComodError):
    def __init__(self, message: str, span: SourceSpan, exit_code: int = EXIT_INVALID):
        super().__init__(f"{span}: {message}")
        self.span = span
        self.exit_code = exit_code


@dataclass
class Coimage:
    """Result of ``colimit NAME = coimage(f)``: f = k . coim through ``apex``."""

    f: ComodMorphism
    coim: ComodMorphism
    k: ComodMorphism
    certificate: ValidationReport

    @property
    def apex(self) -> Comodule:
        return self.coim.dst

    def to_json(self) -> dict:
        return {
            "kind": "coimage",
            "apex": {"coalgebra": self.apex.coalgebra.name, "dim": self.apex.dim,
                     "rho": matrix_literal(self.apex.rho)},
            "coim": matrix_literal(self.coim.mat),
            "k": matrix_literal(self.k.mat),
            "certificate": certificate_block(self.certificate),
        }


@dataclass
class Entry:
    directive: str
    name: str | None
    span: SourceSpan
    ok: bool = True
    summary: dict = field(default_factory=dict)
    certificate: dict | None = None
    json: str | None = None
    error: str | None = None
    exit_code: int = EXIT_OK

    def to_dict(self) -> dict:
        d = {"directive": self.directive, "name": self.name, "line": self.span.line,
             "column": self.span.column, "ok": self.ok, "summary": self.summary}
        if self.certificate is not None:
            d["certificate"] = self.certificate
        if self.json is not None:
            d["json"] = self.json
        if self.error is not None:
            d["error"] = self.error
        return d


@dataclass
class Transcript:
    entries: list[Entry] = field(default_factory=list)
    bindings: dict = field(default_factory=dict)

    @property
    def exit_code(self) -> int:
        return max((e.exit_code for e in self.entries), default=EXIT_OK)

    def to_dict(self) -> dict:
        return {"exit_code": self.exit_code, "entries": [e.to_dict() for e in self.entries]}


def _matrix(m: Matrix, shape: tuple[int, int], span: SourceSpan) -> RationalMatrix:
    rows = m.rows
    if not rows:
        mat = RationalMatrix.zeros(0, shape[1])
    else:
        if any(len(r) != len(rows[0]) for r in rows):
            raise EvalError("ragged matrix literal", m.span)
        mat = RationalMatrix.from_rows(rows)
    if mat.shape != shape:
        if mat.rows * mat.cols == 0 and shape[0] * shape[1] == 0:
            return RationalMatrix.zeros(*shape)
        raise EvalError(f"matrix is {mat.shape[0]}x{mat.shape[1]}, expected {shape[0]}x{shape[1]}", m.span)
    return mat


_CONSTRUCTIVE = ("limit", "colimit", "verify", "mediate", "emit")


def _refs(d: Directive) -> set[str]:
    if isinstance(d, ComoduleDef):
        return {d.coalgebra or "", d.base or ""} - {""}
    if isinstance(d, MorphismDef):
        return {d.src, d.dst}
    if isinstance(d, DiagramDef):
        return set(d.objects) | {a.morphism for a in d.arrows}
    return set()


class Runner:
    def __init__(self, certify: bool = True, keep_going: bool = False, definitions_only: bool = False):
        self.certify = certify
        self.keep_going = keep_going
        self.definitions_only = definitions_only
        self.env: dict = {}

    # lookups
    def comodule(self, name: str) -> Comodule:
        v = self.env[name]
        apex = v if isinstance(v, Comodule) else v.apex
        return apex if apex.name == name else dataclasses.replace(apex, name=name)

    def run(self, session: Session) -> Transcript:
        t = Transcript(bindings=self.env)
        skipped: set[str] = set()
        for d in session.directives:
            if self.definitions_only and (d.kind in _CONSTRUCTIVE or skipped & _refs(d)):
                skipped.update(n for n in (d.name, getattr(d, "bind", None)) if n)
                continue
            entry = Entry(d.kind, d.name, d.span)
            try:
                self.execute(d, entry)
            except EvalError as e:
                entry.ok, entry.error, entry.exit_code = False, str(e), e.exit_code
            except FatalCorrectnessError as e:
                entry.ok, entry.error, entry.exit_code = False, f"{d.span}: fatal: {e}", EXIT_FATAL
            except CertificateFailure as e:
                entry.ok, entry.error, entry.exit_code = False, f"{d.span}: {e}", EXIT_CERTIFICATE
            except (ComodError, ValueError) as e:
                entry.ok, entry.error, entry.exit_code = False, f"{d.span}: {e}", EXIT_INVALID
            t.entries.append(entry)
            if not entry.ok and not self.keep_going:
                break
        return t

    def _require(self, report: ValidationReport, span: SourceSpan) -> None:
        if not report.ok:
            raise EvalError(str(report), span)

    def _certificate(self, report: ValidationReport, entry: Entry) -> None:
        entry.certificate = certificate_block(report)
        if self.certify and not report.ok:
            failed = ", ".join(c.name for c in report.failures())
            raise CertificateFailure(f"certificate failed: {failed}")

    def execute(self, d: Directive, entry: Entry) -> None:
        if isinstance(d, CoalgebraDef):
            self.env[d.name] = value = self.make_coalgebra(d)
            entry.summary = {"dim": value.dim}
        elif isinstance(d, ComoduleDef):
            self.env[d.name] = value = self.make_comodule(d)
            entry.summary = {"dim": value.dim, "coalgebra": value.coalgebra.name}
        elif isinstance(d, MorphismDef):
            src, dst = self.comodule(d.src), self.comodule(d.dst)
            f = ComodMorphism(src, dst, _matrix(d.mat, (dst.dim, src.dim), d.span))
            self._require(validate_morphism(f), d.span)
            self.env[d.name] = f
            entry.summary = {"src": d.src, "dst": d.dst, "rank": f.mat.rank()}
        elif isinstance(d, DiagramDef):
            self.env[d.name] = value = self.make_diagram(d)
            entry.summary = {"objects": len(value.objects), "arrows": len(value.arrows)}
        elif isinstance(d, ConstructionDef):
            value = self.construct(d, entry)
            self.env[d.name] = value
        elif isinstance(d, Mediate):
            self.mediate(d, entry)
        elif d.kind == "verify":
            self.verify(d.name, entry)
        elif d.kind == "emit":
            entry.json = emit_json(self.env[d.name])
        else:  # pragma: no cover - the parser only produces the kinds above
            raise EvalError(f"unknown directive {d.kind}", d.span)

    def make_coalgebra(self, d: CoalgebraDef) -> Coalgebra:
        if d.form == "explicit":
            n = d.dim
            c = Coalgebra(n, _matrix(d.delta, (n * n, n), d.span), _matrix(d.eps, (1, n), d.span), d.name)
        elif d.form == "trivial":
            c = dataclasses.replace(coalg_mod.trivial_coalgebra(), name=d.name)
        else:
            if d.param < 1:
                raise EvalError(f"{d.form} needs a positive parameter", d.span)
            build = {"grouplike": coalg_mod.grouplike_coalgebra,
                     "divided_power": coalg_mod.divided_power_coalgebra,
                     "matrix": coalg_mod.matrix_coalgebra}[d.form]
            c = dataclasses.replace(build(d.param), name=d.name)
        self._require(validate_coalgebra(c), d.span)
        return c

    def make_comodule(self, d: ComoduleDef) -> Comodule:
        if d.form == "explicit":
            c = self.env[d.coalgebra]
            v = Comodule(c, d.dim, _matrix(d.rho, (c.dim * d.dim, d.dim), d.span), d.name)
            self._require(validate_comodule(v), d.span)
            return v
        if d.form == "cofree":
            v, _ = cofree(self.env[d.coalgebra], d.ints[0])
            return dataclasses.replace(v, name=d.name)
        if d.form == "random":
            v = random_comodule(self.env[d.coalgebra], d.ints[0], d.ints[1])
            return dataclasses.replace(v, name=d.name)
        base = self.comodule(d.base)
        rows = d.vectors.rows
        vectors = _matrix(d.vectors, (base.dim, len(rows[0]) if rows else 0), d.vectors.span)
        try:
            sub = restrict_coaction(base, Subspace.span(vectors))
        except ComodError as e:
            raise EvalError(str(e), d.span) from None
        if d.form == "sub":
            return dataclasses.replace(sub.restricted, name=d.name)
        q, _ = quotient_comodule(base, sub)
        return dataclasses.replace(q, name=d.name)

    def make_diagram(self, d: DiagramDef) -> Diagram:
        objs = [self.comodule(o) for o in d.objects]
        arrows = []
        for a in d.arrows:
            f = self.env[a.morphism]
            s, t = d.objects.index(a.src), d.objects.index(a.dst)
            if f.src != objs[s] or f.dst != objs[t]:
                raise EvalError(f"morphism {a.morphism} does not run {a.src} -> {a.dst}", a.span)
            arrows.append(Arrow(a.morphism, s, t, ComodMorphism(objs[s], objs[t], f.mat)))
        if not objs:
            raise EvalError("a diagram needs at least one object", d.span)
        diag = Diagram(objs[0].coalgebra, objs, arrows, list(d.objects))
        self._require(validate_diagram(diag), d.span)
        return diag

    def construct(self, d: ConstructionDef, entry: Entry):
        args = [self.env[a] for a in d.args]
        cert = self.certify
        if d.op in ("product", "coproduct"):
            objs = [self.comodule(a) for a in d.args]
            if not objs:
                raise EvalError(f"empty {d.op} needs at least one comodule to fix the coalgebra", d.span)
            value = product(objs, certify=cert) if d.op == "product" else coproduct(objs, certify=cert)
            if d.op == "product" and cert:
                phi, psi, ok = direct_sum_comparison(value)
                value.certificate.add("comparison with direct sum is an isomorphism", ok)
        elif d.op in ("limit", "colimit"):
            value = comodule_limit(args[0], cert) if d.op == "limit" else finite_colimit(args[0], cert)
        elif d.op == "equalizer":
            value = equalizer(*args, certify=cert)
        elif d.op == "pullback":
            value = pullback(*args, certify=cert)
        elif d.op == "coequalizer":
            value = coequalizer(*args, certify=cert)
        elif d.op == "cokernel":
            value = cokernel(args[0], certify=cert)
        elif d.op == "pushout":
            value = pushout(*args, certify=cert)
        elif d.op == "coimage":
            value = self.coimage(args[0])
        else:  # pragma: no cover
            raise EvalError(f"unknown construction {d.op}", d.span)
        entry.summary = {"op": d.op, "apex_dim": value.apex.dim}
        if isinstance(value, ConeResult):
            entry.summary["trace"] = list(value.trace)
        self._certificate(value.certificate, entry)
        return value

    def coimage(self, f: ComodMorphism) -> Coimage:
        coim, k = coimage_factorization(f)
        cert = ValidationReport("coimage certificate")
        if self.certify:
            cert.add("f = k . coim", k.mat @ coim.mat == f.mat)
            cert.add("coim is surjective", coim.mat.rank() == coim.dst.dim)
            cert.add("k is injective", k.mat.rank() == k.src.dim)
            cert.add("middle object is a comodule", validate_comodule(coim.dst).ok)
            cert.add("coim is a comodule map", validate_morphism(coim).ok)
            cert.add("k is a comodule map", validate_morphism(k).ok)
        return Coimage(f, coim, k, cert)

    def mediate(self, d: Mediate, entry: Entry) -> None:
        res = self.env[d.name]
        u = self.comodule(d.apex)
        legs = [self.env[x] for x in d.legs]
        if isinstance(res, ConeResult):
            legs = [ComodMorphism(u, leg.dst, leg.mat) for leg in legs]
            m = mediating_morphism(u, legs, res)
        elif isinstance(res, CoconeResult):
            legs = [ComodMorphism(leg.src, u, leg.mat) for leg in legs]
            m = colimit_mediating(res, u, legs)
        else:
            raise EvalError(f"{d.name} has no universal property to query", d.span)
        entry.summary = {"map": matrix_literal(m.map.mat), "uniqueness_kernel_dim": m.uniqueness_kernel_dim}
        if m.uniqueness_kernel_dim != 0:
            raise CertificateFailure("mediating map is not unique")
        if d.bind:
            mapped = m.map
            if isinstance(res, ConeResult):
                mapped = ComodMorphism(u, self.comodule(d.name), m.map.mat)
            else:
                mapped = ComodMorphism(self.comodule(d.name), u, m.map.mat)
            self.env[d.bind] = mapped

    def verify(self, name: str, entry: Entry) -> None:
        value = self.env[name]
        if isinstance(value, Coalgebra):
            report = validate_coalgebra(value)
        elif isinstance(value, Comodule):
            report = validate_comodule(value)
        elif isinstance(value, ComodMorphism):
            report = validate_morphism(value)
        elif isinstance(value, Diagram):
            report = validate_diagram(value)
        elif isinstance(value, ConeResult):
            report = comodule_limit(value.diagram, certify=True).certificate
            _, realized = rational_realization(value)
            report.add("realization in the base limit is a comodule", validate_comodule(realized).ok)
            report.add("maximality witnesses", all(maximality_witnesses(value)))
        elif isinstance(value, CoconeResult):
            report = finite_colimit(value.diagram, certify=True).certificate
        elif isinstance(value, Coimage):
            report = self.coimage(value.f).certificate
        else:  # pragma: no cover
            raise EvalError(f"cannot verify {name}", entry.span)
        entry.summary = {"checks": len(report.checks)}
        entry.certificate = certificate_block(report)
        if not report.ok:
            raise CertificateFailure(f"verification of {name} failed")


def run_session(session: Session, certify: bool = True, keep_going: bool = False) -> Transcript:
    return Runner(certify, keep_going).run(session)


def run_text(text: str, certify: bool = True, keep_going: bool = False) -> Transcript:
    """Parse and run; parse errors become a single failed entry with exit code 1."""
    try:
        session = parse_session(text)
    except ParseError as e:
        t = Transcript()
        t.entries.append(Entry("parse", None, e.span, ok=False, error=str(e), exit_code=EXIT_INVALID))
        return t
    return run_session(session, certify, keep_going)
