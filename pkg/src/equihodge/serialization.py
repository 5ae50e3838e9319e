"""Text formats for forms, meshes, and extension reports.

Three line-oriented formats, each versioned with a header line:

``equihodge-form v1``
    backend tag, degree, dimension, then sparse ``index value`` lines.
    Exact backends write values as exact fractions ``p/q``; the mesh
    backend writes ``repr`` floats, which round-trip bit for bit.

``equihodge-mesh v1``
    symmetry order, refinement level, zigzag parameter, vertex positions,
    triangles, and the symmetry permutation.

``equihodge-report v1``
    extension-report status and per-stage data followed by one embedded
    form block per monomial term.  This is the machine interface; the
    matching human-readable table lives in :func:`format_report`.

Backends are reconstructed from their tags, so a serialized form is
self-contained.  Malformed input raises :class:`FormatError` with the
offending line number.
"""

from __future__ import annotations

from fractions import Fraction
from typing import List, Tuple

import numpy as np

from .errors import FormatError
from .forms import Backend, InvariantForm
from .equivariant import ExtensionReport, EquivariantElement, format_monomial
from .mesh import SymmetricMesh, build_symmetric_sphere

FORM_HEADER = "equihodge-form v1"
MESH_HEADER = "equihodge-mesh v1"
REPORT_HEADER = "equihodge-report v1"


# -- backend tags -----------------------------------------------------------

def backend_from_tag(tag: str) -> Backend:
    """Reconstruct a backend instance from its textual tag."""
    tag = tag.strip()
    if tag.startswith("sphere:"):
        params = _parse_params(tag[len("sphere:"):], {"N", "stages"})
        from .sphere import SphereBackend

        return SphereBackend(int(params["N"]), stages=int(params.get("stages", 3)))
    if tag.startswith("torus:"):
        params = _parse_params(tag[len("torus:"):], {"n", "K", "v"})
        from .torus import TorusBackend

        v = tuple(int(x) for x in params["v"].split(":"))
        return TorusBackend(int(params["n"]), int(params["K"]), v)
    if tag.startswith("product:[") and tag.endswith("]"):
        from .product import ProductBackend

        left, right = _split_product(tag[len("product:["):-1])
        return ProductBackend(backend_from_tag(left), backend_from_tag(right))
    if tag.startswith("dec:"):
        params = _parse_params(tag[len("dec:"):], {"nsym", "level", "zigzag"})
        from .dec import DecBackend

        mesh = build_symmetric_sphere(
            int(params["nsym"]),
            int(params["level"]),
            zigzag=float(params.get("zigzag", 0.0)),
        )
        return DecBackend(mesh)
    raise FormatError("unknown backend tag %r" % tag)


def _parse_params(text: str, allowed):
    params = {}
    for piece in text.split(","):
        if "=" not in piece:
            raise FormatError("malformed backend parameter %r" % piece)
        key, value = piece.split("=", 1)
        if key not in allowed:
            raise FormatError("unknown backend parameter %r" % key)
        params[key] = value
    return params


def _split_product(body: str) -> Tuple[str, str]:
    depth = 0
    for i, ch in enumerate(body):
        if ch == "[":
            depth += 1
        elif ch == "]":
            depth -= 1
        elif ch == "|" and depth == 0:
            return body[:i], body[i + 1:]
    raise FormatError("product tag must contain a top-level '|'")


# -- forms ------------------------------------------------------------------

def serialize_form(w: InvariantForm) -> str:
    lines = [
        FORM_HEADER,
        "backend: %s" % w.backend.tag,
        "degree: %d" % w.degree,
        "dim: %d" % w.backend.dimension(w.degree),
    ]
    if w.backend.is_exact:
        for i, c in enumerate(w.coeffs):
            if c != 0:
                lines.append("%d %s" % (i, c))
    else:
        for i, c in enumerate(np.asarray(w.coeffs)):
            if c != 0.0:
                lines.append("%d %r" % (i, float(c)))
    return "\n".join(lines) + "\n"


class _Reader:
    """Line cursor that reports 1-based line numbers in errors."""

    def __init__(self, text: str, offset: int = 0):
        self.lines = text.splitlines()
        self.pos = 0
        self.offset = offset

    @property
    def lineno(self) -> int:
        return self.offset + self.pos

    def next(self, what: str) -> str:
        while self.pos < len(self.lines):
            line = self.lines[self.pos].strip()
            self.pos += 1
            if line:
                return line
        raise FormatError("unexpected end of input, expected %s" % what,
                          self.lineno)

    def peek(self):
        pos = self.pos
        while pos < len(self.lines):
            line = self.lines[pos].strip()
            if line:
                return line
            pos += 1
        return None

    def field(self, name: str) -> str:
        line = self.next("'%s:' field" % name)
        prefix = name + ":"
        if not line.startswith(prefix):
            raise FormatError("expected %r, got %r" % (prefix, line), self.lineno)
        return line[len(prefix):].strip()


def _parse_fraction(text: str, lineno: int) -> Fraction:
    try:
        value = Fraction(text)
    except (ValueError, ZeroDivisionError) as ex:
        raise FormatError("bad fraction %r (%s)" % (text, ex), lineno)
    return value


def _read_form(reader: _Reader, backend: Backend = None) -> InvariantForm:
    header = reader.next("form header")
    if header != FORM_HEADER:
        raise FormatError("expected %r, got %r" % (FORM_HEADER, header),
                          reader.lineno)
    tag = reader.field("backend")
    if backend is None:
        backend = backend_from_tag(tag)
    elif backend.tag != tag:
        raise FormatError(
            "form was written for backend %r, not %r" % (tag, backend.tag),
            reader.lineno,
        )
    try:
        degree = int(reader.field("degree"))
        dim = int(reader.field("dim"))
    except ValueError as ex:
        raise FormatError(str(ex), reader.lineno)
    if dim != backend.dimension(degree):
        raise FormatError(
            "dimension %d does not match backend degree-%d dimension %d"
            % (dim, degree, backend.dimension(degree)),
            reader.lineno,
        )
    if backend.is_exact:
        coeffs = [Fraction(0)] * dim
    else:
        coeffs = np.zeros(dim)
    while True:
        line = reader.peek()
        if line is None or not line[:1].lstrip("-").isdigit():
            break
        line = reader.next("coefficient entry")
        parts = line.split()
        if len(parts) != 2:
            raise FormatError("coefficient lines are 'index value'",
                              reader.lineno)
        try:
            idx = int(parts[0])
        except ValueError:
            raise FormatError("bad index %r" % parts[0], reader.lineno)
        if not 0 <= idx < dim:
            raise FormatError("index %d out of range [0, %d)" % (idx, dim),
                              reader.lineno)
        if backend.is_exact:
            coeffs[idx] = _parse_fraction(parts[1], reader.lineno)
        else:
            try:
                coeffs[idx] = float(parts[1])
            except ValueError:
                raise FormatError("bad float %r" % parts[1], reader.lineno)
    return backend.form(degree, coeffs)


def parse_form(text: str, backend: Backend = None) -> InvariantForm:
    """Parse a serialized form; builds the backend from the tag unless one
    is supplied (in which case the tags must agree)."""
    return _read_form(_Reader(text), backend)


# -- meshes -----------------------------------------------------------------

def serialize_mesh(mesh: SymmetricMesh) -> str:
    lines = [
        MESH_HEADER,
        "nsym: %d" % mesh.n_sym,
        "level: %d" % mesh.level,
        "zigzag: %r" % mesh.zigzag,
        "vertices: %d" % mesh.num_vertices,
    ]
    for p in mesh.positions:
        lines.append("%r %r %r" % (float(p[0]), float(p[1]), float(p[2])))
    lines.append("triangles: %d" % mesh.num_tris)
    for a, b, c in mesh.tris:
        lines.append("%d %d %d" % (a, b, c))
    lines.append("vperm: %d" % mesh.num_vertices)
    for i in mesh.vperm:
        lines.append("%d" % i)
    return "\n".join(lines) + "\n"


def parse_mesh(text: str) -> SymmetricMesh:
    reader = _Reader(text)
    header = reader.next("mesh header")
    if header != MESH_HEADER:
        raise FormatError("expected %r, got %r" % (MESH_HEADER, header),
                          reader.lineno)
    try:
        n_sym = int(reader.field("nsym"))
        level = int(reader.field("level"))
        zigzag = float(reader.field("zigzag"))
        nv = int(reader.field("vertices"))
        positions = np.empty((nv, 3))
        for i in range(nv):
            positions[i] = [float(x) for x in reader.next("vertex").split()]
        nt = int(reader.field("triangles"))
        tris = []
        for _ in range(nt):
            a, b, c = (int(x) for x in reader.next("triangle").split())
            tris.append((a, b, c))
        npm = int(reader.field("vperm"))
        if npm != nv:
            raise FormatError("vperm length %d != vertex count %d" % (npm, nv),
                              reader.lineno)
        vperm = np.array([int(reader.next("vperm entry")) for _ in range(nv)])
    except (ValueError, FormatError) as ex:
        if isinstance(ex, FormatError):
            raise
        raise FormatError(str(ex), reader.lineno)
    return SymmetricMesh(positions=positions, tris=tris, n_sym=n_sym,
                         level=level, vperm=vperm, zigzag=zigzag)


# -- reports ----------------------------------------------------------------

def serialize_report(report: ExtensionReport) -> str:
    lines = [
        REPORT_HEADER,
        "backend: %s" % report.input.backend.tag,
        "status: %s" % report.status,
        "terminated-at-stage: %d" % report.terminated_at_stage,
        "final-residual: %r" % report.final_residual_norm,
        "stage-obstructions: %s"
        % " ".join(repr(x) for x in report.stage_obstructions),
        "obstruction-stage: %s"
        % ("-" if report.obstruction_stage is None else report.obstruction_stage),
        "terms: %d" % len(report.terms),
    ]
    for stage, element in enumerate(report.terms):
        lines.append("term: %d monomials: %d" % (stage, len(element.terms)))
        for mono, form in element.terms.items():
            lines.append("monomial: %s" % ",".join(str(e) for e in mono))
            lines.append(serialize_form(form).rstrip("\n"))
    return "\n".join(lines) + "\n"


def parse_report(text: str) -> ExtensionReport:
    reader = _Reader(text)
    header = reader.next("report header")
    if header != REPORT_HEADER:
        raise FormatError("expected %r, got %r" % (REPORT_HEADER, header),
                          reader.lineno)
    backend = backend_from_tag(reader.field("backend"))
    status = reader.field("status")
    if status not in ("extended", "obstructed"):
        raise FormatError("unknown status %r" % status, reader.lineno)
    try:
        stage = int(reader.field("terminated-at-stage"))
        final_residual = float(reader.field("final-residual"))
        obs_text = reader.field("stage-obstructions")
        obstructions = [float(x) for x in obs_text.split()] if obs_text else []
        obs_stage_text = reader.field("obstruction-stage")
        obstruction_stage = None if obs_stage_text == "-" else int(obs_stage_text)
        nterms = int(reader.field("terms"))
    except ValueError as ex:
        raise FormatError(str(ex), reader.lineno)
    terms: List[EquivariantElement] = []
    for _ in range(nterms):
        line = reader.next("term header")
        if not line.startswith("term:"):
            raise FormatError("expected 'term:', got %r" % line, reader.lineno)
        try:
            nmono = int(line.split("monomials:")[1])
        except (IndexError, ValueError):
            raise FormatError("malformed term header %r" % line, reader.lineno)
        mapping = {}
        total = None
        for _ in range(nmono):
            mono_text = reader.field("monomial")
            try:
                mono = tuple(int(x) for x in mono_text.split(","))
            except ValueError:
                raise FormatError("bad monomial %r" % mono_text, reader.lineno)
            form = _read_form(reader, backend)
            mapping[mono] = form
            from .equivariant import monomial_degree

            total = monomial_degree(mono, backend.generator_spec) + form.degree
        if total is None:
            raise FormatError("term with no monomials", reader.lineno)
        terms.append(EquivariantElement(backend, total, mapping))
    if not terms:
        raise FormatError("report carries no terms", reader.lineno)
    return ExtensionReport(
        input=terms[0].base_form(),
        terms=terms,
        stage_obstructions=obstructions,
        final_residual_norm=final_residual,
        terminated_at_stage=stage,
        status=status,
        obstruction_stage=obstruction_stage,
    )


# -- human-readable rendering ----------------------------------------------

def format_report(report: ExtensionReport) -> str:
    """Fixed-width human-readable rendering of an extension report."""
    out = []
    out.append("backend              %s" % report.input.backend.tag)
    out.append("status               %s" % report.status)
    out.append("terminated at stage  %d" % report.terminated_at_stage)
    out.append("final residual       %g" % report.final_residual_norm)
    if report.obstruction_stage is not None:
        out.append("obstructed at stage  %d (residual %g)"
                   % (report.obstruction_stage,
                      report.stage_obstructions[report.obstruction_stage]))
    out.append("")
    out.append("%-6s %-14s %s" % ("stage", "monomial", "coefficient norm"))
    for stage, element in enumerate(report.terms):
        for mono, form in element.terms.items():
            out.append("%-6d %-14s %.12g"
                       % (stage, format_monomial(mono),
                          report.input.backend.norm(form)))
    return "\n".join(out) + "\n"
