"""The equivariant model and the canonical extension iteration.

Elements of the model are finite maps from monomials in the group
generators t_1..t_r to invariant forms.  The differential is

    d_G = (I (x) d) - boundary,      boundary = sum_j t_j (x) i_j,

note the minus sign (much of the literature uses d + boundary).  The
extension step is the degree-zero operator

    P = (I (x) d* G) boundary,

and the canonical extension of a closed invariant form alpha is the
finite Neumann series alpha_hat = alpha + P(alpha) + P^2(alpha) + ...

Before Green's operator is invoked, every contracted coefficient form is
checked for a harmonic component.  A nonzero harmonic part certifies that
the form is not exact, i.e. that extendability fails for this input; the
loop then aborts with diagnostics instead of silently projecting the
harmonic part away.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Mapping, Sequence, Tuple

from .errors import (
    BackendMismatch,
    NotClosed,
    ObstructionDetected,
    PreconditionViolated,
)
from .forms import Backend, GeneratorSpec, InvariantForm

Monomial = Tuple[int, ...]


def monomial_degree(mono: Monomial, spec: GeneratorSpec) -> int:
    """Total polynomial degree of a generator monomial."""
    return sum(e * d for e, d in zip(mono, spec.degrees))


def format_monomial(mono: Monomial) -> str:
    parts = []
    for j, e in enumerate(mono):
        if e == 1:
            parts.append("t%d" % (j + 1))
        elif e > 1:
            parts.append("t%d^%d" % (j + 1, e))
    return "1" if not parts else "*".join(parts)


class EquivariantElement:
    """A homogeneous element of the equivariant model.

    ``terms`` maps generator monomials (exponent tuples, kept in canonical
    lexicographic order) to invariant coefficient forms.  Zero coefficients
    are pruned; all terms share one total degree and one backend.
    """

    __slots__ = ("backend", "total_degree", "terms")

    def __init__(self, backend: Backend, total_degree: int,
                 terms: Mapping[Monomial, InvariantForm]):
        spec = backend.generator_spec
        clean: Dict[Monomial, InvariantForm] = {}
        for mono, form in terms.items():
            mono = tuple(int(e) for e in mono)
            if len(mono) != spec.rank:
                raise BackendMismatch(
                    "monomial rank %d does not match generator rank %d"
                    % (len(mono), spec.rank)
                )
            if form.backend is not backend:
                raise BackendMismatch("coefficient form from a different backend")
            if monomial_degree(mono, spec) + form.degree != total_degree:
                raise BackendMismatch(
                    "term %s of form degree %d breaks homogeneity (total %d)"
                    % (format_monomial(mono), form.degree, total_degree)
                )
            if backend.dimension(form.degree) == 0 or form.is_zero:
                continue
            clean[mono] = form
        self.backend = backend
        self.total_degree = total_degree
        self.terms = dict(sorted(clean.items()))

    @classmethod
    def from_form(cls, alpha: InvariantForm) -> "EquivariantElement":
        """Embed an invariant form as the degree-zero-in-t element."""
        spec = alpha.backend.generator_spec
        return cls(alpha.backend, alpha.degree, {(0,) * spec.rank: alpha})

    @property
    def is_zero(self) -> bool:
        return not self.terms

    def coefficient(self, mono: Monomial) -> InvariantForm:
        """Coefficient form of a monomial (zero form when absent)."""
        mono = tuple(mono)
        if mono in self.terms:
            return self.terms[mono]
        spec = self.backend.generator_spec
        q = self.total_degree - monomial_degree(mono, spec)
        return self.backend.zero(q)

    def base_form(self) -> InvariantForm:
        """The degree-zero-in-t part."""
        return self.coefficient((0,) * self.backend.generator_spec.rank)

    def __add__(self, other: "EquivariantElement") -> "EquivariantElement":
        if self.backend is not other.backend:
            raise BackendMismatch("elements belong to different backends")
        if self.is_zero:
            return other
        if other.is_zero:
            return self
        if self.total_degree != other.total_degree:
            raise BackendMismatch("cannot add elements of different total degree")
        terms = dict(self.terms)
        for mono, form in other.terms.items():
            terms[mono] = terms[mono] + form if mono in terms else form
        return EquivariantElement(self.backend, self.total_degree, terms)

    def __sub__(self, other: "EquivariantElement") -> "EquivariantElement":
        return self + other.scale(-1)

    def scale(self, c) -> "EquivariantElement":
        return EquivariantElement(
            self.backend,
            self.total_degree,
            {mono: form.scale(c) for mono, form in self.terms.items()},
        )

    def __mul__(self, c):
        return self.scale(c)

    __rmul__ = __mul__

    def __eq__(self, other):
        if not isinstance(other, EquivariantElement):
            return NotImplemented
        return (
            self.backend is other.backend
            and (self.is_zero and other.is_zero
                 or self.total_degree == other.total_degree)
            and self.terms == other.terms
        )

    def __repr__(self):
        names = ", ".join(format_monomial(m) for m in self.terms)
        return "EquivariantElement(degree=%d, monomials=[%s])" % (
            self.total_degree, names,
        )

    def norm(self) -> float:
        """Euclidean combination of the coefficient norms."""
        import math

        return math.sqrt(
            sum(self.backend.norm(f) ** 2 for f in self.terms.values())
        )


def _bump(mono: Monomial, j: int) -> Monomial:
    return mono[:j] + (mono[j] + 1,) + mono[j + 1:]


def partial_d(x: EquivariantElement) -> EquivariantElement:
    """The boundary operator sum_j t_j (x) i_j (total degree + 1)."""
    backend = x.backend
    spec = backend.generator_spec
    terms: Dict[Monomial, InvariantForm] = {}
    for mono, form in x.terms.items():
        for j in range(spec.rank):
            w = backend.contraction(j, form)
            if backend.dimension(w.degree) == 0 or w.is_zero:
                continue
            key = _bump(mono, j)
            terms[key] = terms[key] + w if key in terms else w
    return EquivariantElement(backend, x.total_degree + 1, terms)


def coefficient_d(x: EquivariantElement) -> EquivariantElement:
    """(I (x) d): the exterior derivative on every coefficient form."""
    backend = x.backend
    return EquivariantElement(
        backend,
        x.total_degree + 1,
        {mono: backend.d(form) for mono, form in x.terms.items()},
    )


def cartan_d(x: EquivariantElement) -> EquivariantElement:
    """The equivariant differential d_G = (I (x) d) - boundary."""
    return coefficient_d(x) - partial_d(x)


def p_operator(x: EquivariantElement) -> EquivariantElement:
    """P = (I (x) d* G) boundary; every coefficient of the result is coexact."""
    backend = x.backend
    px = partial_d(x)
    terms = {
        mono: backend.codifferential(backend.green(form))
        for mono, form in px.terms.items()
    }
    return EquivariantElement(backend, x.total_degree, terms)


@dataclass
class ExtensionReport:
    """Everything the extension loop produced, stage by stage."""

    input: InvariantForm
    terms: List[EquivariantElement]
    stage_obstructions: List[float]
    final_residual_norm: float
    terminated_at_stage: int
    status: str  # "extended" | "obstructed"
    obstruction_stage: int = None

    def alpha_hat(self) -> EquivariantElement:
        """The summed extension alpha + P(alpha) + P^2(alpha) + ..."""
        acc = self.terms[0]
        for t in self.terms[1:]:
            acc = acc + t
        return acc


def _max_harmonic_residual(backend: Backend, element: EquivariantElement):
    """Largest harmonic-component norm among the coefficients; None if all
    harmonic parts vanish (exact zero on exact backends)."""
    worst = 0.0
    clean = True
    for form in element.terms.values():
        h = backend.harmonic_projection(form)
        if backend.is_zero(h):
            continue
        clean = False
        worst = max(worst, backend.norm(h))
    return None if clean else worst


def extend(alpha: InvariantForm) -> ExtensionReport:
    """Canonical equivariant extension of a closed invariant form.

    Returns a report whose terms are alpha, P(alpha), P^2(alpha), ...;
    status is ``"extended"`` when every stage passed the obstruction check
    and the summed element is equivariantly closed, or ``"obstructed"``
    when some contracted coefficient had a nonzero harmonic part (the
    report then carries the stage and residual).

    Raises :class:`NotClosed` when d(alpha) != 0.
    """
    backend = alpha.backend
    if not backend.is_zero(backend.d(alpha)):
        raise NotClosed("extend requires a closed input form")
    current = EquivariantElement.from_form(alpha)
    terms = [current]
    obstructions: List[float] = []
    stage = 0
    status = "extended"
    obstruction_stage = None
    # hard guard; for torus generators P^m = 0 once 2m > deg(alpha)
    max_stages = alpha.degree + 2
    while stage <= max_stages:
        boundary = partial_d(current)
        if boundary.is_zero:
            obstructions.append(0.0)
            break
        residual = _max_harmonic_residual(backend, boundary)
        if residual is not None:
            obstructions.append(residual)
            status = "obstructed"
            obstruction_stage = stage
            break
        obstructions.append(0.0)
        current = EquivariantElement(
            backend,
            current.total_degree,
            {
                mono: backend.codifferential(backend.green(form))
                for mono, form in boundary.terms.items()
            },
        )
        if current.is_zero:
            break
        terms.append(current)
        stage += 1
    else:
        raise AssertionError("extension loop exceeded the termination bound")

    report = ExtensionReport(
        input=alpha,
        terms=terms,
        stage_obstructions=obstructions,
        final_residual_norm=0.0,
        terminated_at_stage=stage,
        status=status,
        obstruction_stage=obstruction_stage,
    )
    if status == "extended":
        report.final_residual_norm = cartan_d(report.alpha_hat()).norm()
    return report


def verify_extension(report: ExtensionReport) -> float:
    """Recompute |d_G(alpha_hat)| independently of the extension loop.

    Exact backends must return exactly 0.0 for a successful report.
    """
    if report.status != "extended":
        raise ValueError("verify_extension needs a successful report")
    alpha_hat = report.alpha_hat()
    residual = coefficient_d(alpha_hat) - partial_d(alpha_hat)
    return residual.norm()


def obstruction_residual(beta: InvariantForm) -> float:
    """Norm of the harmonic component of a closed form.

    Zero exactly when beta is exact (on exact backends this is an exact
    zero test).  Raises :class:`NotClosed` when d(beta) != 0.
    """
    backend = beta.backend
    if not backend.is_zero(backend.d(beta)):
        raise NotClosed("obstruction residual requires a closed form")
    return backend.norm(backend.harmonic_projection(beta))


def moment_map(omega: InvariantForm) -> InvariantForm:
    """Zero-average Hamiltonian of a closed invariant 2-form.

    For a circle action with generator 0, returns mu = d* G (i_V omega),
    the unique solution of d(mu) = i_V(omega) with vanishing harmonic
    (average) part.  Raises :class:`ObstructionDetected` when i_V(omega)
    is not exact.
    """
    backend = omega.backend
    if omega.degree != 2:
        raise ValueError("moment map requires a 2-form")
    if not backend.is_zero(backend.d(omega)):
        raise NotClosed("moment map requires a closed form")
    beta = backend.contraction(0, omega)
    h = backend.harmonic_projection(beta)
    if not backend.is_zero(h):
        raise ObstructionDetected(0, backend.norm(h))
    return backend.codifferential(backend.green(beta))


def extend_partial(a_terms: Sequence[EquivariantElement], m: int) -> EquivariantElement:
    """Continue a partial equivariant extension by one stage.

    ``a_terms[0..m]`` must satisfy d(a_0) = 0 and d(a_j) = boundary(a_{j-1});
    the next term is P(a_m).  Raises :class:`PreconditionViolated` with the
    index of the first failing relation, or :class:`ObstructionDetected`
    when boundary(a_m) has a nonzero harmonic component.
    """
    if m < 0 or m >= len(a_terms):
        raise ValueError("need terms a_0..a_m")
    backend = a_terms[0].backend
    if not coefficient_d(a_terms[0]).is_zero:
        raise PreconditionViolated(0, "d(a_0) != 0")
    for j in range(1, m + 1):
        if coefficient_d(a_terms[j]) != partial_d(a_terms[j - 1]):
            raise PreconditionViolated(j)
    boundary = partial_d(a_terms[m])
    residual = _max_harmonic_residual(backend, boundary)
    if residual is not None:
        raise ObstructionDetected(m, residual)
    return p_operator(a_terms[m])
