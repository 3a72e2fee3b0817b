"""Rule engine deciding F+ membership and the Baum-Connes conclusion.

The engine only ever proves or abstains.  Facts it cannot decide (torsion
freeness of an extension, BC for a quotient, fiber-type membership) enter as
user-asserted flags and are echoed in the report as ASSERTED.

Rules, applied bottom-up over the descriptor tree:

* R1  primitive one-relator group -> F+
* R2  primitive link group -> F+
* R3  pure braid group P_n -> F+
* R4  asserted fiber-type arrangement group -> F+
* R5  H1-trivial semidirect product of F+ groups -> F+
* R6  torsion-free extension of an F+ group by a BC quotient -> BC
* R7  F+ -> BC
* R8  iterated H1-trivial semidirect product over an admissible base -> BC
* R9  torsion-free extension of an R8 group by a BC quotient -> BC
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import reduce as fold
from typing import Union

from .lie import LyndonWord, ZeroImage, is_proper_power, lie_coordinates
from .linkdiag import LinkingDiagram, LinkVerdict, is_primitive_link
from .magnus import DEFAULT_WEIGHT_CAP, TrivialWord, WeightExceedsCap, weight
from .words import Presentation, exponent_sums


class DescriptorError(ValueError):
    """Malformed group descriptor."""


class Verdict(str, enum.Enum):
    BC_HOLDS = "BC_HOLDS"
    IN_F_PLUS = "IN_F_PLUS"
    NOT_ESTABLISHED = "NOT_ESTABLISHED"


class Reason(str, enum.Enum):
    GCD_ONE = "GCD_ONE"
    PROPER_POWER = "PROPER_POWER"
    ZERO_IMAGE = "ZERO_IMAGE"
    WEIGHT_CAP_EXCEEDED = "WEIGHT_CAP_EXCEEDED"


ANCHORS = {
    "R1": "F+ examples: primitive one-relator groups",
    "R2": "F+ examples: primitive link groups",
    "R3": "F+ examples: Artin pure braid groups",
    "R4": "F+ examples: fiber-type arrangement groups",
    "R5": "F+ closure under H1-trivial semidirect products",
    "R6": "torsion-free extensions of F+ groups with BC quotient satisfy BC",
    "R7": "LHETH groups satisfy BC; F+ is contained in LHETH",
    "R8": "iterated H1-trivial semidirect products of F+ groups over an admissible base",
    "R9": "torsion-free extensions of iterated H1-trivial semidirect products satisfy BC",
    "Q-FREE-PRODUCT": "free products of finitely many F+ groups are admissible bases",
    "Q-ASSERTED": "admissible base accepted by user assertion",
    "ERROR": "evidence could not be computed; abstaining",
}

FULL_BRAID_TORSION_FREE = "full braid groups are torsion-free (classical)"
FINITE_GROUPS_BC = "finite groups satisfy BC"
USER = "user"


# -- descriptors -------------------------------------------------------------

Matrix = tuple[tuple[int, ...], ...]


@dataclass(frozen=True)
class OneRelator:
    presentation: Presentation


@dataclass(frozen=True)
class Link:
    diagram: LinkingDiagram


@dataclass(frozen=True)
class PureBraid:
    n: int


@dataclass(frozen=True)
class FullBraid:
    n: int


@dataclass(frozen=True)
class FiberType:
    name: str
    asserted: bool
    h1_rank: int | None = None


@dataclass(frozen=True)
class H1TrivialSemidirect:
    """``factors[0] x| (factors[1] x| (... x| factors[-1]))``.

    ``actions[i]`` is the matrix by which the rest of the product acts on the
    abelianization of ``factors[i]``.
    """

    factors: tuple[Descriptor, ...]
    actions: tuple[Matrix, ...]


@dataclass(frozen=True)
class Extension:
    """``1 -> base -> G -> quotient -> 1`` with asserted properties."""

    base: Descriptor
    quotient_bc: bool
    torsion_free: bool
    quotient_label: str = ""
    h1_rank: int | None = None
    quotient_bc_source: str = USER
    torsion_free_source: str = USER


@dataclass(frozen=True)
class FreeProduct:
    factors: tuple[Descriptor, ...]


@dataclass(frozen=True)
class AssertedGroup:
    """A group asserted to be an admissible base for iterated semidirect products."""

    label: str
    asserted: bool
    h1_rank: int | None = None


Descriptor = Union[
    OneRelator, Link, PureBraid, FullBraid, FiberType,
    H1TrivialSemidirect, Extension, FreeProduct, AssertedGroup,
]


def full_braid(n: int) -> Extension:
    """``1 -> P_n -> B_n -> S_n -> 1`` with the classical facts asserted."""
    return Extension(
        PureBraid(n),
        quotient_bc=True,
        torsion_free=True,
        quotient_label=f"S_{n}",
        h1_rank=1,
        quotient_bc_source=FINITE_GROUPS_BC,
        torsion_free_source=FULL_BRAID_TORSION_FREE,
    )


def expand_shortcuts(g: Descriptor) -> Descriptor:
    if isinstance(g, FullBraid):
        if g.n < 2:
            raise DescriptorError("full_braid needs n >= 2")
        return full_braid(g.n)
    return g


# -- one-relator evidence ----------------------------------------------------


@dataclass(frozen=True)
class PrimitivityVerdict:
    primitive: bool
    reason: Reason
    weight: int | None = None
    coords: tuple[int, ...] | None = None
    basis: tuple[LyndonWord, ...] | None = None
    coords_gcd: int | None = None
    notes: tuple[str, ...] = ()


def check_one_relator(p: Presentation, cap: int = DEFAULT_WEIGHT_CAP) -> PrimitivityVerdict:
    """Decide primitivity of ``p``: the relator's leading Lie layer has content 1.

    A relator that stays trivial in every layer up to ``cap`` yields an
    abstaining verdict, not a refutation.
    """
    try:
        n, layer = weight(p.relator, cap)
    except WeightExceedsCap:
        return PrimitivityVerdict(
            False,
            Reason.WEIGHT_CAP_EXCEEDED,
            notes=(f"no nonzero layer up to degree {cap}; retry with a larger cap",),
        )
    vec = lie_coordinates(layer)
    g = vec.content()
    notes = []
    if n == 1:
        nonzero = [abs(e) for e in exponent_sums(p.relator) if e]
        lcm = fold(lambda a, b: a * b // math.gcd(a, b), nonzero, 1)
        if g == 1 and lcm != 1:
            notes.append(
                f"exponent sums have gcd 1 but lcm {lcm}; primitive by the gcd criterion, "
                "which is what decides non-proper-powers"
            )
    try:
        proper = is_proper_power(vec)
    except ZeroImage:
        return PrimitivityVerdict(False, Reason.ZERO_IMAGE, n, vec.coords, tuple(vec.basis), 0)
    return PrimitivityVerdict(
        not proper,
        Reason.PROPER_POWER if proper else Reason.GCD_ONE,
        n,
        vec.coords,
        tuple(vec.basis),
        g,
        tuple(notes),
    )


# -- reports -----------------------------------------------------------------


@dataclass(frozen=True)
class ChainStep:
    rule: str
    subject: str
    justification: str
    anchor: str
    asserted: tuple[str, ...] = ()


@dataclass(frozen=True)
class Assertion:
    subject: str
    flag: str
    value: bool
    source: str


@dataclass(frozen=True)
class Evidence:
    subject: str
    verdict: Union[PrimitivityVerdict, LinkVerdict]


@dataclass(frozen=True)
class CertReport:
    verdict: Verdict
    in_f_plus: bool
    chain: tuple[ChainStep, ...]
    assertions: tuple[Assertion, ...] = ()
    evidence: tuple[Evidence, ...] = ()
    notes: tuple[str, ...] = ()

    @property
    def established(self) -> bool:
        return self.verdict is not Verdict.NOT_ESTABLISHED


# -- H1 ranks ----------------------------------------------------------------


def _matrix_rank(rows: list[list[int]]) -> int:
    m = [[Fraction(x) for x in row] for row in rows]
    rank, ncols = 0, len(m[0]) if m else 0
    for col in range(ncols):
        pivot = next((r for r in range(rank, len(m)) if m[r][col]), None)
        if pivot is None:
            continue
        m[rank], m[pivot] = m[pivot], m[rank]
        for r in range(len(m)):
            if r != rank and m[r][col]:
                f = m[r][col] / m[rank][col]
                m[r] = [a - f * b for a, b in zip(m[r], m[rank])]
        rank += 1
    return rank


def is_identity(a: Matrix) -> bool:
    return all(x == (1 if i == j else 0) for i, row in enumerate(a) for j, x in enumerate(row))


def h1_rank(g: Descriptor) -> int:
    """Free rank of the abelianization, computed where possible, else asserted."""
    g = expand_shortcuts(g)
    if isinstance(g, OneRelator):
        p = g.presentation
        return p.rank - 1 if any(exponent_sums(p.relator)) else p.rank
    if isinstance(g, Link):
        return g.diagram.components
    if isinstance(g, PureBraid):
        return g.n * (g.n - 1) // 2
    if isinstance(g, FreeProduct):
        return sum(h1_rank(f) for f in g.factors)
    if isinstance(g, H1TrivialSemidirect):
        validate(g)
        total = h1_rank(g.factors[-1])
        for f, a in zip(g.factors, g.actions):
            k = h1_rank(f)
            shifted = [[x - (i == j) for j, x in enumerate(row)] for i, row in enumerate(a)]
            total += k - _matrix_rank(shifted) if k else 0
        return total
    if g.h1_rank is None:
        raise DescriptorError(
            f"{type(g).__name__} used as a semidirect factor needs an explicit h1_rank"
        )
    return g.h1_rank


def validate(g: Descriptor) -> None:
    """Raise :class:`DescriptorError` on structurally malformed descriptors."""
    if isinstance(g, (PureBraid, FullBraid)) and g.n < 2:
        raise DescriptorError(f"braid groups need n >= 2, got {g.n}")
    if isinstance(g, (FiberType, Extension, AssertedGroup)) and g.h1_rank is not None and g.h1_rank < 0:
        raise DescriptorError("h1_rank must be nonnegative")
    if isinstance(g, Extension):
        validate(g.base)
    if isinstance(g, FreeProduct):
        if not g.factors:
            raise DescriptorError("free product needs at least one factor")
        for f in g.factors:
            validate(f)
    if isinstance(g, H1TrivialSemidirect):
        if not g.factors:
            raise DescriptorError("semidirect product needs at least one factor")
        if len(g.actions) != len(g.factors) - 1:
            raise DescriptorError(
                f"{len(g.factors)} factors need {len(g.factors) - 1} action matrices, "
                f"got {len(g.actions)}"
            )
        for f in g.factors:
            validate(f)
        for i, (f, a) in enumerate(zip(g.factors, g.actions)):
            k = h1_rank(f)
            if len(a) != k or any(len(row) != k for row in a):
                raise DescriptorError(
                    f"action matrix {i} must be {k}x{k} to act on the abelianization of its factor"
                )


# -- evaluation --------------------------------------------------------------


class _Run:
    def __init__(self, cap: int):
        self.cap = cap
        self.chain: list[ChainStep] = []
        self.assertions: list[Assertion] = []
        self.evidence: list[Evidence] = []
        self.notes: list[str] = []

    def fire(self, rule: str, subject: str, why: str, asserted: tuple[str, ...] = ()) -> None:
        self.chain.append(ChainStep(rule, subject, why, ANCHORS[rule], asserted))

    def assert_flag(self, subject: str, flag: str, value: bool, source: str) -> bool:
        self.assertions.append(Assertion(subject, flag, bool(value), source))
        if not value:
            self.notes.append(f"{subject}: asserted flag {flag} is false")
        return bool(value)

    def report(self, verdict: Verdict, in_f_plus: bool) -> CertReport:
        return CertReport(
            verdict, in_f_plus, tuple(self.chain), tuple(self.assertions),
            tuple(self.evidence), tuple(self.notes),
        )

    # F+ membership (R1-R5)
    def member(self, g: Descriptor, at: str) -> bool:
        g = expand_shortcuts(g)
        if isinstance(g, OneRelator):
            try:
                v = check_one_relator(g.presentation, self.cap)
            except (TrivialWord, ValueError) as exc:
                self.fire("ERROR", at, f"{type(exc).__name__}: {exc}")
                return False
            self.evidence.append(Evidence(at, v))
            if v.primitive:
                self.fire("R1", at, f"relator has weight {v.weight} and Lie coordinates with gcd 1")
                return True
            if v.reason is Reason.WEIGHT_CAP_EXCEEDED:
                self.fire("ERROR", at, f"WeightExceedsCap: no nonzero layer up to degree {self.cap}")
            else:
                self.notes.append(
                    f"{at}: relator image at weight {v.weight} is a proper power (gcd {v.coords_gcd})"
                )
            return False
        if isinstance(g, Link):
            v = is_primitive_link(g.diagram)
            self.evidence.append(Evidence(at, v))
            if v.primitive:
                self.fire(
                    "R2", at,
                    f"linking diagram on {g.diagram.components} components has a spanning "
                    "subtree avoiding every prime",
                )
                return True
            self.notes.append(f"{at}: linking diagram fails at prime {v.failing_prime}")
            return False
        if isinstance(g, PureBraid):
            self.fire("R3", at, f"P_{g.n} is a pure braid group")
            return True
        if isinstance(g, FiberType):
            if self.assert_flag(at, "fiber_type", g.asserted, USER):
                self.fire(
                    "R4", at, f"{g.name} is the group of a fiber-type arrangement [ASSERTED]",
                    ("fiber_type",),
                )
                return True
            return False
        if isinstance(g, H1TrivialSemidirect):
            if len(g.factors) == 1:
                return self.member(g.factors[0], f"{at}.factors[0]")
            ok = all([self.member(f, f"{at}.factors[{i}]") for i, f in enumerate(g.factors)])
            bad = [i for i, a in enumerate(g.actions) if not is_identity(a)]
            if bad:
                self.notes.append(f"{at}: action matrices {bad} are not the identity; not H1-trivial")
            if ok and not bad:
                self.fire(
                    "R5", at,
                    f"{len(g.factors)} F+ factors, every action trivial on the kernel's H1",
                )
                return True
            return False
        self.notes.append(f"{at}: no rule establishes F+ membership for {_kind(g)}")
        return False

    def extension(self, g: Extension, at: str, base_rule) -> bool:
        base_ok = base_rule(g.base, f"{at}.base")
        tf = self.assert_flag(at, "torsion_free", g.torsion_free, g.torsion_free_source)
        qbc = self.assert_flag(at, "quotient_bc", g.quotient_bc, g.quotient_bc_source)
        return base_ok and tf and qbc

    # admissible base Q of an iterated semidirect product
    def admissible(self, q: Descriptor, at: str) -> bool:
        q = expand_shortcuts(q)
        if isinstance(q, FreeProduct):
            ok = all([self.member(f, f"{at}.factors[{i}]") for i, f in enumerate(q.factors)])
            if ok:
                self.assert_flag(at, "admissible_base", True, "free product of F+ groups")
                self.fire(
                    "Q-FREE-PRODUCT", at,
                    f"free product of {len(q.factors)} F+ groups [ASSERTED]",
                    ("admissible_base",),
                )
            return ok
        if isinstance(q, AssertedGroup):
            if self.assert_flag(at, "admissible_base", q.asserted, USER):
                self.fire(
                    "Q-ASSERTED", at, f"{q.label} asserted admissible [ASSERTED]",
                    ("admissible_base",),
                )
                return True
            return False
        if isinstance(q, H1TrivialSemidirect) and len(q.factors) > 1:
            return self.iterated(q, at)
        return self.member(q, at)

    def iterated(self, g: H1TrivialSemidirect, at: str) -> bool:
        if len(g.factors) == 1:
            return self.admissible(g.factors[0], f"{at}.factors[0]")
        *kernels, q = g.factors
        ok = all([self.member(f, f"{at}.factors[{i}]") for i, f in enumerate(kernels)])
        ok = self.admissible(q, f"{at}.factors[{len(kernels)}]") and ok
        bad = [i for i, a in enumerate(g.actions) if not is_identity(a)]
        if bad:
            self.notes.append(f"{at}: action matrices {bad} are not the identity; not H1-trivial")
        if ok and not bad:
            self.fire(
                "R8", at,
                f"{len(kernels)} F+ kernel{'s' if len(kernels) > 1 else ''} over an admissible base, "
                "all actions H1-trivial",
            )
            return True
        return False


def _kind(g) -> str:
    return {
        OneRelator: "one_relator", Link: "link", PureBraid: "pure_braid",
        FullBraid: "full_braid", FiberType: "fiber_type",
        H1TrivialSemidirect: "h1_trivial_semidirect", Extension: "extension",
        FreeProduct: "free_product", AssertedGroup: "asserted",
    }[type(g)]


def certify(g: Descriptor, cap: int = DEFAULT_WEIGHT_CAP) -> CertReport:
    """Apply rules R1-R7 to ``g``.

    >>> certify(FullBraid(3)).verdict.value
    'BC_HOLDS'
    """
    validate(g)
    g = expand_shortcuts(g)
    run = _Run(cap)
    if isinstance(g, Extension):
        if run.extension(g, "$", run.member):
            run.fire(
                "R6", "$",
                f"torsion-free extension of an F+ group by {g.quotient_label or 'a quotient'} "
                "satisfying BC [ASSERTED]",
                ("torsion_free", "quotient_bc"),
            )
            return run.report(Verdict.BC_HOLDS, False)
        return run.report(Verdict.NOT_ESTABLISHED, False)
    if run.member(g, "$"):
        run.fire("R7", "$", "F+ groups lie in LHETH and so satisfy BC")
        return run.report(Verdict.BC_HOLDS, True)
    return run.report(Verdict.NOT_ESTABLISHED, False)


def certify_iterated(g: Descriptor, cap: int = DEFAULT_WEIGHT_CAP) -> CertReport:
    """Like :func:`certify`, additionally admitting ``G_1 x| (... x| (G_N x| Q))``
    whose base ``Q`` is merely admissible (a free product of F+ groups, or
    asserted), and torsion-free extensions of such products (R8, R9).
    """
    validate(g)
    g = expand_shortcuts(g)
    plain = certify(g, cap)
    if plain.established:
        return plain
    run = _Run(cap)
    if isinstance(g, H1TrivialSemidirect) and len(g.factors) > 1:
        if run.iterated(g, "$"):
            return run.report(Verdict.BC_HOLDS, False)
        return run.report(Verdict.NOT_ESTABLISHED, False)
    if (
        isinstance(g, Extension)
        and isinstance(g.base, H1TrivialSemidirect)
        and len(g.base.factors) > 1
    ):
        if run.extension(g, "$", run.iterated):
            run.fire(
                "R9", "$",
                f"torsion-free extension by {g.quotient_label or 'a quotient'} satisfying BC "
                "[ASSERTED]",
                ("torsion_free", "quotient_bc"),
            )
            return run.report(Verdict.BC_HOLDS, False)
        return run.report(Verdict.NOT_ESTABLISHED, False)
    return plain
