"""The amalgamated leaf-space action and its non-uniformity certificate.

Two punctured-torus pieces act on the real line: on the left, alpha_l is a
translation through t and beta_l a non-translation fixing the integers; on
the right, alpha_r translates through s.  Rescaling each side so the glued
longitude translates through a unit length puts both actions in common
coordinates.  The translations commuting with each side then form discrete
groups with steps 1/t and 1/s, and exact (in)commensurability of the steps
decides whether any single translation commutes with both sides.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .errors import ParseError, PeriodMismatchError, PreconditionError
from .plmap import PLMap, PeriodGroup
from .qfield import QNum, as_qnum, qnum, ratio_is_rational

__all__ = [
    "ActionSpec",
    "Certificate",
    "ComposedMap",
    "DensityParams",
    "standard_beta",
    "build_glued_action",
    "evaluate_word",
    "side_translation_subgroup",
    "certify_nonuniform",
    "orbit_density",
    "incompressible_interval_search",
]

LEFT_GENERATORS = ("alpha_l", "beta_l")
RIGHT_GENERATORS = ("alpha_r", "beta_r")


def standard_beta(d: int = 2) -> PLMap:
    """Default non-translation generator: fixes Z, pushes (0, 1) upward.

    One interior breakpoint per period, at (1/2, 3/4).
    """
    return PLMap(qnum(1, 0, d), [(0, 0), (Fraction(1, 2), Fraction(3, 4))])


@dataclass(frozen=True)
class ActionSpec:
    """The normalized leaf-space action of both glued pieces.

    ``generators`` holds the images in longitude-unit coordinates: left
    generators carry period 1/t, right generators period 1/s, and both
    alpha generators are unit translations.  Raw parameters and raw beta
    maps are retained for reporting.
    """

    d: int
    t: QNum
    s: QNum
    generators: dict
    raw_beta_l: PLMap
    raw_beta_r: PLMap
    longitude: str = "alpha_l"
    sides: dict = field(
        default_factory=lambda: {"left": LEFT_GENERATORS, "right": RIGHT_GENERATORS}
    )

    def generator(self, name: str) -> PLMap:
        try:
            return self.generators[name]
        except KeyError:
            raise PreconditionError(f"unknown generator {name!r}") from None


def _check_beta(beta: PLMap, label: str) -> None:
    if beta.is_translation():
        raise PreconditionError(
            f"{label} is a translation; the certificate would be vacuous"
        )
    if beta.period != 1:
        raise PreconditionError(f"{label} must have period 1 in raw coordinates")
    if not beta.commutes(PLMap.translation(1, 1)):
        raise PreconditionError(
            f"{label} does not commute with the unit translation"
        )
    if not beta.fixed_points():
        raise PreconditionError(f"{label} must have fixed points in raw coordinates")


def build_glued_action(
    t, s, beta_l: PLMap | None = None, beta_r: PLMap | None = None, d: int = 2
) -> ActionSpec:
    """Assemble the two-piece action for translation lengths t and s.

    Each side is conjugated by the coordinate rescaling that turns its
    alpha generator into a unit translation, so both sides act in the same
    longitude-unit coordinates on the leaf space.
    """
    t = as_qnum(t, d)
    s = as_qnum(s, d)
    if t.sign() <= 0 or s.sign() <= 0:
        raise PreconditionError("t and s must be positive")
    if beta_l is None:
        beta_l = standard_beta(d)
    if beta_r is None:
        beta_r = standard_beta(d)
    _check_beta(beta_l, "beta_l")
    _check_beta(beta_r, "beta_r")
    generators = {
        "alpha_l": PLMap.translation(t, 1).affine_conjugate(t),
        "beta_l": beta_l.affine_conjugate(t),
        "alpha_r": PLMap.translation(s, 1).affine_conjugate(s),
        "beta_r": beta_r.affine_conjugate(s),
    }
    return ActionSpec(d=d, t=t, s=s, generators=generators,
                      raw_beta_l=beta_l, raw_beta_r=beta_r)


def load_action_config(config: dict) -> ActionSpec:
    """Build an ActionSpec from its JSON object form.

    Schema: ``{"d": int, "t": qnum, "s": qnum, "beta_l": plmap?, "beta_r":
    plmap?}`` with numbers in the canonical text grammar; omitted beta maps
    default to the standard one.
    """
    try:
        d = int(config.get("d", 2))
        t = QNum.parse(config["t"], d)
        s = QNum.parse(config["s"], d)
    except KeyError as exc:
        raise ParseError(f"action config missing field {exc}") from exc
    except (TypeError, ValueError) as exc:
        raise ParseError(f"malformed action config: {exc}") from exc
    beta_l = beta_r = None
    if "beta_l" in config:
        beta_l = PLMap.from_json(config["beta_l"], d)
    if "beta_r" in config:
        beta_r = PLMap.from_json(config["beta_r"], d)
    return build_glued_action(t, s, beta_l, beta_r, d=d)


class ComposedMap:
    """A word image that admits no single-period PL representation.

    Mixing the two non-translation generators across sides composes maps with
    incommensurable periods; the result is an honest homeomorphism of the
    line but not periodic, so it is kept as an ordered factor list with exact
    pointwise evaluation.
    """

    __slots__ = ("factors",)

    def __init__(self, factors) -> None:
        self.factors = tuple(factors)

    def __call__(self, x) -> QNum:
        for f in reversed(self.factors):
            x = f(x)
        return x

    def __repr__(self) -> str:
        return f"ComposedMap({len(self.factors)} factors)"

    def difference_witness(self, other, probes) -> QNum | None:
        """A probe point where the two maps disagree, or None."""
        for x in probes:
            if self(x) != other(x):
                return as_qnum(x)
        return None


def _validate_word(spec: ActionSpec, word) -> list[tuple[str, int]]:
    out = []
    for name, exp in word:
        if name not in spec.generators:
            raise PreconditionError(f"unknown generator {name!r}")
        if not isinstance(exp, int) or exp == 0:
            raise PreconditionError(f"exponent for {name} must be a nonzero integer")
        out.append((name, exp))
    return out


def evaluate_word(spec: ActionSpec, word):
    """Image of a word under the action, as a PLMap whenever one exists.

    Falls back to a ComposedMap when the word mixes non-translation
    generators from both sides (incommensurable periods).
    """
    word = _validate_word(spec, word)
    factors = [spec.generator(name).pow(exp) for name, exp in word]
    if not factors:
        return PLMap.identity(spec.generator(spec.longitude).period)
    try:
        result = factors[0]
        for f in factors[1:]:
            result = result.compose(f)
        return result
    except PeriodMismatchError:
        return ComposedMap(factors)


def side_translation_subgroup(spec: ActionSpec, side: str) -> PeriodGroup:
    """The translations commuting with one side, via its beta generator."""
    try:
        _, beta_name = spec.sides[side]
    except KeyError:
        raise PreconditionError(f"side must be 'left' or 'right', got {side!r}") from None
    beta = spec.generator(beta_name)
    if beta.is_translation():
        raise PreconditionError(f"{beta_name} is a translation")
    return beta.period_group()


@dataclass(frozen=True)
class DensityParams:
    x0: QNum | int = 0
    max_word_len: int = 5
    window: tuple = (0, 1)


@dataclass(frozen=True)
class Certificate:
    """Decision on whether any translation commutes with both sides."""

    verdict: str  # NO_COMMON_TRANSLATION or COMMON_TRANSLATION
    left_step: QNum
    right_step: QNum
    ratio_rational: bool
    quotient: QNum  # exact left_step / right_step
    common_translation: QNum | None  # minimal common step when it exists
    density_report: "OrbitGapReport | None"

    def to_json(self) -> dict:
        obj = {
            "verdict": self.verdict,
            "left_step": str(self.left_step),
            "right_step": str(self.right_step),
            "ratio_rational": self.ratio_rational,
            "quotient": str(self.quotient),
            "common_translation": (
                None if self.common_translation is None else str(self.common_translation)
            ),
        }
        if self.density_report is not None:
            obj["density_evidence"] = self.density_report.to_json()
        return obj


def certify_nonuniform(
    spec: ActionSpec, density_params: DensityParams | None = None
) -> Certificate:
    """Decide, exactly, whether a common commuting translation exists.

    The verdict NO_COMMON_TRANSLATION is the algebraic certificate that no
    slithering is compatible with both sides; it is conditional on
    minimality of the orbits, for which the attached gap report is numeric
    evidence rather than proof.
    """
    c_l = side_translation_subgroup(spec, "left").step
    c_r = side_translation_subgroup(spec, "right").step
    rational, quotient = ratio_is_rational(c_l, c_r)
    common = None
    if rational:
        q = quotient.as_fraction()
        common = c_l * q.denominator  # = c_r * q.numerator, minimal common step
        verdict = "COMMON_TRANSLATION"
    else:
        verdict = "NO_COMMON_TRANSLATION"
    report = None
    if density_params is not None:
        report = orbit_density(
            spec,
            density_params.x0,
            density_params.max_word_len,
            density_params.window,
        )
    return Certificate(verdict, c_l, c_r, rational, quotient, common, report)


@dataclass(frozen=True)
class OrbitGapReport:
    max_gap: float
    points_in_window: int
    orbit_size: int
    max_word_len: int
    window: tuple

    def to_json(self) -> dict:
        return {
            "max_gap": self.max_gap,
            "points_in_window": self.points_in_window,
            "orbit_size": self.orbit_size,
            "max_word_len": self.max_word_len,
            "window": [repr(float(w)) for w in self.window],
        }


def _generator_moves(spec: ActionSpec, names=None):
    moves = []
    for name in names or spec.generators:
        g = spec.generator(name)
        moves.append(g)
        moves.append(g.inverse())
    return moves


def orbit_density(
    spec: ActionSpec, x0, max_word_len: int, window, generator_names=None
) -> OrbitGapReport:
    """Largest gap the orbit of x0 leaves in the window.

    Breadth-first over all words up to the length bound (generators and
    inverses), with exact point deduplication; the gap is measured in
    floating point against the window edges.
    """
    if max_word_len < 1:
        raise PreconditionError("max_word_len must be >= 1")
    lo = as_qnum(window[0], spec.d)
    hi = as_qnum(window[1], spec.d)
    if not lo < hi:
        raise PreconditionError("window must be nondegenerate")
    moves = _generator_moves(spec, generator_names)
    reach = qnum(0, 0, spec.d)
    for m in moves:
        for disp in m.displacement_range():
            if abs(disp) > reach:
                reach = abs(disp)
    margin = reach * max_word_len + 1
    x0 = as_qnum(x0, spec.d)
    seen = {x0}
    frontier = [x0]
    for _ in range(max_word_len):
        nxt = []
        for x in frontier:
            for m in moves:
                y = m(x)
                if y in seen:
                    continue
                if y < lo - margin or y > hi + margin:
                    continue
                seen.add(y)
                nxt.append(y)
        frontier = nxt
    inside = sorted(float(x) for x in seen if lo <= x < hi)
    seq = [float(lo)] + inside + [float(hi)]
    gap = max(b - a for a, b in zip(seq, seq[1:]))
    return OrbitGapReport(gap, len(inside), len(seen), max_word_len, (lo, hi))


@dataclass(frozen=True)
class CompressionResult:
    kind: str  # INCOMPRESSIBLE_UP_TO_BOUND or COMPRESSED_BY
    word: tuple | None

    def to_json(self) -> dict:
        return {
            "result": self.kind,
            "word": None if self.word is None else [list(w) for w in self.word],
        }


def incompressible_interval_search(
    spec: ActionSpec, interval, max_word_len: int
) -> CompressionResult:
    """Bounded search for a word nesting the interval strictly inside itself.

    Tests every word up to the length bound; a COMPRESSED_BY witness means
    some image g(I) is a proper subset or superset of I.  The negative
    answer is only a bounded-search report, not a proof.
    """
    a = as_qnum(interval[0], spec.d)
    b = as_qnum(interval[1], spec.d)
    if not a < b:
        raise PreconditionError("interval must be nondegenerate")
    if max_word_len < 1:
        raise PreconditionError("max_word_len must be >= 1")
    moves = []
    for name in spec.generators:
        g = spec.generator(name)
        moves.append(((name, 1), g))
        moves.append(((name, -1), g.inverse()))
    # A word acts on I through its endpoint images only, so states are
    # deduplicated by exact endpoint pairs.
    start = (a, b)
    seen = {start}
    frontier = [(start, ())]
    for _ in range(max_word_len):
        nxt = []
        for (u, v), word in frontier:
            for letter, m in moves:
                uu, vv = m(u), m(v)
                state = (uu, vv)
                if state in seen:
                    continue
                seen.add(state)
                new_word = word + (letter,)
                subset = a <= uu and vv <= b
                superset = uu <= a and b <= vv
                if (subset or superset) and state != start:
                    return CompressionResult("COMPRESSED_BY", new_word)
                nxt.append((state, new_word))
        frontier = nxt
    return CompressionResult("INCOMPRESSIBLE_UP_TO_BOUND", None)
