"""Enumeration of tracefree representation classes of a Montesinos link.

Every class has a representative with ``X_1 = A(1)`` and is reached through
one of five cases:

i.   abelian: all ``s_l`` in ``{1, -1}``;
ii.  reducible non-abelian: ``mu = 0`` with a non-regular ``(X_1, Y_1)``;
iii. irreducible with ``a`` in ``{1, -1}``: built from an X-chain whose free
     twists are sampled and whose last two twists close it up;
iv.  irreducible with ``mu = 0``: ``a`` is free and is sampled;
v.   irreducible with ``mu != 0``: finitely many ``(n, n_1, ..., n_r)``.

Exact side conditions are checked with ``fractions.Fraction``; only the
matrices are floating point.
"""
from __future__ import annotations

import cmath
import logging
import math
from collections import defaultdict
from fractions import Fraction
from itertools import product
from typing import Iterable, NamedTuple, Sequence

import numpy as np
from tenacity import Retrying, retry_if_exception_type, stop_after_attempt

from montrep.chain import build_chain, character_vector, is_unit_sign
from montrep.config import settings
from montrep.errors import (
    ClosureViolation,
    DegenerateParameters,
    InvalidParameter,
    NoSolution,
    SingularBracket,
    UsedWrongCase,
)
from montrep.mat2 import I2, Mat2, bracket, det, is_regular_pair, mat_A, mat_D, mat_E, mat_S, max_norm
from montrep.models.link import MontesinosSpec
from montrep.models.representation import (
    CASE_CODES,
    CaseName,
    ClassParams,
    EnumerationResult,
    RepClass,
    RepMatrices,
    RunReport,
)
from montrep.tangle.closed_form import parity_sign, transfer_weight
from montrep.tangle.diagram import Diagram, build_montesinos_diagram
from montrep.verify import describe_link, verify_class

logger = logging.getLogger(__name__)

DEFAULT_A_SAMPLES: tuple[complex, ...] = (
    0.5,
    2 * cmath.exp(1j * math.pi / 5),
    cmath.exp(1j * math.pi / 7),
    -3.0,
    1.2 * cmath.exp(2j),
)

ALL_CASES = tuple(CASE_CODES)


class MuZeroTuple(NamedTuple):
    n: int
    n_list: tuple[int, ...]


class MuNonzeroTuple(NamedTuple):
    n: int
    n_list: tuple[int, ...]
    theta_over_pi: Fraction
    theta: float
    a: complex


# ---------------------------------------------------------------------------
# Exact helpers
# ---------------------------------------------------------------------------

def _sign_power(s: int, k: int) -> int:
    return s if k % 2 else 1


def exp_i_pi(phase: Fraction) -> complex:
    """``exp(i pi phase)``, exact at multiples of ``1/2``."""
    phase = phase % 2
    exact = {Fraction(0): 1 + 0j, Fraction(1, 2): 1j, Fraction(1): -1 + 0j, Fraction(3, 2): -1j}
    if phase in exact:
        return exact[phase]
    return cmath.exp(1j * math.pi * float(phase))


def fraction_str(f: Fraction) -> str:
    return f"{f.numerator}/{f.denominator}"


def s_phase(td, theta_over_pi: Fraction, n: int) -> Fraction:
    """``arg(s_l) / pi`` modulo 2 for ``s_l = exp(i (theta + p~ pi + 2 n pi) / p)``."""
    return ((theta_over_pi + td.p_tilde + 2 * n) / td.p) % 2


def sign_tuples(spec: MontesinosSpec) -> list[tuple[int, tuple[int, ...]]]:
    """All ``(a, s_1..s_r)`` in ``{1,-1}^(r+1)`` with ``(-1)^p~ s^p = a`` and trivial holonomy."""
    found = []
    for a, *signs in product((1, -1), repeat=spec.r + 1):
        if any(parity_sign(td.p_tilde) * _sign_power(s, td.p) != a for td, s in zip(spec.tangles, signs)):
            continue
        holonomy = 1
        for td, s in zip(spec.tangles, signs):
            holonomy *= -parity_sign(td.q_tilde) * _sign_power(s, td.q)
        if holonomy == 1:
            found.append((a, tuple(signs)))
    return found


# ---------------------------------------------------------------------------
# Representatives
# ---------------------------------------------------------------------------

def _infer_case(spec: MontesinosSpec, a: complex, s_list: Sequence[complex], y1: Mat2 | None) -> CaseName:
    if all(is_unit_sign(s) for s in s_list):
        if y1 is not None and not is_regular_pair(mat_A(1), y1).regular:
            return "reducible_nonabelian"
        return "abelian"
    if is_unit_sign(a):
        return "irreducible_binary"
    return "irreducible_mu0" if spec.mu == 0 else "irreducible_muN"


def build_representation(
    spec: MontesinosSpec,
    a: complex,
    s_list: Sequence[complex],
    seed: Mat2 | list[Mat2] | None = None,
    *,
    case: CaseName | None = None,
    params: ClassParams | None = None,
    tol: float | None = None,
) -> RepClass:
    """Build the chain for one parameter tuple and package it as a class.

    ``seed`` is ``Y_1`` (default ``A(s_1)``) or the full list of ``X_l``.
    """
    s_list = [complex(s) for s in s_list]
    if len(s_list) != spec.r:
        raise InvalidParameter(f"expected {spec.r} values of s, got {len(s_list)}")
    seed = mat_A(s_list[0]) if seed is None else seed
    chain = build_chain(spec, complex(a), s_list, seed, tol=tol)
    if case is None:
        case = _infer_case(spec, complex(a), s_list, None if isinstance(seed, list) else seed)
    return RepClass(
        case=case,
        params=params or ClassParams(),
        a=complex(a),
        s=s_list,
        matrices=RepMatrices(X=chain.x, Y=chain.y, ends=chain.ends),
        character=character_vector(chain.x, chain.y),
        residual=chain.residual,
    )


def _try_build(report: RunReport | None, label: str, *args, **kwargs) -> RepClass | None:
    try:
        return build_representation(*args, **kwargs)
    except (ClosureViolation, SingularBracket) as exc:
        logger.warning("rejected %s: %s", label, exc)
        if report is not None:
            report.skipped += 1
            report.notes.append(f"rejected {label}: {exc}")
        return None


# ---------------------------------------------------------------------------
# Cases (i) and (ii)
# ---------------------------------------------------------------------------

def enumerate_abelian(spec: MontesinosSpec, report: RunReport | None = None) -> list[RepClass]:
    classes = []
    for a, signs in sign_tuples(spec):
        params = ClassParams(signs=[a, *signs])
        rep = _try_build(
            report, f"abelian {params.signs}", spec, a, list(signs), mat_A(signs[0]),
            case="abelian", params=params,
        )
        if rep is not None:
            classes.append(rep)
    logger.info("%s: %d abelian classes", spec, len(classes))
    return classes


def enumerate_reducible_nonabelian(spec: MontesinosSpec, report: RunReport | None = None) -> list[RepClass]:
    """Non-regular ``(X_1, Y_1)``; only possible when ``mu = 0``.

    ``Y_1`` is ``S_(s_1)`` or ``S'_(s_1)`` so that ``-tr(X_1 Y_1) = 2 s_1``.
    """
    if spec.mu != 0:
        return []
    classes = []
    for a, signs in sign_tuples(spec):
        for variant in ("primary", "transposed"):
            params = ClassParams(signs=[a, *signs], variant=variant)
            rep = _try_build(
                report, f"reducible {params.signs} {variant}", spec, a, list(signs),
                mat_S(signs[0], variant), case="reducible_nonabelian", params=params,
            )
            if rep is not None:
                classes.append(rep)
    logger.info("%s: %d reducible non-abelian classes", spec, len(classes))
    return classes


# ---------------------------------------------------------------------------
# Case (iii)
# ---------------------------------------------------------------------------

def de_decompose(z: Mat2, b1: complex, b2: complex, tol: float | None = None) -> tuple[complex, complex, complex]:
    """Write ``Z = D(c1) E(b1) D(c2) E(b2) D(c3)``.

    With ``M(c2) = E(b1) D(c2) E(b2)``, matching ``M11 M22 = Z11 Z22`` is a
    quadratic in ``c2^2``; ``c1 c3`` and ``c1 / c3`` then follow from entry
    ratios.  Both roots are tried and the product is checked.
    """
    tol = settings.identity_tol if tol is None else tol
    z = np.asarray(z, dtype=np.complex128)
    if abs(det(z) - 1) > 1e-8:
        raise InvalidParameter("de_decompose needs det Z = 1")
    b1, b2 = complex(b1), complex(b2)
    alpha, gamma = (b1 + 1 / b1) / 2, (b1 - 1 / b1) / 2
    delta, eps = (b2 + 1 / b2) / 2, (b2 - 1 / b2) / 2
    g = alpha * gamma * delta * eps
    rest = z[0, 0] * z[1, 1] - (alpha * delta) ** 2 - (gamma * eps) ** 2

    if abs(g) < tol:
        if abs(rest) > tol * max(1.0, float(max_norm(z)) ** 2):
            raise DegenerateParameters(f"E({b1}) or E({b2}) is diagonal and Z is out of reach")
        roots = [1 + 0j]
    else:
        t = rest / g
        disc = cmath.sqrt(t * t - 4)
        roots = [(t + disc) / 2, (t - disc) / 2]

    e1, e2 = mat_E(b1), mat_E(b2)
    tiny = 1e-12
    best: tuple[float, tuple[complex, complex, complex]] | None = None
    for x in roots:
        if abs(x) < tiny:
            continue
        c2 = cmath.sqrt(x)
        m = e1 @ mat_D(c2) @ e2
        prod = _ratio(z[0, 0], m[0, 0], m[1, 1], z[1, 1])  # c1 c3
        quot = _ratio(z[0, 1], m[0, 1], m[1, 0], z[1, 0])  # c1 / c3
        if abs(prod) < tiny or abs(quot) < tiny:
            continue
        c1 = cmath.sqrt(prod * quot)
        c3 = prod / c1
        residual = float(max_norm(mat_D(c1) @ m @ mat_D(c3) - z))
        if best is None or residual < best[0]:
            best = (residual, (c1, complex(c2), c3))
    if best is None or best[0] > tol * max(1.0, float(max_norm(z))):
        raise NoSolution(f"no D-E decomposition for b = ({b1}, {b2})")
    return best[1]


def _ratio(num1: complex, den1: complex, num2: complex, den2: complex) -> complex:
    """Solve ``num1 = k den1`` and ``num2 = den2 / k``... via the better-conditioned side.

    Returns ``k`` from ``num1 / den1`` or ``num2 / den2``; ``1`` when both
    denominators vanish and ``k`` is unconstrained.
    """
    if abs(den1) >= abs(den2) and abs(den1) > 1e-14:
        return num1 / den1
    if abs(den2) > 1e-14:
        return num2 / den2
    return 1 + 0j


def _draw_lambdas(rng: np.random.Generator, count: int) -> list[complex]:
    modulus = np.exp(rng.uniform(-0.1, 0.1, count))
    phase = rng.uniform(0.0, 2 * math.pi, count)
    return [complex(z) for z in modulus * np.exp(1j * phase)]


def close_lambdas(roots: Sequence[complex], rng: np.random.Generator) -> list[complex]:
    """Sample ``lambda_1..lambda_(r-2)`` and solve for the last two so the X-chain closes."""
    r = len(roots)
    if r < 2:
        raise NoSolution("a single tangle admits no closing X-chain")
    lambdas = _draw_lambdas(rng, r - 2)
    partial = I2.copy()
    for lam, b in zip(lambdas, roots):
        partial = partial @ mat_D(lam) @ mat_E(b)
    c1, c2, _ = de_decompose(np.linalg.inv(partial), roots[-2], roots[-1])
    return [*lambdas, c1, c2]


def x_generators(lambdas: Sequence[complex], roots: Sequence[complex]) -> list[Mat2]:
    """``X_l = (D(lambda_1) E(b_1) ... D(lambda_(l-1)) E(b_(l-1))).A(1)``."""
    xs = []
    partial = I2.copy()
    for lam, b in zip(lambdas, roots):
        xs.append(partial @ mat_A(1) @ np.linalg.inv(partial))
        partial = partial @ mat_D(lam) @ mat_E(b)
    return xs


def enumerate_binary_irreducible(
    spec: MontesinosSpec,
    a: int,
    samples: int | None = None,
    seed: int | None = None,
    report: RunReport | None = None,
) -> list[RepClass]:
    """Irreducible classes with ``-tr_h = a + 1/a = +-2``, sampled over the free twists."""
    if a not in (1, -1):
        raise InvalidParameter(f"case (iii) needs a in {{1, -1}}, got {a}")
    samples = settings.samples if samples is None else samples
    seed = settings.seed if seed is None else seed
    theta_over_pi = Fraction(0 if a == 1 else 1)
    classes = []
    for n_list in product(*(range(td.p) for td in spec.tangles)):
        phases = [s_phase(td, theta_over_pi, n) for td, n in zip(spec.tangles, n_list)]
        if all(ph.denominator == 1 for ph in phases):
            continue
        s_list = [exp_i_pi(ph) for ph in phases]
        if any(abs(bracket(td.q, s)) < settings.singular_tol for td, s in zip(spec.tangles, s_list)):
            logger.debug("skipping %s: some {q}_s vanishes", n_list)
            if report is not None:
                report.skipped += 1
            continue
        roots = [complex(np.sqrt(transfer_weight(td, s))) for td, s in zip(spec.tangles, s_list)]
        for sample in range(samples):
            label = f"binary a={a} n={list(n_list)} sample {sample}"
            try:
                lambdas = _sample_closing_lambdas(roots, seed, a, n_list, sample)
            except (NoSolution, DegenerateParameters) as exc:
                logger.warning("no closing X-chain for %s: %s", label, exc)
                if report is not None:
                    report.skipped += 1
                    report.notes.append(f"no solution for {label}: {exc}")
                continue
            xs = x_generators(lambdas, roots)
            if not all(is_regular_pair(xs[i], xs[(i + 1) % spec.r]).regular for i in range(spec.r)):
                logger.debug("non-regular X pair in %s", label)
                continue
            params = ClassParams(
                n_list=list(n_list),
                theta_over_pi=fraction_str(theta_over_pi),
                s_phases=[fraction_str(ph) for ph in phases],
                lambdas=lambdas,
                roots=roots,
                sample=sample,
            )
            rep = _try_build(report, label, spec, a, s_list, xs, case="irreducible_binary", params=params)
            if rep is not None:
                classes.append(rep)
    logger.info("%s: %d binary irreducible samples for a=%d", spec, len(classes), a)
    return classes


def _sample_closing_lambdas(
    roots: Sequence[complex], seed: int, a: int, n_list: Sequence[int], sample: int
) -> list[complex]:
    for attempt in Retrying(
        stop=stop_after_attempt(settings.max_sample_attempts),
        retry=retry_if_exception_type((NoSolution, DegenerateParameters)),
        reraise=True,
    ):
        with attempt:
            number = attempt.retry_state.attempt_number
            rng = np.random.default_rng([seed, 0 if a == 1 else 1, sample, number, *n_list])
            return close_lambdas(roots, rng)
    raise NoSolution("sampling exhausted")  # pragma: no cover


# ---------------------------------------------------------------------------
# Cases (iv) and (v)
# ---------------------------------------------------------------------------

def _phase_sum(spec: MontesinosSpec, n_list: Sequence[int]) -> Fraction:
    return sum((Fraction(2 * n * td.q + 1, td.p) for td, n in zip(spec.tangles, n_list)), Fraction(0))


def enumerate_tuples_mu_zero(spec: MontesinosSpec) -> list[MuZeroTuple]:
    """``(n_1..n_r)`` with ``sum (2 n_l q_l + 1) / p_l - r = 2 n`` for an integer ``n``."""
    if spec.mu != 0:
        raise UsedWrongCase(f"{spec} has mu = {spec.mu}, not 0")
    found = []
    for n_list in product(*(range(td.p) for td in spec.tangles)):
        excess = _phase_sum(spec, n_list) - spec.r
        if excess.denominator == 1 and excess.numerator % 2 == 0:
            found.append(MuZeroTuple(excess.numerator // 2, tuple(n_list)))
    return found


def enumerate_tuples_mu_nonzero(spec: MontesinosSpec) -> list[MuNonzeroTuple]:
    """Tuples with ``0 <= n < N(mu)`` whose ``theta`` is not a multiple of ``pi``."""
    mu = spec.mu
    if mu == 0:
        raise UsedWrongCase(f"{spec} has mu = 0")
    found = []
    for n_list in product(*(range(td.p) for td in spec.tangles)):
        total = _phase_sum(spec, n_list)
        for n in range(spec.mu_numerator):
            ratio = (2 * n + spec.r - total) / mu
            if ratio.denominator == 1:
                continue
            theta = math.pi * float(ratio)
            found.append(MuNonzeroTuple(n, tuple(n_list), ratio, theta, exp_i_pi(ratio)))
    return found


def enumerate_mu_zero_classes(
    spec: MontesinosSpec,
    a_values: Iterable[complex] | None = None,
    report: RunReport | None = None,
) -> list[RepClass]:
    a_values = list(DEFAULT_A_SAMPLES if a_values is None else a_values)
    classes = []
    for item in enumerate_tuples_mu_zero(spec):
        for sample, a in enumerate(a_values):
            a = complex(a)
            if a == 0 or is_unit_sign(a, 1e-9):
                logger.warning("ignoring a = %s for case (iv): needs a not in {0, 1, -1}", a)
                continue
            modulus, theta = abs(a), cmath.phase(a)
            s_list = [
                modulus ** (1 / td.p) * cmath.exp(1j * (theta + td.p_tilde * math.pi + 2 * n * math.pi) / td.p)
                for td, n in zip(spec.tangles, item.n_list)
            ]
            params = ClassParams(n=item.n, n_list=list(item.n_list), a_sample=a, sample=sample)
            rep = _try_build(
                report, f"mu0 n={list(item.n_list)} a={a}", spec, a, s_list,
                case="irreducible_mu0", params=params,
            )
            if rep is not None:
                classes.append(rep)
    logger.info("%s: %d mu = 0 irreducible samples", spec, len(classes))
    return classes


def enumerate_mu_nonzero_classes(spec: MontesinosSpec, report: RunReport | None = None) -> list[RepClass]:
    classes = []
    seen: dict[tuple[Fraction, ...], tuple[int, ...]] = {}
    for item in enumerate_tuples_mu_nonzero(spec):
        phases = [s_phase(td, item.theta_over_pi, n) for td, n in zip(spec.tangles, item.n_list)]
        key = tuple(phases)
        if key in seen:
            # same s-tuple, hence the same representation
            logger.info("tuple %s repeats the s-values of %s", (item.n, *item.n_list), seen[key])
            if report is not None:
                report.merged += 1
            continue
        seen[key] = (item.n, *item.n_list)
        params = ClassParams(
            n=item.n,
            n_list=list(item.n_list),
            theta_over_pi=fraction_str(item.theta_over_pi),
            s_phases=[fraction_str(ph) for ph in phases],
        )
        rep = _try_build(
            report, f"muN n={item.n} {list(item.n_list)}", spec, item.a,
            [exp_i_pi(ph) for ph in phases], case="irreducible_muN", params=params,
        )
        if rep is not None:
            classes.append(rep)
    logger.info("%s: %d mu != 0 irreducible classes", spec, len(classes))
    return classes


# ---------------------------------------------------------------------------
# Orchestration
# ---------------------------------------------------------------------------

def _character_key(rep: RepClass, digits: int = 6) -> tuple:
    return tuple((round(z.real, digits) + 0.0, round(z.imag, digits) + 0.0) for z in rep.character)


def find_collisions(classes: Sequence[RepClass]) -> list[list[int]]:
    """Groups of class indices whose character vectors agree to 1e-6."""
    groups: dict[tuple, list[int]] = defaultdict(list)
    for index, rep in enumerate(classes):
        groups[_character_key(rep)].append(index)
    return [members for members in groups.values() if len(members) > 1]


def enumerate_classes(
    spec: MontesinosSpec,
    cases: Iterable[str] = ALL_CASES,
    *,
    tol: float | None = None,
    samples: int | None = None,
    seed: int | None = None,
    a_values: Iterable[complex] | None = None,
    dedupe: str | None = None,
    diagram: Diagram | None = None,
) -> EnumerationResult:
    """Run the requested cases, verify every class on the diagram and sort the result."""
    tol = settings.tol if tol is None else tol
    seed = settings.seed if seed is None else seed
    cases = [c.strip() for c in cases]
    unknown = [c for c in cases if c not in CASE_CODES]
    if unknown:
        raise InvalidParameter(f"unknown cases {unknown}; choose from {list(CASE_CODES)}")

    diagram = diagram or build_montesinos_diagram(spec)
    report = RunReport(tol=tol)
    classes: list[RepClass] = []
    if "i" in cases:
        classes += enumerate_abelian(spec, report)
    if "ii" in cases:
        classes += enumerate_reducible_nonabelian(spec, report)
    if "iii" in cases:
        for a in (1, -1):
            classes += enumerate_binary_irreducible(spec, a, samples, seed, report)
    if "iv" in cases and spec.mu == 0:
        classes += enumerate_mu_zero_classes(spec, a_values, report)
    if "v" in cases and spec.mu != 0:
        classes += enumerate_mu_nonzero_classes(spec, report)

    for rep in classes:
        check = verify_class(diagram, rep, tol)
        rep.residual = max(rep.residual or 0.0, check.max_residual)
        rep.verified = check.passed
        if not check.passed:
            report.failures += 1
            logger.error("%s class %s failed verification (residual %.3e)", rep.case, rep.params.discrete, check.max_residual)
    report.verified = sum(rep.verified for rep in classes)

    classes.sort(key=lambda rep: rep.sort_key)
    groups = find_collisions(classes)
    if groups and dedupe == "characters":
        dropped = {i for members in groups for i in members[1:]}
        classes = [rep for i, rep in enumerate(classes) if i not in dropped]
        report.merged += len(dropped)
        groups = find_collisions(classes)
    for members in groups:
        logger.warning("classes %s share a character vector", members)
        report.collisions.extend((members[0], other) for other in members[1:])

    for rep in classes:
        report.counts[rep.case] = report.counts.get(rep.case, 0) + 1

    mu = spec.mu
    return EnumerationResult(
        link=describe_link(spec, diagram),
        mu=fraction_str(mu),
        expansions=spec.expansions,
        seed=seed,
        classes=classes,
        report=report,
    )
