"""Deterministic invariant suite behind the `selftest` CLI subcommand.

Every check is seeded and pure, so repeated runs with the same seed print
byte-identical logs.  Exit status is nonzero on any violation.
"""

from __future__ import annotations

import random
from fractions import Fraction

from .action import build_glued_action, certify_nonuniform, evaluate_word
from .cones import adversarial_stall, build_chain_from_action, metric_gap_check, run_progress_ledger
from .plmap import Exact, PLMap, translation_number
from .qfield import QNum, qnum, ratio_is_rational, sqrt_of
from .shear import disjointness_check, shadow_length


def random_qnum(rng: random.Random, d: int = 2) -> QNum:
    return QNum(
        Fraction(rng.randint(-40, 40), rng.randint(1, 12)),
        Fraction(rng.randint(-40, 40), rng.randint(1, 12)),
        d,
    )


def random_plmap(rng: random.Random, max_breaks: int = 4) -> PLMap:
    """Random monotone periodic PL map with small rational breakpoints."""
    k = rng.randint(1, max_breaks)
    denom = rng.choice([6, 8, 12, 16])
    xs = sorted(rng.sample(range(denom), k))
    gaps = [rng.randint(1, 8) for _ in range(k)]
    total = sum(gaps)
    y0 = Fraction(rng.randint(-denom, denom), denom)
    ys = []
    acc = Fraction(0)
    for g in gaps:
        ys.append(y0 + acc)
        acc += Fraction(g, total)
    return PLMap(1, [(Fraction(x, denom), y) for x, y in zip(xs, ys)])


def _check_field_axioms(rng: random.Random, trials: int) -> int:
    bad = 0
    for _ in range(trials):
        x, y, z = (random_qnum(rng) for _ in range(3))
        if (x + y) + z != x + (y + z):
            bad += 1
        if x * (y + z) != x * y + x * z:
            bad += 1
        if (x * y) * z != x * (y * z):
            bad += 1
        if x and x * x.inverse() != 1:
            bad += 1
        if x + (-x) != 0:
            bad += 1
        if y:
            ok, witness = ratio_is_rational(x, y)
            if ok != witness.is_rational() or witness != x * y.inverse():
                bad += 1
    return bad


def _check_group_axioms(rng: random.Random, trials: int) -> int:
    bad = 0
    for _ in range(trials):
        f, g, h = (random_plmap(rng) for _ in range(3))
        if f.compose(g).compose(h) != f.compose(g.compose(h)):
            bad += 1
        if f.compose(f.inverse()) != PLMap.identity(1):
            bad += 1
        x = random_qnum(rng)
        if f.compose(g)(x) != f(g(x)):
            bad += 1
        if f(x + 1) != f(x) + 1:
            bad += 1
    return bad


def _check_period_group(rng: random.Random, trials: int) -> int:
    bad = 0
    for _ in range(trials):
        f = random_plmap(rng)
        pg = f.period_group()
        if pg.all_reals:
            continue
        if not f.commutes(PLMap.translation(pg.step, 1)):
            bad += 1
        if not f.commutes(PLMap.translation(2 * pg.step, 1)):
            bad += 1
    return bad


def _check_translation_numbers(rng: random.Random, trials: int) -> int:
    bad = 0
    for _ in range(trials):
        t = random_qnum(rng)
        res = translation_number(PLMap.translation(t, 1))
        if not (isinstance(res, Exact) and res.value == t):
            bad += 1
    return bad


def _check_certificates() -> int:
    r2 = sqrt_of(2)
    bad = 0
    flag = certify_nonuniform(build_glued_action(1 + r2, r2))
    if flag.verdict != "NO_COMMON_TRANSLATION" or flag.quotient != 2 - r2:
        bad += 1
    spec = build_glued_action(2 * r2, r2)
    comm = certify_nonuniform(spec)
    if comm.verdict != "COMMON_TRANSLATION":
        bad += 1
    else:
        w = comm.common_translation
        for name in ("beta_l", "beta_r"):
            g = spec.generators[name]
            if not g.commutes(PLMap.translation(w, g.period)):
                bad += 1
    return bad


def _check_metric_lemma(rng: random.Random, samples: int) -> int:
    r2 = sqrt_of(2)
    spec = build_glued_action(1 + r2, r2)
    chain = build_chain_from_action(spec, "LRLRL", seed=rng.randint(0, 10**6))
    pairs = [
        (Fraction(rng.randint(-60, 60), 7), Fraction(rng.randint(-60, 60), 11))
        for _ in range(samples)
    ]
    rep = metric_gap_check(chain, 0, len(chain), pairs)
    return rep.violations


def _check_ledger(rng: random.Random, runs: int) -> int:
    bad = 0
    for _ in range(runs):
        run = run_progress_ledger(1, Fraction(1, 10), 10, "random", seed=rng.randint(0, 10**9))
        for row in run.rows:
            if row.simulated_d1 < row.certified_lower_bound:
                bad += 1
    if adversarial_stall(1, 1) is None:
        bad += 1
    if adversarial_stall(3, 1) is not None:
        bad += 1
    return bad


def _check_shear() -> int:
    bad = 0
    for n in (1, 3, 10, 60):
        rep = shadow_length(1, 2, n)
        if rep.shadow != 1 - Fraction(1, 2**n):
            bad += 1
        if rep.limit != 1:
            bad += 1
    if disjointness_check((0, Fraction(2, 5)), Fraction(1, 2)) is not True:
        bad += 1
    if disjointness_check((0, Fraction(2, 5)), 0) is not False:
        bad += 1
    return bad


def run_selftest(seed: int = 0, out=None) -> int:
    """Run all checks, print one line per check, return failure count."""
    import sys

    out = out or sys.stdout
    rng = random.Random(seed)
    checks = [
        ("field-axioms", lambda: _check_field_axioms(rng, 400)),
        ("pl-group-axioms", lambda: _check_group_axioms(rng, 150)),
        ("pl-period-groups", lambda: _check_period_group(rng, 100)),
        ("translation-numbers", lambda: _check_translation_numbers(rng, 100)),
        ("certificates", _check_certificates),
        ("metric-lemma", lambda: _check_metric_lemma(rng, 400)),
        ("progress-ledger", lambda: _check_ledger(rng, 100)),
        ("shear-shadow", _check_shear),
    ]
    failures = 0
    for name, fn in checks:
        bad = fn()
        if bad:
            failures += 1
            print(f"FAIL {name}: {bad} violations", file=out)
        else:
            print(f"PASS {name}", file=out)
    return failures
