"""Acceptance criteria 1-10, all by exact equality.

Run under pytest (one PASS/FAIL line per criterion in the terminal summary) or directly:
    python3 tests/test_acceptance.py [N ...]
A budget overflow is reported as SKIP and does not count as a pass.
"""

import itertools
import random
import sys
import time
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).resolve().parent))

from ihall import repmod as rm  # noqa: E402
from ihall.hallcore import HallContext, verify_quantum_serre  # noqa: E402
from ihall.ihallalg import (IHallContext, idivided_power, idivided_power_recursive,  # noqa: E402
                            check_idivided_recursions)
from ihall.iqgverify import (aux_binomial_identities, tilde_T, tilde_T_tuples,  # noqa: E402
                             verify_drinfeld_double, verify_iserre, verify_presentation,
                             verify_rank_two_dynkin)
from ihall.exactarith import vpow  # noqa: E402
from ihall.quiver import (FormData, jordan_quiver, kronecker, linear_quiver, path_algebra,  # noqa: E402
                          point_quiver, quasi_split_a3, rank_two, validate_iquiver)
from ihall.reflectors import (dimension_law, verify_commuting_square,  # noqa: E402
                              verify_generator_images, verify_multiplicative)
from ihall.symfun import (JordanIHall, JordanModules, aut_formula, hl_Q,  # noqa: E402
                          ihl_genfun_coeff, ihl_Q, jordan_iso_check, partitions, steinitz_suite)

from conftest import ACCEPTANCE_LINES, random_rep  # noqa: E402

QS = (2, 3)


class Tally:
    """Collects named sub-checks; a CapacityError becomes a SKIP."""

    def __init__(self):
        self.failed, self.skipped, self.count = [], [], 0

    def check(self, name, fn):
        self.count += 1
        try:
            ok = fn()
        except rm.CapacityError as exc:
            self.skipped.append(f"{name} ({exc})")
            return
        if not ok:
            self.failed.append(name)

    def report(self, rep_name, rep):
        """Fold a verifier report in, one sub-check per relation line."""
        for r in rep.results:
            self.count += 1
            if r.status == "SKIP":
                self.skipped.append(f"{rep_name}:{r.id}")
            elif r.status != "OK":
                self.failed.append(f"{rep_name}:{r.id}")

    def lines(self, rep_name, rep):
        for rid, ok, _ in rep.lines:
            self.count += 1
            if not ok:
                self.failed.append(f"{rep_name}:{rid}")

    @property
    def status(self):
        return "FAIL" if self.failed else "SKIP" if self.skipped else "PASS"


# ---------------------------------------------------------------------------


def criterion_1(t):
    for a, b in itertools.product(range(4), repeat=2):
        if a + b > 3 or a + b == 0:
            continue
        for q in QS:
            r = verify_quantum_serre(a, b, q)
            t.check(f"serre12[a={a},b={b},q={q}]", r.residual_12.is_zero)
            t.check(f"serre21[a={a},b={b},q={q}]", r.residual_21.is_zero)


def criterion_2(t):
    for q in QS:
        t.report(f"q={q}", verify_rank_two_dynkin(q))


def criterion_3(t):
    for n in range(9):
        for par in ("even", "odd"):
            t.check(f"closed=rec[{n},{par}]",
                    lambda n=n, par=par: idivided_power(n, par) == idivided_power_recursive(n, par))
    t.check("recursions", lambda: not check_idivided_recursions(8))
    for q in QS:
        ctx = IHallContext(validate_iquiver(point_quiver()), q)
        S = ctx.simple("1")
        for m in range(1, 5):
            def sms(m=m):
                rhs = ctx.simple("1", m + 1) * ctx.vq(-m) + \
                    ctx.simple("1", m - 1) * ctx.E("1") * ctx.coeff(vpow(m) - vpow(-m))
                return S * ctx.simple("1", m) == rhs
            t.check(f"SmS[m={m},q={q}]", sms)


def criterion_4(t):
    for a, b in [(1, 0), (0, 1), (2, 0), (1, 1), (0, 2)]:
        for par in (0, 1):
            for q in QS:
                t.report(f"iserre[{a},{b},p={par},q={q}]", verify_iserre(a, b, q, par))


def criterion_5(t):
    tuples = list(tilde_T_tuples(5))
    t.check("tuples nonempty", lambda: bool(tuples))
    for tup in tuples:
        t.check(f"T~{tup}", lambda tup=tup: tilde_T(*tup).is_zero())
    t.report("aux", aux_binomial_identities(8, 6))


PRESENTATIONS = [
    ("A2", lambda: validate_iquiver(linear_quiver(2)), "idynkin"),
    ("A1xA1", lambda: validate_iquiver(rank_two(0, 0)), "idynkin"),
    ("qsA3", quasi_split_a3, "idynkin"),
    ("Kronecker", lambda: validate_iquiver(kronecker()), "ikm"),
    ("A3", lambda: validate_iquiver(linear_quiver(3)), "idynkin"),
]


def criterion_6(t):
    for name, make, style in PRESENTATIONS:
        for q in QS:
            t.report(f"{name}[q={q}]", verify_presentation(make(), q, style))


def criterion_7(t):
    for name, Q in [("A1", point_quiver()), ("A1xA1", rank_two(0, 0)), ("A2", linear_quiver(2))]:
        for q in QS:
            t.report(f"{name}[q={q}]", verify_drinfeld_double(Q, q))


def criterion_8(t):
    a2, a3 = validate_iquiver(linear_quiver(2)), validate_iquiver(linear_quiver(3))
    kr, qs = validate_iquiver(kronecker()), quasi_split_a3()
    for name, iq, sink in [("A2", a2, "2"), ("A3", a3, "3"), ("Kronecker", kr, "2")]:
        t.report(f"dimlaw:{name}", dimension_law(iq, sink, 2, max_dim=4))
    for name, iq, sink in [("A2", a2, "2"), ("qsA3", qs, "2"), ("Kronecker", kr, "2")]:
        t.report(f"mult:{name}", verify_multiplicative(iq, sink, 2, samples=10))
    # a = 0 leaves the sink isolated: there is no resolution to compare against
    for a in (1, 2):
        t.report(f"formula:a={a}", verify_generator_images(validate_iquiver(rank_two(a, 0)), "2", 2))
    t.report("formula:qsA3", verify_generator_images(qs, "2", 2))
    for name, iq in [("A2", a2), ("qsA3", qs)]:
        for par in (0, 1):
            t.report(f"square:{name}[p={par}]", verify_commuting_square(iq, "2", 2, par))


def criterion_9(t):
    for n in range(6):
        for lam in partitions(n):
            t.check(f"oracle{lam.parts}", lambda lam=lam: ihl_Q(lam) == ihl_genfun_coeff(lam.parts))
            t.check(f"theta0{lam.parts}", lambda lam=lam: ihl_Q(lam).at_theta_zero() == hl_Q(lam))
    for q in QS:
        t.lines(f"steinitz[q={q}]", steinitz_suite(6, q))
        jm = JordanModules(q)
        for n in range(1, 6):
            for lam in partitions(n):
                t.check(f"aut{lam.parts}[q={q}]",
                        lambda lam=lam: jm.aut_count(lam) == aut_formula(lam, q))
        alg = JordanIHall(q)
        for n in range(1, 5):
            for lam in partitions(n):
                t.lines(f"iso{lam.parts}[q={q}]", jordan_iso_check(lam, q, alg))


def criterion_10(t):
    rng = random.Random(20261016)
    quivers = {"A2": linear_quiver(2), "A3": linear_quiver(3), "Kronecker": kronecker()}
    for (name, Q), q in itertools.product(quivers.items(), QS):
        hall = HallContext(Q, q)
        keys = rm.enumerate_isoclasses(hall.bq, q, 2).keys
        for s in range(6):
            x, y, z = (hall.basis(rng.choice(keys)) for _ in range(3))
            t.check(f"hall-assoc[{name},q={q},{s}]", lambda x=x, y=y, z=z: (x * y) * z == x * (y * z))
        ictx = IHallContext(validate_iquiver(Q), q)
        ikeys = rm.enumerate_isoclasses(ictx.kq, q, 2).keys
        n = len(Q.vertices)
        for s in range(4):
            x, y, z = (ictx.basis(rng.choice(ikeys), tuple(rng.randint(-1, 1) for _ in range(n)))
                       for _ in range(3))
            t.check(f"ihall-assoc[{name},q={q},{s}]", lambda x=x, y=y, z=z: (x * y) * z == x * (y * z))
        bq, fd = path_algebra(Q), FormData.of(Q)
        for s in range(8):
            d1 = [rng.randint(0, 2) for _ in range(n)]
            d2 = [rng.randint(0, 2) for _ in range(n)]
            M, N = random_rep(bq, q, d1, rng), random_rep(bq, q, d2, rng)
            t.check(f"euler[{name},q={q},{s}]",
                    lambda M=M, N=N: rm.hom_dim(M, N) - rm.ext1_dim(M, N) == fd.euler(M.dims, N.dims))
        for s in range(6):
            M = random_rep(bq, q, [rng.randint(0, 1) for _ in range(n)], rng)
            N = random_rep(bq, q, [rng.randint(0, 1) for _ in range(n)], rng)
            t.check(f"riedtmann-peng[{name},q={q},{s}]", lambda M=M, N=N: _rp(M, N))
    for name, Q in [("A2", linear_quiver(2)), ("Jordan", jordan_quiver())]:
        ctx = IHallContext(validate_iquiver(Q), 2)
        for M in rm.enumerate_isoclasses(ctx.bq, 2, 4).reps:
            t.check(f"normal-form[{name},{M.dims}]", lambda M=M, ctx=ctx: _normal_form(ctx, M))


def _rp(M, N):
    """Riedtmann-Peng quotient against direct extension enumeration."""
    direct = rm.ext1_classes(M, N)
    c = rm.classifier_for(M.bq, M.p)
    return all(rm.ext1_with_middle(M, N, c.rep(k)) == cnt for k, cnt in direct.items())


def _normal_form(ctx, M):
    sc, key, alpha = ctx.reduce(M)
    X = ctx.cls.dims(key) if key else ctx.zero_alpha()
    ta = ctx.tau(alpha)
    dims_ok = tuple(M.dims) == tuple(x + a + b for x, a, b in zip(X, alpha, ta))
    idem = ctx.reduce(ctx.lift(key)) == (ctx.coeff(1), key, ctx.zero_alpha())
    return dims_ok and idem


CRITERIA = {n: globals()[f"criterion_{n}"] for n in range(1, 11)}


def evaluate_criterion(n):
    t = Tally()
    start = time.perf_counter()
    CRITERIA[n](t)
    secs = time.perf_counter() - start
    detail = f"{t.count} checks, {secs:.1f}s"
    if t.failed:
        detail += "; failed: " + ", ".join(t.failed[:5])
    if t.skipped:
        detail += "; skipped: " + ", ".join(t.skipped[:5])
    return t.status, f"criterion {n}: {t.status} ({detail})"


@pytest.mark.slow
@pytest.mark.parametrize("n", range(1, 11))
def test_criterion(n):
    status, line = evaluate_criterion(n)
    ACCEPTANCE_LINES.append(line)
    print(line)
    assert status == "PASS", line


if __name__ == "__main__":
    chosen = [int(a) for a in sys.argv[1:]] or list(CRITERIA)
    results = []
    for n in chosen:
        status, line = evaluate_criterion(n)
        print(line, flush=True)
        results.append(status)
    sys.exit(0 if all(s == "PASS" for s in results) else 1)
