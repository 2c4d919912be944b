"""Acceptance criteria 1-10. Each test prints a single PASS/FAIL line."""
import random
import time
from fractions import Fraction

from dcontact import (
    DarbouxScheme,
    FreeComplex,
    Poly,
    build_contact_darboux,
    build_symplectic_darboux,
    check_contact,
    check_d_squared,
    check_master_equation,
    check_scale_invariance,
    check_symplectic,
    cocone,
    cone,
    d_int,
    evaluate,
    ddr,
    homology_ranks,
    identity_map,
    is_acyclic,
    is_quasi_iso,
    pairing_identity_table,
    reeb_solutions,
    shift,
    symplectify,
    vdim_extension,
    weight_grading,
)
from dcontact.complexes import kernel_to_cocone
from dcontact.darboux import darboux_algebra, omega0
from conftest import corpus_cases, run_case
from modelgen import random_complex, random_models, random_pointed_models, random_surjection


def verdict(n, ok, detail=""):
    print(f"criterion {n}: {'PASS' if ok else 'FAIL'} {detail}".rstrip())
    assert ok, detail


def _euler_ok(C: FreeComplex) -> bool:
    return C.euler() == sum((-1) ** (i % 2) * r for i, r in homology_ranks(C))


def _random_point(rng, A):
    vals = {}
    for v in A.true_generators:
        if v.degree == 0:
            vals[v.name] = Fraction(rng.randint(-5, 5), rng.randint(1, 4))
    return A.point(vals)


# 1 --------------------------------------------------------------------------------

def test_bicomplex_identities():
    t0 = time.perf_counter()
    models = random_models(101, 60) + random_models(202, 50, ks=(-1, -3), contact=True)
    bad = []
    for s, H in models:
        A, _ = darboux_algebra(s, H)
        if not check_d_squared(A).passed:
            bad.append(f"d^2 on {s}")
        gens = A.true_generators
        probes = [Poly.var(v) for v in gens]
        if len(gens) > 1:
            probes.append(Poly.var(gens[0]) * Poly.var(gens[-1]))
            probes.append(Poly.var(gens[1]) * Poly.var(gens[-1]))
        for p in probes:
            w = ddr(p, A)
            if ddr(w, A):
                bad.append(f"ddr^2 {p}")
            if ddr(d_int(w, A), A) + d_int(ddr(w, A), A) or d_int(ddr(p, A), A) + ddr(d_int(p, A), A):
                bad.append(f"anticommutation {p}")
            if d_int(d_int(w, A), A):
                bad.append(f"d^2 on D({p})")
    dt = time.perf_counter() - t0
    verdict(1, not bad and len(models) >= 100 and dt < 10, f"{len(models)} algebras, {dt:.2f}s {bad[:3]}")


# 2 --------------------------------------------------------------------------------

def test_cme_d_squared_equivalence():
    agree = 0
    for s, H in random_models(7, 60, ks=(-1, -3, -5)):
        A, _ = darboux_algebra(s, H)
        assert check_master_equation(A, H).passed
        assert check_d_squared(A).passed
        agree += 1
    s = DarbouxScheme(-3, (0, 2))
    v = s.variables()
    H = Poly.var(v["x1_1"]) * Poly.var(v["x1_2"]) + Poly.var(v["y1_1"])
    A, _ = darboux_algebra(s, H)
    rep = check_master_equation(A, H)
    x2 = Poly.var(v["x1_2"])
    residual = rep.data["residual"]
    ok = not rep.passed and residual in (x2, -x2) and not check_d_squared(A).passed
    verdict(2, ok and agree == 60, f"{agree} random H agree; violator residual {residual}")


# 3 --------------------------------------------------------------------------------

def test_darboux_postconditions():
    t0 = time.perf_counter()
    cases = []
    for k in (-1, -2, -3, -4):
        probe = DarbouxScheme(k)
        for c in range(1, 3):
            counts = [c] + [0] * probe.top
            cases.append((DarbouxScheme(k, tuple(counts)), None))
            if probe.top:
                cases.append((DarbouxScheme(k, tuple([1] * (probe.top + 1))[:3]), None))
        if probe.case == "mod4-2":
            cases.append((DarbouxScheme(k, (1,), zcount=2), None))
    nonzero = {-1: 0, -3: 0, -4: 0}  # k = -2 admits no nonzero rational H
    for s, H in random_models(33, 40):
        if max(s.pair_counts()) <= 2 and H:
            cases.append((s, H))
            nonzero[s.k] += 1
    failures = []
    for s, H in cases:
        M = build_symplectic_darboux(s, H)
        A, k = M.algebra, s.k
        om, phi = omega0(A.layout), M.phi
        Hp = M.hamiltonian
        if d_int(om, A) or ddr(om, A) or (ddr(phi, A) - om * k) or (ddr(Hp, A) + d_int(phi, A)):
            failures.append(str(s))
    dt = time.perf_counter() - t0
    verdict(3, not failures and min(nonzero.values()) >= 3 and dt < 5,
            f"{len(cases)} models, nonzero H per k {nonzero}, {dt:.2f}s {failures[:2]}")


# 4 and 8 share the same contact models ---------------------------------------------

def _contact_models():
    """Generator-mode contact models for k in {-1, -3}, each at one admissible point.

    Models with H = 0 are taken at five random points; the others are centred at
    their own random point.
    """
    rng = random.Random(44)
    out = []
    for s, H, vals in random_pointed_models(404, 16):
        M = build_contact_darboux(s, H)
        if H:
            out.append((s, M, M.algebra.point(vals)))
        else:
            out.extend((s, M, _random_point(rng, M.algebra)) for _ in range(5))
    return out


CONTACT = _contact_models()


def test_contact_darboux_verification():
    bad = []
    for s, M, p in CONTACT:
        A, k = M.algebra, s.k
        cr = check_contact(M.alpha, A, p)
        expected = {}
        for x, y, _i in A.layout.pairs:
            for v in (x, y):
                expected[-v.degree] = expected.get(-v.degree, 0) + 1
        ranks = {i: len(b) for i, b in cr.kernel_basis.items()}
        reeb = reeb_solutions(M.alpha, A, p)
        ok = (
            cr.verdict
            and ranks == expected
            and cr.cokernel == {-k: 1}
            and reeb.passed
            and {n: c for n, c in reeb.data["particular"].items() if c} == {"z": Fraction(-1)}
        )
        if not ok:
            bad.append(f"{s} at {p}")
    per_k = {k: sum(1 for s, _, _ in CONTACT if s.k == k) for k in (-1, -3)}
    verdict(4, not bad and min(per_k.values()) >= 5, f"(model, point) pairs per k {per_k} {bad[:2]}")


# 5 --------------------------------------------------------------------------------

def test_spectator_failure():
    s = DarbouxScheme(-1, (1,), contact=True, spectators=1)
    M = build_contact_darboux(s)
    p = M.algebra.point({"x0_1": 0, "xt_1": 0})
    cr = check_contact(M.alpha, M.algebra, p)
    line = cr.report.check("pairing-quasi-iso").line()
    ok = not cr.verdict and cr.degenerate_directions == ["∂/∂xt_1"]
    verdict(5, ok, line)


# 6 --------------------------------------------------------------------------------

def test_scale_invariance():
    rng = random.Random(66)
    n = 0
    bad = []
    for s, H, vals in random_pointed_models(606, 24):
        M = build_contact_darboux(s, H)
        A = M.algebra
        p = A.point(vals)
        x = [v for v in A.true_generators if v.degree == 0]
        g = Poly.const(rng.choice([1, 2, -3]))
        if x:
            g = g + Poly.var(rng.choice(x)).scale(rng.randint(-2, 2))
        if not evaluate(g, p):
            g = g + Poly.const(1)
        rep = check_scale_invariance(M.alpha, g, A, p)
        n += 1
        if not rep.passed:
            bad.append(f"{s} g={g}")
    verdict(6, not bad and n >= 20, f"{n} triples {bad[:2]}")


# 7 --------------------------------------------------------------------------------

def test_cone_laws():
    rng = random.Random(77)
    bad = []
    for _ in range(10):
        C = random_complex(rng)
        if not is_acyclic(cone(identity_map(C))):
            bad.append("cone(id)")
    n = 0
    for _ in range(60):
        f = random_surjection(rng)
        co, c = cocone(f), shift(cone(f), -1)
        if co.basis != c.basis or co.diffs != c.diffs:
            bad.append("cocone != cone[-1]")
        if not is_quasi_iso(kernel_to_cocone(f)).passed:
            bad.append("kernel -> cocone")
        for X in (f.source, f.target, cone(f), co):
            if not _euler_ok(X):
                bad.append("euler")
        if cone(f).euler() != f.target.euler() - f.source.euler():
            bad.append("euler(cone)")
        n += 1
    verdict(7, not bad and n >= 50, f"{n} surjections {bad[:2]}")


# 8 --------------------------------------------------------------------------------

def test_symplectification():
    t0 = time.perf_counter()
    bad = []
    seen = set()
    for s, M, p in CONTACT:
        key = (s, str(M.hamiltonian), tuple(sorted(p.items())))
        if key in seen:
            continue
        seen.add(key)
        S = symplectify(M.algebra, M.alpha, p)
        for fv in (1, 2, Fraction(-1, 3)):
            if not check_symplectic(S, p, fv).passed:
                bad.append(f"{s} f={fv}")
        if not vdim_extension(S).passed or not weight_grading(S).passed:
            bad.append(f"{s} vdim/weight")
    dt = time.perf_counter() - t0
    verdict(8, not bad and dt < 5, f"{len(seen)} models x 3 f-values, {dt:.2f}s {bad[:2]}")


# 9 --------------------------------------------------------------------------------

def test_pairing_identity():
    total = 0
    bad = []
    for s in (DarbouxScheme(-1, (1,), contact=True), DarbouxScheme(-3, (0, 1), contact=True)):
        M = build_contact_darboux(s)
        A = M.algebra
        p = A.point({v.name: 1 for v in A.true_generators if v.degree == 0})
        S = symplectify(A, M.alpha, p)
        for row in pairing_identity_table(S):
            total += 1
            if not row["match"]:
                bad.append(f"{row['sigma']},{row['eta']}")
    verdict(9, not bad and total == 32, f"{total} basis pairs {bad[:2]}")


# 10 -------------------------------------------------------------------------------

def test_cli_golden_corpus(capsys):
    cases = corpus_cases()
    manifests = {m for _, m, _ in cases}
    bad = []
    for case, manifest, rest in cases:
        golden = (manifest.parent / f"{case}.golden").read_text(encoding="utf-8")
        first = run_case(manifest, rest, capsys)
        second = run_case(manifest, rest, capsys)
        if first != golden or second != golden:
            bad.append(case)
    with capsys.disabled():
        verdict(10, not bad and len(manifests) >= 8, f"{len(cases)} cases over {len(manifests)} manifests {bad}")
