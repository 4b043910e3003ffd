"""One test per acceptance criterion.

The full catalog run is done twice through the console script; criteria 1–8
read their suite from the first report and criterion 9 compares the two
outputs byte for byte.  Time bounds are measured in-process.
"""

import json
import re
import subprocess
import sys
import time

import pytest

from iqframes.suites import morita_suite, quantale_suite

pytestmark = pytest.mark.slow

CMD = [sys.executable, "-m", "iqframes.cli", "catalog", "--suite", "full", "--json-only"]


@pytest.fixture(scope="session")
def full_runs():
    outs = []
    for _ in range(2):
        proc = subprocess.run(CMD, capture_output=True, check=False)
        assert proc.returncode == 0, proc.stdout[-2000:]
        outs.append(proc.stdout)
    return outs


@pytest.fixture(scope="session")
def report(full_runs):
    return json.loads(full_runs[0])


def suite(report, k):
    """``{check name: instances}`` for suite ``k``; every listed check must pass."""
    s = report["result"]["suites"][str(k)]
    out = {}
    for c in s["checks"]:
        assert c["pass"], (k, c)
        m = re.fullmatch(r"(\d+) instances, (\d+) failures", c["detail"])
        assert m and m.group(2) == "0", c
        out[c["check"]] = int(m.group(1))
    assert s["pass"]
    return out


def covers(checks, names):
    missing = [n for n in names if checks.get(n, 0) == 0]
    assert not missing, missing


def test_criterion_1_quantale_axioms(report):
    checks = suite(report, 1)
    assert checks["catalog groupoids"] == 66
    covers(checks, [
        "support: spp(a) ≤ aa*",
        "support: a ≤ spp(a)a",
        "stability: spp(ab) = spp(a spp(b))",
        "partial units cover: ⋁Q_I = 1",
        "a ≤ aa*a",
        "stably Gelfand: aa*a ≤ a ⟹ aa*a = a",
    ])
    start = time.perf_counter()
    rep = quantale_suite()
    elapsed = time.perf_counter() - start
    assert rep.passed
    assert elapsed < 60, elapsed


def test_criterion_2_inner_product_equivalence(report):
    checks = suite(report, 2)
    assert checks["catalog sheaves"] > 0
    assert checks["element pairs compared"] > checks["catalog sheaves"]
    covers(checks, ["inner_fast = inner_oracle on all element pairs"])


def test_criterion_3_hilbert_module_laws(report):
    checks = suite(report, 3)
    covers(checks, [
        "Parseval",
        "non-degeneracy",
        "⟨x,x⟩ ∧ e = spp_X(x)",
        "I(X): ⟨xr*,y⟩ = ⟨x,yr⟩",
        "O(H): ⟨xr*,y⟩ = ⟨x,yr⟩",
        "partial-unit action laws",
    ])


def test_criterion_4_direct_image_calculus(report):
    checks = suite(report, 4)
    covers(checks, [
        "(π1)_!(x⊗y) = spp_Y(y)x and (π2)_!(x⊗y) = spp_X(x)y",
        "spp(x⊗y) = spp_X(x) ∧ spp_Y(y)",
        "{s⊗t} is join-dense (Hilbert basis)",
        "compatible joins: ⋁ s_i⊗t_i = (⋁s_i)⊗(⋁t_i) with both joins sections",
        "⟨f,g⟩_!(s) = f_!(s)⊗g_!(s)",
        "Δ_!(s) = s⊗s",
        "π1 of a pullback of an open surjection is an open surjection",
    ])


def test_criterion_5_principality_stack(report):
    checks = suite(report, 5)
    covers(checks, [
        "four principal-section conditions agree",
        "principally covered bisheaf ⟺ free action",
        "free ⟹ principal sections = local bisections",
        "[act*,π2*](s⊗t) = ⟨s,t⟩⊗t; covered ⟹ mono; covered ⟺ free",
        "φ♯∘⟨act,π2⟩* = id with φ♯(u⊗t) = ut⊗t",
    ])


def test_criterion_6_biprincipality(report):
    checks = suite(report, 6)
    covers(checks, [
        "interchange ⟺ biprincipal",
        "φ: composite ≅ unit bisheaf",
        "ψ: composite ≅ unit bisheaf",
        "η splits φ on both sides",
        "η splits ψ on both sides",
    ])
    assert checks["biprincipal bisheaves"] == checks["φ: composite ≅ unit bisheaf"]


def test_criterion_7_morita_decision(report):
    checks = suite(report, 7)
    assert checks["ordered pairs decided"] >= 100
    covers(checks, [
        "decide_morita agrees with morita_oracle",
        "P2 ~ T",
        "P3 ~ T",
        "Z2 ≁ T",
        "G ~ G for every catalog groupoid",
    ])
    start = time.perf_counter()
    assert morita_suite(threads=1).passed
    single = time.perf_counter() - start
    start = time.perf_counter()
    assert morita_suite(threads=2).passed
    parallel = time.perf_counter() - start
    assert single < 600, single
    assert parallel < 120, parallel


def test_criterion_8_functor_bridge(report):
    checks = suite(report, 8)
    assert checks["⟨φ⟩ is principal"] == checks["catalog functors"]
    covers(checks, [
        "functor recovered from the section is φ",
        "⟨φ∘ψ⟩ ≅ ⟨φ⟩⊗⟨ψ⟩",
        "essential equivalence ⟹ ⟨φ⟩ is HS-invertible",
    ])


def test_criterion_9_cli_determinism(full_runs):
    first, second = full_runs
    assert first == second
    assert json.loads(first)["status"] == "pass"
