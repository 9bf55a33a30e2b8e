"""The ten acceptance criteria, one test each; every test prints one PASS/FAIL line.

Run directly (python tests/test_acceptance.py) or through pytest, where the
lines are also collected in the terminal summary.
"""
import time
from fractions import Fraction

import pytest

from stabglue import oracle
from stabglue.linalg import GF
from stabglue.scenarios import Report, ScenarioConfig, hn_oracle_records, run_scenario, semistable_iff_records

try:
    from conftest import ACCEPTANCE_LINES
except ImportError:  # run as a script
    ACCEPTANCE_LINES = []

THETAS = tuple(Fraction(k, 6) for k in range(5))


def _report(n, title, ok, detail, t0):
    line = f"criterion {n:2d} {'PASS' if ok else 'FAIL'}  {title}  ({detail}; {time.perf_counter() - t0:.1f}s)"
    print(line)
    ACCEPTANCE_LINES.append(line)
    return ok


def _bad(rep):
    return [r["name"] for r in rep.records if r["status"] != "pass"]


def _names(rep, prefix):
    return [r for r in rep.records if r["name"].startswith(prefix)]


def test_c01_fractional_calabi_yau():
    t0 = time.perf_counter()
    rep = run_scenario(ScenarioConfig("serre-cy3", base="vect"))
    ok = len(rep.records) == 15 and rep.ok
    assert _report(1, "S^3 f = f[1] on vect, 3 kinds x shifts -2..2", ok, f"{len(rep.records)} classes, bad {_bad(rep)}", t0)


def test_c02_serre_duality():
    t0 = time.perf_counter()
    rep = run_scenario(ScenarioConfig("serre-duality", base="vect"))
    ok = len(rep.records) == 36 and rep.ok
    assert _report(2, "hom(f,g) = hom(g,Sf) on 36 ordered pairs", ok, f"{len(rep.records)} pairs, bad {_bad(rep)}", t0)


def test_c03_semistability_criterion():
    t0 = time.perf_counter()
    rep = Report("semistable-iff", {})
    semistable_iff_records("A2", 2, 5, rep)
    n = sum(r["certificate"]["objects"] for r in rep.records)
    both = all(r["certificate"]["semistable"] and r["certificate"]["unstable"] for r in rep.records)
    ok = len(rep.records) == 6 and rep.ok and both
    assert _report(3, "glued verdict = brute force, GF(2), dim <= 5, 3 charges x d0*/d1*", ok,
                   f"{n} object checks, bad {_bad(rep)}", t0)


def test_c04_disjoint_images():
    t0 = time.perf_counter()
    rep = run_scenario(ScenarioConfig("disjoint-images", base="a2"))
    certs = _names(rep, "disjoint/") and [r for r in rep.records if r["name"].endswith("/certificate")]
    ok = len(certs) == 5 and len(rep.records) == 15 and rep.ok
    assert _report(4, "d0* in ImD0, d1* in ImD1, never both; charge certificate per condition", ok,
                   f"{len(certs)} conditions, bad {_bad(rep)}", t0)


def test_c05_image_characterization():
    t0 = time.perf_counter()
    rep = run_scenario(ScenarioConfig("image-membership", base="a2", max_dim=3))
    core = [r for r in rep.records if "d0*" in r["name"]]
    hn_ok = all(r["certificate"]["hn"] == "passed-at-scale" for r in core)
    ok = len(core) == 8 and rep.ok and hn_ok
    assert _report(5, "s^-1 d0* = sigma = [1] j!^-1 d0*, HN property on the universe", ok,
                   f"{len(core)} pullbacks, bad {_bad(rep)}", t0)


def test_c06_path_endpoint():
    t0 = time.perf_counter()
    rep = run_scenario(ScenarioConfig("path-p1", base="k2", thetas=THETAS))
    names = {r["name"] for r in rep.records}
    need = {"path/endpoint d1*(2/3) = d0*(2/3) g_2/3", "path/charge identity", "path/phases 1, 2/3, 1/3"}
    hn = _names(rep, "path/hn-invariants/")
    ok = need <= names and len(hn) == 2 * len(THETAS) and rep.ok
    assert _report(6, "K2 endpoint identity, exact charges, phases 1, 2/3, 1/3, HN for theta in 0..2/3", ok,
                   f"{len(rep.records)} checks, bad {_bad(rep)}", t0)


def test_c07_torsion_pair():
    t0 = time.perf_counter()
    rep = run_scenario(ScenarioConfig("torsion-pair", base="a2", max_dim=5, thetas=(Fraction(2, 3),)))
    rec = rep.records[0] if rep.records else {"certificate": {}}
    ok = len(rep.records) == 1 and rep.ok
    assert _report(7, "torsion pair on the theta = 2/3 heart, GF(2), dim <= 5", ok,
                   f"{rec['certificate'].get('objects')} objects, {rec['certificate'].get('hom_checks')} Hom checks", t0)


def test_c08_morphism_equivalence():
    t0 = time.perf_counter()
    rep = run_scenario(ScenarioConfig("mor-equivalence"))
    cases = rep.records[0]["certificate"]["cases"]
    assert _report(8, "hom in Mor(vect) = hom of A2 complexes", rep.ok, f"{cases} cases", t0)


def test_c09_stab_of_a_point():
    t0 = time.perf_counter()
    rep = run_scenario(ScenarioConfig("stab-speck"))
    ok = len(rep.records) == 2 and rep.ok
    assert _report(9, "stable objects are shifts of k; group element maps sigma1 to sigma2", ok, f"bad {_bad(rep)}", t0)


def test_c10_hn_oracle():
    t0 = time.perf_counter()
    rep = Report("hn-oracle", {})
    hn_oracle_records("A2", 2, 5, THETAS, rep)
    hn_oracle_records("K2", 2, 4, (Fraction(0), Fraction(1, 2)), rep)
    glued = _names(rep, "hn/glued/")
    n = sum(r["certificate"]["objects"] for r in rep.records)
    ok = rep.ok and any("d0*sigma" in r["name"] for r in glued) and any("deg" in r["name"] for r in glued) \
        and any("glue(" in r["name"] for r in glued)
    assert _report(10, "hn_base / hn_glued = brute-force HN, every glue mode", ok,
                   f"{len(rep.records)} conditions, {n} objects, bad {_bad(rep)}", t0)


if __name__ == "__main__":
    import sys
    sys.exit(pytest.main([__file__, "-q"]))
