"""The ten acceptance criteria, each at its stated tolerance.

Every suite runs once per session at the default settings (32-point grid,
rank tolerance 1e-8).  Each test records a PASS/FAIL line in ``ACCEPTANCE``,
which the terminal summary prints one per criterion.
"""

import pytest

from conftest import ACCEPTANCE
from conelab.suites import Settings, run_suite

PWEXP = "holonomy-catalog/doubled:plane_wave_exp/"
PWEXP_REASON = ("the computed holonomy of the doubled e^z y^2 plane wave has dimension 3 and strictly contains "
                "the printed two-dimensional span; see the plane-wave entry of notes/decisions.md")


@pytest.fixture(scope="session")
def suite():
    cache = {}

    def get(name):
        if name not in cache:
            cache[name] = {c.id: c for c in run_suite(name, Settings()).checks}
        return cache[name]
    return get


def record(k, checks, text):
    bad = [c.id for c in checks if not c.passed]
    ACCEPTANCE[k] = (not bad, text if not bad else f"{text}; failing: {', '.join(bad)}")
    assert checks, "no checks collected"
    assert not bad, "\n".join(f"{c.id}: {c.value} {c.comparison} {c.threshold} {c.details}"
                              for c in checks if not c.passed)


def select(checks, prefix, exclude=()):
    return [c for k, c in checks.items() if k.startswith(prefix) and not any(k.startswith(e) for e in exclude)]


def test_criterion_1_cone_identities(suite):
    s = suite("cone-identities")
    checks = [s[f"cone-identities/{b}/{p}"] for b in ("flat2", "sphere2", "hyperbolic2", "cw2")
              for p in ("lc", "curv", "ric")]
    assert all(c.threshold == 1e-8 and c.details["points"] == 32 for c in checks)
    worst = max(c.value for c in checks)
    record(1, checks, f"cone connection/curvature/Ricci residuals on 4 bases, max {worst:.1e} < 1e-8")


def test_criterion_2_flat_cone(suite):
    s = suite("cone-identities")
    checks = [s["cone-identities/hyperbolic2/cone-curvature-norm"], s["cone-identities/sphere2/as-dim"]]
    assert checks[0].threshold == 1e-9 and checks[1].threshold == 3
    record(2, checks, f"cone over H^2 curvature norm {checks[0].value:.1e} < 1e-9; "
                      f"cone over S^2 AS dim {checks[1].value} == 3")


def test_criterion_3_doubled_derivatives(suite):
    s = suite("doubled-derivatives")
    checks = list(s.values())
    assert len(select(s, "doubled-derivatives/sphere2/u=")) == 15
    worst = max(c.value for c in checks)
    record(3, checks, f"mixed derivatives p,q <= 2 and (-1)^q (q+1)!/u^q at u in {{0.5,1,2}}, max {worst:.1e} < 1e-8")


def test_criterion_4_psi_isometry(suite):
    s = suite("psi-isometry")
    checks = [s["psi-isometry/flat1"], s["psi-isometry/sphere2"]]
    assert all(c.threshold == 1e-10 for c in checks)
    record(4, checks, f"psi residual max {max(c.value for c in checks):.1e} < 1e-10 on flat R^1 and S^2")


def test_criterion_5_holonomy_catalog(suite):
    """CW, S^2 and pp-wave parts; the plane-wave part is the strict xfail below."""
    s = suite("holonomy-catalog")
    checks = [s["holonomy-catalog/doubled:cw2/dim"], s["holonomy-catalog/doubled:cw2/translations"],
              s["holonomy-catalog/doubled:sphere2/dim"], s["holonomy-catalog/doubled:ppwave2/translations"],
              s["holonomy-catalog/doubled:ppwave2/translations-orthogonal"], s[PWEXP + "printed-contained"]]
    pw = [s[PWEXP + "dim"], s[PWEXP + "printed-distance"]]
    pw_ok = all(c.passed for c in pw)
    text = ("doubled CW dim 5 / T dim 3, doubled S^2 dim 3, pp-wave T = d_x^perp dim 3; "
            f"plane wave dim {pw[0].value} (expected 2), printed distance {pw[1].value:.2g}")
    ACCEPTANCE[5] = (pw_ok and all(c.passed for c in checks), text)
    assert all(c.passed for c in checks), [c.id for c in checks if not c.passed]


@pytest.mark.xfail(strict=True, reason=PWEXP_REASON)
def test_criterion_5_plane_wave_two_dimensional(suite):
    s = suite("holonomy-catalog")
    dim, dist = s[PWEXP + "dim"], s[PWEXP + "printed-distance"]
    assert dim.value == 2 and dist.value < 1e-8


def test_criterion_6_projection(suite):
    s = suite("holonomy-catalog")
    checks = select(s, "holonomy-catalog/projection/")
    assert len(checks) == 6 and all(c.threshold == 1e-6 for c in checks)
    record(6, checks, f"projection distance max {max(c.value for c in checks):.1e} < 1e-6 on 6 catalog bases")


def test_criterion_7_cohomology(suite):
    s = suite("cohomology")
    checks = list(s.values())
    assert s["cohomology/so3-R3/h1"].value == 0
    assert len(select(s, "cohomology/type2/")) == 3
    record(7, checks, "H^1(so3,R^3)=0; types 1, 3 and quotients H^1=0; type 2 matches the closed-form prediction")


def test_criterion_8_null_plane(suite):
    s = suite("null-plane")
    checks = [c for k, c in s.items() if "control" not in k]
    for cfg in ("null_plane_default", "null_plane_f2_x1", "null_plane_g0_u"):
        keys = [k for k in s if k.startswith(f"null-plane/{cfg}/")]
        assert f"null-plane/{cfg}/fundamental/ab_identity" in keys
        assert f"null-plane/{cfg}/cone-plane" in keys and s[f"null-plane/{cfg}/system"].threshold == 1e-9
    worst = max(c.value for c in checks)
    record(8, checks, f"system < 1e-9, fundamental equations and cone plane < 1e-8 on 3 configs, max {worst:.1e}")


def test_criterion_9_transport(suite):
    s = suite("holonomy-catalog")
    checks = select(s, "holonomy-catalog/loops/")
    ratio = s["holonomy-catalog/loops/sphere2/convergence-ratio"]
    assert ratio.threshold == [1.5, 4.5] and len(checks) == 8
    loops = [c for c in checks if c.id.split("/")[-1] not in ("convergence-ratio", "metric-preserved")]
    assert len(loops) == 6 and all(c.threshold == 1e-5 for c in loops)
    worst = max(c.value for c in loops)
    record(9, checks, f"S^2 residual ratio {ratio.value:.2f} in [1.5, 4.5]; loop vs AS distance max {worst:.1e} < 1e-5")


def test_criterion_10_negative_controls(suite):
    checks = [suite("psi-isometry")["psi-isometry/sphere2/control-corrupted-psi"],
              suite("null-plane")["null-plane/control-corrupted-beta"],
              suite("null-plane")["null-plane/control-corrupted-eta"]]
    assert all(c.kind == "control" and c.threshold == 1e-3 for c in checks)
    record(10, checks, "corrupted psi/beta/eta residuals " + ", ".join(f"{c.value:.2g}" for c in checks) + " > 1e-3")
