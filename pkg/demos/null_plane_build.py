"""Build a metric with a parallel totally null plane on its cone.

From null-plane data (f1, f2, c, g0) the first-order system for eta is solved
in closed form.  The resulting metric ds^2 + e^{-2s} g0(u) + 2 du eta carries
null fields V = d_t and Z = d_s, and the plane span{V, xi + Z} is parallel on
the time-like cone.  The script prints the residuals for the packaged
u-dependent example.

Run: python3 demos/null_plane_build.py
"""

from conelab.suites import Settings, null_plane_checks, packaged_config

config = packaged_config("null_plane_g0_u")
print("data:", {k: v for k, v in config.items() if k != "settings"})
checks, chart = null_plane_checks(config, Settings(grid=8), "demo")
print(f"chart {chart.label} on coordinates {chart.coords}, signature {chart.signature}")
for c in checks:
    print(f"  {'ok  ' if c.passed else 'FAIL'} {c.id:40s} {c.value:.2e}")
