from fractions import Fraction

from densityforge import EMPTY, NAT, DarbouxRequest, ap, construct, estimate_upper_asymptotic
from densityforge.counterexamples import Example4Family, default_samples, symmetric_darboux_demo
from densityforge.plotting import plot_demo, plot_estimate, plot_trace

PNG = b"\x89PNG"


def test_trace_figure(tmp_path):
    t = construct(DarbouxRequest(EMPTY, NAT, Fraction(1, 3), 4))
    path = plot_trace(t, tmp_path / "sub" / "trace.png")
    assert path.read_bytes()[:4] == PNG


def test_estimate_figure(tmp_path):
    est = estimate_upper_asymptotic(ap(5, 1), [100, 1000, 10000])
    path = plot_estimate(est, tmp_path / "est.png", reference=Fraction(1, 5))
    assert path.read_bytes()[:4] == PNG
    assert plot_estimate(est, tmp_path / "bare.svg").read_text().startswith("<?xml")


def test_demo_figure(tmp_path):
    fam = Example4Family()
    rep = symmetric_darboux_demo(fam, default_samples(fam))
    assert plot_demo(rep, tmp_path / "demo.png").stat().st_size > 1000
