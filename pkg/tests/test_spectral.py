# tests/test_spectral.py
"""
Spectral covers and their bisections: exact norm identities, invariance
against the declared bundle, perturbation detection, descent to the ruled
quotient and the local regular charts.
"""

from __future__ import annotations

import cmath
import random

import pytest

from spectral_forge import (
    AtiyahRegular,
    LineBundleOnX,
    PellMap,
    PerturbedMap,
    Poly,
    QI,
    SpectralCover,
    TwoSections,
    check_invariance,
    graph_in_ruled_surface,
    invariance_residual,
    make_extension,
    sample_circle,
)
from spectral_forge.errors import VerificationError
from spectral_forge.spectral import bisection_torus_degree, regular_chart
from conftest import (
    TAU_DYADIC,
    cover_g1,
    pell_g0,
    pell_g1,
    pell_g2,
    surf_plain,
)


# ============================================================
# Exact Pell identities
# ============================================================

def test_pell_identity_is_checked_exactly():
    cov = cover_g1()
    with pytest.raises(ValueError):
        # U^2 - f V^2 != R^2 for this triple
        PellMap(cov, Poly.of(3), Poly.of(1), Poly.of(1), QI.of(1))


def test_pell_norm_is_constant_squared_scale():
    pm = pell_g1(QI.of(2))
    assert pm.norm_constant() == QI.of(4)
    rng = random.Random(3)
    for _ in range(10):
        b = cmath.rect(2.0, rng.uniform(0, 6.28))
        v0, v1 = pm.sheet_values(b)
        assert abs(v0 * v1 - 4.0) < 1e-9


def test_pell_inverse_multiplies_to_one():
    pm = pell_g2()
    inv = pm.inverse()
    for b in sample_circle(12, 2.0):
        w = pm.cover.sheets(b)[0]
        assert abs(pm.evaluate_at(b, w) * inv.evaluate_at(b, w) - 1.0) < 1e-9


def test_sheet_flip_swaps_values():
    pm = pell_g1()
    flip = pm.sheet_flip()
    for b in sample_circle(8, 2.0):
        v = pm.sheet_values(b)
        f = flip.sheet_values(b)
        assert abs(v[0] - f[1]) < 1e-12 and abs(v[1] - f[0]) < 1e-12


def test_two_sections_basics():
    ts = TwoSections(0.7 + 0.1j, 1.3 - 0.2j)
    assert ts.sheet_values(0.4) == (0.7 + 0.1j, 1.3 - 0.2j)
    assert abs(ts.norm_value() - (0.7 + 0.1j) * (1.3 - 0.2j)) < 1e-15
    inv = ts.inverse()
    assert abs(inv.evaluate(0.0, 0) * ts.evaluate(0.0, 0) - 1.0) < 1e-15
    assert bisection_torus_degree(ts) == 0


def test_torus_degree_is_inversion_invariant_and_positive_for_maps():
    for pm in (pell_g0(), pell_g1(), pell_g2()):
        d = bisection_torus_degree(pm)
        assert d >= 1
        assert bisection_torus_degree(pm.inverse()) == d
        assert bisection_torus_degree(pm.sheet_flip()) == d


def test_cover_totals():
    s = surf_plain()
    from spectral_forge import BasePoint
    cov = SpectralCover(s, ((BasePoint.of(3), 2), (BasePoint.of(-1), 1)),
                        pell_g1())
    assert cov.vertical_total() == 3
    assert cov.n_total() == 3 + cov.torus_degree()
    with pytest.raises(ValueError):
        SpectralCover(s, ((BasePoint.of(3), 0),), pell_g1())


# ============================================================
# Invariance
# ============================================================

def test_corpus_covers_are_invariant(invariant_covers):
    for cov, delta in invariant_covers:
        res = invariance_residual(cov, delta, 32)
        assert res < 1e-9
        assert check_invariance(cov, delta, 32)


def test_wrong_bundle_is_detected(invariant_covers):
    cov, delta = invariant_covers[0]
    off = LineBundleOnX(delta.surface, 0, delta.constant_factor * 1.05)
    assert invariance_residual(cov, off, 32) > 1e-3
    assert not check_invariance(cov, off, 32)


@pytest.mark.parametrize("eps", [1e-3, 1e-3j])
def test_perturbed_map_is_detected(invariant_covers, eps):
    for cov, delta in invariant_covers[:5]:
        broken = SpectralCover(cov.surface, cov.verticals,
                               PerturbedMap(cov.bisection, eps))
        res = invariance_residual(broken, delta, 32)
        assert res > 1e-4
        assert not check_invariance(broken, delta, 32)


# ============================================================
# Descent to the ruled quotient
# ============================================================

def test_graph_orbits_are_sorted_and_invariant(invariant_covers):
    cov, delta = invariant_covers[2]  # genus-1 irreducible bisection
    graph = graph_in_ruled_surface(cov, delta, 24)
    assert graph.ruling_fibres == cov.verticals
    assert len(graph.section_points) == 24
    curve = cov.curve
    for b, (lo, hi) in graph.section_points:
        v0, v1 = cov.bisection.sheet_values(b)
        assert ({curve.canonical_rep(lo).value, curve.canonical_rep(hi).value}
                == {curve.canonical_rep(v0).value, curve.canonical_rep(v1).value}
                or curve.same_point(lo * hi, v0 * v1))
        assert abs(lo) <= abs(hi) + 1e-12


def test_graph_requires_invariance():
    s = surf_plain()
    cov = SpectralCover(s, (), TwoSections(0.7, 1.3))
    wrong = LineBundleOnX(s, 0, 2.2)
    with pytest.raises(VerificationError):
        graph_in_ruled_surface(cov, wrong, 16)


def test_graph_meets_fixed_locus_at_branch_values():
    # two equal constant sections: every base point is a fixed-locus meet
    s = surf_plain()
    a = 1.1 + 0.3j
    cov = SpectralCover(s, (), TwoSections(a, a))
    delta = LineBundleOnX(s, 0, a * a)
    graph = graph_in_ruled_surface(cov, delta, 8)
    assert len(graph.fixed_meets) == 8


# ============================================================
# Regular charts
# ============================================================

def test_regular_chart_splits_generic_pair():
    curve = surf_plain().curve
    a1, a2 = 0.7 + 0.1j, 1.3 - 0.2j
    ch = regular_chart(curve, a1, a2)
    assert abs(ch.scale ** 2 - a1 * a2) < 1e-12
    fc = make_extension(curve, 1.0 + 0j, ch.p, ch.q)
    # scaled back by the determinant split, the factors are {a1, a2}
    facs = [fc.l1.factor * ch.scale, fc.l2.factor * ch.scale]
    assert ((curve.same_point(facs[0], a1) and curve.same_point(facs[1], a2))
            or (curve.same_point(facs[0], a2) and curve.same_point(facs[1], a1)))


def test_regular_chart_at_branch_value_is_nonsplit():
    curve = surf_plain().curve
    a = 0.9 + 0.4j
    ch = regular_chart(curve, a, a)
    fc = make_extension(curve, 1.0 + 0j, ch.p, ch.q)
    assert isinstance(fc, AtiyahRegular)
    assert curve.same_point(fc.line.factor * ch.scale, a)
