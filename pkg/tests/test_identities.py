"""Closed-form identity verifiers: parity, Coulomb recovery, consistency."""

import math

import numpy as np
import pytest

from dipole_lab import (
    sinc_integral_with_tail,
    verify_coulomb_recovery,
    verify_field_consistency,
    verify_odd_angular_integral,
    verify_vector_identities,
)

HALF_PI = 0.5 * math.pi


def test_odd_angular_integral_cancels_exactly():
    # mirror-paired accumulation sums each antisymmetric node pair to a
    # bitwise zero before any weight touches it, so the report is exact
    report = verify_odd_angular_integral(20.0, 2.0, 3.0)
    assert report.lhs == 0.0
    assert report.rel_err == 0.0
    assert report.passed


def test_split_polar_rule_shows_the_residue_symmetry_removes():
    # two unequal polar subpanels break the mirror pairing: what remains is
    # honest quadrature residue, tiny but nonzero, and it fails the
    # exact-zero bar on purpose
    report = verify_odd_angular_integral(20.0, 2.0, 3.0, split_polar=True)
    assert 0.0 < report.rel_err < 1e-9
    assert not report.passed


def test_odd_angular_integral_rejects_bad_arguments():
    with pytest.raises(ValueError):
        verify_odd_angular_integral(-1.0, 2.0, 3.0)


def test_sinc_integral_approaches_half_pi():
    value = sinc_integral_with_tail(200.0)
    assert abs(value - HALF_PI) < 1e-4 * HALF_PI
    # the error is dominated by the truncated asymptotic tail, not by the
    # panel rule, so refining the panels must not move the result upward by
    # more than a hair
    err1 = abs(sinc_integral_with_tail(200.0) - HALF_PI)
    err2 = abs(sinc_integral_with_tail(200.0, refine=2) - HALF_PI)
    assert err2 <= 1.1 * err1
    # and pushing the truncation out shrinks the tail itself
    assert abs(sinc_integral_with_tail(2000.0) - HALF_PI) < 0.2 * err1


def test_coulomb_pair_recovery():
    report = verify_coulomb_recovery(2.0, 1.0, 100.0)
    assert report.passed
    assert report.rel_err < 1e-4
    # equal radii cancel bitwise before any quadrature error can enter
    equal = verify_coulomb_recovery(1.5, 1.5, 100.0)
    assert equal.lhs == 0.0 and equal.abs_err == 0.0


def test_vector_identities_hold_to_rounding():
    report = verify_vector_identities(1000)
    assert report.passed
    assert report.abs_err < 1e-12
    with pytest.raises(ValueError):
        verify_vector_identities(0)


def test_field_consistency_after_emission(spec, grid_main, t_after):
    points = [((1.1, 0.4, 0.8), t_after), ((0.6, -0.9, 1.0), t_after + 0.3)]
    report = verify_field_consistency(spec, grid_main, points)
    assert report.passed
    assert report.rel_err < 1e-3
