"""Printed closed-form correlation coefficients, transcribed term by term.

The expressions are deliberately left unsimplified so that a mismatch with
the trace engine points at the printed algebra rather than at a rewrite.
All functions accept scalars or numpy arrays.

Argument conventions follow the printed forms: ``t1..t4`` are polar angles,
``p1..p4`` azimuthal angles, and label tuples are in ascending m.  Restricted
variants (equator: all polar angles pi/2; meridian: all azimuthal angles 0;
"theta, 0, 0, 0": only the first polar angle free) take only their free
arguments.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Callable

import numpy as np
from numpy import cos, pi, sin

from .errors import NumericalError, UsageError


# spin-1 singlet ---------------------------------------------------------

def e321_general(labels, t1, t2, p1, p2):
    lm, l0, lp = labels
    return (1 / 192) * (
        24 * l0**2
        + 40 * l0 * (lm + lp)
        + 22 * (lm + lp) ** 2
        - 32 * (lm - lp) ** 2 * cos(t1) * cos(t2)
        + 2 * (-2 * l0 + lm + lp) ** 2 * cos(2 * t2)
        * ((3 + cos(2 * (p1 - p2))) * cos(2 * t1) + 2 * sin(p1 - p2) ** 2)
        + 2 * (-2 * l0 + lm + lp) ** 2 * (cos(2 * (p1 - p2)) + 2 * cos(2 * t1) * sin(p1 - p2) ** 2)
        - 32 * (lm - lp) ** 2 * cos(p1 - p2) * sin(t1) * sin(t2)
        + 8 * (-2 * l0 + lm + lp) ** 2 * cos(p1 - p2) * sin(2 * t1) * sin(2 * t2)
    )


def e321_spin(t1, t2, p1, p2):
    return -(2 / 3) * (cos(t1) * cos(t2) + cos(p1 - p2) * sin(t1) * sin(t2))


def e321_ks_101(t1, t2, p1, p2):
    return (1 / 24) * (
        11
        + cos(2 * (p1 - p2))
        + 4 * cos(p1 - p2) * sin(2 * t1) * sin(2 * t2)
        + 2 * (cos(2 * t1) + cos(2 * t2)) * sin(p1 - p2) ** 2
        + cos(2 * t1) * cos(2 * t2) * (cos(2 * (p1 - p2)) + 3)
    )


def e321_ks_010(t1, t2, p1, p2):
    return (1 / 3) * (cos(t1) * cos(t2) + cos(p1 - p2) * sin(t1) * sin(t2)) ** 2


def e321_ks_101_equator(p1, p2):
    return (1 / 6) * (cos(2 * (p1 - p2)) + 3)


def e321_ks_010_equator(p1, p2):
    return (1 / 3) * cos(p1 - p2) ** 2


def e321_ks_101_meridian(t1, t2):
    return (1 / 6) * (cos(2 * (t1 - t2)) + 3)


def e321_ks_010_meridian(t1, t2):
    return (1 / 3) * cos(t1 - t2) ** 2


def e321_enhanced(t1, t2):
    """Right-hand side of the enhanced combination, ``(cos 2d - cos d) / 2``."""
    return (1 / 2) * (-cos(t1 - t2) + cos(2 * (t1 - t2)))


def enhanced_from_parts(t1, t2, *, unit_spin_correlation: bool = True):
    """Left-hand side ``(1/2){E_spin + 3[2 E_KS - 1]}`` built from the meridian forms.

    As printed, the spin term is the spin-1 correlation ``-(2/3) cos d``;
    with that term the sum is ``(1/2)[-(2/3) cos d + cos 2d]`` and misses
    the right-hand side by ``cos(d) / 6``.  The identity holds when the spin
    term is the unit-amplitude spin-1/2 correlation ``-cos d``, i.e.
    ``(3/2) E_spin``, which is what ``unit_spin_correlation=True`` uses.
    """
    spin = e321_spin(t1, t2, 0.0, 0.0)
    if unit_spin_correlation:
        spin = 1.5 * spin
    return (1 / 2) * (spin + 3 * (2 * e321_ks_101_meridian(t1, t2) - 1))


def enhanced_combination(t1, t2, tol: float = 1e-12):
    value = e321_enhanced(t1, t2)
    other = enhanced_from_parts(t1, t2)
    if np.max(np.abs(np.asarray(value - other))) > tol:
        raise NumericalError("enhanced combination construction paths disagree")
    return value


# spin-3/2 singlet -------------------------------------------------------

def e421_spin(t1, t2, p1, p2):
    return -(5 / 4) * (cos(t1) * cos(t2) + cos(p1 - p2) * sin(t1) * sin(t2))


def e421_plastic_mmpp(t):
    """Labels (-1, -1, +1, +1), first polar angle ``t``, all others zero."""
    return (1 / 8) * (-7 * cos(t) - cos(3 * t))


def e421_plastic_mppm(t):
    """Labels (-1, +1, +1, -1)."""
    return (1 / 4) * (3 * cos(2 * t) + 1)


def e421_plastic_pmpm(t):
    """Labels (+1, -1, +1, -1)."""
    return (1 / 2) * (-cos(t) - cos(3 * t))


# general spin j ---------------------------------------------------------

def e_general_j(j, t1, t2, p1, p2):
    j = float(j)
    return -(j * (1 + j) / 3) * (cos(t1) * cos(t2) + cos(p1 - p2) * sin(t1) * sin(t2))


# four spin-1/2 ----------------------------------------------------------

def e241_general(t1, t2, t3, t4, p1, p2, p3, p4):
    return (1 / 3) * (
        cos(t3) * sin(t1) * (
            -cos(t4) * cos(p1 - p2) * sin(t2)
            + 2 * cos(t2) * cos(p1 - p4) * sin(t4)
        )
        + sin(t1) * sin(t3) * (
            2 * cos(t2) * cos(t4) * cos(p1 - p3)
            + (2 * cos(p1 + p2 - p3 - p4) + cos(p1 - p2) * cos(p3 - p4)) * sin(t2) * sin(t4)
        )
        + cos(t1) * (
            2 * sin(t2) * (
                cos(t4) * cos(p2 - p3) * sin(t3)
                + cos(t3) * cos(p2 - p4) * sin(t4)
            )
            + cos(t2) * (3 * cos(t3) * cos(t4) - cos(p3 - p4) * sin(t3) * sin(t4))
        )
    )


def e241_phi(p1, p2, p3, p4):
    return (1 / 3) * (2 * cos(p1 + p2 - p3 - p4) + cos(p1 - p2) * cos(p3 - p4))


def e241_theta(t1, t2, t3, t4):
    return (1 / 3) * (2 * cos(t1 + t2 - t3 - t4) + cos(t1 - t2) * cos(t3 - t4))


def e242_general(t1, t2, t3, t4, p1, p2, p3, p4):
    return (
        (cos(t1) * cos(t2) + cos(p1 - p2) * sin(t1) * sin(t2))
        * (cos(t3) * cos(t4) + cos(p3 - p4) * sin(t3) * sin(t4))
    )


def e242_theta(t1, t2, t3, t4):
    return cos(t1 - t2) * cos(t3 - t4)


def e242_phi(p1, p2, p3, p4):
    return cos(p1 - p2) * cos(p3 - p4)


def e_classical_linear(t):
    return 2 * t / pi - 1


# registry ---------------------------------------------------------------

class ClosedForm(str, enum.Enum):
    E321_general = "E321_general"
    E321_spin = "E321_spin"
    E321_KS_101 = "E321_KS_101"
    E321_KS_010 = "E321_KS_010"
    E321_KS_101_equator = "E321_KS_101_equator"
    E321_KS_010_equator = "E321_KS_010_equator"
    E321_KS_101_meridian = "E321_KS_101_meridian"
    E321_KS_010_meridian = "E321_KS_010_meridian"
    E321_enhanced = "E321_enhanced"
    E421_spin = "E421_spin"
    E421_plastic_mmpp = "E421_plastic_mmpp"
    E421_plastic_mppm = "E421_plastic_mppm"
    E421_plastic_pmpm = "E421_plastic_pmpm"
    E_general_j = "E_general_j"
    E241_general = "E241_general"
    E241_phi = "E241_phi"
    E241_theta = "E241_theta"
    E242_general = "E242_general"
    E242_theta = "E242_theta"
    E242_phi = "E242_phi"
    E_classical_linear = "E_classical_linear"


@dataclass(frozen=True)
class FormSpec:
    func: Callable
    n_theta: int
    n_phi: int
    labels: int = 0
    needs_j: bool = False
    description: str = ""


FORMS: dict[ClosedForm, FormSpec] = {
    ClosedForm.E321_general: FormSpec(e321_general, 2, 2, labels=3,
                                      description="spin-1 singlet, arbitrary labels"),
    ClosedForm.E321_spin: FormSpec(e321_spin, 2, 2, description="spin-1 singlet, labels (-1,0,1)"),
    ClosedForm.E321_KS_101: FormSpec(e321_ks_101, 2, 2, description="spin-1 singlet, labels (1,0,1)"),
    ClosedForm.E321_KS_010: FormSpec(e321_ks_010, 2, 2, description="spin-1 singlet, labels (0,1,0)"),
    ClosedForm.E321_KS_101_equator: FormSpec(e321_ks_101_equator, 0, 2,
                                             description="labels (1,0,1), polar angles pi/2"),
    ClosedForm.E321_KS_010_equator: FormSpec(e321_ks_010_equator, 0, 2,
                                             description="labels (0,1,0), polar angles pi/2"),
    ClosedForm.E321_KS_101_meridian: FormSpec(e321_ks_101_meridian, 2, 0,
                                              description="labels (1,0,1), azimuths 0"),
    ClosedForm.E321_KS_010_meridian: FormSpec(e321_ks_010_meridian, 2, 0,
                                              description="labels (0,1,0), azimuths 0"),
    ClosedForm.E321_enhanced: FormSpec(e321_enhanced, 2, 0,
                                       description="enhanced spin-1 combination, azimuths 0"),
    ClosedForm.E421_spin: FormSpec(e421_spin, 2, 2, description="spin-3/2 singlet, spin labels"),
    ClosedForm.E421_plastic_mmpp: FormSpec(e421_plastic_mmpp, 1, 0,
                                           description="spin-3/2, labels (-1,-1,1,1), (t,0,0,0)"),
    ClosedForm.E421_plastic_mppm: FormSpec(e421_plastic_mppm, 1, 0,
                                           description="spin-3/2, labels (-1,1,1,-1), (t,0,0,0)"),
    ClosedForm.E421_plastic_pmpm: FormSpec(e421_plastic_pmpm, 1, 0,
                                           description="spin-3/2, labels (1,-1,1,-1), (t,0,0,0)"),
    ClosedForm.E_general_j: FormSpec(e_general_j, 2, 2, needs_j=True,
                                     description="spin-j singlet, spin labels"),
    ClosedForm.E241_general: FormSpec(e241_general, 4, 4, description="four-qubit singlet 1"),
    ClosedForm.E241_phi: FormSpec(e241_phi, 0, 4, description="four-qubit singlet 1, polar angles pi/2"),
    ClosedForm.E241_theta: FormSpec(e241_theta, 4, 0, description="four-qubit singlet 1, azimuths 0"),
    ClosedForm.E242_general: FormSpec(e242_general, 4, 4, description="four-qubit singlet 2"),
    ClosedForm.E242_theta: FormSpec(e242_theta, 4, 0, description="four-qubit singlet 2, azimuths 0"),
    ClosedForm.E242_phi: FormSpec(e242_phi, 0, 4, description="four-qubit singlet 2, polar angles pi/2"),
    ClosedForm.E_classical_linear: FormSpec(e_classical_linear, 1, 0,
                                            description="classical linear correlation"),
}


def evaluate(form, theta=(), phi=(), labels=None, j=None):
    """Evaluate a registered closed form after checking its arity."""
    try:
        form = ClosedForm(form)
    except ValueError:
        raise UsageError(f"unknown closed form {form!r}") from None
    spec = FORMS[form]
    theta, phi = tuple(theta), tuple(phi)
    if len(theta) != spec.n_theta or len(phi) != spec.n_phi:
        raise UsageError(
            f"{form.value} takes {spec.n_theta} polar and {spec.n_phi} azimuthal angles, "
            f"got {len(theta)} and {len(phi)}"
        )
    args = []
    if spec.labels:
        if labels is None or len(labels) != spec.labels:
            raise UsageError(f"{form.value} needs {spec.labels} labels")
        args.append(tuple(labels))
    elif labels is not None:
        raise UsageError(f"{form.value} takes no labels")
    if spec.needs_j:
        if j is None:
            raise UsageError(f"{form.value} needs the spin j")
        args.append(j)
    return spec.func(*args, *theta, *phi)


# figure data ------------------------------------------------------------

FIGURE_SERIES = {
    1: ("series_a", "series_b", "series_c", "series_d", "series_e"),
    2: ("series_a", "series_b", "series_c", "series_d", "series_e"),
}


def figure_curves(figure: int, thetas) -> dict[str, np.ndarray]:
    """Series plotted in the two figures, sampled at ``thetas``.

    Figure 1 (spin-3/2): the three relabeled correlations, the scaled spin
    correlation ``(4/5) E_spin(t, 0, 0, 0) = -cos t`` and the classical line.
    Figure 2 (four qubits): the meridian form at five parameterizations.
    """
    t = np.asarray(thetas, dtype=float)
    zero = np.zeros_like(t)
    if figure == 1:
        series = (
            e421_plastic_mmpp(t),
            e421_plastic_mppm(t),
            e421_plastic_pmpm(t),
            (4 / 5) * e421_spin(t, zero, zero, zero),
            e_classical_linear(t),
        )
    elif figure == 2:
        q = np.full_like(t, pi / 4)
        series = (
            e241_theta(t, q, -t, t),
            e241_theta(t, t, -t, t),
            e241_theta(t, -t, -t, t),
            e241_theta(t, -t, -t, zero),
            e241_theta(-t, -t, q, t),
        )
    else:
        raise UsageError(f"figure must be 1 or 2, got {figure!r}")
    out = {"theta": t}
    out.update(zip(FIGURE_SERIES[figure], series))
    return out
