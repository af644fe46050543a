"""Pairwise verdict: same distance matrix? same configuration up to rigid motion?"""

from dataclasses import dataclass

import numpy as np

from .geometry import (compute_ppdm, congruence_residual, lemma1_residual,
                       room_congruence_residual, _check_same_dims)

PPDM_TOL = 1e-8
CONGRUENCE_TOL = 1e-6

EQUAL_CONGRUENT = "EqualPPDM-Congruent"
EQUAL_DISTINCT = "EqualPPDM-Distinct"
DIFFERENT = "DifferentPPDM"


@dataclass
class VerificationReport:
    ppdm_max_diff: float | None
    lemma1_residuals: tuple | None
    congruence_residual: float | None
    room_congruence_residual: float | None
    scale: float
    verdict: str

    @property
    def room_congruent(self):
        r = self.room_congruence_residual
        return r is not None and r <= CONGRUENCE_TOL * self.scale

    def to_dict(self):
        return {"ppdm_max_diff": self.ppdm_max_diff,
                "lemma1_residuals": None if self.lemma1_residuals is None
                else list(self.lemma1_residuals),
                "congruence_residual": self.congruence_residual,
                "room_congruence_residual": self.room_congruence_residual,
                "room_congruent": self.room_congruent, "scale": self.scale,
                "thresholds": {"ppdm": PPDM_TOL, "congruence": CONGRUENCE_TOL},
                "verdict": self.verdict}


def verify_pair(a, b):
    """PPDM-equal if max diff <= 1e-8 * scale; congruent if residual <= 1e-6 * scale.

    ``scale`` is the larger bounding radius.  Pairs with different wall or
    waypoint counts cannot share a distance matrix.
    """
    _check_same_dims(a, b)
    scale = max(a.bounding_radius(), b.bounding_radius())
    if a.n_walls != b.n_walls or a.n_waypoints != b.n_waypoints:
        return VerificationReport(None, None, None, None, scale, DIFFERENT)
    diff = float(np.max(np.abs(compute_ppdm(a) - compute_ppdm(b))))
    l1 = lemma1_residual(a, b)
    cong = congruence_residual(a, b)
    room = room_congruence_residual(a, b)
    if diff > PPDM_TOL * scale:
        verdict = DIFFERENT
    elif cong <= CONGRUENCE_TOL * scale:
        verdict = EQUAL_CONGRUENT
    else:
        verdict = EQUAL_DISTINCT
    return VerificationReport(diff, l1, cong, room, scale, verdict)
