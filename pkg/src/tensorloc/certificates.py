"""Sufficient conditions for a nonzero tensor determinant.

``det(A) = 0`` exactly when 0 is an eigenvalue, so a tensor is certified
nonsingular whenever 0 lies outside one of the exclusion-improved inclusion
sets. Comparisons are exact: a borderline case yields ``UNKNOWN``.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field

from . import regions
from .tensor import RowSums, UsageError

__all__ = ["Method", "Verdict", "Witness", "Certificate", "certify_gersgorin", "certify_brauer", "certify"]


class Method(enum.Enum):
    GERSGORIN_EXCLUSION = "gersgorin"
    BRAUER_EXCLUSION = "brauer"


class Verdict(enum.Enum):
    NONSINGULAR = "nonsingular"
    UNKNOWN = "unknown"


@dataclass(frozen=True)
class Witness:
    """Which disjunct fired for one key, with the two compared values.

    ``branch`` is 1 for the dominance inequality and 2 for the exclusion
    inequality; ``other`` is the 1-based index ``j`` (or ``p``) used by
    branch 2, else ``None``.
    """

    branch: int
    other: int | None
    lhs: float
    rhs: float


@dataclass(frozen=True)
class Certificate:
    method: Method
    verdict: Verdict
    witnesses: dict = field(default_factory=dict)
    failed: tuple = ()

    @property
    def nonsingular(self) -> bool:
        return self.verdict is Verdict.NONSINGULAR


def _exclusion_witness(S, i0, terms):
    for p0 in range(S.n):
        if p0 == i0:
            continue
        lhs, rhs = terms(S, i0, p0, 0.0)
        if lhs < rhs:
            return Witness(2, p0 + 1, float(lhs), float(rhs))
    return None


def _finish(method, witnesses, failed):
    verdict = Verdict.UNKNOWN if failed else Verdict.NONSINGULAR
    return Certificate(method, verdict, witnesses, tuple(failed))


def certify_gersgorin(S: RowSums) -> Certificate:
    """Per row ``i``: ``|a_ii| > r_i``, or ``|a_jj| < 2|a_ji..i| - r_j`` for some ``j != i``."""
    witnesses, failed = {}, []
    for i0 in range(S.n):
        lhs, rhs = regions.gamma_terms(S, i0, 0.0)
        if lhs > rhs:
            witnesses[i0 + 1] = Witness(1, None, float(lhs), float(rhs))
            continue
        w = _exclusion_witness(S, i0, regions.delta_terms)
        if w is None:
            failed.append(i0 + 1)
        else:
            witnesses[i0 + 1] = w
    return _finish(Method.GERSGORIN_EXCLUSION, witnesses, failed)


def certify_brauer(S: RowSums) -> Certificate:
    """Per ordered pair ``(i, j)``: 0 is outside ``K_ij`` or inside some ``Lambda_ip``."""
    if S.n < 2:
        raise UsageError("the Brauer-type certificate needs n >= 2")
    witnesses, failed = {}, []
    lambda_hit = {}
    for i0 in range(S.n):
        for j0 in range(S.n):
            if i0 == j0:
                continue
            key = (i0 + 1, j0 + 1)
            lhs, rhs = regions.k_terms(S, i0, j0, 0.0)
            if lhs > rhs:
                witnesses[key] = Witness(1, None, float(lhs), float(rhs))
                continue
            if i0 not in lambda_hit:
                lambda_hit[i0] = _exclusion_witness(S, i0, regions.lambda_terms)
            if lambda_hit[i0] is None:
                failed.append(key)
            else:
                witnesses[key] = lambda_hit[i0]
    return _finish(Method.BRAUER_EXCLUSION, witnesses, failed)


def certify(S: RowSums, method="gersgorin") -> Certificate:
    method = Method(method) if not isinstance(method, Method) else method
    if method is Method.GERSGORIN_EXCLUSION:
        return certify_gersgorin(S)
    return certify_brauer(S)
