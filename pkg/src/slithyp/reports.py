"""Formula-level certificates for the comb and Petersen constructions.

Both reports evaluate explicit inequality chains row by row.  Petersen
quantities with ``y_n = 2^-n exp(-3^n)`` are kept in log-space, so rows run
to ``n = 60`` without underflow.
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field

import numpy as np

from .bounds import curve_length_bounds, strip_distance, two_slit_distance
from .domains import ToothSequence, make_comb, petersen_c, petersen_eps, petersen_log_y, petersen_x
from .errors import InvalidParameter

LN2 = math.log(2.0)
SCHEMA_VERSION = 1

PETERSEN_COLUMNS = [
    "n", "x_n", "c_n", "eps_n", "log_y_n",
    "lower_sum", "upper_k", "T_n", "certified",
    "lower_sum_corrected", "T_n_corrected", "certified_corrected",
]

LOCALIZATION_COLUMNS = [
    "n", "eps_n", "c_n", "im_q_n", "theta_over_eps", "good_box",
    "k_strip", "k_gap", "ratio", "localized",
]

COMB_COLUMNS = [
    "n", "eps_n", "im_q_n", "lower", "upper", "two_h_over_eps", "asinh_term",
    "eps_asinh", "residual", "verdict",
]


@dataclass
class Report:
    """Table of report rows plus summary fields."""

    kind: str
    columns: list
    rows: list
    summary: dict = field(default_factory=dict)

    def column(self, name):
        i = self.columns.index(name)
        return [r[i] for r in self.rows]

    def to_dict(self):
        return {
            "schema": f"slithyp.{self.kind}/{SCHEMA_VERSION}",
            "columns": self.columns,
            "rows": [dict(zip(self.columns, r)) for r in self.rows],
            "summary": self.summary,
        }

    def to_csv(self):
        from ._io import csv_text
        return csv_text(self.columns, self.rows)


# ---------------------------------------------------------------- Petersen

def petersen_T(n, y):
    """``T_n = 2^{n+2}|y| - (9/8) 3^n + (n+1) ln2/2 + 5/8``."""
    return 2.0 ** (n + 2) * abs(y) - 1.125 * 3.0 ** n + (n + 1) * LN2 / 2 + 0.625


def petersen_lower_sum(n):
    """``sum_{j<n} (1/2 (3^j - ln2) + 3^{j+1}/4) + 1/2 (3^n - ln2)``."""
    s = math.fsum(0.5 * (3.0 ** j - LN2) + 0.75 * 3.0 ** j for j in range(n))
    return s + 0.5 * (3.0 ** n - LN2)


def petersen_lower_sum_corrected(n):
    """Same chain with the gap crossings weighted ``1/4 (3^j - ln2)``.

    A crossing of the gap of half-width ``y_j`` at ``x_j`` costs
    ``1/4 ln(2 eps_j / y_j) = 1/4 (3^j - ln 2)`` in the curvature -4 metric.
    """
    s = math.fsum(0.25 * (3.0 ** j - LN2) + 0.75 * 3.0 ** j for j in range(n))
    return s + 0.25 * (3.0 ** n - LN2)


def petersen_T_corrected(n, y):
    return 2.0 ** (n + 2) * abs(y) - petersen_lower_sum_corrected(n)


def petersen_report(y: float, M: float, n_max: int) -> Report:
    """Rows ``n = 0..n_max`` of the Petersen horosphere certificate.

    ``T_n < M`` certifies that ``c_n + i y`` lies in the Busemann horosphere
    of level ``M`` of the ray through the gaps.  The summary holds the first
    certified index ``n_M`` for both the displayed formula and the corrected
    chain.
    """
    if not (isinstance(n_max, int) and 0 <= n_max <= 60):
        raise InvalidParameter("n_max must be an integer in [0, 60]")
    if not (math.isfinite(y) and math.isfinite(M)):
        raise InvalidParameter("y and M must be finite")
    rows = []
    n_M = n_Mc = None
    for n in range(n_max + 1):
        low = petersen_lower_sum(n)
        up = 2.0 ** (n + 2) * abs(y)
        T = petersen_T(n, y)
        lowc = petersen_lower_sum_corrected(n)
        Tc = up - lowc
        cert, certc = T < M, Tc < M
        if cert and n_M is None:
            n_M = n
        if certc and n_Mc is None:
            n_Mc = n
        rows.append([n, petersen_x(n), petersen_c(n), petersen_eps(n), petersen_log_y(n),
                     low, up, T, cert, lowc, Tc, certc])
    T = [r[7] for r in rows]
    dec_from = next((k for k in range(len(T)) if all(T[j + 1] < T[j] for j in range(k, len(T) - 1))), None)
    summary = {"y": float(y), "M": float(M), "n_max": n_max, "n_M": n_M, "n_M_corrected": n_Mc,
               "strictly_decreasing_from": dec_from}
    return Report("petersen-report", list(PETERSEN_COLUMNS), rows, summary)


# -------------------------------------------------------------------- comb

def comb_report(k: float, h: float, r0: float, M: float, n_max: int, a_rule=None) -> Report:
    """Rows ``n = 1..n_max`` of the comb contradiction chain.

    Per row: ``lower = (k-h)/(8 eps_n)`` and
    ``upper = 2h/eps_n + asinh(2 r0/eps_n) + residual + 2M`` where
    ``residual`` bounds the distance from ``r0 + i Im q_n`` to ``r0`` along
    the vertical segment, ``Im q_n = a_{n+1} + eps_n`` being the center of
    the gap between the teeth ``n`` and ``n+1``.  The summary holds the
    first ``n*`` from which ``lower > upper`` holds for every later row,
    and the limiting comparison ``(k-h)/8`` against ``2h``, which favors
    the lower side exactly when ``h < k/17``.
    """
    if not (0 < h < k < 1):
        raise InvalidParameter("need 0 < h < k < 1")
    if not (0 < r0 < 1):
        raise InvalidParameter("r0 must lie in (0, 1)")
    if not (isinstance(n_max, int) and n_max >= 1):
        raise InvalidParameter("n_max must be a positive integer")
    if not math.isfinite(M):
        raise InvalidParameter("M must be finite")
    seq = a_rule if isinstance(a_rule, ToothSequence) else ToothSequence() if a_rule is None \
        else ToothSequence.from_dict(a_rule)
    below = h < k / 17
    if not below:
        warnings.warn("h >= k/17: the limiting comparison cannot produce a contradiction", stacklevel=2)
    d = make_comb(seq, None)
    rows = []
    for n in range(1, n_max + 1):
        eps = seq.half_width(n)
        yq = seq.term(n + 1) + eps
        lower = (k - h) / (8 * eps)
        a = 2 * h / eps
        s = math.asinh(2 * r0 / eps)
        res = curve_length_bounds(d, [complex(r0, yq), complex(r0, 0.0)]).upper
        upper = a + s + res + 2 * M
        rows.append([n, eps, yq, lower, upper, a, s, eps * s, res, lower > upper])
    verdicts = [r[-1] for r in rows]
    n_star = None
    for i in range(len(rows) - 1, -1, -1):
        if not verdicts[i]:
            break
        n_star = rows[i][0]
    summary = {
        "k": k, "h": h, "r0": r0, "M": M, "n_max": n_max,
        "n_star": n_star,
        "limit_lower": (k - h) / 8, "limit_upper": 2 * h,
        "limit_contradiction": (k - h) / 8 > 2 * h,
        "threshold": k / 17, "h_below_threshold": below,
    }
    return Report("comb-report", list(COMB_COLUMNS), rows, summary)


# ------------------------------------------------------ comb localization

def _geodesic_crossing(m, z, r, x, samples=2001, steps=60):
    """First point on the geodesic from ``z`` to ``r`` with ``Re >= x``."""
    z1, z2 = m.inverse(z), m.inverse(r)
    T = (z2 - z1) / (1 - np.conj(z1) * z2)
    direction = np.exp(1j * np.angle(T))
    point = lambda s: m.forward((np.tanh(s) * direction + z1) / (1 + np.conj(z1) * np.tanh(s) * direction))
    s = np.linspace(0.0, np.arctanh(abs(T)), samples)  # hyperbolic arclength
    w = m.forward((np.tanh(s) * direction + z1) / (1 + np.conj(z1) * np.tanh(s) * direction))
    i = int(np.argmax(w.real >= x))
    lo, hi = s[max(i - 1, 0)], s[i]
    for _ in range(steps):
        mid = 0.5 * (lo + hi)
        if point(mid).real >= x:
            hi = mid
        else:
            lo = mid
    return complex(point(hi))


def comb_localization_report(m, k: float = 0.5, h: float = 0.02, r=None, C0: float = 0.5,
                             C1: float = 0.5) -> Report:
    """Empirical checks of the two localization steps of the comb argument.

    For each gap ``n`` of a fitted comb truncation (between the teeth
    ``a_{n+1}`` and ``a_n``, center ``c_n``, half-width ``eps_n``) the
    geodesic from ``z_n = -k + i c_n`` to ``r`` is followed to its first
    point ``q_n`` with ``Re q_n = -h``.

    * good box: ``|Im q_n - c_n| <= C0 eps_n``;
    * localization: ``k_gap(z_n, q_n) >= C1 k_strip(z_n, q_n)``, where
      ``k_gap`` is the exact distance in the plane minus the two teeth
      extended to the left and ``k_strip`` the one in the strip between them.

    Both are finite-truncation experiments; the summary reports the smallest
    ``n`` from which each check holds for every later gap.
    """
    d = m.target
    if d.family != "comb" or d.truncation is None:
        raise InvalidParameter("needs a map of a truncated comb")
    if not (0 < h < k < 1):
        raise InvalidParameter("need 0 < h < k < 1")
    r0 = m.anchor.real
    r = 0.5 * r0 if r is None else float(r)
    if not (m.symmetric and 0 < r < r0):
        raise InvalidParameter("needs a symmetric map with real anchor r0 and 0 < r < r0")
    seq, N = d.params, d.index_range[1]
    rows = []
    for n in range(1, N):
        eps = float(seq.half_width(n))
        c = float(seq.term(n + 1)) + eps
        z = complex(-k, c)
        q = _geodesic_crossing(m, z, r, -h)
        theta = q.imag - c
        ks = strip_distance(z, q, c, eps)
        kg = two_slit_distance(z, q, c, eps)
        rows.append([n, eps, c, q.imag, theta / eps, abs(theta) <= C0 * eps, ks, kg, kg / ks, kg >= C1 * ks])

    def from_n(col):
        out = None
        for row in reversed(rows):
            if not row[col]:
                break
            out = row[0]
        return out

    summary = {"k": k, "h": h, "r": r, "C0": C0, "C1": C1, "truncation": N,
               "n_good_box": from_n(5), "n_localized": from_n(9),
               "label": f"experimental (truncation N={N})"}
    return Report("comb-localization", list(LOCALIZATION_COLUMNS), rows, summary)
