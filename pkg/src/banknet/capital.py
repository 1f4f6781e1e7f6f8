"""Countercyclical capital charges from attribution thresholds.

The charge absorbs a share of the risk a country's removal would
reveal, with diminishing returns: a type-II functional response

    charge(lam_c) = lam_c^n / (1 + lam_c^n)

saturating below 1.  Steeper exponents n demand less capital from
low-threshold countries.  NoSpread countries keep a row with charge 0:
an isolated remnant poses no contagion to absorb.
"""

from __future__ import annotations

from dataclasses import dataclass

from .attribution import AttributionReport
from .contagion import NoSpread, is_no_spread


def holling_charge(lambda_c: float | NoSpread, n: int = 1) -> float:
    """Type-II saturating charge for one threshold.

    Strictly increasing in lambda_c with charge(0) = 0 and
    charge(1) = 0.5 for every exponent.  Mathematically the value stays
    below 1; for extreme lambda_c^n (beyond ~1e16) double rounding
    saturates at 1.0.
    """
    if n < 1 or n != int(n):
        raise ValueError("exponent n must be a positive integer")
    if is_no_spread(lambda_c):
        return 0.0
    if lambda_c < 0:
        raise ValueError("lambda_c must be >= 0")
    if lambda_c <= 1.0:
        x = lambda_c ** n
        return x / (1.0 + x)
    # reciprocal form avoids overflow for large thresholds
    return 1.0 / (1.0 + lambda_c ** (-n))


@dataclass(frozen=True)
class ChargeRow:
    country: str
    lambda_c: float
    charge: float
    difference: float
    no_spread: bool


@dataclass(frozen=True)
class CapitalSchedule:
    """Charge per country, ascending by threshold.

    difference = lambda_c - charge grows toward the risky end of the
    schedule (for n = 1 it is lam^2/(1+lam), increasing on lam >= 0).
    NoSpread countries sort first with lambda_c recorded as 0.
    """

    holling_exponent: int
    rows: tuple[ChargeRow, ...]


def build_schedule(report: AttributionReport, n: int = 1) -> CapitalSchedule:
    """Apply the charge to every attribution row."""
    rows = []
    for row in report.rows:
        flagged = is_no_spread(row.lambda_c_after)
        lam = 0.0 if flagged else float(row.lambda_c_after)
        charge = holling_charge(row.lambda_c_after, n)
        rows.append(ChargeRow(row.country, lam, charge, lam - charge, flagged))
    rows.sort(key=lambda r: (r.lambda_c, r.country))
    return CapitalSchedule(n, tuple(rows))
