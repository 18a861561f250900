"""Discounted-cash-flow engine: burn-rate expense lines plus a sales block.

Periods are 1-based and flows occur at period ends (t = 1..T, no t=0 flow);
``npv`` therefore discounts C_t by (1+r)^-t. IRR is a per-period rate found by
bracketing and bisection; it is UNDEFINED (returned as ``None``) when the
flows never change sign or no bracket exists in [0, 10]. Break-even defaults
to the undiscounted cumulative flow.

Scenario analysis applies fractional :class:`Adjustment` rows to a base
:class:`ModelSpec` - each targeted value is multiplied by (1 + pct), and
optional period overrides replace an expense line's active window.
"""
from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Optional, Sequence, Tuple, Union

import numpy as np

from .errors import ValidationError

#: Adjustment targets addressing the sales block rather than an expense line.
UNITS, PRICE, COST = "UNITS", "PRICE", "COST"
SALES_TARGETS = (UNITS, PRICE, COST)

#: |NPV| at the returned IRR is at most this many dollars.
IRR_NPV_TOL = 0.01

_IRR_LO, _IRR_HI = 0.0, 10.0


@dataclass(frozen=True)
class ExpenseLine:
    """A constant per-period cash flow active over [first, last] (inclusive).

    ``rate`` is currency per period; outflows are negative.
    """

    name: str
    first: int
    last: int
    rate: float

    def __post_init__(self):
        if not self.name:
            raise ValidationError("expense line name must be non-empty")
        if not np.isfinite(self.rate):
            raise ValidationError(f"rate of expense line {self.name!r} must be finite")
        if self.first < 1 or self.last < self.first:
            raise ValidationError(
                f"expense line {self.name!r}: periods must satisfy 1 <= first <= last")


@dataclass(frozen=True)
class SalesBlock:
    """Unit sales over [first, last]: ``units`` per period at ``unit_price``
    plus ``unit_cost`` (a negative per-unit outflow)."""

    first: int
    last: int
    units: float
    unit_price: float
    unit_cost: float

    def __post_init__(self):
        if self.first < 1 or self.last < self.first:
            raise ValidationError("sales window must satisfy 1 <= first <= last")
        if self.units < 0:
            raise ValidationError("units must be >= 0")
        if self.unit_price < 0:
            raise ValidationError("unit_price must be >= 0")
        if self.unit_cost > 0:
            raise ValidationError("unit_cost must be <= 0 (an outflow)")


@dataclass(frozen=True)
class ModelSpec:
    """A complete cash-flow model over ``horizon`` periods."""

    horizon: int
    discount_rate: float
    expenses: Tuple[ExpenseLine, ...]
    sales: SalesBlock

    def __post_init__(self):
        object.__setattr__(self, "expenses", tuple(self.expenses))
        if self.horizon < 1:
            raise ValidationError("horizon must be >= 1")
        if not self.discount_rate > -1:
            raise ValidationError("discount_rate must be > -1")
        names = [line.name for line in self.expenses]
        if len(set(names)) != len(names):
            raise ValidationError("expense line names must be unique")
        for line in self.expenses:
            if line.last > self.horizon:
                raise ValidationError(
                    f"expense line {line.name!r}: last period exceeds the horizon")
        if self.sales.last > self.horizon:
            raise ValidationError("sales window: last period exceeds the horizon")


@dataclass(frozen=True)
class Adjustment:
    """One scenario row: scale ``target`` by (1 + pct), optionally moving an
    expense line's window to [first_override, last_override]."""

    target: str
    pct: float
    first_override: Optional[int] = None
    last_override: Optional[int] = None

    def __post_init__(self):
        if not np.isfinite(self.pct):
            raise ValidationError(f"adjustment {self.target!r}: pct must be finite")
        has_first = self.first_override is not None
        has_last = self.last_override is not None
        if has_first != has_last:
            raise ValidationError(
                f"adjustment {self.target!r}: first_override and last_override "
                "must be given together")
        if has_first and not 1 <= self.first_override <= self.last_override:
            raise ValidationError(
                f"adjustment {self.target!r}: overrides must satisfy 1 <= first <= last")


@dataclass(frozen=True)
class LineDelta:
    """Base-versus-adjusted comparison for one model input."""

    name: str
    base: float
    adjusted: float
    pct: float
    delta: float


@dataclass(frozen=True)
class EconResult:
    """Evaluated model: per-period flows and the headline figures."""

    cash_flows: np.ndarray
    npv: float
    irr: Optional[float]
    break_even_period: Optional[int]
    line_deltas: Tuple[LineDelta, ...]
    discount_rate: float


def build_cash_flows(spec: ModelSpec) -> np.ndarray:
    """Net flow per period: active expense rates plus
    ``units * (unit_price + unit_cost)`` inside the sales window.

    Index 0 of the returned array is period 1.
    """
    flows = np.zeros(spec.horizon)
    for line in spec.expenses:
        flows[line.first - 1 : line.last] += line.rate
    s = spec.sales
    flows[s.first - 1 : s.last] += s.units * (s.unit_price + s.unit_cost)
    return flows


def npv(flows: Sequence[float], r: float) -> float:
    """Present value of end-of-period flows: sum of C_t * (1+r)^-t, t=1..T."""
    if not r > -1:
        raise ValidationError("discount rate r must be > -1")
    flows = np.asarray(flows, dtype=np.float64)
    t = np.arange(1, flows.shape[0] + 1, dtype=np.float64)
    return float(np.sum(flows * (1.0 + r) ** -t))


def irr(flows: Sequence[float]) -> Optional[float]:
    """Per-period internal rate of return, or None when undefined.

    Brackets a sign change of npv(r) on [0, 10] and bisects until the
    interval is tighter than 1e-12 and |npv| <= $0.01. Flows that never
    change sign have no IRR.
    """
    flows = np.asarray(flows, dtype=np.float64)
    if flows.size == 0 or (flows >= 0).all() or (flows <= 0).all():
        return None
    lo, hi = _IRR_LO, _IRR_HI
    f_lo, f_hi = npv(flows, lo), npv(flows, hi)
    if f_lo == 0.0:
        return lo
    if f_lo * f_hi > 0:
        # scan for a bracket inside the range
        grid = np.linspace(lo, hi, 201)
        values = [npv(flows, g) for g in grid]
        for a, b, fa, fb in zip(grid, grid[1:], values, values[1:]):
            if fa * fb <= 0:
                lo, hi, f_lo, f_hi = a, b, fa, fb
                break
        else:
            return None
    while hi - lo > 1e-12:
        mid = 0.5 * (lo + hi)
        f_mid = npv(flows, mid)
        if f_lo * f_mid <= 0:
            hi = mid
        else:
            lo, f_lo = mid, f_mid
    root = 0.5 * (lo + hi)
    if abs(npv(flows, root)) > IRR_NPV_TOL:
        return None
    return root


def irr_interpolate(ra: float, rb: float, npva: float, npvb: float) -> float:
    """Linear-interpolation IRR estimate: ra + npva*(rb-ra)/(npva-npvb)."""
    if not ra < rb:
        raise ValidationError("ra must be strictly less than rb")
    if npva == npvb:
        raise ValidationError("npva and npvb must differ")
    return ra + npva * (rb - ra) / (npva - npvb)


def break_even(flows: Sequence[float], r: float = 0.0,
               discounted: bool = False) -> Optional[int]:
    """Smallest period t with cumulative (optionally discounted) flow >= 0."""
    if not r > -1:
        raise ValidationError("discount rate r must be > -1")
    cumulative = 0.0
    for t, c in enumerate(np.asarray(flows, dtype=np.float64), start=1):
        cumulative += c * (1.0 + r) ** -t if discounted else c
        if cumulative >= 0:
            return t
    return None


def _adjust_window(line: ExpenseLine, adj: Adjustment) -> ExpenseLine:
    first = adj.first_override if adj.first_override is not None else line.first
    last = adj.last_override if adj.last_override is not None else line.last
    return replace(line, rate=line.rate * (1.0 + adj.pct), first=first, last=last)


def apply_adjustments(spec: ModelSpec,
                      adjustments: Sequence[Adjustment]) -> ModelSpec:
    """Return a new spec with every adjustment applied; unknown targets fail."""
    lines = {line.name: line for line in spec.expenses}
    sales = spec.sales
    for adj in adjustments:
        if adj.target in lines:
            lines[adj.target] = _adjust_window(lines[adj.target], adj)
        elif adj.target in SALES_TARGETS:
            if adj.first_override is not None:
                raise ValidationError(
                    f"adjustment {adj.target!r}: period overrides apply only to expense lines")
            if adj.target == UNITS:
                sales = replace(sales, units=sales.units * (1.0 + adj.pct))
            elif adj.target == PRICE:
                sales = replace(sales, unit_price=sales.unit_price * (1.0 + adj.pct))
            else:
                sales = replace(sales, unit_cost=sales.unit_cost * (1.0 + adj.pct))
        else:
            raise ValidationError(
                f"adjustment target {adj.target!r} matches no expense line "
                f"and none of {'/'.join(SALES_TARGETS)}")
    ordered = tuple(lines[line.name] for line in spec.expenses)
    return replace(spec, expenses=ordered, sales=sales)


def sensitivity_row(spec: ModelSpec,
                    adj: Adjustment) -> Tuple[float, Optional[float]]:
    """(ΔNPV, ΔNPV as a fraction of base NPV) for one adjustment.

    The fractional delta is None when the base NPV is zero.
    """
    base_npv = npv(build_cash_flows(spec), spec.discount_rate)
    adjusted = apply_adjustments(spec, [adj])
    adj_npv = npv(build_cash_flows(adjusted), adjusted.discount_rate)
    delta = adj_npv - base_npv
    pct = delta / base_npv if base_npv != 0.0 else None
    return delta, pct


def _line_deltas(base: ModelSpec, adjusted: ModelSpec) -> Tuple[LineDelta, ...]:
    deltas = []
    adj_lines = {line.name: line for line in adjusted.expenses}
    for line in base.expenses:
        after = adj_lines[line.name]
        pct = (after.rate / line.rate - 1.0) if line.rate != 0 else 0.0
        deltas.append(LineDelta(line.name, line.rate, after.rate, pct,
                                after.rate - line.rate))
    for name, before, after in (
        (UNITS, base.sales.units, adjusted.sales.units),
        (PRICE, base.sales.unit_price, adjusted.sales.unit_price),
        (COST, base.sales.unit_cost, adjusted.sales.unit_cost),
    ):
        pct = (after / before - 1.0) if before != 0 else 0.0
        deltas.append(LineDelta(name, before, after, pct, after - before))
    return tuple(deltas)


def evaluate(spec: ModelSpec, adjustments: Sequence[Adjustment] = (),
             discounted_breakeven: bool = False) -> EconResult:
    """Apply adjustments (if any), then compute flows, NPV, IRR and break-even."""
    adjusted = apply_adjustments(spec, adjustments) if adjustments else spec
    flows = build_cash_flows(adjusted)
    return EconResult(
        cash_flows=flows,
        npv=npv(flows, adjusted.discount_rate),
        irr=irr(flows),
        break_even_period=break_even(flows, adjusted.discount_rate,
                                     discounted=discounted_breakeven),
        line_deltas=_line_deltas(spec, adjusted),
        discount_rate=adjusted.discount_rate,
    )
