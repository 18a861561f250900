"""Command-line front end: JSON configs in, deterministic reports out.

Exit codes: 0 success, 1 config validation failure, 2 numerical failure
(divergence, or a missing IRR under --require-irr; the report is still
emitted), 3 I/O failure.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from dataclasses import dataclass
from pathlib import Path
from typing import List, Optional, Tuple

import numpy as np

from .anc import EXACT, AncConfig, AncResult, anc_run
from .costing import (BomSummary, OverheadRates, assembly_cost,
                      check_discrepancies, cost_reduction_report, dfa_index,
                      load_assembly_csv, load_bom_csv, round_half_away,
                      bom_rollup, Discrepancy)
from .econ import (Adjustment, EconResult, ExpenseLine, ModelSpec, SalesBlock,
                   SALES_TARGETS, build_cash_flows, evaluate, npv,
                   sensitivity_row)
from .errors import ValidationError
from .planning import (AFFECTED_ROUNDING_UNIT, ConceptMatrix, MarketParams,
                       RiskItem, concept_score, load_concept_csv,
                       load_risk_csv, market_size_estimate,
                       risk_score_and_map)
from .signals import FirPath, generate_broadband, generate_tone

FORMATS = ("table", "json", "csv")

_NUM = (int, float)


# ---------------------------------------------------------------------------
# report containers produced by the subcommand handlers


@dataclass(frozen=True)
class SensitivityRow:
    parameter: str
    pct: float
    first: int
    last: int
    delta_npv: float
    delta_pct_of_base: Optional[float]


@dataclass(frozen=True)
class SensitivityReport:
    base_npv: float
    rows: Tuple[SensitivityRow, ...]


@dataclass(frozen=True)
class BomReport:
    summary: BomSummary
    assembly_seconds: Optional[float]
    assembly_cost_value: Optional[float]
    dfa: Optional[float]
    reduction_savings: Optional[float]
    reduction_fraction: Optional[float]
    expected_given: bool
    discrepancies: Tuple[Discrepancy, ...]


@dataclass(frozen=True)
class ConceptReport:
    scores: Tuple[Tuple[str, float, int], ...]


@dataclass(frozen=True)
class RiskReport:
    threshold: int
    items: Tuple[Tuple[RiskItem, int, str], ...]


@dataclass(frozen=True)
class MarketReport:
    affected: float
    rounded_basis: float
    profit_exact_basis: float
    profit_rounded_basis: float


# ---------------------------------------------------------------------------
# config plumbing


class _Conf:
    """Field-by-field reader over a JSON object; leftovers are errors."""

    def __init__(self, mapping, context: str):
        if not isinstance(mapping, dict):
            raise ValidationError(f"{context} must be a JSON object")
        self._data = dict(mapping)
        self._context = context

    def take(self, name, kinds=None, required=False, default=None):
        if name not in self._data:
            if required:
                raise ValidationError(
                    f"{self._context}: missing required field '{name}'")
            return default
        value = self._data.pop(name)
        if kinds is not None:
            allowed = kinds if isinstance(kinds, tuple) else (kinds,)
            # JSON true/false must not satisfy numeric fields
            if not isinstance(value, allowed) or (
                    isinstance(value, bool) and bool not in allowed):
                raise ValidationError(
                    f"{self._context}: field '{name}' has the wrong type")
        return value

    def finish(self):
        if self._data:
            name = sorted(self._data)[0]
            raise ValidationError(f"{self._context}: unknown field '{name}'")


def _load_config(path_str: str):
    path = Path(path_str)
    text = path.read_text(encoding="utf-8")  # missing/unreadable -> OSError
    try:
        value = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ValidationError(
            f"{path}: invalid JSON ({exc.msg} at line {exc.lineno})")
    if not isinstance(value, dict):
        raise ValidationError(f"{path}: top-level JSON value must be an object")
    return value


def _resolve(path_str: str, config_path: str) -> Path:
    """Resolve a file referenced by a config relative to the config itself."""
    path = Path(path_str)
    if path.is_absolute():
        return path
    return Path(config_path).resolve().parent / path


def _taps_from(values, field: str) -> FirPath:
    if not isinstance(values, list) or not values or not all(
            isinstance(v, _NUM) and not isinstance(v, bool) for v in values):
        raise ValidationError(f"field '{field}' must be a non-empty list of numbers")
    return FirPath(np.asarray(values, dtype=np.float64))


def _expense_from(obj, index: int) -> ExpenseLine:
    c = _Conf(obj, f"expenses[{index}]")
    line = ExpenseLine(
        name=c.take("name", str, required=True),
        first=c.take("first", int, required=True),
        last=c.take("last", int, required=True),
        rate=float(c.take("rate", _NUM, required=True)),
    )
    c.finish()
    return line


def _model_from(obj, context: str = "model") -> ModelSpec:
    c = _Conf(obj, context)
    horizon = c.take("horizon", int, required=True)
    discount_rate = float(c.take("discount_rate", _NUM, required=True))
    expenses_raw = c.take("expenses", list, required=True)
    sales_raw = c.take("sales", dict, required=True)
    c.finish()
    sc = _Conf(sales_raw, "sales")
    sales = SalesBlock(
        first=sc.take("first", int, required=True),
        last=sc.take("last", int, required=True),
        units=float(sc.take("units", _NUM, required=True)),
        unit_price=float(sc.take("unit_price", _NUM, required=True)),
        unit_cost=float(sc.take("unit_cost", _NUM, required=True)),
    )
    sc.finish()
    expenses = tuple(_expense_from(e, i) for i, e in enumerate(expenses_raw))
    return ModelSpec(horizon=horizon, discount_rate=discount_rate,
                     expenses=expenses, sales=sales)


def _adjustment_from(obj, index: int, context: str = "adjustments") -> Adjustment:
    c = _Conf(obj, f"{context}[{index}]")
    adj = Adjustment(
        target=c.take("target", str, required=True),
        pct=float(c.take("pct", _NUM, required=True)),
        first_override=c.take("first", int),
        last_override=c.take("last", int),
    )
    c.finish()
    return adj


# ---------------------------------------------------------------------------
# subcommand handlers: each returns (report object, exit code)


def _cmd_anc_simulate(args) -> Tuple[AncResult, int]:
    raw = _load_config(args.config)
    c = _Conf(raw, "anc config")
    algorithm = c.take("algorithm", str, required=True)
    duration = c.take("duration_samples", int, required=True)
    seed = c.take("rng_seed", int, required=True)
    fs = float(c.take("sample_rate_hz", _NUM, required=True))
    filter_length = c.take("filter_length", int, default=128)
    step_size = c.take("step_size", _NUM)
    leak = float(c.take("leak_factor", _NUM, default=0.0))
    estimate_raw = c.take("secondary_estimate", (str, list), default="exact")
    noise_raw = c.take("noise", dict, required=True)
    primary = _taps_from(c.take("primary_path", list, required=True), "primary_path")
    secondary = _taps_from(c.take("secondary_path", list, required=True),
                           "secondary_path")
    c.finish()

    if isinstance(estimate_raw, str):
        if estimate_raw != "exact":
            raise ValidationError(
                "field 'secondary_estimate' must be \"exact\" or a list of taps")
        estimate = EXACT
    else:
        estimate = _taps_from(estimate_raw, "secondary_estimate")

    config = AncConfig(
        algorithm=algorithm,
        duration_samples=duration,
        rng_seed=seed,
        filter_length=filter_length,
        step_size=None if step_size is None else float(step_size),
        leak_factor=leak,
        secondary_estimate=estimate,
    )

    nc = _Conf(noise_raw, "noise")
    kind = nc.take("kind", str, required=True)
    if kind == "tone":
        freq = float(nc.take("freq_hz", _NUM, required=True))
        amplitude = float(nc.take("amplitude", _NUM, default=1.0))
        phase = float(nc.take("phase_rad", _NUM, default=0.0))
        nc.finish()
        noise = generate_tone(freq, amplitude, phase, duration, fs)
    elif kind == "broadband":
        low = float(nc.take("low_hz", _NUM, required=True))
        high = float(nc.take("high_hz", _NUM, required=True))
        nc.finish()
        noise = generate_broadband(seed, low, high, duration, fs)
    else:
        raise ValidationError("noise: field 'kind' must be 'tone' or 'broadband'")

    result = anc_run(config, noise, primary, secondary)
    return result, (2 if result.diverged else 0)


def _cmd_econ_eval(args) -> Tuple[EconResult, int]:
    raw = _load_config(args.config)
    if "model" in raw:
        c = _Conf(raw, "econ config")
        model_raw = c.take("model", dict, required=True)
        adjustments_raw = c.take("adjustments", list, default=[])
        c.finish()
    else:
        model_raw, adjustments_raw = raw, []
    spec = _model_from(model_raw)
    adjustments = tuple(_adjustment_from(a, i)
                        for i, a in enumerate(adjustments_raw))
    result = evaluate(spec, adjustments,
                      discounted_breakeven=args.discounted_breakeven)
    if args.require_irr and result.irr is None:
        return result, 2
    return result, 0


def _cmd_econ_sensitivity(args) -> Tuple[SensitivityReport, int]:
    raw = _load_config(args.config)
    c = _Conf(raw, "sensitivity config")
    model_raw = c.take("model", dict, required=True)
    rows_raw = c.take("rows", list, required=True)
    c.finish()
    spec = _model_from(model_raw)
    lines = {line.name: line for line in spec.expenses}
    rows: List[SensitivityRow] = []
    for i, row_raw in enumerate(rows_raw):
        adj = _adjustment_from(row_raw, i, context="rows")
        delta, frac = sensitivity_row(spec, adj)
        if adj.target in SALES_TARGETS:
            first, last = spec.sales.first, spec.sales.last
        else:
            line = lines[adj.target]  # unknown targets already rejected above
            first = adj.first_override if adj.first_override is not None else line.first
            last = adj.last_override if adj.last_override is not None else line.last
        rows.append(SensitivityRow(parameter=adj.target, pct=adj.pct,
                                   first=first, last=last, delta_npv=delta,
                                   delta_pct_of_base=frac))
    base = npv(build_cash_flows(spec), spec.discount_rate)
    return SensitivityReport(base_npv=base, rows=tuple(rows)), 0


def _cmd_cost_bom(args) -> Tuple[BomReport, int]:
    raw = _load_config(args.config)
    c = _Conf(raw, "cost config")
    bom_csv = c.take("bom_csv", str, required=True)
    shipment = float(c.take("shipment", _NUM, required=True))
    rates_raw = c.take("overhead_rates", dict, required=True)
    warranty = float(c.take("warranty", _NUM, required=True))
    override = c.take("overhead_override", _NUM)
    assembly_raw = c.take("assembly", dict)
    dfa_raw = c.take("dfa", dict)
    reduction_raw = c.take("reduction", dict)
    expected_raw = c.take("expected", dict)
    c.finish()

    rc = _Conf(rates_raw, "overhead_rates")
    rates = OverheadRates(
        materials_rate=float(rc.take("materials_rate", _NUM, required=True)),
        labor_rate=float(rc.take("labor_rate", _NUM, required=True)),
    )
    rc.finish()

    lines = load_bom_csv(_resolve(bom_csv, args.config))
    summary = bom_rollup(lines, shipment, rates, warranty,
                         None if override is None else float(override))
    computed = {
        "direct_materials": summary.direct_materials,
        "direct_processing": summary.direct_processing,
        "direct_labor": summary.direct_labor,
        "shipment": summary.shipment,
        "direct_total": summary.direct_total,
        "overhead": summary.overhead,
        "warranty": summary.warranty,
        "total_manufacturing": summary.total_manufacturing,
    }

    seconds = cost = None
    if assembly_raw is not None:
        ac = _Conf(assembly_raw, "assembly")
        ops_csv = ac.take("ops_csv", str, required=True)
        hourly = float(ac.take("hourly_rate", _NUM, required=True))
        ac.finish()
        ops = load_assembly_csv(_resolve(ops_csv, args.config))
        seconds, cost = assembly_cost(ops, hourly)
        computed["assembly_seconds"] = seconds
        computed["assembly_cost"] = cost

    dfa = None
    if dfa_raw is not None:
        dc = _Conf(dfa_raw, "dfa")
        min_parts = dc.take("min_parts", int, required=True)
        dc.finish()
        if seconds is None:
            raise ValidationError(
                "dfa requires the 'assembly' section for the total assembly time")
        dfa = dfa_index(min_parts, seconds)
        computed["dfa_index"] = dfa

    savings = fraction = None
    if reduction_raw is not None:
        dc = _Conf(reduction_raw, "reduction")
        old_total = float(dc.take("old_total", _NUM, required=True))
        new_total = float(dc.take("new_total", _NUM, required=True))
        dc.finish()
        savings, fraction = cost_reduction_report(old_total, new_total)

    discrepancies: Tuple[Discrepancy, ...] = ()
    if expected_raw is not None:
        pairs = []
        for label in sorted(expected_raw):
            if label not in computed:
                raise ValidationError(f"expected: unknown field '{label}'")
            value = expected_raw[label]
            if not isinstance(value, _NUM) or isinstance(value, bool):
                raise ValidationError(f"expected: field '{label}' must be a number")
            pairs.append((label, computed[label], float(value)))
        discrepancies = tuple(check_discrepancies(pairs))

    report = BomReport(
        summary=summary,
        assembly_seconds=seconds,
        assembly_cost_value=cost,
        dfa=dfa,
        reduction_savings=savings,
        reduction_fraction=fraction,
        expected_given=expected_raw is not None,
        discrepancies=discrepancies,
    )
    return report, 0


def _cmd_plan_concept(args) -> Tuple[ConceptReport, int]:
    raw = _load_config(args.config)
    c = _Conf(raw, "concept config")
    matrix_csv = c.take("matrix_csv", str, required=True)
    c.finish()
    matrix = load_concept_csv(_resolve(matrix_csv, args.config))
    return ConceptReport(scores=tuple(concept_score(matrix))), 0


def _cmd_plan_risk(args) -> Tuple[RiskReport, int]:
    raw = _load_config(args.config)
    c = _Conf(raw, "risk config")
    register_csv = c.take("register_csv", str, required=True)
    threshold = c.take("threshold", int, default=5)
    c.finish()
    items = load_risk_csv(_resolve(register_csv, args.config))
    rated = tuple((item, *risk_score_and_map(item, threshold)) for item in items)
    return RiskReport(threshold=threshold, items=rated), 0


def _cmd_plan_market(args) -> Tuple[MarketReport, int]:
    raw = _load_config(args.config)
    c = _Conf(raw, "market config")
    params = MarketParams(
        world_pop=float(c.take("world_pop", _NUM, required=True)),
        ref_pop=float(c.take("ref_pop", _NUM, required=True)),
        ref_affected=float(c.take("ref_affected", _NUM, required=True)),
        tolerance=float(c.take("tolerance", _NUM, required=True)),
        adoption_share=float(c.take("adoption_share", _NUM, required=True)),
        unit_price=float(c.take("unit_price", _NUM, required=True)),
        unit_cost=float(c.take("unit_cost", _NUM, required=True)),
    )
    c.finish()
    affected, profit_exact = market_size_estimate(params, "exact")
    _, profit_rounded = market_size_estimate(params, "rounded")
    basis = round(affected / AFFECTED_ROUNDING_UNIT) * AFFECTED_ROUNDING_UNIT
    return MarketReport(affected=affected, rounded_basis=float(basis),
                        profit_exact_basis=profit_exact,
                        profit_rounded_basis=profit_rounded), 0


# ---------------------------------------------------------------------------
# report rendering


def _money(value) -> float:
    return round_half_away(float(value), 2) + 0.0


def _rate(value, ndigits: int = 9) -> float:
    return round(float(value), ndigits) + 0.0


def _csv_buffer():
    buf = io.StringIO()
    return buf, csv.writer(buf, lineterminator="\n")


def _emit_anc(result: AncResult, fmt: str) -> str:
    trace = [_rate(v, 4) for v in result.attenuation_trace_db]
    steady = _rate(result.steady_state_attenuation_db, 4)
    if fmt == "json":
        payload = {
            "attenuation_trace_db": trace,
            "diverged": bool(result.diverged),
            "n_samples": len(result.residual),
            "steady_state_attenuation_db": steady,
        }
        return json.dumps(payload, sort_keys=True, indent=2) + "\n"
    if fmt == "csv":
        buf, writer = _csv_buffer()
        writer.writerow(["window", "attenuation_db"])
        for i, value in enumerate(trace, start=1):
            writer.writerow([i, f"{value:.4f}"])
        return buf.getvalue()
    out = ["noise-control simulation",
           f"  samples:  {len(result.residual)}",
           f"  windows:  {len(trace)}",
           f"  diverged: {'yes' if result.diverged else 'no'}",
           f"  steady_state_attenuation_db: {steady:.1f}",
           "",
           f"  {'window':>8}  {'attenuation_db':>14}"]
    for i, value in enumerate(trace, start=1):
        out.append(f"  {i:>8}  {value:>14.1f}")
    return "\n".join(out) + "\n"


def _emit_econ(result: EconResult, fmt: str) -> str:
    flows = [float(v) for v in result.cash_flows]
    r = result.discount_rate
    if fmt == "json":
        payload = {
            "break_even_period": result.break_even_period,
            "cash_flows": [_money(v) for v in flows],
            "discount_rate": _rate(r),
            "irr": None if result.irr is None else _rate(result.irr, 6),
            "line_deltas": [
                {"name": d.name, "base": _money(d.base),
                 "adjusted": _money(d.adjusted), "pct": _rate(d.pct),
                 "delta": _money(d.delta)}
                for d in result.line_deltas
            ],
            "npv": _money(result.npv),
        }
        return json.dumps(payload, sort_keys=True, indent=2) + "\n"
    if fmt == "csv":
        buf, writer = _csv_buffer()
        writer.writerow(["period", "cash_flow", "discounted", "cumulative"])
        cumulative = 0.0
        for t, flow in enumerate(flows, start=1):
            cumulative += flow
            discounted = flow * (1.0 + r) ** -t
            writer.writerow([t, f"{_money(flow):.2f}", f"{_money(discounted):.2f}",
                             f"{_money(cumulative):.2f}"])
        return buf.getvalue()
    irr_text = "undefined" if result.irr is None else f"{result.irr:.6f}"
    be_text = ("none" if result.break_even_period is None
               else str(result.break_even_period))
    out = ["cash-flow evaluation",
           f"  npv:               {_money(result.npv):,.2f}",
           f"  irr_per_period:    {irr_text}",
           f"  break_even_period: {be_text}",
           f"  discount_rate:     {r:g}",
           "",
           f"  {'period':>6}  {'cash_flow':>13}  {'discounted':>13}  {'cumulative':>13}"]
    cumulative = 0.0
    for t, flow in enumerate(flows, start=1):
        cumulative += flow
        discounted = flow * (1.0 + r) ** -t
        out.append(f"  {t:>6}  {_money(flow):>13,.2f}  "
                   f"{_money(discounted):>13,.2f}  {_money(cumulative):>13,.2f}")
    changed = [d for d in result.line_deltas if d.delta != 0.0]
    if changed:
        out.append("")
        out.append("  adjusted inputs")
        out.append(f"  {'name':<22}  {'base':>13}  {'adjusted':>13}  "
                   f"{'pct':>9}  {'delta':>13}")
        for d in changed:
            out.append(f"  {d.name:<22}  {_money(d.base):>13,.2f}  "
                       f"{_money(d.adjusted):>13,.2f}  {d.pct * 100:>+8.2f}%  "
                       f"{_money(d.delta):>13,.2f}")
    return "\n".join(out) + "\n"


def _emit_sensitivity(report: SensitivityReport, fmt: str) -> str:
    if fmt == "json":
        payload = {
            "base_npv": _money(report.base_npv),
            "rows": [
                {"parameter": row.parameter, "pct": _rate(row.pct),
                 "first": row.first, "last": row.last,
                 "delta_npv": _money(row.delta_npv),
                 "delta_pct_of_base": (None if row.delta_pct_of_base is None
                                       else _rate(row.delta_pct_of_base))}
                for row in report.rows
            ],
        }
        return json.dumps(payload, sort_keys=True, indent=2) + "\n"
    if fmt == "csv":
        buf, writer = _csv_buffer()
        writer.writerow(["parameter", "pct", "first", "last", "delta_npv",
                         "delta_pct_of_base"])
        for row in report.rows:
            frac = ("" if row.delta_pct_of_base is None
                    else f"{row.delta_pct_of_base:.6f}")
            writer.writerow([row.parameter, f"{row.pct:g}", row.first, row.last,
                             f"{_money(row.delta_npv):.2f}", frac])
        return buf.getvalue()
    out = [f"sensitivity of npv (base {_money(report.base_npv):,.2f})",
           "",
           f"  {'parameter':<24}  {'pct':>8}  {'periods':>9}  "
           f"{'delta_npv':>14}  {'pct_of_base':>11}"]
    for row in report.rows:
        frac = ("n/a" if row.delta_pct_of_base is None
                else f"{row.delta_pct_of_base * 100:+.2f}%")
        out.append(f"  {row.parameter:<24}  {row.pct * 100:>+7.4g}%  "
                   f"{f'{row.first}-{row.last}':>9}  "
                   f"{_money(row.delta_npv):>+14,.2f}  {frac:>11}")
    return "\n".join(out) + "\n"


def _bom_fields(report: BomReport) -> List[Tuple[str, float, str]]:
    """(label, value, kind) rows for the scalar part of a BOM report."""
    s = report.summary
    rows = [("direct_materials", s.direct_materials, "money"),
            ("direct_processing", s.direct_processing, "money"),
            ("direct_labor", s.direct_labor, "money"),
            ("shipment", s.shipment, "money"),
            ("direct_total", s.direct_total, "money"),
            ("overhead", s.overhead, "money"),
            ("warranty", s.warranty, "money"),
            ("total_manufacturing", s.total_manufacturing, "money")]
    if report.assembly_seconds is not None:
        rows.append(("assembly_seconds", report.assembly_seconds, "money"))
        rows.append(("assembly_cost", report.assembly_cost_value, "money"))
    if report.dfa is not None:
        rows.append(("dfa_index", report.dfa, "rate"))
    if report.reduction_savings is not None:
        rows.append(("reduction_savings", report.reduction_savings, "money"))
        rows.append(("reduction_fraction", report.reduction_fraction, "rate"))
    return rows


def _emit_bom(report: BomReport, fmt: str) -> str:
    fields = _bom_fields(report)
    if fmt == "json":
        payload = {label: (_money(v) if kind == "money" else _rate(v, 6))
                   for label, v, kind in fields}
        payload["discrepancies"] = [
            {"label": d.label, "computed": _money(d.computed),
             "expected": _money(d.expected), "delta": _money(d.delta)}
            for d in report.discrepancies
        ]
        return json.dumps(payload, sort_keys=True, indent=2) + "\n"
    if fmt == "csv":
        buf, writer = _csv_buffer()
        writer.writerow(["field", "value"])
        for label, value, kind in fields:
            text = f"{_money(value):.2f}" if kind == "money" else f"{_rate(value, 6):.6f}"
            writer.writerow([label, text])
        for d in report.discrepancies:
            writer.writerow([f"discrepancy.{d.label}.computed", f"{_money(d.computed):.2f}"])
            writer.writerow([f"discrepancy.{d.label}.expected", f"{_money(d.expected):.2f}"])
            writer.writerow([f"discrepancy.{d.label}.delta", f"{_money(d.delta):.2f}"])
        return buf.getvalue()
    out = ["manufacturing cost summary"]
    for label, value, kind in fields:
        text = f"{_money(value):,.2f}" if kind == "money" else f"{_rate(value, 6):.6f}"
        out.append(f"  {label + ':':<21} {text}")
    if report.expected_given:
        if report.discrepancies:
            out.append("  figures that differ from the supplied expected values:")
            for d in report.discrepancies:
                out.append(f"    {d.label}: computed {_money(d.computed):,.2f}, "
                           f"expected {_money(d.expected):,.2f} "
                           f"(delta {_money(d.delta):+,.2f})")
        else:
            out.append("  all supplied expected values match")
    return "\n".join(out) + "\n"


def _emit_concept(report: ConceptReport, fmt: str) -> str:
    if fmt == "json":
        payload = {"scores": [
            {"concept": name, "total": _rate(total), "rank": rank}
            for name, total, rank in report.scores
        ]}
        return json.dumps(payload, sort_keys=True, indent=2) + "\n"
    if fmt == "csv":
        buf, writer = _csv_buffer()
        writer.writerow(["concept", "total", "rank"])
        for name, total, rank in report.scores:
            writer.writerow([name, f"{total:.4f}", rank])
        return buf.getvalue()
    out = ["concept ranking",
           f"  {'rank':>4}  {'concept':<20}  {'total':>8}"]
    for name, total, rank in sorted(report.scores, key=lambda s: s[2]):
        out.append(f"  {rank:>4}  {name:<20}  {total:>8.4f}")
    return "\n".join(out) + "\n"


def _emit_risk(report: RiskReport, fmt: str) -> str:
    if fmt == "json":
        payload = {
            "threshold": report.threshold,
            "items": [
                {"code": item.code, "description": item.description,
                 "category": item.category, "probability": item.probability,
                 "impact": item.impact, "score": score, "quadrant": quadrant}
                for item, score, quadrant in report.items
            ],
        }
        return json.dumps(payload, sort_keys=True, indent=2) + "\n"
    if fmt == "csv":
        buf, writer = _csv_buffer()
        writer.writerow(["code", "description", "category", "probability",
                         "impact", "score", "quadrant"])
        for item, score, quadrant in report.items:
            writer.writerow([item.code, item.description, item.category,
                             item.probability, item.impact, score, quadrant])
        return buf.getvalue()
    out = [f"risk register (threshold {report.threshold})",
           f"  {'code':<5} {'p':>2} {'i':>2} {'score':>5}  {'quadrant':<8}  "
           f"{'category':<22}  description"]
    for item, score, quadrant in report.items:
        out.append(f"  {item.code:<5} {item.probability:>2} {item.impact:>2} "
                   f"{score:>5}  {quadrant:<8}  {item.category:<22}  "
                   f"{item.description}")
    return "\n".join(out) + "\n"


def _emit_market(report: MarketReport, fmt: str) -> str:
    if fmt == "json":
        payload = {
            "affected_population": _money(report.affected),
            "rounded_basis": _money(report.rounded_basis),
            "profit_exact_basis": _money(report.profit_exact_basis),
            "profit_rounded_basis": _money(report.profit_rounded_basis),
        }
        return json.dumps(payload, sort_keys=True, indent=2) + "\n"
    if fmt == "csv":
        buf, writer = _csv_buffer()
        writer.writerow(["field", "value"])
        writer.writerow(["affected_population", f"{_money(report.affected):.2f}"])
        writer.writerow(["rounded_basis", f"{_money(report.rounded_basis):.2f}"])
        writer.writerow(["profit_exact_basis",
                         f"{_money(report.profit_exact_basis):.2f}"])
        writer.writerow(["profit_rounded_basis",
                         f"{_money(report.profit_rounded_basis):.2f}"])
        return buf.getvalue()
    out = ["market sizing",
           f"  affected_population:  {_money(report.affected):,.2f}",
           f"  rounded_basis:        {_money(report.rounded_basis):,.2f}",
           f"  profit_exact_basis:   {_money(report.profit_exact_basis):,.2f}",
           f"  profit_rounded_basis: {_money(report.profit_rounded_basis):,.2f}"]
    return "\n".join(out) + "\n"


def emit_report(result, fmt: str) -> bytes:
    """Render any report object to bytes; identical inputs give identical bytes."""
    if fmt not in FORMATS:
        raise ValidationError(
            f"unsupported --format {fmt!r}; choose from {', '.join(FORMATS)}")
    emitters = [
        (AncResult, _emit_anc),
        (EconResult, _emit_econ),
        (SensitivityReport, _emit_sensitivity),
        (BomReport, _emit_bom),
        (ConceptReport, _emit_concept),
        (RiskReport, _emit_risk),
        (MarketReport, _emit_market),
    ]
    for kind, emitter in emitters:
        if isinstance(result, kind):
            return emitter(result, fmt).encode("utf-8")
    raise TypeError(f"no report renderer for {type(result).__name__}")


# ---------------------------------------------------------------------------
# parser and entry point


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="hushkit",
        description="Noise-control simulation and product-economics toolkit.")
    groups = parser.add_subparsers(dest="group", required=True,
                                   metavar="{anc,econ,cost,plan}")

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", required=True,
                        help="path to the JSON config file")
    common.add_argument("--format", default="table",
                        help="report format: table, json, or csv (default: table)")
    common.add_argument("--output", default=None,
                        help="write the report to this file instead of stdout")

    anc = groups.add_parser("anc", help="adaptive noise cancellation")
    anc_cmds = anc.add_subparsers(dest="command", required=True,
                                  metavar="{simulate}")
    anc_cmds.add_parser("simulate", parents=[common],
                        help="run an adaptive cancellation simulation"
                        ).set_defaults(handler=_cmd_anc_simulate)

    econ = groups.add_parser("econ", help="cash-flow economics")
    econ_cmds = econ.add_subparsers(dest="command", required=True,
                                    metavar="{npv,scenario,sensitivity}")
    for name, text in (("npv", "evaluate a cash-flow model"),
                       ("scenario", "evaluate a model with scenario adjustments")):
        sub = econ_cmds.add_parser(name, parents=[common], help=text)
        sub.add_argument("--require-irr", action="store_true",
                         help="treat an undefined IRR as a numerical failure")
        sub.add_argument("--discounted-breakeven", action="store_true",
                         help="report the discounted break-even period")
        sub.set_defaults(handler=_cmd_econ_eval)
    econ_cmds.add_parser("sensitivity", parents=[common],
                         help="one-at-a-time NPV sensitivity rows"
                         ).set_defaults(handler=_cmd_econ_sensitivity)

    cost = groups.add_parser("cost", help="bill-of-materials costing")
    cost_cmds = cost.add_subparsers(dest="command", required=True,
                                    metavar="{bom}")
    cost_cmds.add_parser("bom", parents=[common],
                         help="roll up a BOM into a manufacturing cost summary"
                         ).set_defaults(handler=_cmd_cost_bom)

    plan = groups.add_parser("plan", help="concept scoring, risk, market sizing")
    plan_cmds = plan.add_subparsers(dest="command", required=True,
                                    metavar="{concept,risk,market}")
    plan_cmds.add_parser("concept", parents=[common],
                         help="score concepts against weighted criteria"
                         ).set_defaults(handler=_cmd_plan_concept)
    plan_cmds.add_parser("risk", parents=[common],
                         help="score and map a risk register"
                         ).set_defaults(handler=_cmd_plan_risk)
    plan_cmds.add_parser("market", parents=[common],
                         help="top-down market size and profit estimate"
                         ).set_defaults(handler=_cmd_plan_market)
    return parser


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    if args.format not in FORMATS:
        print(f"error: unsupported --format {args.format!r}; "
              f"choose from {', '.join(FORMATS)}", file=sys.stderr)
        return 1
    try:
        result, code = args.handler(args)
        payload = emit_report(result, args.format)
    except ValidationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    try:
        if args.output:
            Path(args.output).write_bytes(payload)
        else:
            sys.stdout.buffer.write(payload)
            sys.stdout.buffer.flush()
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    return code


def entrypoint() -> None:
    sys.exit(main())
