"""Declarative scenario layer: runs, loyalty sweeps, price tables, timing.

A scenario names a dataset, a list of peering events, and a focal (ISP, CSP)
pair.  Running it applies the events in order; the focal settlement compares
profits in the state immediately before the focal event against the state
immediately after, so anything competitors did earlier has already reshaped
the focal ISP's customer base.

Everything here is a pure function of the spec plus the dataset: identical
specs produce bit-identical results, surfaced as byte-identical JSON at the
CLI and the HTTP API.
"""

from __future__ import annotations

import json
import weakref
from dataclasses import dataclass, replace
from typing import Dict, List, Optional, Sequence, Tuple

from .churn import ChurnReport, PeeringEvent, establish_peering
from .dataset import MarketDataset, load_dataset
from .economics import CdnConfig, PairEconomics, bandwidth_price, evaluate_pair
from .market import MarketState, initialize_market

MAX_SWEEP_CELLS = 10_000
DEFAULT_CDN_UNIT_COST = 4000.0  # USD per Gbps per month
SPEC_SCHEMA_VERSION = 1


class SpecError(ValueError):
    """Invalid scenario spec; ``violations`` lists field-path messages."""

    def __init__(self, violations):
        self.violations = list(violations)
        super().__init__("; ".join(self.violations))


@dataclass(frozen=True)
class ScenarioOverrides:
    beta: Optional[float] = None            # uniform A-ISP loyalty
    theta: Optional[float] = None           # uniform CSP loyalty
    uplift: str = "none"
    cdn_enabled: bool = False
    cdn_unit_cost_usd_per_gbps_month: Optional[float] = None
    service_subset: Optional[Tuple[str, ...]] = None
    isp_profit_attribution: bool = False

    def to_jsonable(self) -> Dict:
        return {
            "beta": self.beta,
            "theta": self.theta,
            "uplift": self.uplift,
            "cdn_enabled": self.cdn_enabled,
            "cdn_unit_cost_usd_per_gbps_month": self.cdn_unit_cost_usd_per_gbps_month,
            "service_subset": list(self.service_subset) if self.service_subset is not None else None,
            "isp_profit_attribution": self.isp_profit_attribution,
        }


@dataclass(frozen=True)
class Sweeps:
    beta: Optional[Tuple[float, ...]] = None
    theta: Optional[Tuple[float, ...]] = None


@dataclass(frozen=True)
class ScenarioSpec:
    dataset: str
    events: Tuple[PeeringEvent, ...]
    focal_isp: str
    focal_csp: str
    overrides: ScenarioOverrides = ScenarioOverrides()
    sweeps: Optional[Sweeps] = None
    orderings: Optional[Tuple[Tuple[int, ...], ...]] = None
    compare_isps: Optional[Tuple[str, ...]] = None


@dataclass(frozen=True)
class ScenarioResult:
    """One experiment's full numeric output, ready for deterministic emission."""

    kind: str       # run | sweep | price_table | timing | comparison
    payload: Dict

    def to_jsonable(self) -> Dict:
        out = {"kind": self.kind}
        out.update(self.payload)
        return out


# --------------------------------------------------------------------------
# Spec parsing (strict; violations carry field paths)
# --------------------------------------------------------------------------

def _expect_obj(value, path, violations):
    if not isinstance(value, dict):
        violations.append(f"{path}: expected an object")
        return {}
    return value


def _strict_fields(obj, path, known, violations):
    for key in set(obj) - set(known):
        violations.append(f"{path}.{key}: unknown field")


def parse_scenario_spec(obj) -> ScenarioSpec:
    """Parse and structurally validate a scenario document."""
    violations: List[str] = []
    top = _expect_obj(obj, "spec", violations)
    _strict_fields(
        top,
        "spec",
        ("schema_version", "dataset", "overrides", "events", "focal", "sweeps", "orderings", "compare_isps"),
        violations,
    )
    if top.get("schema_version", SPEC_SCHEMA_VERSION) != SPEC_SCHEMA_VERSION:
        violations.append(f"spec.schema_version: unsupported version {top.get('schema_version')!r}")

    dataset = top.get("dataset", "us2013")
    if not isinstance(dataset, str) or not dataset:
        violations.append("spec.dataset: expected a non-empty string")

    overrides_obj = _expect_obj(top.get("overrides", {}), "spec.overrides", violations)
    _strict_fields(
        overrides_obj,
        "spec.overrides",
        (
            "beta",
            "theta",
            "uplift",
            "cdn_enabled",
            "cdn_unit_cost_usd_per_gbps_month",
            "service_subset",
            "isp_profit_attribution",
        ),
        violations,
    )
    for name in ("beta", "theta"):
        value = overrides_obj.get(name)
        if value is not None and (not isinstance(value, (int, float)) or not 0 <= value <= 1):
            violations.append(f"spec.overrides.{name}: loyalty must be within [0, 1], got {value!r}")
    subset = overrides_obj.get("service_subset")
    if subset is not None and not (
        isinstance(subset, list) and all(isinstance(s, str) for s in subset)
    ):
        violations.append("spec.overrides.service_subset: expected a list of service ids")
    overrides = ScenarioOverrides(
        beta=overrides_obj.get("beta"),
        theta=overrides_obj.get("theta"),
        uplift=overrides_obj.get("uplift", "none"),
        cdn_enabled=bool(overrides_obj.get("cdn_enabled", False)),
        cdn_unit_cost_usd_per_gbps_month=overrides_obj.get("cdn_unit_cost_usd_per_gbps_month"),
        service_subset=tuple(subset) if subset is not None else None,
        isp_profit_attribution=bool(overrides_obj.get("isp_profit_attribution", False)),
    )

    events = []
    raw_events = top.get("events", [])
    if not isinstance(raw_events, list) or not raw_events:
        violations.append("spec.events: expected a non-empty list")
        raw_events = []
    for idx, raw in enumerate(raw_events):
        entry = _expect_obj(raw, f"spec.events[{idx}]", violations)
        _strict_fields(entry, f"spec.events[{idx}]", ("isp", "csp", "services"), violations)
        isp = entry.get("isp")
        csp = entry.get("csp")
        if not isinstance(isp, str) or not isinstance(csp, str):
            violations.append(f"spec.events[{idx}]: isp and csp are required strings")
            continue
        services = entry.get("services", [])
        if not isinstance(services, list) or not all(isinstance(s, str) for s in services):
            violations.append(f"spec.events[{idx}].services: expected a list of service ids")
            services = []
        events.append(PeeringEvent(isp, csp, frozenset(services)))

    focal_obj = _expect_obj(top.get("focal", {}), "spec.focal", violations)
    _strict_fields(focal_obj, "spec.focal", ("isp", "csp"), violations)
    focal_isp = focal_obj.get("isp")
    focal_csp = focal_obj.get("csp")
    if not isinstance(focal_isp, str) or not isinstance(focal_csp, str):
        violations.append("spec.focal: isp and csp are required strings")
        focal_isp, focal_csp = "", ""

    sweeps = None
    if "sweeps" in top and top["sweeps"] is not None:
        sweeps_obj = _expect_obj(top["sweeps"], "spec.sweeps", violations)
        _strict_fields(sweeps_obj, "spec.sweeps", ("beta", "theta"), violations)
        grids = {}
        for axis in ("beta", "theta"):
            grid = sweeps_obj.get(axis)
            if grid is None:
                grids[axis] = None
                continue
            if not isinstance(grid, list) or not grid:
                violations.append(f"spec.sweeps.{axis}: expected a non-empty list")
                grids[axis] = None
                continue
            bad = [v for v in grid if not isinstance(v, (int, float)) or not 0 <= v <= 1]
            if bad:
                violations.append(f"spec.sweeps.{axis}: loyalty values must be within [0, 1]: {bad}")
            grids[axis] = tuple(grid)
        sweeps = Sweeps(beta=grids["beta"], theta=grids["theta"])
        if sweeps.beta is None and sweeps.theta is None:
            violations.append("spec.sweeps: at least one axis is required")
        cells = len(sweeps.beta or (None,)) * len(sweeps.theta or (None,))
        if cells > MAX_SWEEP_CELLS:
            violations.append(f"spec.sweeps: {cells} cells exceed the {MAX_SWEEP_CELLS} cell cap")

    orderings = None
    if "orderings" in top and top["orderings"] is not None:
        raw_orderings = top["orderings"]
        if not isinstance(raw_orderings, list) or not raw_orderings:
            violations.append("spec.orderings: expected a non-empty list of event permutations")
        else:
            orderings = []
            for idx, order in enumerate(raw_orderings):
                if not isinstance(order, list) or sorted(order) != list(range(len(events))):
                    violations.append(
                        f"spec.orderings[{idx}]: expected a permutation of event indices 0..{len(events) - 1}"
                    )
                    continue
                orderings.append(tuple(order))
            orderings = tuple(orderings)

    compare_isps = None
    if "compare_isps" in top and top["compare_isps"] is not None:
        raw_compare = top["compare_isps"]
        if (
            not isinstance(raw_compare, list)
            or not raw_compare
            or not all(isinstance(i, str) for i in raw_compare)
        ):
            violations.append("spec.compare_isps: expected a non-empty list of isp ids")
        else:
            compare_isps = tuple(raw_compare)

    if violations:
        raise SpecError(violations)
    return ScenarioSpec(
        dataset=dataset,
        events=tuple(events),
        focal_isp=focal_isp,
        focal_csp=focal_csp,
        overrides=overrides,
        sweeps=sweeps,
        orderings=orderings,
        compare_isps=compare_isps,
    )


# --------------------------------------------------------------------------
# Preparation: datasets, overrides, semantic validation
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class PreparedScenario:
    spec: ScenarioSpec
    base: MarketDataset          # as loaded; initial state depends only on this
    dataset: MarketDataset       # loyalty-adjusted view used for churn/economics
    events: Tuple[PeeringEvent, ...]   # service sets made explicit
    focal_index: int
    uplift: Dict
    cdn: Optional[CdnConfig]


def _apply_loyalty(dataset: MarketDataset, beta, theta) -> MarketDataset:
    isps = dataset.isps
    csps = dataset.csps
    if beta is not None:
        isps = tuple(replace(i, loyalty=beta) for i in isps)
    if theta is not None:
        csps = tuple(replace(c, loyalty=theta) for c in csps)
    return replace(dataset, isps=isps, csps=csps)


def prepare_scenario(spec: ScenarioSpec, base: Optional[MarketDataset] = None) -> PreparedScenario:
    violations: List[str] = []
    if base is None:
        base = load_dataset(spec.dataset)
    service_ids = {s.id for s in base.services}
    isp_ids = {i.id for i in base.isps}
    csp_ids = {c.id for c in base.csps}

    if spec.focal_isp not in isp_ids:
        violations.append(f"spec.focal.isp: unknown isp {spec.focal_isp!r}")
    if spec.focal_csp not in csp_ids:
        violations.append(f"spec.focal.csp: unknown csp {spec.focal_csp!r}")

    overrides = spec.overrides
    try:
        uplift = base.uplift_factors(overrides.uplift)
    except KeyError:
        violations.append(f"spec.overrides.uplift: unknown scenario {overrides.uplift!r}")
        uplift = {}
    if overrides.service_subset is not None:
        for sid in overrides.service_subset:
            if sid not in service_ids:
                violations.append(f"spec.overrides.service_subset: unknown service {sid!r}")

    subset = frozenset(overrides.service_subset) if overrides.service_subset is not None else None
    events: List[PeeringEvent] = []
    focal_positions: List[int] = []
    for idx, event in enumerate(spec.events):
        path = f"spec.events[{idx}]"
        if event.isp not in isp_ids:
            violations.append(f"{path}.isp: unknown isp {event.isp!r}")
            continue
        if event.csp not in csp_ids:
            violations.append(f"{path}.csp: unknown csp {event.csp!r}")
            continue
        provider = base.csp(event.csp)
        if not base.isp(event.isp).can_peer:
            violations.append(f"{path}.isp: {event.isp!r} does not enter peering agreements")
        offered = frozenset(s.id for s in base.services if provider.share(s.id) > 0)
        requested = frozenset(event.services) if event.services else offered
        unknown = requested - service_ids
        for sid in sorted(unknown):
            violations.append(f"{path}.services: unknown service {sid!r}")
        not_offered = (requested & service_ids) - offered
        for sid in sorted(not_offered):
            violations.append(f"{path}.services: {sid!r} not offered by {event.csp!r}")
        effective = requested & offered
        if subset is not None:
            effective &= subset
        if (event.isp, event.csp) == (spec.focal_isp, spec.focal_csp):
            focal_positions.append(idx)
            if not effective and not (unknown or not_offered):
                violations.append(f"{path}: focal event has no services left to peer")
        events.append(PeeringEvent(event.isp, event.csp, effective))

    if len(focal_positions) != 1:
        violations.append(
            "spec.events: the focal pair must appear in exactly one event, "
            f"found {len(focal_positions)}"
        )
    if spec.compare_isps is not None:
        for isp in spec.compare_isps:
            if isp not in isp_ids:
                violations.append(f"spec.compare_isps: unknown isp {isp!r}")
            elif not base.isp(isp).can_peer:
                violations.append(f"spec.compare_isps: {isp!r} does not enter peering agreements")
    if violations:
        raise SpecError(violations)

    cdn = None
    if overrides.cdn_enabled:
        unit = overrides.cdn_unit_cost_usd_per_gbps_month
        if unit is None:
            unit = base.cost_model.cdn_unit_cost or DEFAULT_CDN_UNIT_COST
        cdn = CdnConfig(enabled=True, unit_cost=unit)

    dataset = _apply_loyalty(base, overrides.beta, overrides.theta)
    return PreparedScenario(
        spec=spec,
        base=base,
        dataset=dataset,
        events=tuple(events),
        focal_index=focal_positions[0],
        uplift=uplift,
        cdn=cdn,
    )


_initial_cache: Dict[int, Tuple[object, MarketState]] = {}


def _initial_state(base: MarketDataset) -> MarketState:
    # Initialization ignores loyalties/uplift/CDN, so one state serves every
    # sweep cell and ordering over the same base dataset.
    key = id(base)
    cached = _initial_cache.get(key)
    if cached is not None and cached[0]() is base:
        return cached[1]
    state = initialize_market(base)
    _initial_cache[key] = (weakref.ref(base), state)
    return state


# --------------------------------------------------------------------------
# Evaluation
# --------------------------------------------------------------------------

def _report_summary(report: ChurnReport) -> Dict:
    phase1: Dict[Tuple[str, str], float] = {}
    for f in report.phase1_flows:
        key = (f.from_isp, f.to_isp)
        phase1[key] = phase1.get(key, 0.0) + float(f.amount)
    phase2: Dict[Tuple[str, str, str], float] = {}
    for f in report.phase2_flows:
        key = (f.from_provider, f.to_provider, f.service)
        phase2[key] = phase2.get(key, 0.0) + float(f.amount)
    return {
        "isp": report.event.isp,
        "csp": report.event.csp,
        "services": sorted(report.services),
        "phase1_total": sum(phase1.values()),
        "phase2_total": sum(phase2.values()),
        "phase1_by_pair": [
            {"from_isp": a, "to_isp": b, "amount": amount}
            for (a, b), amount in sorted(phase1.items())
        ],
        "phase2_by_provider": [
            {"from_provider": a, "to_provider": b, "service": s, "amount": amount}
            for (a, b, s), amount in sorted(phase2.items())
        ],
    }


def _simulate_focal(prepared: PreparedScenario, events: Sequence[PeeringEvent], focal_index: int):
    state = _initial_state(prepared.base)
    reports = []
    pre = post = None
    focal_report = None
    for idx, event in enumerate(events):
        new_state, report = establish_peering(prepared.dataset, state, event)
        if idx == focal_index:
            pre, post, focal_report = state, new_state, report
        reports.append(report)
        state = new_state
    return state, reports, pre, post, focal_report


def _settle(prepared: PreparedScenario, events, focal_index) -> Tuple[PairEconomics, List[ChurnReport]]:
    _, reports, pre, post, focal_report = _simulate_focal(prepared, events, focal_index)
    if not focal_report.services:
        raise SpecError(["spec.events: focal event adds no new premium services"])
    economics = evaluate_pair(
        prepared.dataset,
        pre,
        post,
        events[focal_index].isp,
        events[focal_index].csp,
        focal_report.services,
        uplift=prepared.uplift,
        cdn=prepared.cdn,
        attribution=prepared.spec.overrides.isp_profit_attribution,
    )
    return economics, reports


def _price_row(economics: PairEconomics) -> Dict:
    payment = economics.outcome.payment_csp_to_isp
    pre = economics.pre_premium_gbps
    post = economics.post_premium_gbps
    try:
        price = bandwidth_price(payment, pre, post)
        defined = True
    except ValueError:
        price, defined = None, False
    return {
        "payment_usd_per_month": payment,
        "deal": economics.outcome.deal,
        "pre_gbps": pre,
        "post_gbps": post,
        "bandwidth_price_usd_per_gbps_month": price,
        "price_defined": defined,
    }


def _single_service_events(prepared: PreparedScenario, service: str) -> Tuple[PeeringEvent, ...]:
    events = list(prepared.events)
    focal = events[prepared.focal_index]
    events[prepared.focal_index] = PeeringEvent(focal.isp, focal.csp, frozenset({service}))
    return tuple(events)


def run(spec: ScenarioSpec, dataset: Optional[MarketDataset] = None) -> ScenarioResult:
    """Full scenario evaluation: events, focal settlement, per-service prices."""
    prepared = prepare_scenario(spec, dataset)
    economics, reports = _settle(prepared, prepared.events, prepared.focal_index)

    per_service = []
    for service in economics.premium_services:
        variant_events = _single_service_events(prepared, service)
        variant_econ, _ = _settle(prepared, variant_events, prepared.focal_index)
        row = {"service": service}
        row.update(_price_row(variant_econ))
        per_service.append(row)

    payload = {
        "dataset": prepared.base.id,
        "focal": {"isp": spec.focal_isp, "csp": spec.focal_csp},
        "overrides": spec.overrides.to_jsonable(),
        "events": [_report_summary(r) for r in reports],
        "settlement": economics.to_jsonable(),
        "per_service": per_service,
    }
    return ScenarioResult("run", payload)


def sweep(spec: ScenarioSpec, dataset: Optional[MarketDataset] = None) -> ScenarioResult:
    """Focal settlement per loyalty grid cell (uniform beta/theta overrides)."""
    if spec.sweeps is None or (spec.sweeps.beta is None and spec.sweeps.theta is None):
        raise SpecError(["spec.sweeps: at least one axis is required"])
    prepared = prepare_scenario(spec, dataset)
    beta_axis = spec.sweeps.beta
    theta_axis = spec.sweeps.theta
    rows = []
    for beta in beta_axis or (None,):
        for theta in theta_axis or (None,):
            overrides = replace(
                spec.overrides,
                beta=beta if beta is not None else spec.overrides.beta,
                theta=theta if theta is not None else spec.overrides.theta,
            )
            cell_spec = replace(spec, overrides=overrides, sweeps=None)
            cell = prepare_scenario(cell_spec, prepared.base)
            economics, _ = _settle(cell, cell.events, cell.focal_index)
            rows.append(
                {
                    "beta": beta,
                    "theta": theta,
                    "payment_usd_per_month": economics.outcome.payment_csp_to_isp,
                    "surplus_usd_per_month": economics.outcome.surplus_u,
                    "deal": economics.outcome.deal,
                }
            )
    payload = {
        "dataset": prepared.base.id,
        "focal": {"isp": spec.focal_isp, "csp": spec.focal_csp},
        "overrides": spec.overrides.to_jsonable(),
        "axes": {
            "beta": list(beta_axis) if beta_axis else None,
            "theta": list(theta_axis) if theta_axis else None,
        },
        "rows": rows,
    }
    return ScenarioResult("sweep", payload)


def price_table(spec: ScenarioSpec, dataset: Optional[MarketDataset] = None) -> ScenarioResult:
    """Per-service $/Gbps/month at fixed beta over a theta grid.

    Each service is priced from its own single-service peering scenario for
    the focal pair, mirroring per-service negotiation.
    """
    prepared = prepare_scenario(spec, dataset)
    focal_event = prepared.events[prepared.focal_index]
    services = [s.id for s in prepared.base.services if s.id in focal_event.services]
    if not services:
        raise SpecError(["spec.events: focal event names no services to price"])
    theta_grid = list(spec.sweeps.theta) if spec.sweeps and spec.sweeps.theta else [None]

    rows = []
    for theta in theta_grid:
        overrides = replace(
            spec.overrides,
            theta=theta if theta is not None else spec.overrides.theta,
        )
        cell_spec = replace(spec, overrides=overrides, sweeps=None)
        cell = prepare_scenario(cell_spec, prepared.base)
        cells = {}
        for service in services:
            variant_events = _single_service_events(cell, service)
            economics, _ = _settle(cell, variant_events, cell.focal_index)
            cells[service] = _price_row(economics)
        rows.append({"theta": theta, "cells": cells})
    payload = {
        "dataset": prepared.base.id,
        "focal": {"isp": spec.focal_isp, "csp": spec.focal_csp},
        "beta": spec.overrides.beta,
        "theta_grid": theta_grid,
        "services": services,
        "rows": rows,
    }
    return ScenarioResult("price_table", payload)


def timing_experiment(spec: ScenarioSpec, dataset: Optional[MarketDataset] = None) -> ScenarioResult:
    """Same events in different orders: focal profit and payment per ordering."""
    if not spec.orderings:
        raise SpecError(["spec.orderings: at least one ordering is required"])
    prepared = prepare_scenario(spec, dataset)
    rows = []
    for order in spec.orderings:
        events = tuple(prepared.events[i] for i in order)
        focal_index = order.index(prepared.focal_index)
        economics, _ = _settle(prepared, events, focal_index)
        rows.append(
            {
                "order": list(order),
                "events": [{"isp": e.isp, "csp": e.csp} for e in events],
                "focal_position": focal_index,
                "isp_profit_after_usd_per_month": economics.outcome.v_isp_after,
                "payment_usd_per_month": economics.outcome.payment_csp_to_isp,
                "deal": economics.outcome.deal,
            }
        )
    payload = {
        "dataset": prepared.base.id,
        "focal": {"isp": spec.focal_isp, "csp": spec.focal_csp},
        "overrides": spec.overrides.to_jsonable(),
        "orderings": rows,
    }
    return ScenarioResult("timing", payload)


def pair_comparison(spec: ScenarioSpec, dataset: Optional[MarketDataset] = None) -> ScenarioResult:
    """The same scenario refocused on each candidate ISP, payments side by side."""
    if not spec.compare_isps:
        raise SpecError(["spec.compare_isps: at least one isp is required"])
    prepared = prepare_scenario(spec, dataset)
    theta_grid = list(spec.sweeps.theta) if spec.sweeps and spec.sweeps.theta else [None]

    rows = []
    for theta in theta_grid:
        payments = {}
        deals = {}
        for isp in spec.compare_isps:
            events = list(spec.events)
            focal = events[prepared.focal_index]
            events[prepared.focal_index] = PeeringEvent(isp, focal.csp, focal.services)
            overrides = replace(
                spec.overrides,
                theta=theta if theta is not None else spec.overrides.theta,
            )
            variant = replace(
                spec,
                events=tuple(events),
                focal_isp=isp,
                overrides=overrides,
                sweeps=None,
                compare_isps=None,
            )
            cell = prepare_scenario(variant, prepared.base)
            economics, _ = _settle(cell, cell.events, cell.focal_index)
            payments[isp] = economics.outcome.payment_csp_to_isp
            deals[isp] = economics.outcome.deal
        rows.append({"theta": theta, "payments": payments, "deals": deals})
    payload = {
        "dataset": prepared.base.id,
        "csp": spec.focal_csp,
        "isps": list(spec.compare_isps),
        "theta_grid": theta_grid,
        "rows": rows,
    }
    return ScenarioResult("comparison", payload)


# --------------------------------------------------------------------------
# Report emission
# --------------------------------------------------------------------------

def _fmt(value) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return repr(value)
    return str(value)


def _csv_lines(header, rows) -> str:
    lines = [",".join(header)]
    for row in rows:
        lines.append(",".join(_fmt(v) for v in row))
    return "\n".join(lines) + "\n"


def _markdown_table(header, rows) -> str:
    lines = ["| " + " | ".join(header) + " |", "|" + "|".join([" --- "] * len(header)) + "|"]
    for row in rows:
        lines.append("| " + " | ".join(_fmt(v) for v in row) + " |")
    return "\n".join(lines) + "\n"


def _tabulate(result: ScenarioResult):
    payload = result.payload
    if result.kind == "run":
        s = payload["settlement"]
        header = [
            "payment_usd_per_month",
            "surplus_usd_per_month",
            "deal",
            "isp_profit_before_usd_per_month",
            "isp_profit_after_usd_per_month",
            "csp_profit_before_usd_per_month",
            "csp_profit_after_usd_per_month",
        ]
        return header, [[s[h] for h in header]]
    if result.kind == "sweep":
        header = ["beta", "theta", "payment_usd_per_month", "surplus_usd_per_month", "deal"]
        return header, [[row[h] for h in header] for row in payload["rows"]]
    if result.kind == "price_table":
        header = ["theta"] + [f"{s}_usd_per_gbps_month" for s in payload["services"]]
        rows = []
        for row in payload["rows"]:
            cells = [row["theta"]]
            for service in payload["services"]:
                cells.append(row["cells"][service]["bandwidth_price_usd_per_gbps_month"])
            rows.append(cells)
        return header, rows
    if result.kind == "timing":
        header = ["order", "focal_position", "isp_profit_after_usd_per_month", "payment_usd_per_month", "deal"]
        rows = [
            ["-".join(str(i) for i in row["order"]), row["focal_position"],
             row["isp_profit_after_usd_per_month"], row["payment_usd_per_month"], row["deal"]]
            for row in payload["orderings"]
        ]
        return header, rows
    if result.kind == "comparison":
        header = ["theta"] + [f"payment_to_{isp}_usd_per_month" for isp in payload["isps"]]
        rows = [
            [row["theta"]] + [row["payments"][isp] for isp in payload["isps"]]
            for row in payload["rows"]
        ]
        return header, rows
    raise ValueError(f"unknown result kind: {result.kind!r}")


def emit_report(result: ScenarioResult, format: str = "json") -> str:
    """Deterministic rendering of a result as json, csv, or markdown."""
    if format == "json":
        return json.dumps(result.to_jsonable(), indent=2) + "\n"
    if format == "csv":
        header, rows = _tabulate(result)
        return _csv_lines(header, rows)
    if format == "markdown":
        header, rows = _tabulate(result)
        return _markdown_table(header, rows)
    raise ValueError(f"unknown format: {format!r}")
