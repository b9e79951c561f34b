"""Built-in US market dataset, dataset files, and derived parameters.

The built-in ``us2013`` dataset carries the public-source US market numbers
(subscriber counts, service shares, engagement times, traffic rates, ad and
subscription revenue rates, interconnection fees) with a provenance note per
value group.  Datasets are immutable after construction and safe to share
across concurrent scenario evaluations.

File format: a single JSON document with a top-level ``schema_version``.
Unknown fields are rejected, violations are reported with field paths, and
``load(serialize(d))`` round-trips to an equal value.
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass, field
from typing import Dict, List, Mapping, Tuple

from .economics import CostModel
from .market import NONE_PROVIDER, AccessIsp, ContentProvider, ServiceSpec

SCHEMA_VERSION = 1

#: Dataset references accepted wherever a path is: built-in ids.
BUILTIN_IDS = ("us2013",)

ENV_DATASET_DIR = "PEERBARGAIN_DATASET_DIR"


class DatasetError(ValueError):
    """Malformed or semantically invalid dataset input."""


@dataclass(frozen=True)
class ChurnSchedule:
    """Linear per-service churn probabilities.

    Service at position k (0-based) gets h = h_base - mu * (span - k) and
    g = g_base - nu * k, where span is the highest position in use: the
    service easiest to replace across ISPs is hardest to replace across CSPs
    and vice versa.  Explicit overrides are applied last.
    """

    h_base: float
    mu: float
    g_base: float
    nu: float
    positions: Mapping[str, int]
    overrides: Mapping[str, Mapping[str, float]] = field(default_factory=dict)


@dataclass(frozen=True)
class UpliftScenario:
    """Named what-if for the engagement/traffic response to premium quality."""

    per_service: Mapping[str, Tuple[float, float]] = field(default_factory=dict)

    def factors(self) -> Dict[str, Tuple[float, float]]:
        return {k: tuple(v) for k, v in self.per_service.items()}


@dataclass(frozen=True)
class LoyaltyBounds:
    beta_low: float
    beta_high: float
    theta_low: float
    theta_high: float


@dataclass(frozen=True)
class MarketDataset:
    id: str
    services: Tuple[ServiceSpec, ...]
    isps: Tuple[AccessIsp, ...]
    csps: Tuple[ContentProvider, ...]
    churn_schedule: ChurnSchedule
    uplift_scenarios: Mapping[str, UpliftScenario]
    cost_model: CostModel
    loyalty_bounds: LoyaltyBounds
    provenance: Mapping[str, str] = field(default_factory=dict)
    schema_version: int = SCHEMA_VERSION

    def service(self, service_id: str) -> ServiceSpec:
        for s in self.services:
            if s.id == service_id:
                return s
        raise KeyError(f"unknown service: {service_id!r}")

    def isp(self, isp_id: str) -> AccessIsp:
        for i in self.isps:
            if i.id == isp_id:
                return i
        raise KeyError(f"unknown isp: {isp_id!r}")

    def csp(self, csp_id: str) -> ContentProvider:
        for c in self.csps:
            if c.id == csp_id:
                return c
        raise KeyError(f"unknown csp: {csp_id!r}")

    def uplift_factors(self, name: str) -> Dict[str, Tuple[float, float]]:
        if name not in self.uplift_scenarios:
            raise KeyError(f"unknown uplift scenario: {name!r}")
        return self.uplift_scenarios[name].factors()


def churn_schedule_values(schedule: ChurnSchedule, services_ordered) -> Dict[str, Tuple[float, float]]:
    """Evaluate the linear schedule for every service; overrides win."""
    span = max(schedule.positions.values(), default=0)
    values = {}
    for sid in services_ordered:
        if sid in schedule.positions:
            k = schedule.positions[sid]
            h = schedule.h_base - schedule.mu * (span - k)
            g = schedule.g_base - schedule.nu * k
        else:
            h = schedule.h_base
            g = schedule.g_base
        override = schedule.overrides.get(sid, {})
        h = override.get("h", h)
        g = override.get("g", g)
        if not (0 <= h <= 1) or not (0 <= g <= 1):
            raise DatasetError(
                f"churn_schedule generates out-of-range probability for {sid!r}: h={h}, g={g}"
            )
        values[sid] = (h, g)
    return values


def derive_isp_unit_profit(price_usd, provisioning_cost_fraction):
    """Monthly broadband profit per customer: price minus provisioning share."""
    if not (0 <= provisioning_cost_fraction <= 1):
        raise ValueError("provisioning cost fraction must be within [0, 1]")
    return price_usd * (1 - provisioning_cost_fraction)


def derive_ad_rates(csp_quarterly_profits_usd, ad_format_split, engagement_min_per_day, populations):
    """Best-effort reproduction of the per-minute ad revenue rates.

    Aggregate quarterly ad profits, converted to monthly, are split across
    service formats and divided by the monthly engagement minutes of the
    audience.  The published table's exact denominator is not recoverable;
    the embedded dataset rates stay authoritative (see REPRODUCTION.md).
    """
    if populations <= 0:
        raise ValueError("populations must be positive")
    monthly_pool = sum(csp_quarterly_profits_usd.values()) / 3
    rates = {}
    for sid, split in ad_format_split.items():
        minutes = engagement_min_per_day[sid]
        if minutes <= 0:
            raise ValueError(f"engagement for {sid!r} must be positive")
        rates[sid] = monthly_pool * split / (minutes * 30 * populations)
    return rates


# --------------------------------------------------------------------------
# Built-in US dataset
# --------------------------------------------------------------------------

# Quarterly net income attributed to the US (8.6% of worldwide Internet
# users), from the providers' 2014-Q2 filings (Microsoft: 2013-Q2, the last
# quarter reporting the online division separately).
US_CSP_QUARTERLY_PROFITS_USD = {
    "google": 294.29e6,
    "aol": 2.42e6,
    "microsoft": 37.15e6,
    "yahoo": 23.39e6,
    "facebook": 68.02e6,
}

# IAB 2013 ad-format revenue split: search 43%, digital video 7%, and an
# assumed 80/20 split of the 22% display/rich-media share between OSN and
# gaming.
US_AD_FORMAT_SPLIT = {
    "search": 0.43,
    "user_centric_video": 0.07,
    "osn": 0.8 * 0.22,
    "gaming": 0.2 * 0.22,
}

# Effective monetized audience calibrated so the derivation lands on the
# published per-minute rates; the full subscriber base (45,770,800) produces
# values about a third lower.  See REPRODUCTION.md.
US_AD_AUDIENCE_SUBSCRIBERS = 30_331_000

# Raw OSN shares (socialfresh 2014) sum to 102.61%; normalized to 1.
_OSN_RAW_TOTAL = 0.296 + 0.0406 + 0.6895

_US_PROVENANCE = {
    "services.engagement": (
        "Minutes per user per day: Nielsen/statisticbrain 2013-14 reports for "
        "YouTube (11.8), Facebook (15.2), search (6.72); gaming 6.01 min in 2010 "
        "grown 6%/yr to 7.45; Netflix 103 min/day over a 38% subscriber base "
        "gives 39.14 for commercial video."
    ),
    "services.traffic": (
        "MB per engagement minute: 480p user video 7.5, DVD-quality commercial "
        "video 22.5, OSN 0.84 (Sandvine 2014), gaming 0.051 and search 0.054 "
        "(Cisco VNI ratio to video)."
    ),
    "services.post_traffic": (
        "Premium quality raises user video 480p->720p (x2.1) and commercial "
        "video to 4x; latency-bound services keep their rate."
    ),
    "services.importance": "Share of online time spent per service category.",
    "services.churn": (
        "Linear schedules with h=0.4, mu=0.1 (search easiest to keep, gaming "
        "hardest) and g=0.4, nu=0.1 (reversed); commercial video assumed to "
        "inherit video's values (override; adjustable)."
    ),
    "services.ad_rates": (
        "USD per engagement minute from quarterly US ad profits split per the "
        "IAB 2013 format shares; embedded values authoritative (the published "
        "derivation's denominator is ambiguous, see REPRODUCTION.md)."
    ),
    "csps.shares.ad": (
        "comScore 2014 (video, search), socialfresh 2014 (OSN; raw values sum "
        "to 102.61% and are normalized), gaming assumed uniform."
    ),
    "csps.shares.subscription": "Nielsen 2013: Netflix 38%, Amazon Prime 13%, Hulu Plus 6%.",
    "csps.subscriptions": (
        "Netflix $7.99/month, Amazon Prime $99/year = $8.25/month, Hulu Plus "
        "$7.99/month; Hulu additionally monetizes a $27.61 CPM, modeled as one "
        "impression per two engagement minutes (assumption; adjustable)."
    ),
    "isps.subscribers": "US broadband subscriber counts, Leichtman Q3 2012.",
    "isps.unit_profit": (
        "ITU 2010 average US broadband price $20.0/month minus the 46.45% "
        "provisioning share = $10.71; flat pricing keeps the post-peering "
        "value identical."
    ),
    "costs.transit": "US transit price 2013: $1,000 per Gbps per month, both sides.",
    "costs.ixp": "ESPANIX price list: $2,700/year membership, $14,000/year per 10G port.",
    "costs.cdn": "CDN capacity at $4,000 per Gbps per month (2012 market survey).",
    "loyalty.bounds": (
        "Worst-case stickiness from historical market-share ratios: A-ISPs "
        "0.77-0.95, CSPs 0.36-0.80; defaults sit at the upper bounds."
    ),
}


def builtin_us_dataset() -> MarketDataset:
    """The US market parameterization shipped with the package."""
    schedule = ChurnSchedule(
        h_base=0.4,
        mu=0.1,
        g_base=0.4,
        nu=0.1,
        positions={
            "search": 0,
            "user_centric_video": 1,
            "osn": 2,
            "gaming": 3,
            "commercial_video": 1,   # assumed to behave like video
        },
        overrides={},
    )
    engagement = {
        "user_centric_video": 11.8,
        "osn": 15.2,
        "search": 6.72,
        "gaming": 7.45,
        "commercial_video": 39.14,
    }
    importance = {
        "user_centric_video": 0.1469,
        "osn": 0.1895,
        "search": 0.0836,
        "gaming": 0.0927,
        "commercial_video": 0.4873,
    }
    traffic = {
        "user_centric_video": 7.5,
        "osn": 0.84,
        "search": 0.054,
        "gaming": 0.051,
        "commercial_video": 22.5,
    }
    traffic_factor = {
        "user_centric_video": 2.1,
        "osn": 1.0,
        "search": 1.0,
        "gaming": 1.0,
        "commercial_video": 4.0,
    }
    ad_rate = {
        "user_centric_video": 0.00092,
        "osn": 0.00181,
        "search": 0.01002,
        "gaming": 0.00092,
        "commercial_video": 0.0,
    }
    subscription = {
        "user_centric_video": 0.0,
        "osn": 0.0,
        "search": 0.0,
        "gaming": 0.0,
        "commercial_video": 7.99,
    }
    order = ["user_centric_video", "osn", "search", "gaming", "commercial_video"]
    churn = churn_schedule_values(schedule, order)
    services = tuple(
        ServiceSpec(
            id=sid,
            isp_churn_prob=churn[sid][0],
            csp_churn_prob=churn[sid][1],
            engagement_min_per_day=engagement[sid],
            post_engagement_min_per_day=engagement[sid],
            traffic_mb_per_min=traffic[sid],
            post_traffic_mb_per_min=traffic[sid] * traffic_factor[sid],
            ad_rate_usd_per_min=ad_rate[sid],
            post_ad_rate_usd_per_min=ad_rate[sid],
            subscription_usd_per_month=subscription[sid],
            post_subscription_usd_per_month=subscription[sid],
            importance_weight=importance[sid],
        )
        for sid in order
    )

    unit_profit = derive_isp_unit_profit(20.0, 0.4645)
    subscribers = {
        "comcast": 19_025_000,
        "time_warner": 11_306_000,
        "cox": 4_590_000,
        "charter": 3_917_000,
        "cablevision": 3_060_000,
        "others": 3_872_800,
    }
    isps = tuple(
        AccessIsp(
            id=iid,
            subscribers=n,
            profit_per_customer_usd_per_month=unit_profit,
            post_profit_per_customer_usd_per_month=unit_profit,
            loyalty=0.95,
            transit_unit_cost=1000.0,
            can_peer=(iid != "others"),
        )
        for iid, n in subscribers.items()
    )

    shares = {
        "google": {
            "user_centric_video": 0.3939,
            "osn": 0.296 / _OSN_RAW_TOTAL,
            "search": 0.6916,
            "gaming": 0.20,
        },
        "microsoft": {
            "user_centric_video": 0.0889,
            "search": 0.1885,
            "gaming": 0.20,
        },
        "yahoo": {
            "user_centric_video": 0.1319,
            "osn": 0.0406 / _OSN_RAW_TOTAL,
            "search": 0.1056,
            "gaming": 0.20,
        },
        "facebook": {
            "user_centric_video": 0.2201,
            "osn": 0.6895 / _OSN_RAW_TOTAL,
            "gaming": 0.20,
        },
        "aol": {
            "user_centric_video": 0.1652,
            "search": 0.0143,
            "gaming": 0.20,
        },
        "netflix": {"commercial_video": 0.38},
        "amazon_prime": {"commercial_video": 0.13},
        "hulu_plus": {"commercial_video": 0.06},
    }
    # Hulu monetizes ads on top of its subscription: $27.61 CPM at an assumed
    # one impression per two minutes of engagement.
    hulu_ad_rate = 27.61 / 1000 / 2
    csps = tuple(
        ContentProvider(
            id=cid,
            loyalty=0.80,
            service_shares=share_map,
            transit_unit_cost=1000.0,
            ad_rate_overrides={"commercial_video": hulu_ad_rate} if cid == "hulu_plus" else {},
            subscription_overrides={"commercial_video": 8.25} if cid == "amazon_prime" else {},
        )
        for cid, share_map in shares.items()
    )

    uplifts = {
        "none": UpliftScenario({}),
        "conservative": UpliftScenario(
            {
                "user_centric_video": (1.0748, 1.0),
                "search": (1.002, 1.0),
            }
        ),
        "optimistic": UpliftScenario({sid: (2.0, 1.0) for sid in order}),
    }

    return MarketDataset(
        id="us2013",
        services=services,
        isps=isps,
        csps=csps,
        churn_schedule=schedule,
        uplift_scenarios=uplifts,
        cost_model=CostModel(
            transit_unit_cost_default=1000.0,
            ixp_annual_membership=2700.0,
            ixp_port_annual_fee=14000.0,
            ixp_port_capacity_gbps=10.0,
            headroom_factor=1.0,
            cdn_unit_cost=0.0,
            days_per_month=30.0,
        ),
        loyalty_bounds=LoyaltyBounds(0.77, 0.95, 0.36, 0.80),
        provenance=dict(_US_PROVENANCE),
    )


# --------------------------------------------------------------------------
# Validation
# --------------------------------------------------------------------------

def _prob(violations, path, value):
    if not (0 <= value <= 1):
        violations.append(f"{path}: must be within [0, 1], got {value}")


def _nonneg(violations, path, value):
    if value < 0:
        violations.append(f"{path}: must be >= 0, got {value}")


def validate_dataset(dataset: MarketDataset) -> List[str]:
    """Return every invariant violation with its field path (empty = valid)."""
    v: List[str] = []
    service_ids = [s.id for s in dataset.services]
    if not dataset.services:
        v.append("services: at least one service is required")
    for coll, what in ((dataset.services, "services"), (dataset.isps, "isps"), (dataset.csps, "csps")):
        seen = set()
        for item in coll:
            if item.id in seen:
                v.append(f"{what}[{item.id}]: duplicate id")
            seen.add(item.id)

    for s in dataset.services:
        p = f"services[{s.id}]"
        _prob(v, f"{p}.isp_churn_prob", s.isp_churn_prob)
        _prob(v, f"{p}.csp_churn_prob", s.csp_churn_prob)
        for name in (
            "engagement_min_per_day",
            "post_engagement_min_per_day",
            "traffic_mb_per_min",
            "post_traffic_mb_per_min",
            "ad_rate_usd_per_min",
            "post_ad_rate_usd_per_min",
            "subscription_usd_per_month",
            "post_subscription_usd_per_month",
        ):
            _nonneg(v, f"{p}.{name}", getattr(s, name))
        _prob(v, f"{p}.importance_weight", s.importance_weight)
    total_importance = sum(s.importance_weight for s in dataset.services)
    if dataset.services and abs(total_importance - 1) > 1e-9:
        v.append(f"services: importance weights must sum to 1, got {total_importance!r}")

    for i in dataset.isps:
        p = f"isps[{i.id}]"
        _nonneg(v, f"{p}.subscribers", i.subscribers)
        _prob(v, f"{p}.loyalty", i.loyalty)
        _nonneg(v, f"{p}.transit_unit_cost", i.transit_unit_cost)

    for c in dataset.csps:
        p = f"csps[{c.id}]"
        if c.id == NONE_PROVIDER:
            v.append(f"{p}: id {NONE_PROVIDER!r} is reserved")
        _prob(v, f"{p}.loyalty", c.loyalty)
        _nonneg(v, f"{p}.transit_unit_cost", c.transit_unit_cost)
        for sid, share in c.service_shares.items():
            if sid not in service_ids:
                v.append(f"{p}.service_shares[{sid}]: unknown service")
            _prob(v, f"{p}.service_shares[{sid}]", share)
        for which in ("ad_rate_overrides", "subscription_overrides"):
            for sid, value in getattr(c, which).items():
                if sid not in service_ids:
                    v.append(f"{p}.{which}[{sid}]: unknown service")
                _nonneg(v, f"{p}.{which}[{sid}]", value)

    for sid in service_ids:
        total = sum(c.share(sid) for c in dataset.csps)
        if total > 1 + 1e-9:
            v.append(f"csps: shares for service {sid!r} sum to {total!r} > 1")

    for sid in dataset.churn_schedule.positions:
        if sid not in service_ids:
            v.append(f"churn_schedule.positions[{sid}]: unknown service")
    for sid in dataset.churn_schedule.overrides:
        if sid not in service_ids:
            v.append(f"churn_schedule.overrides[{sid}]: unknown service")
    try:
        churn_schedule_values(dataset.churn_schedule, service_ids)
    except DatasetError as exc:
        v.append(f"churn_schedule: {exc}")

    for name, scenario in dataset.uplift_scenarios.items():
        for sid, factors in scenario.per_service.items():
            p = f"uplift_scenarios[{name}][{sid}]"
            if sid not in service_ids:
                v.append(f"{p}: unknown service")
            if len(tuple(factors)) != 2:
                v.append(f"{p}: expected (engagement_factor, traffic_factor)")
                continue
            for label, factor in zip(("engagement_factor", "traffic_factor"), factors):
                _nonneg(v, f"{p}.{label}", factor)

    cm = dataset.cost_model
    for name in (
        "transit_unit_cost_default",
        "ixp_annual_membership",
        "ixp_port_annual_fee",
        "cdn_unit_cost",
    ):
        _nonneg(v, f"cost_model.{name}", getattr(cm, name))
    if cm.ixp_port_capacity_gbps <= 0:
        v.append(f"cost_model.ixp_port_capacity_gbps: must be > 0, got {cm.ixp_port_capacity_gbps}")
    if cm.headroom_factor < 1:
        v.append(f"cost_model.headroom_factor: must be >= 1, got {cm.headroom_factor}")
    if cm.days_per_month <= 0:
        v.append(f"cost_model.days_per_month: must be > 0, got {cm.days_per_month}")

    b = dataset.loyalty_bounds
    for name in ("beta_low", "beta_high", "theta_low", "theta_high"):
        _prob(v, f"loyalty_bounds.{name}", getattr(b, name))
    if b.beta_low > b.beta_high:
        v.append("loyalty_bounds: beta_low must be <= beta_high")
    if b.theta_low > b.theta_high:
        v.append("loyalty_bounds: theta_low must be <= theta_high")
    return v


# --------------------------------------------------------------------------
# Serialization
# --------------------------------------------------------------------------

_SERVICE_FIELDS = (
    "id",
    "isp_churn_prob",
    "csp_churn_prob",
    "engagement_min_per_day",
    "post_engagement_min_per_day",
    "traffic_mb_per_min",
    "post_traffic_mb_per_min",
    "ad_rate_usd_per_min",
    "post_ad_rate_usd_per_min",
    "subscription_usd_per_month",
    "post_subscription_usd_per_month",
    "importance_weight",
)
_ISP_FIELDS = (
    "id",
    "subscribers",
    "profit_per_customer_usd_per_month",
    "post_profit_per_customer_usd_per_month",
    "loyalty",
    "transit_unit_cost",
    "can_peer",
)
_CSP_FIELDS = (
    "id",
    "loyalty",
    "service_shares",
    "transit_unit_cost",
    "ad_rate_overrides",
    "subscription_overrides",
)
_COST_FIELDS = (
    "transit_unit_cost_default",
    "ixp_annual_membership",
    "ixp_port_annual_fee",
    "ixp_port_capacity_gbps",
    "headroom_factor",
    "cdn_unit_cost",
    "days_per_month",
)


def dataset_to_jsonable(dataset: MarketDataset) -> Dict:
    return {
        "schema_version": dataset.schema_version,
        "id": dataset.id,
        "services": [
            {name: getattr(s, name) for name in _SERVICE_FIELDS} for s in dataset.services
        ],
        "isps": [{name: getattr(i, name) for name in _ISP_FIELDS} for i in dataset.isps],
        "csps": [
            {
                "id": c.id,
                "loyalty": c.loyalty,
                "service_shares": dict(c.service_shares),
                "transit_unit_cost": c.transit_unit_cost,
                "ad_rate_overrides": dict(c.ad_rate_overrides),
                "subscription_overrides": dict(c.subscription_overrides),
            }
            for c in dataset.csps
        ],
        "churn_schedule": {
            "h_base": dataset.churn_schedule.h_base,
            "mu": dataset.churn_schedule.mu,
            "g_base": dataset.churn_schedule.g_base,
            "nu": dataset.churn_schedule.nu,
            "positions": dict(dataset.churn_schedule.positions),
            "overrides": {k: dict(val) for k, val in dataset.churn_schedule.overrides.items()},
        },
        "uplift_scenarios": {
            name: {
                sid: {"engagement_factor": f[0], "traffic_factor": f[1]}
                for sid, f in scenario.per_service.items()
            }
            for name, scenario in dataset.uplift_scenarios.items()
        },
        "cost_model": {name: getattr(dataset.cost_model, name) for name in _COST_FIELDS},
        "loyalty_bounds": {
            "beta_low": dataset.loyalty_bounds.beta_low,
            "beta_high": dataset.loyalty_bounds.beta_high,
            "theta_low": dataset.loyalty_bounds.theta_low,
            "theta_high": dataset.loyalty_bounds.theta_high,
        },
        "provenance": dict(dataset.provenance),
    }


def serialize_dataset(dataset: MarketDataset) -> str:
    return json.dumps(dataset_to_jsonable(dataset), indent=2) + "\n"


def _take(obj: Mapping, path: str, known) -> Dict:
    if not isinstance(obj, Mapping):
        raise DatasetError(f"{path}: expected an object")
    unknown = set(obj) - set(known)
    if unknown:
        raise DatasetError(f"{path}: unknown fields {sorted(unknown)}")
    return dict(obj)


def _require(obj: Mapping, path: str, name: str):
    if name not in obj:
        raise DatasetError(f"{path}.{name}: missing required field")
    return obj[name]


def dataset_from_jsonable(obj) -> MarketDataset:
    top = _take(
        obj,
        "dataset",
        (
            "schema_version",
            "id",
            "services",
            "isps",
            "csps",
            "churn_schedule",
            "uplift_scenarios",
            "cost_model",
            "loyalty_bounds",
            "provenance",
        ),
    )
    version = _require(top, "dataset", "schema_version")
    if version != SCHEMA_VERSION:
        raise DatasetError(f"dataset.schema_version: unsupported version {version!r}")

    services = tuple(
        ServiceSpec(**_take(entry, f"services[{idx}]", _SERVICE_FIELDS))
        for idx, entry in enumerate(_require(top, "dataset", "services"))
    )
    isps = tuple(
        AccessIsp(**_take(entry, f"isps[{idx}]", _ISP_FIELDS))
        for idx, entry in enumerate(_require(top, "dataset", "isps"))
    )
    csps = tuple(
        ContentProvider(**_take(entry, f"csps[{idx}]", _CSP_FIELDS))
        for idx, entry in enumerate(_require(top, "dataset", "csps"))
    )
    schedule_obj = _take(
        _require(top, "dataset", "churn_schedule"),
        "churn_schedule",
        ("h_base", "mu", "g_base", "nu", "positions", "overrides"),
    )
    schedule = ChurnSchedule(
        h_base=_require(schedule_obj, "churn_schedule", "h_base"),
        mu=_require(schedule_obj, "churn_schedule", "mu"),
        g_base=_require(schedule_obj, "churn_schedule", "g_base"),
        nu=_require(schedule_obj, "churn_schedule", "nu"),
        positions=dict(schedule_obj.get("positions", {})),
        overrides={
            sid: _take(val, f"churn_schedule.overrides[{sid}]", ("h", "g"))
            for sid, val in schedule_obj.get("overrides", {}).items()
        },
    )
    uplifts = {}
    for name, entries in _require(top, "dataset", "uplift_scenarios").items():
        per_service = {}
        for sid, factors in entries.items():
            f = _take(
                factors,
                f"uplift_scenarios[{name}][{sid}]",
                ("engagement_factor", "traffic_factor"),
            )
            per_service[sid] = (
                _require(f, f"uplift_scenarios[{name}][{sid}]", "engagement_factor"),
                _require(f, f"uplift_scenarios[{name}][{sid}]", "traffic_factor"),
            )
        uplifts[name] = UpliftScenario(per_service)
    cost_model = CostModel(**_take(_require(top, "dataset", "cost_model"), "cost_model", _COST_FIELDS))
    bounds = LoyaltyBounds(
        **_take(
            _require(top, "dataset", "loyalty_bounds"),
            "loyalty_bounds",
            ("beta_low", "beta_high", "theta_low", "theta_high"),
        )
    )
    dataset = MarketDataset(
        id=top.get("id", "custom"),
        services=services,
        isps=isps,
        csps=csps,
        churn_schedule=schedule,
        uplift_scenarios=uplifts,
        cost_model=cost_model,
        loyalty_bounds=bounds,
        provenance=dict(top.get("provenance", {})),
        schema_version=version,
    )
    violations = validate_dataset(dataset)
    if violations:
        raise DatasetError("; ".join(violations))
    return dataset


def resolve_dataset_path(ref: str) -> str:
    """Resolve a dataset file reference, consulting $PEERBARGAIN_DATASET_DIR."""
    if os.path.exists(ref):
        return ref
    search_dir = os.environ.get(ENV_DATASET_DIR)
    if search_dir:
        candidate = os.path.join(search_dir, ref)
        if os.path.exists(candidate):
            return candidate
    raise DatasetError(f"dataset file not found: {ref!r}")


_builtin_cache: Dict[str, MarketDataset] = {}


def load_dataset(ref: str) -> MarketDataset:
    """Load a dataset by built-in id (``us2013``) or file path.

    Built-ins are shared: datasets are immutable, so one instance serves
    every concurrent evaluation (and keeps the initial-state cache warm).
    """
    if ref in BUILTIN_IDS:
        if ref not in _builtin_cache:
            _builtin_cache[ref] = builtin_us_dataset()
        return _builtin_cache[ref]
    path = resolve_dataset_path(ref)
    try:
        with open(path, "r", encoding="utf-8") as handle:
            obj = json.load(handle)
    except json.JSONDecodeError as exc:
        raise DatasetError(f"{path}: invalid JSON at line {exc.lineno}, column {exc.colno}") from exc
    return dataset_from_jsonable(obj)
