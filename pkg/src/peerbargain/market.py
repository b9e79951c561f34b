"""Customer-type state space and initial market distribution.

The market is a deterministic flow model: customers are grouped into types
(access ISP, most-valued service, and one provider per service), and every
type holds a real-valued customer count.  States are immutable; operations
return new states or pure aggregates.

Counts are ordinary numbers under Python's numeric tower.  Float datasets
produce float counts; exact inputs (``fractions.Fraction``) stay exact all
the way through churn, which is what makes integer-exact reproduction of
hand-computed examples possible.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Dict, Iterable, Mapping, Tuple

#: Sentinel provider for customers that use no provider for a service
#: (per-service shares summing below 1 leave a remainder bucket).
#: NONE never peers, never loses customers in phase 1 and never captures
#: customers in phase 2.
NONE_PROVIDER = "NONE"

#: Share remainders below this are treated as zero (no NONE bucket).
SHARE_TOLERANCE = 1e-9


@dataclass(frozen=True)
class ServiceSpec:
    """All per-service parameters of the model.

    Rates are monthly-free units: engagement in minutes per user per day,
    traffic in MB per engagement minute, ad revenue in USD per engagement
    minute, subscriptions in USD per subscriber per month.  The ``post_``
    fields hold the values under premium delivery, before any scenario-level
    engagement uplift is applied on top.
    """

    id: str
    isp_churn_prob: float               # h(s)
    csp_churn_prob: float               # g(s)
    engagement_min_per_day: float
    post_engagement_min_per_day: float
    traffic_mb_per_min: float
    post_traffic_mb_per_min: float
    ad_rate_usd_per_min: float
    post_ad_rate_usd_per_min: float
    subscription_usd_per_month: float
    post_subscription_usd_per_month: float
    importance_weight: float


@dataclass(frozen=True)
class AccessIsp:
    id: str
    subscribers: float
    profit_per_customer_usd_per_month: float
    post_profit_per_customer_usd_per_month: float
    loyalty: float                      # beta(i)
    transit_unit_cost: float            # USD per Gbps per month
    can_peer: bool = True               # passive buckets (e.g. "others") never peer


@dataclass(frozen=True)
class ContentProvider:
    id: str
    loyalty: float                      # theta(x)
    service_shares: Mapping[str, float]  # service id -> fraction of users; absent = 0
    transit_unit_cost: float
    # Per-provider revenue deviations from the service-level defaults
    # (e.g. a provider that charges a different subscription for the same
    # service, or one that also runs ads on a normally ad-free service).
    ad_rate_overrides: Mapping[str, float] = field(default_factory=dict)
    subscription_overrides: Mapping[str, float] = field(default_factory=dict)

    def share(self, service_id: str):
        return self.service_shares.get(service_id, 0)


@dataclass(frozen=True)
class CustomerType:
    """One market cell: ISP, most-valued service, and the provider vector.

    ``providers`` is aligned with the type space's service order; entry k is
    the provider of service k (possibly :data:`NONE_PROVIDER`).
    """

    isp: str
    preferred_service: str
    providers: Tuple[str, ...]


@dataclass(frozen=True)
class PeeringLedger:
    """Which services each (ISP, CSP) pair delivers at premium quality.

    Entries only ever grow; there is deliberately no removal operation
    (the churn rules have no reverse transition).
    """

    entries: Mapping[Tuple[str, str], frozenset] = field(default_factory=dict)

    def services_at_premium(self, isp: str, csp: str) -> frozenset:
        return self.entries.get((isp, csp), frozenset())

    def with_services(self, isp: str, csp: str, services: Iterable[str]) -> "PeeringLedger":
        merged = self.services_at_premium(isp, csp) | frozenset(services)
        new_entries = dict(self.entries)
        new_entries[(isp, csp)] = merged
        return PeeringLedger(new_entries)

    def to_jsonable(self):
        return [
            {"isp": isp, "csp": csp, "services": sorted(services)}
            for (isp, csp), services in sorted(self.entries.items())
            if services
        ]

    @staticmethod
    def from_jsonable(items) -> "PeeringLedger":
        return PeeringLedger(
            {(e["isp"], e["csp"]): frozenset(e["services"]) for e in items}
        )


@dataclass(frozen=True)
class TypeSpace:
    """Deterministic enumeration of every customer type.

    Ordering is lexicographic over (ISP, preferred service, provider vector),
    all in dataset declaration order, with NONE listed after the real
    providers.  Two builds over the same dataset enumerate identically, so
    serialized states are reproducible byte for byte.
    """

    services: Tuple[str, ...]
    isps: Tuple[str, ...]
    provider_options: Tuple[Tuple[str, ...], ...]   # per service, incl. NONE when used
    types: Tuple[CustomerType, ...]
    index: Mapping[CustomerType, int]

    def service_position(self, service_id: str) -> int:
        return self.services.index(service_id)

    def types_per_isp(self) -> int:
        return len(self.types) // len(self.isps) if self.isps else 0


@dataclass(frozen=True)
class MarketState:
    """Immutable snapshot: per-type customer counts plus the peering ledger."""

    space: TypeSpace
    counts: Mapping[CustomerType, float]
    ledger: PeeringLedger = field(default_factory=PeeringLedger)

    def replace_counts(self, counts, ledger=None) -> "MarketState":
        return MarketState(self.space, counts, self.ledger if ledger is None else ledger)

    def total_population(self):
        return sum(self.counts[t] for t in self.space.types)


def _check_unique_ids(items, what: str):
    seen = set()
    for item in items:
        if item.id in seen:
            raise ValueError(f"duplicate {what} id: {item.id!r}")
        seen.add(item.id)


def provider_options_for_service(service_id: str, providers) -> Tuple[str, ...]:
    """Providers with positive share for the service, plus NONE for any remainder.

    Zero-share providers are excluded from the enumeration entirely, which
    keeps the state space minimal and matches the capture-eligibility rule
    (a provider can only be chosen where it already has customers).
    """
    options = [p.id for p in providers if p.share(service_id) > 0]
    total = sum(p.share(service_id) for p in providers)
    remainder = 1 - total
    if remainder > SHARE_TOLERANCE:
        options.append(NONE_PROVIDER)
    if not options:
        raise ValueError(
            f"service {service_id!r} has no provider with positive share and no remainder"
        )
    return tuple(options)


def build_type_space(services, providers, isps) -> TypeSpace:
    """Enumerate all customer types in a stable, deterministic order.

    Size per ISP is K x prod_k(number of options for service k), where the
    options are the positive-share providers plus NONE when the shares leave
    a remainder.
    """
    if not services:
        raise ValueError("at least one service is required")
    _check_unique_ids(services, "service")
    _check_unique_ids(providers, "provider")
    _check_unique_ids(isps, "isp")

    service_ids = tuple(s.id for s in services)
    options = tuple(provider_options_for_service(sid, providers) for sid in service_ids)

    types = []
    for isp in isps:
        for sid in service_ids:
            for vector in itertools.product(*options):
                types.append(CustomerType(isp.id, sid, vector))
    types = tuple(types)
    index = {t: i for i, t in enumerate(types)}
    return TypeSpace(
        services=service_ids,
        isps=tuple(i.id for i in isps),
        provider_options=options,
        types=types,
        index=index,
    )


def _share_of(option: str, service_id: str, providers_by_id, remainder_by_service):
    if option == NONE_PROVIDER:
        return remainder_by_service[service_id]
    return providers_by_id[option].share(service_id)


def initialize_market(dataset) -> MarketState:
    """Distribute each ISP's subscribers over the type space.

    Counts factorize: N(i,(s,T)) = n(i) * importance(s) * prod_k share(T_k, k).
    Usage patterns are uncorrelated across services and identically
    distributed across ISPs; the ledger starts empty (no premium peering
    anywhere in the market).
    """
    space = build_type_space(dataset.services, dataset.csps, dataset.isps)
    providers_by_id = {p.id: p for p in dataset.csps}
    importance = {s.id: s.importance_weight for s in dataset.services}
    subscribers = {i.id: i.subscribers for i in dataset.isps}

    remainder_by_service = {}
    for sid in space.services:
        total = sum(p.share(sid) for p in dataset.csps)
        remainder = 1 - total
        remainder_by_service[sid] = remainder if remainder > SHARE_TOLERANCE else 0

    counts = {}
    for t in space.types:
        n = subscribers[t.isp] * importance[t.preferred_service]
        for sid, option in zip(space.services, t.providers):
            n = n * _share_of(option, sid, providers_by_id, remainder_by_service)
        counts[t] = n
    return MarketState(space, counts)


def customers_of(state: MarketState, isp: str, csp: str, service: str):
    """Number of the ISP's customers using ``csp`` for ``service`` (any preference)."""
    space = state.space
    if isp not in space.isps:
        raise KeyError(f"unknown isp: {isp!r}")
    if service not in space.services:
        raise KeyError(f"unknown service: {service!r}")
    pos = space.service_position(service)
    return sum(
        state.counts[t]
        for t in space.types
        if t.isp == isp and t.providers[pos] == csp
    )


def preferred_customers_of(state: MarketState, isp: str, csp: str, service: str):
    """Like :func:`customers_of`, restricted to customers whose most-valued
    service is ``service``.  This is the slice that churns, and the slice the
    revenue model attributes to the service."""
    space = state.space
    if isp not in space.isps:
        raise KeyError(f"unknown isp: {isp!r}")
    if service not in space.services:
        raise KeyError(f"unknown service: {service!r}")
    pos = space.service_position(service)
    return sum(
        state.counts[t]
        for t in space.types
        if t.isp == isp and t.preferred_service == service and t.providers[pos] == csp
    )


def isp_population(state: MarketState, isp: str):
    """Total customer count of one ISP."""
    if isp not in state.space.isps:
        raise KeyError(f"unknown isp: {isp!r}")
    return sum(state.counts[t] for t in state.space.types if t.isp == isp)


def state_to_jsonable(state: MarketState) -> Dict:
    """Documented snapshot shape; types emitted in the stable order."""
    return {
        "counts": [
            {
                "isp": t.isp,
                "preferred": t.preferred_service,
                "providers": dict(zip(state.space.services, t.providers)),
                "n": float(state.counts[t]),
            }
            for t in state.space.types
        ],
        "ledger": state.ledger.to_jsonable(),
    }
