"""Traffic volumes, delivery costs, bilateral profits, and the settlement.

All money is normalized to USD per month (a month is ``days_per_month`` days,
30 by default).  Traffic is an average rate in Gbps derived from monthly
megabyte volume.  Profits are bilateral slices: only the revenues and
expenditures between the one ISP and the one CSP under negotiation enter the
calculation, because nothing else changes when they peer.

Revenue attribution: a CSP's per-service revenue from an ISP counts the
customers whose *most-valued* service it is.  The flat-rate usage of the same
provider by customers who mainly care about something else is background that
premium delivery of this service neither creates nor moves.  Delivery costs,
by contrast, are driven by every byte served, so traffic sums over all users
of the provider's services regardless of preference.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Dict, Mapping, Optional, Tuple

from .market import MarketState, customers_of, isp_population, preferred_customers_of

SECONDS_PER_DAY = 86400


@dataclass(frozen=True)
class CostModel:
    """Unit costs of moving bits: transit, IXP peering, and optional CDN."""

    transit_unit_cost_default: float = 1000.0   # USD per Gbps per month
    ixp_annual_membership: float = 2700.0       # USD per year, per party
    ixp_port_annual_fee: float = 14000.0        # USD per year per port
    ixp_port_capacity_gbps: float = 10.0
    headroom_factor: float = 1.0                # provisioned capacity / average rate
    cdn_unit_cost: float = 0.0                  # USD per Gbps per month; 0 = CDN off
    days_per_month: float = 30.0


@dataclass(frozen=True)
class BargainOutcome:
    """Both sides' profits, the joint surplus, and the fair transfer.

    ``payment_csp_to_isp`` is w: positive means the CSP pays the ISP; the
    ISP-to-CSP payment is the same value with opposite sign.
    """

    v_isp_before: float
    v_isp_after: float
    v_csp_before: float
    v_csp_after: float
    surplus_u: float
    payment_csp_to_isp: float
    deal: bool

    def to_jsonable(self) -> Dict:
        return {
            "isp_profit_before_usd_per_month": self.v_isp_before,
            "isp_profit_after_usd_per_month": self.v_isp_after,
            "csp_profit_before_usd_per_month": self.v_csp_before,
            "csp_profit_after_usd_per_month": self.v_csp_after,
            "surplus_usd_per_month": self.surplus_u,
            "payment_usd_per_month": self.payment_csp_to_isp,
            "deal": self.deal,
        }


#: engagement/traffic multipliers per service: service id -> (engagement, traffic)
UpliftFactors = Mapping[str, Tuple[float, float]]


def _factors(uplift: Optional[UpliftFactors], service_id: str) -> Tuple[float, float]:
    if not uplift:
        return (1.0, 1.0)
    return tuple(uplift.get(service_id, (1.0, 1.0)))


def mb_per_month_to_gbps(mb_per_month, days_per_month=30.0):
    """Average rate: megabytes over a month to Gbps (decimal units)."""
    return mb_per_month * 8 / (days_per_month * SECONDS_PER_DAY * 1000)


def bilateral_traffic_gbps(
    dataset,
    state: MarketState,
    isp: str,
    csp: str,
    phase: str = "pre",
    services=None,
    uplift: Optional[UpliftFactors] = None,
    days_per_month: float = 30.0,
):
    """Average Gbps flowing from the CSP to the ISP's customers.

    Sums phi * tau * n(i)_{xi=x} over the given services (all services when
    None), at pre- or premium-quality rates.  Post-phase rates take the
    service's premium traffic rate and engagement, scaled by the uplift
    scenario's factors.
    """
    if phase not in ("pre", "post"):
        raise ValueError(f"phase must be 'pre' or 'post', got {phase!r}")
    service_ids = [s.id for s in dataset.services]
    wanted = set(service_ids if services is None else services)
    mb_per_month = 0.0
    for spec in dataset.services:
        if spec.id not in wanted:
            continue
        n = customers_of(state, isp, csp, spec.id)
        if phase == "pre":
            rate, minutes = spec.traffic_mb_per_min, spec.engagement_min_per_day
        else:
            ef, tf = _factors(uplift, spec.id)
            rate = spec.post_traffic_mb_per_min * tf
            minutes = spec.post_engagement_min_per_day * ef
        mb_per_month += rate * minutes * n * days_per_month
    return mb_per_month_to_gbps(mb_per_month, days_per_month)


def transit_cost(traffic_gbps, unit_cost):
    """Linear transit charge in USD per month."""
    if traffic_gbps < 0 or unit_cost < 0:
        raise ValueError("traffic and unit cost must be non-negative")
    return traffic_gbps * unit_cost


def ixp_monthly_cost(traffic_gbps, cost_model: CostModel):
    """IXP membership plus port fees for the given average rate.

    A direct peering needs at least one port on each side even at zero
    traffic; beyond that, ports cover the headroom-scaled rate.
    """
    if traffic_gbps < 0:
        raise ValueError("traffic must be non-negative")
    ports = max(
        1, math.ceil(traffic_gbps * cost_model.headroom_factor / cost_model.ixp_port_capacity_gbps)
    )
    return (cost_model.ixp_annual_membership + ports * cost_model.ixp_port_annual_fee) / 12


def peering_cost(traffic_gbps, cost_model: CostModel):
    """One party's monthly peering cost: IXP fees plus any CDN surcharge."""
    return ixp_monthly_cost(traffic_gbps, cost_model) + cost_model.cdn_unit_cost * traffic_gbps


def _csp_rates(dataset, csp_id: str, spec, phase: str, premium: bool, uplift):
    provider = next(c for c in dataset.csps if c.id == csp_id)
    if phase == "pre" or not premium:
        subscription = provider.subscription_overrides.get(
            spec.id, spec.subscription_usd_per_month
        )
        ad_rate = provider.ad_rate_overrides.get(spec.id, spec.ad_rate_usd_per_min)
        minutes = spec.engagement_min_per_day
    else:
        subscription = provider.subscription_overrides.get(
            spec.id, spec.post_subscription_usd_per_month
        )
        ad_rate = provider.ad_rate_overrides.get(spec.id, spec.post_ad_rate_usd_per_min)
        ef, _ = _factors(uplift, spec.id)
        minutes = spec.post_engagement_min_per_day * ef
    return subscription, ad_rate, minutes


def csp_revenue(
    dataset,
    state: MarketState,
    isp: str,
    csp: str,
    phase: str = "pre",
    premium_services=None,
    uplift: Optional[UpliftFactors] = None,
    days_per_month: float = 30.0,
):
    """Subscription plus advertising revenue from the ISP's customer base.

    Premium services use hatted rates and uplifted engagement; everything else
    stays at best-effort rates even in the post phase.
    """
    premium = set() if premium_services is None and phase == "pre" else premium_services
    if premium is None:
        premium = {s.id for s in dataset.services}
    revenue = 0.0
    for spec in dataset.services:
        n = preferred_customers_of(state, isp, csp, spec.id)
        subscription, ad_rate, minutes = _csp_rates(
            dataset, csp, spec, phase, spec.id in premium, uplift
        )
        revenue += (subscription + ad_rate * minutes * days_per_month) * n
    return revenue


def csp_profit(
    dataset,
    state: MarketState,
    isp: str,
    csp: str,
    phase: str = "pre",
    premium_services=None,
    uplift: Optional[UpliftFactors] = None,
    cost_model: Optional[CostModel] = None,
):
    """V_x (pre) or V_x-hat (post): bilateral revenue minus delivery cost.

    Pre-peering delivery is all-transit.  Post-peering, the premium services
    ride the direct interconnect (IXP + optional CDN per the cost model) and
    any remaining services stay on transit.
    """
    cm = cost_model or getattr(dataset, "cost_model", None) or CostModel()
    provider = next((c for c in dataset.csps if c.id == csp), None)
    if provider is None:
        raise KeyError(f"unknown csp: {csp!r}")
    days = cm.days_per_month
    if phase == "pre":
        traffic = bilateral_traffic_gbps(dataset, state, isp, csp, "pre", None, None, days)
        cost = transit_cost(traffic, provider.transit_unit_cost)
        return csp_revenue(dataset, state, isp, csp, "pre", None, None, days) - cost
    premium = (
        frozenset(premium_services)
        if premium_services is not None
        else frozenset(s.id for s in dataset.services)
    )
    rest = [s.id for s in dataset.services if s.id not in premium]
    premium_traffic = bilateral_traffic_gbps(dataset, state, isp, csp, "post", premium, uplift, days)
    rest_traffic = bilateral_traffic_gbps(dataset, state, isp, csp, "pre", rest, None, days)
    cost = peering_cost(premium_traffic, cm) + transit_cost(rest_traffic, provider.transit_unit_cost)
    return csp_revenue(dataset, state, isp, csp, "post", premium, uplift, days) - cost


def isp_profit(
    dataset,
    state: MarketState,
    isp: str,
    csp: str,
    phase: str = "pre",
    premium_services=None,
    uplift: Optional[UpliftFactors] = None,
    cost_model: Optional[CostModel] = None,
    attribution_weight=None,
):
    """V_i (pre) or V_i-hat (post): subscriber profit minus delivery cost.

    ``attribution_weight`` optionally scales the per-customer profit to the
    share attributable to the services under negotiation (off by default;
    flat broadband pricing gives no per-service revenue signal).
    """
    access = next((i for i in dataset.isps if i.id == isp), None)
    if access is None:
        raise KeyError(f"unknown isp: {isp!r}")
    cm = cost_model or getattr(dataset, "cost_model", None) or CostModel()
    days = cm.days_per_month
    population = isp_population(state, isp)
    if phase == "pre":
        unit = access.profit_per_customer_usd_per_month
        traffic = bilateral_traffic_gbps(dataset, state, isp, csp, "pre", None, None, days)
        cost = transit_cost(traffic, access.transit_unit_cost)
    else:
        unit = access.post_profit_per_customer_usd_per_month
        premium = (
            frozenset(premium_services)
            if premium_services is not None
            else frozenset(s.id for s in dataset.services)
        )
        rest = [s.id for s in dataset.services if s.id not in premium]
        premium_traffic = bilateral_traffic_gbps(dataset, state, isp, csp, "post", premium, uplift, days)
        rest_traffic = bilateral_traffic_gbps(dataset, state, isp, csp, "pre", rest, None, days)
        cost = peering_cost(premium_traffic, cm) + transit_cost(rest_traffic, access.transit_unit_cost)
    if attribution_weight is not None:
        unit = unit * attribution_weight
    return population * unit - cost


def nash_settlement(v_isp_before, v_isp_after, v_csp_before, v_csp_after) -> BargainOutcome:
    """Split the joint surplus equally; transfer whatever evens the gains.

    U = (V_i-hat - V_i) + (V_x-hat - V_x).  A negative surplus means no deal
    (payment zero); otherwise w = ((V_x-hat - V_x) - (V_i-hat - V_i)) / 2 and
    each side nets exactly U / 2 after the transfer.
    """
    values = (v_isp_before, v_isp_after, v_csp_before, v_csp_after)
    if not all(math.isfinite(float(v)) for v in values):
        raise ValueError("profits must be finite")
    gain_isp = v_isp_after - v_isp_before
    gain_csp = v_csp_after - v_csp_before
    surplus = gain_isp + gain_csp
    if surplus < 0:
        return BargainOutcome(
            v_isp_before, v_isp_after, v_csp_before, v_csp_after, surplus, 0.0, False
        )
    payment = (gain_csp - gain_isp) / 2
    return BargainOutcome(
        v_isp_before, v_isp_after, v_csp_before, v_csp_after, surplus, payment, True
    )


def bandwidth_price(payment_usd_per_month, pre_gbps, post_gbps):
    """Payment divided by the extra volume the premium peering induces."""
    if post_gbps <= pre_gbps:
        raise ValueError(
            f"no extra volume to price: post {post_gbps} <= pre {pre_gbps} Gbps"
        )
    return payment_usd_per_month / (post_gbps - pre_gbps)


@dataclass(frozen=True)
class CdnConfig:
    """CDN variant of the interconnect.

    With an in-network CDN the premium traffic is served from caches near the
    customers; the direct link carries cache fill, approximated by the
    pre-peering volume of the premium services.  The ISP provisions the CDN
    (billed per Gbps on that baseline); the CSP only feeds it.
    """

    enabled: bool = False
    unit_cost: float = 4000.0  # USD per Gbps per month


@dataclass(frozen=True)
class PairEconomics:
    """Everything the settlement of one focal pair is made of."""

    isp: str
    csp: str
    premium_services: Tuple[str, ...]
    pre_total_gbps: float
    pre_premium_gbps: float
    post_premium_gbps: float
    post_rest_gbps: float
    isp_cost_before: float
    isp_cost_after: float
    csp_cost_before: float
    csp_cost_after: float
    population_before: float
    population_after: float
    outcome: BargainOutcome

    def to_jsonable(self) -> Dict:
        data = {
            "isp": self.isp,
            "csp": self.csp,
            "premium_services": list(self.premium_services),
            "pre_traffic_gbps": self.pre_total_gbps,
            "pre_premium_traffic_gbps": self.pre_premium_gbps,
            "post_premium_traffic_gbps": self.post_premium_gbps,
            "post_besteffort_traffic_gbps": self.post_rest_gbps,
            "isp_delivery_cost_before_usd_per_month": self.isp_cost_before,
            "isp_delivery_cost_after_usd_per_month": self.isp_cost_after,
            "csp_delivery_cost_before_usd_per_month": self.csp_cost_before,
            "csp_delivery_cost_after_usd_per_month": self.csp_cost_after,
            "isp_population_before": self.population_before,
            "isp_population_after": self.population_after,
        }
        data.update(self.outcome.to_jsonable())
        return data


def evaluate_pair(
    dataset,
    pre_state: MarketState,
    post_state: MarketState,
    isp: str,
    csp: str,
    premium_services,
    uplift: Optional[UpliftFactors] = None,
    cdn: Optional[CdnConfig] = None,
    attribution: bool = False,
) -> PairEconomics:
    """Compute V, V-hat on both sides around one peering event and settle.

    ``pre_state``/``post_state`` bracket the focal event.  ``cdn`` switches
    the interconnect to the CDN variant; ``attribution`` scales the ISP's
    per-customer profit by the premium services' combined importance.
    """
    access = next((i for i in dataset.isps if i.id == isp), None)
    provider = next((c for c in dataset.csps if c.id == csp), None)
    if access is None:
        raise KeyError(f"unknown isp: {isp!r}")
    if provider is None:
        raise KeyError(f"unknown csp: {csp!r}")
    cm = dataset.cost_model
    days = cm.days_per_month
    premium = frozenset(premium_services)
    rest = [s.id for s in dataset.services if s.id not in premium]

    pre_total = bilateral_traffic_gbps(dataset, pre_state, isp, csp, "pre", None, None, days)
    pre_premium = bilateral_traffic_gbps(dataset, pre_state, isp, csp, "pre", premium, None, days)
    post_premium = bilateral_traffic_gbps(dataset, post_state, isp, csp, "post", premium, uplift, days)
    post_rest = bilateral_traffic_gbps(dataset, post_state, isp, csp, "pre", rest, None, days)

    isp_cost_before = transit_cost(pre_total, access.transit_unit_cost)
    csp_cost_before = transit_cost(pre_total, provider.transit_unit_cost)
    rest_isp = transit_cost(post_rest, access.transit_unit_cost)
    rest_csp = transit_cost(post_rest, provider.transit_unit_cost)
    if cdn is not None and cdn.enabled:
        link = ixp_monthly_cost(pre_premium, cm)
        isp_cost_after = link + cdn.unit_cost * pre_premium + rest_isp
        csp_cost_after = link + rest_csp
    else:
        link = ixp_monthly_cost(post_premium, cm)
        isp_cost_after = link + rest_isp
        csp_cost_after = link + rest_csp

    weight = None
    if attribution:
        importance = {s.id: s.importance_weight for s in dataset.services}
        weight = sum(importance[s] for s in premium)

    unit_before = access.profit_per_customer_usd_per_month
    unit_after = access.post_profit_per_customer_usd_per_month
    if weight is not None:
        unit_before = unit_before * weight
        unit_after = unit_after * weight
    population_before = isp_population(pre_state, isp)
    population_after = isp_population(post_state, isp)
    v_isp_before = population_before * unit_before - isp_cost_before
    v_isp_after = population_after * unit_after - isp_cost_after

    v_csp_before = (
        csp_revenue(dataset, pre_state, isp, csp, "pre", None, None, days) - csp_cost_before
    )
    v_csp_after = (
        csp_revenue(dataset, post_state, isp, csp, "post", premium, uplift, days) - csp_cost_after
    )

    outcome = nash_settlement(v_isp_before, v_isp_after, v_csp_before, v_csp_after)
    return PairEconomics(
        isp=isp,
        csp=csp,
        premium_services=tuple(s.id for s in dataset.services if s.id in premium),
        pre_total_gbps=pre_total,
        pre_premium_gbps=pre_premium,
        post_premium_gbps=post_premium,
        post_rest_gbps=post_rest,
        isp_cost_before=isp_cost_before,
        isp_cost_after=isp_cost_after,
        csp_cost_before=csp_cost_before,
        csp_cost_after=csp_cost_after,
        population_before=population_before,
        population_after=population_after,
        outcome=outcome,
    )
