"""Shared fixtures: the hand-checkable toy market and random small markets."""

import random
from fractions import Fraction

import pytest

from peerbargain.dataset import ChurnSchedule, LoyaltyBounds, MarketDataset, UpliftScenario
from peerbargain.economics import CostModel
from peerbargain.market import AccessIsp, ContentProvider, ServiceSpec


def make_service(sid, h=0.0, g=0.0, importance=1.0, engagement=1.0, post_engagement=None,
                 traffic=1.0, post_traffic=None, ad_rate=0.0, subscription=0.0):
    return ServiceSpec(
        id=sid,
        isp_churn_prob=h,
        csp_churn_prob=g,
        engagement_min_per_day=engagement,
        post_engagement_min_per_day=engagement if post_engagement is None else post_engagement,
        traffic_mb_per_min=traffic,
        post_traffic_mb_per_min=traffic if post_traffic is None else post_traffic,
        ad_rate_usd_per_min=ad_rate,
        post_ad_rate_usd_per_min=ad_rate,
        subscription_usd_per_month=subscription,
        post_subscription_usd_per_month=subscription,
        importance_weight=importance,
    )


def make_dataset(dataset_id, services, isps, csps, cost_model=None):
    return MarketDataset(
        id=dataset_id,
        services=tuple(services),
        isps=tuple(isps),
        csps=tuple(csps),
        churn_schedule=ChurnSchedule(0.0, 0.0, 0.0, 0.0, {}),
        uplift_scenarios={"none": UpliftScenario({})},
        cost_model=cost_model or CostModel(),
        loyalty_bounds=LoyaltyBounds(0.0, 1.0, 0.0, 1.0),
    )


@pytest.fixture
def toy_dataset():
    """2 ISPs, 2 CSPs, 2 services, 300 customers, exact rational parameters.

    Loyalties make the churn probabilities exactly 1/3 (phase 1) and 1/2
    (phase 2), so every flow and count is an integer.
    """
    services = (
        make_service("search", h=1, g=1, importance=Fraction(3, 4)),
        make_service("video", h=1, g=1, importance=Fraction(1, 4)),
    )
    isps = (
        AccessIsp("isp1", 120, 1, 1, Fraction(2, 3), 0),
        AccessIsp("isp2", 180, 1, 1, Fraction(2, 3), 0),
    )
    csps = (
        ContentProvider("csp1", Fraction(1, 2), {"search": Fraction(2, 3), "video": Fraction(2, 5)}, 0),
        ContentProvider("csp2", Fraction(1, 2), {"search": Fraction(1, 3), "video": Fraction(3, 5)}, 0),
    )
    return make_dataset("toy", services, isps, csps)


#: ISP1's initial counts keyed by (preferred, (search provider, video provider)).
TOY_ISP1_INITIAL = {
    ("search", ("csp1", "csp1")): 24,
    ("search", ("csp1", "csp2")): 36,
    ("search", ("csp2", "csp1")): 12,
    ("search", ("csp2", "csp2")): 18,
    ("video", ("csp1", "csp1")): 8,
    ("video", ("csp1", "csp2")): 12,
    ("video", ("csp2", "csp1")): 4,
    ("video", ("csp2", "csp2")): 6,
}

#: Final counts after the ISP1-CSP1 peering event.
TOY_FINAL = {
    ("isp1", "search", ("csp1", "csp1")): 42,
    ("isp1", "search", ("csp1", "csp2")): 63,
    ("isp1", "search", ("csp2", "csp1")): 6,
    ("isp1", "search", ("csp2", "csp2")): 9,
    ("isp1", "video", ("csp1", "csp1")): 18,
    ("isp1", "video", ("csp1", "csp2")): 6,
    ("isp1", "video", ("csp2", "csp1")): 9,
    ("isp1", "video", ("csp2", "csp2")): 3,
    ("isp2", "search", ("csp1", "csp1")): 24,
    ("isp2", "search", ("csp1", "csp2")): 36,
    ("isp2", "search", ("csp2", "csp1")): 18,
    ("isp2", "search", ("csp2", "csp2")): 27,
    ("isp2", "video", ("csp1", "csp1")): 8,
    ("isp2", "video", ("csp1", "csp2")): 18,
    ("isp2", "video", ("csp2", "csp1")): 4,
    ("isp2", "video", ("csp2", "csp2")): 9,
}


def random_market(rng: random.Random, max_isps=3, max_csps=3, max_services=3):
    """A small random dataset: shares may leave a NONE remainder."""
    n_services = rng.randint(1, max_services)
    n_isps = rng.randint(1, max_isps)
    n_csps = rng.randint(1, max_csps)

    weights = [rng.uniform(0.1, 1.0) for _ in range(n_services)]
    total_weight = sum(weights)
    services = tuple(
        make_service(
            f"s{k}",
            h=rng.random(),
            g=rng.random(),
            importance=w / total_weight,
            engagement=rng.uniform(0.5, 20),
            traffic=rng.uniform(0.01, 10),
            ad_rate=rng.uniform(0, 0.01),
        )
        for k, w in enumerate(weights)
    )
    isps = tuple(
        AccessIsp(f"i{k}", rng.uniform(100, 10000), rng.uniform(1, 20), rng.uniform(1, 20),
                  rng.random(), rng.uniform(0, 2000))
        for k in range(n_isps)
    )
    csps = []
    for k in range(n_csps):
        shares = {}
        for svc in services:
            raw = rng.random() if rng.random() < 0.8 else 0.0
            shares[svc.id] = raw
        csps.append([f"c{k}", rng.random(), shares, rng.uniform(0, 2000)])
    # scale each service's shares so they sum to at most 1
    for svc in services:
        total = sum(c[2][svc.id] for c in csps)
        if total > 0:
            scale = rng.uniform(0.4, 1.0) / total
            for c in csps:
                c[2][svc.id] *= scale
    csps = tuple(
        ContentProvider(cid, loyalty, {k: v for k, v in shares.items() if v > 0}, transit)
        for cid, loyalty, shares, transit in csps
    )
    return make_dataset(f"random-{rng.random()}", services, isps, csps)


def random_events(rng: random.Random, dataset, count=None):
    from peerbargain.churn import PeeringEvent

    events = []
    for _ in range(count if count is not None else rng.randint(1, 4)):
        isp = rng.choice(dataset.isps).id
        csp = rng.choice(dataset.csps)
        offered = [s.id for s in dataset.services if csp.share(s.id) > 0]
        if offered and rng.random() < 0.5:
            services = frozenset(rng.sample(offered, rng.randint(1, len(offered))))
        else:
            services = frozenset()
        events.append(PeeringEvent(isp, csp.id, services))
    return events
