"""Two-phase customer churn triggered by premium-peering events.

When ISP j and CSP x turn on premium delivery for a set of services, customers
react in two phases:

* Phase 1, across ISPs: customers of other ISPs whose most-valued service is
  now premium at j (and who already use x for it) switch access provider with
  probability (1 - beta(i)) * h(s).
* Phase 2, across CSPs: customers inside j whose most-valued service is
  covered but who use a competitor for it switch to x with probability
  (1 - theta(T_s)) * g(s).

Each phase is two-pass atomic: every delta is computed from the phase's
starting counts, then all deltas are applied at once.  Phase 2 runs on the
post-phase-1 state, so phase-1 arrivals (already at T_s = x) are untouched.
Customers attached to the NONE bucket never churn in either phase.

Peering removal is unsupported by design: the model defines no reverse
transition, and :class:`~peerbargain.market.PeeringLedger` only grows.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, List, Sequence, Tuple

from .market import NONE_PROVIDER, CustomerType, MarketState


@dataclass(frozen=True)
class PeeringEvent:
    """A premium peering being established for a set of services.

    An empty ``services`` set means every service the CSP offers (positive
    share).
    """

    isp: str
    csp: str
    services: frozenset = frozenset()


@dataclass(frozen=True)
class Phase1Flow:
    from_isp: str
    to_isp: str
    customer_type: CustomerType      # the (s, T) cell, keyed at the source ISP
    amount: float


@dataclass(frozen=True)
class Phase2Flow:
    isp: str
    from_provider: str
    to_provider: str
    service: str
    customer_type: CustomerType      # the source cell
    amount: float


@dataclass(frozen=True)
class ChurnReport:
    event: PeeringEvent
    services: Tuple[str, ...]        # services newly added by this event
    phase1_flows: Tuple[Phase1Flow, ...]
    phase2_flows: Tuple[Phase2Flow, ...]
    pre_state: MarketState
    post_state: MarketState

    def to_jsonable(self) -> Dict:
        return {
            "isp": self.event.isp,
            "csp": self.event.csp,
            "services": sorted(self.services),
            "phase1_flows": [
                {
                    "from_isp": f.from_isp,
                    "to_isp": f.to_isp,
                    "preferred": f.customer_type.preferred_service,
                    "providers": dict(
                        zip(self.pre_state.space.services, f.customer_type.providers)
                    ),
                    "amount": float(f.amount),
                }
                for f in self.phase1_flows
            ],
            "phase2_flows": [
                {
                    "isp": f.isp,
                    "from_provider": f.from_provider,
                    "to_provider": f.to_provider,
                    "service": f.service,
                    "preferred": f.customer_type.preferred_service,
                    "providers": dict(
                        zip(self.pre_state.space.services, f.customer_type.providers)
                    ),
                    "amount": float(f.amount),
                }
                for f in self.phase2_flows
            ],
        }


def _require_ids(dataset, isp: str, csp: str):
    isps = {i.id: i for i in dataset.isps}
    csps = {c.id: c for c in dataset.csps}
    if isp not in isps:
        raise KeyError(f"unknown isp: {isp!r}")
    if csp not in csps:
        raise KeyError(f"unknown csp: {csp!r}")
    return isps[isp], csps[csp]


def _check_services(dataset, csp, services):
    offered = {s.id for s in dataset.services if csp.share(s.id) > 0}
    bad = set(services) - offered
    if bad:
        raise ValueError(
            f"services not offered by {csp.id!r}: {sorted(bad)}"
        )


def _apply_deltas(state: MarketState, deltas: Dict[CustomerType, object]) -> MarketState:
    counts = dict(state.counts)
    for t, d in deltas.items():
        counts[t] = counts[t] + d
        if counts[t] < 0:
            raise AssertionError(f"negative count for {t}: {counts[t]}")
    return state.replace_counts(counts)


def phase1_churn(dataset, state: MarketState, isp: str, csp: str, services):
    """Churn across ISPs toward the newly peered ISP.

    Moves N(i,(s,T)) * (1 - beta(i)) * h(s) from every other ISP i to the
    peering ISP, for types with s in the peered services and T_s = csp,
    unless (i, csp) already had premium delivery of s (those customers see
    no quality change and stay).
    """
    target, provider = _require_ids(dataset, isp, csp)
    _check_services(dataset, provider, services)
    services = frozenset(services)
    space = state.space
    loyalty = {i.id: i.loyalty for i in dataset.isps}
    h = {s.id: s.isp_churn_prob for s in dataset.services}

    flows: List[Phase1Flow] = []
    deltas: Dict[CustomerType, object] = {}
    for t in space.types:                      # stable order, deltas from pre-phase counts
        if t.isp == isp or t.preferred_service not in services:
            continue
        pos = space.service_position(t.preferred_service)
        if t.providers[pos] != csp:
            continue
        if t.preferred_service in state.ledger.services_at_premium(t.isp, csp):
            continue
        # evaluated left to right so reports are bit-for-bit reproducible
        amount = state.counts[t] * (1 - loyalty[t.isp]) * h[t.preferred_service]
        if amount <= 0:
            continue
        dest = CustomerType(isp, t.preferred_service, t.providers)
        deltas[t] = deltas.get(t, 0) - amount
        deltas[dest] = deltas.get(dest, 0) + amount
        flows.append(Phase1Flow(t.isp, isp, t, amount))
    return _apply_deltas(state, deltas), tuple(flows)


def phase2_churn(dataset, state: MarketState, isp: str, csp: str, services):
    """Churn across CSPs inside the newly peered ISP.

    Moves N(i,(s,T)) * (1 - theta(T_s)) * g(s) onto the provider vector with
    T_s = csp, for types inside the ISP whose most-valued service s is peered
    and currently served by a competitor, unless that competitor already has
    premium delivery of s with the ISP.  NONE customers never move.
    """
    target, provider = _require_ids(dataset, isp, csp)
    _check_services(dataset, provider, services)
    services = frozenset(services)
    space = state.space
    theta = {c.id: c.loyalty for c in dataset.csps}
    g = {s.id: s.csp_churn_prob for s in dataset.services}

    flows: List[Phase2Flow] = []
    deltas: Dict[CustomerType, object] = {}
    for t in space.types:
        if t.isp != isp or t.preferred_service not in services:
            continue
        pos = space.service_position(t.preferred_service)
        current = t.providers[pos]
        if current == csp or current == NONE_PROVIDER:
            continue
        if t.preferred_service in state.ledger.services_at_premium(isp, current):
            continue
        amount = state.counts[t] * (1 - theta[current]) * g[t.preferred_service]
        if amount <= 0:
            continue
        vector = list(t.providers)
        vector[pos] = csp
        dest = CustomerType(isp, t.preferred_service, tuple(vector))
        deltas[t] = deltas.get(t, 0) - amount
        deltas[dest] = deltas.get(dest, 0) + amount
        flows.append(Phase2Flow(isp, current, csp, t.preferred_service, t, amount))
    return _apply_deltas(state, deltas), tuple(flows)


def effective_services(dataset, event: PeeringEvent):
    """The event's explicit services, or everything the CSP offers."""
    _, provider = _require_ids(dataset, event.isp, event.csp)
    if event.services:
        _check_services(dataset, provider, event.services)
        return frozenset(event.services)
    return frozenset(s.id for s in dataset.services if provider.share(s.id) > 0)


def establish_peering(dataset, state: MarketState, event: PeeringEvent):
    """Apply one peering event: phase 1, then phase 2, then grow the ledger.

    Only services not already in the pair's ledger entry trigger churn;
    re-applying an identical event is a no-op with an empty report.
    """
    target, _ = _require_ids(dataset, event.isp, event.csp)
    if not target.can_peer:
        raise ValueError(f"isp {event.isp!r} does not enter peering agreements")
    requested = effective_services(dataset, event)
    new_services = requested - state.ledger.services_at_premium(event.isp, event.csp)
    if not new_services:
        report = ChurnReport(event, (), (), (), state, state)
        return state, report

    ordered = tuple(s for s in state.space.services if s in new_services)
    after1, flows1 = phase1_churn(dataset, state, event.isp, event.csp, new_services)
    after2, flows2 = phase2_churn(dataset, after1, event.isp, event.csp, new_services)
    ledger = state.ledger.with_services(event.isp, event.csp, new_services)
    final = after2.replace_counts(after2.counts, ledger)
    report = ChurnReport(event, ordered, flows1, flows2, state, final)
    return final, report


def simulate_sequence(dataset, state: MarketState, events: Sequence[PeeringEvent]):
    """Apply events strictly in order; the market re-equilibrates after each."""
    reports = []
    for event in events:
        state, report = establish_peering(dataset, state, event)
        reports.append(report)
    return state, reports
