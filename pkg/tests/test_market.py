"""Type space enumeration, market initialization, and aggregates."""

import random
from fractions import Fraction

import pytest

from peerbargain.dataset import builtin_us_dataset
from peerbargain.market import (
    NONE_PROVIDER,
    AccessIsp,
    ContentProvider,
    CustomerType,
    build_type_space,
    customers_of,
    initialize_market,
    isp_population,
    preferred_customers_of,
    state_to_jsonable,
)

from conftest import TOY_ISP1_INITIAL, make_dataset, make_service, random_market


class TestBuildTypeSpace:
    def test_toy_eight_types_per_isp(self, toy_dataset):
        space = build_type_space(toy_dataset.services, toy_dataset.csps, toy_dataset.isps)
        assert space.types_per_isp() == 8
        assert len(space.types) == 16

    def test_single_service_single_provider_degenerate(self):
        ds = make_dataset(
            "tiny",
            [make_service("s0")],
            [AccessIsp("i0", 10, 1, 1, 0.5, 0)],
            [ContentProvider("c0", 0.5, {"s0": 1.0}, 0)],
        )
        space = build_type_space(ds.services, ds.csps, ds.isps)
        assert space.types_per_isp() == 1
        assert space.types[0] == CustomerType("i0", "s0", ("c0",))

    def test_us_dataset_count_matches_closed_form(self):
        ds = builtin_us_dataset()
        space = build_type_space(ds.services, ds.csps, ds.isps)
        # independent closed form: K * prod_k (positive-share providers + NONE?)
        product = 1
        for svc in ds.services:
            options = sum(1 for c in ds.csps if c.share(svc.id) > 0)
            if 1 - sum(c.share(svc.id) for c in ds.csps) > 1e-9:
                options += 1
            product *= options
        expected_per_isp = len(ds.services) * product
        assert space.types_per_isp() == expected_per_isp
        assert len(space.types) == expected_per_isp * len(ds.isps)

    def test_deterministic_ordering(self, toy_dataset):
        a = build_type_space(toy_dataset.services, toy_dataset.csps, toy_dataset.isps)
        b = build_type_space(toy_dataset.services, toy_dataset.csps, toy_dataset.isps)
        assert a.types == b.types
        assert a.provider_options == b.provider_options

    def test_duplicate_ids_rejected(self, toy_dataset):
        dup = toy_dataset.isps + (toy_dataset.isps[0],)
        with pytest.raises(ValueError, match="duplicate"):
            build_type_space(toy_dataset.services, toy_dataset.csps, dup)

    def test_none_bucket_only_when_shares_leave_remainder(self):
        ds = make_dataset(
            "partial",
            [make_service("s0")],
            [AccessIsp("i0", 10, 1, 1, 0.5, 0)],
            [ContentProvider("c0", 0.5, {"s0": 0.6}, 0)],
        )
        space = build_type_space(ds.services, ds.csps, ds.isps)
        assert space.provider_options == (("c0", NONE_PROVIDER),)


class TestInitializeMarket:
    def test_toy_counts_exact(self, toy_dataset):
        state = initialize_market(toy_dataset)
        for (preferred, providers), expected in TOY_ISP1_INITIAL.items():
            assert state.counts[CustomerType("isp1", preferred, providers)] == expected
            assert state.counts[CustomerType("isp2", preferred, providers)] == expected * Fraction(3, 2)

    def test_total_population_conserved(self, toy_dataset):
        state = initialize_market(toy_dataset)
        assert state.total_population() == 300

    def test_ledger_starts_empty(self, toy_dataset):
        state = initialize_market(toy_dataset)
        assert state.ledger.to_jsonable() == []

    def test_us_preferred_marginals(self):
        ds = builtin_us_dataset()
        state = initialize_market(ds)
        for svc in ds.services:
            total = sum(
                state.counts[t]
                for t in state.space.types
                if t.isp == "comcast" and t.preferred_service == svc.id
            )
            assert total == pytest.approx(19_025_000 * svc.importance_weight, rel=1e-9)

    def test_us_population_conserved(self):
        ds = builtin_us_dataset()
        state = initialize_market(ds)
        assert state.total_population() == pytest.approx(
            sum(i.subscribers for i in ds.isps), rel=1e-6
        )

    def test_independence_factorization(self):
        rng = random.Random(7)
        for _ in range(20):
            ds = random_market(rng)
            if len(ds.services) < 2:
                continue
            state = initialize_market(ds)
            space = state.space
            k, l = 0, len(space.services) - 1
            if k == l:
                continue
            for isp in ds.isps:
                for a in space.provider_options[k]:
                    for b in space.provider_options[l]:
                        joint = sum(
                            state.counts[t]
                            for t in space.types
                            if t.isp == isp.id and t.providers[k] == a and t.providers[l] == b
                        )
                        share_a = _option_share(ds, space.services[k], a)
                        share_b = _option_share(ds, space.services[l], b)
                        assert joint == pytest.approx(
                            isp.subscribers * share_a * share_b, rel=1e-9, abs=1e-9
                        )

    def test_counts_non_negative(self):
        rng = random.Random(11)
        for _ in range(20):
            state = initialize_market(random_market(rng))
            assert all(v >= 0 for v in state.counts.values())


def _option_share(ds, service_id, option):
    if option == NONE_PROVIDER:
        return 1 - sum(c.share(service_id) for c in ds.csps)
    return next(c for c in ds.csps if c.id == option).share(service_id)


class TestAggregates:
    def test_customers_of_toy(self, toy_dataset):
        state = initialize_market(toy_dataset)
        assert customers_of(state, "isp1", "csp1", "search") == 80

    def test_customers_of_zero_share_provider(self, toy_dataset):
        # csp1 never carries a service it has no share in before churn
        state = initialize_market(toy_dataset)
        ds = make_dataset(
            "zero",
            [make_service("s0"), make_service("s1", importance=0.0)],
            [AccessIsp("i0", 10, 1, 1, 0.5, 0)],
            [
                ContentProvider("c0", 0.5, {"s0": 1.0, "s1": 1.0}, 0),
                ContentProvider("c1", 0.5, {"s0": 0.0}, 0),
            ],
        )
        zero_state = initialize_market(ds)
        assert customers_of(zero_state, "i0", "c1", "s0") == 0

    def test_preferred_customers_subset(self, toy_dataset):
        state = initialize_market(toy_dataset)
        assert preferred_customers_of(state, "isp1", "csp1", "search") == 60
        assert preferred_customers_of(state, "isp1", "csp1", "video") == 12

    def test_isp_population(self, toy_dataset):
        state = initialize_market(toy_dataset)
        assert isp_population(state, "isp1") == 120
        assert isp_population(state, "isp2") == 180

    def test_empty_isp_population(self):
        ds = make_dataset(
            "empty",
            [make_service("s0")],
            [AccessIsp("i0", 0, 1, 1, 0.5, 0)],
            [ContentProvider("c0", 0.5, {"s0": 1.0}, 0)],
        )
        assert isp_population(initialize_market(ds), "i0") == 0

    def test_unknown_ids_raise(self, toy_dataset):
        state = initialize_market(toy_dataset)
        with pytest.raises(KeyError):
            customers_of(state, "nope", "csp1", "search")
        with pytest.raises(KeyError):
            customers_of(state, "isp1", "csp1", "nope")
        with pytest.raises(KeyError):
            isp_population(state, "nope")


class TestSerialization:
    def test_snapshot_shape_and_order(self, toy_dataset):
        state = initialize_market(toy_dataset)
        snapshot = state_to_jsonable(state)
        assert len(snapshot["counts"]) == 16
        first = snapshot["counts"][0]
        assert first == {
            "isp": "isp1",
            "preferred": "search",
            "providers": {"search": "csp1", "video": "csp1"},
            "n": 24.0,
        }
        assert snapshot["ledger"] == []
