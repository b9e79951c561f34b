"""Premium-peering negotiation simulator and price calculator."""

from .market import (
    NONE_PROVIDER,
    AccessIsp,
    ContentProvider,
    CustomerType,
    MarketState,
    PeeringLedger,
    ServiceSpec,
    TypeSpace,
    build_type_space,
    customers_of,
    initialize_market,
    isp_population,
    preferred_customers_of,
    state_to_jsonable,
)
from .churn import (
    ChurnReport,
    PeeringEvent,
    establish_peering,
    phase1_churn,
    phase2_churn,
    simulate_sequence,
)
from .economics import (
    BargainOutcome,
    CdnConfig,
    CostModel,
    PairEconomics,
    bandwidth_price,
    bilateral_traffic_gbps,
    csp_profit,
    evaluate_pair,
    isp_profit,
    nash_settlement,
    peering_cost,
    transit_cost,
)
from .dataset import (
    ChurnSchedule,
    DatasetError,
    LoyaltyBounds,
    MarketDataset,
    UpliftScenario,
    builtin_us_dataset,
    churn_schedule_values,
    dataset_from_jsonable,
    dataset_to_jsonable,
    derive_ad_rates,
    derive_isp_unit_profit,
    load_dataset,
    serialize_dataset,
    validate_dataset,
)
from .scenario import (
    ScenarioResult,
    ScenarioSpec,
    SpecError,
    emit_report,
    pair_comparison,
    parse_scenario_spec,
    price_table,
    run,
    sweep,
    timing_experiment,
)

__version__ = "0.1.0"
