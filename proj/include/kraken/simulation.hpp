#pragma once

#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include "kraken/ledger.hpp"
#include "kraken/multiplier.hpp"

namespace kraken {

struct SimConfig {
    MultiplierParams params;
    double seed_capital = 1.0;
    double leak = 0.0;  // fraction of each redeposit lost to cash holding, [0,1)
    std::optional<int> skip_insurance_every;  // leave every j-th loan uninsured
    double min_loan = 0.0;  // cascade stops once the next loan would fall below
    std::optional<double> synthetic_capital_cap;  // total cap, multiple of seed
    std::int64_t max_events = 1'000'000;

    void validate() const;
};

enum class HaltReason {
    DepthExhausted,  // ran all levels to their iteration limit
    MinLoanReached,  // a cascade stopped at the minimum loan size
    CapBound,        // the synthetic capital cap truncated DIN issuance
};

std::string_view to_string(HaltReason reason);

struct SimResult {
    BankState final_state;
    std::vector<LedgerEvent> events;
    double empirical_multiplier = 0.0;     // loans_outstanding / seed_capital
    std::vector<double> level_multipliers; // per-level loan totals / seed_capital
    HaltReason halt = HaltReason::DepthExhausted;
};

/// Runs the lending cascade level by level and returns the full event log.
///
/// Within a level, each iteration sets aside reserves, issues a loan, books
/// the DIN slice (premium, synthetic capital, fee), and redeposits the loan
/// net of leakage. Synthetic capital pools across the level and seeds the
/// next one; at the deepest level it is lent out directly instead, so the
/// empirical multiplier matches the analytic one on frictionless inputs.
/// Deterministic: equal configs yield bit-identical logs.
SimResult run_simulation(const SimConfig& config);

/// Empirical multiplier per nesting depth 1..params.depth, each point from
/// a fresh simulation truncated at that depth.
MultiplierCurve empirical_curve(const SimConfig& config);

}  // namespace kraken
