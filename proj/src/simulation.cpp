#include "kraken/simulation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace kraken {

namespace {

void check(bool ok, const char* what) {
    if (!ok) throw std::domain_error(what);
}

}  // namespace

void SimConfig::validate() const {
    params.validate();
    check(std::isfinite(seed_capital) && seed_capital > 0.0,
          "seed capital must be positive");
    check(std::isfinite(leak) && leak >= 0.0 && leak < 1.0,
          "leak fraction must lie in [0, 1)");
    if (skip_insurance_every) {
        check(*skip_insurance_every >= 1, "skip interval must be at least 1");
    }
    check(std::isfinite(min_loan) && min_loan >= 0.0,
          "minimum loan size must be non-negative");
    if (synthetic_capital_cap) {
        check(std::isfinite(*synthetic_capital_cap) && *synthetic_capital_cap >= 0.0,
              "synthetic capital cap must be non-negative");
    }
    check(max_events >= 1, "event budget must be at least 1");
}

std::string_view to_string(HaltReason reason) {
    switch (reason) {
        case HaltReason::DepthExhausted: return "depth_exhausted";
        case HaltReason::MinLoanReached: return "min_loan_reached";
        case HaltReason::CapBound: return "cap_bound";
    }
    return "unknown";
}

SimResult run_simulation(const SimConfig& config) {
    config.validate();
    const MultiplierParams& p = config.params;

    SimResult result;
    result.level_multipliers.assign(static_cast<std::size_t>(p.depth), 0.0);
    BankState& state = result.final_state;
    std::int64_t seq = 0;
    bool min_loan_hit = false;
    bool cap_hit = false;

    auto emit = [&](EventKind kind, double amount, int level, int iteration) {
        if (amount == 0.0) return;
        if (static_cast<std::int64_t>(result.events.size()) >= config.max_events) {
            throw BudgetError("event budget of " + std::to_string(config.max_events) +
                              " exhausted; raise max_events or shrink the cascade");
        }
        const LedgerEvent event{++seq, kind, amount, level, iteration};
        apply_event(state, event);
        result.events.push_back(event);
    };

    // leak first, then redeposit, so the two amounts sum to the loan exactly
    auto redeposit = [&](double amount, int level, int iteration) {
        const double leaked = config.leak * amount;
        emit(EventKind::Leak, leaked, level, iteration);
        const double kept = amount - leaked;
        emit(EventKind::Redeposit, kept, level, iteration);
        return kept;
    };

    double cap_remaining = std::numeric_limits<double>::infinity();
    if (config.synthetic_capital_cap) {
        cap_remaining = *config.synthetic_capital_cap * config.seed_capital;
    }

    emit(EventKind::SeedDeposit, config.seed_capital, 1, 0);

    double base = config.seed_capital;
    for (int level = 1; level <= p.depth && base > 0.0; ++level) {
        double pooled_synthetic = 0.0;
        double lendable = base;
        for (int i = 1; i <= p.iterations; ++i) {
            const double loan = (1.0 - p.reserve) * lendable;
            if (loan <= 0.0 || loan < config.min_loan) {
                if (loan > 0.0) min_loan_hit = true;
                break;
            }
            emit(EventKind::ReserveSetAside, p.reserve * lendable, level, i);
            emit(EventKind::LoanIssued, loan, level, i);
            result.level_multipliers[static_cast<std::size_t>(level - 1)] += loan;

            const bool skipped = config.skip_insurance_every &&
                                 i % *config.skip_insurance_every == 0;
            if (p.tranche > 0.0 && !skipped) {
                double slice = p.tranche * loan;
                if (config.synthetic_capital_cap && p.origination > p.insurance) {
                    const double bookable =
                        cap_remaining / (p.origination - p.insurance);
                    if (slice > bookable) {
                        slice = std::max(bookable, 0.0);
                        cap_hit = true;
                    }
                }
                if (slice > 0.0) {
                    const double synthetic =
                        (p.origination - p.insurance) * slice;
                    emit(EventKind::PremiumPaid, p.insurance * slice, level, i);
                    emit(EventKind::SyntheticCapitalBooked, synthetic, level, i);
                    emit(EventKind::FeeCollected, (p.origination - 1.0) * slice,
                         level, i);
                    cap_remaining -= synthetic;
                    if (synthetic > 0.0) {
                        if (level < p.depth) {
                            pooled_synthetic += synthetic;
                        } else {
                            // deepest level: the DIN capital is lent out whole
                            emit(EventKind::LoanIssued, synthetic, level, i);
                            result.level_multipliers[static_cast<std::size_t>(
                                level - 1)] += synthetic;
                            redeposit(synthetic, level, i);
                        }
                    }
                }
            }
            lendable = redeposit(loan, level, i);
        }
        base = pooled_synthetic;
    }

    result.empirical_multiplier = state.loans_outstanding / config.seed_capital;
    for (double& m : result.level_multipliers) m /= config.seed_capital;
    result.halt = cap_hit ? HaltReason::CapBound
                : min_loan_hit ? HaltReason::MinLoanReached
                               : HaltReason::DepthExhausted;
    return result;
}

MultiplierCurve empirical_curve(const SimConfig& config) {
    config.validate();
    MultiplierCurve curve;
    curve.points.reserve(static_cast<std::size_t>(config.params.depth));
    for (int depth = 1; depth <= config.params.depth; ++depth) {
        SimConfig truncated = config;
        truncated.params.depth = depth;
        curve.points.push_back({depth, run_simulation(truncated).empirical_multiplier});
    }
    return curve;
}

}  // namespace kraken
