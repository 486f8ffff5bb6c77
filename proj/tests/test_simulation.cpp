#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <map>
#include <random>

#include "kraken/simulation.hpp"
#include "support.hpp"

using namespace kraken;
using testsupport::rel_err;
using testsupport::uniform;
using testsupport::uniform_int;

namespace {

SimConfig table1_config(int depth) {
    SimConfig config;
    config.params = {0.05, 0.05, 1.0, 0.3, 100, depth};
    return config;
}

std::map<EventKind, int> kind_counts(const std::vector<LedgerEvent>& events) {
    std::map<EventKind, int> counts;
    for (const auto& e : events) counts[e.kind]++;
    return counts;
}

}  // namespace

TEST_CASE("config validation") {
    SimConfig config;
    CHECK_NOTHROW(config.validate());

    SimConfig bad = config;
    bad.seed_capital = 0.0;
    CHECK_THROWS_AS(bad.validate(), std::domain_error);
    bad = config;
    bad.leak = 1.0;
    CHECK_THROWS_AS(bad.validate(), std::domain_error);
    bad = config;
    bad.leak = -0.1;
    CHECK_THROWS_AS(bad.validate(), std::domain_error);
    bad = config;
    bad.skip_insurance_every = 0;
    CHECK_THROWS_AS(bad.validate(), std::domain_error);
    bad = config;
    bad.min_loan = -1.0;
    CHECK_THROWS_AS(bad.validate(), std::domain_error);
    bad = config;
    bad.synthetic_capital_cap = -0.5;
    CHECK_THROWS_AS(bad.validate(), std::domain_error);
    bad = config;
    bad.max_events = 0;
    CHECK_THROWS_AS(bad.validate(), std::domain_error);
    bad = config;
    bad.params.reserve = 0.0;
    CHECK_THROWS_AS(bad.validate(), std::domain_error);
}

TEST_CASE("frictionless run reproduces the analytic multiplier") {
    const SimConfig config = table1_config(1);
    const SimResult result = run_simulation(config);
    const double analytic = kraken_eval(config.params).points.back().m;
    CHECK(rel_err(result.empirical_multiplier, analytic) < 1e-9);
    CHECK(std::abs(result.empirical_multiplier - 24.0) <= 1.0);
    CHECK(result.halt == HaltReason::DepthExhausted);

    SUBCASE("per-level contributions sum to the multiplier") {
        const SimResult deep = run_simulation(table1_config(4));
        double total = 0.0;
        for (double m : deep.level_multipliers) total += m;
        CHECK(rel_err(total, deep.empirical_multiplier) < 1e-9);
        REQUIRE(deep.level_multipliers.size() == 4);
        for (double m : deep.level_multipliers) CHECK(m > 0.0);
    }

    SUBCASE("empirical multiplier scales with seed capital") {
        SimConfig scaled = table1_config(2);
        scaled.seed_capital = 250.0;
        const double unit = run_simulation(table1_config(2)).empirical_multiplier;
        CHECK(rel_err(run_simulation(scaled).empirical_multiplier, unit) < 1e-12);
    }
}

TEST_CASE("uninsured lending matches the classic series") {
    SimConfig config = table1_config(3);
    config.params.tranche = 0.0;
    const SimResult result = run_simulation(config);
    CHECK(rel_err(result.empirical_multiplier,
                  classic_series(config.params.reserve,
                                 config.params.iterations)) < 1e-12);

    const auto counts = kind_counts(result.events);
    CHECK(counts.count(EventKind::PremiumPaid) == 0);
    CHECK(counts.count(EventKind::SyntheticCapitalBooked) == 0);
    CHECK(counts.count(EventKind::FeeCollected) == 0);
    // one lending cycle per iteration, nothing to seed deeper levels
    CHECK(counts.at(EventKind::LoanIssued) == config.params.iterations);
}

TEST_CASE("random frictionless configs agree with kraken_eval") {
    std::mt19937_64 rng(201);
    for (int trial = 0; trial < 50; ++trial) {
        SimConfig config;
        config.params.reserve = uniform(rng, 0.05, 0.5);
        config.params.insurance = uniform(rng, 0.0, 0.1);
        config.params.origination = uniform(rng, 1.0, 1.1);
        config.params.tranche = uniform(rng, 0.0, 1.0);
        config.params.iterations = uniform_int(rng, 1, 50);
        config.params.depth = uniform_int(rng, 1, 5);
        const double analytic = kraken_eval(config.params).points.back().m;
        const SimResult result = run_simulation(config);
        CHECK(rel_err(result.empirical_multiplier, analytic) < 1e-9);
    }
}

TEST_CASE("runs are deterministic and replayable") {
    SimConfig config = table1_config(3);
    config.leak = 0.07;
    config.skip_insurance_every = 3;
    const SimResult a = run_simulation(config);
    const SimResult b = run_simulation(config);
    REQUIRE(a.events.size() == b.events.size());
    for (std::size_t i = 0; i < a.events.size(); ++i) {
        CHECK(a.events[i] == b.events[i]);
    }
    CHECK(a.final_state == b.final_state);
    CHECK(replay_ledger(a.events) == a.final_state);
}

TEST_CASE("event stream satisfies the accounting identities") {
    SimConfig config;
    config.params = {0.08, 0.04, 1.06, 0.45, 25, 3};
    const SimResult result = run_simulation(config);
    const auto& p = config.params;

    double last_loan = 0.0;
    bool prev_was_synthetic = false;
    double prev_synthetic = 0.0;
    for (const auto& e : result.events) {
        if (e.kind == EventKind::ReserveSetAside) {
            // the paired loan follows immediately; both split one deposit
            continue;
        }
        if (e.kind == EventKind::LoanIssued) {
            if (prev_was_synthetic) {
                // deepest level lends the booked capital out whole
                CHECK(e.amount == prev_synthetic);
            }
            last_loan = e.amount;
        }
        if (e.kind == EventKind::SyntheticCapitalBooked) {
            const double slice = p.tranche * last_loan;
            CHECK(e.amount == (p.origination - p.insurance) * slice);
            prev_synthetic = e.amount;
        }
        prev_was_synthetic = e.kind == EventKind::SyntheticCapitalBooked;
    }

    // reserve + loan reconstruct each deposit split to within rounding
    for (std::size_t i = 0; i + 1 < result.events.size(); ++i) {
        const auto& reserve_event = result.events[i];
        if (reserve_event.kind != EventKind::ReserveSetAside) continue;
        const auto& loan_event = result.events[i + 1];
        REQUIRE(loan_event.kind == EventKind::LoanIssued);
        const double deposit = reserve_event.amount + loan_event.amount;
        CHECK(std::abs(reserve_event.amount - p.reserve * deposit) <=
              1e-9 * deposit);
        CHECK(std::abs(loan_event.amount - (1.0 - p.reserve) * deposit) <=
              1e-9 * deposit);
    }

    SUBCASE("premiums and fees follow the insured slice") {
        const BankState& s = result.final_state;
        const double slice_total = s.insured_notional;
        CHECK(rel_err(s.premiums_paid, p.insurance * slice_total) < 1e-9);
        CHECK(rel_err(s.fees_collected, (p.origination - 1.0) * slice_total) <
              1e-9);
        CHECK(rel_err(s.synthetic_capital,
                      (p.origination - p.insurance) * slice_total) < 1e-9);
    }
}

TEST_CASE("leak damps the cascade") {
    // with full insurance off, leakage l turns the deposit chain into a
    // geometric series in q = (1-R)(1-l)
    SimConfig config;
    config.params = {0.05, 0.0, 1.0, 0.0, 60, 1};
    config.leak = 0.5;
    const SimResult result = run_simulation(config);
    const double q = (1.0 - 0.05) * (1.0 - 0.5);
    const double expected = (1.0 - 0.05) * (1.0 - std::pow(q, 60)) / (1.0 - q);
    CHECK(rel_err(result.empirical_multiplier, expected) < 1e-12);

    SUBCASE("multiplier falls as leakage rises") {
        SimConfig base = table1_config(3);
        double prev = run_simulation(base).empirical_multiplier;
        for (double leak : {0.1, 0.3, 0.6, 0.9}) {
            SimConfig leaky = base;
            leaky.leak = leak;
            const double m = run_simulation(leaky).empirical_multiplier;
            CHECK(m < prev);
            prev = m;
        }
    }
}

TEST_CASE("skipping insurance weakens the coupling") {
    SimConfig base = table1_config(3);
    const double full = run_simulation(base).empirical_multiplier;

    SimConfig skip2 = base;
    skip2.skip_insurance_every = 2;
    const double skipped = run_simulation(skip2).empirical_multiplier;
    CHECK(skipped < full);

    SimConfig skip1 = base;
    skip1.skip_insurance_every = 1;
    const SimResult none = run_simulation(skip1);
    CHECK(rel_err(none.empirical_multiplier,
                  classic_series(0.05, base.params.iterations)) < 1e-12);
    CHECK(kind_counts(none.events).count(EventKind::SyntheticCapitalBooked) == 0);

    SUBCASE("skipped iterations carry no insurance events") {
        for (const auto& e : run_simulation(skip2).events) {
            if (e.kind == EventKind::PremiumPaid ||
                e.kind == EventKind::SyntheticCapitalBooked ||
                e.kind == EventKind::FeeCollected) {
                CHECK(e.iteration % 2 == 1);
            }
        }
    }
}

TEST_CASE("min_loan truncates the cascade") {
    SimConfig config = table1_config(2);
    config.min_loan = 0.01;
    const SimResult result = run_simulation(config);
    CHECK(result.halt == HaltReason::MinLoanReached);
    CHECK(result.empirical_multiplier <
          run_simulation(table1_config(2)).empirical_multiplier);
    // deposit-funded loans respect the floor; terminal loans of booked
    // capital are not deposit splits and are exempt
    bool prev_was_synthetic = false;
    for (const auto& e : result.events) {
        if (e.kind == EventKind::LoanIssued && !prev_was_synthetic) {
            CHECK(e.amount >= config.min_loan);
        }
        prev_was_synthetic = e.kind == EventKind::SyntheticCapitalBooked;
    }
}

TEST_CASE("synthetic capital cap binds DIN issuance") {
    SimConfig config = table1_config(3);
    config.synthetic_capital_cap = 0.5;
    const SimResult result = run_simulation(config);
    CHECK(result.halt == HaltReason::CapBound);
    CHECK(result.final_state.synthetic_capital <= 0.5 + 1e-12);
    CHECK(result.empirical_multiplier <
          run_simulation(table1_config(3)).empirical_multiplier);

    SUBCASE("a loose cap never triggers") {
        SimConfig loose = table1_config(2);
        loose.synthetic_capital_cap = 1e6;
        const SimResult free_run = run_simulation(loose);
        CHECK(free_run.halt == HaltReason::DepthExhausted);
        CHECK(rel_err(free_run.empirical_multiplier,
                      run_simulation(table1_config(2)).empirical_multiplier) <
              1e-12);
    }
}

TEST_CASE("event budget surfaces as BudgetError") {
    SimConfig config = table1_config(2);
    config.max_events = 10;
    CHECK_THROWS_AS(run_simulation(config), BudgetError);
}

TEST_CASE("empirical_curve tracks the analytic curve") {
    SimConfig config;
    config.params = {0.025, 0.05, 1.0, 0.3, 100, 3};
    const MultiplierCurve curve = empirical_curve(config);
    const MultiplierCurve analytic = kraken_eval(config.params);
    REQUIRE(curve.points.size() == 3);
    for (std::size_t i = 0; i < curve.points.size(); ++i) {
        CHECK(curve.points[i].level == analytic.points[i].level);
        CHECK(rel_err(curve.points[i].m, analytic.points[i].m) < 1e-9);
    }
    // second reference table, depths 1..3, published values
    CHECK(std::abs(curve.points[0].m - 46.0) <= 1.0);
    CHECK(std::abs(curve.points[1].m - 508.0) <= 1.0);
    CHECK(rel_err(curve.points[2].m, 5232.0) < 1e-3);

    SimConfig fee_config;
    fee_config.params = {0.05, 0.05, 1.05, 0.3, 100, 2};
    const MultiplierCurve fee_curve = empirical_curve(fee_config);
    CHECK(std::abs(fee_curve.points[0].m - 24.5538) < 1e-3);
    CHECK(std::abs(fee_curve.points[1].m - 158.0153) < 1e-3);
}
