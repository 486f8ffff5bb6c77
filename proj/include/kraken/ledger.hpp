#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace kraken {

/// Thrown on malformed or inconsistent event logs: sequence gaps, negative
/// or non-finite amounts, unknown kinds, or a balance driven below zero.
struct IntegrityError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Accounting convention, per insured slice s = T * loan:
//   PremiumPaid             I * s
//   SyntheticCapitalBooked  (O - I) * s
//   FeeCollected            (O - 1) * s
// so insured_notional, folded as premium + synthetic - fee, recovers s.
// The three are emitted in exactly that order to keep the fold non-negative.
// Leak records money leaving the banking system entirely; it touches no balance.
enum class EventKind {
    SeedDeposit,
    ReserveSetAside,
    LoanIssued,
    Redeposit,
    Leak,
    PremiumPaid,
    FeeCollected,
    SyntheticCapitalBooked,
};

std::string_view to_string(EventKind kind);
EventKind event_kind_from_string(std::string_view name);  // throws IntegrityError

struct LedgerEvent {
    std::int64_t seq = 0;  // 1-based, gapless
    EventKind kind = EventKind::SeedDeposit;
    double amount = 0.0;   // strictly positive; zero-amount events are never emitted
    int level = 0;         // nesting level, 1-based; the seed carries level 1
    int iteration = 0;     // lending cycle within the level; the seed carries 0

    bool operator==(const LedgerEvent&) const = default;
};

/// Aggregate balances reached by folding an event log.
struct BankState {
    double reserves = 0.0;
    double deposits = 0.0;
    double loans_outstanding = 0.0;
    double synthetic_capital = 0.0;
    double insured_notional = 0.0;
    double premiums_paid = 0.0;
    double fees_collected = 0.0;

    bool operator==(const BankState&) const = default;
};

/// Folds one event into the state. Validates the amount but not sequencing.
void apply_event(BankState& state, const LedgerEvent& event);

/// Folds a whole log, enforcing gapless 1-based sequence numbers, positive
/// levels, non-negative iterations, and non-negative running balances.
/// Replaying a simulation's log reproduces its final state bit for bit.
BankState replay_ledger(std::span<const LedgerEvent> events);

// Event-log serialization. CSV columns: seq,kind,amount,level,iteration.
// Amounts are written in shortest fixed notation that round-trips exactly.
std::string event_log_to_csv(std::span<const LedgerEvent> events);
std::string event_log_to_json(std::span<const LedgerEvent> events);
std::vector<LedgerEvent> event_log_from_csv(std::string_view text);

}  // namespace kraken
