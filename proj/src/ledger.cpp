#include "kraken/ledger.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <sstream>

#include <json.hpp>

namespace kraken {

namespace {

constexpr std::array<std::string_view, 8> kKindNames = {
    "SeedDeposit",   "ReserveSetAside", "LoanIssued",   "Redeposit",
    "Leak",          "PremiumPaid",     "FeeCollected", "SyntheticCapitalBooked",
};

[[noreturn]] void fail(const std::string& what) { throw IntegrityError(what); }

std::string format_amount(double value) {
    std::array<char, 64> buf;
    auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value,
                                   std::chars_format::fixed);
    if (ec != std::errc{}) fail("amount not representable in fixed notation");
    return std::string(buf.data(), ptr);
}

}  // namespace

std::string_view to_string(EventKind kind) {
    const auto idx = static_cast<std::size_t>(kind);
    if (idx >= kKindNames.size()) fail("event kind out of range");
    return kKindNames[idx];
}

EventKind event_kind_from_string(std::string_view name) {
    for (std::size_t i = 0; i < kKindNames.size(); ++i) {
        if (kKindNames[i] == name) return static_cast<EventKind>(i);
    }
    fail("unknown event kind '" + std::string(name) + "'");
}

void apply_event(BankState& state, const LedgerEvent& event) {
    if (!std::isfinite(event.amount) || event.amount < 0.0) {
        fail("event " + std::to_string(event.seq) +
             " carries a negative or non-finite amount");
    }
    switch (event.kind) {
        case EventKind::SeedDeposit:
        case EventKind::Redeposit:
            state.deposits += event.amount;
            break;
        case EventKind::ReserveSetAside:
            state.reserves += event.amount;
            break;
        case EventKind::LoanIssued:
            state.loans_outstanding += event.amount;
            break;
        case EventKind::Leak:
            break;
        case EventKind::PremiumPaid:
            state.premiums_paid += event.amount;
            state.insured_notional += event.amount;
            break;
        case EventKind::SyntheticCapitalBooked:
            state.synthetic_capital += event.amount;
            state.insured_notional += event.amount;
            break;
        case EventKind::FeeCollected:
            state.fees_collected += event.amount;
            state.insured_notional -= event.amount;
            break;
        default:
            fail("event " + std::to_string(event.seq) + " has an unknown kind");
    }
}

BankState replay_ledger(std::span<const LedgerEvent> events) {
    BankState state;
    std::int64_t expected_seq = 1;
    for (const auto& event : events) {
        if (event.seq != expected_seq) {
            fail("sequence gap: expected " + std::to_string(expected_seq) +
                 ", found " + std::to_string(event.seq));
        }
        ++expected_seq;
        if (event.level < 1) {
            fail("event " + std::to_string(event.seq) + " carries level " +
                 std::to_string(event.level) + "; levels are 1-based");
        }
        if (event.iteration < 0) {
            fail("event " + std::to_string(event.seq) +
                 " carries a negative iteration");
        }
        apply_event(state, event);
        if (state.insured_notional < 0.0) {
            fail("insured notional driven below zero at event " +
                 std::to_string(event.seq));
        }
    }
    return state;
}

std::string event_log_to_csv(std::span<const LedgerEvent> events) {
    std::string out = "seq,kind,amount,level,iteration\n";
    for (const auto& e : events) {
        out += std::to_string(e.seq);
        out += ',';
        out += to_string(e.kind);
        out += ',';
        out += format_amount(e.amount);
        out += ',';
        out += std::to_string(e.level);
        out += ',';
        out += std::to_string(e.iteration);
        out += '\n';
    }
    return out;
}

std::string event_log_to_json(std::span<const LedgerEvent> events) {
    nlohmann::ordered_json log = nlohmann::ordered_json::array();
    for (const auto& e : events) {
        log.push_back({{"seq", e.seq},
                       {"kind", to_string(e.kind)},
                       {"amount", e.amount},
                       {"level", e.level},
                       {"iteration", e.iteration}});
    }
    return log.dump(2) + "\n";
}

namespace {

std::vector<std::string_view> split_fields(std::string_view line) {
    std::vector<std::string_view> fields;
    std::size_t start = 0;
    while (true) {
        const std::size_t comma = line.find(',', start);
        if (comma == std::string_view::npos) {
            fields.push_back(line.substr(start));
            return fields;
        }
        fields.push_back(line.substr(start, comma - start));
        start = comma + 1;
    }
}

template <typename T>
T parse_number(std::string_view field, const char* what) {
    T value{};
    auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
    if (ec != std::errc{} || ptr != field.data() + field.size()) {
        fail(std::string("malformed ") + what + " field '" + std::string(field) + "'");
    }
    return value;
}

}  // namespace

std::vector<LedgerEvent> event_log_from_csv(std::string_view text) {
    std::vector<LedgerEvent> events;
    std::size_t pos = 0;
    bool header_seen = false;
    while (pos < text.size()) {
        std::size_t eol = text.find('\n', pos);
        if (eol == std::string_view::npos) eol = text.size();
        std::string_view line = text.substr(pos, eol - pos);
        pos = eol + 1;
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        if (line.empty()) continue;
        if (!header_seen) {
            if (line != "seq,kind,amount,level,iteration") {
                fail("unexpected event log header '" + std::string(line) + "'");
            }
            header_seen = true;
            continue;
        }
        const auto fields = split_fields(line);
        if (fields.size() != 5) {
            fail("event row needs 5 fields, found " + std::to_string(fields.size()));
        }
        LedgerEvent e;
        e.seq = parse_number<std::int64_t>(fields[0], "seq");
        e.kind = event_kind_from_string(fields[1]);
        e.amount = parse_number<double>(fields[2], "amount");
        e.level = parse_number<int>(fields[3], "level");
        e.iteration = parse_number<int>(fields[4], "iteration");
        events.push_back(e);
    }
    if (!header_seen) fail("event log is missing its header row");
    return events;
}

}  // namespace kraken
