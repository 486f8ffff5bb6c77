#pragma once

#include <span>
#include <stdexcept>
#include <string_view>
#include <vector>

namespace kraken {

/// Thrown when a brute-force evaluation would exceed its term budget.
struct BudgetError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Parameter vector of the nested DIN (default insurance note) multiplier.
///
/// A bank retains fraction `reserve` of each deposit and lends the rest.
/// Each loan may be insured with a DIN covering fraction `tranche` of its
/// value; the insured slice, net of the premium and gross of origination
/// fees, is booked as synthetic capital and seeds another lending cascade.
/// `iterations` bounds the deposit->loan cycles within one cascade,
/// `depth` the number of DIN generations.
struct MultiplierParams {
    double reserve = 0.05;     // R: retained fraction of each deposit, (0,1)
    double insurance = 0.05;   // I: DIN premium as a fraction of insured value
    double origination = 1.0;  // O: 1 + origination fee fraction, >= 1
    double tranche = 0.3;      // T: fraction of each loan covered, [0,1]
    int iterations = 100;      // n: deposit->loan cycles per level, >= 1
    int depth = 10;            // k: DIN generations, >= 1

    MultiplierParams() = default;
    MultiplierParams(double reserve, double insurance, double origination,
                     double tranche, int iterations, int depth);

    /// Throws std::domain_error on any violated range. insurance == origination
    /// is allowed (the coupling collapses to zero); insurance > origination is not.
    void validate() const;
};

/// Per-level factors that reduce the nested summation to a recurrence.
struct DerivedFactors {
    double deposit_sum = 0.0;  // A = sum_{i=1..n} (1-R)^i
    double coupling = 0.0;     // c = (O-I)*T, synthetic capital per unit loaned
};

DerivedFactors derive_factors(const MultiplierParams& params);

struct CurvePoint {
    int level = 0;
    double m = 0.0;
};

/// Multiplier per nesting level, levels strictly increasing from 1.
struct MultiplierCurve {
    std::vector<CurvePoint> points;
};

/// Iteration window for the uninsured-loan adjustment of the DIN capital ratio.
struct SkipSpec {
    int start = 1;  // s: first iteration of the uninsured span
    int limit = 1;  // n: last iteration of the uninsured span

    void validate() const;  // requires 1 <= start <= limit
};

/// Classic reserve-banking limit 1/R. Accepts 0 < R <= 1.
double classic_limit(double reserve);

/// Partial sum sum_{i=1..n} (1-R)^i, accumulated term by term.
double classic_series(double reserve, int iterations);

/// Closed form (1-R)*(1-(1-R)^n)/R of the same partial sum.
double geometric_sum(double reserve, int iterations);

/// Curve of classic partial sums for 1..max_iterations. With
/// `include_initial_deposit` the seed deposit itself is counted, shifting
/// every point by +1 so the curve saturates at 1/R instead of (1-R)/R.
MultiplierCurve classic_curve(double reserve, int max_iterations,
                              bool include_initial_deposit = false);

/// Literal evaluation of the k-level nested summation, re-evaluating the
/// inner summation for every outer index. Exponential in depth by
/// construction; throws BudgetError when n^k exceeds the term budget.
double kraken_nested_oracle(const MultiplierParams& params);

/// Number of innermost terms the oracle may expand (n^k limit).
inline constexpr double kOracleTermBudget = 1e7;

/// Multiplier per level via the recurrence m_j = A*(1 + c*m_{j-1}), m_0 = 1.
/// Equivalent to the nested summation; O(k) after computing A. Throws
/// std::overflow_error once m leaves double range (see kraken_eval_log10).
MultiplierCurve kraken_eval(const MultiplierParams& params);

/// log10 of the same per-level multipliers, carried entirely in log space
/// so arbitrarily deep nestings stay representable.
std::vector<double> kraken_eval_log10(const MultiplierParams& params);

/// Asymptotic per-level growth ratio A*c (the slope of the semi-log curve).
/// Requires coupling > 0; with A*c < 1 the curve contracts to a fixed point
/// instead of diverging.
double growth_factor(const MultiplierParams& params);

/// Ratio of new deposit creation to DIN capital booked when every loan is
/// insured: 1 / ((O-I)*T).
double din_ratio(double origination, double insurance, double tranche);

/// Same ratio when loans in the iteration window [start, limit] go uninsured
/// and keep multiplying through ordinary reserve lending:
/// 1 / ((O-I) + sum_{i=s..n} (1-R)^i).
double din_ratio_skipped(double origination, double insurance, double reserve,
                         const SkipSpec& skip);

enum class SweepAxis { Reserve, Insurance, Origination, Tranche, Iterations, Depth };

std::string_view to_string(SweepAxis axis);
SweepAxis sweep_axis_from_string(std::string_view name);  // R,I,O,T,n,k or long names

/// `base` with one parameter replaced. Count axes require integral values.
MultiplierParams with_axis_value(MultiplierParams base, SweepAxis axis, double value);

struct SweepEntry {
    double value = 0.0;
    MultiplierCurve curve;
};

/// One kraken_eval curve per swept value, in input order.
std::vector<SweepEntry> sweep(const MultiplierParams& base, SweepAxis axis,
                              std::span<const double> values);

/// Least-squares line through (level, log10 m).
struct LineFit {
    double slope = 0.0;
    double intercept = 0.0;
    double r_squared = 0.0;
    double max_abs_residual = 0.0;
};

/// Fits points with level >= from_level; needs at least two of them and
/// strictly positive m.
LineFit fit_log10_line(const MultiplierCurve& curve, int from_level = 1);

}  // namespace kraken
