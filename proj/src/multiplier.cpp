#include "kraken/multiplier.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>
#include <string>

namespace kraken {

namespace {

[[noreturn]] void fail_domain(const std::string& what) {
    throw std::domain_error(what);
}

void require(bool ok, const char* what) {
    if (!ok) fail_domain(what);
}

double softplus(double t) {
    // log(1 + e^t) without overflow on either tail
    if (t > 0.0) return t + std::log1p(std::exp(-t));
    return std::log1p(std::exp(t));
}

}  // namespace

MultiplierParams::MultiplierParams(double reserve_, double insurance_,
                                   double origination_, double tranche_,
                                   int iterations_, int depth_)
    : reserve(reserve_),
      insurance(insurance_),
      origination(origination_),
      tranche(tranche_),
      iterations(iterations_),
      depth(depth_) {
    validate();
}

void MultiplierParams::validate() const {
    require(std::isfinite(reserve) && reserve > 0.0 && reserve < 1.0,
            "reserve fraction must lie strictly between 0 and 1");
    require(std::isfinite(origination) && origination >= 1.0,
            "origination factor must be at least 1");
    require(std::isfinite(insurance) && insurance >= 0.0 && insurance <= origination,
            "insurance premium must lie between 0 and the origination factor");
    require(std::isfinite(tranche) && tranche >= 0.0 && tranche <= 1.0,
            "tranche fraction must lie in [0, 1]");
    require(iterations >= 1, "iteration count must be at least 1");
    require(depth >= 1, "nesting depth must be at least 1");
}

void SkipSpec::validate() const {
    require(start >= 1 && start <= limit,
            "skip window requires 1 <= start <= limit");
}

double classic_limit(double reserve) {
    require(std::isfinite(reserve) && reserve > 0.0 && reserve <= 1.0,
            "reserve fraction must lie in (0, 1]");
    return 1.0 / reserve;
}

double classic_series(double reserve, int iterations) {
    require(std::isfinite(reserve) && reserve > 0.0 && reserve < 1.0,
            "reserve fraction must lie strictly between 0 and 1");
    require(iterations >= 1, "iteration count must be at least 1");
    const double q = 1.0 - reserve;
    double term = 1.0;
    double sum = 0.0;
    for (int i = 0; i < iterations; ++i) {
        term *= q;
        sum += term;
    }
    return sum;
}

double geometric_sum(double reserve, int iterations) {
    require(std::isfinite(reserve) && reserve > 0.0 && reserve < 1.0,
            "reserve fraction must lie strictly between 0 and 1");
    require(iterations >= 1, "iteration count must be at least 1");
    const double q = 1.0 - reserve;
    return q * (1.0 - std::pow(q, iterations)) / reserve;
}

MultiplierCurve classic_curve(double reserve, int max_iterations,
                              bool include_initial_deposit) {
    require(std::isfinite(reserve) && reserve > 0.0 && reserve < 1.0,
            "reserve fraction must lie strictly between 0 and 1");
    require(max_iterations >= 1, "iteration count must be at least 1");
    const double q = 1.0 - reserve;
    MultiplierCurve curve;
    curve.points.reserve(static_cast<std::size_t>(max_iterations));
    double term = 1.0;
    double sum = include_initial_deposit ? 1.0 : 0.0;
    for (int i = 1; i <= max_iterations; ++i) {
        term *= q;
        sum += term;
        curve.points.push_back({i, sum});
    }
    return curve;
}

DerivedFactors derive_factors(const MultiplierParams& params) {
    params.validate();
    DerivedFactors f;
    f.deposit_sum = geometric_sum(params.reserve, params.iterations);
    f.coupling = (params.origination - params.insurance) * params.tranche;
    return f;
}

double kraken_nested_oracle(const MultiplierParams& params) {
    params.validate();
    const double n = static_cast<double>(params.iterations);
    if (params.depth * std::log(n) > std::log(kOracleTermBudget) + 1e-9) {
        std::ostringstream msg;
        msg << "nested oracle budget exceeded: n^k = " << params.iterations
            << "^" << params.depth << " innermost terms";
        throw BudgetError(msg.str());
    }
    const double q = 1.0 - params.reserve;
    const double c = (params.origination - params.insurance) * params.tranche;

    // level j expands sum_i q^i * (1 + c * inner); the deepest level
    // multiplies an innermost factor of 1
    struct Expander {
        double q;
        double c;
        int n;
        int depth;
        double expand(int level) const {
            double sum = 0.0;
            double term = 1.0;
            for (int i = 1; i <= n; ++i) {
                term *= q;
                const double inner = (level < depth) ? expand(level + 1) : 1.0;
                sum += term * (1.0 + c * inner);
            }
            return sum;
        }
    };
    return Expander{q, c, params.iterations, params.depth}.expand(1);
}

MultiplierCurve kraken_eval(const MultiplierParams& params) {
    const DerivedFactors f = derive_factors(params);
    MultiplierCurve curve;
    curve.points.reserve(static_cast<std::size_t>(params.depth));
    double m = 1.0;
    for (int j = 1; j <= params.depth; ++j) {
        m = f.deposit_sum * (1.0 + f.coupling * m);
        if (!std::isfinite(m)) {
            std::ostringstream msg;
            msg << "multiplier exceeds double range at level " << j
                << "; evaluate in log space instead";
            throw std::overflow_error(msg.str());
        }
        curve.points.push_back({j, m});
    }
    return curve;
}

std::vector<double> kraken_eval_log10(const MultiplierParams& params) {
    const DerivedFactors f = derive_factors(params);
    const double log_a = std::log(f.deposit_sum);
    const double log_c = f.coupling > 0.0
                             ? std::log(f.coupling)
                             : -std::numeric_limits<double>::infinity();
    std::vector<double> levels;
    levels.reserve(static_cast<std::size_t>(params.depth));
    double lm = 0.0;  // ln m_0
    for (int j = 1; j <= params.depth; ++j) {
        // ln m_j = ln A + ln(1 + exp(ln c + ln m_{j-1}))
        lm = log_a + softplus(log_c + lm);
        levels.push_back(lm / std::numbers::ln10);
    }
    return levels;
}

double growth_factor(const MultiplierParams& params) {
    const DerivedFactors f = derive_factors(params);
    require(f.coupling > 0.0,
            "growth factor is undefined when the coupling (O-I)*T is zero");
    return f.deposit_sum * f.coupling;
}

double din_ratio(double origination, double insurance, double tranche) {
    require(std::isfinite(origination) && origination >= 1.0,
            "origination factor must be at least 1");
    require(std::isfinite(insurance) && insurance >= 0.0 && insurance < origination,
            "insurance premium must lie in [0, origination)");
    require(std::isfinite(tranche) && tranche > 0.0 && tranche <= 1.0,
            "tranche fraction must lie in (0, 1]");
    return 1.0 / ((origination - insurance) * tranche);
}

double din_ratio_skipped(double origination, double insurance, double reserve,
                         const SkipSpec& skip) {
    require(std::isfinite(origination) && origination >= 1.0,
            "origination factor must be at least 1");
    require(std::isfinite(insurance) && insurance >= 0.0 && insurance < origination,
            "insurance premium must lie in [0, origination)");
    require(std::isfinite(reserve) && reserve > 0.0 && reserve < 1.0,
            "reserve fraction must lie strictly between 0 and 1");
    skip.validate();
    const double q = 1.0 - reserve;
    double uninsured = 0.0;
    double term = std::pow(q, skip.start - 1);
    for (int i = skip.start; i <= skip.limit; ++i) {
        term *= q;
        uninsured += term;
    }
    return 1.0 / ((origination - insurance) + uninsured);
}

std::string_view to_string(SweepAxis axis) {
    switch (axis) {
        case SweepAxis::Reserve: return "reserve";
        case SweepAxis::Insurance: return "insurance";
        case SweepAxis::Origination: return "origination";
        case SweepAxis::Tranche: return "tranche";
        case SweepAxis::Iterations: return "iterations";
        case SweepAxis::Depth: return "depth";
    }
    fail_domain("unknown sweep axis");
}

SweepAxis sweep_axis_from_string(std::string_view name) {
    if (name == "R" || name == "reserve") return SweepAxis::Reserve;
    if (name == "I" || name == "insurance") return SweepAxis::Insurance;
    if (name == "O" || name == "origination") return SweepAxis::Origination;
    if (name == "T" || name == "tranche") return SweepAxis::Tranche;
    if (name == "n" || name == "iterations") return SweepAxis::Iterations;
    if (name == "k" || name == "depth") return SweepAxis::Depth;
    fail_domain("unknown sweep axis '" + std::string(name) +
                "' (expected one of R, I, O, T, n, k)");
}

namespace {

int integral_axis_value(double value, const char* what) {
    if (!(std::isfinite(value)) || value != std::floor(value) ||
        value < 1.0 || value > 1e9) {
        fail_domain(std::string(what) + " axis requires a positive integer value");
    }
    return static_cast<int>(value);
}

}  // namespace

MultiplierParams with_axis_value(MultiplierParams base, SweepAxis axis, double value) {
    switch (axis) {
        case SweepAxis::Reserve: base.reserve = value; break;
        case SweepAxis::Insurance: base.insurance = value; break;
        case SweepAxis::Origination: base.origination = value; break;
        case SweepAxis::Tranche: base.tranche = value; break;
        case SweepAxis::Iterations:
            base.iterations = integral_axis_value(value, "iterations");
            break;
        case SweepAxis::Depth:
            base.depth = integral_axis_value(value, "depth");
            break;
    }
    base.validate();
    return base;
}

std::vector<SweepEntry> sweep(const MultiplierParams& base, SweepAxis axis,
                              std::span<const double> values) {
    require(!values.empty(), "sweep requires at least one axis value");
    std::vector<SweepEntry> entries;
    entries.reserve(values.size());
    for (double v : values) {
        entries.push_back({v, kraken_eval(with_axis_value(base, axis, v))});
    }
    return entries;
}

LineFit fit_log10_line(const MultiplierCurve& curve, int from_level) {
    std::vector<double> xs;
    std::vector<double> ys;
    for (const auto& p : curve.points) {
        if (p.level < from_level) continue;
        require(p.m > 0.0, "log fit requires strictly positive multipliers");
        xs.push_back(static_cast<double>(p.level));
        ys.push_back(std::log10(p.m));
    }
    require(xs.size() >= 2, "log fit requires at least two points");

    const double n = static_cast<double>(xs.size());
    double sx = 0.0, sy = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        sx += xs[i];
        sy += ys[i];
    }
    const double mx = sx / n;
    const double my = sy / n;
    double sxx = 0.0, sxy = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const double dx = xs[i] - mx;
        const double dy = ys[i] - my;
        sxx += dx * dx;
        sxy += dx * dy;
        syy += dy * dy;
    }
    require(sxx > 0.0, "log fit requires distinct levels");

    LineFit fit;
    fit.slope = sxy / sxx;
    fit.intercept = my - fit.slope * mx;
    double ss_res = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const double r = ys[i] - (fit.intercept + fit.slope * xs[i]);
        ss_res += r * r;
        fit.max_abs_residual = std::max(fit.max_abs_residual, std::abs(r));
    }
    fit.r_squared = (syy > 0.0) ? 1.0 - ss_res / syy : 1.0;
    return fit;
}

}  // namespace kraken
