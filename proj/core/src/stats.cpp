#include "qassert/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "qassert/errors.hpp"

namespace qassert::stats {

namespace {

constexpr int kMaxIter = 500;
constexpr double kEps = 3e-16;

// Series for the regularized lower incomplete gamma P(a, x), x < a+1.
double gamma_p_series(double a, double x) {
    double ap = a;
    double sum = 1.0 / a;
    double term = sum;
    for (int n = 0; n < kMaxIter; ++n) {
        ap += 1.0;
        term *= x / ap;
        sum += term;
        if (std::fabs(term) < std::fabs(sum) * kEps) {
            break;
        }
    }
    return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

// Continued fraction for Q(a, x), x >= a+1. Modified Lentz.
double gamma_q_cf(double a, double x) {
    const double tiny = 1e-300;
    double b = x + 1.0 - a;
    double c = 1.0 / tiny;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i <= kMaxIter; ++i) {
        const double an = -static_cast<double>(i) * (static_cast<double>(i) - a);
        b += 2.0;
        d = an * d + b;
        if (std::fabs(d) < tiny) d = tiny;
        c = b + an / c;
        if (std::fabs(c) < tiny) c = tiny;
        d = 1.0 / d;
        const double mult = d * c;
        h *= mult;
        if (std::fabs(mult - 1.0) < kEps) {
            break;
        }
    }
    return std::exp(-x + a * std::log(x) - std::lgamma(a)) * h;
}

} // namespace

double gamma_q(double a, double x) {
    if (!std::isfinite(a) || !std::isfinite(x) || a <= 0.0 || x < 0.0) {
        throw UsageError("gamma_q: requires finite a > 0 and x >= 0");
    }
    if (x == 0.0) {
        return 1.0;
    }
    if (x < a + 1.0) {
        return 1.0 - gamma_p_series(a, x);
    }
    return gamma_q_cf(a, x);
}

GofResult chi2_gof(const Histogram& observed, const std::vector<double>& expected_probs) {
    double psum = 0.0;
    for (double p : expected_probs) {
        if (!(p >= 0.0) || !std::isfinite(p)) {
            throw UsageError("chi2_gof: expected probabilities must be finite and nonnegative");
        }
        psum += p;
    }
    if (std::fabs(psum - 1.0) > 1e-9) {
        throw UsageError("chi2_gof: expected probabilities must sum to 1");
    }
    if (observed.total == 0) {
        throw UsageError("chi2_gof: empty histogram");
    }

    GofResult r;
    for (const auto& [outcome, count] : observed.counts) {
        if (count == 0) continue;
        if (outcome >= expected_probs.size() || expected_probs[outcome] == 0.0) {
            r.impossible_outcome = true;
            r.statistic = 0.0;
            r.dof = 0;
            r.p_value = 0.0;
            return r;
        }
    }

    const double n = static_cast<double>(observed.total);
    int cells = 0;
    double stat = 0.0;
    for (std::size_t k = 0; k < expected_probs.size(); ++k) {
        if (expected_probs[k] == 0.0) continue;
        ++cells;
        const double e = n * expected_probs[k];
        const double o = static_cast<double>(observed.count(k));
        const double d = o - e;
        stat += d * d / e;
    }
    r.statistic = stat;
    r.dof = cells - 1;
    r.p_value = r.dof > 0 ? gamma_q(0.5 * r.dof, 0.5 * stat) : 1.0;
    return r;
}

void ContingencyTable::add(std::uint64_t row, std::uint64_t col, std::uint64_t count) {
    cells_[{row, col}] += count;
}

std::uint64_t ContingencyTable::grand_total() const {
    std::uint64_t total = 0;
    for (const auto& [rc, count] : cells_) total += count;
    return total;
}

std::vector<std::uint64_t> ContingencyTable::row_labels() const {
    std::vector<std::uint64_t> labels;
    for (const auto& [rc, count] : cells_) {
        if (!std::binary_search(labels.begin(), labels.end(), rc.first)) {
            labels.insert(std::lower_bound(labels.begin(), labels.end(), rc.first), rc.first);
        }
    }
    return labels;
}

std::vector<std::uint64_t> ContingencyTable::col_labels() const {
    std::vector<std::uint64_t> labels;
    for (const auto& [rc, count] : cells_) {
        if (!std::binary_search(labels.begin(), labels.end(), rc.second)) {
            labels.insert(std::lower_bound(labels.begin(), labels.end(), rc.second), rc.second);
        }
    }
    return labels;
}

std::uint64_t ContingencyTable::cell(std::uint64_t row, std::uint64_t col) const {
    auto it = cells_.find({row, col});
    return it == cells_.end() ? 0 : it->second;
}

ContingencyTable ContingencyTable::pruned() const {
    std::map<std::uint64_t, std::uint64_t> row_sum, col_sum;
    for (const auto& [rc, count] : cells_) {
        row_sum[rc.first] += count;
        col_sum[rc.second] += count;
    }
    ContingencyTable t;
    for (const auto& [rc, count] : cells_) {
        if (row_sum[rc.first] == 0 || col_sum[rc.second] == 0) continue;
        t.add(rc.first, rc.second, count);
    }
    return t;
}

ContingencyTable ContingencyTable::transposed() const {
    ContingencyTable t;
    for (const auto& [rc, count] : cells_) {
        t.add(rc.second, rc.first, count);
    }
    return t;
}

ContingencyResult chi2_contingency(const ContingencyTable& table) {
    const ContingencyTable t = table.pruned();
    const std::vector<std::uint64_t> rows = t.row_labels();
    const std::vector<std::uint64_t> cols = t.col_labels();

    ContingencyResult r;
    r.surviving_rows = static_cast<int>(rows.size());
    r.surviving_cols = static_cast<int>(cols.size());
    if (rows.size() < 2 || cols.size() < 2) {
        r.indeterminate = true;
        r.statistic = 0.0;
        r.dof = 0;
        r.p_value = 1.0;
        return r;
    }

    std::map<std::uint64_t, double> row_sum, col_sum;
    double total = 0.0;
    for (const auto& [rc, count] : t.cells()) {
        const double v = static_cast<double>(count);
        row_sum[rc.first] += v;
        col_sum[rc.second] += v;
        total += v;
    }

    double stat = 0.0;
    for (std::uint64_t row : rows) {
        for (std::uint64_t col : cols) {
            const double e = row_sum[row] * col_sum[col] / total;
            if (e < 5.0) r.low_expected = true;
            const double d = static_cast<double>(t.cell(row, col)) - e;
            stat += d * d / e;
        }
    }
    r.statistic = stat;
    r.dof = static_cast<int>((rows.size() - 1) * (cols.size() - 1));
    r.p_value = gamma_q(0.5 * r.dof, 0.5 * stat);
    return r;
}

} // namespace qassert::stats
