#pragma once

#include <cstdint>
#include <map>
#include <vector>

namespace qassert::stats {

/// Regularized upper incomplete gamma Q(a, x) = Gamma(a, x) / Gamma(a).
/// Series expansion for x < a+1, continued fraction otherwise; good to
/// at least 8 significant digits. Throws UsageError for a <= 0, x < 0 or
/// non-finite input.
double gamma_q(double a, double x);

/// Counts of integer readings of a register.
struct Histogram {
    std::map<std::uint64_t, std::uint64_t> counts;
    std::uint64_t total = 0;

    void add(std::uint64_t outcome, std::uint64_t n = 1) {
        counts[outcome] += n;
        total += n;
    }
    std::uint64_t count(std::uint64_t outcome) const {
        auto it = counts.find(outcome);
        return it == counts.end() ? 0 : it->second;
    }
};

struct ChiSquareResult {
    double statistic = 0.0;
    int dof = 0;
    double p_value = 1.0;
};

struct GofResult : ChiSquareResult {
    /// Observed mass landed on a cell with zero expected probability. The
    /// hypothesis assigns the data probability zero; p_value is 0 but the
    /// statistic was never computed. Distinct from a computed rejection.
    bool impossible_outcome = false;
};

/// Goodness of fit against an explicit distribution over cells 0..K-1.
/// expected_probs must sum to 1 within 1e-9. statistic = sum (O-E)^2/E over
/// cells with E > 0; dof = #cells - 1; p = gamma_q(dof/2, statistic/2).
GofResult chi2_gof(const Histogram& observed, const std::vector<double>& expected_probs);

/// Joint counts of two registers' readings. Rows index register A outcomes,
/// columns register B outcomes. Zero-marginal rows/columns are dropped
/// before testing.
class ContingencyTable {
  public:
    void add(std::uint64_t row, std::uint64_t col, std::uint64_t count = 1);

    std::uint64_t grand_total() const;
    /// Sorted distinct row/column outcome values.
    std::vector<std::uint64_t> row_labels() const;
    std::vector<std::uint64_t> col_labels() const;
    std::uint64_t cell(std::uint64_t row, std::uint64_t col) const;

    const std::map<std::pair<std::uint64_t, std::uint64_t>, std::uint64_t>& cells() const {
        return cells_;
    }

    /// Drops rows/columns whose marginal is zero.
    ContingencyTable pruned() const;
    ContingencyTable transposed() const;

  private:
    std::map<std::pair<std::uint64_t, std::uint64_t>, std::uint64_t> cells_;
};

struct ContingencyResult : ChiSquareResult {
    /// Fewer than 2 surviving rows or columns: one variable is constant and
    /// independence is untestable.
    bool indeterminate = false;
    /// Some expected cell count fell below 5 (the test is low-powered).
    bool low_expected = false;
    int surviving_rows = 0;
    int surviving_cols = 0;
};

/// Pearson chi-square independence test. E_ij = row_i * col_j / total;
/// dof = (r-1)(c-1). No continuity correction.
ContingencyResult chi2_contingency(const ContingencyTable& table);

} // namespace qassert::stats
