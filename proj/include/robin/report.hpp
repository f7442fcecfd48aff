#pragma once

#include <cstdint>
#include <ostream>
#include <string>
#include <vector>

namespace robin {

/// FNV-1a 64 over the canonical config text; provenance tag for report rows.
std::uint64_t config_hash(const std::string& canonical_text);
std::string hash_hex(std::uint64_t h);

/// Round-trip exact formatting (17 significant digits, C locale).
std::string format_double(double v);

/// Comma-separated output, header row, no locale formatting.
class CsvWriter {
public:
    explicit CsvWriter(std::ostream& os) : os_(os) {}
    void header(const std::vector<std::string>& columns);
    CsvWriter& field(const std::string& s);
    CsvWriter& field(double v);
    CsvWriter& field(long long v);
    CsvWriter& field(int v) { return field(static_cast<long long>(v)); }
    CsvWriter& field(bool v);
    void end_row();

private:
    std::ostream& os_;
    bool row_open_ = false;
};

/// Beta-sweep table: computed enclosures against the two-term predictions.
struct PredictionRow {
    double beta = 0;
    int j = 0;
    double lambda_lower = 0;
    double lambda_upper = 0;
    double predicted_two_term = 0;
    double refined_lower = 0;
    double residual = 0;  // lambda_upper - predicted_two_term
    bool discrete_flag = false;
    int mesh_ns = 0, mesh_nu = 0;
    double a = 0;
};

struct PredictionReport {
    std::string model;
    std::vector<double> betas;
    std::vector<PredictionRow> rows;              // ordered by beta then j
    std::vector<double> fitted_exponent;          // per j; NaN when not fitted
    std::vector<double> fitted_r_squared;
};

/// Fits the remainder exponent per j from the report rows; drops the
/// smallest beta when more than three are present.
void fit_report_exponents(PredictionReport& report, int k);

} // namespace robin
