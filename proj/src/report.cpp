#include "robin/report.hpp"

#include "robin/asymptotics.hpp"

#include <cmath>
#include <cstdio>
#include <limits>

namespace robin {

std::uint64_t config_hash(const std::string& canonical_text) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : canonical_text) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

std::string hash_hex(std::uint64_t h) {
    char buf[19];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

void CsvWriter::header(const std::vector<std::string>& columns) {
    for (size_t i = 0; i < columns.size(); ++i) {
        if (i) os_ << ',';
        os_ << columns[i];
    }
    os_ << '\n';
}

CsvWriter& CsvWriter::field(const std::string& s) {
    if (row_open_) os_ << ',';
    os_ << s;
    row_open_ = true;
    return *this;
}

CsvWriter& CsvWriter::field(double v) { return field(format_double(v)); }

CsvWriter& CsvWriter::field(long long v) { return field(std::to_string(v)); }

CsvWriter& CsvWriter::field(bool v) { return field(std::string(v ? "1" : "0")); }

void CsvWriter::end_row() {
    os_ << '\n';
    row_open_ = false;
}

void fit_report_exponents(PredictionReport& report, int k) {
    report.fitted_exponent.assign(k, std::numeric_limits<double>::quiet_NaN());
    report.fitted_r_squared.assign(k, std::numeric_limits<double>::quiet_NaN());
    if (report.betas.size() < 3) return;
    // Pre-asymptotic contamination: drop the smallest beta when affordable.
    const size_t start = report.betas.size() > 3 ? 1 : 0;
    for (int j = 0; j < k; ++j) {
        std::vector<double> bs, rs;
        for (const PredictionRow& row : report.rows) {
            if (row.j != j + 1) continue;
            if (row.beta < report.betas[start]) continue;
            bs.push_back(row.beta);
            rs.push_back(row.residual);
        }
        if (bs.size() < 3) continue;
        bool zero = false;
        for (double r : rs) zero = zero || r == 0.0;
        if (zero) continue;
        const ExponentFit fit = fit_remainder_exponent(bs, rs);
        report.fitted_exponent[j] = fit.exponent;
        report.fitted_r_squared[j] = fit.r_squared;
    }
}

} // namespace robin
