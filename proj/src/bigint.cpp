#include "nbwalk/bigint.hpp"

#include <array>
#include <charconv>
#include <vector>

namespace nbwalk {

namespace {

class PascalTriangle {
public:
    const BigInt& at(std::int64_t n, std::int64_t k) {
        while (static_cast<std::int64_t>(rows_.size()) <= n) extend();
        return rows_[static_cast<std::size_t>(n)][static_cast<std::size_t>(k)];
    }

private:
    void extend() {
        std::vector<BigInt> row(rows_.size() + 1);
        row.front() = 1;
        row.back() = 1;
        if (!rows_.empty()) {
            const auto& prev = rows_.back();
            for (std::size_t k = 1; k + 1 < row.size(); ++k) row[k] = prev[k - 1] + prev[k];
        }
        rows_.push_back(std::move(row));
    }

    std::vector<std::vector<BigInt>> rows_;
};

}  // namespace

BigInt binomial(std::int64_t n, std::int64_t k) {
    if (n < 0 || k < 0 || k > n) return 0;
    if (n < kPascalRows) {
        thread_local PascalTriangle triangle;
        return triangle.at(n, k);
    }
    BigInt result;
    mpz_bin_uiui(result.get_mpz_t(), static_cast<unsigned long>(n), static_cast<unsigned long>(k));
    return result;
}

BigInt power(std::int64_t base, unsigned long exponent) {
    BigInt b = static_cast<long>(base);
    BigInt result;
    mpz_pow_ui(result.get_mpz_t(), b.get_mpz_t(), exponent);
    return result;
}

std::string to_decimal(const BigInt& value) { return value.get_str(10); }

std::string to_fraction(const Rational& value) {
    return value.get_num().get_str(10) + "/" + value.get_den().get_str(10);
}

std::string format_double(double value) {
    std::array<char, 64> buf{};
    auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value);
    return std::string(buf.data(), ec == std::errc{} ? ptr : buf.data());
}

double to_double(const Rational& value) {
    // mpq_get_d truncates; fine for presentation, but huge num/den would
    // overflow a naive num.get_d()/den.get_d().
    return mpq_get_d(value.get_mpq_t());
}

double pairwise_sum(std::span<const double> values) {
    if (values.empty()) return 0.0;
    if (values.size() <= 8) {
        double s = 0.0;
        for (double v : values) s += v;
        return s;
    }
    auto half = values.size() / 2;
    return pairwise_sum(values.first(half)) + pairwise_sum(values.subspan(half));
}

}  // namespace nbwalk
