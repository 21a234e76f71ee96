#pragma once

#include <cstdint>
#include <vector>

namespace levytree {

// Sparse-table range minimum: O(n log n) build, O(1) value queries, exact
// (pure comparisons, no arithmetic on the values).
template <typename T>
class MinSparseTable {
public:
    MinSparseTable() = default;

    explicit MinSparseTable(const std::vector<T>& values) { build(values); }

    void build(const std::vector<T>& values) {
        const std::size_t n = values.size();
        log2_.assign(n + 1, 0);
        for (std::size_t i = 2; i <= n; ++i) log2_[i] = log2_[i / 2] + 1;
        rows_.clear();
        rows_.push_back(values);
        for (std::size_t len = 2; len <= n; len *= 2) {
            const auto& prev = rows_.back();
            std::vector<T> row(n - len + 1);
            for (std::size_t i = 0; i + len <= n; ++i)
                row[i] = std::min(prev[i], prev[i + len / 2]);
            rows_.push_back(std::move(row));
        }
    }

    // min over the inclusive index range [a, b]; assumes a <= b < n.
    T min(std::size_t a, std::size_t b) const {
        const std::size_t k = log2_[b - a + 1];
        return std::min(rows_[k][a], rows_[k][b + 1 - (std::size_t{1} << k)]);
    }

private:
    std::vector<std::vector<T>> rows_;
    std::vector<std::uint32_t> log2_;
};

}  // namespace levytree
