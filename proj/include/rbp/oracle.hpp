#ifndef RBP_ORACLE_HPP
#define RBP_ORACLE_HPP

#include <compare>
#include <cstddef>
#include <cstdint>
#include <utility>
#include <vector>

#include "rbp/matrix.hpp"

namespace rbp {

struct Entry {
    std::size_t row;
    std::size_t col;

    friend auto operator<=>(const Entry&, const Entry&) = default;
};

//
// Gatekeeper around a hidden matrix. Values are only reachable through
// the query methods, and each query marks its position as inspected
// before the value is handed out. Column and row queries count every
// entry individually. verify_entry() is a separate channel for post-hoc
// consistency checks; it is logged on its own and never touches the
// inspection log.
//
class EntryOracle {
  public:
    explicit EntryOracle(DenseMatrix hidden)
        : hidden_(std::move(hidden)), seen_(hidden_.rows() * hidden_.cols(), 0) {}

    std::size_t rows() const noexcept { return hidden_.rows(); }
    std::size_t cols() const noexcept { return hidden_.cols(); }

    double entry(std::size_t i, std::size_t j) {
        check(i, j);
        ++queries_;
        auto& s = seen_[i * cols() + j];
        if (!s) {
            s = 1;
            ++inspected_;
        }
        return hidden_(i, j);
    }

    std::vector<double> column(std::size_t j) {
        std::vector<double> c(rows());
        for (std::size_t i = 0; i < rows(); ++i)
            c[i] = entry(i, j);
        return c;
    }

    std::vector<double> row(std::size_t i) {
        std::vector<double> r(cols());
        for (std::size_t j = 0; j < cols(); ++j)
            r[j] = entry(i, j);
        return r;
    }

    double verify_entry(std::size_t i, std::size_t j) {
        check(i, j);
        ++verification_queries_;
        return hidden_(i, j);
    }

    bool was_inspected(std::size_t i, std::size_t j) const { return seen_[i * cols() + j] != 0; }

    /// Number of distinct positions inspected.
    std::size_t inspected_count() const noexcept { return inspected_; }
    /// Raw query count, repeats included.
    std::size_t query_count() const noexcept { return queries_; }
    std::size_t verification_query_count() const noexcept { return verification_queries_; }

    /// Inspected positions in row-major order.
    std::vector<Entry> inspected_entries() const {
        std::vector<Entry> out;
        out.reserve(inspected_);
        for (std::size_t i = 0; i < rows(); ++i)
            for (std::size_t j = 0; j < cols(); ++j)
                if (seen_[i * cols() + j])
                    out.push_back({i, j});
        return out;
    }

  private:
    void check(std::size_t i, std::size_t j) const {
        if (i >= rows() || j >= cols())
            throw dimension_error("EntryOracle: index out of range");
    }

    DenseMatrix hidden_;
    std::vector<std::uint8_t> seen_;
    std::size_t inspected_ = 0;
    std::size_t queries_ = 0;
    std::size_t verification_queries_ = 0;
};

} // namespace rbp

#endif // RBP_ORACLE_HPP
