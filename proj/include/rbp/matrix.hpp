#ifndef RBP_MATRIX_HPP
#define RBP_MATRIX_HPP

//
// Dense row-major matrix, the error types shared by the library, and the
// plain-text matrix format used by the command line tool.
//

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstddef>
#include <cstdio>
#include <fstream>
#include <initializer_list>
#include <istream>
#include <ostream>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace rbp {

/// Default relative tolerance for span, rank and singularity tests.
inline constexpr double kDefaultTolerance = 1e-9;

/// Caller passed arguments with inconsistent shapes.
class dimension_error : public std::invalid_argument {
  public:
    using std::invalid_argument::invalid_argument;
};

/// Fewer independent vectors than required were found.
class rank_deficient_error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// A square system is singular up to the working tolerance.
class singular_matrix_error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Numerical state became inconsistent (e.g. a basis grew past its ambient dimension).
class tolerance_error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

class DenseMatrix {
  public:
    DenseMatrix() = default;

    DenseMatrix(std::size_t rows, std::size_t cols)
        : rows_(rows), cols_(cols), data_(rows * cols, 0.0) {
        check_shape();
    }

    DenseMatrix(std::size_t rows, std::size_t cols, std::vector<double> data)
        : rows_(rows), cols_(cols), data_(std::move(data)) {
        check_shape();
        if (data_.size() != rows_ * cols_)
            throw dimension_error("DenseMatrix: data length does not equal rows*cols");
        for (double x : data_)
            if (!std::isfinite(x))
                throw std::invalid_argument("DenseMatrix: non-finite entry");
    }

    DenseMatrix(std::initializer_list<std::initializer_list<double>> rows) {
        rows_ = rows.size();
        cols_ = rows_ ? rows.begin()->size() : 0;
        check_shape();
        data_.reserve(rows_ * cols_);
        for (const auto& r : rows) {
            if (r.size() != cols_)
                throw dimension_error("DenseMatrix: ragged initializer");
            for (double x : r) {
                if (!std::isfinite(x))
                    throw std::invalid_argument("DenseMatrix: non-finite entry");
                data_.push_back(x);
            }
        }
    }

    static DenseMatrix identity(std::size_t n) {
        DenseMatrix I(n, n);
        for (std::size_t i = 0; i < n; ++i)
            I(i, i) = 1.0;
        return I;
    }

    /// Matrix whose columns are the given vectors (all of equal length).
    static DenseMatrix from_columns(const std::vector<std::vector<double>>& columns) {
        if (columns.empty())
            throw dimension_error("from_columns: no columns");
        DenseMatrix M(columns.front().size(), columns.size());
        for (std::size_t j = 0; j < columns.size(); ++j) {
            if (columns[j].size() != M.rows())
                throw dimension_error("from_columns: columns differ in length");
            for (std::size_t i = 0; i < M.rows(); ++i)
                M(i, j) = columns[j][i];
        }
        return M;
    }

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }

    double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

    std::span<const double> data() const noexcept { return data_; }
    std::span<const double> row(std::size_t i) const {
        return std::span<const double>(data_).subspan(i * cols_, cols_);
    }

    std::vector<double> column(std::size_t j) const {
        std::vector<double> c(rows_);
        for (std::size_t i = 0; i < rows_; ++i)
            c[i] = (*this)(i, j);
        return c;
    }

    DenseMatrix transpose() const {
        DenseMatrix T(cols_, rows_);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < cols_; ++j)
                T(j, i) = (*this)(i, j);
        return T;
    }

    DenseMatrix select_columns(std::span<const std::size_t> idx) const {
        DenseMatrix S(rows_, idx.size());
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t c = 0; c < idx.size(); ++c)
                S(i, c) = (*this)(i, idx[c]);
        return S;
    }

    DenseMatrix select_rows(std::span<const std::size_t> idx) const {
        DenseMatrix S(idx.size(), cols_);
        for (std::size_t r = 0; r < idx.size(); ++r)
            for (std::size_t j = 0; j < cols_; ++j)
                S(r, j) = (*this)(idx[r], j);
        return S;
    }

    double frobenius_norm() const {
        double s = 0.0;
        for (double x : data_)
            s += x * x;
        return std::sqrt(s);
    }

    double max_abs() const {
        double s = 0.0;
        for (double x : data_)
            s = std::max(s, std::abs(x));
        return s;
    }

    friend bool operator==(const DenseMatrix&, const DenseMatrix&) = default;

  private:
    void check_shape() const {
        if (rows_ == 0 || cols_ == 0)
            throw dimension_error("DenseMatrix: dimensions must be positive");
    }

    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> data_;
};

inline DenseMatrix operator*(const DenseMatrix& A, const DenseMatrix& B) {
    if (A.cols() != B.rows())
        throw dimension_error("matrix product: inner dimensions differ");
    DenseMatrix C(A.rows(), B.cols());
    for (std::size_t i = 0; i < A.rows(); ++i)
        for (std::size_t l = 0; l < A.cols(); ++l) {
            const double a = A(i, l);
            if (a == 0.0)
                continue;
            for (std::size_t j = 0; j < B.cols(); ++j)
                C(i, j) += a * B(l, j);
        }
    return C;
}

inline DenseMatrix operator-(const DenseMatrix& A, const DenseMatrix& B) {
    if (A.rows() != B.rows() || A.cols() != B.cols())
        throw dimension_error("matrix difference: shapes differ");
    DenseMatrix C(A.rows(), A.cols());
    for (std::size_t i = 0; i < A.rows(); ++i)
        for (std::size_t j = 0; j < A.cols(); ++j)
            C(i, j) = A(i, j) - B(i, j);
    return C;
}

inline std::vector<double> multiply(const DenseMatrix& A, std::span<const double> x) {
    if (x.size() != A.cols())
        throw dimension_error("matrix-vector product: length mismatch");
    std::vector<double> y(A.rows(), 0.0);
    for (std::size_t i = 0; i < A.rows(); ++i) {
        double s = 0.0;
        for (std::size_t j = 0; j < A.cols(); ++j)
            s += A(i, j) * x[j];
        y[i] = s;
    }
    return y;
}

inline double dot(std::span<const double> a, std::span<const double> b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i)
        s += a[i] * b[i];
    return s;
}

inline double norm2(std::span<const double> v) { return std::sqrt(dot(v, v)); }

/// ||A - B||_F / ||B||_F, or the absolute difference when B is zero.
inline double relative_frobenius_error(const DenseMatrix& A, const DenseMatrix& B) {
    const double diff = (A - B).frobenius_norm();
    const double ref = B.frobenius_norm();
    return ref > 0.0 ? diff / ref : diff;
}

//
// Text format: "m n" header, then m lines of n values. Lines starting
// with '#' are comments. Values are written with 17 significant digits.
//

inline DenseMatrix read_matrix(std::istream& in) {
    std::vector<double> values;
    std::size_t m = 0, n = 0;
    bool have_header = false;
    std::string line;
    while (std::getline(in, line)) {
        std::string_view sv(line);
        const auto first = sv.find_first_not_of(" \t\r");
        if (first == std::string_view::npos || sv[first] == '#')
            continue;
        std::istringstream tokens(line);
        std::string tok;
        std::size_t count = 0;
        while (tokens >> tok) {
            ++count;
            if (!have_header) {
                std::size_t v = 0;
                auto [p, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
                if (ec != std::errc() || p != tok.data() + tok.size())
                    throw std::invalid_argument("matrix file: bad header token '" + tok + "'");
                (count == 1 ? m : n) = v;
            } else {
                double x = 0.0;
                auto [p, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), x);
                if (ec != std::errc() || p != tok.data() + tok.size())
                    throw std::invalid_argument("matrix file: bad value '" + tok + "'");
                values.push_back(x);
            }
        }
        if (!have_header) {
            if (count != 2)
                throw std::invalid_argument("matrix file: header must be 'm n'");
            have_header = true;
            values.reserve(m * n);
        } else if (count != n) {
            throw std::invalid_argument("matrix file: row has wrong number of values");
        }
    }
    if (!have_header)
        throw std::invalid_argument("matrix file: missing header");
    if (values.size() != m * n)
        throw std::invalid_argument("matrix file: expected " + std::to_string(m) + " rows");
    return DenseMatrix(m, n, std::move(values));
}

inline void write_matrix(std::ostream& out, const DenseMatrix& M) {
    out << M.rows() << ' ' << M.cols() << '\n';
    char buf[32];
    for (std::size_t i = 0; i < M.rows(); ++i) {
        for (std::size_t j = 0; j < M.cols(); ++j) {
            std::snprintf(buf, sizeof buf, "%.17g", M(i, j));
            if (j)
                out << ' ';
            out << buf;
        }
        out << '\n';
    }
}

inline DenseMatrix load_matrix(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw std::runtime_error("cannot open matrix file: " + path);
    return read_matrix(in);
}

inline void save_matrix(const std::string& path, const DenseMatrix& M) {
    std::ofstream out(path);
    if (!out)
        throw std::runtime_error("cannot write matrix file: " + path);
    write_matrix(out, M);
}

} // namespace rbp

#endif // RBP_MATRIX_HPP
