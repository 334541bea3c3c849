#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <cstdint>
#include <iostream>
#include <string>

#include "chaosbench/errors.hpp"

// Little binary container helpers shared by the model save/load paths.
// A model file is a magic tag followed by tagged scalar/matrix payloads;
// doubles are stored as raw IEEE-754 bytes so a loaded model replays
// forecasts bit-for-bit.

namespace chaos::io {

inline void write_u64(std::ostream& out, std::uint64_t v) {
    out.write(reinterpret_cast<const char*>(&v), sizeof(v));
}

inline std::uint64_t read_u64(std::istream& in) {
    std::uint64_t v = 0;
    in.read(reinterpret_cast<char*>(&v), sizeof(v));
    if (!in) throw IoError("truncated model file (u64)");
    return v;
}

inline void write_f64(std::ostream& out, double v) {
    out.write(reinterpret_cast<const char*>(&v), sizeof(v));
}

inline double read_f64(std::istream& in) {
    double v = 0;
    in.read(reinterpret_cast<char*>(&v), sizeof(v));
    if (!in) throw IoError("truncated model file (f64)");
    return v;
}

inline void write_magic(std::ostream& out, const std::string& magic) {
    out.write(magic.data(), static_cast<std::streamsize>(magic.size()));
}

inline void expect_magic(std::istream& in, const std::string& magic) {
    std::string got(magic.size(), '\0');
    in.read(got.data(), static_cast<std::streamsize>(magic.size()));
    if (!in || got != magic) throw IoError("bad model file magic (expected " + magic + ")");
}

inline void write_matrix(std::ostream& out, const Eigen::MatrixXd& m) {
    write_u64(out, static_cast<std::uint64_t>(m.rows()));
    write_u64(out, static_cast<std::uint64_t>(m.cols()));
    for (Eigen::Index j = 0; j < m.cols(); ++j)
        for (Eigen::Index i = 0; i < m.rows(); ++i) write_f64(out, m(i, j));
}

inline Eigen::MatrixXd read_matrix(std::istream& in) {
    const auto rows = static_cast<Eigen::Index>(read_u64(in));
    const auto cols = static_cast<Eigen::Index>(read_u64(in));
    Eigen::MatrixXd m(rows, cols);
    for (Eigen::Index j = 0; j < cols; ++j)
        for (Eigen::Index i = 0; i < rows; ++i) m(i, j) = read_f64(in);
    return m;
}

inline void write_vector(std::ostream& out, const Eigen::VectorXd& v) {
    write_u64(out, static_cast<std::uint64_t>(v.size()));
    for (Eigen::Index i = 0; i < v.size(); ++i) write_f64(out, v[i]);
}

inline Eigen::VectorXd read_vector(std::istream& in) {
    const auto n = static_cast<Eigen::Index>(read_u64(in));
    Eigen::VectorXd v(n);
    for (Eigen::Index i = 0; i < n; ++i) v[i] = read_f64(in);
    return v;
}

inline void write_sparse(std::ostream& out, const Eigen::SparseMatrix<double>& m) {
    write_u64(out, static_cast<std::uint64_t>(m.rows()));
    write_u64(out, static_cast<std::uint64_t>(m.cols()));
    write_u64(out, static_cast<std::uint64_t>(m.nonZeros()));
    for (int k = 0; k < m.outerSize(); ++k) {
        for (Eigen::SparseMatrix<double>::InnerIterator it(m, k); it; ++it) {
            write_u64(out, static_cast<std::uint64_t>(it.row()));
            write_u64(out, static_cast<std::uint64_t>(it.col()));
            write_f64(out, it.value());
        }
    }
}

inline Eigen::SparseMatrix<double> read_sparse(std::istream& in) {
    const auto rows = static_cast<Eigen::Index>(read_u64(in));
    const auto cols = static_cast<Eigen::Index>(read_u64(in));
    const auto nnz = read_u64(in);
    std::vector<Eigen::Triplet<double>> triplets;
    triplets.reserve(nnz);
    for (std::uint64_t k = 0; k < nnz; ++k) {
        const auto i = static_cast<int>(read_u64(in));
        const auto j = static_cast<int>(read_u64(in));
        const double v = read_f64(in);
        triplets.emplace_back(i, j, v);
    }
    Eigen::SparseMatrix<double> m(rows, cols);
    m.setFromTriplets(triplets.begin(), triplets.end());
    return m;
}

}  // namespace chaos::io
