#pragma once

#include <array>

#include <Eigen/Dense>

#include "evans/types.hpp"

namespace evans {

// Coefficients on the labeled basis f1..f4 (i_j ^ i_4, then i_4 ^ i_5), g1..g6.
struct Wedge2 {
    Vec10 c = Vec10::Zero();

    Wedge2() = default;
    explicit Wedge2(const Vec10& v) : c(v) {}

    // 1-based accessors matching the basis labels.
    cplx& f(int i) { return c[i - 1]; }
    cplx& g(int j) { return c[3 + j]; }
    cplx f(int i) const { return c[i - 1]; }
    cplx g(int j) const { return c[3 + j]; }
};

// Coefficients on the dual basis f1p..f4p, g1p..g6p (signs absorbed).
struct Wedge3 {
    Vec10 c = Vec10::Zero();

    Wedge3() = default;
    explicit Wedge3(const Vec10& v) : c(v) {}

    cplx& fp(int i) { return c[i - 1]; }
    cplx& gp(int j) { return c[3 + j]; }
    cplx fp(int i) const { return c[i - 1]; }
    cplx gp(int j) const { return c[3 + j]; }
};

// 0-based index pairs of the labeled Lambda^2 basis.
const std::array<std::array<int, 2>, 10>& basis2();

// 0-based index triples and signs of the labeled Lambda^3 basis.
struct Basis3Entry {
    std::array<int, 3> idx;
    int sign;
};
const std::array<Basis3Entry, 10>& basis3();

// Compound matrix on Lambda^k(C^n), basis of increasing k-subsets in
// lexicographic order.
Eigen::MatrixXcd lift(const Eigen::MatrixXcd& a, int k);

// Compound matrices expressed in the labeled bases.
Mat10 lift2(const Mat5& a);
Mat10 lift3(const Mat5& a);

Wedge2 wedge2(const Vec5& u, const Vec5& v);
Wedge3 wedge3(const Vec5& u, const Vec5& v, const Vec5& w);

// Volume-form coefficient of w2 ^ w3.
cplx pair_top(const Wedge2& w2, const Wedge3& w3);

Vec5 unit(int i); // i_1..i_5, 1-based

} // namespace evans
