#include "evans/exterior.hpp"

#include <algorithm>
#include <vector>

namespace evans {

const std::array<std::array<int, 2>, 10>& basis2()
{
    static const std::array<std::array<int, 2>, 10> b = {{
        {0, 3}, {1, 3}, {2, 3}, {3, 4},
        {0, 1}, {0, 2}, {0, 4}, {1, 2}, {1, 4}, {2, 4},
    }};
    return b;
}

const std::array<Basis3Entry, 10>& basis3()
{
    static const std::array<Basis3Entry, 10> b = {{
        {{1, 2, 4}, +1}, {{0, 2, 4}, -1}, {{0, 1, 4}, +1}, {{0, 1, 2}, +1},
        {{2, 3, 4}, +1}, {{1, 3, 4}, -1}, {{1, 2, 3}, -1}, {{0, 3, 4}, +1},
        {{0, 2, 3}, +1}, {{0, 1, 3}, -1},
    }};
    return b;
}

namespace {

// Sorts idx in place and returns the permutation sign, or 0 on a repeat.
int sort_sign(std::vector<int>& idx)
{
    int inversions = 0;
    for (std::size_t i = 0; i < idx.size(); ++i)
        for (std::size_t j = i + 1; j < idx.size(); ++j) {
            if (idx[i] == idx[j]) return 0;
            if (idx[i] > idx[j]) ++inversions;
        }
    std::sort(idx.begin(), idx.end());
    return inversions % 2 ? -1 : 1;
}

struct Labeled {
    std::vector<std::vector<int>> idx; // sorted subsets
    std::vector<int> sign;             // label = sign * elementary wedge
};

int find_label(const Labeled& lb, const std::vector<int>& sorted)
{
    for (std::size_t k = 0; k < lb.idx.size(); ++k)
        if (lb.idx[k] == sorted) return static_cast<int>(k);
    return -1;
}

Eigen::MatrixXcd lift_labeled(const Eigen::MatrixXcd& a, const Labeled& lb)
{
    const int n = static_cast<int>(a.rows());
    const int dim = static_cast<int>(lb.idx.size());
    Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(dim, dim);
    for (int col = 0; col < dim; ++col) {
        const auto& base = lb.idx[col];
        for (std::size_t slot = 0; slot < base.size(); ++slot)
            for (int m = 0; m < n; ++m) {
                const cplx coef = a(m, base[slot]);
                if (coef == cplx(0.0)) continue;
                std::vector<int> t = base;
                t[slot] = m;
                const int s = sort_sign(t);
                if (s == 0) continue;
                const int row = find_label(lb, t);
                out(row, col) += double(s * lb.sign[row] * lb.sign[col]) * coef;
            }
    }
    return out;
}

Labeled lexicographic(int n, int k)
{
    Labeled lb;
    std::vector<int> mask(n, 0);
    std::fill(mask.begin(), mask.begin() + k, 1);
    do {
        std::vector<int> s;
        for (int i = 0; i < n; ++i)
            if (mask[i]) s.push_back(i);
        lb.idx.push_back(s);
        lb.sign.push_back(1);
    } while (std::prev_permutation(mask.begin(), mask.end()));
    return lb;
}

const Labeled& labeled2()
{
    static const Labeled lb = [] {
        Labeled l;
        for (const auto& p : basis2()) {
            l.idx.push_back({p[0], p[1]});
            l.sign.push_back(1);
        }
        return l;
    }();
    return lb;
}

const Labeled& labeled3()
{
    static const Labeled lb = [] {
        Labeled l;
        for (const auto& e : basis3()) {
            l.idx.push_back({e.idx[0], e.idx[1], e.idx[2]});
            l.sign.push_back(e.sign);
        }
        return l;
    }();
    return lb;
}

} // namespace

Eigen::MatrixXcd lift(const Eigen::MatrixXcd& a, int k)
{
    if (a.rows() != a.cols() || k < 1 || k > a.rows())
        throw EvansError("dimension", "lift needs a square matrix and 1 <= k <= n");
    return lift_labeled(a, lexicographic(static_cast<int>(a.rows()), k));
}

Mat10 lift2(const Mat5& a) { return lift_labeled(a, labeled2()); }

Mat10 lift3(const Mat5& a) { return lift_labeled(a, labeled3()); }

Wedge2 wedge2(const Vec5& u, const Vec5& v)
{
    Wedge2 w;
    const auto& b = basis2();
    for (int k = 0; k < 10; ++k) {
        const int i = b[k][0], j = b[k][1];
        w.c[k] = u[i] * v[j] - u[j] * v[i];
    }
    return w;
}

Wedge3 wedge3(const Vec5& u, const Vec5& v, const Vec5& w)
{
    Wedge3 out;
    const auto& b = basis3();
    for (int k = 0; k < 10; ++k) {
        const int i = b[k].idx[0], j = b[k].idx[1], l = b[k].idx[2];
        const cplx minor = u[i] * (v[j] * w[l] - v[l] * w[j])
                         - u[j] * (v[i] * w[l] - v[l] * w[i])
                         + u[l] * (v[i] * w[j] - v[j] * w[i]);
        out.c[k] = double(b[k].sign) * minor;
    }
    return out;
}

cplx pair_top(const Wedge2& w2, const Wedge3& w3)
{
    return (w2.c.array() * w3.c.array()).sum();
}

Vec5 unit(int i)
{
    Vec5 e = Vec5::Zero();
    e[i - 1] = 1.0;
    return e;
}

} // namespace evans
