#pragma once

#include "rigpose/core.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <map>
#include <vector>

namespace rigpose {

/// Monomial in N variables, stored as an exponent tuple.
template <int N>
struct Monomial {
    std::array<int, N> e{};

    int degree() const {
        int d = 0;
        for (int v : e) d += v;
        return d;
    }

    Monomial operator*(const Monomial& o) const {
        Monomial m;
        for (int k = 0; k < N; ++k) m.e[k] = e[k] + o.e[k];
        return m;
    }

    bool divisible_by(const Monomial& o) const {
        for (int k = 0; k < N; ++k)
            if (e[k] < o.e[k]) return false;
        return true;
    }

    Monomial divided_by(const Monomial& o) const {
        Monomial m;
        for (int k = 0; k < N; ++k) m.e[k] = e[k] - o.e[k];
        return m;
    }

    bool operator==(const Monomial& o) const { return e == o.e; }
};

/// Graded reverse lexicographic order, variables e[0] > e[1] > ... > e[N-1].
/// a > b iff deg a > deg b, or the degrees tie and the last nonzero entry
/// of a - b is negative.
template <int N>
bool grevlex_greater(const Monomial<N>& a, const Monomial<N>& b) {
    const int da = a.degree(), db = b.degree();
    if (da != db) return da > db;
    for (int k = N - 1; k >= 0; --k) {
        const int d = a.e[k] - b.e[k];
        if (d != 0) return d < 0;
    }
    return false;
}

template <int N>
struct GrevlexLess {
    bool operator()(const Monomial<N>& a, const Monomial<N>& b) const {
        return grevlex_greater<N>(b, a);
    }
};

/// Sparse polynomial in N variables with real coefficients. Terms are kept
/// sorted grevlex-descending with no stored zeros; coefficients below
/// 1e-14 of the largest magnitude are pruned after arithmetic.
template <int N>
class Poly {
  public:
    using Term = std::pair<Monomial<N>, double>;

    Poly() = default;

    static Poly constant(double c) {
        Poly p;
        if (c != 0.0) p.terms_.push_back({Monomial<N>{}, c});
        return p;
    }

    static Poly variable(int k, double c = 1.0) {
        Poly p;
        Monomial<N> m;
        m.e[k] = 1;
        p.terms_.push_back({m, c});
        return p;
    }

    static Poly from_terms(std::vector<Term> terms) {
        Poly p;
        std::map<Monomial<N>, double, GrevlexLess<N>> acc;
        for (const auto& [m, c] : terms) acc[m] += c;
        for (auto it = acc.rbegin(); it != acc.rend(); ++it)
            if (it->second != 0.0) p.terms_.push_back({it->first, it->second});
        p.prune();
        return p;
    }

    const std::vector<Term>& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }

    int degree() const {
        return terms_.empty() ? -1 : terms_.front().first.degree();
    }

    double max_abs_coeff() const {
        double m = 0.0;
        for (const auto& [mono, c] : terms_) m = std::max(m, std::abs(c));
        return m;
    }

    double coeff(const Monomial<N>& m) const {
        for (const auto& [mono, c] : terms_)
            if (mono == m) return c;
        return 0.0;
    }

    Poly operator+(const Poly& o) const { return combined(o, 1.0); }
    Poly operator-(const Poly& o) const { return combined(o, -1.0); }

    Poly operator*(const Poly& o) const {
        std::map<Monomial<N>, double, GrevlexLess<N>> acc;
        for (const auto& [ma, ca] : terms_)
            for (const auto& [mb, cb] : o.terms_) acc[ma * mb] += ca * cb;
        Poly r;
        for (auto it = acc.rbegin(); it != acc.rend(); ++it)
            if (it->second != 0.0) r.terms_.push_back({it->first, it->second});
        r.prune();
        return r;
    }

    Poly scaled(double s) const {
        Poly r = *this;
        for (auto& [m, c] : r.terms_) c *= s;
        return r;
    }

    /// Multiply in place by a single monomial (used for Macaulay shifts).
    Poly shifted(const Monomial<N>& m) const {
        Poly r = *this;
        for (auto& [mono, c] : r.terms_) mono = mono * m;
        return r;
    }

    double eval(const Eigen::Matrix<double, N, 1>& v) const {
        // Cache variable powers; degrees stay small (<= 8 in this project).
        int dmax = degree();
        if (dmax < 0) return 0.0;
        std::array<std::array<double, 16>, N> pw;
        for (int k = 0; k < N; ++k) {
            pw[k][0] = 1.0;
            for (int d = 1; d <= dmax; ++d) pw[k][d] = pw[k][d - 1] * v(k);
        }
        double sum = 0.0;
        for (const auto& [m, c] : terms_) {
            double term = c;
            for (int k = 0; k < N; ++k) term *= pw[k][m.e[k]];
            sum += term;
        }
        return sum;
    }

    Poly derivative(int var) const {
        Poly r;
        for (const auto& [m, c] : terms_) {
            if (m.e[var] == 0) continue;
            Monomial<N> mm = m;
            mm.e[var] -= 1;
            r.terms_.push_back({mm, c * m.e[var]});
        }
        // Dropping one variable's exponent preserves grevlex order of the
        // surviving terms, so no re-sort is needed.
        return r;
    }

    void prune(double rel_tol = 1e-14) {
        const double cut = rel_tol * max_abs_coeff();
        std::erase_if(terms_, [cut](const Term& t) { return std::abs(t.second) <= cut; });
    }

    const Term& leading() const { return terms_.front(); }

  private:
    Poly combined(const Poly& o, double sign) const {
        Poly r;
        r.terms_.reserve(terms_.size() + o.terms_.size());
        auto ia = terms_.begin(), ib = o.terms_.begin();
        while (ia != terms_.end() || ib != o.terms_.end()) {
            if (ib == o.terms_.end() ||
                (ia != terms_.end() && grevlex_greater<N>(ia->first, ib->first))) {
                r.terms_.push_back(*ia++);
            } else if (ia == terms_.end() || grevlex_greater<N>(ib->first, ia->first)) {
                r.terms_.push_back({ib->first, sign * ib->second});
                ++ib;
            } else {
                const double c = ia->second + sign * ib->second;
                if (c != 0.0) r.terms_.push_back({ia->first, c});
                ++ia;
                ++ib;
            }
        }
        r.prune();
        return r;
    }

    std::vector<Term> terms_;
};

using TriPoly = Poly<3>;
using QuatPoly = Poly<4>;

/// Rectangular matrix of polynomials.
template <int N>
class PolyMatrix {
  public:
    PolyMatrix() = default;
    PolyMatrix(int rows, int cols) : rows_(rows), cols_(cols), entries_(rows * cols) {}

    int rows() const { return rows_; }
    int cols() const { return cols_; }
    Poly<N>& at(int r, int c) { return entries_[r * cols_ + c]; }
    const Poly<N>& at(int r, int c) const { return entries_[r * cols_ + c]; }

    PolyMatrix submatrix(const std::vector<int>& rows, const std::vector<int>& cols) const {
        PolyMatrix m(static_cast<int>(rows.size()), static_cast<int>(cols.size()));
        for (size_t r = 0; r < rows.size(); ++r)
            for (size_t c = 0; c < cols.size(); ++c) m.at(r, c) = at(rows[r], cols[c]);
        return m;
    }

    Eigen::MatrixXd eval(const Eigen::Matrix<double, N, 1>& v) const {
        Eigen::MatrixXd m(rows_, cols_);
        for (int r = 0; r < rows_; ++r)
            for (int c = 0; c < cols_; ++c) m(r, c) = at(r, c).eval(v);
        return m;
    }

  private:
    int rows_ = 0, cols_ = 0;
    std::vector<Poly<N>> entries_;
};

/// Cofactor-expansion determinant. Throws NotSquare for non-square input.
template <int N>
Poly<N> det_poly(const PolyMatrix<N>& m) {
    if (m.rows() != m.cols())
        throw NotSquare("det_poly: matrix is not square");
    const int n = m.rows();
    if (n == 1) return m.at(0, 0);
    if (n == 2) return m.at(0, 0) * m.at(1, 1) - m.at(0, 1) * m.at(1, 0);
    Poly<N> det;
    std::vector<int> cols(n - 1);
    for (int c = 0; c < n; ++c) {
        int k = 0;
        for (int cc = 0; cc < n; ++cc)
            if (cc != c) cols[k++] = cc;
        std::vector<int> rows(n - 1);
        for (int r = 1; r < n; ++r) rows[r - 1] = r;
        Poly<N> cof = m.at(0, c) * det_poly(m.submatrix(rows, cols));
        det = (c % 2 == 0) ? det + cof : det - cof;
    }
    return det;
}

/// Long division of p by d in grevlex order, requiring an exact quotient.
/// Throws NotDivisible when the remainder exceeds rel_tol relative to the
/// largest coefficient of p.
template <int N>
Poly<N> exact_divide(const Poly<N>& p, const Poly<N>& d, double rel_tol = 1e-9) {
    if (d.is_zero())
        throw NotDivisible("exact_divide: zero divisor");
    if (p.is_zero())
        return {};
    const double scale = p.max_abs_coeff();
    const auto& dlead = d.leading();
    Poly<N> rest = p;
    std::vector<typename Poly<N>::Term> quot;
    double rem_max = 0.0;
    while (!rest.is_zero()) {
        const auto& [lm, lc] = rest.leading();
        if (lm.divisible_by(dlead.first)) {
            const Monomial<N> qm = lm.divided_by(dlead.first);
            const double qc = lc / dlead.second;
            quot.push_back({qm, qc});
            rest = rest - d.shifted(qm).scaled(qc);
        } else {
            rem_max = std::max(rem_max, std::abs(lc));
            rest = rest - Poly<N>::from_terms({{lm, lc}});
        }
    }
    if (rem_max > rel_tol * scale)
        throw NotDivisible("exact_divide: remainder " + std::to_string(rem_max / scale) +
                           " (relative) exceeds tolerance");
    return Poly<N>::from_terms(std::move(quot));
}

/// All monomials of total degree <= d, ordered by ascending degree
/// (constant first, then degree blocks in a fixed deterministic order).
template <int N>
std::vector<Monomial<N>> monomials_up_to(int d) {
    std::vector<Monomial<N>> out;
    Monomial<N> m;
    auto rec = [&](auto&& self, int k, int rem) -> void {
        if (k == N - 1) {
            m.e[k] = rem;
            out.push_back(m);
            return;
        }
        for (int e = rem; e >= 0; --e) {
            m.e[k] = e;
            self(self, k + 1, rem - e);
        }
    };
    for (int td = 0; td <= d; ++td) rec(rec, 0, td);
    return out;
}

} // namespace rigpose
