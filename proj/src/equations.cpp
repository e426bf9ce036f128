#include "rigpose/equations.hpp"

#include <Eigen/Geometry>

#include <array>
#include <cmath>
#include <map>

namespace rigpose {

namespace {

template <int N>
using Mono = Monomial<N>;

// Rotation numerator for the homogeneous quaternion (w, x, y, z):
//   (w^2 - v.v) I + 2 v v^T + 2 w [v]x.
// The Cayley form is the same matrix at w = 1.
template <int N>
PolyMatrix<N> rotation_numerator(int wvar, int xvar, int yvar, int zvar) {
    auto var = [](int k) {
        Mono<N> m;
        m.e[k] = 1;
        return m;
    };
    auto mono = [&](int a, int b) { return var(a) * var(b); };
    const Mono<N> ww = mono(wvar, wvar), xx = mono(xvar, xvar), yy = mono(yvar, yvar),
                  zz = mono(zvar, zvar), xy = mono(xvar, yvar), xz = mono(xvar, zvar),
                  yz = mono(yvar, zvar), wx = mono(wvar, xvar), wy = mono(wvar, yvar),
                  wz = mono(wvar, zvar);
    using P = Poly<N>;
    PolyMatrix<N> R(3, 3);
    R.at(0, 0) = P::from_terms({{ww, 1}, {xx, 1}, {yy, -1}, {zz, -1}});
    R.at(0, 1) = P::from_terms({{xy, 2}, {wz, -2}});
    R.at(0, 2) = P::from_terms({{xz, 2}, {wy, 2}});
    R.at(1, 0) = P::from_terms({{xy, 2}, {wz, 2}});
    R.at(1, 1) = P::from_terms({{ww, 1}, {xx, -1}, {yy, 1}, {zz, -1}});
    R.at(1, 2) = P::from_terms({{yz, 2}, {wx, -2}});
    R.at(2, 0) = P::from_terms({{xz, 2}, {wy, -2}});
    R.at(2, 1) = P::from_terms({{yz, 2}, {wx, 2}});
    R.at(2, 2) = P::from_terms({{ww, 1}, {xx, -1}, {yy, -1}, {zz, 1}});
    return R;
}

// For the Cayley case the "w" variable is the constant 1; reuse the
// quaternion pattern with the w monomial mapped to 1.
PolyMatrix<3> make_cayley_numerator() {
    const PolyMatrix<4>& Q = rotation_numerator<4>(0, 1, 2, 3);
    PolyMatrix<3> R(3, 3);
    for (int r = 0; r < 3; ++r)
        for (int c = 0; c < 3; ++c) {
            std::vector<TriPoly::Term> terms;
            for (const auto& [m, coef] : Q.at(r, c).terms()) {
                Mono<3> mm;
                mm.e = {m.e[1], m.e[2], m.e[3]}; // drop the w exponent
                terms.push_back({mm, coef});
            }
            R.at(r, c) = TriPoly::from_terms(terms);
        }
    return R;
}

template <int N>
std::array<Poly<N>, 3> matvec(const PolyMatrix<N>& m, const Eigen::Vector3d& v) {
    std::array<Poly<N>, 3> out;
    for (int r = 0; r < 3; ++r) {
        out[r] = m.at(r, 0).scaled(v.x()) + m.at(r, 1).scaled(v.y()) + m.at(r, 2).scaled(v.z());
    }
    return out;
}

template <int N>
std::array<Poly<N>, 3> cross_with_const(const std::array<Poly<N>, 3>& c,
                                        const Eigen::Vector3d& a) {
    return {c[1].scaled(a.z()) - c[2].scaled(a.y()),
            c[2].scaled(a.x()) - c[0].scaled(a.z()),
            c[0].scaled(a.y()) - c[1].scaled(a.x())};
}

// Row of M for one correspondence: with a = Qip*xp, b = Qi*x, c = Rnum*b,
// the translation coefficients are w = c x a and the constant column is
// a^T Rnum (si x b) - w . sip.
template <int N>
void fill_row(PolyMatrix<N>& M, int row, const PolyMatrix<N>& Rnum,
              const RayCorrespondence& pc, const std::vector<CameraExtrinsic>& rig) {
    const CameraExtrinsic& ci = rig[pc.i];
    const CameraExtrinsic& cip = rig[pc.ip];
    const Eigen::Vector3d a = cip.Q * pc.xp;
    const Eigen::Vector3d b = ci.Q * pc.x;
    const auto c = matvec(Rnum, b);
    const auto w = cross_with_const(c, a);
    const auto rsb = matvec(Rnum, Eigen::Vector3d(ci.s.cross(b)));
    Poly<N> col4 = rsb[0].scaled(a.x()) + rsb[1].scaled(a.y()) + rsb[2].scaled(a.z());
    col4 = col4 - (w[0].scaled(cip.s.x()) + w[1].scaled(cip.s.y()) + w[2].scaled(cip.s.z()));
    for (int k = 0; k < 3; ++k) M.at(row, k) = w[k];
    M.at(row, 3) = col4;
}

template <int N>
PolyMatrix<N> build_M_impl(const SixPointProblem& problem, const PolyMatrix<N>& Rnum) {
    problem.validate();
    PolyMatrix<N> M(6, 4);
    for (int k = 0; k < 6; ++k) fill_row(M, k, Rnum, problem.pcs[k], problem.rig);
    return M;
}

// A 4x4 minor is structurally zero when all four rows come from one ray
// bundle (its fourth column is then a combination of the first three).
template <int N>
bool is_structural_zero(const Poly<N>& minor, double scale) {
    return minor.is_zero() || minor.max_abs_coeff() < 1e-10 * scale;
}

template <int N>
double row_scale(const PolyMatrix<N>& M, const std::vector<int>& rows) {
    double s = 1.0;
    for (int r : rows) {
        double m = 0.0;
        for (int c = 0; c < M.cols(); ++c)
            m = std::max(m, M.at(r, c).max_abs_coeff());
        s *= m;
    }
    return s;
}

template <typename PolyT, int N>
void build_minor_sets(const PolyMatrix<N>& M, const std::vector<RayBundleGroup>& groups,
                      const Poly<N>* divisor, std::vector<PolyT>* e1, std::vector<PolyT>* e2) {
    const std::vector<int> all_cols = {0, 1, 2, 3};
    for (int a = 0; a < 6; ++a)
        for (int b = a + 1; b < 6; ++b)
            for (int c = b + 1; c < 6; ++c)
                for (int d = c + 1; d < 6; ++d) {
                    const std::vector<int> rows = {a, b, c, d};
                    Poly<N> minor = det_poly(M.submatrix(rows, all_cols));
                    if (is_structural_zero(minor, row_scale(M, rows)))
                        continue;
                    e1->push_back(divisor ? exact_divide(minor, *divisor) : minor);
                }
    const std::vector<int> t_cols = {0, 1, 2};
    for (const auto& g : groups) {
        const int n = static_cast<int>(g.rows.size());
        for (int a = 0; a < n; ++a)
            for (int b = a + 1; b < n; ++b)
                for (int c = b + 1; c < n; ++c) {
                    const std::vector<int> rows = {g.rows[a], g.rows[b], g.rows[c]};
                    Poly<N> minor = det_poly(M.submatrix(rows, t_cols));
                    if (is_structural_zero(minor, row_scale(M, rows)))
                        continue;
                    e2->push_back(divisor ? exact_divide(minor, *divisor) : minor);
                }
    }
}

} // namespace

void SixPointProblem::validate() const {
    if (pcs.size() != 6)
        throw InvalidProblem("expected 6 correspondences, got " + std::to_string(pcs.size()));
    const int n = static_cast<int>(rig.size());
    for (const auto& pc : pcs) {
        if (pc.i < 0 || pc.i >= n || pc.ip < 0 || pc.ip >= n)
            throw InvalidProblem("correspondence camera index out of range");
        if (pc.x.norm() == 0.0 || pc.xp.norm() == 0.0)
            throw InvalidProblem("zero-length bearing");
    }
}

const PolyMatrix<3>& cayley_numerator() {
    static const PolyMatrix<3> R = make_cayley_numerator();
    return R;
}

const PolyMatrix<4>& quaternion_numerator() {
    static const PolyMatrix<4> R = rotation_numerator<4>(0, 1, 2, 3);
    return R;
}

TriPoly cayley_norm_poly() {
    Mono<3> one{}, xx{{2, 0, 0}}, yy{{0, 2, 0}}, zz{{0, 0, 2}};
    return TriPoly::from_terms({{xx, 1}, {yy, 1}, {zz, 1}, {one, 1}});
}

PolyMatrix<3> build_M(const SixPointProblem& problem) {
    return build_M_impl(problem, cayley_numerator());
}

PolyMatrix<4> build_M_quat(const SixPointProblem& problem) {
    return build_M_impl(problem, quaternion_numerator());
}

std::vector<RayBundleGroup> detect_ray_bundle_groups(const SixPointProblem& problem) {
    std::map<std::pair<int, int>, std::vector<int>> buckets;
    for (size_t k = 0; k < problem.pcs.size(); ++k)
        buckets[{problem.pcs[k].i, problem.pcs[k].ip}].push_back(static_cast<int>(k));
    std::vector<RayBundleGroup> groups;
    for (const auto& [pair, rows] : buckets)
        if (rows.size() >= 3)
            groups.push_back({pair.first, pair.second, rows});
    return groups;
}

EquationSystem build_equations(const SixPointProblem& problem) {
    EquationSystem sys;
    sys.m = build_M(problem);
    sys.groups = detect_ray_bundle_groups(problem);
    const TriPoly divisor = cayley_norm_poly();
    build_minor_sets(sys.m, sys.groups, &divisor, &sys.e1, &sys.e2);
    return sys;
}

QuatEquationSystem build_equations_quat(const SixPointProblem& problem) {
    QuatEquationSystem sys;
    sys.m = build_M_quat(problem);
    const auto groups = detect_ray_bundle_groups(problem);
    build_minor_sets<QuatPoly>(sys.m, groups, static_cast<const QuatPoly*>(nullptr), &sys.e1,
                               &sys.e2);
    return sys;
}

} // namespace rigpose
