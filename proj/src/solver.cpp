#include "rigpose/solver.hpp"

#include "rigpose/geometry.hpp"
#include "rigpose/random.hpp"

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <Eigen/QR>
#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <complex>
#include <map>

namespace rigpose {

namespace {

struct MonoTable {
    std::vector<Monomial<3>> monos;
    std::map<std::array<int, 3>, int> index;

    explicit MonoTable(int d) : monos(monomials_up_to<3>(d)) {
        for (size_t k = 0; k < monos.size(); ++k) index[monos[k].e] = static_cast<int>(k);
    }

    int at(const Monomial<3>& m) const { return index.at(m.e); }
};

Eigen::MatrixXd macaulay_matrix(const std::vector<TriPoly>& polys, const MonoTable& table,
                                int degree) {
    int n_rows = 0;
    std::vector<std::pair<const TriPoly*, Monomial<3>>> shifts;
    for (const auto& p : polys) {
        const int dp = p.degree();
        if (dp < 0) continue;
        for (const auto& sh : monomials_up_to<3>(degree - dp)) shifts.push_back({&p, sh});
    }
    n_rows = static_cast<int>(shifts.size());
    Eigen::MatrixXd A = Eigen::MatrixXd::Zero(n_rows, static_cast<int>(table.monos.size()));
    for (int r = 0; r < n_rows; ++r) {
        const auto& [p, sh] = shifts[r];
        const double scale = 1.0 / p->max_abs_coeff();
        for (const auto& [m, c] : p->terms()) A(r, table.at(m * sh)) = c * scale;
    }
    return A;
}

struct KernelResult {
    Eigen::MatrixXd kernel;  // (#monomials <= base degree) x corank
    int corank = 0;
    double gap = 0.0; // sigma_rank / sigma_{rank+1}
};

// Kernel of the ideal truncation at `degree`, optionally after intersecting
// the degree-(degree + k) row space with polynomials of degree <= degree.
// The intersection discards contributions supported at infinity, which is
// what makes bundle e1-only systems (a curve at infinity) solvable.
KernelResult truncation_kernel(const std::vector<TriPoly>& polys, int degree, int sat_rounds,
                               double rank_tol) {
    const int full_degree = degree + sat_rounds;
    const MonoTable table(full_degree);
    Eigen::MatrixXd A = macaulay_matrix(polys, table, full_degree);
    if (A.rows() == 0)
        throw SolveFailure("empty equation system");

    const MonoTable base(degree);
    const int n_lo = static_cast<int>(base.monos.size());
    Eigen::MatrixXd B;
    if (sat_rounds == 0) {
        B = A;
    } else {
        // Columns of degree > `degree` come after the low block because
        // monomials_up_to enumerates by ascending total degree.
        const int n_hi = static_cast<int>(table.monos.size()) - n_lo;
        Eigen::MatrixXd A_hi = A.rightCols(n_hi);
        Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(A_hi);
        const Eigen::MatrixXd R = qr.matrixR();
        int rank_hi = 0;
        const double tol_hi = rank_tol * std::abs(R(0, 0));
        for (int k = 0; k < std::min(A_hi.rows(), A_hi.cols()); ++k)
            if (std::abs(R(k, k)) > tol_hi) ++rank_hi;
        Eigen::MatrixXd Qfull = qr.householderQ();
        B = Qfull.rightCols(A.rows() - rank_hi).transpose() * A.leftCols(n_lo);
    }

    // Rank-revealing QR of B^T: the trailing Q columns span the kernel of B.
    // Falls back to an SVD when the diagonal of R does not show a clean gap.
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(B.transpose());
    const Eigen::MatrixXd& Rq = qr.matrixR();
    const int kmax = static_cast<int>(std::min(B.rows(), B.cols()));
    const double lead = std::abs(Rq(0, 0));
    if (lead == 0.0)
        throw SolveFailure("degenerate expansion matrix");
    int rank = 0;
    while (rank < kmax && std::abs(Rq(rank, rank)) > rank_tol * lead) ++rank;
    const double gap = (rank > 0 && rank < kmax && Rq(rank, rank) != 0.0)
                           ? std::abs(Rq(rank - 1, rank - 1) / Rq(rank, rank))
                           : std::numeric_limits<double>::infinity();
    KernelResult out;
    if (gap > 1e5) {
        out.corank = n_lo - rank;
        out.gap = gap;
        out.kernel = Eigen::MatrixXd(qr.householderQ()).rightCols(out.corank);
        return out;
    }
    Eigen::BDCSVD<Eigen::MatrixXd> svd(B, Eigen::ComputeFullV);
    const auto& sv = svd.singularValues();
    if (sv.size() == 0 || sv(0) == 0.0)
        throw SolveFailure("degenerate expansion matrix");
    rank = 0;
    while (rank < sv.size() && sv(rank) > rank_tol * sv(0)) ++rank;
    out.corank = n_lo - rank;
    out.gap = (rank > 0 && rank < sv.size() && sv(rank) > 0.0)
                  ? sv(rank - 1) / sv(rank)
                  : std::numeric_limits<double>::infinity();
    out.kernel = svd.matrixV().rightCols(out.corank);
    return out;
}

// Newton (Gauss-Newton) refinement on the full normalized system.
Eigen::Vector3d polish_root(const std::vector<TriPoly>& polys,
                            const std::vector<std::array<TriPoly, 3>>& grads,
                            Eigen::Vector3d q, int iters) {
    const int n = static_cast<int>(polys.size());
    Eigen::VectorXd F(n);
    Eigen::MatrixXd J(n, 3);
    for (int it = 0; it < iters; ++it) {
        for (int k = 0; k < n; ++k) {
            F(k) = polys[k].eval(q);
            for (int v = 0; v < 3; ++v) J(k, v) = grads[k][v].eval(q);
        }
        const Eigen::Vector3d dq = J.colPivHouseholderQr().solve(-F);
        if (!dq.allFinite() || dq.norm() > 1.0)
            break;
        q += dq;
        if (dq.norm() < 1e-15)
            break;
    }
    return q;
}

double system_residual(const std::vector<TriPoly>& polys, const Eigen::Vector3d& q) {
    double r = 0.0;
    for (const auto& p : polys) r = std::max(r, std::abs(p.eval(q)) / p.max_abs_coeff());
    return r;
}

bool has_intra_bundle(const EquationSystem& sys) {
    for (const auto& g : sys.groups)
        if (g.i == g.ip) return true;
    return false;
}

} // namespace

SolutionSet solve_polys(const std::vector<TriPoly>& polys, const SolverConfig& cfg) {
    if (polys.empty())
        throw SolveFailure("empty equation system");

    int degree = cfg.expansion_degree;
    int sat = cfg.saturation_rounds;
    KernelResult kr;
    for (int attempt = 0;; ++attempt) {
        kr = truncation_kernel(polys, degree, sat, cfg.rank_tol);
        const bool count_ok = cfg.expected_solutions == 0 || kr.corank == cfg.expected_solutions;
        if (kr.corank > 0 && kr.corank <= 120 && kr.gap > 1e4 && count_ok)
            break;
        if (attempt >= cfg.max_escalations) {
            if (kr.corank <= 0 || kr.corank > 120 || kr.gap <= 1e4)
                throw SolveFailure("expansion rank did not stabilize (corank " +
                                   std::to_string(kr.corank) + ")");
            break; // clean gap but unexpected count: accept what the data says
        }
        ++degree;
        sat = std::max(sat, 1);
    }

    const int s = kr.corank;
    const MonoTable base(degree);
    const Eigen::MatrixXd& K = kr.kernel;

    // Pick s well-conditioned monomial rows of degree < `degree` so that the
    // multiplication by a linear form stays inside the truncation.
    std::vector<int> low;
    for (size_t k = 0; k < base.monos.size(); ++k)
        if (base.monos[k].degree() <= degree - 1) low.push_back(static_cast<int>(k));
    Eigen::MatrixXd K_low(low.size(), s);
    for (size_t r = 0; r < low.size(); ++r) K_low.row(r) = K.row(low[r]);
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(K_low.transpose());
    if (qr.rank() < s)
        throw SolveFailure("kernel basis selection failed");
    std::vector<int> basis(s);
    for (int k = 0; k < s; ++k) basis[k] = low[qr.colsPermutation().indices()(k)];

    Rng rng(cfg.seed ^ 0x6A09E667F3BCC908ull);
    const Eigen::Vector3d f = rng.unit_vector();

    Eigen::MatrixXd K_B(s, s), K_fB(s, s);
    for (int r = 0; r < s; ++r) {
        const Monomial<3>& m = base.monos[basis[r]];
        K_B.row(r) = K.row(basis[r]);
        Eigen::RowVectorXd row = Eigen::RowVectorXd::Zero(s);
        for (int v = 0; v < 3; ++v) {
            Monomial<3> mv = m;
            mv.e[v] += 1;
            row += f(v) * K.row(base.at(mv));
        }
        K_fB.row(r) = row;
    }
    Eigen::FullPivLU<Eigen::MatrixXd> lu(K_B);
    if (!lu.isInvertible())
        throw SolveFailure("multiplication matrix construction failed");
    const Eigen::MatrixXd A_f = lu.solve(K_fB);

    Eigen::EigenSolver<Eigen::MatrixXd> eig(A_f);
    if (eig.info() != Eigen::Success)
        throw SolveFailure("eigendecomposition failed");

    const int i_one = base.at(Monomial<3>{});
    std::array<int, 3> i_var;
    for (int v = 0; v < 3; ++v) {
        Monomial<3> m;
        m.e[v] = 1;
        i_var[v] = base.at(m);
    }

    std::vector<TriPoly> normalized;
    normalized.reserve(polys.size());
    for (const auto& p : polys) normalized.push_back(p.scaled(1.0 / p.max_abs_coeff()));
    std::vector<std::array<TriPoly, 3>> grads;
    grads.reserve(normalized.size());
    for (const auto& p : normalized)
        grads.push_back({p.derivative(0), p.derivative(1), p.derivative(2)});

    SolutionSet out;
    out.complex_count = s;
    for (int j = 0; j < s; ++j) {
        const Eigen::VectorXcd w = eig.eigenvectors().col(j);
        const Eigen::VectorXcd v = K * w;
        const std::complex<double> denom = v(i_one);
        if (std::abs(denom) < 1e-12 * v.norm())
            continue; // candidate at infinity
        Eigen::Vector3cd qc;
        for (int k = 0; k < 3; ++k) qc(k) = v(i_var[k]) / denom;
        if (qc.imag().cwiseAbs().maxCoeff() > cfg.imag_tol)
            continue;
        Eigen::Vector3d q = qc.real();
        if (q.norm() > cfg.bound)
            continue;
        if (cfg.polish_iterations > 0)
            q = polish_root(normalized, grads, q, cfg.polish_iterations);
        if (q.norm() > cfg.bound)
            continue;
        const double res = system_residual(polys, q);
        if (res > cfg.residual_tol)
            continue;
        bool dup = false;
        for (const auto& r : out.roots)
            if ((r - q).norm() <= cfg.dedup_radius) {
                dup = true;
                break;
            }
        if (dup)
            continue;
        out.roots.push_back(q);
        out.residuals.push_back(res);
    }
    return out;
}

SolutionSet solve_system(const EquationSystem& sys, const SolverConfig& cfg) {
    if (sys.e2.empty() && has_intra_bundle(sys))
        throw InvalidProblem(
            "intra-camera system requires e2: e1 alone has a one-dimensional root family");
    std::vector<TriPoly> polys = sys.e1;
    polys.insert(polys.end(), sys.e2.begin(), sys.e2.end());
    return solve_polys(polys, cfg);
}

Eigen::Vector3d recover_translation(const PolyMatrix<3>& m, const Eigen::Vector3d& q) {
    const Eigen::MatrixXd Mq = m.eval(q);
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(Mq, Eigen::ComputeFullV);
    const Eigen::VectorXd v = svd.matrixV().col(Mq.cols() - 1);
    if (std::abs(v(3)) < 1e-10 * v.norm())
        throw TranslationAtInfinity("null direction has negligible last entry");
    return v.head<3>() / v(3);
}

std::vector<RigPose> assemble_poses(const EquationSystem& sys, const SolutionSet& sols) {
    std::vector<RigPose> poses;
    poses.reserve(sols.roots.size());
    for (const auto& q : sols.roots) {
        RigPose pose;
        pose.R = cayley_to_rotation(q);
        try {
            pose.t = recover_translation(sys.m, q);
        } catch (const TranslationAtInfinity&) {
            continue;
        }
        poses.push_back(pose);
    }
    return poses;
}

std::optional<int> certify_root_count(const std::vector<TriPoly>& polys, int degree,
                                      int saturation_rounds, double rank_tol, double min_gap) {
    try {
        // Saturated truncations at two consecutive degrees; both must agree.
        const int sat = std::max(saturation_rounds, 1);
        const KernelResult a = truncation_kernel(polys, degree, sat, rank_tol);
        const KernelResult b = truncation_kernel(polys, degree + 1, sat, rank_tol);
        if (a.corank == b.corank && a.corank > 0 && a.gap > min_gap && b.gap > min_gap)
            return a.corank;
    } catch (const Error&) {
    }
    return std::nullopt;
}

} // namespace rigpose
