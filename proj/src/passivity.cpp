#include "passnode/passivity.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>

#include "passnode/linalg.hpp"

namespace passnode {

namespace {

Mat block2(const Mat& a, const Mat& b, const Mat& c, const Mat& d) {
    Mat out(a.rows() + c.rows(), a.cols() + b.cols());
    out << a, b, c, d;
    return out;
}

FormCheck evaluate_form(const Mat& form, std::optional<cplx> s) {
    FormCheck fc;
    fc.s = s;
    fc.min_eigenvalue = linalg::min_eigen(form).value;
    fc.passive = linalg::is_psd(form, tolerances().psd);
    return fc;
}

std::vector<cplx> collect_points(const StateSpaceNode& node, std::span<const cplx> extra) {
    std::vector<cplx> pts = default_test_points(node);
    for (const cplx& s : extra) {
        if (!linalg::in_resolvent_set(node.A(), s)) {
            throw Error(ErrorCode::SingularResolvent, "test point lies in the spectrum of A");
        }
        if (std::find(pts.begin(), pts.end(), s) == pts.end()) pts.push_back(s);
    }
    return pts;
}

PassivityCertificate certify(PassivityKind kind, const Mat& primary, std::vector<cplx> points,
                             const std::function<Mat(cplx)>& at_point) {
    PassivityCertificate cert;
    cert.kind = kind;
    cert.test_points = std::move(points);
    const linalg::MinEigen me = linalg::min_eigen(primary);
    cert.min_eigenvalue = me.value;
    const bool passive = linalg::is_psd(primary, tolerances().psd);
    cert.verdict = passive ? Verdict::Passive : Verdict::NotPassive;
    if (!passive) cert.witness = me.vector;
    cert.checks.push_back(evaluate_form(primary, std::nullopt));
    for (const cplx& s : cert.test_points) cert.checks.push_back(evaluate_form(at_point(s), s));
    return cert;
}

void require_self_adjoint(const Mat& E, Eigen::Index m) {
    if (E.rows() != m || E.cols() != m) throw Error(ErrorCode::DimensionMismatch, "E must be m x m");
    if (linalg::skew_defect(E) > tolerances().structural * (1.0 + linalg::norm2(E))) {
        throw Error(ErrorCode::NotSelfAdjoint, "E must be self-adjoint");
    }
}

bool colocated(const Realization& o) {
    if (o.C.rows() != o.B.cols()) return false;
    const double scale = 1.0 + linalg::norm2(o.B) + linalg::norm2(o.C);
    return linalg::norm2(o.C - o.B.adjoint()) <= tolerances().structural * scale;
}

}  // namespace

bool PassivityCertificate::consistent() const {
    return std::all_of(checks.begin(), checks.end(),
                       [&](const FormCheck& c) { return c.passive == passive(); });
}

std::vector<cplx> default_test_points(const StateSpaceNode& node) {
    std::vector<cplx> pts;
    for (const cplx s : {cplx(1, 0), cplx(2, 1), cplx(2, -1), cplx(10, 0)}) {
        if (linalg::in_resolvent_set(node.A(), s)) pts.push_back(s);
    }
    return pts;
}

Mat impedance_block_form(const Realization& o) {
    return block2(-(o.A + o.A.adjoint()), o.C.adjoint() - o.B, o.C - o.B.adjoint(), o.D + o.D.adjoint());
}

Mat scattering_block_form(const Realization& o) {
    const Eigen::Index m = o.B.cols();
    return block2(-(o.A + o.A.adjoint()) - o.C.adjoint() * o.C, -o.B - o.C.adjoint() * o.D,
                  -o.B.adjoint() - o.D.adjoint() * o.C, Mat::Identity(m, m) - o.D.adjoint() * o.D);
}

namespace {

struct ResolventTerms {
    Mat lhs;  // left-hand block common to both inequalities
    Mat G;
};

ResolventTerms resolvent_terms(const Realization& o, cplx s) {
    const Mat R = linalg::resolvent_solve(o.A, s, o.B);
    Mat sIpAh = o.A.adjoint();
    sIpAh.diagonal().array() += s;
    Mat conj_sIpA = o.A;
    conj_sIpA.diagonal().array() += std::conj(s);
    ResolventTerms t;
    t.lhs = block2(o.A + o.A.adjoint(), sIpAh * R, R.adjoint() * conj_sIpA,
                   2.0 * s.real() * R.adjoint() * R);
    t.G = o.C * R + o.D;
    return t;
}

}  // namespace

Mat impedance_resolvent_form(const Realization& o, cplx s) {
    const ResolventTerms t = resolvent_terms(o, s);
    const Eigen::Index n = o.A.rows();
    const Mat rhs = block2(Mat::Zero(n, n), o.C.adjoint(), o.C, t.G + t.G.adjoint());
    return rhs - t.lhs;
}

Mat scattering_resolvent_form(const Realization& o, cplx s) {
    const ResolventTerms t = resolvent_terms(o, s);
    const Eigen::Index n = o.A.rows();
    const Eigen::Index m = o.B.cols();
    const Mat output = block2(o.C.adjoint() * o.C, o.C.adjoint() * t.G, t.G.adjoint() * o.C,
                              t.G.adjoint() * t.G);
    const Mat rhs = block2(Mat::Zero(n, n), Mat::Zero(n, m), Mat::Zero(m, n), Mat::Identity(m, m));
    return rhs - t.lhs - output;
}

PassivityCertificate check_impedance(const StateSpaceNode& node, std::span<const cplx> extra_points) {
    if (!node.square()) throw Error(ErrorCode::NotSquare, "impedance passivity needs p == m");
    const Realization& o = node.orthonormal();
    return certify(PassivityKind::Impedance, impedance_block_form(o), collect_points(node, extra_points),
                   [&](cplx s) { return impedance_resolvent_form(o, s); });
}

PassivityCertificate check_scattering(const StateSpaceNode& node, std::span<const cplx> extra_points) {
    const Realization& o = node.orthonormal();
    return certify(PassivityKind::Scattering, scattering_block_form(o), collect_points(node, extra_points),
                   [&](cplx s) { return scattering_resolvent_form(o, s); });
}

PassivityCertificate check_impedance_reciprocal(const StateSpaceNode& node, const Mat& E, double omega) {
    if (!node.square()) throw Error(ErrorCode::NotSquare, "impedance passivity needs p == m");
    require_self_adjoint(E, node.m());
    const Realization& o = node.orthonormal();
    const cplx iw(0.0, omega);
    Mat a_w = o.A;
    a_w.diagonal().array() -= iw;
    const Mat inv = linalg::checked_inverse(a_w, ErrorCode::OmegaInSpectrum);
    // G(iω) = C (iωI - A)^{-1} B + D = -C A_ω^{-1} B + D
    const Mat G = -o.C * inv * o.B + o.D;
    const Mat off = inv * o.B + inv.adjoint() * o.C.adjoint();
    const Mat form = block2(-(inv + inv.adjoint()), off, off.adjoint(), 2.0 * E + G + G.adjoint());

    PassivityCertificate cert;
    cert.kind = PassivityKind::Impedance;
    cert.test_points = {iw};
    const linalg::MinEigen me = linalg::min_eigen(form);
    cert.min_eigenvalue = me.value;
    const bool passive = linalg::is_psd(form, tolerances().psd);
    cert.verdict = passive ? Verdict::Passive : Verdict::NotPassive;
    if (!passive) cert.witness = me.vector;
    cert.checks.push_back(evaluate_form(form, iw));
    return cert;
}

double colocation_residual(const StateSpaceNode& node, double omega) {
    const Realization& o = node.orthonormal();
    const cplx iw(0.0, omega);
    const Mat lhs = linalg::resolvent_solve_left(o.B.adjoint(), -o.A.adjoint(), iw, ErrorCode::OmegaInSpectrum);
    const Mat rhs = linalg::resolvent_solve_left(o.C, o.A, iw, ErrorCode::OmegaInSpectrum);
    if (lhs.rows() != rhs.rows()) throw Error(ErrorCode::NotSquare, "colocation needs p == m");
    return linalg::norm2(lhs - rhs) / (1.0 + linalg::norm2(lhs) + linalg::norm2(rhs));
}

Mat minimal_E_colocated_at(const StateSpaceNode& node, double omega) {
    if (!node.square()) throw Error(ErrorCode::NotSquare, "impedance passivity needs p == m");
    if (!generates_contraction(node)) {
        throw Error(ErrorCode::NotContraction, "A must generate a contraction semigroup");
    }
    const double residual = colocation_residual(node, omega);
    if (residual > tolerances().structural * 100.0) {
        throw Error(ErrorCode::ASSViolated,
                    "B*(iwI + A*)^{-1} != C(iwI - A)^{-1}, relative residual " + std::to_string(residual));
    }
    const Mat G = eval_transfer(node, cplx(0.0, omega));
    return -0.5 * (G + G.adjoint());
}

Mat minimal_E_esad(const StateSpaceNode& node, cplx s) {
    const Realization& o = node.orthonormal();
    if (!colocated(o)) throw Error(ErrorCode::NotColocated, "ESAD formula needs C = B*");
    const Mat Q = -(o.A + o.A.adjoint());
    if (!linalg::is_psd(Q, tolerances().psd)) {
        throw Error(ErrorCode::NotESAD, "Q = -(A + A*) is not positive semidefinite");
    }
    const Mat R = linalg::resolvent_solve(o.A, s, o.B);
    const Mat G = o.C * R + o.D;
    Mat middle = Q;
    middle.diagonal().array() += 2.0 * s.real();
    const Mat E = -0.5 * (G + G.adjoint()) + 0.5 * R.adjoint() * middle * R;
    return linalg::hermitian_part(E);
}

Mat minimal_E_selfadjoint(const StateSpaceNode& node, cplx s) {
    if (!(s.real() > 0.0)) throw Error(ErrorCode::InvalidArgument, "s must lie in the open right half-plane");
    const Realization& o = node.orthonormal();
    const double scale = 1.0 + linalg::norm2(o.A);
    if (linalg::skew_defect(o.A) > tolerances().structural * scale ||
        !linalg::is_psd(-linalg::hermitian_part(o.A), tolerances().psd)) {
        throw Error(ErrorCode::NotSelfAdjointDissipative, "A must satisfy A = A* <= 0");
    }
    if (!colocated(o)) throw Error(ErrorCode::NotColocated, "formula needs C = B*");
    const Mat R = linalg::resolvent_solve(o.A, s, o.B);
    const Mat G = o.C * R + o.D;
    Mat middle = -linalg::hermitian_part(o.A);
    middle.diagonal().array() += s.real();
    const Mat E = -0.5 * (G + G.adjoint()) + R.adjoint() * middle * R;
    return linalg::hermitian_part(E);
}

PositivePart positive_part(const Mat& E) {
    if (E.rows() != E.cols()) throw Error(ErrorCode::DimensionMismatch, "E must be square");
    if (linalg::skew_defect(E) > tolerances().structural * (1.0 + linalg::norm2(E))) {
        throw Error(ErrorCode::NotSelfAdjoint, "E must be self-adjoint");
    }
    PositivePart out;
    const Eigen::Index m = E.rows();
    if (m == 0) {
        out.E_plus = Mat(0, 0);
        out.kappa0 = std::numeric_limits<double>::infinity();
        return out;
    }
    Eigen::SelfAdjointEigenSolver<Mat> es(linalg::hermitian_part(E));
    Eigen::VectorXd lam = es.eigenvalues();
    // Round-off around zero must not produce a spurious positive part.
    const double floor = 1e-13 * std::max(1.0, lam.cwiseAbs().maxCoeff());
    for (Eigen::Index i = 0; i < m; ++i) lam(i) = lam(i) > floor ? lam(i) : 0.0;
    const Mat V = es.eigenvectors();
    out.E_plus = V * lam.cast<cplx>().asDiagonal() * V.adjoint();
    out.c = lam.maxCoeff();
    out.kappa0 = out.c > 0.0 ? 1.0 / out.c : std::numeric_limits<double>::infinity();
    return out;
}

PositiveRealScan positive_real_scan(const StateSpaceNode& node, std::span<const cplx> grid) {
    if (!node.square()) throw Error(ErrorCode::NotSquare, "positive-real scan needs p == m");
    PositiveRealScan scan;
    scan.min_eigenvalue = std::numeric_limits<double>::infinity();
    for (const cplx& s : grid) {
        if (!(s.real() > 0.0)) throw Error(ErrorCode::InvalidArgument, "grid point outside the right half-plane");
        const Mat G = node.C() * linalg::resolvent_solve(node.A(), s, node.B(), ErrorCode::GridPointInSpectrum) +
                      node.D();
        const double v = linalg::min_eigen(G + G.adjoint()).value;
        if (v < scan.min_eigenvalue) {
            scan.min_eigenvalue = v;
            scan.argmin = s;
        }
        ++scan.points;
    }
    return scan;
}

std::vector<cplx> right_half_plane_grid(std::size_t count) {
    std::vector<cplx> grid;
    if (count == 0) return grid;
    const auto nr = static_cast<std::size_t>(std::ceil(std::sqrt(static_cast<double>(count))));
    const std::size_t ni = (count + nr - 1) / nr;
    for (std::size_t i = 0; i < nr && grid.size() < count; ++i) {
        const double re = nr == 1 ? 1.0 : std::pow(10.0, -2.0 + 4.0 * static_cast<double>(i) / (nr - 1));
        for (std::size_t j = 0; j < ni && grid.size() < count; ++j) {
            const double im = ni == 1 ? 0.0 : -100.0 + 200.0 * static_cast<double>(j) / (ni - 1);
            grid.emplace_back(re, im);
        }
    }
    return grid;
}

std::string_view to_string(PassivityKind kind) {
    return kind == PassivityKind::Impedance ? "impedance" : "scattering";
}

std::string_view to_string(Verdict verdict) {
    return verdict == Verdict::Passive ? "Passive" : "NotPassive";
}

}  // namespace passnode
