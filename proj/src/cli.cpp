#include "passnode/cli.hpp"

#include <CLI11.hpp>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <ostream>

#include "passnode/io.hpp"
#include "passnode/linalg.hpp"

namespace passnode {

namespace {

constexpr int kPositive = 0;
constexpr int kError = 1;
constexpr int kNegative = 2;

struct Options {
    std::string input;
    std::string kind = "impedance";
    std::optional<double> kappa;
    std::string e_matrix;
    std::optional<double> omega;
    double alpha_re = 1.0;
    double alpha_im = 0.0;
    std::optional<double> k;
    int grid = 0;
    double t_final = 10.0;
    int steps = 0;
    std::string input_signal = "sine";
    std::string initial;
    std::string csv;
    std::optional<int> n_modes;
    std::optional<double> rho_a;
    std::optional<double> ei;
    std::optional<double> ebar_i;
    std::string out;
};

PassivityKind parse_kind(const std::string& s) {
    if (s == "impedance") return PassivityKind::Impedance;
    if (s == "scattering") return PassivityKind::Scattering;
    throw Error(ErrorCode::InvalidArgument, "--kind must be impedance or scattering");
}

StateSpaceNode load_node(const Options& o) {
    if (o.input.empty()) throw Error(ErrorCode::InvalidArgument, "an input file is required");
    return io::node_from_json(io::load_json_file(o.input));
}

std::optional<Mat> load_e(const Options& o) {
    if (o.e_matrix.empty()) return std::nullopt;
    const io::Json j = io::load_json_file(o.e_matrix);
    return io::matrix_from_json(j.is_object() && j.contains("E") ? j["E"] : j);
}

Mat e_or_zero(const Options& o, const StateSpaceNode& node) {
    auto e = load_e(o);
    return e ? *e : Mat(Mat::Zero(node.m(), node.m()));
}

struct Outcome {
    io::Json report;
    int status = kPositive;
};

Outcome verb_check(const Options& o, std::ostream& err) {
    const StateSpaceNode node = load_node(o);
    const auto E = load_e(o);
    const StateSpaceNode sys = E ? shift_feedthrough(node, *E) : node;
    const PassivityKind kind = parse_kind(o.kind);
    const PassivityCertificate cert = kind == PassivityKind::Impedance ? check_impedance(sys) : check_scattering(sys);
    Outcome res{io::to_json(cert), cert.passive() ? kPositive : kNegative};
    if (o.omega && kind == PassivityKind::Impedance) {
        const Mat e = E ? *E : Mat(Mat::Zero(node.m(), node.m()));
        res.report["reciprocal"] = io::to_json(check_impedance_reciprocal(node, e, *o.omega));
    }
    if (o.grid > 0 && sys.square()) {
        const PositiveRealScan scan = positive_real_scan(sys, right_half_plane_grid(static_cast<std::size_t>(o.grid)));
        res.report["positive_real_scan"] = {{"min_eigenvalue", scan.min_eigenvalue},
                                            {"argmin", io::to_json(scan.argmin)},
                                            {"points", scan.points}};
    }
    err << to_string(kind) << " passivity: " << to_string(cert.verdict) << " (min eigenvalue "
        << cert.min_eigenvalue << ")\n";
    return res;
}

Outcome verb_minimal_e(const Options& o, std::ostream& err) {
    if (o.input.empty()) throw Error(ErrorCode::InvalidArgument, "an input file is required");
    const io::Json j = io::load_json_file(o.input);
    std::optional<StateSpaceNode> node;
    Mat E;
    std::string method;
    if (j.is_object() && j.contains("A0")) {
        const SecondOrderPlant plant = io::plant_from_json(j);
        if (plant.C1) {
            ShiftedNode s = build_two_channel(plant);
            node = s.node;
            E = s.E_min;
            method = "two_channel";
        } else if (plant.B0) {
            ShiftedNode s = build_noncolocated(plant);
            node = s.node;
            E = s.E_min;
            method = "noncolocated";
        } else {
            node = build_colocated(plant);
            E = Mat::Zero(node->m(), node->m());
            method = "colocated";
        }
    } else {
        node = io::node_from_json(j);
        if (o.omega) {
            E = minimal_E_colocated_at(*node, *o.omega);
            method = "colocated_at_omega";
        } else {
            E = minimal_E_esad(*node);
            method = "esad";
        }
    }
    const PassivityCertificate cert = check_impedance(shift_feedthrough(*node, E));
    const PositivePart pp = positive_part(E);
    Outcome res;
    res.report = {{"E", io::to_json(E)},
                  {"method", method},
                  {"c", pp.c},
                  {"kappa0", std::isinf(pp.kappa0) ? io::Json("inf") : io::Json(pp.kappa0)},
                  {"node", io::to_json(*node)},
                  {"certificate", io::to_json(cert)}};
    res.status = cert.passive() ? kPositive : kNegative;
    err << "minimal E (" << method << "), shifted node " << to_string(cert.verdict) << "\n";
    return res;
}

Outcome verb_cayley(const Options& o, std::ostream& err) {
    const StateSpaceNode node = load_node(o);
    const DiscreteSystem disc = internal_cayley(node, cplx(o.alpha_re, o.alpha_im));
    const PassivityKind kind = parse_kind(o.kind);
    if (kind == PassivityKind::Impedance && !node.square()) {
        throw Error(ErrorCode::NotSquare, "impedance passivity needs p == m");
    }
    const PassivityCertificate cert = check_discrete_passivity(disc, kind);
    Outcome res{{{"discrete", io::to_json(disc)}, {"certificate", io::to_json(cert)}},
                cert.passive() ? kPositive : kNegative};
    err << "discrete " << to_string(kind) << " passivity: " << to_string(cert.verdict) << "\n";
    return res;
}

Outcome verb_feedback(const Options& o, std::ostream& err) {
    const StateSpaceNode node = load_node(o);
    if (o.k) {
        const StateSpaceNode s = diagonal_transform(node, *o.k);
        const PassivityCertificate cert = check_scattering(s);
        err << "diagonal transform k=" << *o.k << ": scattering " << to_string(cert.verdict) << "\n";
        return {{{"k", *o.k}, {"node", io::to_json(s)}, {"certificate", io::to_json(cert)}},
                cert.passive() ? kPositive : kNegative};
    }
    if (!o.kappa) throw Error(ErrorCode::InvalidArgument, "--kappa or --k is required");
    const FeedbackSynthesis fs = stabilizing_feedback(node, e_or_zero(o, node), *o.kappa);
    const bool contraction = generates_contraction(fs.closed_loop);
    io::Json report = io::to_json(fs);
    report["closed_loop_contraction"] = contraction;
    err << "kappa=" << fs.kappa << " kappa0=" << fs.kappa0 << " alpha=" << fs.alpha << " beta=" << fs.beta
        << (contraction ? ", closed loop dissipative\n" : ", closed loop NOT dissipative\n");
    return {report, contraction ? kPositive : kNegative};
}

Outcome stability_outcome(const StabilityReport& r, std::ostream& err) {
    err << "cweak=" << (r.cweak_holds ? "true" : "false") << " bweak=" << (r.bweak_holds ? "true" : "false")
        << " closed-loop abscissa " << r.closed_loop_abscissa << ": " << to_string(r.verdict) << "\n";
    const bool ok = r.verdict == StabilityVerdict::StronglyStable || r.verdict == StabilityVerdict::WeaklyStable;
    return {io::to_json(r), ok ? kPositive : kNegative};
}

Outcome verb_stability(const Options& o, std::ostream& err) {
    const StateSpaceNode node = load_node(o);
    return stability_outcome(stability_verdict(node, e_or_zero(o, node), o.kappa.value_or(1.0)), err);
}

Outcome verb_simulate(const Options& o, std::ostream& err) {
    const StateSpaceNode node = load_node(o);
    const auto E = load_e(o);
    const int steps = o.steps > 0 ? o.steps : static_cast<int>(std::ceil(2000.0 * o.t_final));
    Vec z0 = Vec::Zero(node.n());
    if (!o.initial.empty()) {
        z0 = io::vector_from_json(io::load_json_file(o.initial));
        if (z0.size() != node.n()) throw Error(ErrorCode::DimensionMismatch, "initial state has wrong length");
    }
    const Eigen::Index m = node.m();
    InputSignal u;
    if (o.input_signal == "zero") {
        u = [m](double) { return Vec(Vec::Zero(m)); };
    } else if (o.input_signal == "sine") {
        u = [m](double t) {
            Vec v(m);
            for (Eigen::Index i = 0; i < m; ++i) v(i) = std::sin((1.0 + static_cast<double>(i)) * t);
            return v;
        };
    } else {
        throw Error(ErrorCode::InvalidArgument, "--signal must be zero or sine");
    }
    const StateSpaceNode sys = E ? shift_feedthrough(node, *E) : node;
    const Trajectory tr = simulate(sys, z0, u, o.t_final, steps);
    const AuditReport audit = energy_audit(tr, node.W());
    if (!o.csv.empty()) {
        std::ofstream f(o.csv);
        if (!f) throw Error(ErrorCode::InvalidArgument, "cannot write " + o.csv);
        write_trajectory_csv(f, tr, &audit);
    }
    err << "simulated " << steps << " steps to t=" << o.t_final << ", min defect " << audit.min_defect
        << (audit.passed ? " (audit passed)\n" : " (audit FAILED)\n");
    return {{{"audit", io::to_json(audit)},
             {"final_state", io::vector_to_json(tr.states.back())},
             {"final_energy", node.energy(tr.states.back())},
             {"steps", steps},
             {"t_final", o.t_final}},
            audit.passed ? kPositive : kNegative};
}

Outcome verb_beam(const Options& o, std::ostream& err) {
    BeamParameters params;
    if (!o.input.empty()) params = io::beam_from_json(io::load_json_file(o.input));
    if (o.n_modes) params.n_modes = *o.n_modes;
    if (o.rho_a) params.rho_a = *o.rho_a;
    if (o.ei) params.EI = *o.ei;
    if (o.ebar_i) params.EbarI = *o.ebar_i;
    const BeamModel beam = beam_model(params);
    const double kappa = o.kappa.value_or(1.0);
    const StabilityReport r = stability_verdict(beam.node, Mat::Zero(2, 2), kappa);
    Outcome res = stability_outcome(r, err);

    const double tol = 1e-9 * (1.0 + linalg::norm2(beam.node.A()));
    int zero_count = 0;
    for (const cplx& l : linalg::eigenvalues(beam.node.A())) zero_count += std::abs(l) <= tol;
    const Eigen::Index kernel_dim = linalg::null_space(beam.node.A(), tol).cols();
    io::Json modes = io::Json::array();
    for (const BeamMode& m : beam.modes) {
        modes.push_back({{"family", std::string(to_string(m.family))},
                         {"beta", m.beta},
                         {"lambda", m.lambda},
                         {"phi_0", m.value(0.0)},
                         {"dphi_0", m.slope(0.0)}});
    }
    res.report = {{"parameters", io::to_json(params)},
                  {"stability", res.report},
                  {"modes", modes},
                  {"open_loop_zero_eigenvalues", zero_count},
                  {"open_loop_kernel_dim", kernel_dim},
                  {"state_dim", beam.node.n()},
                  {"impedance_passive", check_impedance(beam.node).passive()}};
    err << "beam with " << params.n_modes << " modes: eigenvalue 0 with multiplicity " << zero_count << "\n";
    return res;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Passivity analysis of finite-dimensional system nodes"};
    app.require_subcommand(1);
    Options o;

    auto add_common = [&](CLI::App* sub, bool needs_input) {
        auto* in = sub->add_option("input", o.input, "input JSON file");
        if (needs_input) in->required();
        sub->add_option("--out", o.out, "write the JSON report here instead of stdout");
    };
    auto* check = app.add_subcommand("check", "certify impedance or scattering passivity");
    add_common(check, true);
    check->add_option("--kind", o.kind)->check(CLI::IsMember({"impedance", "scattering"}));
    check->add_option("--e-matrix", o.e_matrix, "feedthrough shift E");
    check->add_option("--omega", o.omega, "also run the reciprocal test at i omega");
    check->add_option("--grid", o.grid, "positive-real scan over this many points");

    auto* mine = app.add_subcommand("minimal-e", "smallest feedthrough shift making the node passive");
    add_common(mine, true);
    mine->add_option("--omega", o.omega, "use the colocation formula at i omega");

    auto* cay = app.add_subcommand("cayley", "internal Cayley transform");
    add_common(cay, true);
    cay->add_option("--alpha", o.alpha_re, "real part of alpha");
    cay->add_option("--alpha-im", o.alpha_im, "imaginary part of alpha");
    cay->add_option("--kind", o.kind)->check(CLI::IsMember({"impedance", "scattering"}));

    auto* fb = app.add_subcommand("feedback", "stabilizing output feedback u = -kappa y + v");
    add_common(fb, true);
    fb->add_option("--kappa", o.kappa);
    fb->add_option("--e-matrix", o.e_matrix);
    fb->add_option("--k", o.k, "only apply the diagonal transform with this gain");

    auto* st = app.add_subcommand("stability", "closed-loop stability verdict");
    add_common(st, true);
    st->add_option("--kappa", o.kappa);
    st->add_option("--e-matrix", o.e_matrix);

    auto* sim = app.add_subcommand("simulate", "trajectory simulation with energy audit");
    add_common(sim, true);
    sim->add_option("--t-final", o.t_final);
    sim->add_option("--steps", o.steps, "default 2000 per unit time");
    sim->add_option("--signal", o.input_signal)->check(CLI::IsMember({"zero", "sine"}));
    sim->add_option("--initial", o.initial, "JSON vector with the initial state");
    sim->add_option("--e-matrix", o.e_matrix);
    sim->add_option("--csv", o.csv, "trajectory CSV output");

    auto* beam = app.add_subcommand("beam", "free-free Kelvin-Voigt beam example");
    add_common(beam, false);
    beam->add_option("--n-modes", o.n_modes);
    beam->add_option("--rho-a", o.rho_a);
    beam->add_option("--ei", o.ei);
    beam->add_option("--ebar-i", o.ebar_i);
    beam->add_option("--kappa", o.kappa);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        out << app.help();
        return kPositive;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n";
        return kError;
    }

    CLI::App* sub = app.get_subcommands().front();
    const std::string verb = sub->get_name();
    try {
        Outcome res;
        if (verb == "check") res = verb_check(o, err);
        else if (verb == "minimal-e") res = verb_minimal_e(o, err);
        else if (verb == "cayley") res = verb_cayley(o, err);
        else if (verb == "feedback") res = verb_feedback(o, err);
        else if (verb == "stability") res = verb_stability(o, err);
        else if (verb == "simulate") res = verb_simulate(o, err);
        else res = verb_beam(o, err);

        const std::string text = io::canonical_dump(res.report);
        if (o.out.empty()) {
            out << text;
        } else {
            std::ofstream f(o.out);
            if (!f) throw Error(ErrorCode::InvalidArgument, "cannot write " + o.out);
            f << text;
        }
        return res.status;
    } catch (const Error& e) {
        err << "error: " << verb << ": " << e.what() << "\n";
        return kError;
    } catch (const std::exception& e) {
        err << "error: " << verb << ": " << e.what() << "\n";
        return kError;
    }
}

}  // namespace passnode
