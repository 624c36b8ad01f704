#include "passnode/io.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace passnode::io {

namespace {

[[noreturn]] void schema(const std::string& what) { throw Error(ErrorCode::SchemaError, what); }

double number(const Json& j, const char* what) {
    if (!j.is_number()) schema(std::string(what) + " must be a number");
    return j.get<double>();
}

Json scalar(double x) {
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    return x;
}

const Json& field(const Json& j, const char* key) {
    if (!j.is_object()) schema("expected a JSON object");
    auto it = j.find(key);
    if (it == j.end()) schema(std::string("missing field \"") + key + "\"");
    return *it;
}

bool all_real(const Mat& m) { return m.size() == 0 || m.imag().cwiseAbs().maxCoeff() == 0.0; }

void dump(const Json& j, std::string& out, int indent) {
    const std::string pad(static_cast<std::size_t>(indent) * 2, ' ');
    const std::string inner(static_cast<std::size_t>(indent + 1) * 2, ' ');
    switch (j.type()) {
        case Json::value_t::object: {
            if (j.empty()) {
                out += "{}";
                return;
            }
            out += "{\n";
            bool first = true;
            for (auto it = j.begin(); it != j.end(); ++it) {  // std::map keeps keys sorted
                if (!first) out += ",\n";
                first = false;
                out += inner + Json(it.key()).dump() + ": ";
                dump(it.value(), out, indent + 1);
            }
            out += "\n" + pad + "}";
            return;
        }
        case Json::value_t::array: {
            if (j.empty()) {
                out += "[]";
                return;
            }
            // Arrays of scalars stay on one line.
            const bool flat = std::all_of(j.begin(), j.end(), [](const Json& x) { return x.is_primitive(); });
            if (flat) {
                out += "[";
                for (std::size_t i = 0; i < j.size(); ++i) {
                    if (i) out += ", ";
                    dump(j[i], out, indent + 1);
                }
                out += "]";
                return;
            }
            out += "[\n";
            for (std::size_t i = 0; i < j.size(); ++i) {
                if (i) out += ",\n";
                out += inner;
                dump(j[i], out, indent + 1);
            }
            out += "\n" + pad + "]";
            return;
        }
        case Json::value_t::number_float: {
            const double x = j.get<double>();
            if (!std::isfinite(x)) {
                out += "null";
                return;
            }
            char buf[40];
            std::snprintf(buf, sizeof buf, "%.17g", x == 0.0 ? 0.0 : x);
            out += buf;
            return;
        }
        default:
            out += j.dump();
    }
}

}  // namespace

Json to_json(cplx z) { return Json::array({z.real(), z.imag()}); }

Json to_json(const Mat& m) {
    const bool real = all_real(m);
    Json rows = Json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        Json row = Json::array();
        for (Eigen::Index k = 0; k < m.cols(); ++k) {
            if (real) {
                row.push_back(m(i, k).real());
            } else {
                row.push_back(to_json(m(i, k)));
            }
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

Json vector_to_json(const Vec& v) {
    const bool real = v.size() == 0 || v.imag().cwiseAbs().maxCoeff() == 0.0;
    Json out = Json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        if (real) {
            out.push_back(v(i).real());
        } else {
            out.push_back(to_json(v(i)));
        }
    }
    return out;
}

cplx complex_from_json(const Json& j) {
    if (j.is_number()) return {j.get<double>(), 0.0};
    if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number()) {
        return {j[0].get<double>(), j[1].get<double>()};
    }
    schema("entry must be a number or a [re, im] pair");
}

Mat matrix_from_json(const Json& j) {
    if (!j.is_array()) schema("matrix must be a list of rows");
    const auto rows = static_cast<Eigen::Index>(j.size());
    if (rows == 0) return Mat(0, 0);
    if (!j[0].is_array()) schema("matrix rows must be lists");
    const auto cols = static_cast<Eigen::Index>(j[0].size());
    Mat m(rows, cols);
    for (Eigen::Index i = 0; i < rows; ++i) {
        const Json& row = j[static_cast<std::size_t>(i)];
        if (!row.is_array()) schema("matrix rows must be lists");
        if (static_cast<Eigen::Index>(row.size()) != cols) schema("ragged matrix rows");
        for (Eigen::Index k = 0; k < cols; ++k) m(i, k) = complex_from_json(row[static_cast<std::size_t>(k)]);
    }
    return m;
}

Vec vector_from_json(const Json& j) {
    if (!j.is_array()) schema("vector must be a list");
    Vec v(static_cast<Eigen::Index>(j.size()));
    for (std::size_t i = 0; i < j.size(); ++i) v(static_cast<Eigen::Index>(i)) = complex_from_json(j[i]);
    return v;
}

Json to_json(const StateSpaceNode& node) {
    Json j;
    j["A"] = to_json(node.A());
    j["B"] = to_json(node.B());
    j["C"] = to_json(node.C());
    j["D"] = to_json(node.D());
    if (!node.has_identity_weight()) j["W"] = to_json(node.W());
    if (!node.meta().empty()) j["meta"] = node.meta();
    return j;
}

namespace {

struct Quad {
    Mat A, B, C, D;
    std::optional<Mat> W;
};

Quad quad_from_json(const Json& j) {
    Quad q{matrix_from_json(field(j, "A")), matrix_from_json(field(j, "B")), matrix_from_json(field(j, "C")),
           matrix_from_json(field(j, "D")), std::nullopt};
    if (j.contains("W")) q.W = matrix_from_json(j["W"]);
    // Empty state space: recover the input/output widths from D.
    if (q.A.rows() == 0) {
        q.B.resize(0, q.D.cols());
        q.C.resize(q.D.rows(), 0);
    }
    return q;
}

}  // namespace

StateSpaceNode node_from_json(const Json& j) {
    Quad q = quad_from_json(j);
    std::string meta;
    if (j.contains("meta")) {
        if (!j["meta"].is_string()) schema("meta must be a string");
        meta = j["meta"].get<std::string>();
    }
    return StateSpaceNode(std::move(q.A), std::move(q.B), std::move(q.C), std::move(q.D), std::move(q.W),
                          std::move(meta));
}

Json to_json(const DiscreteSystem& disc) {
    Json j;
    j["A"] = to_json(disc.Ad());
    j["B"] = to_json(disc.Bd());
    j["C"] = to_json(disc.Cd());
    j["D"] = to_json(disc.Dd());
    if (disc.W() != Mat::Identity(disc.n(), disc.n())) j["W"] = to_json(disc.W());
    j["alpha"] = disc.alpha().imag() == 0.0 ? Json(disc.alpha().real()) : to_json(disc.alpha());
    return j;
}

DiscreteSystem discrete_from_json(const Json& j) {
    Quad q = quad_from_json(j);
    return DiscreteSystem(std::move(q.A), std::move(q.B), std::move(q.C), std::move(q.D),
                          complex_from_json(field(j, "alpha")), std::move(q.W));
}

Json to_json(const PassivityCertificate& cert) {
    Json j;
    j["kind"] = std::string(to_string(cert.kind));
    j["verdict"] = std::string(to_string(cert.verdict));
    j["min_eigenvalue"] = cert.min_eigenvalue;
    j["consistent"] = cert.consistent();
    Json pts = Json::array();
    for (const cplx& s : cert.test_points) pts.push_back(to_json(s));
    j["test_points"] = pts;
    j["witness"] = cert.witness ? vector_to_json(*cert.witness) : Json(nullptr);
    Json checks = Json::array();
    for (const FormCheck& c : cert.checks) {
        checks.push_back({{"s", c.s ? to_json(*c.s) : Json(nullptr)},
                          {"min_eigenvalue", c.min_eigenvalue},
                          {"passive", c.passive}});
    }
    j["checks"] = checks;
    return j;
}

Json to_json(const FeedbackSynthesis& fs) {
    Json j;
    j["E"] = to_json(fs.E);
    j["c"] = fs.c;
    j["kappa0"] = scalar(fs.kappa0);
    j["kappa"] = fs.kappa;
    j["k"] = fs.k;
    j["alpha"] = fs.alpha;
    j["beta"] = fs.beta;
    j["closed_loop"] = to_json(fs.closed_loop);
    j["scattering_intermediate"] = to_json(fs.scattering_intermediate);
    return j;
}

Json to_json(const StabilityReport& r) {
    Json j;
    j["unobservable_basis"] = to_json(r.unobservable_basis);
    j["uncontrollable_dual_basis"] = to_json(r.uncontrollable_dual_basis);
    j["unitary_basis"] = to_json(r.unitary_basis);
    j["unobservable_dim"] = r.unobservable_basis.cols();
    j["uncontrollable_dual_dim"] = r.uncontrollable_dual_basis.cols();
    j["unitary_dim"] = r.unitary_basis.cols();
    j["imaginary_spectrum"] = r.imaginary_spectrum;
    j["closed_loop_imaginary_spectrum"] = r.closed_loop_imaginary_spectrum;
    j["closed_loop_abscissa"] = scalar(r.closed_loop_abscissa);
    j["cweak_holds"] = r.cweak_holds;
    j["bweak_holds"] = r.bweak_holds;
    j["kappa"] = r.kappa;
    j["verdict"] = std::string(to_string(r.verdict));
    return j;
}

Json to_json(const SecondOrderPlant& plant) {
    Json j;
    j["A0"] = to_json(plant.A0);
    j["M"] = to_json(plant.M);
    j["C0"] = to_json(plant.C0);
    if (plant.B0) j["B0"] = to_json(*plant.B0);
    if (plant.C1) j["C1"] = to_json(*plant.C1);
    return j;
}

SecondOrderPlant plant_from_json(const Json& j) {
    SecondOrderPlant p;
    p.A0 = matrix_from_json(field(j, "A0"));
    p.M = matrix_from_json(field(j, "M"));
    p.C0 = matrix_from_json(field(j, "C0"));
    if (j.contains("B0")) p.B0 = matrix_from_json(j["B0"]);
    if (j.contains("C1")) p.C1 = matrix_from_json(j["C1"]);
    return p;
}

Json to_json(const AuditReport& a) {
    return {{"kind", std::string(to_string(a.kind))},
            {"min_defect", a.min_defect},
            {"energy_scale", a.energy_scale},
            {"tolerance", a.tolerance},
            {"passed", a.passed}};
}

Json to_json(const BeamParameters& p) {
    return {{"model", "bontsema_beam"}, {"rho_a", p.rho_a}, {"EI", p.EI}, {"EbarI", p.EbarI}, {"n_modes", p.n_modes}};
}

BeamParameters beam_from_json(const Json& j) {
    const Json& model = field(j, "model");
    if (!model.is_string() || model.get<std::string>() != "bontsema_beam") schema("unknown beam model");
    BeamParameters p;
    if (j.contains("rho_a")) p.rho_a = number(j["rho_a"], "rho_a");
    if (j.contains("EI")) p.EI = number(j["EI"], "EI");
    if (j.contains("EbarI")) p.EbarI = number(j["EbarI"], "EbarI");
    if (j.contains("n_modes")) {
        if (!j["n_modes"].is_number_integer()) schema("n_modes must be an integer");
        p.n_modes = j["n_modes"].get<int>();
    }
    return p;
}

std::string canonical_dump(const Json& j) {
    std::string out;
    dump(j, out, 0);
    out += "\n";
    return out;
}

Json parse_json(const std::string& text) {
    try {
        return Json::parse(text);
    } catch (const Json::parse_error& e) {
        throw Error(ErrorCode::ParseError, e.what());
    }
}

Json load_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::ParseError, "cannot open " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_json(ss.str());
}

void save_json_file(const std::string& path, const Json& j) {
    std::ofstream out(path);
    if (!out) throw Error(ErrorCode::InvalidArgument, "cannot write " + path);
    out << canonical_dump(j);
}

}  // namespace passnode::io
