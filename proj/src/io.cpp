#include "entwit/io.hpp"

#include <cstdio>
#include <ctime>
#include <fstream>
#include <sstream>

namespace entwit {

namespace {

using nlohmann::json;

json complex_json(const Complex& z) { return json::array({z.real(), z.imag()}); }

json vector_json(const Vector& v) {
    json out = json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(complex_json(v(i)));
    return out;
}

json product_vector_json(const ProductVector& pv) {
    return json{{"e", vector_json(pv.e())}, {"f", vector_json(pv.f())}};
}

json decomposition_json(const ProductDecomposition& dec) {
    json out = json::array();
    for (const auto& [weight, pv] : dec) {
        json term = product_vector_json(pv);
        term["weight"] = weight;
        out.push_back(term);
    }
    return out;
}

std::string iso_now() {
    std::time_t t = std::time(nullptr);
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

json parse_json_text(const std::string& text, const std::string& origin) {
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        throw ParseError(origin + ": " + e.what());
    }
}

double number_at(const json& entry, const std::string& origin) {
    if (!entry.is_number()) throw ParseError(origin + ": expected a number");
    return entry.get<double>();
}

json make_report(const std::string& command, const CliFlags& flags, int effective_restarts,
                 const std::vector<std::pair<std::string, std::string>>& inputs) {
    json rep;
    rep["command"] = command;
    rep["version"] = kVersion;
    rep["timestamp"] = iso_now();
    rep["flags"] = {{"seed", flags.seed}, {"restarts", effective_restarts}, {"tol", flags.tol}};
    rep["inputs"] = json::array();
    for (const auto& [path, content] : inputs) {
        rep["inputs"].push_back({{"path", path}, {"fnv1a64", fnv1a64_hex(content)}});
    }
    return rep;
}

DensityMatrix load_density(const std::string& path) {
    return DensityMatrix(load_operator_file(path));
}

}  // namespace

json operator_to_json(const HermitianOperator& op) {
    json doc;
    doc["dims"] = op.dims().list();
    json rows = json::array();
    const Matrix& m = op.matrix();
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        json row = json::array();
        for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(complex_json(m(r, c)));
        rows.push_back(row);
    }
    doc["matrix"] = rows;
    return doc;
}

HermitianOperator operator_from_json(const json& doc) {
    if (!doc.is_object()) throw ParseError("operator document: expected a JSON object");
    if (!doc.contains("dims") || !doc.contains("matrix")) {
        throw ParseError("operator document: needs \"dims\" and \"matrix\"");
    }
    const json& jd = doc["dims"];
    if (!jd.is_array() || jd.empty()) throw ParseError("operator document: dims must be a list");
    std::vector<int> dims;
    for (const json& d : jd) {
        if (!d.is_number_integer()) throw ParseError("operator document: dims must be integers");
        dims.push_back(d.get<int>());
    }
    const json& jm = doc["matrix"];
    if (!jm.is_array() || jm.empty()) throw ParseError("operator document: matrix must be rows");
    const auto nrows = jm.size();
    Matrix m(static_cast<Eigen::Index>(nrows), static_cast<Eigen::Index>(nrows));
    for (std::size_t r = 0; r < nrows; ++r) {
        const json& row = jm[r];
        if (!row.is_array() || row.size() != nrows) {
            throw ValidationError("operator document: matrix is not square");
        }
        for (std::size_t c = 0; c < nrows; ++c) {
            const json& entry = row[c];
            if (!entry.is_array() || entry.size() != 2) {
                throw ParseError("operator document: entries must be [re, im] pairs");
            }
            m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) =
                Complex(number_at(entry[0], "matrix entry"), number_at(entry[1], "matrix entry"));
        }
    }
    return HermitianOperator(std::move(m), SystemDims(std::move(dims)));
}

HermitianOperator load_operator_file(const std::string& path) {
    const std::string text = read_file(path);
    return operator_from_json(parse_json_text(text, path));
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError("cannot read file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::string fnv1a64_hex(const std::string& bytes) {
    std::uint64_t h = 14695981039346656037ull;
    for (unsigned char b : bytes) {
        h ^= b;
        h *= 1099511628211ull;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

int exit_code_for(const std::exception& e) {
    if (dynamic_cast<const ParseError*>(&e)) return 2;
    if (dynamic_cast<const ValidationError*>(&e)) return 3;
    if (dynamic_cast<const PreconditionError*>(&e)) return 5;
    return 1;
}

CmdResult cmd_classify(const std::string& path, const CliFlags& flags) {
    const std::string content = read_file(path);
    HermitianOperator op = operator_from_json(parse_json_text(content, path));
    ClassifyOptions copts;
    copts.restarts = flags.restarts.value_or(64);
    copts.seed = flags.seed;
    copts.tol = flags.tol;
    HierarchyClass hc = classify(op, copts);

    json rep = make_report("classify", flags, copts.restarts, {{path, content}});
    const char* tag = nullptr;
    switch (hc.tag) {
        case HierarchyTag::SeparableState: tag = "separable_state"; break;
        case HierarchyTag::EntangledState: tag = "entangled_state"; break;
        case HierarchyTag::EntanglementWitness: tag = "entanglement_witness"; break;
        case HierarchyTag::NonBlockPositive: tag = "non_block_positive"; break;
    }
    rep["verdicts"]["tag"] = tag;
    if (hc.rescaled_from_trace) rep["verdicts"]["rescaled_from_trace"] = *hc.rescaled_from_trace;
    rep["certificates"] = json::object();
    if (hc.decomposition) rep["certificates"]["decomposition"] = decomposition_json(*hc.decomposition);
    if (hc.detecting_witness) {
        rep["certificates"]["detecting_witness"] = operator_to_json(*hc.detecting_witness);
    }
    if (hc.detected_state) {
        rep["certificates"]["detected_state"] = operator_to_json(hc.detected_state->op());
    }
    if (hc.product_vector) {
        rep["certificates"]["product_vector"] = product_vector_json(*hc.product_vector);
        rep["diagnostics"]["min_product_value"] = hc.min_product_value;
    }
    rep["diagnostics"]["tolerances"] = {{"block_positive", -1e-6},
                                        {"detect", -1e-9},
                                        {"psd_min_eig", -1e-9},
                                        {"unit_trace", 1e-9},
                                        {"hermiticity_rel", 1e-10}};
    return {rep, 0};
}

CmdResult cmd_bsa(const std::string& path, const CliFlags& flags) {
    const std::string content = read_file(path);
    DensityMatrix rho(operator_from_json(parse_json_text(content, path)));
    BsaOptions bopts;
    bopts.restarts = flags.restarts.value_or(128);
    bopts.seed = flags.seed;
    bopts.tol = flags.tol;
    bopts.max_iters = flags.max_iters;
    BsaResult res = bsa_decompose(rho, bopts);

    json rep = make_report("bsa", flags, bopts.restarts, {{path, content}});
    rep["verdicts"]["lambda"] = res.lambda;
    rep["verdicts"]["converged"] = res.converged;
    rep["verdicts"]["remainder_present"] = res.remainder.has_value();
    rep["certificates"]["separable_part"] = decomposition_json(res.separable_part);
    rep["certificates"]["separable_state"] =
        res.separable_state ? operator_to_json(res.separable_state->op()) : json(nullptr);
    rep["certificates"]["remainder"] =
        res.remainder ? operator_to_json(res.remainder->op()) : json(nullptr);

    const auto d = rho.ambient();
    Matrix recon = Matrix::Zero(d, d);
    if (res.separable_state) recon += res.lambda * res.separable_state->matrix();
    if (res.remainder) recon += (1.0 - res.lambda) * res.remainder->matrix();
    rep["diagnostics"]["reconstruction_residual"] = frobenius(rho.matrix() - recon);
    rep["diagnostics"]["iterations"] = res.iterations;
    rep["diagnostics"]["trace_residual"] = res.trace_residual;
    rep["diagnostics"]["max_iters"] = flags.max_iters;
    rep["diagnostics"]["tolerances"] = {{"subtraction_stop", bopts.tol / (d * d)},
                                        {"lambda_separable", 1.0 - 1e-6},
                                        {"psd_min_eig", -1e-9}};
    return {rep, res.converged ? 0 : 4};
}

CmdResult cmd_finer(const std::string& path1, const std::string& path2, const CliFlags& flags) {
    const std::string content1 = read_file(path1);
    const std::string content2 = read_file(path2);
    DensityMatrix rho2(operator_from_json(parse_json_text(content1, path1)));
    DensityMatrix rho1(operator_from_json(parse_json_text(content2, path2)));
    OrderOptions oopts;
    oopts.seed = flags.seed;
    oopts.tol = flags.tol;
    FinerVerdict v = is_finer(rho2, rho1, oopts);

    json rep = make_report("finer", flags, flags.restarts.value_or(64),
                           {{path1, content1}, {path2, content2}});
    const char* tag = v.tag == FinerTag::Finer      ? "finer"
                      : v.tag == FinerTag::NotFiner ? "not_finer"
                                                    : "undetermined";
    rep["verdicts"]["tag"] = tag;
    rep["verdicts"]["finer"] = v.tag == FinerTag::Finer;
    rep["verdicts"]["epsilon"] = v.epsilon;
    rep["verdicts"]["delta_hat"] = v.delta_hat;
    rep["verdicts"]["p_separable"] = v.p_separable;
    rep["certificates"] = json::object();
    if (v.p) rep["certificates"]["p"] = operator_to_json(v.p->op());
    if (v.counterexample) rep["certificates"]["counterexample"] = operator_to_json(*v.counterexample);
    rep["diagnostics"]["sample_size"] = oopts.sample_size;
    rep["diagnostics"]["tolerances"] = {{"bisection", oopts.bisection_tol},
                                        {"detect", -1e-9},
                                        {"reconstruction", 1e-8}};
    return {rep, 0};
}

CmdResult cmd_family(const std::string& path1, const std::string& path2, const CliFlags& flags) {
    const std::string content1 = read_file(path1);
    const std::string content2 = read_file(path2);
    DensityMatrix rho1(operator_from_json(parse_json_text(content1, path1)));
    DensityMatrix rho2(operator_from_json(parse_json_text(content2, path2)));
    OrderOptions oopts;
    oopts.seed = flags.seed;
    oopts.tol = flags.tol;
    FamilyId f1 = family_of(rho1, oopts);
    FamilyId f2 = family_of(rho2, oopts);

    json rep = make_report("family", flags, flags.restarts.value_or(128),
                           {{path1, content1}, {path2, content2}});
    rep["verdicts"]["same_family"] = same_family(f1, f2);
    rep["certificates"]["representative_1"] = operator_to_json(f1.representative.op());
    rep["certificates"]["representative_2"] = operator_to_json(f2.representative.op());
    rep["diagnostics"]["representative_distance"] =
        frobenius(f1.representative.matrix() - f2.representative.matrix());
    rep["diagnostics"]["tolerances"] = {{"family_match", 1e-3}};
    return {rep, 0};
}

CmdResult cmd_ces(const std::vector<int>& dims, const CliFlags& flags) {
    int value = 0;
    try {
        value = max_ces_dim(SystemDims(dims));
    } catch (const ValidationError& e) {
        throw ParseError(std::string("invalid --dims: ") + e.what());
    }
    json rep = make_report("ces", flags, flags.restarts.value_or(256), {});
    rep["verdicts"]["dims"] = dims;
    rep["verdicts"]["max_ces_dim"] = value;
    return {rep, 0};
}

CmdResult cmd_demo_werner(std::optional<double> p, int grid, const CliFlags& flags) {
    if (!p && grid < 2) throw ParseError("demo werner: grid needs at least 2 points");
    std::vector<double> ps;
    if (p) {
        ps.push_back(*p);
    } else {
        for (int i = 0; i < grid; ++i) ps.push_back(static_cast<double>(i) / (grid - 1));
    }
    const SystemDims dims({2, 2});
    Vector phi = bell_vector(BellState::PhiSinglet);
    HermitianOperator flip = gamma(HermitianOperator(phi * phi.adjoint(), dims));
    const Vector psi_plus = bell_vector(BellState::PsiPlus);

    BsaOptions bopts;
    bopts.restarts = flags.restarts.value_or(128);
    bopts.seed = flags.seed;
    bopts.tol = flags.tol;
    bopts.max_iters = flags.max_iters;
    SeparabilityOptions sopts;
    sopts.seed = flags.seed;
    sopts.certify = false;

    json rep = make_report("demo-werner", flags, bopts.restarts, {});
    rep["certificates"]["flip_witness"] = operator_to_json(flip);
    json points = json::array();
    bool all_converged = true;
    for (double pv : ps) {
        DensityMatrix rho = werner(pv);
        json point;
        point["p"] = pv;
        const bool entangled = is_separable(rho, sopts).tag == SepTag::Entangled;
        point["entangled"] = entangled;
        point["classification"] = entangled ? "entangled" : "separable";
        point["witness_value"] = hs_inner(flip, rho.op());
        BsaResult res = bsa_decompose(rho, bopts);
        all_converged = all_converged && res.converged;
        point["lambda"] = res.lambda;
        point["remainder_fidelity_psi_plus"] =
            res.remainder ? json(fidelity_with_pure(*res.remainder, psi_plus)) : json(nullptr);
        points.push_back(point);
    }
    rep["verdicts"]["points"] = points;
    rep["diagnostics"]["tolerances"] = {{"detect", -1e-9}, {"lambda_separable", 1.0 - 1e-6}};
    return {rep, all_converged ? 0 : 4};
}

}  // namespace entwit
