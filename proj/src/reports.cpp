#include "conespec/reports.hpp"

#include <cinttypes>
#include <sstream>

namespace conespec::report {

std::string content_hash(const json& body) {
    const std::string s = body.dump();
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016" PRIx64, h);
    return buf;
}

json finalize(json body) {
    body["version"] = kVersion;
    body["content_hash"] = content_hash(body);
    return body;
}

json spectral_report(int n, double theta0, double nu, double eigenvalue, double m_exponent,
                     double theta_omega, const pencil::StripReport& strip, std::uint64_t seed,
                     int mesh, int levels, const json& config) {
    json j;
    j["command"] = "analyze";
    j["n"] = n;
    j["theta0"] = theta0;
    j["nu"] = nu;
    j["eigenvalue"] = eigenvalue;
    j["M"] = m_exponent;
    j["Theta_Omega"] = theta_omega;
    j["t_of_M"] = strip.t_of_M;
    j["alpha"] = strip.alpha;
    j["strip_halfwidth"] = strip.halfwidth;
    j["p_min"] = strip.p_min;
    j["tolerances"] = {{"eigen_residual", 1e-10}, {"root_bisection", 1e-12}};
    j["seed"] = seed;
    j["mesh"] = mesh;
    j["levels"] = levels;
    j["config"] = config;
    return finalize(j);
}

json scan_report(const pencil::ScanReport& scan, const json& config) {
    json j;
    j["command"] = "pencil-scan";
    j["n"] = scan.n;
    j["theta0"] = scan.theta0;
    j["nu"] = scan.nu;
    j["M"] = scan.computed_M;
    j["strip"] = {{"t_of_M", scan.strip.t_of_M},
                  {"alpha", scan.strip.alpha},
                  {"halfwidth", scan.strip.halfwidth},
                  {"p_min", scan.strip.p_min}};
    j["grid_re"] = scan.grid_re;
    j["grid_im"] = scan.grid_im;
    j["max_mode"] = scan.max_mode;
    j["mesh"] = scan.mesh;
    j["threshold"] = scan.threshold;
    j["im_halfwidth"] = scan.im_halfwidth;
    j["shrink"] = scan.shrink;
    j["calibration"] = {{"control_lambda", 1.0},
                        {"control_mode", 1},
                        {"control_sigma", scan.control_sigma},
                        {"control_below_threshold", scan.control_sigma < scan.threshold}};
    json pts = json::array();
    for (const auto& p : scan.points)
        pts.push_back({{"re", p.lambda.real()},
                       {"im", p.lambda.imag()},
                       {"sigma_min", p.sigma_min},
                       {"mode", p.worst_mode}});
    j["points"] = std::move(pts);
    j["flagged"] = scan.flagged;
    j["config"] = config;
    return finalize(j);
}

json kernel_report(const std::vector<harness::LemmaVerdict>& verdicts,
                   const harness::MaximalReport& maximal, double p, double alpha,
                   std::uint64_t seed, int mesh, int levels, bool zone_checks_pass,
                   bool band_checks_pass, bool homogeneity_pass, const json& config) {
    json j;
    j["command"] = "kernel-verify";
    j["p"] = p;
    j["alpha"] = alpha;
    j["seed"] = seed;
    j["mesh"] = mesh;
    j["levels"] = levels;
    json vs = json::array();
    for (const auto& v : verdicts) {
        vs.push_back({{"lemma", v.lemma_id},
                      {"pass", v.pass},
                      {"branch", v.branch},
                      {"ratios", v.max_ratios},
                      {"fitted_constant", v.fitted_constant},
                      {"drift", v.drift},
                      {"mixed_verdicts", v.mixed_verdicts},
                      {"notes", v.notes}});
    }
    j["lemmas"] = std::move(vs);
    j["maximal"] = {{"datum", maximal.datum},
                    {"weak_l1_v1", maximal.weak_l1_v1},
                    {"weak_lp_v3", maximal.weak_lp_v3},
                    {"lp_v2", maximal.lp_v2},
                    {"sup_v1", maximal.l_inf_v1},
                    {"sup_v2", maximal.l_inf_v2},
                    {"sup_v3", maximal.l_inf_v3},
                    {"z_fit_constant", maximal.z_fit_constant},
                    {"skipped_points", maximal.skipped}};
    j["combinatorial"] = {{"zone_partition", zone_checks_pass},
                          {"band_accounting", band_checks_pass},
                          {"homogeneity", homogeneity_pass}};
    j["config"] = config;
    return finalize(j);
}

json phi_table_report(int n, double nu, double m_exponent, const std::vector<double>& t,
                      const std::vector<double>& phi, const std::vector<double>& rhs,
                      const json& config) {
    json j;
    j["command"] = "phi-table";
    j["n"] = n;
    j["nu"] = nu;
    j["M"] = m_exponent;
    json rows = json::array();
    for (std::size_t i = 0; i < t.size(); ++i)
        rows.push_back({{"t", t[i]}, {"phi", phi[i]}, {"rhs", rhs[i]}, {"psi", phi[i] - rhs[i]}});
    j["rows"] = std::move(rows);
    j["config"] = config;
    return finalize(j);
}

namespace {

void require(bool cond, const std::string& what) {
    if (!cond) throw std::runtime_error("report validation failed: " + what);
}

void require_number(const json& j, const char* key) {
    require(j.contains(key) && j[key].is_number(), std::string(key) + " must be a number");
}

}  // namespace

void validate_report(const json& rep) {
    require(rep.is_object(), "report must be an object");
    require(rep.contains("command") && rep["command"].is_string(), "command must be a string");
    require(rep.contains("config") && rep["config"].is_object(), "config must be an object");
    require(rep.contains("version") && rep["version"].is_string(), "version must be a string");
    require(rep.contains("content_hash") && rep["content_hash"].is_string(),
            "content_hash must be a string");
    json body = rep;
    body.erase("content_hash");
    require(rep["content_hash"] == content_hash(body), "content_hash mismatch");

    const std::string cmd = rep["command"];
    if (cmd == "analyze") {
        for (const char* k : {"n", "theta0", "nu", "eigenvalue", "M", "Theta_Omega", "t_of_M",
                              "alpha", "strip_halfwidth", "p_min"})
            require_number(rep, k);
        require(rep.contains("tolerances") && rep["tolerances"].is_object(),
                "tolerances must be an object");
    } else if (cmd == "pencil-scan") {
        for (const char* k : {"n", "theta0", "nu", "M", "threshold"}) require_number(rep, k);
        require(rep.contains("points") && rep["points"].is_array(), "points must be an array");
        require(rep.contains("flagged") && rep["flagged"].is_array(), "flagged must be an array");
        require(rep.contains("strip") && rep["strip"].is_object(), "strip must be an object");
        require(rep.contains("calibration") && rep["calibration"].is_object(),
                "calibration must be an object");
    } else if (cmd == "kernel-verify") {
        for (const char* k : {"p", "alpha"}) require_number(rep, k);
        require(rep.contains("lemmas") && rep["lemmas"].is_array(), "lemmas must be an array");
        require(rep.contains("combinatorial") && rep["combinatorial"].is_object(),
                "combinatorial must be an object");
    } else if (cmd == "phi-table") {
        for (const char* k : {"n", "nu", "M"}) require_number(rep, k);
        require(rep.contains("rows") && rep["rows"].is_array(), "rows must be an array");
    } else {
        require(false, "unknown command " + cmd);
    }
}

std::string to_csv(const json& rep) {
    std::ostringstream os;
    os.precision(17);
    if (rep["command"] == "phi-table") {
        os << "t,phi,rhs,psi\n";
        for (const auto& row : rep["rows"])
            os << row["t"].get<double>() << "," << row["phi"].get<double>() << ","
               << row["rhs"].get<double>() << "," << row["psi"].get<double>() << "\n";
        return os.str();
    }
    os << "key,value\n";
    for (const auto& [k, v] : rep.items()) {
        if (v.is_primitive())
            os << k << "," << v.dump() << "\n";
        else
            os << k << "," << "\"" << content_hash(v) << "\"\n";  // nested: hash stand-in
    }
    return os.str();
}

}  // namespace conespec::report
