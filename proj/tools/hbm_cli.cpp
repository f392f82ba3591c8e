// Command-line front door: runs the spectral / affine / Minkowski experiments
// and writes machine-readable reports (report.json + tables/*.csv).
//
// Exit codes: 0 success, 2 invalid specification, 3 numeric failure.
// Environment: HBM_THREADS limits Eigen's internal parallelism.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include <hbm/affine.hpp>
#include <hbm/body.hpp>
#include <hbm/directions.hpp>
#include <hbm/minkowski.hpp>
#include <hbm/mixed_volume.hpp>
#include <hbm/spectral.hpp>

using nlohmann::ordered_json;
namespace fs = std::filesystem;

namespace {

[[noreturn]] void die_spec(const std::string& msg) {
    std::cerr << "error: " << msg << "\n";
    std::exit(2);
}

void usage() {
    std::cerr <<
        "usage: hbm_cli <command> [flags]\n"
        "\n"
        "commands:\n"
        "  spectrum    --body B [--dim N]        Hilbert operator spectrum\n"
        "  isotropize  --body B [--dim N]        S_2 isotropic position\n"
        "  directions  --body B [--dim N]        good-direction scan\n"
        "  solve       --f F --p P [--dim N]     L^p Minkowski solve(s)\n"
        "  nonunique   --body B --p auto|P       non-uniqueness experiment\n"
        "  scan        --f F --p P1,P2,..        d_G divergence scan\n"
        "\n"
        "flags:\n"
        "  --dim {2,3}           ambient dimension (default 3)\n"
        "  --resolution R        quadrature resolution (default 256 / 64)\n"
        "  --degree L            harmonic truncation (default 64 / 16)\n"
        "  --body SPEC           ball | ellipsoid:a,b[,c] | rounded_lq:q,eps |\n"
        "                        random:seed,amp | path/to/body.json\n"
        "  --f SPEC              density expression (e.g. \"1+0.3*Y20\") or\n"
        "                        path to a JSON array of node values\n"
        "  --p LIST|auto         exponent(s); auto = n - lambda1_even - 0.5\n"
        "  --samples M           direction-scan sample count (default 256)\n"
        "  --seed S              seed for seeded subcommands (default 0)\n"
        "  --out DIR             output directory (default hbm_out)\n"
        "  --max-iter N          solver iteration budget\n"
        "  --tol-grad T          solver gradient tolerance (default 1e-8)\n"
        "  --tol-el T            Euler-Lagrange residual tolerance (1e-5)\n"
        "  --tol-defect T        isotropy defect tolerance (default 1e-10)\n";
    std::exit(2);
}

struct Args {
    std::string cmd;
    std::map<std::string, std::string> kv;

    bool has(const std::string& k) const { return kv.count(k) > 0; }
    std::string get(const std::string& k, const std::string& dflt = "") const {
        auto it = kv.find(k);
        return it == kv.end() ? dflt : it->second;
    }
    std::string require(const std::string& k) const {
        auto it = kv.find(k);
        if (it == kv.end()) die_spec("missing required flag --" + k);
        return it->second;
    }
    int geti(const std::string& k, int dflt) const {
        auto it = kv.find(k);
        if (it == kv.end()) return dflt;
        try {
            size_t pos = 0;
            int v = std::stoi(it->second, &pos);
            if (pos != it->second.size()) throw std::invalid_argument(k);
            return v;
        } catch (...) {
            die_spec("flag --" + k + " expects an integer, got '" +
                     it->second + "'");
        }
    }
    double getd(const std::string& k, double dflt) const {
        auto it = kv.find(k);
        if (it == kv.end()) return dflt;
        try {
            size_t pos = 0;
            double v = std::stod(it->second, &pos);
            if (pos != it->second.size()) throw std::invalid_argument(k);
            return v;
        } catch (...) {
            die_spec("flag --" + k + " expects a number, got '" + it->second +
                     "'");
        }
    }
};

const std::vector<std::string> kKnownFlags = {
    "dim",      "resolution", "degree",   "body",       "f",
    "p",        "samples",    "seed",     "out",        "max-iter",
    "tol-grad", "tol-el",     "tol-defect"};

Args parse_args(int argc, char** argv) {
    if (argc < 2) usage();
    Args a;
    a.cmd = argv[1];
    for (int i = 2; i < argc; ++i) {
        std::string s = argv[i];
        if (s.rfind("--", 0) != 0) die_spec("unexpected argument '" + s + "'");
        std::string key = s.substr(2);
        bool known = false;
        for (const auto& k : kKnownFlags) known = known || k == key;
        if (!known) die_spec("unknown flag --" + key);
        if (i + 1 >= argc) die_spec("flag --" + key + " expects a value");
        a.kv[key] = argv[++i];
    }
    return a;
}

std::vector<double> split_doubles(const std::string& s, const char* what) {
    std::vector<double> out;
    std::stringstream ss(s);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        try {
            size_t pos = 0;
            out.push_back(std::stod(tok, &pos));
            if (pos != tok.size()) throw std::invalid_argument(tok);
        } catch (...) {
            die_spec(std::string(what) + ": cannot parse '" + tok + "'");
        }
    }
    if (out.empty()) die_spec(std::string(what) + ": empty list");
    return out;
}

struct Workspace {
    int dim;
    int resolution;
    int degree;
    std::shared_ptr<const hbm::SphereGrid> grid;
    std::shared_ptr<const hbm::HarmonicBasis> basis;
};

Workspace make_workspace(const Args& a) {
    Workspace w;
    w.dim = a.geti("dim", 3);
    if (w.dim != 2 && w.dim != 3) die_spec("--dim must be 2 or 3");
    w.resolution = a.geti("resolution", w.dim == 2 ? 256 : 64);
    w.degree = a.geti("degree", w.dim == 2 ? 64 : 16);
    if (w.resolution < 4) die_spec("--resolution too small");
    if (w.degree < 2) die_spec("--degree must be at least 2");
    try {
        w.grid = hbm::build_grid(w.dim, w.resolution);
        w.basis = hbm::build_basis(w.grid, w.degree);
    } catch (const hbm::Error& e) {
        die_spec(std::string("grid/basis construction: ") + e.what());
    }
    return w;
}

hbm::Body parse_body(const std::string& spec, const Workspace& w) {
    auto params = [&](const std::string& s, size_t lo, size_t hi) {
        auto v = split_doubles(s, "--body parameters");
        if (v.size() < lo || v.size() > hi)
            die_spec("--body: wrong parameter count in '" + spec + "'");
        return v;
    };
    std::string kind = spec, rest;
    if (auto c = spec.find(':'); c != std::string::npos) {
        kind = spec.substr(0, c);
        rest = spec.substr(c + 1);
    }
    try {
        if (kind == "ball") return hbm::make_ball(w.grid, w.basis);
        if (kind == "ellipsoid") {
            auto ax = params(rest, w.dim, w.dim);
            Eigen::MatrixXd A = Eigen::MatrixXd::Zero(w.dim, w.dim);
            for (int i = 0; i < w.dim; ++i) {
                if (ax[i] <= 0) die_spec("--body ellipsoid: axes must be > 0");
                A(i, i) = ax[i];
            }
            return hbm::make_ellipsoid(w.grid, w.basis, A);
        }
        if (kind == "rounded_lq") {
            auto pr = params(rest, 2, 2);
            return hbm::make_rounded_lq(w.grid, w.basis, pr[0], pr[1]);
        }
        if (kind == "random") {
            auto pr = params(rest, 2, 2);
            return hbm::make_random_even(w.grid, w.basis,
                                         static_cast<unsigned>(pr[0]), pr[1]);
        }
        if (fs::exists(spec)) {
            std::ifstream in(spec);
            nlohmann::json j;
            in >> j;
            return hbm::body_from_json(j, w.grid, w.basis);
        }
    } catch (const hbm::Error& e) {
        die_spec("--body '" + spec + "': " + e.what());
    } catch (const nlohmann::json::exception& e) {
        die_spec("--body '" + spec + "': " + e.what());
    }
    die_spec("--body: unknown body '" + spec + "'");
}

// Density expressions: sums/differences of terms `c`, `Ylm`, or `c*Ylm`,
// where Ylm is the real harmonic of degree l and order m scaled to unit
// sup-norm (so "1+0.3*Y20" has amplitude exactly 0.3).
Eigen::VectorXd harmonic_term(const std::string& tok, const Workspace& w) {
    if (tok.size() < 3 || tok[0] != 'Y')
        die_spec("--f: cannot parse harmonic '" + tok + "'");
    int l, m;
    try {
        l = std::stoi(tok.substr(1, tok.size() - 2));
        m = std::stoi(tok.substr(tok.size() - 1));
    } catch (...) {
        die_spec("--f: cannot parse harmonic '" + tok + "'");
    }
    // On the circle the degree-l pair is cos(lt) (order +l) and sin(lt)
    // (order -l); the token's trailing digit selects cos (0) or sin (1).
    int want = w.dim == 2 ? (m == 0 ? l : (m == 1 ? -l : 99)) : m;
    for (int b = 0; b < w.basis->count; ++b)
        if (w.basis->degree[b] == l && w.basis->order[b] == want) {
            Eigen::VectorXd v = w.basis->val.col(b);
            return v / v.cwiseAbs().maxCoeff();
        }
    die_spec("--f: harmonic Y" + std::to_string(l) + std::to_string(m) +
             " not available at degree " + std::to_string(w.degree));
}

Eigen::VectorXd parse_density(const std::string& spec, const Workspace& w) {
    if (fs::exists(spec)) {
        try {
            std::ifstream in(spec);
            nlohmann::json j;
            in >> j;
            std::vector<double> v = j.get<std::vector<double>>();
            if (static_cast<int>(v.size()) != w.grid->node_count())
                die_spec("--f file: expected " +
                         std::to_string(w.grid->node_count()) +
                         " node values, got " + std::to_string(v.size()));
            return Eigen::Map<const Eigen::VectorXd>(v.data(), v.size());
        } catch (const nlohmann::json::exception& e) {
            die_spec("--f file '" + spec + "': " + e.what());
        }
    }
    Eigen::VectorXd f = Eigen::VectorXd::Zero(w.grid->node_count());
    std::string expr = spec;
    expr.erase(std::remove_if(expr.begin(), expr.end(), ::isspace),
               expr.end());
    if (expr.empty()) die_spec("--f: empty expression");
    size_t i = 0;
    while (i < expr.size()) {
        double sign = 1.0;
        if (expr[i] == '+' || expr[i] == '-') {
            sign = expr[i] == '-' ? -1.0 : 1.0;
            ++i;
        }
        size_t j = i;
        while (j < expr.size() && expr[j] != '+' && expr[j] != '-') ++j;
        std::string term = expr.substr(i, j - i);
        if (term.empty()) die_spec("--f: cannot parse '" + spec + "'");
        double coeff = 1.0;
        std::string harm;
        if (auto star = term.find('*'); star != std::string::npos) {
            try {
                size_t pos = 0;
                coeff = std::stod(term.substr(0, star), &pos);
                if (pos != star) throw std::invalid_argument(term);
            } catch (...) {
                die_spec("--f: cannot parse coefficient in '" + term + "'");
            }
            harm = term.substr(star + 1);
        } else if (term[0] == 'Y') {
            harm = term;
        } else {
            try {
                size_t pos = 0;
                coeff = std::stod(term, &pos);
                if (pos != term.size()) throw std::invalid_argument(term);
            } catch (...) {
                die_spec("--f: cannot parse term '" + term + "'");
            }
        }
        if (harm.empty())
            f.array() += sign * coeff;
        else
            f += sign * coeff * harmonic_term(harm, w);
        i = j;
    }
    return f;
}

ordered_json json_vector(const Eigen::VectorXd& v) {
    ordered_json a = ordered_json::array();
    for (int i = 0; i < v.size(); ++i) a.push_back(v[i]);
    return a;
}

ordered_json json_matrix(const Eigen::MatrixXd& M) {
    ordered_json a = ordered_json::array();
    for (int i = 0; i < M.rows(); ++i) {
        ordered_json row = ordered_json::array();
        for (int j = 0; j < M.cols(); ++j) row.push_back(M(i, j));
        a.push_back(row);
    }
    return a;
}

const char* status_name(hbm::SolveStatus s) {
    switch (s) {
        case hbm::SolveStatus::Converged: return "converged";
        case hbm::SolveStatus::MaxIterations: return "max_iterations";
        case hbm::SolveStatus::FloorLimited: return "floor_limited";
    }
    return "unknown";
}

struct Output {
    fs::path dir;
    fs::path tables;

    explicit Output(const std::string& out) : dir(out), tables(dir / "tables") {
        std::error_code ec;
        fs::create_directories(tables, ec);
        if (ec) die_spec("cannot create output directory '" + out + "'");
    }
    std::ofstream csv(const std::string& name) const {
        std::ofstream os(tables / name);
        os.precision(17);
        return os;
    }
    void write_report(const ordered_json& rep) const {
        std::ofstream os(dir / "report.json");
        os << rep.dump(2) << "\n";
        std::cout << rep.dump(2) << "\n";
    }
};

ordered_json base_spec(const Args& a, const Workspace& w) {
    ordered_json s;
    s["command"] = a.cmd;
    s["dim"] = w.dim;
    s["resolution"] = w.resolution;
    s["degree"] = w.degree;
    for (const auto& [k, v] : a.kv)
        if (k != "dim" && k != "resolution" && k != "degree" && k != "out")
            s[k] = v;
    return s;
}

hbm::SolveOptions solve_options(const Args& a) {
    hbm::SolveOptions o;
    o.max_iter = a.geti("max-iter", 600);
    o.grad_tol = a.getd("tol-grad", 1e-8);
    o.el_tol = a.getd("tol-el", 1e-5);
    return o;
}

// ---------------------------------------------------------------------------

int cmd_spectrum(const Args& a) {
    Workspace w = make_workspace(a);
    hbm::Body K = parse_body(a.require("body"), w);
    auto full = hbm::lambda1(K);
    auto even = hbm::lambda1_even(K);

    ordered_json rep;
    rep["command"] = "spectrum";
    rep["spec"] = base_spec(a, w);
    ordered_json res;
    res["lambda1"] = full.lambda1;
    res["multiplicity"] = full.multiplicity;
    res["lambda1_even"] = even.lambda1;
    res["even_multiplicity"] = even.multiplicity;
    res["gap_to_2n"] = 2.0 * w.dim - even.lambda1;
    res["residuals"] = full.residuals;
    res["even_residuals"] = even.residuals;
    rep["results"] = res;

    Output out(a.get("out", "hbm_out"));
    auto os = out.csv("eigenvalues.csv");
    os << "subspace,index,eigenvalue,residual\n";
    for (size_t i = 0; i < full.eigenvalues.size(); ++i)
        os << "full," << i << "," << full.eigenvalues[i] << ","
           << full.residuals[i] << "\n";
    for (size_t i = 0; i < even.eigenvalues.size(); ++i)
        os << "even," << i << "," << even.eigenvalues[i] << ","
           << even.residuals[i] << "\n";
    out.write_report(rep);
    return 0;
}

int cmd_isotropize(const Args& a) {
    Workspace w = make_workspace(a);
    hbm::Body K = parse_body(a.require("body"), w);
    double tol = a.getd("tol-defect", 1e-10);
    auto before = hbm::isotropy_defect(K);
    auto iso = hbm::isotropize(K, tol);

    ordered_json rep;
    rep["command"] = "isotropize";
    rep["spec"] = base_spec(a, w);
    ordered_json res;
    res["defect_before"] = before.defect;
    res["defect_after"] = iso.report.defect;
    res["iterations"] = iso.report.iterations;
    res["converged"] = iso.report.converged;
    res["transform"] = json_matrix(iso.T);
    res["moment_matrix"] = json_matrix(iso.report.moment_matrix);
    rep["results"] = res;

    Output out(a.get("out", "hbm_out"));
    auto os = out.csv("transform.csv");
    for (int i = 0; i < w.dim; ++i) os << "T" << i << (i + 1 < w.dim ? "," : "");
    os << "\n";
    for (int i = 0; i < w.dim; ++i) {
        for (int j = 0; j < w.dim; ++j)
            os << iso.T(i, j) << (j + 1 < w.dim ? "," : "");
        os << "\n";
    }
    out.write_report(rep);
    return 0;
}

int cmd_directions(const Args& a) {
    Workspace w = make_workspace(a);
    hbm::Body K = parse_body(a.require("body"), w);
    int samples = a.geti("samples", 256);
    if (samples < 2) die_spec("--samples must be at least 2");
    auto good = hbm::find_good_direction(K, samples);
    auto scan = hbm::scan_directions(K, samples);

    ordered_json rep;
    rep["command"] = "directions";
    rep["spec"] = base_spec(a, w);
    ordered_json res;
    res["good_xi"] = json_vector(good.xi);
    res["good_gap"] = good.gap;
    res["best_gap_isotropic"] = good.scan.best_gap;
    res["min_gap_raw"] = scan.gap.minCoeff();
    res["max_gap_raw"] = scan.gap.maxCoeff();
    try {
        res["expectation_identity"] = hbm::expectation_identity(K);
    } catch (const hbm::NotIsotropic&) {
        res["expectation_identity"] = nullptr;
    }
    rep["results"] = res;

    Output out(a.get("out", "hbm_out"));
    {
        auto os = out.csv("gaps_raw.csv");
        hbm::write_csv(scan, os);
    }
    {
        auto os = out.csv("gaps_isotropic.csv");
        hbm::write_csv(good.scan, os);
    }
    out.write_report(rep);
    return 0;
}

int cmd_solve(const Args& a) {
    Workspace w = make_workspace(a);
    Eigen::VectorXd f = parse_density(a.require("f"), w);
    hbm::TargetMeasure mu = hbm::make_target(w.grid, f);
    std::vector<double> ps = split_doubles(a.require("p"), "--p");
    for (double p : ps)
        if (p >= 1.0) die_spec("--p: the solver requires p < 1");
    hbm::SolveOptions opts = solve_options(a);
    hbm::Body init = a.has("body") ? parse_body(a.get("body"), w)
                                   : hbm::make_ball(w.grid, w.basis);

    ordered_json rep;
    rep["command"] = "solve";
    rep["spec"] = base_spec(a, w);
    ordered_json runs = ordered_json::array();
    Output out(a.get("out", "hbm_out"));
    auto summary = out.csv("solutions.csv");
    summary << "p,dG,el_residual,c,grad_norm,iterations,status\n";
    int idx = 0;
    for (double p : ps) {
        hbm::SolveReport r = hbm::solve(mu, p, init, opts);
        ordered_json jr;
        jr["p"] = p;
        jr["dG"] = r.dG;
        jr["el_residual"] = r.el_residual;
        jr["el_residual_body"] =
            r.body_valid ? ordered_json(r.el_residual_body) : nullptr;
        jr["c"] = r.c;
        jr["grad_norm"] = r.grad_norm;
        jr["iterations"] = r.iterations;
        jr["status"] = status_name(r.status);
        jr["body_valid"] = r.body_valid;
        runs.push_back(jr);
        summary << p << "," << r.dG << "," << r.el_residual << "," << r.c
                << "," << r.grad_norm << "," << r.iterations << ","
                << status_name(r.status) << "\n";
        auto tr = out.csv("objective_p" + std::to_string(idx) + ".csv");
        tr << "iteration,objective\n";
        for (size_t i = 0; i < r.objective_trace.size(); ++i)
            tr << i << "," << r.objective_trace[i] << "\n";
        if (r.body_valid) {
            std::ofstream bj(out.dir / ("body_p" + std::to_string(idx) +
                                        ".json"));
            bj << hbm::to_json(r.body).dump(2) << "\n";
        }
        ++idx;
    }
    rep["results"]["runs"] = runs;
    out.write_report(rep);
    return 0;
}

int cmd_nonunique(const Args& a) {
    Workspace w = make_workspace(a);
    hbm::Body K1 = parse_body(a.require("body"), w);
    std::string pspec = a.get("p", "auto");
    double p;
    if (pspec == "auto") {
        p = w.dim - hbm::lambda1_even(K1).lambda1 - 0.5;
    } else {
        auto v = split_doubles(pspec, "--p");
        if (v.size() != 1) die_spec("--p: nonunique expects one value or auto");
        p = v[0];
    }
    auto res = hbm::nonuniqueness_experiment(K1, p);

    ordered_json rep;
    rep["command"] = "nonunique";
    rep["spec"] = base_spec(a, w);
    ordered_json jr;
    jr["p"] = res.p;
    jr["lambda1_even"] = res.lambda1_even;
    jr["found"] = res.found;
    jr["separation"] = res.separation;
    if (res.found) {
        jr["witness"]["el_residual"] = res.witness.el_residual;
        jr["witness"]["dG"] = res.witness.dG;
        jr["witness"]["grad_norm"] = res.witness.grad_norm;
        jr["witness"]["status"] = status_name(res.witness.status);
    } else {
        jr["witness"] = nullptr;
    }
    rep["results"] = jr;

    Output out(a.get("out", "hbm_out"));
    auto os = out.csv("runs.csv");
    os << "run,status,el_residual,dG,separation,grad_norm,iterations\n";
    for (size_t i = 0; i < res.runs.size(); ++i) {
        const auto& r = res.runs[i];
        Eigen::VectorXd ratio = r.h_values.cwiseQuotient(K1.hj.v);
        os << i << "," << status_name(r.status) << "," << r.el_residual << ","
           << r.dG << "," << ratio.maxCoeff() / ratio.minCoeff() << ","
           << r.grad_norm << "," << r.iterations << "\n";
    }
    if (res.found && res.witness.body_valid) {
        std::ofstream bj(out.dir / "witness_body.json");
        bj << hbm::to_json(res.witness.body).dump(2) << "\n";
    }
    out.write_report(rep);
    return 0;
}

int cmd_scan(const Args& a) {
    Workspace w = make_workspace(a);
    Eigen::VectorXd f = parse_density(a.require("f"), w);
    hbm::TargetMeasure mu = hbm::make_target(w.grid, f);
    std::vector<double> ps = split_doubles(a.require("p"), "--p");
    for (double p : ps)
        if (!(p > -w.dim && p < 0))
            die_spec("--p: scan exponents must lie in (-n, 0)");
    hbm::SolveOptions opts = solve_options(a);
    opts.max_iter = a.geti("max-iter", 3000);
    hbm::Body init = a.has("body") ? parse_body(a.get("body"), w)
                                   : hbm::make_ball(w.grid, w.basis);
    auto rows = hbm::critical_divergence_scan(mu, ps, init, opts);

    ordered_json rep;
    rep["command"] = "scan";
    rep["spec"] = base_spec(a, w);
    ordered_json jrows = ordered_json::array();
    Output out(a.get("out", "hbm_out"));
    auto os = out.csv("scan.csv");
    // p: exponent; dG: geometric distance to the ball; residual: L1
    // Euler-Lagrange defect; lambda_even: lambda_1,e of the solution;
    // objective: final value of sign(p) G_{mu,p}
    os << "p,dG,residual,lambda_even,objective\n";
    for (const auto& r : rows) {
        ordered_json jr;
        jr["p"] = r.p;
        jr["dG"] = r.dG;
        jr["residual"] = r.el_residual;
        jr["lambda_even"] =
            std::isnan(r.lambda_even) ? ordered_json(nullptr)
                                      : ordered_json(r.lambda_even);
        jr["objective"] = r.objective;
        jrows.push_back(jr);
        os << r.p << "," << r.dG << "," << r.el_residual << ",";
        if (std::isnan(r.lambda_even))
            os << "nan";
        else
            os << r.lambda_even;
        os << "," << r.objective << "\n";
    }
    rep["results"]["rows"] = jrows;
    out.write_report(rep);
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    if (const char* t = std::getenv("HBM_THREADS")) {
        int n = std::atoi(t);
        if (n > 0) Eigen::setNbThreads(n);
    }
    Args a = parse_args(argc, argv);
    try {
        if (a.cmd == "spectrum") return cmd_spectrum(a);
        if (a.cmd == "isotropize") return cmd_isotropize(a);
        if (a.cmd == "directions") return cmd_directions(a);
        if (a.cmd == "solve") return cmd_solve(a);
        if (a.cmd == "nonunique") return cmd_nonunique(a);
        if (a.cmd == "scan") return cmd_scan(a);
    } catch (const hbm::DimensionMismatch& e) {
        die_spec(e.what());
    } catch (const hbm::PreconditionUnmet& e) {
        die_spec(e.what());
    } catch (const hbm::Error& e) {
        std::cerr << "numeric failure: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "numeric failure: " << e.what() << "\n";
        return 3;
    }
    die_spec("unknown command '" + a.cmd + "'");
}
