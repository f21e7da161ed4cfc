#include "qtff/cli.hpp"

#include "qtff/interconvert.hpp"
#include "qtff/scenarios.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <set>
#include <sstream>
#include <unistd.h>

namespace qtff::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

// ------------------------------- JSON schema --------------------------------

void reject_unknown(const json& obj, const std::set<std::string>& allowed, const std::string& where) {
    if (!obj.is_object()) throw SchemaError(where + ": expected an object");
    for (const auto& [key, value] : obj.items()) {
        if (!allowed.count(key)) throw SchemaError(where + ": unknown key '" + key + "'");
    }
}

const json& require(const json& obj, const std::string& key, const std::string& where) {
    if (!obj.contains(key)) throw SchemaError(where + ": missing key '" + key + "'");
    return obj.at(key);
}

double as_number(const json& v, const std::string& where) {
    if (!v.is_number()) throw SchemaError(where + ": expected a number");
    return v.get<double>();
}

std::vector<double> as_number_list(const json& v, const std::string& where) {
    if (!v.is_array()) throw SchemaError(where + ": expected an array of numbers");
    std::vector<double> out;
    for (std::size_t i = 0; i < v.size(); ++i) {
        out.push_back(as_number(v[i], where + "[" + std::to_string(i) + "]"));
    }
    return out;
}

void fill_block(const json& rows, Eigen::Index dim, const std::string& where, CMatrix& out, bool imag) {
    if (!rows.is_array() || static_cast<Eigen::Index>(rows.size()) != dim) {
        throw SchemaError(where + ": expected " + std::to_string(dim) + " rows");
    }
    for (Eigen::Index i = 0; i < dim; ++i) {
        const json& row = rows[static_cast<std::size_t>(i)];
        const std::string rw = where + "[" + std::to_string(i) + "]";
        if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != dim) {
            throw SchemaError(rw + ": expected " + std::to_string(dim) + " columns");
        }
        for (Eigen::Index j = 0; j < dim; ++j) {
            const double v = as_number(row[static_cast<std::size_t>(j)], rw);
            if (imag) {
                out(i, j) += Complex(0.0, v);
            } else {
                out(i, j) += Complex(v, 0.0);
            }
        }
    }
}

CMatrix parse_matrix(const json& obj, Eigen::Index dim, const std::string& where) {
    reject_unknown(obj, {"re", "im"}, where);
    CMatrix m = CMatrix::Zero(dim, dim);
    fill_block(require(obj, "re", where), dim, where + ".re", m, false);
    if (obj.contains("im")) fill_block(obj.at("im"), dim, where + ".im", m, true);
    return m;
}

dynamics::RateFn parse_rate(const json& obj, const std::string& where) {
    reject_unknown(obj, {"kind", "params"}, where);
    const json& kind_v = require(obj, "kind", where);
    if (!kind_v.is_string()) throw SchemaError(where + ".kind: expected a string");
    const std::string kind = kind_v.get<std::string>();
    const json params = obj.contains("params") ? obj.at("params") : json::object();
    const std::string pw = where + ".params";
    if (kind == "constant") {
        reject_unknown(params, {"value"}, pw);
        return dynamics::RateFn::constant(as_number(require(params, "value", pw), pw + ".value"));
    }
    if (kind == "sin" || kind == "neg_tanh") {
        reject_unknown(params, {"amplitude"}, pw);
        const double amp = params.contains("amplitude") ? as_number(params.at("amplitude"), pw + ".amplitude") : 1.0;
        return kind == "sin" ? dynamics::RateFn::sine(amp) : dynamics::RateFn::neg_tanh(amp);
    }
    if (kind == "table") {
        reject_unknown(params, {"times", "values"}, pw);
        auto times = as_number_list(require(params, "times", pw), pw + ".times");
        auto values = as_number_list(require(params, "values", pw), pw + ".values");
        if (times.size() != values.size()) throw SchemaError(pw + ": times and values differ in length");
        return dynamics::RateFn::table(std::move(times), std::move(values));
    }
    throw SchemaError(where + ".kind: unknown rate kind '" + kind + "' (constant, sin, neg_tanh, table)");
}

// ------------------------------- formatting ---------------------------------

std::string json_number(double v) {
    if (std::isnan(v)) return "null";
    if (std::isinf(v)) return v > 0 ? "\"inf\"" : "\"-inf\"";
    return format_fixed(v);
}

std::string json_list(const std::vector<double>& v) {
    std::string s = "[";
    for (std::size_t i = 0; i < v.size(); ++i) s += (i ? ", " : "") + json_number(v[i]);
    return s + "]";
}

std::string json_bool(bool b) { return b ? "true" : "false"; }

std::string json_string(std::string_view s) { return json(std::string(s)).dump(); }

class ReportWriter {
public:
    void add(const std::string& key, const std::string& raw) { fields_.emplace_back(key, raw); }
    std::string str() const {
        std::string s = "{\n";
        for (std::size_t i = 0; i < fields_.size(); ++i) {
            s += "  " + json_string(fields_[i].first) + ": " + fields_[i].second;
            s += i + 1 < fields_.size() ? ",\n" : "\n";
        }
        return s + "}\n";
    }

private:
    std::vector<std::pair<std::string, std::string>> fields_;
};

std::vector<std::string> split_csv(const std::string& text) {
    std::vector<std::string> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(item);
    if (out.empty()) throw SchemaError("empty list");
    return out;
}

std::vector<double> parse_doubles(const std::string& text) {
    std::vector<double> out;
    for (const auto& tok : split_csv(text)) {
        char* end = nullptr;
        const double v = std::strtod(tok.c_str(), &end);
        if (tok.empty() || end == tok.c_str() || *end != '\0') throw SchemaError("not a number: '" + tok + "'");
        out.push_back(v);
    }
    return out;
}

std::vector<interconvert::Rational> parse_rationals(const std::string& text) {
    std::vector<interconvert::Rational> out;
    for (const auto& tok : split_csv(text)) {
        try {
            out.push_back(interconvert::parse_rational(tok));
        } catch (const ValidationError& e) {
            throw SchemaError(e.what());
        }
    }
    return out;
}

std::vector<std::int64_t> parse_ints(const std::string& text) {
    std::vector<std::int64_t> out;
    for (const auto& tok : split_csv(text)) {
        char* end = nullptr;
        const long long v = std::strtoll(tok.c_str(), &end, 10);
        if (tok.empty() || *end != '\0') throw SchemaError("not an integer: '" + tok + "'");
        out.push_back(v);
    }
    return out;
}

// ------------------------------- subcommands --------------------------------

struct SimulateOpts {
    std::string scenario_path;
    std::string case_name;
    std::string out_path;
    std::optional<double> dt;
    std::optional<double> t_max;
};

int cmd_simulate(const SimulateOpts& o, std::ostream& out, std::ostream& err) {
    if (o.scenario_path.empty() == o.case_name.empty()) {
        throw SchemaError("simulate: give exactly one of --scenario or --case");
    }
    dynamics::Scenario s;
    if (!o.case_name.empty()) {
        const auto& c = scenarios::get_case(o.case_name);
        if (!c.is_dynamics()) throw SchemaError("simulate: case '" + o.case_name + "' is not a dynamics case");
        s = c.scenario();
    } else {
        s = load_scenario(o.scenario_path);
    }
    if (o.dt) s.dt = *o.dt;
    if (o.t_max) s.t_max = *o.t_max;
    for (const auto& w : s.validate()) err << "warning: " << w << "\n";

    const dynamics::Trajectory traj = dynamics::integrate(s, clamp_eps_from_env());
    write_atomic(o.out_path, series_csv(traj));
    out << "samples=" << traj.size() << " final_abar=" << format_number(traj.series.back().abar)
        << " min_eigenvalue=" << format_number(traj.min_eigenvalue) << " out=" << o.out_path << "\n";
    return kExitOk;
}

struct LoccOpts {
    std::string alpha;
    std::string beta;
    bool exact = false;
};

int cmd_locc(const LoccOpts& o, std::ostream& out) {
    interconvert::ConversionReport r;
    ReportWriter w;
    std::optional<std::pair<interconvert::Rational, interconvert::Rational>> exact_p;
    if (o.exact) {
        const interconvert::ExactProbVec a(parse_rationals(o.alpha));
        const interconvert::ExactProbVec b(parse_rationals(o.beta));
        r = interconvert::preferred_direction(a, b);
        exact_p.emplace(interconvert::vidal_probability(a, b), interconvert::vidal_probability(b, a));
    } else {
        r = interconvert::preferred_direction(interconvert::ProbVec(parse_doubles(o.alpha)),
                                              interconvert::ProbVec(parse_doubles(o.beta)));
    }
    w.add("nielsen_forward", json_bool(r.deterministic_forward));
    w.add("nielsen_backward", json_bool(r.deterministic_backward));
    w.add("p_forward", json_number(r.p_forward));
    w.add("p_backward", json_number(r.p_backward));
    if (exact_p) {
        auto frac = [](const interconvert::Rational& q) {
            return json_string(std::to_string(q.numerator()) + "/" + std::to_string(q.denominator()));
        };
        w.add("p_forward_exact", frac(exact_p->first));
        w.add("p_backward_exact", frac(exact_p->second));
    }
    w.add("delta_a", json_list(r.delta_a));
    w.add("predicted_direction", json_string(interconvert::to_string(r.predicted_direction)));
    w.add("theorem2_index", std::to_string(r.theorem2_index + 1));
    w.add("theorem2_direction", json_string(interconvert::to_string(r.theorem2_direction)));
    w.add("largest_gap_direction", json_string(interconvert::to_string(r.largest_gap_direction)));
    out << w.str();
    return kExitOk;
}

struct ThermalOpts {
    std::string p;
    std::string q;
    std::string gibbs_d;
    bool exact = false;
};

int cmd_thermal(const ThermalOpts& o, std::ostream& out) {
    const interconvert::GibbsRational g(parse_ints(o.gibbs_d));
    std::vector<double> p_hat, q_hat;
    bool convertible = false;
    interconvert::Theorem3Check t3{};
    if (o.exact) {
        const interconvert::ExactProbVec p(parse_rationals(o.p));
        const interconvert::ExactProbVec q(parse_rationals(o.q));
        convertible = interconvert::thermal_convertible(p, q, g);
        t3 = interconvert::theorem3_check(p, q, g);
        p_hat = interconvert::embed(p, g).to_double().entries();
        q_hat = interconvert::embed(q, g).to_double().entries();
    } else {
        const interconvert::ProbVec p(parse_doubles(o.p));
        const interconvert::ProbVec q(parse_doubles(o.q));
        convertible = interconvert::thermal_convertible(p, q, g);
        t3 = interconvert::theorem3_check(p, q, g);
        p_hat = interconvert::embed(p, g).entries();
        q_hat = interconvert::embed(q, g).entries();
    }
    ReportWriter w;
    w.add("p_hat", json_list(p_hat));
    w.add("q_hat", json_list(q_hat));
    w.add("convertible", json_bool(convertible));
    w.add("abar_p_hat", json_number(t3.abar_p_hat));
    w.add("abar_q_hat", json_number(t3.abar_q_hat));
    w.add("theorem3_holds", json_bool(t3.inequality_holds));
    out << w.str();
    return kExitOk;
}

int cmd_figs(int which, const std::string& out_dir, std::ostream& out) {
    static const char* cases[] = {"fig1_sin_dephasing", "fig2_const_dephasing", "fig3_eternal_pauli",
                                  "fig3_eternal_pauli"};
    if (which < 1 || which > 4) throw SchemaError("figs: --which must be 1, 2, 3 or 4");
    const auto& c = scenarios::get_case(cases[which - 1]);
    const dynamics::Trajectory traj = dynamics::integrate(c.scenario(), clamp_eps_from_env());
    const fs::path dir(out_dir);
    std::error_code ec;
    fs::create_directories(dir, ec);
    const fs::path path = dir / ("fig" + std::to_string(which) + ".csv");
    write_atomic(path, series_csv(traj, which == 4 ? CsvLayout::channel_rates : CsvLayout::full));
    out << "wrote " << path.string() << " (" << traj.size() << " rows)\n";
    return kExitOk;
}

}  // namespace

// --------------------------------- public -----------------------------------

dynamics::Scenario parse_scenario(const std::string& json_text) {
    json doc;
    try {
        doc = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw SchemaError(std::string("malformed JSON: ") + e.what());
    }
    const std::string w = "scenario";
    reject_unknown(doc, {"name", "dim", "hamiltonian", "beta", "initial_state", "channels", "t_max", "dt",
                         "strict_normalization"},
                   w);
    const json& dim_v = require(doc, "dim", w);
    if (!dim_v.is_number_integer() || dim_v.get<long long>() < 1) {
        throw SchemaError("scenario.dim: expected a positive integer");
    }
    const auto dim = static_cast<Eigen::Index>(dim_v.get<long long>());

    const CMatrix h = parse_matrix(require(doc, "hamiltonian", w), dim, "scenario.hamiltonian");
    const CMatrix rho0 = parse_matrix(require(doc, "initial_state", w), dim, "scenario.initial_state");
    const double beta = as_number(require(doc, "beta", w), "scenario.beta");
    const double t_max = as_number(require(doc, "t_max", w), "scenario.t_max");
    const double dt = as_number(require(doc, "dt", w), "scenario.dt");

    const json& chans = require(doc, "channels", w);
    if (!chans.is_array()) throw SchemaError("scenario.channels: expected an array");
    std::vector<std::pair<CMatrix, dynamics::RateFn>> parsed;
    for (std::size_t k = 0; k < chans.size(); ++k) {
        const std::string cw = "scenario.channels[" + std::to_string(k) + "]";
        reject_unknown(chans[k], {"lindblad", "rate"}, cw);
        CMatrix l = parse_matrix(require(chans[k], "lindblad", cw), dim, cw + ".lindblad");
        parsed.emplace_back(std::move(l), parse_rate(require(chans[k], "rate", cw), cw + ".rate"));
    }

    dynamics::Scenario s;
    if (doc.contains("name")) {
        if (!doc.at("name").is_string()) throw SchemaError("scenario.name: expected a string");
        s.name = doc.at("name").get<std::string>();
    }
    if (doc.contains("strict_normalization")) {
        if (!doc.at("strict_normalization").is_boolean()) {
            throw SchemaError("scenario.strict_normalization: expected a boolean");
        }
        s.strict_normalization = doc.at("strict_normalization").get<bool>();
    }
    // numeric validation from here on
    s.hamiltonian = HermOp(h);
    s.initial_state = QState(rho0);
    s.beta = beta;
    s.t_max = t_max;
    s.dt = dt;
    for (auto& [l, rate] : parsed) s.channels.push_back({std::move(l), std::move(rate)});
    return s;
}

dynamics::Scenario load_scenario(const fs::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open scenario file " + path.string());
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_scenario(ss.str());
}

std::string format_number(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    if (v == 0.0) v = 0.0;
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.9g", v);
    return buf;
}

std::string format_fixed(double v) {
    if (v == 0.0) v = 0.0;
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.9f", v);
    return buf;
}

std::string series_csv(const dynamics::Trajectory& traj, CsvLayout layout) {
    const std::size_t k = traj.series.empty() ? 0 : traj.series.front().dabar.size();
    std::string s;
    s += "t";
    if (layout == CsvLayout::full) s += ",abar,dabar_total";
    for (std::size_t i = 0; i < k; ++i) s += ",dabar_" + std::to_string(i + 1);
    if (layout == CsvLayout::full) s += ",diS_dt,dS_dt,heat_rate,coherence";
    s += ",clamp_flag";
    if (layout == CsvLayout::full) s += ",min_eig";
    s += "\n";
    for (const auto& r : traj.series) {
        s += format_number(r.t);
        if (layout == CsvLayout::full) s += "," + format_number(r.abar) + "," + format_number(r.dabar_total);
        for (double d : r.dabar) s += "," + format_number(d);
        if (layout == CsvLayout::full) {
            s += "," + format_number(r.dis_dt) + "," + format_number(r.ds_dt) + "," +
                 format_number(r.heat_rate) + "," + format_number(r.coherence);
        }
        s += r.clamped ? ",1" : ",0";
        if (layout == CsvLayout::full) s += "," + format_number(r.min_eig);
        s += "\n";
    }
    return s;
}

void write_atomic(const fs::path& path, const std::string& content) {
    const fs::path dir = path.has_parent_path() ? path.parent_path() : fs::path(".");
    const fs::path tmp = dir / ("." + path.filename().string() + ".tmp." + std::to_string(::getpid()));
    {
        std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
        if (!f) throw IoError("cannot write " + tmp.string());
        f << content;
        f.flush();
        if (!f) throw IoError("write failed for " + tmp.string());
    }
    std::error_code ec;
    fs::rename(tmp, path, ec);
    if (ec) {
        fs::remove(tmp, ec);
        throw IoError("cannot rename onto " + path.string());
    }
}

double clamp_eps_from_env() {
    const char* v = std::getenv("QTFF_EPS");
    if (!v || !*v) return kDefaultClampEps;
    char* end = nullptr;
    const double eps = std::strtod(v, &end);
    if (*end != '\0' || !(eps > 0.0) || !std::isfinite(eps)) {
        throw ValidationError(std::string("QTFF_EPS must be a positive number, got '") + v + "'");
    }
    return eps;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Quantum thermodynamic force/flow, affinity rates and state interconversion"};
    app.require_subcommand(1);

    SimulateOpts sim;
    double sim_dt = 0.0, sim_tmax = 0.0;
    auto* simulate = app.add_subcommand("simulate", "Integrate a scenario and write its series CSV");
    simulate->add_option("--scenario", sim.scenario_path, "Scenario JSON file");
    simulate->add_option("--case", sim.case_name, "Registry case name");
    simulate->add_option("--out", sim.out_path, "Output CSV path")->required();
    auto* dt_opt = simulate->add_option("--dt", sim_dt, "Override time step");
    auto* tmax_opt = simulate->add_option("--t-max", sim_tmax, "Override final time");

    LoccOpts locc;
    auto* locc_cmd = app.add_subcommand("locc", "LOCC convertibility report for two Schmidt vectors");
    locc_cmd->add_option("--alpha", locc.alpha, "Comma-separated probability vector")->required();
    locc_cmd->add_option("--beta", locc.beta, "Comma-separated probability vector")->required();
    locc_cmd->add_flag("--exact", locc.exact, "Parse entries as exact rationals (a/b or decimals)");

    ThermalOpts thermal;
    auto* thermal_cmd = app.add_subcommand("thermal", "Thermal-operation convertibility via Gibbs embedding");
    thermal_cmd->add_option("--p", thermal.p, "Source populations")->required();
    thermal_cmd->add_option("--q", thermal.q, "Target populations")->required();
    thermal_cmd->add_option("--gibbs-d", thermal.gibbs_d, "Integer Gibbs weights D_i")->required();
    thermal_cmd->add_flag("--exact", thermal.exact, "Parse entries as exact rationals");

    int which = 0;
    std::string fig_dir;
    auto* figs = app.add_subcommand("figs", "Write figure series CSV");
    figs->add_option("--which", which, "Figure number 1-4")->required();
    figs->add_option("--out", fig_dir, "Output directory")->required();

    auto* list = app.add_subcommand("list", "List registry case names");

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n";
        return kExitSchema;
    }

    try {
        if (simulate->parsed()) {
            if (dt_opt->count()) sim.dt = sim_dt;
            if (tmax_opt->count()) sim.t_max = sim_tmax;
            return cmd_simulate(sim, out, err);
        }
        if (locc_cmd->parsed()) return cmd_locc(locc, out);
        if (thermal_cmd->parsed()) return cmd_thermal(thermal, out);
        if (figs->parsed()) return cmd_figs(which, fig_dir, out);
        if (list->parsed()) {
            for (const auto& name : scenarios::list_cases()) out << name << "\n";
            return kExitOk;
        }
    } catch (const SchemaError& e) {
        err << "schema error: " << e.what() << "\n";
        return kExitSchema;
    } catch (const scenarios::UnknownCaseError& e) {
        err << "schema error: " << e.what() << "\n";
        return kExitSchema;
    } catch (const dynamics::PositivityError& e) {
        err << "error: " << e.what() << "\n";
        return kExitPositivity;
    } catch (const ValidationError& e) {
        err << "numeric validation error: " << e.what() << "\n";
        return kExitNumeric;
    } catch (const IoError& e) {
        err << "I/O error: " << e.what() << "\n";
        return kExitIo;
    }
    return kExitSchema;
}

}  // namespace qtff::cli
