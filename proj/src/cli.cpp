#include "bmc/cli.hpp"

#include "bmc/control_cost.hpp"
#include "bmc/selftest.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <sstream>

namespace bmc {

namespace {

struct RunConfig {
    std::string command;
    double T = 0.5;
    double epsilon = 0.2;
    std::size_t K = 15;
    std::size_t grid_points = 1u << 17;
    double x_min = -2048.0;
    double x_max = 2048.0;
    std::string out_path;
    std::string format = "json";  // csv|json
    std::uint64_t seed = 1234;
    bool variant = false;
    std::vector<double> T_list;
    std::map<std::string, double> tols;
};

void apply_config_file(RunConfig& c, const std::string& path) {
    std::ifstream in(path);
    if (!in) throw CLI::ValidationError("--config", "cannot open " + path);
    nlohmann::json j;
    in >> j;
    if (j.contains("command")) c.command = j["command"].get<std::string>();
    if (j.contains("T")) c.T = j["T"].get<double>();
    if (j.contains("epsilon")) c.epsilon = j["epsilon"].get<double>();
    if (j.contains("K")) c.K = j["K"].get<std::size_t>();
    if (j.contains("grid_points")) c.grid_points = j["grid_points"].get<std::size_t>();
    if (j.contains("x_min")) c.x_min = j["x_min"].get<double>();
    if (j.contains("x_max")) c.x_max = j["x_max"].get<double>();
    if (j.contains("out")) c.out_path = j["out"].get<std::string>();
    if (j.contains("format")) c.format = j["format"].get<std::string>();
    if (j.contains("seed")) c.seed = j["seed"].get<std::uint64_t>();
    if (j.contains("variant")) c.variant = j["variant"].get<bool>();
    if (j.contains("T_list")) c.T_list = j["T_list"].get<std::vector<double>>();
    if (j.contains("tolerances"))
        for (auto& [k, v] : j["tolerances"].items()) c.tols[k] = v.get<double>();
}

void write_output(const RunConfig& c, const std::string& text) {
    if (c.out_path.empty()) return;
    std::ofstream out(c.out_path, std::ios::binary | std::ios::trunc);
    out << text;
}

ParticularOptions multiplier_options(const RunConfig& c) {
    ParticularOptions mo;
    if (c.x_max <= 0.0 || c.x_min >= 0.0 || std::abs(c.x_max + c.x_min) > 1e-9)
        throw CLI::ValidationError("--x-min/--x-max", "grid must be symmetric around 0");
    mo.x_half = c.x_max;
    mo.count = c.grid_points;
    mo.variant = c.variant;
    return mo;
}

int cmd_selftest(const RunConfig& c, std::string& out) {
    SelftestReport rep = run_selftest(c.tols, c.seed);
    out = rep.to_text();
    write_output(c, out);
    return rep.all_pass() ? 0 : 1;
}

int cmd_multiplier(const RunConfig& c, std::string& out) {
    MultiplierResult r = build_multiplier_particular(c.T, c.epsilon, multiplier_options(c));
    out = r.to_json() + "\n";
    write_output(c, out);
    return 0;
}

int cmd_family(const RunConfig& c, std::string& out) {
    ParticularOptions mo = multiplier_options(c);
    mo.variant = true;
    MultiplierResult r = build_multiplier_particular(c.T, c.epsilon, mo);
    BiorthogonalFamily fam = build_family(c.T, c.epsilon, c.K, r);
    BiorthReport rep = biorth_matrix(fam, c.K);
    if (c.format == "csv") {
        out = biorth_matrix_csv(rep, c.K);
    } else {
        nlohmann::json j = nlohmann::json::parse(fam.to_json(512));
        j["biorth_max_deviation"] = rep.max_deviation;
        out = j.dump(2) + "\n";
    }
    write_output(c, out);
    return rep.max_deviation <= 1e-3 ? 0 : 1;
}

int cmd_sweep(const RunConfig& c, std::string& out) {
    if (c.T_list.empty())
        throw CLI::ValidationError("--T-list", "sweep needs a decreasing T list");
    SweepOptions so;
    so.multiplier = multiplier_options(c);
    // resume: skip rows already present in an existing CSV
    const bool csv = c.format == "csv";
    std::ostringstream acc;
    acc.precision(17);
    if (csv && !c.out_path.empty() && std::filesystem::exists(c.out_path)) {
        std::ifstream in(c.out_path);
        std::string line;
        bool first = true;
        while (std::getline(in, line)) {
            if (first) { first = false; continue; }
            const auto comma = line.find(',');
            if (comma == std::string::npos) continue;
            try {
                so.skip_T.push_back(std::stod(line.substr(0, comma)));
            } catch (...) {}
        }
    }
    std::ofstream row_out;
    if (csv && !c.out_path.empty()) {
        const bool fresh = so.skip_T.empty();
        row_out.open(c.out_path, fresh ? std::ios::trunc : std::ios::app);
        if (fresh)
            row_out << "T,epsilon,K,cost,T_log_cost,certified_ceiling,biorth_dev,support_leakage,"
                       "error\n";
        so.row_sink = [&row_out](const CostRow& r) {
            std::ostringstream os;
            os.precision(17);
            os << std::scientific << r.T << "," << r.epsilon << "," << r.K << "," << r.cost << ","
               << r.T_log_cost << "," << r.certified_ceiling << "," << r.biorth_dev << ","
               << r.support_leakage << "," << r.error << "\n";
            row_out << os.str() << std::flush;
        };
    }
    CostCurve curve = cost_sweep(c.T_list, c.epsilon, c.K, so);
    out = csv ? curve.to_csv() : curve.to_json() + "\n";
    if (!csv) write_output(c, out);
    for (const auto& r : curve.rows)
        if (!r.error.empty()) return 1;
    return 0;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::string& out_text) {
    CLI::App app{"Beurling-Malliavin multipliers and Schroedinger boundary-control cost"};
    RunConfig c;
    std::string config_path;
    std::vector<std::string> tol_kv;
    app.add_option("--config", config_path, "JSON config file (flags override it)");
    app.add_option("--command", c.command, "selftest|multiplier|family|sweep")->required(false);
    app.add_option("--T", c.T, "control horizon");
    app.add_option("--epsilon", c.epsilon, "margin parameter in (0,1)");
    app.add_option("--K", c.K, "modal truncation");
    app.add_option("--grid-points", c.grid_points, "multiplier grid size (power of two)");
    app.add_option("--x-min", c.x_min, "grid left end");
    app.add_option("--x-max", c.x_max, "grid right end");
    app.add_option("--out", c.out_path, "output file");
    app.add_option("--format", c.format, "csv|json");
    app.add_option("--seed", c.seed, "RNG seed for the randomized checks");
    app.add_flag("--variant", c.variant, "use the omega_eps variant pipeline");
    app.add_option("--T-list", c.T_list, "decreasing T values for the sweep");
    app.add_option("--tol", tol_kv, "tolerance override name=value (repeatable)");

    std::vector<std::string> argv_like = args;
    std::reverse(argv_like.begin(), argv_like.end());
    try {
        // config file first, then flags on top
        for (std::size_t i = 0; i + 1 < args.size(); ++i)
            if (args[i] == "--config") apply_config_file(c, args[i + 1]);
        app.parse(argv_like);
        for (const auto& kv : tol_kv) {
            const auto eq = kv.find('=');
            if (eq == std::string::npos)
                throw CLI::ValidationError("--tol", "expected name=value");
            c.tols[kv.substr(0, eq)] = std::stod(kv.substr(eq + 1));
        }
        if (c.command.empty())
            throw CLI::ValidationError("--command", "one of selftest|multiplier|family|sweep");
        if (c.grid_points < 2 || (c.grid_points & (c.grid_points - 1)) != 0)
            throw CLI::ValidationError("--grid-points", "must be a power of two");
        if (!(c.epsilon > 0.0 && c.epsilon < 1.0))
            throw CLI::ValidationError("--epsilon", "must lie in (0,1)");
        if (c.format != "csv" && c.format != "json")
            throw CLI::ValidationError("--format", "csv or json");

        if (c.command == "selftest") return cmd_selftest(c, out_text);
        if (c.command == "multiplier") return cmd_multiplier(c, out_text);
        if (c.command == "family") return cmd_family(c, out_text);
        if (c.command == "sweep") return cmd_sweep(c, out_text);
        throw CLI::ValidationError("--command", "unknown command " + c.command);
    } catch (const CLI::ParseError& e) {
        std::ostringstream os;
        os << "usage error: " << e.what() << "\n";
        out_text = os.str();
        return 2;
    } catch (const std::invalid_argument& e) {
        out_text = std::string("usage error: ") + e.what() + "\n";
        return 2;
    } catch (const std::exception& e) {
        out_text = std::string("numerical failure: ") + e.what() + "\n";
        return 1;
    }
}

}  // namespace bmc
