// hapdc: sweep runner for the terrestrial + HAP data-center model.

#include <array>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "hapdc/config.hpp"
#include "hapdc/error.hpp"
#include "hapdc/output.hpp"
#include "hapdc/sweep.hpp"
#include "hapdc/validation.hpp"

namespace {

constexpr int kExitUsage = 2;
constexpr int kExitNumerical = 3;
constexpr int kExitInfeasible = 4;

struct CommonOptions {
    std::string config_path;
    std::string out_path;
    std::string format = "csv";
    std::uint64_t seed = 1;
    long long samples = 0;
    unsigned workers = 0;
    std::optional<double> latitude;
    std::optional<double> day;
    std::optional<int> hap_servers;
    std::optional<int> ground_servers;
    std::optional<int> hap_count;
    std::optional<std::string> task_length;
};

struct SweepOptions {
    std::string axis;
    std::string range;
};

void add_common(CLI::App* cmd, CommonOptions& o) {
    cmd->add_option("--config", o.config_path, "JSON configuration file (defaults apply when omitted)");
    cmd->add_option("--out", o.out_path, "output file (stdout when omitted)");
    cmd->add_option("--format", o.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
    cmd->add_option("--seed", o.seed, "random seed");
    cmd->add_option("--samples", o.samples, "Monte Carlo draws or simulated tasks");
    cmd->add_option("--workers", o.workers, "worker threads (0 = all cores)");
    cmd->add_option("--latitude", o.latitude, "scenario latitude, degrees");
    cmd->add_option("--day", o.day, "scenario day of year");
    cmd->add_option("--hap-servers", o.hap_servers, "servers on each HAP (I')");
    cmd->add_option("--ground-servers", o.ground_servers, "terrestrial servers (I)");
    cmd->add_option("--hap-count", o.hap_count, "number of HAPs");
    cmd->add_option("--task-length", o.task_length, "instructions per task: small, large or a number");
}

void add_sweep(CLI::App* cmd, SweepOptions& s) {
    cmd->add_option("--axis", s.axis, "latitude, day, hap_servers or arrival_rate")->required();
    cmd->add_option("--range", s.range, "start:stop:step")->required();
}

hapdc::ModelConfig build_config(const CommonOptions& o) {
    hapdc::ModelConfig c = o.config_path.empty() ? hapdc::parse_config("") : hapdc::load_config(o.config_path);
    auto& sc = c.scenario;
    if (o.latitude) sc.latitude_deg = *o.latitude;
    if (o.day) sc.day_of_year = *o.day;
    if (o.hap_count) sc.hap_count = *o.hap_count;
    if (o.task_length) {
        if (*o.task_length == "small") {
            c.workload.task_length_instr = hapdc::WorkloadSpec::kSmallTaskLength;
        } else if (*o.task_length == "large") {
            c.workload.task_length_instr = hapdc::WorkloadSpec::kLargeTaskLength;
        } else {
            try {
                c.workload.task_length_instr = std::stod(*o.task_length);
            } catch (const std::exception&) {
                throw hapdc::UsageError("--task-length expects small, large or a number");
            }
        }
    }
    if (o.hap_servers || o.ground_servers) {
        if (o.hap_servers) sc.hap_servers = *o.hap_servers;
        if (o.ground_servers) sc.ground_servers = *o.ground_servers;
        sc.hap_rates.clear();
        sc.ground_rates.clear();
        hapdc::complete_rates(c);
    }
    hapdc::validate(c);
    return c;
}

hapdc::OutputFormat output_format(const CommonOptions& o) {
    return o.format == "json" ? hapdc::OutputFormat::Json : hapdc::OutputFormat::Csv;
}

void emit(const CommonOptions& o, const hapdc::Table& table, const hapdc::Manifest& manifest) {
    if (o.out_path.empty()) {
        hapdc::write_table(std::cout, table, manifest, output_format(o));
        return;
    }
    std::ofstream out(o.out_path, std::ios::binary);
    if (!out) throw hapdc::UsageError("cannot open output file " + o.out_path);
    hapdc::write_table(out, table, manifest, output_format(o));
}

int run_sweep(const std::string& command, const CommonOptions& o, const SweepOptions& s) {
    const auto config = build_config(o);
    hapdc::SweepSpec spec;
    spec.axis = hapdc::parse_axis(s.axis);
    hapdc::parse_range(s.range, spec);
    spec.seed = o.seed;
    spec.samples = o.samples;
    spec.workers = o.workers;

    hapdc::SweepResult result;
    if (command == "fly") {
        result = hapdc::run_flying_sweep(config, spec);
    } else if (command == "energy") {
        result = hapdc::run_energy_sweep(config, spec);
    } else if (command == "outage") {
        result = hapdc::run_outage_sweep(config, spec);
    } else {
        result = hapdc::run_delay_sweep(config, spec);
    }

    hapdc::Manifest manifest{command, hapdc::config_hash(config), o.seed, {}};
    manifest.extra = {{"axis", hapdc::to_string(spec.axis)}, {"range", s.range}, {"samples", std::to_string(o.samples)}};
    emit(o, result.table, manifest);
    if (result.feasible_points == 0) {
        std::cerr << "hapdc " << command << ": no feasible point in the sweep\n";
        return kExitInfeasible;
    }
    return 0;
}

int run_validate(const CommonOptions& o, bool quick) {
    const auto config = build_config(o);
    hapdc::validation::Options opts;
    opts.seed = o.seed;
    if (quick) {
        opts.outage_draws = 10000;
        opts.queue_tasks = 100000;
    }
    if (o.samples > 0) opts.outage_draws = static_cast<int>(o.samples);
    const auto results = hapdc::validation::run_all(config, opts);

    hapdc::Table table;
    table.columns = {"criterion", "check", "result", "seconds", "detail"};
    bool all = true;
    for (const auto& r : results) {
        all = all && r.pass;
        table.rows.push_back({r.id, r.name, std::string(r.pass ? "PASS" : "FAIL"), r.seconds, r.detail});
    }
    hapdc::Manifest manifest{"validate", hapdc::config_hash(config), o.seed, {{"quick", quick ? "yes" : "no"}}};
    emit(o, table, manifest);
    return all ? 0 : kExitNumerical;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Terrestrial + HAP data-center energy, outage and delay sweeps"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string("hapdc ") + hapdc::kToolVersion);

    CommonOptions common;
    SweepOptions sweep;
    bool quick = false;
    const std::array<std::pair<const char*, const char*>, 4> sweeps{{
        {"fly", "maximum workload under the flying condition"},
        {"energy", "all-ground vs hybrid energy and saving rate"},
        {"outage", "link CCDF bounds, Monte Carlo CCDF and retransmission saving"},
        {"delay", "queueing delay vs round-trip time"},
    }};
    for (const auto& [name, help] : sweeps) {
        auto* cmd = app.add_subcommand(name, help);
        add_common(cmd, common);
        add_sweep(cmd, sweep);
    }
    auto* validate = app.add_subcommand("validate", "run the oracle suites");
    add_common(validate, common);
    validate->add_flag("--quick", quick, "smaller Monte Carlo and simulation sizes");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitUsage;
    }

    try {
        if (validate->parsed()) return run_validate(common, quick);
        for (const auto& [name, help] : sweeps) {
            if (app.got_subcommand(name)) return run_sweep(name, common, sweep);
        }
        return kExitUsage;
    } catch (const hapdc::UsageError& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const hapdc::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const hapdc::ValidationError& e) {
        std::cerr << "invalid parameters: " << e.what() << "\n";
        return kExitUsage;
    } catch (const hapdc::Error& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return kExitNumerical;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitNumerical;
    }
}
