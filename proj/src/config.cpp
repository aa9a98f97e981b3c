#include "hapdc/config.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include <json.hpp>

#include "hapdc/error.hpp"

namespace hapdc {

using json = nlohmann::json;

double ChannelConfig::noise_power_w() const {
    if (noise_power) return *noise_power;
    const double psd_w_hz = std::pow(10.0, (noise_psd_dbm_hz - 30.0) / 10.0);
    return psd_w_hz * bandwidth_hz;
}

double ChannelConfig::rx_snr() const {
    if (avg_rx_snr) return *avg_rx_snr;
    return tx_power * path_gain() / (static_cast<double>(tx_antennas) * noise_power_w());
}

namespace {

// Index of the grid cell containing x and the interpolation weight, clamped to the grid.
std::pair<std::size_t, double> locate(const std::vector<double>& grid, double x) {
    if (grid.size() == 1 || x <= grid.front()) return {0, 0.0};
    if (x >= grid.back()) return {grid.size() - 2, 1.0};
    const auto it = std::upper_bound(grid.begin(), grid.end(), x);
    const std::size_t hi = static_cast<std::size_t>(it - grid.begin());
    const std::size_t lo = hi - 1;
    return {lo, (x - grid[lo]) / (grid[hi] - grid[lo])};
}

}  // namespace

double WindModel::speed(double latitude_deg, double day) const {
    if (table_speeds.empty()) return constant_speed;
    const std::size_t nd = table_days.size();
    auto at = [&](std::size_t i, std::size_t j) { return table_speeds[i * nd + j]; };
    const auto [i, wl] = locate(table_latitudes, latitude_deg);
    const auto [j, wd] = locate(table_days, day);
    const std::size_t i1 = std::min(i + 1, table_latitudes.size() - 1);
    const std::size_t j1 = std::min(j + 1, nd - 1);
    const double lo = at(i, j) * (1.0 - wd) + at(i, j1) * wd;
    const double hi = at(i1, j) * (1.0 - wd) + at(i1, j1) * wd;
    return lo * (1.0 - wl) + hi * wl;
}

namespace {

// Reads the wind lookup table: a header line, then latitude_deg,day,speed rows
// covering a full rectangular grid.
void load_wind_table(WindModel& wind, const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("wind table not readable: " + path.string());
    std::string line;
    std::getline(in, line);
    std::map<std::pair<double, double>, double> cells;
    std::vector<double> lats, days;
    int line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line[0] == '#') continue;
        std::replace(line.begin(), line.end(), ',', ' ');
        std::istringstream row(line);
        double lat = 0, day = 0, v = 0;
        if (!(row >> lat >> day >> v))
            throw ConfigError("wind table " + path.string() + ": malformed line " + std::to_string(line_no));
        cells[{lat, day}] = v;
        lats.push_back(lat);
        days.push_back(day);
    }
    auto unique_sorted = [](std::vector<double>& v) {
        std::sort(v.begin(), v.end());
        v.erase(std::unique(v.begin(), v.end()), v.end());
    };
    unique_sorted(lats);
    unique_sorted(days);
    if (lats.empty() || cells.size() != lats.size() * days.size())
        throw ConfigError("wind table " + path.string() + " must cover a full latitude x day grid");
    wind.table_latitudes = lats;
    wind.table_days = days;
    wind.table_speeds.clear();
    for (double lat : lats)
        for (double day : days) wind.table_speeds.push_back(cells.at({lat, day}));
}

// Strict reader for one config section: every key must be consumed.
class Section {
public:
    Section(const json& root, const char* name) : name_(name) {
        if (!root.contains(name)) return;
        const json& node = root.at(name);
        if (!node.is_object()) throw ConfigError(std::string("section '") + name + "' must be an object");
        node_ = &node;
    }

    template <typename T>
    void read(const char* key, T& out) {
        if (!node_ || !node_->contains(key)) return;
        seen_.emplace_back(key);
        try {
            out = node_->at(key).get<T>();
        } catch (const json::exception&) {
            throw ConfigError(name_ + "." + key + ": wrong type");
        }
    }

    template <typename T>
    void read(const char* key, std::optional<T>& out) {
        if (!node_ || !node_->contains(key)) return;
        seen_.emplace_back(key);
        const json& v = node_->at(key);
        if (v.is_null()) {
            out.reset();
            return;
        }
        try {
            out = v.get<T>();
        } catch (const json::exception&) {
            throw ConfigError(name_ + "." + key + ": wrong type");
        }
    }

    const json* child(const char* key) {
        if (!node_ || !node_->contains(key)) return nullptr;
        seen_.emplace_back(key);
        return &node_->at(key);
    }

    void finish() const {
        if (!node_) return;
        for (const auto& item : node_->items()) {
            if (std::find(seen_.begin(), seen_.end(), item.key()) == seen_.end())
                throw ConfigError("unknown key " + name_ + "." + item.key());
        }
    }

private:
    std::string name_;
    const json* node_ = nullptr;
    std::vector<std::string> seen_;
};

Precoding parse_precoding(const std::string& s) {
    if (s == "isotropic") return Precoding::Isotropic;
    if (s == "mrt") return Precoding::Mrt;
    throw ConfigError("channel.precoding must be \"isotropic\" or \"mrt\", got \"" + s + "\"");
}

DemandMapping parse_mapping(const std::string& s) {
    if (s == "bandwidth") return DemandMapping::Bandwidth;
    if (s == "identity") return DemandMapping::Identity;
    throw ConfigError("channel.demand_mapping must be \"bandwidth\" or \"identity\", got \"" + s + "\"");
}

void require(bool ok, const std::string& what) {
    if (!ok) throw ValidationError(what);
}

}  // namespace

ModelConfig parse_config(const std::string& text, const std::filesystem::path& base_dir) {
    ModelConfig cfg;
    if (std::all_of(text.begin(), text.end(), [](unsigned char c) { return std::isspace(c); })) {
        complete_rates(cfg);
        validate(cfg);
        return cfg;
    }

    json root;
    try {
        root = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("config parse error: ") + e.what());
    }
    if (!root.is_object()) throw ConfigError("config root must be an object");
    static const std::vector<std::string> sections = {"server",  "workload", "cooling", "hap",
                                                      "channel", "queue",    "wind",    "scenario"};
    for (const auto& item : root.items()) {
        if (std::find(sections.begin(), sections.end(), item.key()) == sections.end())
            throw ConfigError("unknown section '" + item.key() + "'");
    }

    {
        Section s(root, "server");
        auto& v = cfg.server;
        s.read("service_rate_mips", v.service_rate_mips);
        s.read("p_idle", v.p_idle);
        s.read("p_peak", v.p_peak);
        s.read("desired_utilization", v.desired_utilization);
        s.read("heat_capacity", v.heat_capacity);
        s.read("thermal_resistance", v.thermal_resistance);
        s.read("mass", v.mass);
        s.finish();
    }
    {
        Section s(root, "workload");
        auto& v = cfg.workload;
        s.read("arrival_rate_total", v.arrival_rate_total);
        if (const json* tl = s.child("task_length_instr")) {
            if (tl->is_string()) {
                const auto name = tl->get<std::string>();
                if (name == "small") v.task_length_instr = WorkloadSpec::kSmallTaskLength;
                else if (name == "large") v.task_length_instr = WorkloadSpec::kLargeTaskLength;
                else throw ConfigError("workload.task_length_instr preset must be \"small\" or \"large\"");
            } else if (tl->is_number()) {
                v.task_length_instr = tl->get<double>();
            } else {
                throw ConfigError("workload.task_length_instr: wrong type");
            }
        }
        s.read("bits_per_instruction", v.bits_per_instruction);
        s.read("overhead_ratio", v.overhead_ratio);
        s.finish();
    }
    {
        Section s(root, "cooling");
        auto& v = cfg.cooling;
        s.read("crac_count", v.crac_count);
        s.read("supply_temp", v.supply_temp);
        s.read("fan_power", v.fan_power);
        if (const json* fan = s.child("fan"); fan && !fan->is_null()) {
            json wrapper = {{"fan", *fan}};
            Section f(wrapper, "fan");
            FanDetail d;
            f.read("air_flow_rate", d.air_flow_rate);
            f.read("pressure_loss", d.pressure_loss);
            f.read("fan_efficiency", d.fan_efficiency);
            f.read("motor_efficiency", d.motor_efficiency);
            f.finish();
            v.fan = d;
        }
        s.read("air_heat_capacity_flow", v.air_heat_capacity_flow);
        s.read("recirculation_raise", v.recirculation_raise);
        s.read("crac_influence_rate", v.crac_influence_rate);
        s.read("t_in_initial", v.t_in_initial);
        s.read("t_cpu_initial", v.t_cpu_initial);
        s.read("cop_in_celsius", v.cop_in_celsius);
        s.finish();
    }
    {
        Section s(root, "hap");
        auto& v = cfg.platform;
        s.read("pv_area", v.pv_area);
        s.read("pv_efficiency", v.pv_efficiency);
        s.read("propeller_efficiency", v.propeller_efficiency);
        s.read("air_density", v.air_density);
        s.read("air_viscosity", v.air_viscosity);
        s.read("body_length", v.body_length);
        s.read("body_diameter", v.body_diameter);
        s.read("hap_velocity", v.hap_velocity);
        s.read("drag_constant", v.drag_constant);
        s.read("payload_capacity", v.payload_capacity);
        s.read("rack_mass", v.rack_mass);
        s.read("harvest_hours_divisor", v.harvest_hours_divisor);
        s.finish();
    }
    {
        Section s(root, "channel");
        auto& v = cfg.channel;
        s.read("tx_antennas", v.tx_antennas);
        s.read("rx_antennas", v.rx_antennas);
        s.read("carrier_hz", v.carrier_hz);
        s.read("bandwidth_hz", v.bandwidth_hz);
        s.read("rician_factor", v.rician_factor);
        s.read("ref_gain", v.ref_gain);
        s.read("link_distance", v.link_distance);
        s.read("tx_power", v.tx_power);
        s.read("noise_psd_dbm_hz", v.noise_psd_dbm_hz);
        s.read("noise_power", v.noise_power);
        s.read("avg_rx_snr", v.avg_rx_snr);
        std::string precoding, mapping;
        s.read("precoding", precoding);
        if (!precoding.empty()) v.precoding = parse_precoding(precoding);
        s.read("demand_mapping", mapping);
        if (!mapping.empty()) v.demand_mapping = parse_mapping(mapping);
        s.read("rate_samples", v.rate_samples);
        s.read("rate_seed", v.rate_seed);
        s.finish();
    }
    {
        Section s(root, "queue");
        s.read("service_rate", cfg.queue.service_rate);
        s.read("vacation_rate", cfg.queue.vacation_rate);
        s.finish();
    }
    {
        Section s(root, "wind");
        s.read("constant_speed", cfg.wind.constant_speed);
        s.read("table_path", cfg.wind.table_path);
        s.finish();
        if (cfg.wind.table_path) {
            std::filesystem::path p(*cfg.wind.table_path);
            if (p.is_relative() && !base_dir.empty()) p = base_dir / p;
            load_wind_table(cfg.wind, p);
        }
    }
    {
        Section s(root, "scenario");
        auto& v = cfg.scenario;
        s.read("latitude_deg", v.latitude_deg);
        s.read("day_of_year", v.day_of_year);
        if (const json* w = s.child("window")) {
            if (!w->is_array() || w->size() != 2 || !(*w)[0].is_number() || !(*w)[1].is_number())
                throw ConfigError("scenario.window must be [t1, t2]");
            v.window = Window{(*w)[0].get<double>(), (*w)[1].get<double>()};
        }
        s.read("ground_servers", v.ground_servers);
        s.read("hap_servers", v.hap_servers);
        s.read("hap_count", v.hap_count);
        s.read("ground_rates", v.ground_rates);
        s.read("hap_rates", v.hap_rates);
        s.finish();
    }

    complete_rates(cfg);
    validate(cfg);
    return cfg;
}

ModelConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("config file not readable: " + path.string());
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_config(buf.str(), path.parent_path());
}

std::string serialize_config(const ModelConfig& c) {
    json root;
    root["server"] = {
        {"service_rate_mips", c.server.service_rate_mips},
        {"p_idle", c.server.p_idle},
        {"p_peak", c.server.p_peak},
        {"desired_utilization", c.server.desired_utilization},
        {"heat_capacity", c.server.heat_capacity},
        {"thermal_resistance", c.server.thermal_resistance},
        {"mass", c.server.mass},
    };
    root["workload"] = {
        {"arrival_rate_total", c.workload.arrival_rate_total},
        {"task_length_instr", c.workload.task_length_instr},
        {"bits_per_instruction", c.workload.bits_per_instruction},
        {"overhead_ratio", c.workload.overhead_ratio},
    };
    json cooling = {
        {"crac_count", c.cooling.crac_count},
        {"supply_temp", c.cooling.supply_temp},
        {"fan_power", c.cooling.fan_power},
        {"air_heat_capacity_flow", c.cooling.air_heat_capacity_flow},
        {"recirculation_raise", c.cooling.recirculation_raise},
        {"crac_influence_rate", c.cooling.crac_influence_rate},
        {"t_in_initial", c.cooling.t_in_initial},
        {"t_cpu_initial", c.cooling.t_cpu_initial},
        {"cop_in_celsius", c.cooling.cop_in_celsius},
    };
    if (c.cooling.fan) {
        cooling["fan"] = {
            {"air_flow_rate", c.cooling.fan->air_flow_rate},
            {"pressure_loss", c.cooling.fan->pressure_loss},
            {"fan_efficiency", c.cooling.fan->fan_efficiency},
            {"motor_efficiency", c.cooling.fan->motor_efficiency},
        };
    }
    root["cooling"] = cooling;
    root["hap"] = {
        {"pv_area", c.platform.pv_area},
        {"pv_efficiency", c.platform.pv_efficiency},
        {"propeller_efficiency", c.platform.propeller_efficiency},
        {"air_density", c.platform.air_density},
        {"air_viscosity", c.platform.air_viscosity},
        {"body_length", c.platform.body_length},
        {"body_diameter", c.platform.body_diameter},
        {"hap_velocity", c.platform.hap_velocity},
        {"drag_constant", c.platform.drag_constant},
        {"payload_capacity", c.platform.payload_capacity},
        {"rack_mass", c.platform.rack_mass},
        {"harvest_hours_divisor", c.platform.harvest_hours_divisor},
    };
    json channel = {
        {"tx_antennas", c.channel.tx_antennas},
        {"rx_antennas", c.channel.rx_antennas},
        {"carrier_hz", c.channel.carrier_hz},
        {"bandwidth_hz", c.channel.bandwidth_hz},
        {"rician_factor", c.channel.rician_factor},
        {"ref_gain", c.channel.ref_gain},
        {"link_distance", c.channel.link_distance},
        {"tx_power", c.channel.tx_power},
        {"noise_psd_dbm_hz", c.channel.noise_psd_dbm_hz},
        {"precoding", c.channel.precoding == Precoding::Mrt ? "mrt" : "isotropic"},
        {"demand_mapping", c.channel.demand_mapping == DemandMapping::Identity ? "identity" : "bandwidth"},
        {"rate_samples", c.channel.rate_samples},
        {"rate_seed", c.channel.rate_seed},
    };
    if (c.channel.noise_power) channel["noise_power"] = *c.channel.noise_power;
    if (c.channel.avg_rx_snr) channel["avg_rx_snr"] = *c.channel.avg_rx_snr;
    root["channel"] = channel;
    root["queue"] = {{"service_rate", c.queue.service_rate}, {"vacation_rate", c.queue.vacation_rate}};
    json wind = {{"constant_speed", c.wind.constant_speed}};
    if (c.wind.table_path) wind["table_path"] = *c.wind.table_path;
    root["wind"] = wind;
    root["scenario"] = {
        {"latitude_deg", c.scenario.latitude_deg},
        {"day_of_year", c.scenario.day_of_year},
        {"window", {c.scenario.window.t1, c.scenario.window.t2}},
        {"ground_servers", c.scenario.ground_servers},
        {"hap_servers", c.scenario.hap_servers},
        {"hap_count", c.scenario.hap_count},
        {"ground_rates", c.scenario.ground_rates},
        {"hap_rates", c.scenario.hap_rates},
    };
    // nlohmann::json objects are std::map-backed, so key order is stable.
    return root.dump(2) + "\n";
}

void complete_rates(ModelConfig& cfg) {
    auto& sc = cfg.scenario;
    if (sc.ground_servers < 0 || sc.hap_servers < 0) return;  // reported by validate
    const int total = sc.ground_servers + sc.hap_servers;
    const double per_server = total > 0 ? cfg.workload.arrival_rate_total / total : 0.0;
    if (sc.ground_rates.empty()) sc.ground_rates.assign(static_cast<std::size_t>(sc.ground_servers), per_server);
    if (sc.hap_rates.empty()) sc.hap_rates.assign(static_cast<std::size_t>(sc.hap_servers), per_server);
}

void validate(const ModelConfig& c) {
    const auto& s = c.server;
    require(s.p_idle > 0.0 && s.p_peak > s.p_idle, "ServerSpec: requires p_peak > p_idle > 0");
    require(s.service_rate_mips > 0.0, "ServerSpec: service_rate_mips must be positive");
    require(s.desired_utilization > 0.0 && s.desired_utilization <= 1.0,
            "ServerSpec: desired_utilization must lie in (0, 1]");
    require(s.heat_capacity > 0.0, "ServerSpec: heat_capacity must be positive");
    require(s.thermal_resistance > 0.0, "ServerSpec: thermal_resistance must be positive");
    require(s.mass > 0.0, "ServerSpec: mass must be positive");

    const auto& w = c.workload;
    require(w.arrival_rate_total >= 0.0, "WorkloadSpec: arrival_rate_total must be non-negative");
    require(w.task_length_instr > 0.0, "WorkloadSpec: task_length_instr must be positive");
    require(w.bits_per_instruction > 0.0, "WorkloadSpec: bits_per_instruction must be positive");
    require(w.overhead_ratio >= 1.0, "WorkloadSpec: overhead_ratio must be >= 1");

    const auto& k = c.cooling;
    require(k.crac_count >= 1, "CoolingSpec: crac_count must be >= 1");
    require(k.supply_temp >= 273.0 && k.supply_temp <= 320.0, "CoolingSpec: supply_temp must lie in [273, 320] K");
    require(k.fan_power_w() >= 0.0, "CoolingSpec: fan power must be non-negative");
    if (k.fan) {
        require(k.fan->fan_efficiency > 0.0 && k.fan->motor_efficiency > 0.0,
                "CoolingSpec: fan efficiencies must be positive");
    }
    require(k.air_heat_capacity_flow > 0.0, "CoolingSpec: air_heat_capacity_flow must be positive");
    require(k.recirculation_raise >= 0.0, "CoolingSpec: recirculation_raise must be non-negative");
    require(k.crac_influence_rate > 0.0, "CoolingSpec: crac_influence_rate must be positive");
    require(k.t_in_initial > 0.0 && k.t_cpu_initial > 0.0, "CoolingSpec: initial temperatures must be positive");

    const auto& p = c.platform;
    require(p.pv_efficiency >= 0.0 && p.pv_efficiency <= 1.0, "HapPlatform: pv_efficiency must lie in [0, 1]");
    require(p.propeller_efficiency > 0.0 && p.propeller_efficiency <= 1.0,
            "HapPlatform: propeller_efficiency must lie in (0, 1]");
    require(p.pv_area >= 0.0, "HapPlatform: pv_area must be non-negative");
    require(p.air_density > 0.0 && p.air_viscosity > 0.0, "HapPlatform: air properties must be positive");
    require(p.body_length > 0.0 && p.body_diameter > 0.0, "HapPlatform: geometry must be positive");
    require(p.hap_velocity > 0.0, "HapPlatform: hap_velocity must be positive");
    require(p.drag_constant > 0.0, "HapPlatform: drag_constant must be positive");
    require(p.rack_mass >= 0.0 && p.payload_capacity >= p.rack_mass,
            "HapPlatform: requires payload_capacity >= rack_mass >= 0");
    require(p.harvest_hours_divisor > 0.0, "HapPlatform: harvest_hours_divisor must be positive");

    const auto& ch = c.channel;
    require(ch.tx_antennas >= 1 && ch.rx_antennas >= 1, "ChannelConfig: antenna counts must be >= 1");
    require(ch.rician_factor >= 0.0, "ChannelConfig: rician_factor must be >= 0");
    require(ch.carrier_hz > 0.0 && ch.bandwidth_hz > 0.0, "ChannelConfig: frequencies must be positive");
    require(ch.ref_gain > 0.0 && ch.link_distance > 0.0, "ChannelConfig: path parameters must be positive");
    require(ch.tx_power >= 0.0, "ChannelConfig: tx_power must be non-negative");
    require(ch.noise_power_w() > 0.0, "ChannelConfig: noise power must be positive");
    require(!ch.avg_rx_snr || *ch.avg_rx_snr > 0.0, "ChannelConfig: avg_rx_snr must be positive");
    require(ch.rate_samples >= 1, "ChannelConfig: rate_samples must be >= 1");

    require(c.queue.service_rate > 0.0 && c.queue.vacation_rate > 0.0, "QueueSpec: rates must be positive");
    require(c.wind.constant_speed >= 0.0, "WindModel: constant_speed must be non-negative");
    require(std::all_of(c.wind.table_speeds.begin(), c.wind.table_speeds.end(), [](double v) { return v >= 0.0; }),
            "WindModel: table speeds must be non-negative");

    const auto& sc = c.scenario;
    require(std::abs(sc.latitude_deg) <= 90.0, "Scenario: |latitude_deg| must be <= 90");
    require(sc.day_of_year >= 1.0 && sc.day_of_year <= 366.0, "Scenario: day_of_year must lie in [1, 366]");
    require(sc.window.t2 > sc.window.t1, "Scenario: window requires t2 > t1");
    require(sc.ground_servers >= 0 && sc.hap_servers >= 0, "Scenario: server counts must be non-negative");
    require(sc.hap_count >= 1, "Scenario: hap_count must be >= 1");
    require(sc.ground_rates.size() == static_cast<std::size_t>(sc.ground_servers),
            "Scenario: ground_rates length must equal ground_servers");
    require(sc.hap_rates.size() == static_cast<std::size_t>(sc.hap_servers),
            "Scenario: hap_rates length must equal hap_servers");
    const double threshold = high_load_threshold(s, w.task_length_instr);
    for (const auto* rates : {&sc.ground_rates, &sc.hap_rates}) {
        for (double r : *rates) {
            require(r >= 0.0, "Scenario: arrival rates must be non-negative");
            require(r <= threshold * (1.0 + 1e-12), "Scenario: per-server utilization exceeds desired_utilization");
        }
    }
}

int max_hap_servers(const HapPlatform& platform, const ServerSpec& server) {
    const double slack = platform.payload_capacity - platform.rack_mass;
    if (slack <= 0.0) return 0;
    // Tolerate representation error in exact divisions such as 450/9.
    return static_cast<int>(std::floor(slack / server.mass * (1.0 + 1e-12)));
}

std::vector<double> uniform_split(double total_rate, int servers) {
    if (servers < 1) throw ValidationError("uniform_split: at least one server is required");
    if (total_rate < 0.0) throw ValidationError("uniform_split: total_rate must be non-negative");
    return std::vector<double>(static_cast<std::size_t>(servers), total_rate / servers);
}

double utilization(const ServerSpec& server, double rate, double task_length_instr) {
    return task_length_instr * rate / server.service_rate_ips();
}

double high_load_threshold(const ServerSpec& server, double task_length_instr) {
    return server.desired_utilization * server.service_rate_ips() / task_length_instr;
}

unsigned long long config_hash(const ModelConfig& config) {
    unsigned long long h = 1469598103934665603ULL;
    for (unsigned char ch : serialize_config(config)) {
        h ^= ch;
        h *= 1099511628211ULL;
    }
    return h;
}

}  // namespace hapdc
