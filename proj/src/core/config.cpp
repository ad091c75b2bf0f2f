#include "config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

namespace gridsec {

const char* to_string(MitigationPolicy policy) {
  switch (policy) {
    case MitigationPolicy::none: return "none";
    case MitigationPolicy::local: return "local";
    case MitigationPolicy::previous_day: return "previous_day";
  }
  return "unknown";
}

NeighborhoodConfig ScenarioConfig::neighborhood() const {
  NeighborhoodConfig n;
  n.households = households;
  if (!participants.empty()) {
    n.participants = participants;
  } else {
    long count = std::lround(participation * households);
    count = std::clamp<long>(count, 1, households);
    for (long i = 0; i < count; ++i) n.participants.push_back(static_cast<int>(i));
  }
  if (attacker >= 0) {
    if (!n.is_participant(attacker)) n.participants.push_back(attacker);
    n.attacker_id = attacker;
  }
  std::sort(n.participants.begin(), n.participants.end());
  return n;
}

void ScenarioConfig::validate() const {
  if (intervals <= 0) throw DomainError("config: intervals must be positive");
  if (days < 1) throw DomainError("config: days must be >= 1");
  if (participation < 0.0 || participation > 1.0)
    throw DomainError("config: participation outside [0,1]");
  neighborhood().validate();
  battery.validate();
  tariff.validate();
  forecast.validate();
  if (demand.source == DemandSource::synthetic) demand.synthetic.validate();
  if (demand.source == DemandSource::csv && demand.csv_path.empty())
    throw DomainError("config: demand source is csv but no path given");
  if (attack) attack->validate();
  if (monitor) monitor->validate();
  if (game.max_rounds < 1) throw DomainError("config: game.max_rounds must be >= 1");
  if (!(game.epsilon_rel > 0.0)) throw DomainError("config: game.epsilon must be > 0");
}

namespace {

struct KeyValue {
  std::string section;
  std::string key;
  std::string value;
  int line = 0;
};

std::string trim(const std::string& s) {
  size_t b = s.find_first_not_of(" \t");
  if (b == std::string::npos) return "";
  size_t e = s.find_last_not_of(" \t");
  return s.substr(b, e - b + 1);
}

std::vector<KeyValue> tokenize(const std::string& text) {
  std::vector<KeyValue> out;
  std::istringstream is(text);
  std::string line, section;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const size_t hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']')
        throw ParseError("config line " + std::to_string(lineno) + ": malformed section");
      section = trim(line.substr(1, line.size() - 2));
      continue;
    }
    const size_t eq = line.find('=');
    if (eq == std::string::npos)
      throw ParseError("config line " + std::to_string(lineno) + ": expected key = value");
    KeyValue kv;
    kv.section = section;
    kv.key = trim(line.substr(0, eq));
    kv.value = trim(line.substr(eq + 1));
    kv.line = lineno;
    if (kv.key.empty())
      throw ParseError("config line " + std::to_string(lineno) + ": empty key");
    out.push_back(kv);
  }
  return out;
}

double parse_double(const KeyValue& kv) {
  try {
    size_t used = 0;
    const double v = std::stod(kv.value, &used);
    if (used != kv.value.size()) throw std::invalid_argument("trailing");
    return v;
  } catch (const std::exception&) {
    throw ParseError("config line " + std::to_string(kv.line) + ": '" + kv.value +
                     "' is not a number");
  }
}

long parse_long(const KeyValue& kv) {
  try {
    size_t used = 0;
    const long v = std::stol(kv.value, &used);
    if (used != kv.value.size()) throw std::invalid_argument("trailing");
    return v;
  } catch (const std::exception&) {
    throw ParseError("config line " + std::to_string(kv.line) + ": '" + kv.value +
                     "' is not an integer");
  }
}

uint64_t parse_seed(const KeyValue& kv) {
  try {
    size_t used = 0;
    const unsigned long long v = std::stoull(kv.value, &used);
    if (used != kv.value.size()) throw std::invalid_argument("trailing");
    return v;
  } catch (const std::exception&) {
    throw ParseError("config line " + std::to_string(kv.line) + ": '" + kv.value +
                     "' is not a seed");
  }
}

bool parse_bool(const KeyValue& kv) {
  if (kv.value == "true" || kv.value == "1" || kv.value == "yes") return true;
  if (kv.value == "false" || kv.value == "0" || kv.value == "no") return false;
  throw ParseError("config line " + std::to_string(kv.line) + ": '" + kv.value +
                   "' is not a boolean");
}

std::vector<int> parse_int_list(const KeyValue& kv) {
  std::vector<int> out;
  std::string item;
  std::istringstream is(kv.value);
  while (std::getline(is, item, ',')) {
    item = trim(item);
    if (item.empty()) continue;
    try {
      out.push_back(std::stoi(item));
    } catch (const std::exception&) {
      throw ParseError("config line " + std::to_string(kv.line) + ": '" + item +
                       "' is not an integer");
    }
  }
  return out;
}

void apply_kv(ScenarioConfig& c, const KeyValue& kv) {
  const std::string where = kv.section.empty() ? kv.key : kv.section + "." + kv.key;
  auto unknown = [&]() {
    throw ParseError("config line " + std::to_string(kv.line) + ": unknown key '" +
                     where + "'");
  };

  if (kv.section == "scenario") {
    if (kv.key == "intervals") c.intervals = static_cast<int>(parse_long(kv));
    else if (kv.key == "days") c.days = static_cast<int>(parse_long(kv));
    else if (kv.key == "seed") c.seed = parse_seed(kv);
    else unknown();
  } else if (kv.section == "neighborhood") {
    if (kv.key == "households") c.households = static_cast<int>(parse_long(kv));
    else if (kv.key == "participation") c.participation = parse_double(kv);
    else if (kv.key == "participants") c.participants = parse_int_list(kv);
    else if (kv.key == "attacker") c.attacker = static_cast<int>(parse_long(kv));
    else unknown();
  } else if (kv.section == "battery") {
    if (kv.key == "capacity") c.battery.capacity = parse_double(kv);
    else if (kv.key == "max_charge") c.battery.max_charge = parse_double(kv);
    else if (kv.key == "max_discharge") c.battery.max_discharge = parse_double(kv);
    else if (kv.key == "charge_efficiency") c.battery.charge_efficiency = parse_double(kv);
    else if (kv.key == "discharge_efficiency")
      c.battery.discharge_efficiency = parse_double(kv);
    else if (kv.key == "self_discharge") c.battery.self_discharge = parse_double(kv);
    else if (kv.key == "initial_soc") c.battery.initial_soc = parse_double(kv);
    else unknown();
  } else if (kv.section == "tariff") {
    if (kv.key == "c2") c.tariff.c2 = parse_double(kv);
    else if (kv.key == "c1") c.tariff.c1 = parse_double(kv);
    else if (kv.key == "c0") c.tariff.c0 = parse_double(kv);
    else unknown();
  } else if (kv.section == "forecast") {
    if (kv.key == "relative_sigma") c.forecast.relative_sigma = parse_double(kv);
    else if (kv.key == "target_mape") c.forecast.target_mape = parse_double(kv);
    else unknown();
  } else if (kv.section == "demand") {
    if (kv.key == "source") {
      if (kv.value == "synthetic") c.demand.source = DemandSource::synthetic;
      else if (kv.value == "csv") c.demand.source = DemandSource::csv;
      else
        throw ParseError("config line " + std::to_string(kv.line) +
                         ": demand.source must be synthetic or csv");
    } else if (kv.key == "path") c.demand.csv_path = kv.value;
    else if (kv.key == "base_load") c.demand.synthetic.base_load = parse_double(kv);
    else if (kv.key == "morning_peak") c.demand.synthetic.morning_peak = parse_double(kv);
    else if (kv.key == "evening_peak") c.demand.synthetic.evening_peak = parse_double(kv);
    else if (kv.key == "morning_hour") c.demand.synthetic.morning_hour = parse_double(kv);
    else if (kv.key == "evening_hour") c.demand.synthetic.evening_hour = parse_double(kv);
    else if (kv.key == "morning_width") c.demand.synthetic.morning_width = parse_double(kv);
    else if (kv.key == "evening_width") c.demand.synthetic.evening_width = parse_double(kv);
    else if (kv.key == "household_jitter")
      c.demand.synthetic.household_jitter = parse_double(kv);
    else if (kv.key == "shape_offset_range")
      c.demand.synthetic.shape_offset_range = static_cast<int>(parse_long(kv));
    else if (kv.key == "day_noise") c.demand.synthetic.day_noise = parse_double(kv);
    else unknown();
  } else if (kv.section == "attack") {
    if (kv.key == "kind") {
      if (kv.value == "none") c.attack.reset();
      else {
        if (!c.attack) c.attack.emplace();
        if (kv.value == "shift") c.attack->kind = AttackKind::shift;
        else if (kv.value == "scale") c.attack->kind = AttackKind::scale;
        else
          throw ParseError("config line " + std::to_string(kv.line) +
                           ": attack.kind must be none, shift or scale");
      }
    } else if (kv.key == "sigma") {
      if (!c.attack) c.attack.emplace();
      c.attack->sigma = static_cast<int>(parse_long(kv));
    } else if (kv.key == "tau") {
      if (!c.attack) c.attack.emplace();
      c.attack->tau = parse_double(kv);
    } else if (kv.key == "rho") {
      if (!c.attack) c.attack.emplace();
      c.attack->rho = parse_double(kv);
    } else if (kv.key == "seed") {
      if (!c.attack) c.attack.emplace();
      c.attack->seed = parse_seed(kv);
    } else unknown();
  } else if (kv.section == "monitor") {
    if (kv.key == "strategy") {
      if (kv.value == "none") c.monitor.reset();
      else {
        if (!c.monitor) c.monitor.emplace();
        if (kv.value == "average") c.monitor->level = MonitorLevel::average_amount;
        else if (kv.value == "deep_aggregated")
          c.monitor->level = MonitorLevel::deep_aggregated;
        else if (kv.value == "deep_individual")
          c.monitor->level = MonitorLevel::deep_individual;
        else
          throw ParseError("config line " + std::to_string(kv.line) +
                           ": monitor.strategy must be none, average, deep_aggregated "
                           "or deep_individual");
      }
    } else if (kv.key == "threshold") {
      if (!c.monitor) c.monitor.emplace();
      c.monitor->threshold = parse_double(kv);
    } else if (kv.key == "per_interval_max") {
      if (!c.monitor) c.monitor.emplace();
      c.monitor->per_interval_max = parse_bool(kv);
    } else unknown();
  } else if (kv.section == "mitigation") {
    if (kv.key == "policy") {
      if (kv.value == "none") c.mitigation = MitigationPolicy::none;
      else if (kv.value == "local") c.mitigation = MitigationPolicy::local;
      else if (kv.value == "previous_day") c.mitigation = MitigationPolicy::previous_day;
      else
        throw ParseError("config line " + std::to_string(kv.line) +
                         ": mitigation.policy must be none, local or previous_day");
    } else unknown();
  } else if (kv.section == "game") {
    if (kv.key == "max_rounds") c.game.max_rounds = static_cast<int>(parse_long(kv));
    else if (kv.key == "epsilon") c.game.epsilon_rel = parse_double(kv);
    else unknown();
  } else if (kv.section == "output") {
    if (kv.key == "directory") c.output_directory = kv.value;
    else unknown();
  } else {
    throw ParseError("config line " + std::to_string(kv.line) + ": unknown section '" +
                     kv.section + "'");
  }
}

}  // namespace

ScenarioConfig parse_scenario_config(const std::string& text) {
  ScenarioConfig c;
  for (const KeyValue& kv : tokenize(text)) apply_kv(c, kv);
  c.validate();
  return c;
}

ScenarioConfig load_scenario_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open config: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_scenario_config(ss.str());
}

void apply_override(ScenarioConfig& config, const std::string& dotted_key,
                    const std::string& value) {
  const size_t dot = dotted_key.find('.');
  if (dot == std::string::npos)
    throw ParseError("override '" + dotted_key + "': expected section.key");
  KeyValue kv;
  kv.section = dotted_key.substr(0, dot);
  kv.key = dotted_key.substr(dot + 1);
  kv.value = value;
  kv.line = 0;
  apply_kv(config, kv);
  config.validate();
}

std::string scenario_config_to_text(const ScenarioConfig& c) {
  std::ostringstream os;
  os.precision(17);
  os << "[scenario]\n";
  os << "intervals = " << c.intervals << "\n";
  os << "days = " << c.days << "\n";
  os << "seed = " << c.seed << "\n\n";
  os << "[neighborhood]\n";
  os << "households = " << c.households << "\n";
  if (!c.participants.empty()) {
    os << "participants = ";
    for (size_t i = 0; i < c.participants.size(); ++i)
      os << (i ? "," : "") << c.participants[i];
    os << "\n";
  } else {
    os << "participation = " << c.participation << "\n";
  }
  os << "attacker = " << c.attacker << "\n\n";
  os << "[battery]\n";
  os << "capacity = " << c.battery.capacity << "\n";
  os << "max_charge = " << c.battery.max_charge << "\n";
  os << "max_discharge = " << c.battery.max_discharge << "\n";
  os << "charge_efficiency = " << c.battery.charge_efficiency << "\n";
  os << "discharge_efficiency = " << c.battery.discharge_efficiency << "\n";
  os << "self_discharge = " << c.battery.self_discharge << "\n";
  os << "initial_soc = " << c.battery.initial_soc << "\n\n";
  os << "[tariff]\n";
  os << "c2 = " << c.tariff.c2 << "\n";
  os << "c1 = " << c.tariff.c1 << "\n";
  os << "c0 = " << c.tariff.c0 << "\n\n";
  os << "[forecast]\n";
  os << "relative_sigma = " << c.forecast.relative_sigma << "\n\n";
  os << "[demand]\n";
  if (c.demand.source == DemandSource::csv) {
    os << "source = csv\n";
    os << "path = " << c.demand.csv_path << "\n\n";
  } else {
    os << "source = synthetic\n";
    os << "base_load = " << c.demand.synthetic.base_load << "\n";
    os << "morning_peak = " << c.demand.synthetic.morning_peak << "\n";
    os << "evening_peak = " << c.demand.synthetic.evening_peak << "\n";
    os << "morning_hour = " << c.demand.synthetic.morning_hour << "\n";
    os << "evening_hour = " << c.demand.synthetic.evening_hour << "\n";
    os << "morning_width = " << c.demand.synthetic.morning_width << "\n";
    os << "evening_width = " << c.demand.synthetic.evening_width << "\n";
    os << "household_jitter = " << c.demand.synthetic.household_jitter << "\n";
    os << "shape_offset_range = " << c.demand.synthetic.shape_offset_range << "\n";
    os << "day_noise = " << c.demand.synthetic.day_noise << "\n\n";
  }
  os << "[attack]\n";
  if (c.attack) {
    os << "kind = " << (c.attack->kind == AttackKind::shift ? "shift" : "scale") << "\n";
    os << "sigma = " << c.attack->sigma << "\n";
    os << "tau = " << c.attack->tau << "\n";
    os << "rho = " << c.attack->rho << "\n";
    os << "seed = " << c.attack->seed << "\n\n";
  } else {
    os << "kind = none\n\n";
  }
  os << "[monitor]\n";
  if (c.monitor) {
    const char* name = c.monitor->level == MonitorLevel::average_amount ? "average"
                       : c.monitor->level == MonitorLevel::deep_aggregated
                           ? "deep_aggregated"
                           : "deep_individual";
    os << "strategy = " << name << "\n";
    os << "threshold = " << c.monitor->threshold << "\n";
    os << "per_interval_max = " << (c.monitor->per_interval_max ? "true" : "false")
       << "\n\n";
  } else {
    os << "strategy = none\n\n";
  }
  os << "[mitigation]\n";
  os << "policy = " << to_string(c.mitigation) << "\n\n";
  os << "[game]\n";
  os << "max_rounds = " << c.game.max_rounds << "\n";
  os << "epsilon = " << c.game.epsilon_rel << "\n\n";
  os << "[output]\n";
  os << "directory = " << c.output_directory << "\n";
  return os.str();
}

}  // namespace gridsec
