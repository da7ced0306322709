// Copyright 2026 The ivcg Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "ivcg/scenario.hpp"

#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>

#include "ivcg/errors.hpp"
#include "ivcg/format.hpp"
#include "json.hpp"

namespace ivcg {

namespace {

using json = nlohmann::json;

struct Line {
  std::size_t number;
  std::vector<std::string> tokens;
};

std::vector<Line> tokenize(std::istream& in) {
  std::vector<Line> out;
  std::string text;
  std::size_t number = 0;
  while (std::getline(in, text)) {
    ++number;
    if (auto hash = text.find('#'); hash != std::string::npos) text.erase(hash);
    std::istringstream ss(text);
    Line line{number, {}};
    for (std::string tok; ss >> tok;) line.tokens.push_back(tok);
    if (!line.tokens.empty()) out.push_back(std::move(line));
  }
  return out;
}

double number_at(const Line& line, std::size_t pos, const std::string& source, const char* what) {
  auto v = parse_number(line.tokens.at(pos));
  if (!v) {
    throw ParseError(source, line.number,
                     std::string("expected a number for ") + what + ", got '" +
                         line.tokens[pos] + "'");
  }
  return *v;
}

int integer_at(const Line& line, std::size_t pos, const std::string& source, const char* what) {
  const double v = number_at(line, pos, source, what);
  if (v != std::floor(v) || std::abs(v) > 1e9)
    throw ParseError(source, line.number, std::string("expected an integer for ") + what);
  return static_cast<int>(v);
}

void expect_fields(const Line& line, std::size_t n, const std::string& source) {
  if (line.tokens.size() != n) {
    throw ParseError(source, line.number,
                     "'" + line.tokens[0] + "' expects " + std::to_string(n - 1) + " fields, got " +
                         std::to_string(line.tokens.size() - 1));
  }
}

// Re-throws a domain error raised while building a validated value with the
// record's location in front.
template <typename F>
auto at_location(const std::string& source, std::size_t line, F&& build) {
  try {
    return build();
  } catch (const ParseError&) {
    throw;
  } catch (const DanglingReferenceError& e) {
    throw DanglingReferenceError(source + ":" + std::to_string(line) + ": " + e.what());
  } catch (const InvariantError& e) {
    throw InvariantError(source + ":" + std::to_string(line) + ": " + e.what());
  } catch (const InputError& e) {
    throw InputError(source + ":" + std::to_string(line) + ": " + e.what());
  }
}

EdgeStatus parse_status(const Line& line, std::size_t pos, const std::string& source) {
  const int v = integer_at(line, pos, source, "status");
  if (v < 0 || v > 2) throw ParseError(source, line.number, "status must be 0, 1 or 2");
  return static_cast<EdgeStatus>(v);
}

}  // namespace

MobilityNetwork parse_network(std::istream& in, const std::string& source) {
  std::vector<std::string> regions;
  std::vector<CityNode> cities;
  std::vector<NetEdge> edges;
  std::map<std::string, std::size_t> edge_lines;
  std::size_t last_line = 0;
  for (const auto& line : tokenize(in)) {
    last_line = line.number;
    const std::string& kind = line.tokens[0];
    if (kind == "region") {
      expect_fields(line, 2, source);
      regions.push_back(line.tokens[1]);
    } else if (kind == "city") {
      expect_fields(line, 7, source);
      CityNode c;
      c.id = line.tokens[1];
      c.region = line.tokens[2];
      c.population = number_at(line, 3, source, "population");
      c.access_km[index(Mode::Rail)] = number_at(line, 4, source, "rail access");
      c.access_km[index(Mode::Air)] = number_at(line, 5, source, "air access");
      c.access_km[index(Mode::Car)] = number_at(line, 6, source, "car access");
      // Validate the record on its own so errors carry this line.
      at_location(source, line.number, [&] {
        return MobilityNetwork(regions.empty() ? std::vector<std::string>{c.region} : regions, {c},
                               {});
      });
      cities.push_back(std::move(c));
    } else if (kind == "edge") {
      expect_fields(line, 10, source);
      NetEdge e;
      e.id = line.tokens[1];
      e.a = line.tokens[2];
      e.b = line.tokens[3];
      e.mode = at_location(source, line.number, [&] { return parse_mode(line.tokens[4]); });
      e.status = parse_status(line, 5, source);
      e.construction_remaining = integer_at(line, 6, source, "construction years");
      e.length_km = number_at(line, 7, source, "length");
      e.speed_kmh = number_at(line, 8, source, "speed");
      e.cost = number_at(line, 9, source, "cost");
      edge_lines[e.id] = line.number;
      edges.push_back(std::move(e));
    } else {
      throw ParseError(source, line.number, "unknown record '" + kind + "'");
    }
  }
  if (regions.empty()) throw ParseError(source, last_line, "network declares no regions");
  // Build incrementally so that a failing edge is reported at its own line.
  MobilityNetwork net = at_location(source, last_line, [&] {
    return MobilityNetwork(regions, std::move(cities), {});
  });
  for (auto& e : edges) {
    const std::size_t where = edge_lines[e.id];
    at_location(source, where, [&] {
      net.add_edge(std::move(e));
      return 0;
    });
  }
  return net;
}

void write_network(std::ostream& out, const MobilityNetwork& net) {
  out << "# ivcg network v1\n";
  out << "# city <id> <region> <population> <rail_access_km> <air_access_km> <car_access_km>\n";
  out << "# edge <id> <a> <b> <mode> <status> <construction_years> <length_km> <speed_kmh> "
         "<cost_meur>\n";
  for (const auto& r : net.regions()) out << "region " << r << '\n';
  for (const auto& c : net.cities()) {
    out << "city " << c.id << ' ' << c.region << ' ' << format_number(c.population);
    for (Mode m : kModes) out << ' ' << format_number(c.access(m));
    out << '\n';
  }
  for (const auto& e : net.edges()) {
    out << "edge " << e.id << ' ' << e.a << ' ' << e.b << ' ' << to_string(e.mode) << ' '
        << static_cast<int>(e.status) << ' ' << e.construction_remaining << ' '
        << format_number(e.length_km) << ' ' << format_number(e.speed_kmh) << ' '
        << format_number(e.cost) << '\n';
  }
}

std::vector<TripDemand> parse_demand(std::istream& in, const std::string& source) {
  std::vector<TripDemand> out;
  for (const auto& line : tokenize(in)) {
    if (line.tokens[0] != "trip")
      throw ParseError(source, line.number, "unknown record '" + line.tokens[0] + "'");
    expect_fields(line, 4, source);
    TripDemand t{line.tokens[1], line.tokens[2], number_at(line, 3, source, "volume")};
    if (t.origin == t.dest) throw ParseError(source, line.number, "origin equals destination");
    if (!(t.volume >= 0.0) || std::isinf(t.volume))
      throw ParseError(source, line.number, "volume must be finite and >= 0");
    out.push_back(std::move(t));
  }
  return out;
}

void write_demand(std::ostream& out, std::span<const TripDemand> demands) {
  out << "# ivcg demand v1\n# trip <origin> <dest> <trips_per_year>\n";
  for (const auto& t : demands) {
    out << "trip " << t.origin << ' ' << t.dest << ' ' << format_number(t.volume) << '\n';
  }
}

namespace {

struct ParamSlot {
  const char* key;
  const char* comment;
  double& (*ref)(Scenario&);
};

#define IVCG_SLOT(key, comment, expr) \
  ParamSlot { key, comment, [](Scenario& s) -> double& { return expr; } }

const std::vector<ParamSlot>& param_slots() {
  static const std::vector<ParamSlot> slots = {
      IVCG_SLOT("vot_rail", "value of time in vehicle, train [EUR/h]",
                s.params.vot_in_vehicle[index(Mode::Rail)]),
      IVCG_SLOT("vot_car", "value of time in vehicle, car [EUR/h]",
                s.params.vot_in_vehicle[index(Mode::Car)]),
      IVCG_SLOT("vot_air", "value of time in vehicle, plane [EUR/h]",
                s.params.vot_in_vehicle[index(Mode::Air)]),
      IVCG_SLOT("vot_access", "value of time, access/egress [EUR/h]", s.params.vot_access),
      IVCG_SLOT("vot_wait", "value of time, waiting [EUR/h]", s.params.vot_wait),
      IVCG_SLOT("wait_rail", "waiting time, train [h] (assumed)",
                s.params.wait_time[index(Mode::Rail)]),
      IVCG_SLOT("wait_car", "waiting time, car [h] (assumed)",
                s.params.wait_time[index(Mode::Car)]),
      IVCG_SLOT("wait_air", "waiting time, plane [h]", s.params.wait_time[index(Mode::Air)]),
      IVCG_SLOT("cost_sensitivity", "logit travel cost sensitivity [1/EUR]",
                s.params.cost_sensitivity),
      IVCG_SLOT("urban_speed", "average car speed, urban [km/h]", s.params.urban_speed),
      IVCG_SLOT("speed_car", "average car speed, motorway [km/h]",
                s.params.mode_speed[index(Mode::Car)]),
      IVCG_SLOT("speed_air", "plane speed [km/h]", s.params.mode_speed[index(Mode::Air)]),
      IVCG_SLOT("speed_rail", "train speed [km/h]", s.params.mode_speed[index(Mode::Rail)]),
      IVCG_SLOT("rail_price_per_km",
                "ticket price per km [EUR/km] = 50.4 EUR/h ticket price / 148 km/h",
                s.params.rail_price_per_km),
      IVCG_SLOT("cost_per_km", "construction cost per km [MEUR/km]", s.cost_per_km),
      IVCG_SLOT("rail_lifetime_years", "rail lifetime [years] (not used by the model)",
                s.rail_lifetime_years),
      IVCG_SLOT("discount_factor", "yearly budget discount factor", s.discount),
  };
  return slots;
}

#undef IVCG_SLOT

}  // namespace

void apply_params(std::istream& in, const std::string& source, Scenario& sc) {
  std::string text;
  std::size_t number = 0;
  while (std::getline(in, text)) {
    ++number;
    if (auto hash = text.find('#'); hash != std::string::npos) text.erase(hash);
    if (text.find_first_not_of(" \t\r") == std::string::npos) continue;
    const auto eq = text.find('=');
    if (eq == std::string::npos) throw ParseError(source, number, "expected 'key = value'");
    auto trim = [](std::string s) {
      const auto b = s.find_first_not_of(" \t\r");
      const auto e = s.find_last_not_of(" \t\r");
      return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
    };
    const std::string key = trim(text.substr(0, eq));
    const std::string value = trim(text.substr(eq + 1));
    auto v = parse_number(value);
    if (!v) throw ParseError(source, number, "expected a number for '" + key + "'");
    if (key == "construction_years") {
      if (*v != std::floor(*v) || *v < 0 || *v > 1000)
        throw ParseError(source, number, "construction_years must be a non-negative integer");
      sc.construction_years = static_cast<int>(*v);
      continue;
    }
    if (key == "rail_price_per_hour") {
      sc.params.rail_price_per_km = *v / sc.params.mode_speed[index(Mode::Rail)];
      continue;
    }
    bool found = false;
    for (const auto& slot : param_slots()) {
      if (key == slot.key) {
        slot.ref(sc) = *v;
        found = true;
        break;
      }
    }
    if (!found) throw ParseError(source, number, "unknown parameter '" + key + "'");
  }
  at_location(source, number, [&] {
    sc.params.validate();
    return 0;
  });
}

void write_params(std::ostream& out, const Scenario& sc) {
  Scenario s = sc;  // slots hand out mutable references
  out << "# ivcg parameters v1\n";
  for (const auto& slot : param_slots()) {
    out << "# " << slot.comment << '\n' << slot.key << " = " << format_number(slot.ref(s)) << '\n';
  }
  out << "# construction time of a committed project when its edge carries none [years]\n"
      << "construction_years = " << sc.construction_years << '\n';
}

namespace {

std::size_t line_of_byte(const std::string& text, std::size_t byte) {
  std::size_t line = 1;
  for (std::size_t i = 0; i < byte && i < text.size(); ++i) line += text[i] == '\n';
  return line;
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot read '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

double require_number(const json& j, const std::string& where) {
  if (!j.is_number()) throw InvariantError(where + ": expected a number");
  return j.get<double>();
}

}  // namespace

Scenario load_scenario(const std::filesystem::path& path) {
  const std::string source = path.string();
  const std::string text = read_file(path);
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(source, line_of_byte(text, e.byte), e.what());
  }
  if (!doc.is_object()) throw ParseError(source, 1, "scenario must be a JSON object");
  const auto base = path.parent_path();
  auto field = [&](const char* key) -> const json& {
    if (!doc.contains(key)) throw InvariantError(source + ": missing field '" + key + "'");
    return doc.at(key);
  };
  auto where = [&](const std::string& pointer) { return source + ": " + pointer; };

  Scenario sc;
  try {
    sc.name = doc.value("name", path.stem().string());
    if (doc.contains("format") && doc["format"] != "ivcg-scenario/1")
      throw InvariantError(where("/format") + ": unsupported format");

    const auto net_path = base / field("network").get<std::string>();
    {
      std::ifstream in(net_path);
      if (!in) throw InputError("cannot read '" + net_path.string() + "'");
      sc.network = parse_network(in, net_path.string());
    }
    const auto demand_path = base / field("demand").get<std::string>();
    {
      std::ifstream in(demand_path);
      if (!in) throw InputError("cannot read '" + demand_path.string() + "'");
      sc.demands = parse_demand(in, demand_path.string());
    }
    if (doc.contains("params")) {
      const auto params_path = base / doc["params"].get<std::string>();
      std::ifstream in(params_path);
      if (!in) throw InputError("cannot read '" + params_path.string() + "'");
      apply_params(in, params_path.string(), sc);
    }

    const json& horizon = field("horizon");
    if (!horizon.is_number_integer()) throw InvariantError(where("/horizon") + ": expected an integer");
    sc.horizon = horizon.get<int>();
    if (sc.horizon < 1) throw InvariantError(where("/horizon") + ": must be >= 1");
    if (doc.contains("seed")) sc.seed = doc["seed"].get<std::uint64_t>();
    sc.literal_minmax = doc.value("literal_minmax", false);
    if (doc.contains("allocator")) sc.allocator = parse_allocator(doc["allocator"].get<std::string>());

    const json& central = field("central");
    sc.central.budget = require_number(central.at("budget"), where("/central/budget"));
    sc.central.yearly_increment = require_number(central.value("increment", json(0.0)),
                                                 where("/central/increment"));
    sc.central.alpha = require_number(central.at("alpha"), where("/central/alpha"));
    if (!(sc.central.alpha >= 0.0 && sc.central.alpha <= 1.0))
      throw InvariantError(where("/central/alpha") + ": investment ratio must lie in [0, 1]");
    if (!(sc.central.budget >= 0.0) || !(sc.central.yearly_increment >= 0.0))
      throw InvariantError(where("/central") + ": budget and increment must be >= 0");

    const json& ops = field("operators");
    for (std::size_t i = 0; i < ops.size(); ++i) {
      const json& o = ops[i];
      const std::string at = "/operators/" + std::to_string(i);
      OperatorSpec spec;
      spec.region = o.at("region").get<std::string>();
      spec.budget = require_number(o.at("budget"), where(at + "/budget"));
      spec.yearly_increment = require_number(o.value("increment", json(0.0)), where(at + "/increment"));
      spec.strategy = parse_strategy(o.value("strategy", std::string("btr")));
      if (!(spec.budget >= 0.0) || !(spec.yearly_increment >= 0.0))
        throw InvariantError(where(at) + ": budget and increment must be >= 0");
      sc.operators.push_back(std::move(spec));
    }

    if (doc.contains("candidates")) {
      const json& cands = doc["candidates"];
      for (std::size_t i = 0; i < cands.size(); ++i) {
        const json& c = cands[i];
        if (c.is_string()) {
          sc.candidates.push_back(c.get<std::string>());
          continue;
        }
        const std::string at = "/candidates/" + std::to_string(i);
        NetEdge e;
        e.id = c.at("id").get<std::string>();
        e.a = c.at("a").get<std::string>();
        e.b = c.at("b").get<std::string>();
        e.mode = Mode::Rail;
        e.status = EdgeStatus::NotImplemented;
        e.length_km = require_number(c.at("length"), where(at + "/length"));
        e.speed_kmh = c.contains("speed") ? require_number(c["speed"], where(at + "/speed"))
                                          : sc.params.mode_speed[index(Mode::Rail)];
        e.construction_remaining = c.value("construction_years", 0);
        e.cost = c.contains("cost") ? require_number(c["cost"], where(at + "/cost"))
                                    : e.length_km * sc.cost_per_km;
        try {
          sc.network.add_edge(e);
        } catch (const DanglingReferenceError& err) {
          throw DanglingReferenceError(where(at) + ": " + err.what());
        } catch (const InputError& err) {
          throw InvariantError(where(at) + ": " + err.what());
        }
        sc.candidates.push_back(e.id);
      }
    } else {
      for (const auto& e : sc.network.edges()) {
        if (e.mode == Mode::Rail && e.status == EdgeStatus::NotImplemented)
          sc.candidates.push_back(e.id);
      }
    }

    if (doc.contains("sweep")) {
      const json& sw = doc["sweep"];
      for (const auto& b : sw.value("central_budgets", json::array()))
        sc.sweep.central_budgets.push_back(require_number(b, where("/sweep/central_budgets")));
      for (const auto& a : sw.value("alphas", json::array())) {
        const double alpha = require_number(a, where("/sweep/alphas"));
        if (!(alpha >= 0.0 && alpha <= 1.0))
          throw InvariantError(where("/sweep/alphas") + ": investment ratio must lie in [0, 1]");
        sc.sweep.alphas.push_back(alpha);
      }
      for (const auto& row : sw.value("strategies", json::array())) {
        std::vector<StrategyKind> kinds;
        for (const auto& k : row) kinds.push_back(parse_strategy(k.get<std::string>()));
        if (kinds.size() != sc.operators.size())
          throw InvariantError(where("/sweep/strategies") + ": one strategy per operator required");
        sc.sweep.strategies.push_back(std::move(kinds));
      }
    }
  } catch (const json::exception& e) {
    throw InvariantError(source + ": " + e.what());
  }

  try {
    sc.validate();
  } catch (const DanglingReferenceError& e) {
    throw DanglingReferenceError(source + ": " + e.what());
  } catch (const InvariantError& e) {
    throw InvariantError(source + ": " + e.what());
  }
  return sc;
}

void save_scenario(const std::filesystem::path& dir, const Scenario& sc) {
  std::filesystem::create_directories(dir);
  auto open = [&](const char* name) {
    std::ofstream out(dir / name, std::ios::binary);
    if (!out) throw InputError("cannot write '" + (dir / name).string() + "'");
    return out;
  };
  {
    auto out = open("network.txt");
    write_network(out, sc.network);
  }
  {
    auto out = open("demand.txt");
    write_demand(out, sc.demands);
  }
  {
    auto out = open("params.txt");
    write_params(out, sc);
  }
  json doc;
  doc["format"] = "ivcg-scenario/1";
  doc["name"] = sc.name;
  doc["network"] = "network.txt";
  doc["demand"] = "demand.txt";
  doc["params"] = "params.txt";
  doc["horizon"] = sc.horizon;
  doc["seed"] = sc.seed;
  doc["literal_minmax"] = sc.literal_minmax;
  doc["allocator"] = std::string(to_string(sc.allocator));
  doc["central"] = {{"budget", sc.central.budget},
                    {"increment", sc.central.yearly_increment},
                    {"alpha", sc.central.alpha}};
  doc["operators"] = json::array();
  for (const auto& op : sc.operators) {
    doc["operators"].push_back({{"region", op.region},
                                {"budget", op.budget},
                                {"increment", op.yearly_increment},
                                {"strategy", std::string(to_string(op.strategy))}});
  }
  doc["candidates"] = sc.candidates;
  json sweep = json::object();
  sweep["central_budgets"] = sc.sweep.central_budgets;
  sweep["alphas"] = sc.sweep.alphas;
  sweep["strategies"] = json::array();
  for (const auto& row : sc.sweep.strategies) {
    json r = json::array();
    for (auto k : row) r.push_back(std::string(to_string(k)));
    sweep["strategies"].push_back(r);
  }
  doc["sweep"] = sweep;
  auto out = open("scenario.json");
  out << doc.dump(2) << '\n';
}

}  // namespace ivcg
