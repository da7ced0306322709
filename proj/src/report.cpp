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

#include "ivcg/report.hpp"

#include <fstream>
#include <sstream>

#include "ivcg/errors.hpp"
#include "ivcg/format.hpp"

namespace ivcg {

using nlohmann::json;

nlohmann::json trace_to_json(const Scenario& sc, const SimState& st) {
  json doc;
  doc["format"] = "ivcg-trace/1";
  doc["scenario"] = sc.name;
  doc["kind"] = st.kind == RunKind::Ivcg ? "ivcg" : "ld";
  json regions = json::array();
  for (const auto& op : st.operators) regions.push_back(op.region);
  doc["regions"] = regions;
  doc["discount"] = sc.discount;
  doc["horizon"] = sc.horizon;
  doc["alpha"] = st.central.alpha;

  json events = json::array();
  for (const auto& h : st.history) {
    if (const auto* r = std::get_if<JointRound>(&h)) {
      json e;
      e["type"] = "round";
      e["year"] = r->year;
      e["round"] = r->round;
      e["pool"] = r->pool;
      e["reports"] = r->reports;
      e["selected"] = r->selected ? json(*r->selected) : json(nullptr);
      e["cost"] = r->cost;
      e["payments"] = r->payments;
      e["subsidy"] = r->subsidy;
      e["surplus"] = r->surplus;
      e["benefits"] = r->benefits;
      json ex = json::array();
      for (const auto& x : r->excluded) {
        ex.push_back({{"project", x.project},
                      {"reason", std::string(to_string(x.reason))},
                      {"subsidy", x.subsidy}});
      }
      e["excluded"] = ex;
      events.push_back(std::move(e));
    } else {
      const auto& l = std::get<LocalDesignRecord>(h);
      json e;
      e["type"] = "local_design";
      e["year"] = l.year;
      e["operator"] = l.op;
      e["cap"] = l.cap;
      e["projects"] = l.projects;
      e["spend"] = l.spend;
      e["benefits"] = l.benefits;
      events.push_back(std::move(e));
    }
  }
  doc["events"] = events;

  json budgets = json::array();
  for (const auto& b : st.budgets) {
    json y;
    y["year"] = b.year;
    json ops = json::array();
    for (std::size_t i = 0; i < b.op_start.size(); ++i) {
      ops.push_back({{"start", b.op_start[i]},
                     {"increment", b.op_increment[i]},
                     {"payments", b.op_payments[i]},
                     {"local", b.op_local[i]},
                     {"allocated", b.op_allocated[i]},
                     {"end", b.op_end[i]}});
    }
    y["operators"] = ops;
    y["central"] = {{"start", b.central_start},
                    {"increment", b.central_increment},
                    {"subsidy", b.central_subsidy},
                    {"surplus", b.central_surplus},
                    {"end", b.central_end}};
    budgets.push_back(std::move(y));
  }
  doc["budgets"] = budgets;
  return doc;
}

Trace trace_from_json(const nlohmann::json& doc) {
  Trace t;
  try {
    if (doc.at("format") != "ivcg-trace/1") throw InputError("unsupported trace format");
    t.scenario = doc.at("scenario").get<std::string>();
    const std::string kind = doc.at("kind").get<std::string>();
    if (kind == "ivcg") {
      t.kind = RunKind::Ivcg;
    } else if (kind == "ld") {
      t.kind = RunKind::LocalDesign;
    } else {
      throw InputError("unknown trace kind '" + kind + "'");
    }
    t.regions = doc.at("regions").get<std::vector<std::string>>();
    t.discount = doc.at("discount").get<double>();
    t.horizon = doc.at("horizon").get<int>();
    t.alpha = doc.at("alpha").get<double>();
    t.state.kind = t.kind;
    for (const auto& r : t.regions) t.state.operators.push_back({r});
    t.state.central.alpha = t.alpha;
    for (const auto& e : doc.at("events")) {
      const std::string type = e.at("type").get<std::string>();
      if (type == "round") {
        JointRound r;
        r.year = e.at("year").get<int>();
        r.round = e.at("round").get<int>();
        r.pool = e.at("pool").get<std::vector<std::string>>();
        r.reports = e.at("reports").get<std::vector<std::vector<double>>>();
        if (!e.at("selected").is_null()) r.selected = e["selected"].get<std::string>();
        r.cost = e.at("cost").get<double>();
        r.payments = e.at("payments").get<std::vector<double>>();
        r.subsidy = e.at("subsidy").get<double>();
        r.surplus = e.at("surplus").get<double>();
        r.benefits = e.at("benefits").get<std::vector<double>>();
        for (const auto& x : e.at("excluded")) {
          const std::string reason = x.at("reason").get<std::string>();
          ExclusionReason why = ExclusionReason::InvestmentRatio;
          if (reason == "central_budget") why = ExclusionReason::CentralBudget;
          if (reason == "operator_budget") why = ExclusionReason::OperatorBudget;
          r.excluded.push_back({x.at("project").get<std::string>(), why, x.at("subsidy").get<double>()});
        }
        t.state.history.emplace_back(std::move(r));
      } else if (type == "local_design") {
        LocalDesignRecord l;
        l.year = e.at("year").get<int>();
        l.op = e.at("operator").get<std::size_t>();
        l.cap = e.at("cap").get<double>();
        l.projects = e.at("projects").get<std::vector<std::string>>();
        l.spend = e.at("spend").get<double>();
        l.benefits = e.at("benefits").get<std::vector<double>>();
        t.state.history.emplace_back(std::move(l));
      } else {
        throw InputError("unknown trace event '" + type + "'");
      }
    }
    for (const auto& y : doc.at("budgets")) {
      YearBudget b;
      b.year = y.at("year").get<int>();
      for (const auto& o : y.at("operators")) {
        b.op_start.push_back(o.at("start").get<double>());
        b.op_increment.push_back(o.at("increment").get<double>());
        b.op_payments.push_back(o.at("payments").get<double>());
        b.op_local.push_back(o.at("local").get<double>());
        b.op_allocated.push_back(o.at("allocated").get<double>());
        b.op_end.push_back(o.at("end").get<double>());
      }
      const json& c = y.at("central");
      b.central_start = c.at("start").get<double>();
      b.central_increment = c.at("increment").get<double>();
      b.central_subsidy = c.at("subsidy").get<double>();
      b.central_surplus = c.at("surplus").get<double>();
      b.central_end = c.at("end").get<double>();
      t.state.budgets.push_back(std::move(b));
    }
    t.state.year = static_cast<int>(t.state.budgets.size());
  } catch (const json::exception& e) {
    throw InputError(std::string("malformed trace: ") + e.what());
  }
  return t;
}

Trace read_trace(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot read trace '" + path.string() + "'");
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw InputError(path.string() + ": " + e.what());
  }
  return trace_from_json(doc);
}

void write_json(const std::filesystem::path& path, const nlohmann::json& doc) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot write '" + path.string() + "'");
  out << doc.dump(1) << '\n';
}

namespace {

class Csv {
 public:
  explicit Csv(const std::filesystem::path& path) : out_(path, std::ios::binary) {
    if (!out_) throw InputError("cannot write '" + path.string() + "'");
  }

  template <typename... Cells>
  void row(const Cells&... cells) {
    bool first = true;
    ((out_ << (first ? "" : ",") << cell(cells), first = false), ...);
    out_ << '\n';
  }

  void row(const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) out_ << (i ? "," : "") << cells[i];
    out_ << '\n';
  }

 private:
  static std::string cell(double v) { return format_number(v); }
  static std::string cell(int v) { return std::to_string(v); }
  static std::string cell(std::size_t v) { return std::to_string(v); }
  static std::string cell(const std::string& s) { return s; }
  static std::string cell(const char* s) { return s; }

  std::ofstream out_;
};

std::string join(const std::vector<std::string>& items, char sep = ';') {
  std::string s;
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (i) s += sep;
    s += items[i];
  }
  return s;
}

std::vector<std::string> numbers(const std::vector<double>& v) {
  std::vector<std::string> out;
  for (double x : v) out.push_back(format_number(x));
  return out;
}

}  // namespace

void emit_report(const Trace& trace, const std::filesystem::path& dir, const std::string& prefix) {
  std::filesystem::create_directories(dir);
  const std::size_t n = trace.regions.size();

  {
    Csv csv(dir / (prefix + "rounds.csv"));
    std::vector<std::string> header{"year", "round", "selected", "cost"};
    for (const auto& r : trace.regions) header.push_back("payment_" + r);
    for (const auto& r : trace.regions) header.push_back("benefit_" + r);
    for (const auto& s : {"payments_total", "subsidy", "surplus", "admissible", "excluded"})
      header.emplace_back(s);
    csv.row(header);
    for (const auto& h : trace.state.history) {
      const auto* r = std::get_if<JointRound>(&h);
      if (r == nullptr) continue;
      std::vector<std::string> cells{std::to_string(r->year), std::to_string(r->round),
                                     r->selected.value_or(""), format_number(r->cost)};
      double total = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        const double p = i < r->payments.size() ? r->payments[i] : 0.0;
        cells.push_back(format_number(p));
        total += p;
      }
      for (std::size_t i = 0; i < n; ++i) {
        cells.push_back(format_number(i < r->benefits.size() ? r->benefits[i] : 0.0));
      }
      cells.push_back(format_number(total));
      cells.push_back(format_number(r->subsidy));
      cells.push_back(format_number(r->surplus));
      cells.push_back(r->selected ? "1" : "0");
      std::vector<std::string> ex;
      for (const auto& x : r->excluded) ex.push_back(x.project + ":" + std::string(to_string(x.reason)));
      cells.push_back(join(ex));
      csv.row(cells);
    }
  }

  {
    Csv csv(dir / (prefix + "local_design.csv"));
    std::vector<std::string> header{"year", "operator", "cap", "projects", "spend"};
    for (const auto& r : trace.regions) header.push_back("benefit_" + r);
    csv.row(header);
    for (const auto& h : trace.state.history) {
      const auto* l = std::get_if<LocalDesignRecord>(&h);
      if (l == nullptr) continue;
      std::vector<std::string> cells{std::to_string(l->year),
                                     l->op < n ? trace.regions[l->op] : std::to_string(l->op),
                                     format_number(l->cap), join(l->projects),
                                     format_number(l->spend)};
      for (const auto& b : numbers(l->benefits)) cells.push_back(b);
      csv.row(cells);
    }
  }

  {
    Csv csv(dir / (prefix + "budgets.csv"));
    csv.row("year", "entity", "start", "increment", "payments", "local", "allocated", "subsidy",
            "surplus", "end");
    for (const auto& b : trace.state.budgets) {
      for (std::size_t i = 0; i < b.op_start.size(); ++i) {
        csv.row(b.year, i < n ? trace.regions[i] : std::to_string(i), b.op_start[i],
                b.op_increment[i], b.op_payments[i], b.op_local[i], b.op_allocated[i], 0.0, 0.0,
                b.op_end[i]);
      }
      // The baseline does not simulate the centre; its allocations appear
      // in the operators' allocated column.
      if (trace.kind == RunKind::LocalDesign) continue;
      csv.row(b.year, "central", b.central_start, b.central_increment, 0.0, 0.0, 0.0,
              b.central_subsidy, b.central_surplus, b.central_end);
    }
  }

  const MetricsReport m = compute_metrics(trace.state, n, trace.horizon);
  {
    Csv csv(dir / (prefix + "metrics.csv"));
    csv.row("metric", "entity", "value");
    for (std::size_t i = 0; i < n; ++i) csv.row("local_benefit", trace.regions[i], m.local_benefit[i]);
    csv.row("system_social_welfare", "all", m.system_social_welfare);
    csv.row("subsidy_efficiency", "all",
            m.subsidy_efficiency ? format_number(*m.subsidy_efficiency) : std::string("no-subsidy"));
    csv.row("total_subsidy", "all", m.total_subsidy);
    for (std::size_t i = 0; i < n; ++i)
      csv.row("total_local_benefit", trace.regions[i], m.total_local_benefit[i]);
    csv.row("total_social_welfare", "all", m.total_social_welfare);
  }
  {
    Csv csv(dir / (prefix + "metrics_by_year.csv"));
    std::vector<std::string> header{"year", "social_welfare", "subsidy", "total_social_welfare"};
    for (const auto& r : trace.regions) header.push_back("local_benefit_" + r);
    csv.row(header);
    for (const auto& y : m.per_year) {
      std::vector<std::string> cells{std::to_string(y.year), format_number(y.social_welfare),
                                     format_number(y.subsidy),
                                     format_number(y.total_social_welfare)};
      for (const auto& b : numbers(y.local_benefit)) cells.push_back(b);
      csv.row(cells);
    }
  }
}

void emit_region_comparison(const Trace& ivcg, const Trace& ld, double central_budget,
                            const std::string& strategy, const std::filesystem::path& path) {
  if (ivcg.regions != ld.regions) throw InputError("paired traces cover different regions");
  const std::size_t n = ivcg.regions.size();
  const auto a = compute_metrics(ivcg.state, n, ivcg.horizon);
  const auto b = compute_metrics(ld.state, n, ld.horizon);
  Csv csv(path);
  csv.row("region", "alpha", "central_budget", "strategy", "local_benefit_ivcg", "local_benefit_ld",
          "improvement");
  for (std::size_t i = 0; i < n; ++i) {
    csv.row(ivcg.regions[i], ivcg.alpha, central_budget, strategy, a.total_local_benefit[i],
            b.total_local_benefit[i],
            a.total_local_benefit[i] - b.total_local_benefit[i]);
  }
}

}  // namespace ivcg
