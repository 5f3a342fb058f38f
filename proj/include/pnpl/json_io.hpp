#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "pnpl/analysis.hpp"
#include "pnpl/derive.hpp"
#include "pnpl/feature_model.hpp"
#include "pnpl/frg.hpp"
#include "pnpl/net.hpp"

// JSON forms of the tool's reports. nlohmann::json keeps object keys sorted,
// so identical inputs serialize to identical bytes; nothing here may include
// wall-clock values or other run-dependent data.
namespace pnpl {

using Json = nlohmann::json;

inline Json to_json(const Marking& m) {
  Json out = Json::object();
  for (const auto& [place, count] : m.entries()) out[place] = count;
  return out;
}

inline Json to_json(const ConfigSet& s) {
  Json out = Json::array();
  for (std::size_t i : s.indices()) out.push_back(i);
  return out;
}

inline Json products_json(const FeatureModel& fm) {
  Json configs = Json::array();
  for (std::size_t i = 0; i < fm.valid_configurations().size(); ++i) {
    Json entry;
    entry["index"] = i;
    entry["label"] = fm.config_label(i);
    Json enabled = Json::array();
    for (const auto& [name, value] : fm.valid_configurations()[i])
      if (value) enabled.push_back(name);
    entry["features"] = enabled;
    configs.push_back(entry);
  }
  Json out;
  out["configurations"] = configs;
  out["count"] = fm.valid_configurations().size();
  return out;
}

inline Json to_json(const ValidationReport& report) {
  Json issues = Json::array();
  for (const auto& i : report.issues) {
    Json entry;
    entry["severity"] = i.severity == Severity::Error ? "error" : "warning";
    entry["category"] = i.category;
    entry["element"] = i.element;
    entry["message"] = i.message;
    issues.push_back(entry);
  }
  Json out;
  out["issues"] = issues;
  out["ok"] = report.ok();
  return out;
}

inline Json to_json(const Rg& rg, const std::vector<std::string>& place_order) {
  Json states = Json::array();
  for (std::size_t i = 0; i < rg.states.size(); ++i) {
    Json s;
    s["id"] = i;
    s["label"] = render_marking(place_order, rg.states[i]);
    s["marking"] = to_json(rg.states[i]);
    states.push_back(s);
  }
  Json edges = Json::array();
  for (const auto& e : rg.edges) {
    Json j;
    j["from"] = e.from;
    j["to"] = e.to;
    j["transition"] = rg.transition_names[e.transition];
    edges.push_back(j);
  }
  Json out;
  out["initial"] = rg.initial;
  out["states"] = states;
  out["edges"] = edges;
  out["stats"] = Json{{"states", rg.states.size()}, {"edges", rg.edges.size()}};
  return out;
}

inline Json to_json(const Frg& frg, const std::vector<std::string>& place_order) {
  Json states = Json::array();
  for (std::size_t i = 0; i < frg.states.size(); ++i) {
    const FrgState& st = frg.states[i];
    Json s;
    s["id"] = i;
    s["label"] = render_marking(place_order, st.marking);
    s["marking"] = to_json(st.marking);
    s["configs"] = to_json(st.configs);
    s["path_condition"] = st.phi.to_string();
    states.push_back(s);
  }
  Json edges = Json::array();
  for (const auto& e : frg.edges) {
    Json j;
    j["from"] = e.from;
    j["to"] = e.to;
    j["transition"] = frg.transition_names[e.transition];
    j["pc"] = e.pc.to_string();
    j["configs"] = to_json(e.configs);
    edges.push_back(j);
  }
  Json rejections = Json::array();
  for (const auto& r : frg.rejections) {
    Json j;
    j["state"] = r.state;
    j["transition"] = frg.transition_names[r.transition];
    j["path_condition"] = r.phi_cand.to_string();
    j["reason"] = r.reason;
    rejections.push_back(j);
  }
  Json out;
  out["mode"] = to_string(frg.mode);
  out["initial"] = frg.initial;
  out["states"] = states;
  out["edges"] = edges;
  out["rejections"] = rejections;
  out["stats"] = Json{{"states", frg.stats.states},
                      {"edges", frg.stats.edges},
                      {"inspections", frg.stats.inspections},
                      {"rejections", frg.stats.rejections}};
  return out;
}

inline Json deadlocks_json(const std::vector<QueryAnswer>& answers, const FeatureModel& fm,
                           const std::vector<std::string>& place_order) {
  Json list = Json::array();
  for (const auto& a : answers) {
    Json j;
    j["marking"] = render_marking(place_order, a.marking);
    j["config_indices"] = to_json(a.configs);
    Json labels = Json::array();
    for (std::size_t i : a.configs.indices()) labels.push_back(fm.config_label(i));
    j["configs"] = labels;
    j["condition"] = a.symbolic.to_string();
    list.push_back(j);
  }
  Json out;
  out["deadlocks"] = list;
  return out;
}

inline Json reach_json(const QueryAnswer& answer, const FeatureModel& fm,
                       const std::vector<std::string>& place_order) {
  Json out;
  out["marking"] = render_marking(place_order, answer.marking);
  out["config_indices"] = to_json(answer.configs);
  Json labels = Json::array();
  for (std::size_t i : answer.configs.indices()) labels.push_back(fm.config_label(i));
  out["configs"] = labels;
  out["condition"] = answer.symbolic.to_string();
  out["reachable"] = answer.configs.any();
  return out;
}

inline Json to_json(const EquivalenceReport& report) {
  Json products = Json::array();
  for (const auto& p : report.products) {
    Json j;
    j["index"] = p.config_index;
    j["label"] = p.label;
    j["match"] = p.match;
    j["projected"] = Json{{"states", p.projected_states}, {"edges", p.projected_edges}};
    j["oracle"] = Json{{"states", p.oracle_states}, {"edges", p.oracle_edges}};
    j["missing_states"] = p.missing_states;
    j["extra_states"] = p.extra_states;
    j["missing_edges"] = p.missing_edges;
    j["extra_edges"] = p.extra_edges;
    products.push_back(j);
  }
  Json out;
  out["mode"] = to_string(report.mode);
  out["pass"] = report.pass;
  out["products"] = products;
  return out;
}

inline Json to_json(const FamilyStats& stats) {
  Json products = Json::array();
  for (const auto& p : stats.products) {
    Json j;
    j["index"] = p.config_index;
    j["label"] = p.label;
    j["states"] = p.states;
    j["edges"] = p.edges;
    j["inspections"] = p.inspections;
    products.push_back(j);
  }
  Json out;
  out["family"] = Json{{"states", stats.family.states},
                       {"edges", stats.family.edges},
                       {"inspections", stats.family.inspections},
                       {"rejections", stats.family.rejections}};
  out["products"] = products;
  out["sum"] = Json{{"states", stats.sum_states},
                    {"edges", stats.sum_edges},
                    {"inspections", stats.sum_inspections}};
  out["ratio"] =
      Json{{"states", stats.states_ratio}, {"inspections", stats.inspections_ratio}};
  return out;
}

}  // namespace pnpl
