#include <json.hpp>

#include <algorithm>
#include <set>
#include <sstream>

#include "palkit/kripke.hpp"

namespace palkit {

using ordered_json = nlohmann::ordered_json;

namespace {

[[noreturn]] void bad(const std::string& path, const std::string& msg) {
  throw ModelFormatError(path, msg);
}

const ordered_json& field(const ordered_json& obj, const char* key, const std::string& path) {
  auto it = obj.find(key);
  if (it == obj.end()) bad(path, std::string("missing field '") + key + "'");
  return *it;
}

std::vector<std::string> string_array(const ordered_json& j, const std::string& path,
                                      bool forbid_dups) {
  if (!j.is_array()) bad(path, "expected an array of strings");
  std::vector<std::string> out;
  std::set<std::string> seen;
  for (size_t i = 0; i < j.size(); ++i) {
    const auto& e = j[i];
    if (!e.is_string()) bad(path + "[" + std::to_string(i) + "]", "expected a string");
    std::string s = e.get<std::string>();
    if (forbid_dups && !seen.insert(s).second)
      bad(path + "[" + std::to_string(i) + "]", "duplicate label '" + s + "'");
    out.push_back(std::move(s));
  }
  return out;
}

int world_of(const std::vector<std::string>& worlds, const std::string& label,
             const std::string& path) {
  auto it = std::find(worlds.begin(), worlds.end(), label);
  if (it == worlds.end()) bad(path, "unknown world '" + label + "'");
  return static_cast<int>(it - worlds.begin());
}

}  // namespace

KripkeModel load_model(const std::string& text) {
  ordered_json doc;
  try {
    doc = ordered_json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    bad("$", e.what());
  }
  if (!doc.is_object()) bad("$", "expected an object");

  std::vector<std::string> worlds = string_array(field(doc, "worlds", "worlds"), "worlds", true);
  if (worlds.empty()) bad("worlds", "a model needs at least one world");
  if (worlds.size() > static_cast<size_t>(kMaxWorlds))
    bad("worlds", "more than 64 worlds are not supported");

  std::vector<std::string> props;
  if (doc.contains("props")) props = string_array(doc["props"], "props", true);

  const ordered_json& agents = field(doc, "agents", "agents");
  if (!agents.is_object()) bad("agents", "expected an object");
  std::vector<std::string> agent_names;
  std::vector<Relation> relations;
  for (auto it = agents.begin(); it != agents.end(); ++it) {
    const std::string& name = it.key();
    std::string apath = "agents." + name;
    if (std::find(agent_names.begin(), agent_names.end(), name) != agent_names.end())
      bad(apath, "duplicate agent");
    const ordered_json& agent_doc = it.value();
    if (!agent_doc.is_object()) bad(apath, "expected an object");
    bool has_partition = agent_doc.contains("partition");
    bool has_pairs = agent_doc.contains("pairs");
    if (has_partition == has_pairs)
      bad(apath, "exactly one of 'partition' or 'pairs' is required");
    Relation r(static_cast<int>(worlds.size()));
    if (has_partition) {
      const ordered_json& part = agent_doc["partition"];
      std::string ppath = apath + ".partition";
      if (!part.is_array()) bad(ppath, "expected an array of blocks");
      std::set<int> used;
      for (size_t b = 0; b < part.size(); ++b) {
        std::string bpath = ppath + "[" + std::to_string(b) + "]";
        std::vector<std::string> block = string_array(part[b], bpath, false);
        std::vector<int> ids;
        for (const auto& label : block) {
          int w = world_of(worlds, label, bpath);
          if (!used.insert(w).second) bad(bpath, "world '" + label + "' in two blocks");
          ids.push_back(w);
        }
        for (int u : ids)
          for (int v : ids) r.set(u, v);
      }
    } else {
      const ordered_json& pairs = agent_doc["pairs"];
      std::string ppath = apath + ".pairs";
      if (!pairs.is_array()) bad(ppath, "expected an array of [from,to] pairs");
      for (size_t i = 0; i < pairs.size(); ++i) {
        std::string epath = ppath + "[" + std::to_string(i) + "]";
        const auto& e = pairs[i];
        if (!e.is_array() || e.size() != 2 || !e[0].is_string() || !e[1].is_string())
          bad(epath, "expected [\"from\",\"to\"]");
        r.set(world_of(worlds, e[0].get<std::string>(), epath),
              world_of(worlds, e[1].get<std::string>(), epath));
      }
    }
    agent_names.push_back(name);
    relations.push_back(std::move(r));
  }
  if (agent_names.empty()) bad("agents", "a model needs at least one agent");

  std::vector<uint64_t> valuation(props.size(), 0);
  if (doc.contains("valuation")) {
    const ordered_json& val = doc["valuation"];
    if (!val.is_object()) bad("valuation", "expected an object");
    for (auto it = val.begin(); it != val.end(); ++it) {
      std::string vpath = "valuation." + it.key();
      auto pit = std::find(props.begin(), props.end(), it.key());
      if (pit == props.end()) bad(vpath, "prop not declared in 'props'");
      std::vector<std::string> where = string_array(it.value(), vpath, false);
      uint64_t bits = 0;
      for (const auto& label : where) bits |= 1ull << world_of(worlds, label, vpath);
      valuation[static_cast<size_t>(pit - props.begin())] = bits;
    }
  }

  try {
    return KripkeModel(std::move(worlds), std::move(agent_names), std::move(relations),
                       std::move(props), std::move(valuation));
  } catch (const std::invalid_argument& e) {
    bad("$", e.what());
  }
}

std::string save_model(const KripkeModel& m) {
  ordered_json doc;
  doc["worlds"] = m.world_labels();
  doc["props"] = m.prop_names();
  ordered_json agents = ordered_json::object();
  for (int a = 0; a < m.agent_count(); ++a) {
    ordered_json pairs = ordered_json::array();
    const Relation& r = m.relation(a);
    for (int u = 0; u < r.size(); ++u)
      for (int v = 0; v < r.size(); ++v)
        if (r.at(u, v)) pairs.push_back({m.world_label(u), m.world_label(v)});
    agents[m.agent_names()[static_cast<size_t>(a)]] = {{"pairs", std::move(pairs)}};
  }
  doc["agents"] = std::move(agents);
  ordered_json val = ordered_json::object();
  for (const auto& p : m.prop_names()) {
    ordered_json where = ordered_json::array();
    uint64_t bits = m.valuation_bits(p);
    for (int w = 0; w < m.world_count(); ++w)
      if ((bits >> w) & 1) where.push_back(m.world_label(w));
    val[p] = std::move(where);
  }
  doc["valuation"] = std::move(val);
  return doc.dump(2) + "\n";
}

std::string to_dot(const KripkeModel& m) {
  std::ostringstream out;
  out << "digraph model {\n  rankdir=LR;\n  node [shape=ellipse];\n";
  for (int w = 0; w < m.world_count(); ++w) {
    out << "  \"" << m.world_label(w) << "\" [label=\"" << m.world_label(w) << "\\n{";
    bool first = true;
    for (const auto& p : m.prop_names()) {
      if ((m.valuation_bits(p) >> w) & 1) {
        if (!first) out << ",";
        out << p;
        first = false;
      }
    }
    out << "}\"];\n";
  }
  for (int a = 0; a < m.agent_count(); ++a) {
    const std::string& name = m.agent_names()[static_cast<size_t>(a)];
    out << "  subgraph cluster_" << a << " {\n    label=\"" << name << "\";\n";
    const Relation& r = m.relation(a);
    for (int u = 0; u < r.size(); ++u)
      for (int v = 0; v < r.size(); ++v)
        if (r.at(u, v))
          out << "    \"" << m.world_label(u) << "\" -> \"" << m.world_label(v)
              << "\" [label=\"" << name << "\"];\n";
    out << "  }\n";
  }
  out << "}\n";
  return out.str();
}

}  // namespace palkit
