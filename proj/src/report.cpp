#include "godclass/report.hpp"

#include <cstdio>
#include <iomanip>
#include <stdexcept>

namespace godclass::report {

using nlohmann::json;

namespace {

std::string fixed2(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

std::string dot_quote(std::string_view text) {
  std::string out = "\"";
  for (char c : text) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  out += '"';
  return out;
}

json summary_json(const std::optional<FiveNumberSummary>& s, const std::optional<double>& cutoff) {
  if (!s) return nullptr;
  return {{"min", s->min},       {"q1", s->q1},   {"median", s->median},
          {"q3", s->q3},         {"max", s->max}, {"cutoff", cutoff ? json(*cutoff) : json(nullptr)}};
}

json optional_number(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

}  // namespace

std::string csv_field(std::string_view text) {
  if (text.find_first_of(",\"\n\r") == std::string_view::npos) return std::string(text);
  std::string out = "\"";
  for (char c : text) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

json detection_json(const CodeModel& model, const DetectionReport& report) {
  json classes = json::array();
  for (const auto& m : report.metrics) {
    const auto& e = model.entity(m.cls);
    classes.push_back({{"class", e.id},
                       {"name", e.name},
                       {"nom", m.nom},
                       {"cbo", m.cbo},
                       {"ic", optional_number(m.ic)},
                       {"detected", report.rule.matches(m)}});
  }
  json detected = json::array();
  for (NodeId id : report.detected) detected.push_back(model.entity(id).id);
  return {{"quartile", report.rule.quartile},
          {"classCount", report.metrics.size()},
          {"summary",
           {{"nom", summary_json(report.nom_summary, report.rule.nom_cutoff)},
            {"cbo", summary_json(report.cbo_summary, report.rule.cbo_cutoff)},
            {"ic", summary_json(report.ic_summary, report.rule.ic_cutoff)}}},
          {"detected", std::move(detected)},
          {"classes", std::move(classes)}};
}

void detection_csv(std::ostream& out, const CodeModel& model, const DetectionReport& report) {
  out << std::setprecision(10);
  out << "class,name,nom,cbo,ic,detected\n";
  for (const auto& m : report.metrics) {
    const auto& e = model.entity(m.cls);
    out << csv_field(e.id) << ',' << csv_field(e.name) << ',' << m.nom << ',' << m.cbo << ',';
    if (m.ic) out << *m.ic;
    out << ',' << (report.rule.matches(m) ? "true" : "false") << '\n';
  }
}

void detection_summary_csv(std::ostream& out, const DetectionReport& report) {
  out << std::setprecision(10);
  out << "metric,min,q1,median,q3,max,cutoff\n";
  auto row = [&](const char* name, const std::optional<FiveNumberSummary>& s,
                 const std::optional<double>& cutoff) {
    out << name;
    if (s) {
      out << ',' << s->min << ',' << s->q1 << ',' << s->median << ',' << s->q3 << ',' << s->max;
    } else {
      out << ",,,,,";
    }
    out << ',';
    if (cutoff) out << *cutoff;
    out << '\n';
  };
  row("nom", report.nom_summary, report.rule.nom_cutoff);
  row("cbo", report.cbo_summary, report.rule.cbo_cutoff);
  row("ic", report.ic_summary, report.rule.ic_cutoff);
}

GraphSummary summarize(const CodeModel& model, const ResponsibilityGraph& graph) {
  return {model.entity(graph.cls).id, graph.node_count(), graph.edge_count(), graph.mean,
          graph.stddev, graph.min_weight, graph.max_weight, threshold_interval(graph)};
}

json decomposition_record(const CodeModel& model, const Decomposition& d) {
  json groups = json::array();
  for (const auto& g : d.groups) {
    json ids = json::array();
    for (NodeId m : g) ids.push_back(model.entity(m).id);
    groups.push_back(std::move(ids));
  }
  return {{"threshold", d.threshold},
          {"groupCount", d.groups.size()},
          {"removedEdges", d.removed_edges},
          {"type", d.type ? json(to_string(*d.type)) : json(nullptr)},
          {"groups", std::move(groups)}};
}

json decomposition_json(const GraphSummary& graph, const std::vector<json>& records, bool is_sweep) {
  json doc = {{"class", graph.cls},
              {"methodCount", graph.methods},
              {"edgeCount", graph.edges},
              {"mean", graph.mean},
              {"stddev", graph.stddev},
              {"minWeight", graph.min_weight},
              {"maxWeight", graph.max_weight},
              {"interval", {{"low", graph.interval.low}, {"high", graph.interval.high}}}};
  if (is_sweep) {
    doc["sweep"] = records;
  } else if (!records.empty()) {
    for (const auto& [key, value] : records.front().items()) doc[key] = value;
  }
  return doc;
}

void decomposition_csv(std::ostream& out, const GraphSummary& graph, const std::vector<json>& records) {
  out << std::setprecision(10);
  out << "class,threshold,groups,removed_edges,type,members\n";
  for (const auto& r : records) {
    std::string members;
    for (std::size_t g = 0; g < r["groups"].size(); ++g) {
      if (g > 0) members += ';';
      const auto& ids = r["groups"][g];
      for (std::size_t i = 0; i < ids.size(); ++i) {
        if (i > 0) members += '|';
        members += ids[i].get<std::string>();
      }
    }
    out << csv_field(graph.cls) << ',' << r["threshold"].get<double>() << ','
        << r["groupCount"].get<std::size_t>() << ',' << r["removedEdges"].get<std::size_t>() << ','
        << (r["type"].is_null() ? "" : r["type"].get<std::string>()) << ',' << csv_field(members)
        << '\n';
  }
}

namespace {

ProducedDecomposition record_from_json(const json& r) {
  if (!r.is_object()) throw std::invalid_argument("decomposition record must be an object");
  ProducedDecomposition out;
  const auto t = r.find("threshold");
  if (t == r.end() || !t->is_number()) throw std::invalid_argument("decomposition record needs a numeric 'threshold'");
  out.threshold = t->get<double>();
  const auto groups = r.find("groups");
  if (groups == r.end() || !groups->is_array() || groups->empty()) {
    throw std::invalid_argument("decomposition record needs a non-empty 'groups' array");
  }
  for (const auto& g : *groups) {
    if (!g.is_array()) throw std::invalid_argument("each group must be an array of ids");
    std::vector<std::string> ids;
    for (const auto& id : g) {
      if (!id.is_string()) throw std::invalid_argument("method ids must be strings");
      ids.push_back(id.get<std::string>());
    }
    out.groups.push_back(make_method_set(std::move(ids)));
  }
  return out;
}

}  // namespace

DecompositionFile decomposition_from_json(const json& doc) {
  if (!doc.is_object()) throw std::invalid_argument("decomposition must be a JSON object");
  DecompositionFile file;
  const auto cls = doc.find("class");
  if (cls == doc.end() || !cls->is_string()) throw std::invalid_argument("decomposition needs a string 'class'");
  file.cls = cls->get<std::string>();
  if (auto sweep = doc.find("sweep"); sweep != doc.end()) {
    if (!sweep->is_array()) throw std::invalid_argument("'sweep' must be an array");
    for (const auto& r : *sweep) file.entries.push_back(record_from_json(r));
  } else {
    file.entries.push_back(record_from_json(doc));
  }
  if (file.entries.empty()) throw std::invalid_argument("decomposition has no records");
  return file;
}

void write_dot(std::ostream& out, const CodeModel& model, const ResponsibilityGraph& graph,
               double threshold) {
  out << "graph " << dot_quote(model.entity(graph.cls).id) << " {\n";
  for (NodeId m : graph.methods) {
    const auto& e = model.entity(m);
    out << "  " << dot_quote(e.id) << " [label=" << dot_quote(e.name) << "];\n";
  }
  const std::size_t n = graph.node_count();
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const double w = graph.weights(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
      const std::string label = fixed2(w);
      out << "  " << dot_quote(model.entity(graph.methods[i]).id) << " -- "
          << dot_quote(model.entity(graph.methods[j]).id) << " [weight=" << dot_quote(label)
          << ", label=" << dot_quote(label);
      if (w < threshold) out << ", style=dashed";
      out << "];\n";
    }
  }
  out << "}\n";
}

json evaluation_json(const GroundTruth& truth, const DecompositionFile& produced,
                     const std::vector<EvaluationResult>& results) {
  json entries = json::array();
  std::optional<std::size_t> best;
  for (std::size_t k = 0; k < results.size(); ++k) {
    const auto& res = results[k];
    const auto& groups = produced.entries[k].groups;
    json per = json::array();
    for (std::size_t i = 0; i < res.per_responsibility.size(); ++i) {
      const auto& s = res.per_responsibility[i];
      per.push_back({{"truth", truth.responsibilities[i]},
                     {"bestMatch", groups[s.best]},
                     {"precision", s.precision},
                     {"recall", s.recall},
                     {"f", s.f}});
    }
    entries.push_back({{"threshold", produced.entries[k].threshold},
                       {"responsibilities", std::move(per)},
                       {"meanPrecision", res.mean_precision},
                       {"meanRecall", res.mean_recall},
                       {"classF", res.class_f}});
    if (!best || res.class_f > results[*best].class_f) best = k;
  }
  json doc = {{"class", truth.cls}, {"results", std::move(entries)}};
  if (best) {
    doc["bestThreshold"] = produced.entries[*best].threshold;
    doc["bestClassF"] = results[*best].class_f;
  }
  return doc;
}

void evaluation_csv(std::ostream& out, const GroundTruth& truth, const DecompositionFile& produced,
                    const std::vector<EvaluationResult>& results) {
  out << std::setprecision(10);
  out << "class,threshold,responsibility,precision,recall,f,class_f\n";
  for (std::size_t k = 0; k < results.size(); ++k) {
    const auto& res = results[k];
    for (std::size_t i = 0; i < res.per_responsibility.size(); ++i) {
      const auto& s = res.per_responsibility[i];
      out << csv_field(truth.cls) << ',' << produced.entries[k].threshold << ',' << i << ','
          << s.precision << ',' << s.recall << ',' << s.f << ',' << res.class_f << '\n';
    }
  }
}

}  // namespace godclass::report
