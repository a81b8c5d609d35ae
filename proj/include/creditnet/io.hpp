#pragma once

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "creditnet/attributes.hpp"
#include "creditnet/bipartite_graph.hpp"
#include "creditnet/csv.hpp"
#include "creditnet/error.hpp"
#include "creditnet/metrics.hpp"
#include "creditnet/projection.hpp"
#include "creditnet/spanning_forest.hpp"

namespace creditnet {

enum class GraphFormat { EdgeCsv, Dot, GraphMl };

inline GraphFormat parse_format(std::string_view name) {
  if (name == "csv") return GraphFormat::EdgeCsv;
  if (name == "dot") return GraphFormat::Dot;
  if (name == "graphml") return GraphFormat::GraphMl;
  throw InvalidArgument("unknown graph format: \"" + std::string(name) +
                        "\" (expected csv, dot or graphml)");
}

/// Expected column names of the edge list file. `total` is optional in the
/// file; when the split columns are filled the total is derived from them.
struct EdgeSchema {
  std::string bank_id = "bank_id";
  std::string firm_id = "firm_id";
  std::string short_term = "short_term";
  std::string long_term = "long_term";
  std::string total = "total";
};

struct LoadStats {
  std::size_t duplicate_rows_merged{0};
  std::size_t zero_total_dropped{0};
  std::size_t missing_split_edges{0};
};

struct LoadedGraph {
  BipartiteGraph graph;
  LoadStats stats;
};

/// Node coloring for DOT/GraphML exports. Banks are colored by type (or by
/// region when color_banks_by_region is set), firms by sector group.
struct ExportStyle {
  const NodeAttributes* attrs = nullptr;
  bool color_banks_by_region = false;
};

namespace detail {

inline std::ifstream open_input(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open for reading: " + path);
  return in;
}

inline std::ofstream open_output(const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open for writing: " + path);
  return out;
}

inline std::string file_stem(const std::string& path) {
  std::size_t slash = path.find_last_of("/\\");
  std::string base = slash == std::string::npos ? path : path.substr(slash + 1);
  std::size_t dot = base.find_last_of('.');
  return dot == std::string::npos ? base : base.substr(0, dot);
}

inline std::string dot_quote(std::string_view s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  out += '"';
  return out;
}

inline std::string xml_escape(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      case '\'': out += "&apos;"; break;
      default: out += c;
    }
  }
  return out;
}

inline std::string xml_unescape(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] != '&') {
      out += s[i];
      continue;
    }
    auto take = [&](std::string_view entity, char replacement) {
      if (s.substr(i, entity.size()) == entity) {
        out += replacement;
        i += entity.size() - 1;
        return true;
      }
      return false;
    };
    if (!take("&amp;", '&') && !take("&lt;", '<') && !take("&gt;", '>') &&
        !take("&quot;", '"') && !take("&apos;", '\''))
      out += s[i];
  }
  return out;
}

inline std::optional<std::string> bank_color(const ExportStyle& style,
                                             const std::string& id) {
  if (!style.attrs) return std::nullopt;
  const BankAttr* a = style.attrs->bank(id);
  if (!a) return std::nullopt;
  return std::string(style.color_banks_by_region ? region_color(a->region)
                                                 : bank_type_color(a->bank_type));
}

inline std::optional<std::string> firm_color(const ExportStyle& style,
                                             const std::string& id) {
  if (!style.attrs) return std::nullopt;
  const FirmAttr* a = style.attrs->firm(id);
  if (!a) return std::nullopt;
  return std::string(firm_group_color(a->group));
}

inline std::optional<std::string> node_color(const ExportStyle& style, Mode mode,
                                             const std::string& id) {
  return mode == Mode::Bank ? bank_color(style, id) : firm_color(style, id);
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Edge-list CSV
// ---------------------------------------------------------------------------

/// Loads the bipartite edge list. All-or-nothing: every violation in the file
/// is reported at once, with line numbers. Duplicate (bank, firm) rows are
/// summed, zero-total rows dropped; both are counted in the returned stats.
inline LoadedGraph load_edges(const std::string& path,
                              const EdgeSchema& schema = {}) {
  auto in = detail::open_input(path);
  CsvReader reader(in, path);
  std::vector<std::string> violations;

  auto header = reader.next();
  if (!header) throw LoadError(path, {"missing header row"});
  int col_bank = -1, col_firm = -1, col_short = -1, col_long = -1, col_total = -1;
  for (std::size_t i = 0; i < header->fields.size(); ++i) {
    const std::string& name = header->fields[i];
    if (name == schema.bank_id) col_bank = static_cast<int>(i);
    else if (name == schema.firm_id) col_firm = static_cast<int>(i);
    else if (name == schema.short_term) col_short = static_cast<int>(i);
    else if (name == schema.long_term) col_long = static_cast<int>(i);
    else if (name == schema.total) col_total = static_cast<int>(i);
    else
      violations.push_back("line " + std::to_string(header->line_number) +
                           ": unknown column \"" + name + "\"");
  }
  for (auto [col, name] : {std::pair{col_bank, &schema.bank_id},
                           {col_firm, &schema.firm_id},
                           {col_short, &schema.short_term},
                           {col_long, &schema.long_term}}) {
    if (col < 0)
      violations.push_back("line " + std::to_string(header->line_number) +
                           ": missing column \"" + *name + "\"");
  }
  if (!violations.empty()) throw LoadError(path, violations);

  BipartiteGraphBuilder builder;
  builder.set_name(detail::file_stem(path));

  while (auto row = reader.next()) {
    std::string where = "line " + std::to_string(row->line_number);
    if (row->fields.size() != header->fields.size()) {
      violations.push_back(where + ": expected " +
                           std::to_string(header->fields.size()) +
                           " fields, got " + std::to_string(row->fields.size()));
      continue;
    }
    const std::string& bank = row->fields[col_bank];
    const std::string& firm = row->fields[col_firm];
    if (bank.empty() || firm.empty()) {
      violations.push_back(where + ": empty node id");
      continue;
    }
    auto amount = [&](int col, const std::string& name,
                      bool& ok) -> std::optional<double> {
      if (col < 0 || row->fields[col].empty()) return std::nullopt;
      auto v = parse_double(row->fields[col]);
      if (!v) {
        violations.push_back(where + ": " + name + " is not a number: \"" +
                             row->fields[col] + "\"");
        ok = false;
        return std::nullopt;
      }
      if (*v < 0.0) {
        violations.push_back(where + ": negative " + name + ": " +
                             row->fields[col]);
        ok = false;
        return std::nullopt;
      }
      return v;
    };
    bool ok = true;
    auto s = amount(col_short, schema.short_term, ok);
    auto l = amount(col_long, schema.long_term, ok);
    auto t = amount(col_total, schema.total, ok);
    if (!ok) continue;
    if (s.has_value() != l.has_value()) {
      violations.push_back(where + ": short/long must be both present or both empty");
      continue;
    }
    EdgeWeight w;
    if (s) {
      w = EdgeWeight::from_split(*s, *l);
      if (t && std::abs(*t - w.total) > 1e-9 * std::max(1.0, std::abs(*t))) {
        violations.push_back(where + ": total does not equal short + long");
        continue;
      }
    } else if (t) {
      w = EdgeWeight::from_total(*t);
    } else {
      violations.push_back(where + ": row carries neither a split nor a total");
      continue;
    }
    builder.add_edge(bank, firm, w);
  }
  if (!violations.empty()) throw LoadError(path, violations);

  LoadedGraph out{builder.build(), {}};
  out.stats.duplicate_rows_merged = builder.stats().duplicate_rows_merged;
  out.stats.zero_total_dropped = builder.stats().zero_total_dropped;
  out.stats.missing_split_edges = out.graph.missing_split_count();
  return out;
}

namespace detail {

inline void write_edge_csv(const BipartiteGraph& g, std::ostream& os) {
  os << "# bipartite credit network; amounts in million yen\n";
  os << "bank_id,firm_id,short_term,long_term,total\n";
  for (const Edge& e : g.edges()) {
    std::vector<std::string> fields = {
        g.bank_id(e.bank), g.firm_id(e.firm),
        e.weight.short_term ? format_double(*e.weight.short_term) : "",
        e.weight.long_term ? format_double(*e.weight.long_term) : "",
        format_double(e.weight.total)};
    write_csv_row(os, fields);
  }
}

inline void write_dot(const BipartiteGraph& g, std::ostream& os,
                      const ExportStyle& style) {
  os << "graph creditnet {\n";
  os << "  node [shape=circle];\n";
  auto emit_node = [&](Mode mode, const std::string& id) {
    std::string prefixed = (mode == Mode::Bank ? "b:" : "f:") + id;
    os << "  " << dot_quote(prefixed) << " [mode=" << to_string(mode);
    if (auto color = node_color(style, mode, id))
      os << ", style=filled, fillcolor=" << *color;
    os << "];\n";
  };
  for (const auto& id : g.bank_ids()) emit_node(Mode::Bank, id);
  for (const auto& id : g.firm_ids()) emit_node(Mode::Firm, id);
  for (const Edge& e : g.edges()) {
    os << "  " << dot_quote("b:" + g.bank_id(e.bank)) << " -- "
       << dot_quote("f:" + g.firm_id(e.firm)) << " [";
    if (e.weight.has_split())
      os << "short=" << format_double(*e.weight.short_term)
         << ", long=" << format_double(*e.weight.long_term) << ", ";
    os << "total=" << format_double(e.weight.total) << "];\n";
  }
  os << "}\n";
}

inline void write_graphml(const BipartiteGraph& g, std::ostream& os,
                          const ExportStyle& style) {
  os << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  os << "<graphml xmlns=\"http://graphml.graphdrawing.org/xmlns\">\n";
  os << "  <key id=\"mode\" for=\"node\" attr.name=\"mode\" attr.type=\"string\"/>\n";
  os << "  <key id=\"color\" for=\"node\" attr.name=\"color\" attr.type=\"string\"/>\n";
  os << "  <key id=\"short\" for=\"edge\" attr.name=\"short_term\" attr.type=\"double\"/>\n";
  os << "  <key id=\"long\" for=\"edge\" attr.name=\"long_term\" attr.type=\"double\"/>\n";
  os << "  <key id=\"total\" for=\"edge\" attr.name=\"total\" attr.type=\"double\"/>\n";
  os << "  <graph edgedefault=\"undirected\">\n";
  auto emit_node = [&](Mode mode, const std::string& id) {
    std::string prefixed = (mode == Mode::Bank ? "b:" : "f:") + id;
    os << "    <node id=\"" << xml_escape(prefixed) << "\"><data key=\"mode\">"
       << to_string(mode) << "</data>";
    if (auto color = node_color(style, mode, id))
      os << "<data key=\"color\">" << *color << "</data>";
    os << "</node>\n";
  };
  for (const auto& id : g.bank_ids()) emit_node(Mode::Bank, id);
  for (const auto& id : g.firm_ids()) emit_node(Mode::Firm, id);
  for (const Edge& e : g.edges()) {
    os << "    <edge source=\"" << xml_escape("b:" + g.bank_id(e.bank))
       << "\" target=\"" << xml_escape("f:" + g.firm_id(e.firm)) << "\">";
    if (e.weight.has_split())
      os << "<data key=\"short\">" << format_double(*e.weight.short_term)
         << "</data><data key=\"long\">" << format_double(*e.weight.long_term)
         << "</data>";
    os << "<data key=\"total\">" << format_double(e.weight.total)
       << "</data></edge>\n";
  }
  os << "  </graph>\n";
  os << "</graphml>\n";
}

// --- readers for the subsets written above ---

struct ParsedNode {
  Mode mode;
  std::string id;
};

inline std::optional<ParsedNode> split_prefixed(const std::string& name,
                                                std::vector<std::string>& violations,
                                                std::size_t line) {
  if (name.size() >= 2 && name[1] == ':' && (name[0] == 'b' || name[0] == 'f'))
    return ParsedNode{name[0] == 'b' ? Mode::Bank : Mode::Firm, name.substr(2)};
  violations.push_back("line " + std::to_string(line) +
                       ": node id lacks b:/f: mode prefix: \"" + name + "\"");
  return std::nullopt;
}

/// Extracts the quoted string starting at `pos` (which must point at '"'),
/// honoring backslash escapes. Advances pos past the closing quote.
inline std::optional<std::string> dot_unquote(const std::string& s,
                                              std::size_t& pos) {
  if (pos >= s.size() || s[pos] != '"') return std::nullopt;
  std::string out;
  for (std::size_t i = pos + 1; i < s.size(); ++i) {
    if (s[i] == '\\' && i + 1 < s.size()) {
      out += s[++i];
    } else if (s[i] == '"') {
      pos = i + 1;
      return out;
    } else {
      out += s[i];
    }
  }
  return std::nullopt;
}

inline std::map<std::string, std::string> parse_bracket_attrs(const std::string& s) {
  std::map<std::string, std::string> attrs;
  std::size_t open = s.find('[');
  std::size_t close = s.rfind(']');
  if (open == std::string::npos || close == std::string::npos || close <= open)
    return attrs;
  std::string body = s.substr(open + 1, close - open - 1);
  std::istringstream list(body);
  std::string item;
  while (std::getline(list, item, ',')) {
    std::size_t eq = item.find('=');
    if (eq == std::string::npos) continue;
    auto trim = [](std::string v) {
      std::size_t b = v.find_first_not_of(" \t");
      std::size_t e = v.find_last_not_of(" \t");
      return b == std::string::npos ? std::string() : v.substr(b, e - b + 1);
    };
    attrs[trim(item.substr(0, eq))] = trim(item.substr(eq + 1));
  }
  return attrs;
}

inline LoadedGraph load_dot(const std::string& path) {
  auto in = open_input(path);
  BipartiteGraphBuilder builder;
  builder.set_name(file_stem(path));
  std::vector<std::string> violations;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::size_t start = line.find_first_not_of(" \t\r");
    if (start == std::string::npos) continue;
    std::string body = line.substr(start);
    if (body.empty() || body[0] != '"') continue;  // header, footer, defaults
    std::size_t pos = 0;
    auto first = dot_unquote(body, pos);
    if (!first) {
      violations.push_back("line " + std::to_string(line_no) + ": malformed quoted id");
      continue;
    }
    std::size_t dash = body.find("--", pos);
    if (dash == std::string::npos) {
      auto node = split_prefixed(*first, violations, line_no);
      if (node) {
        if (node->mode == Mode::Bank) builder.add_bank(node->id);
        else builder.add_firm(node->id);
      }
      continue;
    }
    std::size_t second_pos = body.find('"', dash);
    if (second_pos == std::string::npos) {
      violations.push_back("line " + std::to_string(line_no) + ": malformed edge");
      continue;
    }
    auto second = dot_unquote(body, second_pos);
    if (!second) {
      violations.push_back("line " + std::to_string(line_no) + ": malformed edge");
      continue;
    }
    auto a = split_prefixed(*first, violations, line_no);
    auto b = split_prefixed(*second, violations, line_no);
    if (!a || !b) continue;
    if (a->mode != Mode::Bank || b->mode != Mode::Firm) {
      violations.push_back("line " + std::to_string(line_no) +
                           ": edge must run bank -- firm");
      continue;
    }
    auto attrs = parse_bracket_attrs(body.substr(second_pos));
    auto get = [&](const char* key) -> std::optional<double> {
      auto it = attrs.find(key);
      if (it == attrs.end()) return std::nullopt;
      return parse_double(it->second);
    };
    auto s = get("short"), l = get("long"), t = get("total");
    if (s && l) {
      builder.add_edge(a->id, b->id, EdgeWeight::from_split(*s, *l));
    } else if (t) {
      builder.add_edge(a->id, b->id, EdgeWeight::from_total(*t));
    } else {
      violations.push_back("line " + std::to_string(line_no) +
                           ": edge carries neither split nor total");
    }
  }
  if (!violations.empty()) throw LoadError(path, violations);
  LoadedGraph out{builder.build(), {}};
  out.stats.duplicate_rows_merged = builder.stats().duplicate_rows_merged;
  out.stats.zero_total_dropped = builder.stats().zero_total_dropped;
  out.stats.missing_split_edges = out.graph.missing_split_count();
  return out;
}

inline std::optional<std::string> xml_attr(const std::string& line,
                                           const std::string& name) {
  std::string needle = name + "=\"";
  std::size_t at = line.find(needle);
  if (at == std::string::npos) return std::nullopt;
  std::size_t begin = at + needle.size();
  std::size_t end = line.find('"', begin);
  if (end == std::string::npos) return std::nullopt;
  return xml_unescape(line.substr(begin, end - begin));
}

inline std::map<std::string, std::string> xml_data_values(const std::string& line) {
  std::map<std::string, std::string> out;
  std::size_t pos = 0;
  while (true) {
    std::size_t at = line.find("<data key=\"", pos);
    if (at == std::string::npos) break;
    std::size_t key_begin = at + 11;
    std::size_t key_end = line.find('"', key_begin);
    if (key_end == std::string::npos) break;
    std::size_t value_begin = line.find('>', key_end);
    std::size_t value_end = line.find("</data>", key_begin);
    if (value_begin == std::string::npos || value_end == std::string::npos) break;
    out[line.substr(key_begin, key_end - key_begin)] =
        xml_unescape(line.substr(value_begin + 1, value_end - value_begin - 1));
    pos = value_end + 7;
  }
  return out;
}

inline LoadedGraph load_graphml(const std::string& path) {
  auto in = open_input(path);
  BipartiteGraphBuilder builder;
  builder.set_name(file_stem(path));
  std::vector<std::string> violations;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find("<node id=\"") != std::string::npos) {
      auto id = xml_attr(line, "id");
      if (!id) {
        violations.push_back("line " + std::to_string(line_no) + ": malformed node");
        continue;
      }
      auto node = split_prefixed(*id, violations, line_no);
      if (node) {
        if (node->mode == Mode::Bank) builder.add_bank(node->id);
        else builder.add_firm(node->id);
      }
    } else if (line.find("<edge ") != std::string::npos) {
      auto source = xml_attr(line, "source");
      auto target = xml_attr(line, "target");
      if (!source || !target) {
        violations.push_back("line " + std::to_string(line_no) + ": malformed edge");
        continue;
      }
      auto a = split_prefixed(*source, violations, line_no);
      auto b = split_prefixed(*target, violations, line_no);
      if (!a || !b) continue;
      if (a->mode != Mode::Bank || b->mode != Mode::Firm) {
        violations.push_back("line " + std::to_string(line_no) +
                             ": edge must run bank -> firm");
        continue;
      }
      auto data = xml_data_values(line);
      auto get = [&](const char* key) -> std::optional<double> {
        auto it = data.find(key);
        if (it == data.end()) return std::nullopt;
        return parse_double(it->second);
      };
      auto s = get("short"), l = get("long"), t = get("total");
      if (s && l) {
        builder.add_edge(a->id, b->id, EdgeWeight::from_split(*s, *l));
      } else if (t) {
        builder.add_edge(a->id, b->id, EdgeWeight::from_total(*t));
      } else {
        violations.push_back("line " + std::to_string(line_no) +
                             ": edge carries neither split nor total");
      }
    }
  }
  if (!violations.empty()) throw LoadError(path, violations);
  LoadedGraph out{builder.build(), {}};
  out.stats.duplicate_rows_merged = builder.stats().duplicate_rows_merged;
  out.stats.zero_total_dropped = builder.stats().zero_total_dropped;
  out.stats.missing_split_edges = out.graph.missing_split_count();
  return out;
}

}  // namespace detail

/// Writes the graph deterministically (identical graphs give identical
/// bytes). Edge CSV represents nodes only through edge rows, so isolated
/// nodes survive round-trips only in DOT and GraphML.
inline void export_graph(const BipartiteGraph& g, const std::string& path,
                         GraphFormat format, const ExportStyle& style = {}) {
  auto out = detail::open_output(path);
  switch (format) {
    case GraphFormat::EdgeCsv: detail::write_edge_csv(g, out); break;
    case GraphFormat::Dot: detail::write_dot(g, out, style); break;
    case GraphFormat::GraphMl: detail::write_graphml(g, out, style); break;
  }
  if (!out) throw IoError("write failed: " + path);
}

/// Loads any of the three formats this library writes. The DOT and GraphML
/// readers accept the subset produced by export_graph.
inline LoadedGraph load_graph(const std::string& path, GraphFormat format,
                              const EdgeSchema& schema = {}) {
  switch (format) {
    case GraphFormat::EdgeCsv: return load_edges(path, schema);
    case GraphFormat::Dot: return detail::load_dot(path);
    case GraphFormat::GraphMl: return detail::load_graphml(path);
  }
  throw InvalidArgument("unreachable format");
}

// ---------------------------------------------------------------------------
// Attribute CSV (bank and firm tables; kind detected from the header)
// ---------------------------------------------------------------------------

enum class AttributeKind { Banks, Firms };

struct AttributeLoadStats {
  AttributeKind kind{AttributeKind::Banks};
  std::size_t rows{0};
  std::size_t orphans{0};        // ids absent from the graph (when given)
  std::size_t nodes_missing{0};  // graph nodes without an attribute row
};

inline AttributeLoadStats load_attributes(const std::string& path,
                                          NodeAttributes& into,
                                          const BipartiteGraph* graph = nullptr) {
  auto in = detail::open_input(path);
  CsvReader reader(in, path);
  std::vector<std::string> violations;
  auto header = reader.next();
  if (!header) throw LoadError(path, {"missing header row"});

  const std::vector<std::string> bank_cols = {"bank_id", "name", "bank_type",
                                              "region", "capital", "asset"};
  const std::vector<std::string> firm_cols = {"firm_id", "name",  "sector",
                                              "asset",   "debt", "capital"};
  AttributeLoadStats stats;
  if (header->fields == bank_cols) {
    stats.kind = AttributeKind::Banks;
  } else if (header->fields == firm_cols) {
    stats.kind = AttributeKind::Firms;
  } else {
    throw LoadError(path,
                    {"line " + std::to_string(header->line_number) +
                     ": header matches neither the bank attribute schema "
                     "(bank_id,name,bank_type,region,capital,asset) nor the firm "
                     "attribute schema (firm_id,name,sector,asset,debt,capital)"});
  }

  auto money = [&](const std::string& field, const std::string& name,
                   std::size_t line, bool must_be_positive,
                   bool& ok) -> std::optional<double> {
    if (field.empty()) return std::nullopt;
    auto v = parse_double(field);
    if (!v) {
      violations.push_back("line " + std::to_string(line) + ": " + name +
                           " is not a number: \"" + field + "\"");
      ok = false;
      return std::nullopt;
    }
    if (must_be_positive && *v <= 0.0) {
      violations.push_back("line " + std::to_string(line) + ": " + name +
                           " must be positive");
      ok = false;
      return std::nullopt;
    }
    return v;
  };

  while (auto row = reader.next()) {
    std::string where = "line " + std::to_string(row->line_number);
    if (row->fields.size() != 6) {
      violations.push_back(where + ": expected 6 fields, got " +
                           std::to_string(row->fields.size()));
      continue;
    }
    const std::string& id = row->fields[0];
    if (id.empty()) {
      violations.push_back(where + ": empty id");
      continue;
    }
    bool ok = true;
    if (stats.kind == AttributeKind::Banks) {
      BankAttr attr;
      attr.name = row->fields[1];
      auto type = parse_int(row->fields[2]);
      if (!type || *type < 1 || *type > 6) {
        violations.push_back(where + ": bank_type must be an integer in 1..6");
        ok = false;
      } else {
        attr.bank_type = static_cast<int>(*type);
      }
      auto region = parse_int(row->fields[3]);
      if (!region || *region < 0 || *region > 7) {
        violations.push_back(where + ": region must be an integer in 0..7");
        ok = false;
      } else {
        attr.region = static_cast<int>(*region);
      }
      attr.capital = money(row->fields[4], "capital", row->line_number, false, ok);
      attr.asset = money(row->fields[5], "asset", row->line_number, true, ok);
      if (!ok) continue;
      if (graph && !graph->find_bank(id)) ++stats.orphans;
      into.banks[id] = std::move(attr);
    } else {
      FirmAttr attr;
      attr.name = row->fields[1];
      attr.sector = row->fields[2];
      try {
        attr.group = sector_group(attr.sector);
      } catch (const InvalidArgument& e) {
        violations.push_back(where + ": " + e.what());
        ok = false;
      }
      attr.asset = money(row->fields[3], "asset", row->line_number, true, ok);
      attr.debt = money(row->fields[4], "debt", row->line_number, false, ok);
      attr.capital = money(row->fields[5], "capital", row->line_number, false, ok);
      if (!ok) continue;
      if (graph && !graph->find_firm(id)) ++stats.orphans;
      into.firms[id] = std::move(attr);
    }
    ++stats.rows;
  }
  if (!violations.empty()) throw LoadError(path, violations);

  if (graph) {
    if (stats.kind == AttributeKind::Banks) {
      for (const auto& id : graph->bank_ids())
        if (!into.banks.count(id)) ++stats.nodes_missing;
    } else {
      for (const auto& id : graph->firm_ids())
        if (!into.firms.count(id)) ++stats.nodes_missing;
    }
  }
  return stats;
}

// ---------------------------------------------------------------------------
// Projection and forest exports
// ---------------------------------------------------------------------------

inline void export_projection(const ProjectedGraph& p, const std::string& path,
                              GraphFormat format, const ExportStyle& style = {}) {
  auto out = detail::open_output(path);
  switch (format) {
    case GraphFormat::EdgeCsv: {
      out << "# one-mode projection; weight = number of shared counterparties\n";
      out << "# mode: " << to_string(p.mode()) << "\n";
      out << "id_a,id_b,shared_count\n";
      for (const auto& e : p.edges())
        write_csv_row(out, {p.node_id(e.a), p.node_id(e.b),
                            std::to_string(e.shared)});
      break;
    }
    case GraphFormat::Dot: {
      out << "graph projection {\n";
      out << "  // mode: " << to_string(p.mode()) << "\n";
      out << "  node [shape=circle];\n";
      for (std::size_t i = 0; i < p.node_count(); ++i) {
        out << "  " << detail::dot_quote(p.node_id(i));
        if (auto color = detail::node_color(style, p.mode(), p.node_id(i)))
          out << " [style=filled, fillcolor=" << *color << "]";
        out << ";\n";
      }
      for (const auto& e : p.edges())
        out << "  " << detail::dot_quote(p.node_id(e.a)) << " -- "
            << detail::dot_quote(p.node_id(e.b)) << " [weight=" << e.shared
            << "];\n";
      out << "}\n";
      break;
    }
    case GraphFormat::GraphMl: {
      out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
      out << "<graphml xmlns=\"http://graphml.graphdrawing.org/xmlns\">\n";
      out << "  <key id=\"color\" for=\"node\" attr.name=\"color\" attr.type=\"string\"/>\n";
      out << "  <key id=\"shared\" for=\"edge\" attr.name=\"shared_count\" attr.type=\"int\"/>\n";
      out << "  <graph edgedefault=\"undirected\">\n";
      for (std::size_t i = 0; i < p.node_count(); ++i) {
        out << "    <node id=\"" << detail::xml_escape(p.node_id(i)) << "\">";
        if (auto color = detail::node_color(style, p.mode(), p.node_id(i)))
          out << "<data key=\"color\">" << *color << "</data>";
        out << "</node>\n";
      }
      for (const auto& e : p.edges())
        out << "    <edge source=\"" << detail::xml_escape(p.node_id(e.a))
            << "\" target=\"" << detail::xml_escape(p.node_id(e.b))
            << "\"><data key=\"shared\">" << e.shared << "</data></edge>\n";
      out << "  </graph>\n</graphml>\n";
      break;
    }
  }
  if (!out) throw IoError("write failed: " + path);
}

/// Reads a projection edge list written by export_projection (CSV). The mode
/// is taken from the `# mode:` comment; nodes are the ids appearing in edges,
/// interned in file order.
inline ProjectedGraph load_projection(const std::string& path) {
  auto raw = detail::open_input(path);
  std::optional<Mode> mode;
  {
    std::string line;
    while (std::getline(raw, line)) {
      if (line.rfind("# mode: bank", 0) == 0) mode = Mode::Bank;
      if (line.rfind("# mode: firm", 0) == 0) mode = Mode::Firm;
      if (!line.empty() && line[0] != '#') break;
    }
  }
  if (!mode)
    throw LoadError(path, {"missing \"# mode: bank|firm\" metadata comment"});

  auto in = detail::open_input(path);
  CsvReader reader(in, path);
  std::vector<std::string> violations;
  auto header = reader.next();
  if (!header || header->fields != std::vector<std::string>{"id_a", "id_b",
                                                            "shared_count"})
    throw LoadError(path,
                    {"line " +
                         std::to_string(header ? header->line_number : 0) +
                         ": expected header id_a,id_b,shared_count"});

  std::vector<std::string> ids;
  std::unordered_map<std::string, std::uint32_t> index;
  auto intern = [&](const std::string& id) {
    auto [it, inserted] = index.try_emplace(id, static_cast<std::uint32_t>(ids.size()));
    if (inserted) ids.push_back(id);
    return it->second;
  };
  std::vector<ProjectedEdge> edges;
  while (auto row = reader.next()) {
    std::string where = "line " + std::to_string(row->line_number);
    if (row->fields.size() != 3) {
      violations.push_back(where + ": expected 3 fields");
      continue;
    }
    auto shared = parse_int(row->fields[2]);
    if (!shared || *shared < 1) {
      violations.push_back(where + ": shared_count must be a positive integer");
      continue;
    }
    if (row->fields[0].empty() || row->fields[1].empty()) {
      violations.push_back(where + ": empty node id");
      continue;
    }
    if (row->fields[0] == row->fields[1]) {
      violations.push_back(where + ": self loop");
      continue;
    }
    std::uint32_t a = intern(row->fields[0]);
    std::uint32_t b = intern(row->fields[1]);
    if (a > b) std::swap(a, b);
    edges.push_back({a, b, static_cast<std::uint32_t>(*shared)});
  }
  if (!violations.empty()) throw LoadError(path, violations);
  std::sort(edges.begin(), edges.end(),
            [](const ProjectedEdge& x, const ProjectedEdge& y) {
              return x.a != y.a ? x.a < y.a : x.b < y.b;
            });
  for (std::size_t i = 1; i < edges.size(); ++i)
    if (edges[i].a == edges[i - 1].a && edges[i].b == edges[i - 1].b)
      throw LoadError(path, {"duplicate projected edge " + ids[edges[i].a] +
                             " -- " + ids[edges[i].b]});
  return ProjectedGraph(*mode, std::move(ids), std::move(edges),
                        detail::file_stem(path));
}

inline void export_forest(const SpanningForest& f, const std::string& path,
                          GraphFormat format, const ExportStyle& style = {}) {
  auto out = detail::open_output(path);
  auto flat = f.all_edges();
  switch (format) {
    case GraphFormat::EdgeCsv: {
      out << "# minimal spanning forest; distance = 1 - w/w_max\n";
      out << "# mode: " << to_string(f.mode()) << "\n";
      out << "component,id_a,id_b,shared_count,distance\n";
      std::size_t component = 0;
      for (const auto& tree : f.trees()) {
        for (const auto& e : tree)
          write_csv_row(out, {std::to_string(component), f.node_id(e.a),
                              f.node_id(e.b), format_double(e.weight),
                              format_double(e.distance)});
        ++component;
      }
      break;
    }
    case GraphFormat::Dot: {
      out << "graph spanning_forest {\n";
      out << "  // mode: " << to_string(f.mode()) << "\n";
      out << "  node [shape=circle];\n";
      for (std::size_t i = 0; i < f.node_count(); ++i) {
        out << "  " << detail::dot_quote(f.node_id(i));
        if (auto color = detail::node_color(style, f.mode(), f.node_id(i)))
          out << " [style=filled, fillcolor=" << *color << "]";
        out << ";\n";
      }
      for (const auto& e : flat)
        out << "  " << detail::dot_quote(f.node_id(e.a)) << " -- "
            << detail::dot_quote(f.node_id(e.b)) << " [weight="
            << format_double(e.weight) << ", distance="
            << format_double(e.distance) << "];\n";
      out << "}\n";
      break;
    }
    case GraphFormat::GraphMl: {
      out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
      out << "<graphml xmlns=\"http://graphml.graphdrawing.org/xmlns\">\n";
      out << "  <key id=\"color\" for=\"node\" attr.name=\"color\" attr.type=\"string\"/>\n";
      out << "  <key id=\"weight\" for=\"edge\" attr.name=\"shared_count\" attr.type=\"double\"/>\n";
      out << "  <key id=\"distance\" for=\"edge\" attr.name=\"distance\" attr.type=\"double\"/>\n";
      out << "  <graph edgedefault=\"undirected\">\n";
      for (std::size_t i = 0; i < f.node_count(); ++i) {
        out << "    <node id=\"" << detail::xml_escape(f.node_id(i)) << "\">";
        if (auto color = detail::node_color(style, f.mode(), f.node_id(i)))
          out << "<data key=\"color\">" << *color << "</data>";
        out << "</node>\n";
      }
      for (const auto& e : flat)
        out << "    <edge source=\"" << detail::xml_escape(f.node_id(e.a))
            << "\" target=\"" << detail::xml_escape(f.node_id(e.b))
            << "\"><data key=\"weight\">" << format_double(e.weight)
            << "</data><data key=\"distance\">" << format_double(e.distance)
            << "</data></edge>\n";
      out << "  </graph>\n</graphml>\n";
    }
  }
  if (!out) throw IoError("write failed: " + path);
}

// Distribution / table writers shared by the CLI.

inline void write_distribution_csv(const std::string& path,
                                   const CumulativeDistribution& dist) {
  auto out = detail::open_output(path);
  out << "# survival distribution P>(x); sample_count=" << dist.sample_count
      << "\n";
  out << "value,fraction\n";
  for (const auto& p : dist.points)
    write_csv_row(out, {format_double(p.value), format_double(p.fraction)});
  if (!out) throw IoError("write failed: " + path);
}

}  // namespace creditnet
