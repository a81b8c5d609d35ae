// Command-line front end: reproducible analysis runs over bank-firm credit
// networks. Every command validates its inputs fully, writes plot-ready CSV
// (plus DOT/GraphML where applicable) into --out, and records a manifest.
// Exit codes: 0 success, 1 validation error, 2 computation/io error.

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "creditnet/attributes.hpp"
#include "creditnet/bipartite_graph.hpp"
#include "creditnet/csv.hpp"
#include "creditnet/error.hpp"
#include "creditnet/generator.hpp"
#include "creditnet/io.hpp"
#include "creditnet/manifest.hpp"
#include "creditnet/metrics.hpp"
#include "creditnet/projection.hpp"
#include "creditnet/spanning_forest.hpp"
#include "creditnet/tail_fit.hpp"
#include "creditnet/version.hpp"

namespace fs = std::filesystem;
using namespace creditnet;

namespace {

struct OutputDir {
  explicit OutputDir(const std::string& dir) : dir_(dir) {
    std::error_code ec;
    fs::create_directories(dir_, ec);
    if (ec) throw IoError("cannot create output directory: " + dir);
  }
  std::string file(const std::string& name) const { return (dir_ / name).string(); }
  fs::path dir_;
};

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open for writing: " + path);
  return out;
}

void write_kv_csv(const std::string& path,
                  const std::vector<std::pair<std::string, std::string>>& rows) {
  auto out = open_out(path);
  out << "key,value\n";
  for (const auto& [k, v] : rows) write_csv_row(out, {k, v});
}

NodeAttributes load_attr_files(const std::vector<std::string>& paths,
                               const BipartiteGraph& g,
                               std::vector<std::string>& notes) {
  NodeAttributes attrs;
  for (const auto& path : paths) {
    auto stats = load_attributes(path, attrs, &g);
    std::ostringstream note;
    note << path << ": "
         << (stats.kind == AttributeKind::Banks ? "bank" : "firm")
         << " attributes, " << stats.rows << " rows, " << stats.orphans
         << " orphan ids, " << stats.nodes_missing << " graph nodes uncovered";
    notes.push_back(note.str());
  }
  return attrs;
}

// Simple in-memory CSV table for the fit/corr commands.
struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  std::size_t column(const std::string& name, const std::string& path) const {
    auto it = std::find(header.begin(), header.end(), name);
    if (it == header.end())
      throw LoadError(path, {"no column named \"" + name + "\""});
    return static_cast<std::size_t>(it - header.begin());
  }
};

Table read_table(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open for reading: " + path);
  CsvReader reader(in, path);
  Table t;
  auto header = reader.next();
  if (!header) throw LoadError(path, {"missing header row"});
  t.header = header->fields;
  while (auto row = reader.next()) {
    row->fields.resize(t.header.size());
    t.rows.push_back(std::move(row->fields));
  }
  return t;
}

struct WhereClause {
  std::optional<std::size_t> column;
  std::string value;
};

WhereClause parse_where(const std::string& expr, const Table& t,
                        const std::string& path) {
  WhereClause w;
  if (expr.empty()) return w;
  std::size_t eq = expr.find('=');
  if (eq == std::string::npos)
    throw InvalidArgument("--where expects column=value, got \"" + expr + "\"");
  w.column = t.column(expr.substr(0, eq), path);
  w.value = expr.substr(eq + 1);
  return w;
}

std::string fmt(double v) { return format_double(v); }

// ---------------------------------------------------------------------------
// synth
// ---------------------------------------------------------------------------

struct SynthArgs {
  std::string out;
  GeneratorConfig cfg;
};

void write_bank_attr_csv(const std::string& path, const BipartiteGraph& g,
                         const NodeAttributes& attrs) {
  auto out = open_out(path);
  out << "# bank classification and balance-sheet data; amounts in million yen\n";
  out << "bank_id,name,bank_type,region,capital,asset\n";
  for (const auto& id : g.bank_ids()) {
    const BankAttr* a = attrs.bank(id);
    if (!a) continue;
    write_csv_row(out, {id, a->name, std::to_string(a->bank_type),
                        std::to_string(a->region),
                        a->capital ? fmt(*a->capital) : "",
                        a->asset ? fmt(*a->asset) : ""});
  }
}

void write_firm_attr_csv(const std::string& path, const BipartiteGraph& g,
                         const NodeAttributes& attrs) {
  auto out = open_out(path);
  out << "# firm sector and balance-sheet data; amounts in million yen\n";
  out << "firm_id,name,sector,asset,debt,capital\n";
  for (const auto& id : g.firm_ids()) {
    const FirmAttr* a = attrs.firm(id);
    if (!a) continue;
    write_csv_row(out, {id, a->name, a->sector, a->asset ? fmt(*a->asset) : "",
                        a->debt ? fmt(*a->debt) : "",
                        a->capital ? fmt(*a->capital) : ""});
  }
}

int run_synth(const SynthArgs& args, const std::vector<std::string>& argv) {
  auto net = generate(args.cfg);
  OutputDir out(args.out);
  export_graph(net.graph, out.file("edges.csv"), GraphFormat::EdgeCsv);
  write_bank_attr_csv(out.file("banks.csv"), net.graph, net.attributes);
  write_firm_attr_csv(out.file("firms.csv"), net.graph, net.attributes);

  RunManifest manifest;
  manifest.command = "synth";
  manifest.args = argv;
  manifest.config = {
      {"banks", std::to_string(args.cfg.bank_count)},
      {"firms", std::to_string(args.cfg.firm_count)},
      {"mu", fmt(args.cfg.firm_degree_exponent)},
      {"mean_degree", fmt(args.cfg.mean_firm_degree)},
      {"weight_mu", fmt(args.cfg.weight_exponent)},
      {"min_weight", fmt(args.cfg.min_weight)},
      {"max_weight", fmt(args.cfg.max_weight)},
      {"attachment_prior", fmt(args.cfg.attachment_prior)},
      {"split_ratio",
       args.cfg.split_ratio ? fmt(*args.cfg.split_ratio) : "uniform"},
      {"seed", std::to_string(args.cfg.seed)},
      {"scale", fmt(args.cfg.scale)},
  };
  manifest.outputs = {"edges.csv", "banks.csv", "firms.csv"};
  write_manifest(out.file("manifest.jsonl"), manifest);

  double mean_kf = static_cast<double>(net.graph.edge_count()) /
                   static_cast<double>(net.graph.firm_count());
  std::size_t max_kb = 0;
  for (std::size_t b = 0; b < net.graph.bank_count(); ++b)
    max_kb = std::max(max_kb, net.graph.degree(bank_ref(b)));
  std::cout << "generated " << net.graph.bank_count() << " banks, "
            << net.graph.firm_count() << " firms, " << net.graph.edge_count()
            << " edges (seed " << args.cfg.seed << ")\n"
            << "mean firm degree " << mean_kf << ", max bank degree " << max_kb
            << ", dropped stubs " << net.dropped_stubs << "\n"
            << "wrote edges.csv, banks.csv, firms.csv to " << args.out << "\n";
  return 0;
}

// ---------------------------------------------------------------------------
// stats
// ---------------------------------------------------------------------------

struct StatsArgs {
  std::string edges;
  std::vector<std::string> attrs;
  std::string out;
  std::string normalize_by = "firm";
  std::string asset_framing = "reported";
  std::size_t asset_classes = 5;
};

struct ModeSummary {
  std::size_t count{0}, isolated{0}, max_degree{0};
  double mean_degree{0}, mean_strength{0}, max_strength{0};
};

ModeSummary summarize_mode(const BipartiteGraph& g, Mode mode) {
  ModeSummary s;
  s.count = g.node_count(mode);
  for (std::size_t i = 0; i < s.count; ++i) {
    std::size_t k = g.degree({mode, i});
    double st = g.strength({mode, i});
    if (k == 0) ++s.isolated;
    s.max_degree = std::max(s.max_degree, k);
    s.max_strength = std::max(s.max_strength, st);
    s.mean_degree += static_cast<double>(k);
    s.mean_strength += st;
  }
  if (s.count > 0) {
    s.mean_degree /= static_cast<double>(s.count);
    s.mean_strength /= static_cast<double>(s.count);
  }
  return s;
}

std::vector<double> degree_values(const BipartiteGraph& g, Mode mode,
                                  bool skip_isolated) {
  std::vector<double> v;
  for (std::size_t i = 0; i < g.node_count(mode); ++i) {
    std::size_t k = g.degree({mode, i});
    if (skip_isolated && k == 0) continue;
    v.push_back(static_cast<double>(k));
  }
  return v;
}

int run_stats(const StatsArgs& args, const std::vector<std::string>& argv) {
  auto loaded = load_edges(args.edges);
  const BipartiteGraph& g = loaded.graph;
  if (g.edge_count() == 0)
    throw InvalidArgument(args.edges + ": graph has no edges, nothing to report");

  std::vector<std::string> notes;
  NodeAttributes attrs = load_attr_files(args.attrs, g, notes);
  const bool have_firm_attrs = !attrs.firms.empty();
  const bool have_bank_attrs = !attrs.banks.empty();

  auto firm_asset = [&](const FirmAttr& a) -> std::optional<double> {
    if (args.asset_framing == "capital-minus-debt") {
      if (a.capital && a.debt) return *a.capital - *a.debt;
      return std::nullopt;
    }
    return a.asset;
  };

  // --- compute everything before writing anything ---
  ModeSummary banks = summarize_mode(g, Mode::Bank);
  ModeSummary firms = summarize_mode(g, Mode::Firm);
  DiameterReport dia = g.diameter();

  auto dist_degree_banks = cumulative_distribution(degree_values(g, Mode::Bank, true));
  auto dist_degree_firms = cumulative_distribution(degree_values(g, Mode::Firm, true));

  std::vector<double> strength_banks, strength_firms, weights;
  for (std::size_t b = 0; b < g.bank_count(); ++b) {
    double s = g.strength(bank_ref(b));
    if (s > 0) strength_banks.push_back(s);
  }
  for (std::size_t f = 0; f < g.firm_count(); ++f) {
    double s = g.strength(firm_ref(f));
    if (s > 0) strength_firms.push_back(s);
  }
  for (const Edge& e : g.edges()) weights.push_back(e.weight.total);
  auto dist_strength_banks = cumulative_distribution(strength_banks);
  auto dist_strength_firms = cumulative_distribution(strength_firms);
  auto dist_weights = cumulative_distribution(weights);

  // Loan sizes normalized by the borrower's (or lender's) capital.
  std::optional<CumulativeDistribution> dist_weights_normalized;
  std::size_t normalize_skipped = 0;
  if (have_firm_attrs || have_bank_attrs) {
    std::vector<double> normalized;
    for (const Edge& e : g.edges()) {
      std::optional<double> capital;
      if (args.normalize_by == "firm") {
        if (const FirmAttr* a = attrs.firm(g.firm_id(e.firm))) capital = a->capital;
      } else {
        if (const BankAttr* a = attrs.bank(g.bank_id(e.bank))) capital = a->capital;
      }
      if (capital && *capital > 0)
        normalized.push_back(e.weight.total / *capital);
      else
        ++normalize_skipped;
    }
    if (!normalized.empty())
      dist_weights_normalized = cumulative_distribution(normalized);
  }

  // Per-node table plus participation and term-share tables.
  struct NodeRow {
    std::string mode, id;
    std::size_t degree;
    double s_total, s_short, s_long;
    std::optional<double> participation, knn;
  };
  std::vector<NodeRow> node_rows;
  std::vector<std::array<std::string, 5>> participation_rows;  // mode,id,k,1/k,Y
  std::vector<std::array<std::string, 4>> term_rows;  // firm,k,short,long
  std::size_t term_share_skipped = 0;
  for (Mode mode : {Mode::Bank, Mode::Firm}) {
    for (std::size_t i = 0; i < g.node_count(mode); ++i) {
      NodeRef n{mode, i};
      NodeRow row;
      row.mode = to_string(mode);
      row.id = g.node_id(n);
      row.degree = g.degree(n);
      row.s_total = g.strength(n, Term::Total);
      row.s_short = g.strength(n, Term::Short);
      row.s_long = g.strength(n, Term::Long);
      if (row.degree > 0 && row.s_total > 0) {
        row.participation = participation_ratio(g, n);
        participation_rows.push_back(
            {row.mode, row.id, std::to_string(row.degree),
             fmt(1.0 / static_cast<double>(row.degree)), fmt(*row.participation)});
      }
      if (row.degree > 0) row.knn = assortativity(g, n);
      if (mode == Mode::Firm) {
        if (row.s_short + row.s_long > 0) {
          TermShare ts = term_share(g, n);
          term_rows.push_back({row.id, std::to_string(row.degree),
                               fmt(ts.short_share), fmt(ts.long_share)});
        } else {
          ++term_share_skipped;
        }
      }
      node_rows.push_back(std::move(row));
    }
  }

  // Correlation table: strength vs degree per mode (raw and log-log), then
  // attribute correlations when the data is present.
  struct CorrRow {
    std::string label, method, transform;
    CorrelationResult r;
  };
  std::vector<CorrRow> corr_rows;
  auto add_pearson = [&](const std::string& label, const std::string& transform,
                         std::vector<double> xs, std::vector<double> ys) {
    if (xs.size() < 3) return;
    try {
      corr_rows.push_back({label, "pearson", transform, pearson(xs, ys)});
    } catch (const InvalidArgument&) {
      // constant input: skip the row rather than fail the run
    }
  };
  for (Mode mode : {Mode::Bank, Mode::Firm}) {
    for (Term term : {Term::Total, Term::Short, Term::Long}) {
      std::vector<double> ks, ss, log_ks, log_ss;
      for (std::size_t i = 0; i < g.node_count(mode); ++i) {
        std::size_t k = g.degree({mode, i});
        double s = g.strength({mode, i}, term);
        if (k == 0 || s <= 0) continue;
        ks.push_back(static_cast<double>(k));
        ss.push_back(s);
        log_ks.push_back(std::log10(static_cast<double>(k)));
        log_ss.push_back(std::log10(s));
      }
      std::string label = std::string(to_string(mode)) + "_strength_" +
                          (term == Term::Total ? "total"
                           : term == Term::Short ? "short"
                                                 : "long") +
                          "_vs_degree";
      add_pearson(label, "none", ss, ks);
      if (term == Term::Total) add_pearson(label, "log10", log_ss, log_ks);
    }
  }
  if (have_firm_attrs) {
    std::vector<double> debts, assets, dars;
    std::vector<double> ks_debt, ks_asset, ks_dar;
    std::vector<double> debt_for_asset, asset_for_debt;
    for (std::size_t f = 0; f < g.firm_count(); ++f) {
      const FirmAttr* a = attrs.firm(g.firm_id(f));
      if (!a) continue;
      double k = static_cast<double>(g.degree(firm_ref(f)));
      auto asset = firm_asset(*a);
      if (a->debt) {
        ks_debt.push_back(k);
        debts.push_back(*a->debt);
      }
      if (asset && *asset > 0) {
        ks_asset.push_back(k);
        assets.push_back(*asset);
      }
      if (a->debt && asset && *asset > 0) {
        ks_dar.push_back(k);
        dars.push_back(*a->debt / *asset);
        debt_for_asset.push_back(*a->debt);
        asset_for_debt.push_back(*asset);
      }
    }
    if (ks_debt.size() >= 2) {
      try {
        corr_rows.push_back({"firm_debt_vs_degree", "kendall", "none",
                             kendall_tau(ks_debt, debts)});
      } catch (const InvalidArgument&) {
      }
    }
    add_pearson("firm_debt_vs_degree", "none", debts, ks_debt);
    add_pearson("firm_asset_vs_degree", "none", assets, ks_asset);
    add_pearson("firm_dar_vs_degree", "none", dars, ks_dar);
    add_pearson("firm_debt_vs_asset", "none", debt_for_asset, asset_for_debt);
  }

  // Capital-to-asset ratio against log degree for regional banks (the city
  // banks sit on a different branch and are excluded from the regression).
  std::optional<RegressionResult> bank_regression;
  std::size_t regression_n = 0;
  if (have_bank_attrs) {
    std::vector<double> xs, ys;
    for (std::size_t b = 0; b < g.bank_count(); ++b) {
      const BankAttr* a = attrs.bank(g.bank_id(b));
      if (!a || a->bank_type == 2) continue;
      std::size_t k = g.degree(bank_ref(b));
      if (k == 0 || !a->capital || !a->asset || *a->asset <= 0) continue;
      xs.push_back(std::log10(static_cast<double>(k)));
      ys.push_back(*a->capital / *a->asset);
    }
    if (xs.size() >= 3) {
      try {
        bank_regression = linear_regression(xs, ys);
        regression_n = xs.size();
      } catch (const InvalidArgument&) {
      }
    }
  }

  // Firm degree distributions conditioned on size class (equally populated
  // asset classes).
  std::vector<CumulativeDistribution> class_dists;
  std::size_t classed_firms = 0;
  if (have_firm_attrs) {
    std::vector<std::size_t> firm_indices;
    std::vector<double> class_assets;
    for (std::size_t f = 0; f < g.firm_count(); ++f) {
      if (g.degree(firm_ref(f)) == 0) continue;
      const FirmAttr* a = attrs.firm(g.firm_id(f));
      if (!a) continue;
      auto asset = firm_asset(*a);
      if (!asset || *asset <= 0) continue;
      firm_indices.push_back(f);
      class_assets.push_back(*asset);
    }
    if (firm_indices.size() >= args.asset_classes && args.asset_classes >= 1) {
      auto classes = quantile_classes(class_assets, args.asset_classes);
      std::vector<std::size_t> firm_class(g.firm_count(), kNoClass);
      for (std::size_t i = 0; i < firm_indices.size(); ++i)
        firm_class[firm_indices[i]] = classes[i];
      std::vector<std::vector<double>> per_class(args.asset_classes);
      for (std::size_t i = 0; i < firm_indices.size(); ++i)
        per_class[classes[i]].push_back(
            static_cast<double>(g.degree(firm_ref(firm_indices[i]))));
      for (auto& values : per_class)
        class_dists.push_back(cumulative_distribution(values));
      classed_firms = firm_indices.size();
    }
  }

  std::optional<CumulativeDistribution> dist_asset, dist_debt, dist_dar;
  if (have_firm_attrs) {
    std::vector<double> av, dv, rv;
    for (const auto& id : g.firm_ids()) {
      const FirmAttr* a = attrs.firm(id);
      if (!a) continue;
      auto asset = firm_asset(*a);
      if (asset && *asset > 0) av.push_back(*asset);
      if (a->debt && *a->debt > 0) dv.push_back(*a->debt);
      if (a->debt && asset && *asset > 0 && *a->debt > 0)
        rv.push_back(*a->debt / *asset);
    }
    if (!av.empty()) dist_asset = cumulative_distribution(av);
    if (!dv.empty()) dist_debt = cumulative_distribution(dv);
    if (!rv.empty()) dist_dar = cumulative_distribution(rv);
  }

  // --- write outputs ---
  OutputDir out(args.out);
  std::vector<std::string> outputs;
  auto record = [&](const std::string& name) {
    outputs.push_back(name);
    return out.file(name);
  };

  std::vector<std::pair<std::string, std::string>> summary = {
      {"banks", std::to_string(banks.count)},
      {"firms", std::to_string(firms.count)},
      {"edges", std::to_string(g.edge_count())},
      {"duplicate_rows_merged", std::to_string(loaded.stats.duplicate_rows_merged)},
      {"zero_total_rows_dropped", std::to_string(loaded.stats.zero_total_dropped)},
      {"edges_without_term_split", std::to_string(loaded.stats.missing_split_edges)},
      {"mean_bank_degree", fmt(banks.mean_degree)},
      {"mean_firm_degree", fmt(firms.mean_degree)},
      {"max_bank_degree", std::to_string(banks.max_degree)},
      {"max_firm_degree", std::to_string(firms.max_degree)},
      {"mean_bank_strength", fmt(banks.mean_strength)},
      {"mean_firm_strength", fmt(firms.mean_strength)},
      {"max_bank_strength", fmt(banks.max_strength)},
      {"max_firm_strength", fmt(firms.max_strength)},
      {"isolated_banks", std::to_string(banks.isolated)},
      {"isolated_firms", std::to_string(firms.isolated)},
      {"assortativity_excluded_isolated",
       std::to_string(banks.isolated + firms.isolated)},
      {"component_count", std::to_string(dia.component_count)},
      {"connected", dia.connected ? "true" : "false"},
      {"giant_component_size", std::to_string(dia.giant_size)},
      {"giant_component_diameter", std::to_string(dia.diameter)},
      {"term_share_firms_skipped", std::to_string(term_share_skipped)},
  };
  if (dist_weights_normalized) {
    summary.emplace_back("normalized_weight_edges_skipped",
                         std::to_string(normalize_skipped));
    summary.emplace_back("normalize_by", args.normalize_by);
  }
  if (have_firm_attrs) summary.emplace_back("asset_framing", args.asset_framing);
  write_kv_csv(record("summary.csv"), summary);

  {
    auto os = open_out(record("nodes.csv"));
    os << "mode,id,degree,strength_total,strength_short,strength_long,"
          "participation_ratio,assortativity\n";
    for (const auto& r : node_rows)
      write_csv_row(os, {r.mode, r.id, std::to_string(r.degree), fmt(r.s_total),
                         fmt(r.s_short), fmt(r.s_long),
                         r.participation ? fmt(*r.participation) : "",
                         r.knn ? fmt(*r.knn) : ""});
  }

  write_distribution_csv(record("dist_degree_banks.csv"), dist_degree_banks);
  write_distribution_csv(record("dist_degree_firms.csv"), dist_degree_firms);
  write_distribution_csv(record("dist_strength_banks.csv"), dist_strength_banks);
  write_distribution_csv(record("dist_strength_firms.csv"), dist_strength_firms);
  write_distribution_csv(record("dist_weight.csv"), dist_weights);
  if (dist_weights_normalized)
    write_distribution_csv(record("dist_weight_normalized.csv"),
                           *dist_weights_normalized);
  if (dist_asset) write_distribution_csv(record("dist_asset.csv"), *dist_asset);
  if (dist_debt) write_distribution_csv(record("dist_debt.csv"), *dist_debt);
  if (dist_dar) write_distribution_csv(record("dist_dar.csv"), *dist_dar);
  for (std::size_t c = 0; c < class_dists.size(); ++c)
    write_distribution_csv(
        record("dist_degree_firms_class" + std::to_string(c + 1) + ".csv"),
        class_dists[c]);

  {
    auto os = open_out(record("participation.csv"));
    os << "# participation ratio Y vs 1/k; Y = sum_j (w_j / s)^2\n";
    os << "mode,id,degree,inv_degree,participation_ratio\n";
    for (const auto& r : participation_rows)
      write_csv_row(os, {r[0], r[1], r[2], r[3], r[4]});
  }
  {
    auto os = open_out(record("term_share.csv"));
    os << "# relative short/long-term strength per firm (split-carrying edges)\n";
    os << "firm_id,degree,short_share,long_share\n";
    for (const auto& r : term_rows) write_csv_row(os, {r[0], r[1], r[2], r[3]});
  }
  {
    auto os = open_out(record("correlations.csv"));
    os << "# kendall rows: tau-b with sigma_multiple vs the no-ties null; "
          "pearson rows: two-sided p-value\n";
    os << "label,method,transform,coefficient,p_value,sigma_multiple,n\n";
    for (const auto& r : corr_rows)
      write_csv_row(os, {r.label, r.method, r.transform, fmt(r.r.coefficient),
                         r.r.p_value ? fmt(*r.r.p_value) : "",
                         r.r.sigma_multiple ? fmt(*r.r.sigma_multiple) : "",
                         std::to_string(r.r.sample_count)});
  }
  if (bank_regression) {
    auto os = open_out(record("regression.csv"));
    os << "# OLS of bank capital-to-asset ratio on log10(degree); city banks "
          "excluded\n";
    os << "slope,intercept,correlation_r,n\n";
    write_csv_row(os, {fmt(bank_regression->slope), fmt(bank_regression->intercept),
                       fmt(bank_regression->correlation_r),
                       std::to_string(regression_n)});
  }

  RunManifest manifest;
  manifest.command = "stats";
  manifest.args = argv;
  manifest.input_paths.push_back(args.edges);
  for (const auto& p : args.attrs) manifest.input_paths.push_back(p);
  manifest.config = {{"normalize_by", args.normalize_by},
                     {"asset_framing", args.asset_framing},
                     {"asset_classes", std::to_string(args.asset_classes)}};
  manifest.outputs = outputs;
  write_manifest(out.file("manifest.jsonl"), manifest);

  std::cout << "banks " << banks.count << " (mean degree " << banks.mean_degree
            << ", max " << banks.max_degree << "), firms " << firms.count
            << " (mean degree " << firms.mean_degree << ", max "
            << firms.max_degree << "), edges " << g.edge_count() << "\n"
            << "components " << dia.component_count << ", giant size "
            << dia.giant_size << ", giant diameter " << dia.diameter << "\n";
  for (const auto& n : notes) std::cout << n << "\n";
  if (classed_firms > 0)
    std::cout << "asset classes: " << class_dists.size() << " over "
              << classed_firms << " firms\n";
  std::cout << "wrote " << outputs.size() << " files to " << args.out << "\n";
  return 0;
}

// ---------------------------------------------------------------------------
// project
// ---------------------------------------------------------------------------

struct ProjectArgs {
  std::string edges;
  std::vector<std::string> attrs;
  std::string out;
  std::string mode;
  std::optional<int> filter_group;
  std::string filter_sector;
  std::optional<int> filter_type;
  std::optional<int> filter_region;
  std::optional<std::size_t> degree_cap;
};

Mode parse_mode(const std::string& mode) {
  if (mode == "bank") return Mode::Bank;
  if (mode == "firm") return Mode::Firm;
  throw InvalidArgument("--mode must be bank or firm, got \"" + mode + "\"");
}

int run_project(const ProjectArgs& args, const std::vector<std::string>& argv) {
  auto loaded = load_edges(args.edges);
  const BipartiteGraph& g = loaded.graph;
  Mode mode = parse_mode(args.mode);

  std::vector<std::string> notes;
  NodeAttributes attrs = load_attr_files(args.attrs, g, notes);

  int filters = (args.filter_group ? 1 : 0) + (args.filter_sector.empty() ? 0 : 1) +
                (args.filter_type ? 1 : 0) + (args.filter_region ? 1 : 0);
  if (filters > 1) throw InvalidArgument("at most one --filter-* may be given");
  if (filters == 1 && attrs.banks.empty() && attrs.firms.empty())
    throw InvalidArgument("filters require --attrs");

  ProjectionOptions options;
  options.degree_cap = args.degree_cap;

  std::uint64_t estimate = estimate_pair_increments(g, mode);
  if (!options.degree_cap && estimate > 100'000'000ull)
    std::cerr << "warning: projection will perform ~" << estimate
              << " pair increments; consider --degree-cap\n";

  ProjectedGraph p = [&] {
    if (filters == 0) return project(g, mode, options);
    auto keep = [&](std::size_t i) {
      if (mode == Mode::Firm) {
        const FirmAttr* a = attrs.firm(g.firm_id(i));
        if (!a) return false;
        if (args.filter_group) return a->group == *args.filter_group;
        return a->sector == args.filter_sector;
      }
      const BankAttr* a = attrs.bank(g.bank_id(i));
      if (!a) return false;
      if (args.filter_type) return a->bank_type == *args.filter_type;
      return a->region == *args.filter_region;
    };
    if (mode == Mode::Firm && !(args.filter_group || !args.filter_sector.empty()))
      throw InvalidArgument("firm projections filter by --filter-group/--filter-sector");
    if (mode == Mode::Bank && !(args.filter_type || args.filter_region))
      throw InvalidArgument("bank projections filter by --filter-type/--filter-region");
    return project_subset(g, mode, keep, options);
  }();

  OutputDir out(args.out);
  ExportStyle style{&attrs, false};
  export_projection(p, out.file("projection.csv"), GraphFormat::EdgeCsv, style);

  std::vector<std::pair<std::string, std::string>> stat_rows = {
      {"mode", to_string(mode)},
      {"source_nodes", std::to_string(g.node_count(mode))},
      {"node_count", std::to_string(p.node_count())},
      {"edge_count", std::to_string(p.edge_count())},
      {"pair_increments_estimate", std::to_string(estimate)},
      {"capped_counterparties", std::to_string(p.capped_counterparties())},
  };
  if (p.node_count() >= 2) {
    ProjectionStats s = projection_stats(p);
    stat_rows.emplace_back("possible_edges", std::to_string(s.possible_edges));
    stat_rows.emplace_back("density", fmt(s.density));
    stat_rows.emplace_back("mean_degree", fmt(s.mean_degree));
  }
  write_kv_csv(out.file("projection_stats.csv"), stat_rows);

  RunManifest manifest;
  manifest.command = "project";
  manifest.args = argv;
  manifest.input_paths.push_back(args.edges);
  for (const auto& a : args.attrs) manifest.input_paths.push_back(a);
  manifest.config = {{"mode", args.mode},
                     {"degree_cap", args.degree_cap
                                        ? std::to_string(*args.degree_cap)
                                        : "none"}};
  manifest.outputs = {"projection.csv", "projection_stats.csv"};
  write_manifest(out.file("manifest.jsonl"), manifest);

  for (const auto& n : notes) std::cout << n << "\n";
  std::cout << to_string(mode) << " projection: " << p.node_count()
            << " nodes, " << p.edge_count() << " edges";
  if (p.node_count() >= 2) {
    ProjectionStats s = projection_stats(p);
    std::cout << ", density " << s.density << ", mean degree " << s.mean_degree;
  }
  std::cout << "\nwrote projection.csv, projection_stats.csv to " << args.out
            << "\n";
  return 0;
}

// ---------------------------------------------------------------------------
// mst
// ---------------------------------------------------------------------------

struct MstArgs {
  std::string edges;
  std::string projection;
  std::string mode = "bank";
  std::vector<std::string> attrs;
  std::string out;
  std::string color_by;  // type | region | group
  std::size_t top = 10;
};

int run_mst(const MstArgs& args, const std::vector<std::string>& argv) {
  if (args.edges.empty() == args.projection.empty())
    throw InvalidArgument("mst needs exactly one of --edges or --projection");

  std::optional<BipartiteGraph> source;
  ProjectedGraph p;
  if (!args.edges.empty()) {
    auto loaded = load_edges(args.edges);
    source = std::move(loaded.graph);
    p = project(*source, parse_mode(args.mode));
  } else {
    p = load_projection(args.projection);
  }

  std::vector<std::string> notes;
  NodeAttributes attrs;
  if (!args.attrs.empty()) {
    if (source) {
      attrs = load_attr_files(args.attrs, *source, notes);
    } else {
      for (const auto& path : args.attrs) load_attributes(path, attrs);
    }
  }

  SpanningForest forest = minimal_spanning_forest(p);
  auto top_hubs = hubs(forest, args.top);

  ExportStyle style{&attrs, args.color_by == "region"};
  OutputDir out(args.out);
  export_forest(forest, out.file("forest.csv"), GraphFormat::EdgeCsv, style);
  export_forest(forest, out.file("forest.dot"), GraphFormat::Dot, style);
  export_forest(forest, out.file("forest.graphml"), GraphFormat::GraphMl, style);
  {
    auto os = open_out(out.file("hubs.csv"));
    os << "rank,id,tree_degree\n";
    for (std::size_t i = 0; i < top_hubs.size(); ++i)
      write_csv_row(os, {std::to_string(i + 1), forest.node_id(top_hubs[i].node),
                         std::to_string(top_hubs[i].degree)});
  }

  RunManifest manifest;
  manifest.command = "mst";
  manifest.args = argv;
  if (!args.edges.empty()) manifest.input_paths.push_back(args.edges);
  if (!args.projection.empty()) manifest.input_paths.push_back(args.projection);
  for (const auto& a : args.attrs) manifest.input_paths.push_back(a);
  manifest.config = {{"mode", to_string(p.mode())},
                     {"color_by", args.color_by.empty() ? "default" : args.color_by},
                     {"top", std::to_string(args.top)}};
  manifest.outputs = {"forest.csv", "forest.dot", "forest.graphml", "hubs.csv"};
  write_manifest(out.file("manifest.jsonl"), manifest);

  for (const auto& n : notes) std::cout << n << "\n";
  std::cout << "spanning forest over " << forest.node_count() << " "
            << to_string(p.mode()) << " nodes";
  if (source)
    std::cout << " (" << source->node_count(p.mode()) << " in the raw graph)";
  std::cout << ": " << forest.edge_count() << " edges, "
            << forest.component_count() << " component(s), total weight "
            << forest.total_weight() << "\n";
  for (std::size_t i = 0; i < top_hubs.size() && i < 3; ++i)
    std::cout << "hub " << i + 1 << ": " << forest.node_id(top_hubs[i].node)
              << " (tree degree " << top_hubs[i].degree << ")\n";
  std::cout << "wrote forest.csv, forest.dot, forest.graphml, hubs.csv to "
            << args.out << "\n";
  return 0;
}

// ---------------------------------------------------------------------------
// fit
// ---------------------------------------------------------------------------

struct FitArgs {
  std::string table;
  std::string column;
  std::string where;
  std::string label;
  std::optional<double> cutoff;
  double cutoff_quantile = 0.5;
  std::string out;
};

int run_fit(const FitArgs& args, const std::vector<std::string>& argv) {
  Table t = read_table(args.table);
  std::size_t col = t.column(args.column, args.table);
  WhereClause where = parse_where(args.where, t, args.table);

  std::vector<double> values;
  std::size_t empty_skipped = 0;
  std::vector<std::string> violations;
  for (std::size_t i = 0; i < t.rows.size(); ++i) {
    const auto& row = t.rows[i];
    if (where.column && row[*where.column] != where.value) continue;
    const std::string& cell = row[col];
    if (cell.empty()) {
      ++empty_skipped;
      continue;
    }
    auto v = parse_double(cell);
    if (!v) {
      violations.push_back("row " + std::to_string(i + 1) + ": \"" + cell +
                           "\" is not a number");
      continue;
    }
    values.push_back(*v);
  }
  if (!violations.empty()) throw LoadError(args.table, violations);
  if (values.empty())
    throw InvalidArgument(args.table + ": no usable values in column \"" +
                          args.column + "\"");

  CutoffStrategy strategy = args.cutoff
                                ? CutoffStrategy(Explicit{*args.cutoff})
                                : CutoffStrategy(FixedQuantile{args.cutoff_quantile});
  double cutoff = select_cutoff(values, strategy);
  TailFit fit = hill_fit(values, cutoff);

  OutputDir out(args.out);
  std::string label = args.label.empty() ? args.column : args.label;
  {
    auto os = open_out(out.file("tailfit.csv"));
    os << "# exponent convention: cumulative tail P>(x) ~ x^-mu "
          "(density exponent = mu + 1)\n";
    os << "# cutoff selection: "
       << (args.cutoff ? "explicit"
                       : "quantile(q=" + fmt(args.cutoff_quantile) + ")")
       << "\n";
    os << "distribution,mu_hat,std_error,cutoff,tail_count,sample_count\n";
    write_csv_row(os, {label, fmt(fit.mu_hat), fmt(fit.std_error),
                       fmt(fit.cutoff), std::to_string(fit.tail_count),
                       std::to_string(values.size())});
  }

  RunManifest manifest;
  manifest.command = "fit";
  manifest.args = argv;
  manifest.input_paths.push_back(args.table);
  manifest.config = {{"column", args.column},
                     {"where", args.where.empty() ? "none" : args.where},
                     {"cutoff", args.cutoff ? fmt(*args.cutoff) : "quantile"},
                     {"cutoff_quantile", fmt(args.cutoff_quantile)}};
  manifest.outputs = {"tailfit.csv"};
  write_manifest(out.file("manifest.jsonl"), manifest);

  std::cout << label << ": mu_hat " << fit.mu_hat << " +- " << fit.std_error
            << " (cutoff " << fit.cutoff << ", tail " << fit.tail_count << "/"
            << values.size() << ", " << empty_skipped << " empty cells skipped)\n"
            << "wrote tailfit.csv to " << args.out << "\n";
  return 0;
}

// ---------------------------------------------------------------------------
// corr
// ---------------------------------------------------------------------------

struct CorrArgs {
  std::string table;
  std::string x, y;
  std::string method = "pearson";
  std::string transform = "none";
  std::string where;
  std::string out;
};

int run_corr(const CorrArgs& args, const std::vector<std::string>& argv) {
  Table t = read_table(args.table);
  std::size_t cx = t.column(args.x, args.table);
  std::size_t cy = t.column(args.y, args.table);
  WhereClause where = parse_where(args.where, t, args.table);
  if (args.method != "pearson" && args.method != "kendall")
    throw InvalidArgument("--method must be pearson or kendall");
  bool log_x = args.transform == "log" || args.transform == "log-x";
  bool log_y = args.transform == "log" || args.transform == "log-y";
  if (args.transform != "none" && !log_x && !log_y)
    throw InvalidArgument("--transform must be none, log, log-x or log-y");

  std::vector<double> xs, ys;
  std::size_t skipped = 0;
  std::vector<std::string> violations;
  for (std::size_t i = 0; i < t.rows.size(); ++i) {
    const auto& row = t.rows[i];
    if (where.column && row[*where.column] != where.value) continue;
    if (row[cx].empty() || row[cy].empty()) {
      ++skipped;
      continue;
    }
    auto vx = parse_double(row[cx]);
    auto vy = parse_double(row[cy]);
    if (!vx || !vy) {
      violations.push_back("row " + std::to_string(i + 1) + ": non-numeric cell");
      continue;
    }
    if ((log_x && *vx <= 0) || (log_y && *vy <= 0)) {
      violations.push_back("row " + std::to_string(i + 1) +
                           ": log transform needs positive values");
      continue;
    }
    xs.push_back(log_x ? std::log10(*vx) : *vx);
    ys.push_back(log_y ? std::log10(*vy) : *vy);
  }
  if (!violations.empty()) throw LoadError(args.table, violations);

  CorrelationResult r = args.method == "pearson" ? pearson(xs, ys)
                                                 : kendall_tau(xs, ys);

  OutputDir out(args.out);
  {
    auto os = open_out(out.file("correlation.csv"));
    os << "x,y,method,transform,coefficient,p_value,sigma_multiple,n\n";
    write_csv_row(os, {args.x, args.y, args.method, args.transform,
                       fmt(r.coefficient), r.p_value ? fmt(*r.p_value) : "",
                       r.sigma_multiple ? fmt(*r.sigma_multiple) : "",
                       std::to_string(r.sample_count)});
  }

  RunManifest manifest;
  manifest.command = "corr";
  manifest.args = argv;
  manifest.input_paths.push_back(args.table);
  manifest.config = {{"x", args.x},
                     {"y", args.y},
                     {"method", args.method},
                     {"transform", args.transform},
                     {"where", args.where.empty() ? "none" : args.where}};
  manifest.outputs = {"correlation.csv"};
  write_manifest(out.file("manifest.jsonl"), manifest);

  std::cout << args.method << "(" << args.x << ", " << args.y
            << ") = " << r.coefficient;
  if (r.p_value) std::cout << " (p " << *r.p_value << ")";
  if (r.sigma_multiple) std::cout << " (" << *r.sigma_multiple << " sigma)";
  std::cout << " over " << r.sample_count << " rows (" << skipped
            << " skipped)\nwrote correlation.csv to " << args.out << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{std::string(kToolName) +
               " - bank-firm credit network analysis toolkit"};
  app.set_version_flag("--version", std::string(kToolName) + " " + kVersion);
  app.require_subcommand(1);

  std::vector<std::string> raw_args(argv + 1, argv + argc);

  SynthArgs synth_args;
  auto* synth = app.add_subcommand(
      "synth", "Generate a calibrated synthetic credit network");
  synth->add_option("--out", synth_args.out, "Output directory")->required();
  synth->add_option("--banks", synth_args.cfg.bank_count, "Bank count");
  synth->add_option("--firms", synth_args.cfg.firm_count, "Firm count");
  synth->add_option("--seed", synth_args.cfg.seed, "RNG seed");
  synth->add_option("--scale", synth_args.cfg.scale,
                    "Fraction of the default node counts, in (0,1]");
  synth->add_option("--mu", synth_args.cfg.firm_degree_exponent,
                    "Firm-degree cumulative tail exponent");
  synth->add_option("--mean-degree", synth_args.cfg.mean_firm_degree,
                    "Target mean firm degree");
  synth->add_option("--weight-mu", synth_args.cfg.weight_exponent,
                    "Loan-size cumulative tail exponent");
  synth->add_option("--min-weight", synth_args.cfg.min_weight,
                    "Smallest loan (million yen)");
  synth->add_option("--max-weight", synth_args.cfg.max_weight,
                    "Loan size clamp (million yen)");
  synth->add_option("--attachment-prior", synth_args.cfg.attachment_prior,
                    "Preferential attachment prior weight");
  synth->add_option("--split-ratio", synth_args.cfg.split_ratio,
                    "Fixed short-term fraction (default: uniform per edge)");

  StatsArgs stats_args;
  auto* stats = app.add_subcommand(
      "stats", "Topological and statistical measures of a credit network");
  stats->add_option("--edges", stats_args.edges, "Edge list CSV")->required();
  stats->add_option("--attrs", stats_args.attrs,
                    "Attribute CSV (repeatable; bank/firm kind auto-detected)");
  stats->add_option("--out", stats_args.out, "Output directory")->required();
  stats->add_option("--normalize-by", stats_args.normalize_by,
                    "Capital used to normalize loan sizes: firm or bank")
      ->check(CLI::IsMember({"firm", "bank"}));
  stats->add_option("--asset-framing", stats_args.asset_framing,
                    "Firm asset: reported or capital-minus-debt")
      ->check(CLI::IsMember({"reported", "capital-minus-debt"}));
  stats->add_option("--asset-classes", stats_args.asset_classes,
                    "Equally populated firm size classes");

  ProjectArgs project_args;
  auto* proj = app.add_subcommand(
      "project", "One-mode projection (co-financing banks / co-financed firms)");
  proj->add_option("--edges", project_args.edges, "Edge list CSV")->required();
  proj->add_option("--mode", project_args.mode, "bank or firm")->required();
  proj->add_option("--attrs", project_args.attrs, "Attribute CSV (repeatable)");
  proj->add_option("--out", project_args.out, "Output directory")->required();
  proj->add_option("--filter-group", project_args.filter_group,
                   "Keep firms of one sector group (1-6)");
  proj->add_option("--filter-sector", project_args.filter_sector,
                   "Keep firms of one named sector");
  proj->add_option("--filter-type", project_args.filter_type,
                   "Keep banks of one type code (1-6)");
  proj->add_option("--filter-region", project_args.filter_region,
                   "Keep banks of one region code (0-7)");
  proj->add_option("--degree-cap", project_args.degree_cap,
                   "Skip counterparties above this degree");

  MstArgs mst_args;
  auto* mst = app.add_subcommand(
      "mst", "Minimal spanning forest backbone of a projection");
  mst->add_option("--edges", mst_args.edges,
                  "Edge list CSV (projected internally)");
  mst->add_option("--projection", mst_args.projection,
                  "Projection CSV from the project command");
  mst->add_option("--mode", mst_args.mode, "bank or firm (with --edges)");
  mst->add_option("--attrs", mst_args.attrs, "Attribute CSV (repeatable)");
  mst->add_option("--out", mst_args.out, "Output directory")->required();
  mst->add_option("--color-by", mst_args.color_by,
                  "Node colors: type, region (banks) or group (firms)")
      ->check(CLI::IsMember({"type", "region", "group"}));
  mst->add_option("--top", mst_args.top, "Hub report size");

  FitArgs fit_args;
  auto* fit = app.add_subcommand(
      "fit", "Hill (maximum likelihood) power-law tail exponent");
  fit->add_option("--table", fit_args.table, "Input CSV")->required();
  fit->add_option("--column", fit_args.column, "Column of positive values")
      ->required();
  fit->add_option("--where", fit_args.where, "Row filter column=value");
  fit->add_option("--label", fit_args.label, "Distribution name in the output");
  fit->add_option("--cutoff", fit_args.cutoff, "Explicit tail cutoff x_min");
  fit->add_option("--cutoff-quantile", fit_args.cutoff_quantile,
                  "Tail cutoff as an empirical quantile (default 0.5)");
  fit->add_option("--out", fit_args.out, "Output directory")->required();

  CorrArgs corr_args;
  auto* corr = app.add_subcommand(
      "corr", "Pearson or Kendall correlation between two table columns");
  corr->add_option("--table", corr_args.table, "Input CSV")->required();
  corr->add_option("--x", corr_args.x, "X column")->required();
  corr->add_option("--y", corr_args.y, "Y column")->required();
  corr->add_option("--method", corr_args.method, "pearson or kendall")
      ->check(CLI::IsMember({"pearson", "kendall"}));
  corr->add_option("--transform", corr_args.transform,
                   "none, log, log-x or log-y (log10)")
      ->check(CLI::IsMember({"none", "log", "log-x", "log-y"}));
  corr->add_option("--where", corr_args.where, "Row filter column=value");
  corr->add_option("--out", corr_args.out, "Output directory")->required();

  try {
    app.parse(argc, argv);
    if (synth->parsed()) return run_synth(synth_args, raw_args);
    if (stats->parsed()) return run_stats(stats_args, raw_args);
    if (proj->parsed()) return run_project(project_args, raw_args);
    if (mst->parsed()) return run_mst(mst_args, raw_args);
    if (fit->parsed()) return run_fit(fit_args, raw_args);
    if (corr->parsed()) return run_corr(corr_args, raw_args);
    return 1;
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 1;
  } catch (const LoadError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const InvalidArgument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
