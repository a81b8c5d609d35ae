#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "creditnet/attributes.hpp"
#include "creditnet/bipartite_graph.hpp"
#include "creditnet/error.hpp"
#include "creditnet/random.hpp"

namespace creditnet {

/// Calibration targets default to the 2004 Japanese credit market summary:
/// 190 banks, 2,701 firms, mean firm degree 8, firm-degree cumulative tail
/// exponent 2.6, loan-size tail exponent 0.95.
struct GeneratorConfig {
  std::size_t bank_count = 190;
  std::size_t firm_count = 2701;
  double firm_degree_exponent = 2.6;  // cumulative tail mu
  double mean_firm_degree = 8.0;
  double weight_exponent = 0.95;  // cumulative tail of per-edge loan size
  double min_weight = 10.0;       // million yen
  double max_weight = 1e7;
  /// Preferential-attachment prior: a firm picks banks with probability
  /// proportional to (current bank degree + attachment_prior). Smaller values
  /// concentrate lending on fewer hub banks.
  double attachment_prior = 0.1;
  /// Fixed short-term fraction per edge; unset draws it uniformly in (0, 1).
  std::optional<double> split_ratio;
  std::uint64_t seed = 42;
  double scale = 1.0;  // shrinks both node counts, in (0, 1]
};

struct GeneratedNetwork {
  BipartiteGraph graph;
  NodeAttributes attributes;
  std::size_t dropped_stubs{0};
};

namespace detail {

/// 2004 sector populations used as sampling weights for synthetic firms.
inline const std::vector<std::pair<const char*, int>>& sector_weights_2004() {
  static const std::vector<std::pair<const char*, int>> w = {
      {"Foods", 113},
      {"Textile Products", 55},
      {"Pulp & Paper", 23},
      {"Chemicals", 154},
      {"Drugs", 23},
      {"Petroleum", 9},
      {"Rubber Products", 23},
      {"Stone, Clay & Glass Products", 62},
      {"Iron & Steel", 47},
      {"Non-ferrous Metal & Metal Products", 100},
      {"Machinery", 196},
      {"Electric & Electronic Equip.", 206},
      {"Shipbuilding & Repair", 6},
      {"Motor Vehicles & Auto Parts", 61},
      {"Transportation Equip.", 13},
      {"Precision Equip.", 47},
      {"Other Manufacturing", 95},
      {"Fish & Marine Products", 8},
      {"Mining", 7},
      {"Construction", 168},
      {"Wholesale Trade", 299},
      {"Retail Trade", 220},
      {"Securities houses", 13},
      {"Credit & Leasing", 69},
      {"Real Estate", 93},
      {"Railroad Transportation", 31},
      {"Trucking", 35},
      {"Sea Transportation", 19},
      {"Air Transportation", 4},
      {"Warehousing & Harbor Transportation", 38},
      {"Communication Services", 26},
      {"Utilities(Electric)", 9},
      {"Utilities(Gas)", 12},
      {"Services", 417},
  };
  return w;
}

/// 2004 bank-type populations: type code -> count (total 190).
inline const std::array<std::pair<int, int>, 6>& bank_type_weights_2004() {
  static const std::array<std::pair<int, int>, 6> w = {{
      {1, 2},   // long-term credit
      {2, 7},   // city
      {3, 64},  // regional
      {4, 9},   // trust
      {5, 50},  // secondary regional
      {6, 58},  // others (insurance etc.)
  }};
  return w;
}

inline std::string padded_id(char prefix, std::size_t index, std::size_t count) {
  std::size_t width = std::to_string(count).size();
  std::string digits = std::to_string(index + 1);
  return prefix + std::string(width - std::min(width, digits.size()), '0') + digits;
}

/// Amounts are kept on a 2^-10 million-yen grid (about thousand-yen
/// precision). Grid values this size add exactly in doubles, so strength
/// sums are order-independent.
inline double quantize_amount(double x) {
  return std::round(x * 1024.0) / 1024.0;
}

}  // namespace detail

/// Builds a synthetic bank-firm credit network. Firm degrees are the floor of
/// a continuous Pareto sample whose minimum is tuned so the mean lands on
/// mean_firm_degree while the survival function at integers follows the
/// configured tail exponent exactly; stubs attach to banks preferentially.
/// Identical configs produce identical graphs.
inline GeneratedNetwork generate(const GeneratorConfig& cfg) {
  if (cfg.bank_count < 1 || cfg.firm_count < 1)
    throw InvalidArgument("generate: node counts must be >= 1");
  if (!(cfg.scale > 0.0 && cfg.scale <= 1.0))
    throw InvalidArgument("generate: scale must lie in (0, 1]");
  if (cfg.firm_degree_exponent <= 1.0)
    throw InvalidArgument("generate: firm_degree_exponent must exceed 1 (finite mean)");
  if (cfg.weight_exponent <= 0.0)
    throw InvalidArgument("generate: weight_exponent must be positive");
  if (cfg.min_weight <= 0.0 || cfg.max_weight < cfg.min_weight)
    throw InvalidArgument("generate: weight bounds must satisfy 0 < min <= max");
  if (cfg.split_ratio && !(*cfg.split_ratio >= 0.0 && *cfg.split_ratio <= 1.0))
    throw InvalidArgument("generate: split_ratio must lie in [0, 1]");
  if (cfg.attachment_prior <= 0.0)
    throw InvalidArgument("generate: attachment_prior must be positive");

  const std::size_t banks = std::max<std::size_t>(
      1, static_cast<std::size_t>(std::llround(cfg.scale * cfg.bank_count)));
  const std::size_t firms = std::max<std::size_t>(
      1, static_cast<std::size_t>(std::llround(cfg.scale * cfg.firm_count)));
  if (cfg.mean_firm_degree < 1.0 ||
      cfg.mean_firm_degree > static_cast<double>(banks))
    throw InvalidArgument(
        "generate: mean_firm_degree must lie in [1, bank_count]");

  Rng rng(cfg.seed);
  const double mu = cfg.firm_degree_exponent;
  // E[floor(X)] ~ E[X] - 1/2 for Pareto X, so aim the continuous mean at
  // mean + 1/2.
  const double x_min =
      std::max(1.0, (cfg.mean_firm_degree + 0.5) * (mu - 1.0) / mu);

  std::vector<std::size_t> firm_degree(firms);
  for (std::size_t f = 0; f < firms; ++f) {
    double x = rng.pareto(x_min, mu);
    std::size_t k = static_cast<std::size_t>(std::floor(x));
    firm_degree[f] = std::clamp<std::size_t>(k, 1, banks);
  }

  // Preferential attachment of firm stubs to banks.
  std::vector<double> bank_degree(banks, 0.0);
  double degree_total = 0.0;
  std::size_t dropped = 0;
  std::vector<std::uint32_t> chosen;
  std::vector<std::vector<std::uint32_t>> firm_banks(firms);
  for (std::size_t f = 0; f < firms; ++f) {
    chosen.clear();
    for (std::size_t stub = 0; stub < firm_degree[f]; ++stub) {
      bool placed = false;
      for (int attempt = 0; attempt < 64 && !placed; ++attempt) {
        double r = rng.uniform01() *
                   (degree_total + cfg.attachment_prior * banks);
        std::size_t pick = banks - 1;
        double acc = 0.0;
        for (std::size_t b = 0; b < banks; ++b) {
          acc += bank_degree[b] + cfg.attachment_prior;
          if (r < acc) {
            pick = b;
            break;
          }
        }
        if (std::find(chosen.begin(), chosen.end(),
                      static_cast<std::uint32_t>(pick)) != chosen.end())
          continue;  // collision with this firm's earlier stub: resample
        chosen.push_back(static_cast<std::uint32_t>(pick));
        bank_degree[pick] += 1.0;
        degree_total += 1.0;
        placed = true;
      }
      if (!placed) ++dropped;
    }
    firm_banks[f] = chosen;
  }

  BipartiteGraphBuilder builder;
  builder.set_name("synthetic-" + std::to_string(cfg.seed));
  for (std::size_t b = 0; b < banks; ++b)
    builder.add_bank(detail::padded_id('B', b, banks));
  for (std::size_t f = 0; f < firms; ++f)
    builder.add_firm(detail::padded_id('F', f, firms));
  for (std::size_t f = 0; f < firms; ++f) {
    for (std::uint32_t b : firm_banks[f]) {
      double w = detail::quantize_amount(std::min(
          cfg.max_weight, rng.pareto(cfg.min_weight, cfg.weight_exponent)));
      double ratio = cfg.split_ratio ? *cfg.split_ratio : rng.uniform01();
      double short_part = std::clamp(detail::quantize_amount(w * ratio), 0.0, w);
      builder.add_edge(detail::padded_id('B', b, banks),
                       detail::padded_id('F', f, firms),
                       EdgeWeight::from_split(short_part, w - short_part));
    }
  }
  GeneratedNetwork out{builder.build(), {}, dropped};

  // Attributes: classifications follow the 2004 population shares; financials
  // are anchored to each node's generated borrowing/lending volume.
  const auto& type_weights = detail::bank_type_weights_2004();
  int type_total = 0;
  for (auto [code, n] : type_weights) type_total += n;
  for (std::size_t b = 0; b < banks; ++b) {
    const std::string id = detail::padded_id('B', b, banks);
    BankAttr attr;
    attr.name = "Bank " + id;
    int slot = static_cast<int>(rng.below(static_cast<std::uint64_t>(type_total)));
    for (auto [code, n] : type_weights) {
      if (slot < n) {
        attr.bank_type = code;
        break;
      }
      slot -= n;
    }
    bool regional = attr.bank_type == 3 || attr.bank_type == 5;
    attr.region = regional ? 1 + static_cast<int>(rng.below(7)) : 0;
    double lending = out.graph.strength(bank_ref(b), Term::Total);
    double asset = (lending + cfg.min_weight) * rng.uniform(1.5, 3.0);
    attr.asset = asset;
    attr.capital = asset * rng.uniform(0.02, 0.15);
    out.attributes.banks[id] = std::move(attr);
  }

  const auto& sectors = detail::sector_weights_2004();
  int sector_total = 0;
  for (const auto& [name, n] : sectors) sector_total += n;
  for (std::size_t f = 0; f < firms; ++f) {
    const std::string id = detail::padded_id('F', f, firms);
    FirmAttr attr;
    attr.name = "Firm " + id;
    int slot = static_cast<int>(rng.below(static_cast<std::uint64_t>(sector_total)));
    for (const auto& [name, n] : sectors) {
      if (slot < n) {
        attr.sector = name;
        break;
      }
      slot -= n;
    }
    attr.group = sector_group(attr.sector);
    double borrowing = out.graph.strength(firm_ref(f), Term::Total);
    double debt = (borrowing + cfg.min_weight) * rng.uniform(1.0, 1.5);
    double dar = rng.uniform(0.1, 0.9);
    attr.debt = debt;
    attr.asset = debt / dar;
    attr.capital = *attr.asset + debt;  // asset framing A = K - D
    out.attributes.firms[id] = std::move(attr);
  }

  return out;
}

}  // namespace creditnet
