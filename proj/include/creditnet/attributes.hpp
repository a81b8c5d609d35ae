#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "creditnet/error.hpp"

namespace creditnet {

/// Bank classification codes. 1 long-term credit, 2 city, 3 regional,
/// 4 trust, 5 secondary regional, 6 everything else (insurance companies and
/// other institutions).
inline const char* bank_type_label(int code) {
  switch (code) {
    case 1: return "long-term credit bank";
    case 2: return "city bank";
    case 3: return "regional bank";
    case 4: return "trust bank";
    case 5: return "secondary regional bank";
    case 6: return "other institution";
  }
  throw InvalidArgument("bank_type must be in 1..6, got " + std::to_string(code));
}

inline const char* bank_type_color(int code) {
  switch (code) {
    case 1: return "black";
    case 2: return "blue";
    case 3: return "green";
    case 4: return "yellow";
    case 5: return "orange";
    case 6: return "white";
  }
  throw InvalidArgument("bank_type must be in 1..6, got " + std::to_string(code));
}

/// Geographical codes. 0 marks institutions without a regional footprint.
inline const char* region_label(int code) {
  switch (code) {
    case 0: return "not regional";
    case 1: return "Hokkaido and Tohoku";
    case 2: return "Kantou";
    case 3: return "Chubu";
    case 4: return "Kinki";
    case 5: return "Chugoku";
    case 6: return "Shikoku";
    case 7: return "Kyushu";
  }
  throw InvalidArgument("region must be in 0..7, got " + std::to_string(code));
}

inline const char* region_color(int code) {
  switch (code) {
    case 0: return "white";
    case 1: return "black";
    case 2: return "blue";
    case 3: return "green";
    case 4: return "yellow";
    case 5: return "orange";
    case 6: return "red";
    case 7: return "brown";
  }
  throw InvalidArgument("region must be in 0..7, got " + std::to_string(code));
}

/// Colors for the six firm sector groups (same palette as the bank classes).
inline const char* firm_group_color(int group) {
  switch (group) {
    case 1: return "black";
    case 2: return "blue";
    case 3: return "green";
    case 4: return "yellow";
    case 5: return "orange";
    case 6: return "white";
  }
  throw InvalidArgument("firm group must be in 1..6, got " + std::to_string(group));
}

/// The 34 industrial sectors (17 manufacturing, then 17 non-manufacturing).
inline const std::vector<std::string>& sector_names() {
  static const std::vector<std::string> names = {
      // manufacturing
      "Foods",
      "Textile Products",
      "Pulp & Paper",
      "Chemicals",
      "Drugs",
      "Petroleum",
      "Rubber Products",
      "Stone, Clay & Glass Products",
      "Iron & Steel",
      "Non-ferrous Metal & Metal Products",
      "Machinery",
      "Electric & Electronic Equip.",
      "Shipbuilding & Repair",
      "Motor Vehicles & Auto Parts",
      "Transportation Equip.",
      "Precision Equip.",
      "Other Manufacturing",
      // non-manufacturing
      "Fish & Marine Products",
      "Mining",
      "Construction",
      "Wholesale Trade",
      "Retail Trade",
      "Securities houses",
      "Credit & Leasing",
      "Real Estate",
      "Railroad Transportation",
      "Trucking",
      "Sea Transportation",
      "Air Transportation",
      "Warehousing & Harbor Transportation",
      "Communication Services",
      "Utilities(Electric)",
      "Utilities(Gas)",
      "Services",
  };
  return names;
}

constexpr std::size_t kManufacturingSectors = 17;

/// Six-group sector aggregation:
///   1 foods/chemicals/drugs, 2 metals, 3 vehicles/shipbuilding/transport
///   equipment, 4 machinery/electric/precision/other manufacturing,
///   5 remaining manufacturing, 6 all non-manufacturing.
inline int sector_group(const std::string& sector) {
  static const std::unordered_map<std::string, int> table = [] {
    std::unordered_map<std::string, int> t;
    auto set = [&t](std::initializer_list<const char*> sectors, int group) {
      for (const char* s : sectors) t[s] = group;
    };
    set({"Foods", "Chemicals", "Drugs"}, 1);
    set({"Iron & Steel", "Non-ferrous Metal & Metal Products"}, 2);
    set({"Motor Vehicles & Auto Parts", "Transportation Equip.",
         "Shipbuilding & Repair"},
        3);
    set({"Machinery", "Electric & Electronic Equip.", "Precision Equip.",
         "Other Manufacturing"},
        4);
    const auto& names = sector_names();
    for (std::size_t i = 0; i < names.size(); ++i) {
      if (t.count(names[i])) continue;
      t[names[i]] = i < kManufacturingSectors ? 5 : 6;
    }
    return t;
  }();
  auto it = table.find(sector);
  if (it == table.end())
    throw InvalidArgument("unknown sector: \"" + sector + "\"");
  return it->second;
}

struct BankAttr {
  std::string name;
  int bank_type{6};
  int region{0};
  std::optional<double> capital;  // million yen
  std::optional<double> asset;
};

struct FirmAttr {
  std::string name;
  std::string sector;
  int group{6};
  std::optional<double> asset;
  std::optional<double> debt;
  std::optional<double> capital;

  /// Debt-on-asset ratio; computable only when both components are present.
  std::optional<double> dar() const {
    if (debt && asset && *asset > 0.0) return *debt / *asset;
    return std::nullopt;
  }
};

/// Per-node classification and financials keyed by stable string id.
struct NodeAttributes {
  std::unordered_map<std::string, BankAttr> banks;
  std::unordered_map<std::string, FirmAttr> firms;

  const BankAttr* bank(const std::string& id) const {
    auto it = banks.find(id);
    return it == banks.end() ? nullptr : &it->second;
  }
  const FirmAttr* firm(const std::string& id) const {
    auto it = firms.find(id);
    return it == firms.end() ? nullptr : &it->second;
  }
};

}  // namespace creditnet
