#pragma once
// Location and model of the Card (1995) NLSYM extract written by
// tools/fetch_card.py. The file is not part of the repository.

#include "yfwl/model.hpp"

#include <cstdlib>
#include <filesystem>
#include <optional>
#include <string>

inline constexpr Eigen::Index kCardRows = 3010;

inline std::optional<std::string> card_csv_path() {
  std::string path = YFWL_CARD_CSV;
  if (const char* env = std::getenv("YFWL_CARD_CSV")) path = env;
  if (!std::filesystem::exists(path)) return std::nullopt;
  return path;
}

inline yfwl::ModelSpec card_spec() {
  yfwl::ModelSpec spec;
  spec.outcome = "lwage";
  spec.conditioning = {"exper",  "expersq", "black",  "south",  "smsa",   "reg661", "reg662", "reg663",
                       "reg664", "reg665",  "reg666", "reg667", "reg668", "smsa66"};
  spec.of_interest = {"educ"};
  spec.instruments = {"nearc2", "nearc4"};
  return spec;
}
