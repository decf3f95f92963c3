/*
 * Copyright 2026 beetle authors
 *
 * This software is licensed under the terms of the Apache License Version 2.0
 * which can be obtained at http://www.apache.org/licenses/LICENSE-2.0.
 */
#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "stats.hpp"

namespace beetle {

// Result files are plain CSV with one leading '#' comment line carrying the
// seed and configuration that produced them, so every row can be re-derived.
struct CsvDoc {
  std::string comment;  // stored without the leading '#'
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;

  std::string to_string() const;
  void write(const std::filesystem::path& path) const;
  static CsvDoc parse(const std::string& text);
  static CsvDoc read(const std::filesystem::path& path);
};

// Column-aligned rendering of a CSV document.
std::string render_table(const CsvDoc& doc);

// Fixed two-decimal formatting used in rendered tables.
std::string format_fixed(double v, int decimals = 2);

CsvDoc ranked_groups_csv(const RankedGroups& groups, std::string comment,
                         const std::string& label_column = "treatment");
std::string render_ranked_groups(const RankedGroups& groups,
                                 const std::string& label_column = "treatment");

}  // namespace beetle
