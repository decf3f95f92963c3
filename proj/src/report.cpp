/*
 * Copyright 2026 beetle authors
 *
 * This software is licensed under the terms of the Apache License Version 2.0
 * which can be obtained at http://www.apache.org/licenses/LICENSE-2.0.
 */
#include "report.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "dataset.hpp"
#include "errors.hpp"

namespace beetle {

std::string CsvDoc::to_string() const {
  std::ostringstream out;
  if (!comment.empty()) out << "# " << comment << '\n';
  for (std::size_t i = 0; i < columns.size(); ++i) {
    if (i > 0) out << ',';
    out << columns[i];
  }
  out << '\n';
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i > 0) out << ',';
      out << row[i];
    }
    out << '\n';
  }
  return out.str();
}

void CsvDoc::write(const std::filesystem::path& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ComputeError("cannot write '" + path.string() + "'");
  out << to_string();
}

CsvDoc CsvDoc::parse(const std::string& text) {
  CsvDoc doc;
  std::istringstream in(text);
  std::string line;
  bool have_header = false;
  auto split = [](const std::string& s) {
    std::vector<std::string> fields;
    std::string cur;
    for (char ch : s) {
      if (ch == ',') {
        fields.push_back(cur);
        cur.clear();
      } else if (ch != '\r') {
        cur += ch;
      }
    }
    fields.push_back(cur);
    return fields;
  };
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (line[0] == '#') {
      std::size_t start = 1;
      while (start < line.size() && line[start] == ' ') ++start;
      doc.comment = line.substr(start);
      continue;
    }
    if (!have_header) {
      doc.columns = split(line);
      have_header = true;
    } else {
      doc.rows.push_back(split(line));
    }
  }
  if (!have_header) throw ValidationError("CSV document has no header row");
  return doc;
}

CsvDoc CsvDoc::read(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot open '" + path.string() + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse(buffer.str());
}

std::string render_table(const CsvDoc& doc) {
  std::vector<std::size_t> widths(doc.columns.size(), 0);
  for (std::size_t i = 0; i < doc.columns.size(); ++i) widths[i] = doc.columns[i].size();
  for (const auto& row : doc.rows) {
    for (std::size_t i = 0; i < row.size() && i < widths.size(); ++i) {
      widths[i] = std::max(widths[i], row[i].size());
    }
  }
  std::ostringstream out;
  if (!doc.comment.empty()) out << "# " << doc.comment << '\n';
  auto emit = [&](const std::vector<std::string>& row) {
    for (std::size_t i = 0; i < widths.size(); ++i) {
      const std::string& cell = i < row.size() ? row[i] : std::string();
      out << cell << std::string(widths[i] - cell.size(), ' ');
      if (i + 1 < widths.size()) out << "  ";
    }
    out << '\n';
  };
  emit(doc.columns);
  {
    std::vector<std::string> rule(widths.size());
    for (std::size_t i = 0; i < widths.size(); ++i) rule[i] = std::string(widths[i], '-');
    emit(rule);
  }
  for (const auto& row : doc.rows) emit(row);
  return out.str();
}

std::string format_fixed(double v, int decimals) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*f", decimals, v);
  return std::string(buf);
}

CsvDoc ranked_groups_csv(const RankedGroups& groups, std::string comment,
                         const std::string& label_column) {
  CsvDoc doc;
  doc.comment = std::move(comment);
  doc.columns = {"rank", label_column, "median", "iqr"};
  for (const RankedGroup& group : groups.groups) {
    for (const GroupMember& member : group.members) {
      doc.rows.push_back({std::to_string(group.rank), member.label, format_double(member.median),
                          format_double(member.iqr)});
    }
  }
  return doc;
}

std::string render_ranked_groups(const RankedGroups& groups, const std::string& label_column) {
  CsvDoc doc;
  doc.columns = {"rank", label_column, "median", "iqr"};
  for (const RankedGroup& group : groups.groups) {
    for (const GroupMember& member : group.members) {
      doc.rows.push_back({std::to_string(group.rank), member.label, format_fixed(member.median),
                          format_fixed(member.iqr)});
    }
  }
  return render_table(doc);
}

}  // namespace beetle
