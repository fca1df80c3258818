/**
 * @file report.hpp
 * @brief Deterministic report assembly and serialization (JSON, CSV, LaTeX).
 *        Reports are plain titled tables of strings; serialization order is
 *        exactly insertion order, so identical computations yield identical
 *        bytes.
 */
#pragma once

#include <json.hpp>

#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace qsh {

struct ReportTable {
  std::string name;
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;
};

struct Report {
  std::string title;
  std::vector<std::pair<std::string, std::string>> meta;
  std::vector<ReportTable> tables;

  std::string to_json() const {
    nlohmann::ordered_json j;
    j["title"] = title;
    nlohmann::ordered_json m = nlohmann::ordered_json::object();
    for (const auto& [k, v] : meta) m[k] = v;
    j["meta"] = std::move(m);
    j["tables"] = nlohmann::ordered_json::array();
    for (const auto& t : tables) {
      nlohmann::ordered_json jt;
      jt["name"] = t.name;
      jt["columns"] = t.columns;
      jt["rows"] = t.rows;
      j["tables"].push_back(std::move(jt));
    }
    return j.dump(2) + "\n";
  }

  std::string to_csv() const {
    auto esc = [](const std::string& s) {
      if (s.find_first_of(",\"\n") == std::string::npos) return s;
      std::string out = "\"";
      for (char ch : s) {
        if (ch == '"') out += '"';
        out += ch;
      }
      return out + "\"";
    };
    std::ostringstream os;
    os << "# " << title << "\n";
    for (const auto& [k, v] : meta) os << "# " << k << ": " << v << "\n";
    for (const auto& t : tables) {
      os << "# table: " << t.name << "\n";
      for (std::size_t i = 0; i < t.columns.size(); ++i)
        os << (i ? "," : "") << esc(t.columns[i]);
      os << "\n";
      for (const auto& r : t.rows) {
        for (std::size_t i = 0; i < r.size(); ++i)
          os << (i ? "," : "") << esc(r[i]);
        os << "\n";
      }
    }
    return os.str();
  }

  std::string to_latex() const {
    auto esc = [](const std::string& s) {
      std::string out;
      for (char ch : s) {
        if (ch == '_' || ch == '%' || ch == '&' || ch == '#') out += '\\';
        out += ch;
      }
      return out;
    };
    std::ostringstream os;
    os << "% " << title << "\n";
    for (const auto& [k, v] : meta) os << "% " << k << ": " << v << "\n";
    for (const auto& t : tables) {
      os << "% table: " << t.name << "\n";
      os << "\\begin{tabular}{" << std::string(t.columns.size(), 'l')
         << "}\n";
      for (std::size_t i = 0; i < t.columns.size(); ++i)
        os << (i ? " & " : "") << "\\textbf{" << esc(t.columns[i]) << "}";
      os << " \\\\\n\\hline\n";
      for (const auto& r : t.rows) {
        for (std::size_t i = 0; i < r.size(); ++i)
          os << (i ? " & " : "") << esc(r[i]);
        os << " \\\\\n";
      }
      os << "\\end{tabular}\n";
    }
    return os.str();
  }

  std::string render(const std::string& format) const {
    if (format == "json") return to_json();
    if (format == "csv") return to_csv();
    if (format == "latex") return to_latex();
    throw std::invalid_argument("unknown format '" + format + "'");
  }
};

inline void write_output(const std::string& text, const std::string& path) {
  if (path.empty()) {
    fputs(text.c_str(), stdout);
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open output file '" + path + "'");
  f << text;
}

}  // namespace qsh
