#include <cctype>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "mixchain/cli.hpp"

namespace mixchain::cli {
namespace {

[[noreturn]] void parse_error(std::size_t line, std::size_t column, const std::string& what) {
  throw Error(ErrorCode::ParseError,
              "line " + std::to_string(line) + ", column " + std::to_string(column) + ": " + what);
}

std::vector<std::vector<double>> parse_json(std::string_view text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(ErrorCode::ParseError, std::string("JSON: ") + e.what());
  }
  if (!doc.is_object() || !doc.contains("matrix") || !doc["matrix"].is_array()) {
    throw Error(ErrorCode::ParseError, "JSON: expected an object with a \"matrix\" array");
  }
  std::vector<std::vector<double>> rows;
  std::size_t r = 0;
  for (const auto& row : doc["matrix"]) {
    ++r;
    if (!row.is_array()) {
      throw Error(ErrorCode::ParseError, "JSON: row " + std::to_string(r) + " is not an array");
    }
    auto& out = rows.emplace_back();
    std::size_t c = 0;
    for (const auto& v : row) {
      ++c;
      if (!v.is_number()) {
        throw Error(ErrorCode::ParseError, "JSON: entry (" + std::to_string(r) + ", " +
                                               std::to_string(c) + ") is not a number");
      }
      out.push_back(v.get<double>());
    }
  }
  return rows;
}

std::vector<std::vector<double>> parse_rows(std::string_view text) {
  std::vector<std::vector<double>> rows;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t eol = std::min(text.find('\n', pos), text.size());
    std::string_view line = text.substr(pos, eol - pos);
    ++line_no;
    pos = eol + 1;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);

    std::vector<double> row;
    std::size_t i = 0;
    while (i < line.size()) {
      if (std::isspace(static_cast<unsigned char>(line[i]))) {
        ++i;
        continue;
      }
      std::size_t j = i;
      while (j < line.size() && !std::isspace(static_cast<unsigned char>(line[j]))) ++j;
      const std::string_view token = line.substr(i, j - i);
      double v = 0.0;
      const char* first = token.data();
      if (!token.empty() && token.front() == '+') ++first;
      const auto [ptr, ec] = std::from_chars(first, token.data() + token.size(), v);
      if (ec != std::errc() || ptr != token.data() + token.size()) {
        parse_error(line_no, i + 1, "not a number: '" + std::string(token) + "'");
      }
      row.push_back(v);
      i = j;
    }
    if (!row.empty()) rows.push_back(std::move(row));
    if (eol == text.size()) break;
  }
  if (rows.empty()) throw Error(ErrorCode::ParseError, "no matrix rows found");
  return rows;
}

}  // namespace

std::vector<std::vector<double>> parse_chain_text(std::string_view text) {
  for (char ch : text) {
    if (std::isspace(static_cast<unsigned char>(ch))) continue;
    if (ch == '{') return parse_json(text);
    break;
  }
  return parse_rows(text);
}

TransitionMatrix load_chain_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::ParseError, "cannot read '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return validate_chain(parse_chain_text(buf.str()));
}

std::string format_chain(const TransitionMatrix& chain) {
  std::string out;
  char num[32];
  for (std::size_t i = 0; i < chain.size(); ++i) {
    for (std::size_t j = 0; j < chain.size(); ++j) {
      std::snprintf(num, sizeof num, "%.17g", chain(i, j));
      if (j) out += ' ';
      out += num;
    }
    out += '\n';
  }
  return out;
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

}  // namespace mixchain::cli
