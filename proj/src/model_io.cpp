#include "hextm/model_io.hpp"

#include <array>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <string>

#include "hextm/errors.hpp"

namespace hextm {

namespace {

constexpr const char* kPolarityLayout = "alternating-positive-first";
constexpr const char* kHexDigits = "0123456789abcdef";

std::string format_double(double v) {
  std::array<char, 64> buf{};
  std::snprintf(buf.data(), buf.size(), "%.17g", v);
  return buf.data();
}

template <typename T>
T parse_number(const std::string& text, std::size_t line) {
  T value{};
  const auto* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc{} || ptr != end) throw ParseError("bad number '" + text + "'", line);
  return value;
}

int hex_value(char c, std::size_t line) {
  if (c >= '0' && c <= '9') return c - '0';
  if (c >= 'a' && c <= 'f') return c - 'a' + 10;
  throw ParseError("bad hex digit in state row", line);
}

}  // namespace

void write_model(const ClauseBank& bank, std::ostream& out) {
  const auto& cfg = bank.config();
  out << kModelHeader << '\n'
      << "num_features " << bank.num_features() << '\n'
      << "n_clauses " << cfg.n_clauses << '\n'
      << "threshold " << cfg.threshold << '\n'
      << "specificity " << format_double(cfg.specificity) << '\n'
      << "states_per_action " << cfg.states_per_action << '\n'
      << "boost_true_positives " << (cfg.boost_true_positives ? 1 : 0) << '\n'
      << "weighted " << (cfg.weighted ? 1 : 0) << '\n'
      << "max_weight " << cfg.max_weight << '\n'
      << "epochs " << cfg.epochs << '\n'
      << "seed " << cfg.seed << '\n'
      << "polarity " << kPolarityLayout << '\n'
      << "weights";
  for (int j = 0; j < bank.num_clauses(); ++j) out << ' ' << bank.weight(j);
  out << "\nstates\n";
  std::string line;
  for (int j = 0; j < bank.num_clauses(); ++j) {
    line.clear();
    for (std::uint8_t s : bank.row(j)) {
      line += kHexDigits[s >> 4];
      line += kHexDigits[s & 15];
    }
    out << line << '\n';
  }
}

void save_model(const ClauseBank& bank, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open model file for writing: " + path.string());
  write_model(bank, out);
  if (!out) throw std::runtime_error("failed writing model file: " + path.string());
}

ClauseBank read_model(std::istream& in, const ModelExpectations& expect) {
  std::string line;
  std::size_t line_no = 0;
  auto next_line = [&]() -> const std::string& {
    if (!std::getline(in, line)) throw ParseError("unexpected end of model file", line_no + 1);
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    return line;
  };

  if (next_line() != kModelHeader) throw ParseError("not a hextm model (expected '" + std::string(kModelHeader) + "')", 1);

  std::map<std::string, std::pair<std::string, std::size_t>> fields;
  while (true) {
    const std::string& l = next_line();
    if (l == "weights" || l.rfind("weights ", 0) == 0) break;
    const auto sp = l.find(' ');
    if (sp == std::string::npos) throw ParseError("expected 'key value'", line_no);
    fields[l.substr(0, sp)] = {l.substr(sp + 1), line_no};
  }
  const std::string weights_line = line;
  const std::size_t weights_line_no = line_no;

  auto field = [&](const std::string& key) -> const std::pair<std::string, std::size_t>& {
    const auto it = fields.find(key);
    if (it == fields.end()) throw ParseError("missing model field '" + key + "'", line_no);
    return it->second;
  };
  auto int_field = [&](const std::string& key) {
    const auto& [text, at] = field(key);
    return parse_number<int>(text, at);
  };

  TMConfig cfg;
  const int num_features = int_field("num_features");
  cfg.n_clauses = int_field("n_clauses");
  cfg.threshold = int_field("threshold");
  cfg.specificity = parse_number<double>(field("specificity").first, field("specificity").second);
  cfg.states_per_action = int_field("states_per_action");
  cfg.boost_true_positives = int_field("boost_true_positives") != 0;
  cfg.weighted = int_field("weighted") != 0;
  cfg.max_weight = int_field("max_weight");
  cfg.epochs = int_field("epochs");
  cfg.seed = parse_number<std::uint64_t>(field("seed").first, field("seed").second);
  if (field("polarity").first != kPolarityLayout) {
    throw ParseError("unsupported polarity layout '" + field("polarity").first + "'", field("polarity").second);
  }

  if (expect.num_features && *expect.num_features != num_features) {
    throw ParseError("model has o=" + std::to_string(num_features) + " features, expected " +
                     std::to_string(*expect.num_features));
  }
  if (expect.n_clauses && *expect.n_clauses != cfg.n_clauses) {
    throw ParseError("model has n=" + std::to_string(cfg.n_clauses) + " clauses, expected " +
                     std::to_string(*expect.n_clauses));
  }

  std::optional<ClauseBank> bank;
  try {
    bank.emplace(cfg, num_features);
  } catch (const ContractViolation& e) {
    throw ParseError(std::string("invalid model configuration: ") + e.what());
  }

  std::istringstream weights(weights_line.substr(7));
  for (int j = 0; j < cfg.n_clauses; ++j) {
    int w = 0;
    if (!(weights >> w)) throw ParseError("expected " + std::to_string(cfg.n_clauses) + " weights", weights_line_no);
    if (w < 1 || w > cfg.max_weight) throw ParseError("clause weight out of range", weights_line_no);
    bank->set_weight(j, w);
  }
  std::string extra;
  if (weights >> extra) throw ParseError("more weights than clauses", weights_line_no);

  if (next_line() != "states") throw ParseError("expected 'states'", line_no);
  const int width = bank->num_literals();
  const int top = 2 * cfg.states_per_action;
  for (int j = 0; j < cfg.n_clauses; ++j) {
    const std::string& row = next_line();
    if (row.size() != static_cast<std::size_t>(2 * width)) {
      throw ParseError("state row has " + std::to_string(row.size() / 2) + " entries, expected " +
                       std::to_string(width),
                       line_no);
    }
    for (int k = 0; k < width; ++k) {
      const int s = hex_value(row[static_cast<std::size_t>(2 * k)], line_no) * 16 +
                    hex_value(row[static_cast<std::size_t>(2 * k + 1)], line_no);
      if (s < 1 || s > top) throw ParseError("state value outside 1.." + std::to_string(top), line_no);
      bank->set_state(j, k, s);
    }
  }
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line != "\r") throw ParseError("trailing data after state rows", line_no);
  }
  return std::move(*bank);
}

ClauseBank load_model(const std::filesystem::path& path, const ModelExpectations& expect) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open model file: " + path.string());
  try {
    return read_model(in, expect);
  } catch (const ParseError& e) {
    throw e.with_context(path.string());
  }
}

}  // namespace hextm
