#pragma once

#include <cctype>
#include <filesystem>
#include <fstream>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "pnpl/errors.hpp"
#include "pnpl/feature_model.hpp"
#include "pnpl/net.hpp"

namespace pnpl {

struct LoadedModel {
  Net150 net;
  FeatureModel fm;
  ValidationReport report;  // warnings only; errors throw at load
};

namespace detail {

inline bool is_identifier(std::string_view s) {
  if (s.empty()) return false;
  if (!std::isalpha(static_cast<unsigned char>(s[0])) && s[0] != '_') return false;
  for (char c : s)
    if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_') return false;
  return true;
}

// Whitespace-separated tokens; a double-quoted span is glued into the current
// token with the quotes removed; '#' outside quotes starts a comment.
inline std::vector<std::string> tokenize_line(const std::string& line, int line_no) {
  std::vector<std::string> tokens;
  std::string current;
  bool in_token = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (c == '#') break;
    if (c == '"') {
      const std::size_t close = line.find('"', i + 1);
      if (close == std::string::npos)
        throw ParseError("unterminated quote", line_no, static_cast<int>(i) + 1);
      current += line.substr(i + 1, close - i - 1);
      in_token = true;
      i = close;
      continue;
    }
    if (std::isspace(static_cast<unsigned char>(c))) {
      if (in_token) {
        tokens.push_back(std::move(current));
        current.clear();
        in_token = false;
      }
      continue;
    }
    current += c;
    in_token = true;
  }
  if (in_token) tokens.push_back(std::move(current));
  return tokens;
}

inline int parse_int(const std::string& text, const std::string& what, int line_no) {
  std::size_t start = text.size() > 1 && text[0] == '-' ? 1 : 0;
  if (start == text.size())
    throw ParseError("expected integer for " + what + ", got '" + text + "'", line_no, 1);
  for (std::size_t i = start; i < text.size(); ++i)
    if (!std::isdigit(static_cast<unsigned char>(text[i])))
      throw ParseError("expected integer for " + what + ", got '" + text + "'", line_no, 1);
  try {
    return std::stoi(text);
  } catch (const std::exception&) {
    throw ParseError("integer out of range for " + what + ": '" + text + "'", line_no, 1);
  }
}

struct LineAttrs {
  std::optional<int> tokens;
  std::optional<int> weight;
  std::optional<std::string> pc;
};

inline LineAttrs parse_attrs(const std::vector<std::string>& tokens, std::size_t first,
                             int line_no) {
  LineAttrs attrs;
  for (std::size_t i = first; i < tokens.size(); ++i) {
    const std::string& tok = tokens[i];
    const std::size_t eq = tok.find('=');
    if (eq == std::string::npos)
      throw ParseError("expected key=value attribute, got '" + tok + "'", line_no, 1);
    const std::string key = tok.substr(0, eq);
    const std::string value = tok.substr(eq + 1);
    if (key == "tokens") {
      attrs.tokens = parse_int(value, "tokens", line_no);
    } else if (key == "weight") {
      attrs.weight = parse_int(value, "weight", line_no);
    } else if (key == "pc") {
      attrs.pc = value;
    } else {
      throw ParseError("unknown attribute '" + key + "'", line_no, 1);
    }
  }
  return attrs;
}

inline Formula parse_pc(const std::string& text, const std::set<std::string>& features,
                        int line_no) {
  try {
    return parse_formula(text, features);
  } catch (const UndeclaredFeatureError& e) {
    throw UndeclaredFeatureError(e.feature(), line_no, e.column());
  } catch (const ParseError& e) {
    throw ParseError(e.message(), line_no, e.column());
  }
}

}  // namespace detail

// Parses the line-oriented model format:
//   feature <name> [abstract]
//   root <name>
//   child <parent> mandatory|optional <child>
//   group <parent> or|alt <child> <child>...
//   constraint <formula>
//   requires <a> <b>
//   excludes <a> <b>
//   place <name> tokens=<n> [pc="<formula>"]
//   trans <name> [pc="<formula>"]
//   arc <from> -> <to> [weight=<n>] [pc="<formula>"]
//   # comment
// Element order in the file is the canonical declaration order. Validation
// errors throw ModelError; the returned report keeps any warnings.
inline LoadedModel parse_model_unvalidated(
    const std::string& text,
    std::size_t enumeration_limit = FeatureModel::kDefaultEnumerationLimit) {
  struct RawLine {
    int no;
    std::vector<std::string> tokens;
    std::string rest;  // after the directive keyword, comment stripped
  };
  std::vector<RawLine> lines;
  {
    std::istringstream in(text);
    std::string line;
    int no = 0;
    while (std::getline(in, line)) {
      ++no;
      auto tokens = detail::tokenize_line(line, no);
      if (tokens.empty()) continue;
      std::string rest;
      const std::size_t hash = line.find('#');
      const std::string uncommented = hash == std::string::npos ? line : line.substr(0, hash);
      const std::size_t kw = uncommented.find(tokens[0]);
      if (kw != std::string::npos) rest = uncommented.substr(kw + tokens[0].size());
      while (!rest.empty() && std::isspace(static_cast<unsigned char>(rest.front())))
        rest.erase(rest.begin());
      while (!rest.empty() && std::isspace(static_cast<unsigned char>(rest.back()))) rest.pop_back();
      lines.push_back({no, std::move(tokens), std::move(rest)});
    }
  }

  const auto expect_identifier = [](const std::string& name, int line_no) {
    if (!detail::is_identifier(name) || name == "true" || name == "false")
      throw ParseError("invalid identifier '" + name + "'", line_no, 1);
  };
  const auto arity = [](const RawLine& l, std::size_t n) {
    if (l.tokens.size() != n)
      throw ParseError("directive '" + l.tokens[0] + "' expects " + std::to_string(n - 1) +
                           " argument(s)",
                       l.no, 1);
  };

  // Pass 1: declared features, so presence conditions and constraints can be
  // parsed against them in pass 2.
  std::set<std::string> features;
  for (const RawLine& l : lines) {
    if (l.tokens[0] != "feature") continue;
    if (l.tokens.size() < 2 || l.tokens.size() > 3 ||
        (l.tokens.size() == 3 && l.tokens[2] != "abstract"))
      throw ParseError("usage: feature <name> [abstract]", l.no, 1);
    expect_identifier(l.tokens[1], l.no);
    features.insert(l.tokens[1]);
  }

  FeatureModelBuilder fm_builder;
  NetBuilder net_builder;
  bool root_seen = false;

  for (const RawLine& l : lines) {
    const std::string& directive = l.tokens[0];
    if (directive == "feature") {
      fm_builder.feature(l.tokens[1], l.tokens.size() == 3);
    } else if (directive == "root") {
      arity(l, 2);
      if (root_seen) throw ParseError("root declared twice", l.no, 1);
      root_seen = true;
      fm_builder.root(l.tokens[1]);
    } else if (directive == "child") {
      arity(l, 4);
      if (l.tokens[2] == "mandatory")
        fm_builder.mandatory(l.tokens[1], l.tokens[3]);
      else if (l.tokens[2] == "optional")
        fm_builder.optional(l.tokens[1], l.tokens[3]);
      else
        throw ParseError("usage: child <parent> mandatory|optional <child>", l.no, 1);
    } else if (directive == "group") {
      if (l.tokens.size() < 4)
        throw ParseError("usage: group <parent> or|alt <child> <child>...", l.no, 1);
      GroupKind kind;
      if (l.tokens[2] == "or")
        kind = GroupKind::Or;
      else if (l.tokens[2] == "alt")
        kind = GroupKind::Alternative;
      else
        throw ParseError("usage: group <parent> or|alt <child> <child>...", l.no, 1);
      fm_builder.group(l.tokens[1],
                       kind,
                       std::vector<std::string>(l.tokens.begin() + 3, l.tokens.end()));
    } else if (directive == "constraint") {
      if (l.rest.empty()) throw ParseError("constraint needs a formula", l.no, 1);
      fm_builder.constraint(detail::parse_pc(l.rest, features, l.no));
    } else if (directive == "requires") {
      arity(l, 3);
      fm_builder.constraint(detail::parse_pc(l.tokens[1] + " -> " + l.tokens[2], features, l.no));
    } else if (directive == "excludes") {
      arity(l, 3);
      fm_builder.constraint(
          detail::parse_pc("!(" + l.tokens[1] + " & " + l.tokens[2] + ")", features, l.no));
    } else if (directive == "place") {
      if (l.tokens.size() < 3) throw ParseError("usage: place <name> tokens=<n> [pc=\"...\"]", l.no, 1);
      expect_identifier(l.tokens[1], l.no);
      const auto attrs = detail::parse_attrs(l.tokens, 2, l.no);
      if (!attrs.tokens) throw ParseError("place needs tokens=<n>", l.no, 1);
      if (attrs.weight) throw ParseError("place does not take weight", l.no, 1);
      Formula pc = attrs.pc ? detail::parse_pc(*attrs.pc, features, l.no) : Formula::truth();
      net_builder.place(l.tokens[1], *attrs.tokens, std::move(pc));
    } else if (directive == "trans") {
      if (l.tokens.size() < 2) throw ParseError("usage: trans <name> [pc=\"...\"]", l.no, 1);
      expect_identifier(l.tokens[1], l.no);
      const auto attrs = detail::parse_attrs(l.tokens, 2, l.no);
      if (attrs.tokens || attrs.weight)
        throw ParseError("trans takes only pc=\"...\"", l.no, 1);
      Formula pc = attrs.pc ? detail::parse_pc(*attrs.pc, features, l.no) : Formula::truth();
      net_builder.transition(l.tokens[1], std::move(pc));
    } else if (directive == "arc") {
      if (l.tokens.size() < 4 || l.tokens[2] != "->")
        throw ParseError("usage: arc <from> -> <to> [weight=<n>] [pc=\"...\"]", l.no, 1);
      expect_identifier(l.tokens[1], l.no);
      expect_identifier(l.tokens[3], l.no);
      const auto attrs = detail::parse_attrs(l.tokens, 4, l.no);
      if (attrs.tokens) throw ParseError("arc does not take tokens", l.no, 1);
      Formula pc = attrs.pc ? detail::parse_pc(*attrs.pc, features, l.no) : Formula::truth();
      net_builder.arc(l.tokens[1], l.tokens[3], attrs.weight.value_or(1), std::move(pc));
    } else {
      throw ParseError("unknown directive '" + directive + "'", l.no, 1);
    }
  }

  LoadedModel model{net_builder.build(), fm_builder.build(enumeration_limit), {}};
  model.report = validate_net(model.net, model.fm);
  return model;
}

inline LoadedModel parse_model(const std::string& text,
                               std::size_t enumeration_limit = FeatureModel::kDefaultEnumerationLimit) {
  LoadedModel model = parse_model_unvalidated(text, enumeration_limit);
  if (!model.report.ok()) throw ModelError("model validation failed:\n" + model.report.to_string());
  return model;
}

namespace detail {

inline std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open model file: " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

}  // namespace detail

inline LoadedModel load_model(const std::filesystem::path& path,
                              std::size_t enumeration_limit = FeatureModel::kDefaultEnumerationLimit) {
  return parse_model(detail::read_file(path), enumeration_limit);
}

inline LoadedModel load_model_unvalidated(
    const std::filesystem::path& path,
    std::size_t enumeration_limit = FeatureModel::kDefaultEnumerationLimit) {
  return parse_model_unvalidated(detail::read_file(path), enumeration_limit);
}

}  // namespace pnpl
