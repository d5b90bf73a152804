#include "qsph/cli_support.hpp"

#include <cctype>
#include <cmath>
#include <fstream>
#include <sstream>
#include <unordered_map>
#include <vector>

namespace qsph {

namespace {

std::string trim(const std::string& s) {
  std::size_t a = 0;
  std::size_t b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return s.substr(a, b - a);
}

std::string strip_comment(const std::string& line) {
  for (std::size_t i = 0; i < line.size(); ++i) {
    if (line[i] == '#' || line[i] == ';') return line.substr(0, i);
  }
  return line;
}

}  // namespace

Config Config::parse_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_text(buf.str());
}

Config Config::parse_text(const std::string& text) {
  Config cfg;
  std::istringstream in(text);
  std::string line;
  std::string section;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    line = trim(strip_comment(line));
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') {
        throw ConfigError("line " + std::to_string(lineno) + ": unterminated section header");
      }
      section = trim(line.substr(1, line.size() - 2));
      if (section.empty()) {
        throw ConfigError("line " + std::to_string(lineno) + ": empty section name");
      }
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("line " + std::to_string(lineno) + ": expected key = value");
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty()) {
      throw ConfigError("line " + std::to_string(lineno) + ": empty key");
    }
    cfg.values_[section.empty() ? key : section + "." + key] = value;
  }
  return cfg;
}

void Config::set_override(const std::string& spec) {
  const auto eq = spec.find('=');
  if (eq == std::string::npos || eq == 0) {
    throw ConfigError("override must look like section.key=value: " + spec);
  }
  values_[trim(spec.substr(0, eq))] = trim(spec.substr(eq + 1));
}

std::string Config::get_string(const std::string& key, const std::string& fallback) const {
  const auto it = values_.find(key);
  return it == values_.end() ? fallback : it->second;
}

int Config::get_int(const std::string& key, int fallback) const {
  const auto it = values_.find(key);
  if (it == values_.end()) return fallback;
  try {
    std::size_t used = 0;
    const int v = std::stoi(it->second, &used);
    if (used != it->second.size()) throw std::invalid_argument("trailing");
    return v;
  } catch (const std::exception&) {
    throw ConfigError("key " + key + ": not an integer: " + it->second);
  }
}

double Config::get_double(const std::string& key, double fallback) const {
  const auto it = values_.find(key);
  if (it == values_.end()) return fallback;
  try {
    std::size_t used = 0;
    const double v = std::stod(it->second, &used);
    if (used != it->second.size()) throw std::invalid_argument("trailing");
    return v;
  } catch (const std::exception&) {
    throw ConfigError("key " + key + ": not a number: " + it->second);
  }
}

ExperimentConfig ExperimentConfig::from_config(const Config& cfg) {
  ExperimentConfig ec;
  ec.ell = cfg.get_int("experiment.ell", ec.ell);
  ec.q = cfg.get_double("experiment.q", ec.q);
  ec.n_max = cfg.get_int("experiment.n_max", ec.n_max);
  ec.m_max = cfg.get_int("experiment.m_max", ec.m_max);
  ec.interior_margin = cfg.get_int("experiment.interior_margin", ec.interior_margin);
  ec.dirac = cfg.get_string("dirac.spec", ec.dirac);
  ec.norm_tolerance = cfg.get_double("thresholds.norm_tolerance", ec.norm_tolerance);
  ec.trend_threshold = cfg.get_double("thresholds.trend_threshold", ec.trend_threshold);
  ec.output = cfg.get_string("output.report", ec.output);
  if (ec.ell < 1) throw ConfigError("experiment.ell must be >= 1");
  if (!(ec.q > 0.0 && ec.q < 1.0)) throw ConfigError("experiment.q must lie strictly in (0,1)");
  if (ec.n_max < 1 || ec.m_max < 1) throw ConfigError("window bounds must be >= 1");
  if (ec.interior_margin < 0) throw ConfigError("experiment.interior_margin must be >= 0");
  if (ec.norm_tolerance <= 0.0 || ec.trend_threshold <= 0.0) {
    throw ConfigError("thresholds must be positive");
  }
  return ec;
}

Truncation ExperimentConfig::truncation() const {
  return Truncation(ell, n_max, m_max, interior_margin);
}

EquivariantDirac ExperimentConfig::make_dirac() const {
  if (dirac == "torus" || dirac == "neg_torus" || dirac == "abs_torus") {
    return dirac_builtin(dirac, ell);
  }
  return dirac_from_table(dirac, ell);
}

// ---------------------------------------------------------------------------
// Expression evaluator

struct Expression::Node {
  enum class Kind { Constant, Coordinate, Degree, Unary, Binary, Call };
  Kind kind = Kind::Constant;
  double value = 0.0;           // Constant
  int coordinate = 0;           // Coordinate (1-based)
  char op = 0;                  // Unary ('-') / Binary
  std::string fn;               // Call
  std::vector<std::shared_ptr<const Node>> args;
};

namespace {

class ExprParser {
 public:
  explicit ExprParser(const std::string& text) : text_(text) {}

  std::shared_ptr<const Expression::Node> parse() {
    auto node = parse_sum();
    skip_ws();
    if (pos_ != text_.size()) fail("unexpected trailing input");
    return node;
  }

 private:
  using NodePtr = std::shared_ptr<const Expression::Node>;

  [[noreturn]] void fail(const std::string& why) const {
    throw ExpressionError("expression error at offset " + std::to_string(pos_) + ": " + why);
  }

  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool consume(char c) {
    skip_ws();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  NodePtr parse_sum() {
    NodePtr lhs = parse_product();
    for (;;) {
      if (consume('+')) {
        lhs = binary('+', lhs, parse_product());
      } else if (consume('-')) {
        lhs = binary('-', lhs, parse_product());
      } else {
        return lhs;
      }
    }
  }

  NodePtr parse_product() {
    NodePtr lhs = parse_unary();
    for (;;) {
      if (consume('*')) {
        lhs = binary('*', lhs, parse_unary());
      } else if (consume('/')) {
        lhs = binary('/', lhs, parse_unary());
      } else {
        return lhs;
      }
    }
  }

  NodePtr parse_unary() {
    if (consume('-')) {
      auto node = std::make_shared<Expression::Node>();
      node->kind = Expression::Node::Kind::Unary;
      node->op = '-';
      node->args.push_back(parse_unary());
      return node;
    }
    return parse_power();
  }

  // right-associative
  NodePtr parse_power() {
    NodePtr base = parse_atom();
    if (consume('^')) return binary('^', base, parse_unary());
    return base;
  }

  NodePtr parse_atom() {
    skip_ws();
    if (pos_ >= text_.size()) fail("unexpected end of expression");
    const char c = text_[pos_];
    if (c == '(') {
      ++pos_;
      NodePtr inner = parse_sum();
      if (!consume(')')) fail("missing ')'");
      return inner;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return parse_number();
    if (std::isalpha(static_cast<unsigned char>(c))) return parse_identifier();
    fail(std::string("unexpected character '") + c + "'");
  }

  NodePtr parse_number() {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(text_.substr(pos_), &used);
    } catch (const std::exception&) {
      fail("bad numeric literal");
    }
    pos_ += used;
    auto node = std::make_shared<Expression::Node>();
    node->kind = Expression::Node::Kind::Constant;
    node->value = v;
    return node;
  }

  NodePtr parse_identifier() {
    std::size_t start = pos_;
    while (pos_ < text_.size() &&
           (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_')) {
      ++pos_;
    }
    const std::string name = text_.substr(start, pos_ - start);
    if (name == "deg") {
      auto node = std::make_shared<Expression::Node>();
      node->kind = Expression::Node::Kind::Degree;
      return node;
    }
    if (name.size() > 1 && name[0] == 'g') {
      bool digits = true;
      for (std::size_t i = 1; i < name.size(); ++i) {
        digits = digits && std::isdigit(static_cast<unsigned char>(name[i]));
      }
      if (digits) {
        auto node = std::make_shared<Expression::Node>();
        node->kind = Expression::Node::Kind::Coordinate;
        node->coordinate = std::stoi(name.substr(1));
        if (node->coordinate < 1) fail("coordinate index must be positive");
        return node;
      }
    }
    if (name == "abs" || name == "min" || name == "max") {
      if (!consume('(')) fail(name + " needs an argument list");
      auto node = std::make_shared<Expression::Node>();
      node->kind = Expression::Node::Kind::Call;
      node->fn = name;
      node->args.push_back(parse_sum());
      while (consume(',')) node->args.push_back(parse_sum());
      if (!consume(')')) fail("missing ')'");
      const std::size_t want = name == "abs" ? 1 : 2;
      if (node->args.size() != want) fail(name + ": wrong argument count");
      return node;
    }
    fail("unknown identifier '" + name + "'");
  }

  NodePtr binary(char op, NodePtr lhs, NodePtr rhs) {
    auto node = std::make_shared<Expression::Node>();
    node->kind = Expression::Node::Kind::Binary;
    node->op = op;
    node->args = {std::move(lhs), std::move(rhs)};
    return node;
  }

  const std::string& text_;
  std::size_t pos_ = 0;
};

double eval_node(const Expression::Node& node, const LatticePoint& gamma) {
  using Kind = Expression::Node::Kind;
  switch (node.kind) {
    case Kind::Constant:
      return node.value;
    case Kind::Coordinate:
      if (node.coordinate > gamma.size()) {
        throw ExpressionError("coordinate g" + std::to_string(node.coordinate) +
                              " out of range for ell+1 = " + std::to_string(gamma.size()));
      }
      return gamma.coord(node.coordinate);
    case Kind::Degree:
      return weighted_degree(gamma);
    case Kind::Unary:
      return -eval_node(*node.args[0], gamma);
    case Kind::Binary: {
      const double a = eval_node(*node.args[0], gamma);
      const double b = eval_node(*node.args[1], gamma);
      switch (node.op) {
        case '+': return a + b;
        case '-': return a - b;
        case '*': return a * b;
        case '/': return a / b;
        case '^': return std::pow(a, b);
      }
      throw ExpressionError("bad operator");
    }
    case Kind::Call: {
      if (node.fn == "abs") return std::abs(eval_node(*node.args[0], gamma));
      const double a = eval_node(*node.args[0], gamma);
      const double b = eval_node(*node.args[1], gamma);
      return node.fn == "min" ? std::min(a, b) : std::max(a, b);
    }
  }
  throw ExpressionError("bad node");
}

}  // namespace

Expression Expression::parse(const std::string& text) {
  Expression e;
  e.root_ = ExprParser(text).parse();
  return e;
}

double Expression::evaluate(const LatticePoint& gamma) const {
  if (!root_) throw ExpressionError("empty expression");
  return eval_node(*root_, gamma);
}

EquivariantDirac dirac_from_table(const std::string& path, int ell) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open spectrum table: " + path);

  auto table = std::make_shared<std::unordered_map<LatticePoint, double, LatticePointHash>>();
  std::shared_ptr<Expression> fallback;

  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::string t = trim(line);
    if (t.empty()) continue;
    if (t.front() == '#') {
      const auto eq = t.find('=');
      if (t.find("fallback") != std::string::npos && eq != std::string::npos) {
        fallback = std::make_shared<Expression>(Expression::parse(t.substr(eq + 1)));
      }
      continue;
    }
    std::vector<std::string> fields;
    std::stringstream row(t);
    std::string field;
    while (std::getline(row, field, ',')) fields.push_back(trim(field));
    if (static_cast<int>(fields.size()) != ell + 2) {
      throw ConfigError(path + ":" + std::to_string(lineno) + ": expected " +
                        std::to_string(ell + 2) + " fields g1..g" + std::to_string(ell + 1) +
                        ",d");
    }
    std::vector<int> coords;
    coords.reserve(static_cast<std::size_t>(ell + 1));
    try {
      for (int i = 0; i <= ell; ++i) coords.push_back(std::stoi(fields[static_cast<std::size_t>(i)]));
      (*table)[LatticePoint(std::move(coords))] = std::stod(fields.back());
    } catch (const std::exception&) {
      throw ConfigError(path + ":" + std::to_string(lineno) + ": bad numeric field");
    }
  }

  EquivariantDirac D;
  D.name = "table:" + path;
  D.raw = [table, fallback, path](const LatticePoint& gamma) {
    const auto it = table->find(gamma);
    if (it != table->end()) return it->second;
    if (fallback) return fallback->evaluate(gamma);
    throw ConfigError("spectrum table " + path + " has no entry for a window point and no fallback");
  };
  return D;
}

EquivariantDirac dirac_builtin(const std::string& name, int ell) {
  if (name == "torus") return d_torus(ell);
  if (name == "neg_torus") return d_neg_torus(ell);
  if (name == "abs_torus") return d_abs_torus(ell);
  throw ConfigError("unknown builtin spectrum: " + name);
}

}  // namespace qsph
