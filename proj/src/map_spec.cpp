#include "itf/map_spec.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include "itf/errors.hpp"

namespace itf {

namespace {

std::string trim(std::string_view s) {
  std::size_t a = 0, b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return std::string(s.substr(a, b - a));
}

std::vector<std::string> split(std::string_view s, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  for (std::size_t i = 0; i <= s.size(); ++i) {
    if (i == s.size() || s[i] == sep) {
      out.push_back(trim(s.substr(start, i - start)));
      start = i + 1;
    }
  }
  return out;
}

std::vector<double> number_list(const std::string& text, const std::string& field) {
  std::vector<double> out;
  const auto parts = split(text, ',');
  for (std::size_t i = 0; i < parts.size(); ++i)
    out.push_back(parse_number(parts[i], field + "[" + std::to_string(i) + "]"));
  return out;
}

// "[a,b], [c,d]"
std::vector<Interval> interval_list(const std::string& text, const std::string& field) {
  std::vector<Interval> out;
  std::size_t pos = 0;
  while (true) {
    const auto open = text.find('[', pos);
    if (open == std::string::npos) break;
    const auto close = text.find(']', open);
    const std::string f = field + "[" + std::to_string(out.size()) + "]";
    if (close == std::string::npos) throw SchemaError(f, "missing ']'");
    const auto ends = split(std::string_view(text).substr(open + 1, close - open - 1), ',');
    if (ends.size() != 2) throw SchemaError(f, "expected [lo,hi]");
    out.push_back({parse_number(ends[0], f), parse_number(ends[1], f)});
    pos = close + 1;
  }
  if (out.empty()) throw SchemaError(field, "expected a list of [lo,hi]");
  return out;
}

std::vector<CriticalPoint> crit_list(const std::string& text) {
  std::vector<CriticalPoint> out;
  const auto items = split(text, ',');
  for (std::size_t i = 0; i < items.size(); ++i) {
    const std::string f = "crit[" + std::to_string(i) + "]";
    const auto parts = split(items[i], ':');
    if (parts.size() < 2 || parts.size() > 3) throw SchemaError(f, "expected point:order[:kind]");
    CriticalPoint c;
    c.c = parse_number(parts[0], f);
    c.order = parse_number(parts[1], f + ".order");
    if (parts.size() == 3) {
      if (parts[2] == "turning")
        c.kind = CritKind::turning;
      else if (parts[2] == "inflection")
        c.kind = CritKind::inflection;
      else if (parts[2] == "kink")
        c.kind = CritKind::kink;
      else
        throw SchemaError(f + ".kind", "unknown kind '" + parts[2] + "'");
    }
    out.push_back(c);
  }
  return out;
}

IntervalMap neutral_fixture() {
  // neutral fixed point at 0: x + 2x^2 on [0,1/2], 2x-1 on [1/2,1]
  return custom_map("neutral", {0.0, 0.5, 1.0},
                    {Expression::parse("x + 2*x^2"), Expression::parse("2*x - 1")}, {});
}

}  // namespace

double parse_number(std::string_view text, const std::string& field) {
  const std::string t = trim(text);
  if (t.empty()) throw SchemaError(field, "empty number");
  auto one = [&](const std::string& s) {
    std::size_t used = 0;
    double v = 0;
    try {
      v = std::stod(s, &used);
    } catch (const std::exception&) {
      throw SchemaError(field, "not a number: '" + t + "'");
    }
    if (used != s.size()) throw SchemaError(field, "not a number: '" + t + "'");
    return v;
  };
  const auto slash = t.find('/');
  if (slash == std::string::npos) return one(t);
  const double p = one(trim(t.substr(0, slash)));
  const double q = one(trim(t.substr(slash + 1)));
  if (q == 0) throw SchemaError(field, "zero denominator");
  return p / q;
}

IntervalMap parse_map_spec(std::string_view text) {
  std::map<std::string, std::string> kv;
  std::istringstream in{std::string(text)};
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    if (trim(line).empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw SchemaError("line " + std::to_string(lineno), "expected key = value");
    const std::string key = trim(line.substr(0, eq));
    const std::string val = trim(line.substr(eq + 1));
    if (key == "params") {
      for (const auto& p : split(val, ',')) {
        const auto e = p.find('=');
        if (e == std::string::npos) throw SchemaError("params", "expected name=value");
        kv[trim(p.substr(0, e))] = trim(p.substr(e + 1));
      }
      continue;
    }
    if (kv.count(key)) throw SchemaError(key, "duplicate field");
    kv[key] = val;
  }
  static const std::vector<std::string> known = {"kind",   "name",         "s",        "a",
                                                 "d",      "breakpoints",  "images",   "orientations",
                                                 "branches", "expr",       "crit",     "domain"};
  for (const auto& [k, v] : kv)
    if (std::find(known.begin(), known.end(), k) == known.end())
      throw SchemaError(k, "unknown field");
  if (!kv.count("kind")) throw SchemaError("kind", "missing");
  const std::string kind = kv["kind"];
  auto need = [&](const std::string& k) -> const std::string& {
    auto it = kv.find(k);
    if (it == kv.end()) throw SchemaError(k, "missing for kind " + kind);
    return it->second;
  };
  auto rename = [&](IntervalMap m) {
    if (!kv.count("name")) return m;
    return IntervalMap(kv["name"], m.kind(), m.domain(), m.branches(), m.crit());
  };

  if (kind == "tent") return rename(tent_map(parse_number(need("s"), "s")));
  if (kind == "quadratic") return rename(quadratic_map(parse_number(need("a"), "a")));
  if (kind == "chebyshev") {
    const double d = parse_number(need("d"), "d");
    if (d != std::floor(d)) throw SchemaError("d", "degree must be an integer");
    return rename(chebyshev_map(static_cast<int>(d)));
  }
  const std::string name = kv.count("name") ? kv["name"] : kind;
  if (kind == "plinear") {
    const auto bps = number_list(need("breakpoints"), "breakpoints");
    const auto ims = interval_list(need("images"), "images");
    std::vector<int> orient;
    if (kv.count("orientations")) {
      const auto parts = split(kv["orientations"], ',');
      for (std::size_t i = 0; i < parts.size(); ++i) {
        if (parts[i] == "+" || parts[i] == "+1")
          orient.push_back(1);
        else if (parts[i] == "-" || parts[i] == "-1")
          orient.push_back(-1);
        else
          throw SchemaError("orientations[" + std::to_string(i) + "]", "expected + or -");
      }
    }
    if (kv.count("crit")) throw SchemaError("crit", "plinear turning points are derived");
    return plinear_map(name, bps, ims, orient);
  }
  if (kind == "custom") {
    auto crit = kv.count("crit") ? crit_list(kv["crit"]) : std::vector<CriticalPoint>{};
    std::vector<double> bps;
    if (kv.count("breakpoints")) {
      bps = number_list(kv["breakpoints"], "breakpoints");
    } else {
      // domain split at the declared turning points
      Interval dom{0, 1};
      if (kv.count("domain")) dom = interval_list(kv["domain"], "domain").at(0);
      bps.push_back(dom.lo);
      std::vector<double> turns;
      for (const auto& c : crit)
        if (c.kind != CritKind::inflection) turns.push_back(c.c);
      std::sort(turns.begin(), turns.end());
      for (double c : turns) bps.push_back(c);
      bps.push_back(dom.hi);
    }
    std::vector<Expression> exprs;
    if (kv.count("branches") && kv.count("expr"))
      throw SchemaError("expr", "give either expr or branches");
    if (kv.count("branches")) {
      for (const auto& e : split(kv["branches"], ';')) exprs.push_back(Expression::parse(e));
    } else {
      exprs.push_back(Expression::parse(need("expr")));
    }
    return custom_map(name, bps, exprs, std::move(crit));
  }
  throw SchemaError("kind", "unknown kind '" + kind + "'");
}

std::vector<std::string> builtin_map_names() {
  return {"tent2",    "quad4",    "markov_golden", "markov_full", "cheb3",
          "absorbing", "period2", "neutral",       "misiurewicz"};
}

double misiurewicz_parameter() {
  // g(a) = f^3(1/2) - (1 - 1/a); changes sign once on [3.6, 3.7]
  auto g = [](double a) {
    double x = 0.5;
    for (int k = 0; k < 3; ++k) x = a * x * (1 - x);
    return x - (1.0 - 1.0 / a);
  };
  double lo = 3.6, hi = 3.7;
  const double glo = g(lo);
  for (int it = 0; it < 200; ++it) {
    const double m = 0.5 * (lo + hi);
    if (m <= lo || m >= hi) break;
    ((g(m) > 0) == (glo > 0) ? lo : hi) = m;
  }
  return 0.5 * (lo + hi);
}

IntervalMap load_map(std::string_view spec) {
  const std::string s(spec);
  if (s == "tent2") return tent_map(2.0);
  if (s == "quad4") return quadratic_map(4.0);
  if (s == "cheb3") return chebyshev_map(3);
  if (s == "markov_golden")
    return plinear_map("markov_golden", {0.0, 2.0 / 3.0, 1.0}, {{0, 1}, {0, 2.0 / 3.0}});
  if (s == "markov_full")
    return plinear_map("markov_full", {0.0, 1.0 / 3.0, 1.0}, {{0, 1}, {0, 1}});
  if (s == "absorbing")
    return plinear_map("absorbing", {0, 0.25, 0.5, 0.75, 1},
                       {{0, 0.5}, {0, 0.5}, {0, 1}, {0, 0.5}});
  if (s == "period2")
    return plinear_map("period2", {0, 0.25, 0.5, 0.75, 1},
                       {{0.5, 1}, {0.5, 1}, {0, 0.5}, {0, 0.5}});
  if (s == "neutral") return neutral_fixture();
  if (s == "misiurewicz") {
    auto m = quadratic_map(misiurewicz_parameter());
    return IntervalMap("misiurewicz", m.kind(), m.domain(), m.branches(), m.crit());
  }
  if (const auto colon = s.find(':'); colon != std::string::npos) {
    const std::string kind = s.substr(0, colon);
    const double p = parse_number(s.substr(colon + 1), kind);
    if (kind == "tent") return tent_map(p);
    if (kind == "quadratic") return quadratic_map(p);
    if (kind == "chebyshev") {
      if (p != std::floor(p)) throw SchemaError("d", "degree must be an integer");
      return chebyshev_map(static_cast<int>(p));
    }
  }
  std::ifstream file(s);
  if (!file) throw SchemaError("map", "unknown fixture or unreadable file '" + s + "'");
  std::stringstream buf;
  buf << file.rdbuf();
  return parse_map_spec(buf.str());
}

}  // namespace itf
