#include "pwlab/spec_io.hpp"

#include <charconv>
#include <fstream>
#include <map>
#include <sstream>

#include "pwlab/exact.hpp"

namespace pwlab {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split_ws(const std::string& s) {
  std::istringstream in(s);
  std::vector<std::string> out;
  std::string tok;
  while (in >> tok) out.push_back(tok);
  return out;
}

int parse_int(const std::string& s, const std::string& key) {
  int v = 0;
  const auto* end = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(s.data(), end, v);
  if (ec != std::errc() || ptr != end) throw ConfigError("key '" + key + "': bad integer '" + s + "'");
  return v;
}

bool parse_bool(const std::string& s, const std::string& key) {
  if (s == "true" || s == "1" || s == "yes") return true;
  if (s == "false" || s == "0" || s == "no") return false;
  throw ConfigError("key '" + key + "': bad boolean '" + s + "'");
}

// "(re,im) (re,im) ..." ; a bare real "c" is accepted as (c,0).
ComplexPoly parse_complex_list(const std::string& s, const std::string& key) {
  ComplexPoly out;
  std::string compact;
  for (char c : s)
    if (c != ' ' && c != '\t') compact.push_back(c);
  size_t i = 0;
  try {
    while (i < compact.size()) {
      if (compact[i] == '(') {
        const auto close = compact.find(')', i);
        if (close == std::string::npos) throw ConfigError("unbalanced parenthesis");
        const std::string body = compact.substr(i + 1, close - i - 1);
        const auto comma = body.find(',');
        if (comma == std::string::npos) throw ConfigError("expected (re,im)");
        out.emplace_back(parse_double(body.substr(0, comma)), parse_double(body.substr(comma + 1)));
        i = close + 1;
      } else {
        // bare real up to next '('
        auto next = compact.find('(', i);
        if (next == std::string::npos) next = compact.size();
        out.emplace_back(parse_double(compact.substr(i, next - i)), 0.0);
        i = next;
      }
    }
  } catch (const std::exception& e) {
    throw ConfigError("key '" + key + "': " + e.what());
  }
  return out;
}

std::vector<Monomial> parse_monomials(const std::string& s, const std::string& key) {
  std::vector<Monomial> out;
  for (const auto& tok : split_ws(s)) {
    const auto at = tok.find('@');
    const auto comma = tok.find(',', at == std::string::npos ? 0 : at);
    if (at == std::string::npos || comma == std::string::npos)
      throw ConfigError("key '" + key + "': monomial must look like c@i,j, got '" + tok + "'");
    Monomial m;
    try {
      m.coeff = parse_double(tok.substr(0, at));
    } catch (const std::exception& e) {
      throw ConfigError("key '" + key + "': " + e.what());
    }
    m.i = parse_int(tok.substr(at + 1, comma - at - 1), key);
    m.j = parse_int(tok.substr(comma + 1), key);
    if (m.i < 0 || m.j < 0) throw ConfigError("key '" + key + "': negative exponent");
    out.push_back(m);
  }
  return out;
}

std::string kind_name(ProfileKind k) {
  switch (k) {
    case ProfileKind::SingularScaleInvariant:
      return "singular";
    case ProfileKind::CahenWallachAnalog:
      return "cahen_wallach";
    case ProfileKind::Flat:
      return "flat";
  }
  return "?";
}

std::string format_complex_list(const ComplexPoly& p) {
  std::string s;
  for (size_t k = 0; k < p.size(); ++k) {
    if (k) s += ' ';
    s += "(" + format_double(p[k].real()) + "," + format_double(p[k].imag()) + ")";
  }
  return s;
}

std::string format_monomials(const std::vector<Monomial>& terms) {
  std::string s;
  for (size_t k = 0; k < terms.size(); ++k) {
    if (k) s += ' ';
    s += format_double(terms[k].coeff) + "@" + std::to_string(terms[k].i) + "," +
         std::to_string(terms[k].j);
  }
  return s;
}

}  // namespace

std::string format_double(double x) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, x);
  if (ec != std::errc()) throw std::runtime_error("double formatting failed");
  return std::string(buf, ptr);
}

double parse_double(const std::string& text) {
  const std::string s = trim(text);
  if (s.find('/') != std::string::npos) return parse_rational(s).get_d();
  std::string t = s;
  if (!t.empty() && t[0] == '+') t.erase(t.begin());
  double v = 0.0;
  const auto* end = t.data() + t.size();
  auto [ptr, ec] = std::from_chars(t.data(), end, v);
  if (ec != std::errc() || ptr != end || t.empty())
    throw std::invalid_argument("bad number '" + text + "'");
  return v;
}

MetricSpec parse_spec(const std::string& text) {
  std::map<std::string, std::string> kv;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("line " + std::to_string(lineno) + ": expected key = value");
    const std::string key = trim(line.substr(0, eq));
    if (kv.count(key)) throw ConfigError("line " + std::to_string(lineno) + ": duplicate key '" + key + "'");
    kv[key] = trim(line.substr(eq + 1));
  }

  MetricSpec spec;
  if (!kv.count("n")) throw ConfigError("missing key 'n'");
  spec.n = parse_int(kv["n"], "n");
  if (spec.n < 0 || spec.n > 16) throw ConfigError("n out of range [0, 16]");
  kv.erase("n");

  spec.epsilons.assign(size_t(spec.n), 1);
  if (kv.count("epsilons")) {
    const auto toks = split_ws(kv["epsilons"]);
    spec.epsilons.clear();
    for (const auto& t : toks) spec.epsilons.push_back(parse_int(t, "epsilons"));
    kv.erase("epsilons");
  }

  if (kv.count("profile.kind")) {
    const std::string k = kv["profile.kind"];
    if (k == "singular")
      spec.profile.kind = ProfileKind::SingularScaleInvariant;
    else if (k == "cahen_wallach")
      spec.profile.kind = ProfileKind::CahenWallachAnalog;
    else if (k == "flat")
      spec.profile.kind = ProfileKind::Flat;
    else
      throw ConfigError("profile.kind must be singular, cahen_wallach or flat, got '" + k + "'");
    kv.erase("profile.kind");
  }
  if (kv.count("profile.b0")) {
    try {
      spec.profile.b0 = parse_double(kv["profile.b0"]);
    } catch (const std::exception& e) {
      throw ConfigError(std::string("key 'profile.b0': ") + e.what());
    }
    kv.erase("profile.b0");
  }
  if (kv.count("profile.harmonic")) {
    spec.profile.harmonic = parse_complex_list(kv["profile.harmonic"], "profile.harmonic");
    kv.erase("profile.harmonic");
  }
  if (kv.count("profile.coupling_compensation")) {
    spec.profile.coupling_compensation =
        parse_bool(kv["profile.coupling_compensation"], "profile.coupling_compensation");
    kv.erase("profile.coupling_compensation");
  }

  spec.couplings.assign(size_t(spec.n), Coupling{});
  for (int a = 1; a <= spec.n; ++a) {
    const std::string base = "coupling." + std::to_string(a);
    Coupling& c = spec.couplings[size_t(a - 1)];
    if (kv.count(base)) {
      c.holomorphic = parse_complex_list(kv[base], base);
      kv.erase(base);
    }
    for (const char* part : {".r", ".s"}) {
      const std::string key = base + part;
      if (!kv.count(key)) continue;
      c.raw = true;
      (part[1] == 'r' ? c.r_terms : c.s_terms) = parse_monomials(kv[key], key);
      kv.erase(key);
    }
  }

  if (!kv.empty()) throw ConfigError("unknown key '" + kv.begin()->first + "'");
  try {
    spec.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  return spec;
}

MetricSpec load_spec(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw ConfigError("cannot open spec file '" + path + "'");
  std::stringstream ss;
  ss << f.rdbuf();
  return parse_spec(ss.str());
}

std::string serialize_spec(const MetricSpec& spec) {
  std::ostringstream out;
  out << "n = " << spec.n << "\n";
  out << "epsilons =";
  for (int e : spec.epsilons) out << ' ' << e;
  out << "\n";
  out << "profile.kind = " << kind_name(spec.profile.kind) << "\n";
  out << "profile.b0 = " << format_double(spec.profile.b0) << "\n";
  if (!spec.profile.harmonic.empty())
    out << "profile.harmonic = " << format_complex_list(spec.profile.harmonic) << "\n";
  if (spec.profile.coupling_compensation) out << "profile.coupling_compensation = true\n";
  for (int a = 0; a < spec.n; ++a) {
    const Coupling& c = spec.couplings[size_t(a)];
    const std::string base = "coupling." + std::to_string(a + 1);
    if (!c.holomorphic.empty()) out << base << " = " << format_complex_list(c.holomorphic) << "\n";
    if (c.raw) {
      out << base << ".r = " << format_monomials(c.r_terms) << "\n";
      out << base << ".s = " << format_monomials(c.s_terms) << "\n";
    }
  }
  return out.str();
}

}  // namespace pwlab
