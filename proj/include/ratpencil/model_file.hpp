#pragma once

// Line-oriented text format for fibration models.
//
//   surface plane n=12                  | surface hirzebruch d=1 n=3
//   class F = 6 -2 -2 ...               coordinates in basis order
//   sections: O
//   fibre F0:
//     1 T11 self=-2 genus=0             multiplicity, class name, optional labels
//   effective: O T0 T1
//
// '#' starts a comment. The fibre class is the class named F.

#include <istream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "ratpencil/catalog.hpp"
#include "ratpencil/lattice.hpp"

namespace ratpencil {

class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

struct ModelFileComponent {
  Int multiplicity = 1;
  std::string name;
  std::optional<Int> self_int;
  std::optional<Int> genus;
  friend bool operator==(const ModelFileComponent&, const ModelFileComponent&) = default;
};

struct ModelFileFibre {
  std::string name;
  std::vector<ModelFileComponent> components;
  friend bool operator==(const ModelFileFibre&, const ModelFileFibre&) = default;
};

struct ModelFile {
  Ambient ambient = Ambient::plane;
  Int d = 0;
  std::size_t n = 0;
  std::vector<std::pair<std::string, std::vector<Int>>> classes;
  std::vector<std::string> sections;
  std::vector<ModelFileFibre> fibres;
  std::vector<std::string> effective;

  friend bool operator==(const ModelFile&, const ModelFile&) = default;

  std::size_t rank() const { return n + (ambient == Ambient::plane ? 1 : 2); }
  const std::vector<Int>* find_class(const std::string& name) const {
    for (const auto& [k, v] : classes)
      if (k == name) return &v;
    return nullptr;
  }
};

namespace detail {

inline std::string strip_comment(const std::string& line) {
  const auto p = line.find('#');
  return p == std::string::npos ? line : line.substr(0, p);
}

inline std::vector<std::string> words(const std::string& s) {
  std::istringstream is(s);
  std::vector<std::string> out;
  std::string w;
  while (is >> w) out.push_back(w);
  return out;
}

inline Int parse_int(const std::string& s, std::size_t line) {
  try {
    std::size_t used = 0;
    const long long v = std::stoll(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return static_cast<Int>(v);
  } catch (const std::exception&) {
    throw ParseError(line, "expected an integer, got '" + s + "'");
  }
}

inline bool valid_name(const std::string& s) {
  if (s.empty()) return false;
  for (char c : s)
    if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '.' || c == '\'' || c == '-')) return false;
  return true;
}

inline Int parse_keyed(const std::string& w, const std::string& key, std::size_t line) {
  if (w.rfind(key + "=", 0) != 0) throw ParseError(line, "expected " + key + "=<int>, got '" + w + "'");
  return parse_int(w.substr(key.size() + 1), line);
}

}  // namespace detail

inline ModelFile parse_model(std::istream& in) {
  ModelFile m;
  bool have_surface = false;
  ModelFileFibre* open_fibre = nullptr;
  std::string raw;
  std::size_t lineno = 0;
  while (std::getline(in, raw)) {
    ++lineno;
    const std::string line = detail::strip_comment(raw);
    auto w = detail::words(line);
    if (w.empty()) continue;
    const bool indented = !line.empty() && (line[0] == ' ' || line[0] == '\t');
    if (indented) {
      if (!open_fibre) throw ParseError(lineno, "indented line outside a fibre block");
      if (w.size() < 2) throw ParseError(lineno, "component line needs '<mult> <class>'");
      ModelFileComponent c;
      c.multiplicity = detail::parse_int(w[0], lineno);
      if (c.multiplicity < 1) throw ParseError(lineno, "multiplicity must be positive");
      c.name = w[1];
      for (std::size_t i = 2; i < w.size(); ++i) {
        if (w[i].rfind("self=", 0) == 0)
          c.self_int = detail::parse_keyed(w[i], "self", lineno);
        else if (w[i].rfind("genus=", 0) == 0)
          c.genus = detail::parse_keyed(w[i], "genus", lineno);
        else
          throw ParseError(lineno, "unknown component annotation '" + w[i] + "'");
      }
      open_fibre->components.push_back(std::move(c));
      continue;
    }
    open_fibre = nullptr;
    if (w[0] == "surface") {
      if (have_surface) throw ParseError(lineno, "duplicate surface header");
      if (w.size() == 3 && w[1] == "plane") {
        m.ambient = Ambient::plane;
        const Int n = detail::parse_keyed(w[2], "n", lineno);
        if (n < 0) throw ParseError(lineno, "n must be nonnegative");
        m.n = static_cast<std::size_t>(n);
      } else if (w.size() == 4 && w[1] == "hirzebruch") {
        m.ambient = Ambient::hirzebruch;
        m.d = detail::parse_keyed(w[2], "d", lineno);
        const Int n = detail::parse_keyed(w[3], "n", lineno);
        if (m.d < 0 || n < 0) throw ParseError(lineno, "d and n must be nonnegative");
        m.n = static_cast<std::size_t>(n);
      } else {
        throw ParseError(lineno, "expected 'surface plane n=<k>' or 'surface hirzebruch d=<d> n=<k>'");
      }
      have_surface = true;
    } else if (w[0] == "class") {
      if (!have_surface) throw ParseError(lineno, "class before surface header");
      if (w.size() < 3 || w[2] != "=") throw ParseError(lineno, "expected 'class <name> = <ints>'");
      if (!detail::valid_name(w[1])) throw ParseError(lineno, "bad class name '" + w[1] + "'");
      if (m.find_class(w[1])) throw ParseError(lineno, "duplicate class '" + w[1] + "'");
      std::vector<Int> coords;
      for (std::size_t i = 3; i < w.size(); ++i) coords.push_back(detail::parse_int(w[i], lineno));
      if (coords.size() != m.rank())
        throw ParseError(lineno, "class '" + w[1] + "' has " + std::to_string(coords.size()) +
                                     " coordinates, rank is " + std::to_string(m.rank()));
      m.classes.emplace_back(w[1], std::move(coords));
    } else if (w[0] == "sections:") {
      m.sections.insert(m.sections.end(), w.begin() + 1, w.end());
    } else if (w[0] == "effective:") {
      m.effective.insert(m.effective.end(), w.begin() + 1, w.end());
    } else if (w[0] == "fibre") {
      if (w.size() != 2 || w[1].size() < 2 || w[1].back() != ':') throw ParseError(lineno, "expected 'fibre <name>:'");
      m.fibres.push_back({w[1].substr(0, w[1].size() - 1), {}});
      open_fibre = &m.fibres.back();
    } else {
      throw ParseError(lineno, "unknown directive '" + w[0] + "'");
    }
  }
  if (!have_surface) throw ParseError(lineno, "missing surface header");
  auto known = [&](const std::string& name) { return m.find_class(name) != nullptr; };
  for (const auto& s : m.sections)
    if (!known(s)) throw ParseError(lineno, "section '" + s + "' is not a declared class");
  for (const auto& s : m.effective)
    if (!known(s)) throw ParseError(lineno, "effective curve '" + s + "' is not a declared class");
  for (const auto& f : m.fibres)
    for (const auto& c : f.components)
      if (!known(c.name)) throw ParseError(lineno, "fibre component '" + c.name + "' is not a declared class");
  return m;
}

inline ModelFile parse_model(const std::string& text) {
  std::istringstream is(text);
  return parse_model(is);
}

inline std::string serialize_model(const ModelFile& m) {
  std::ostringstream os;
  if (m.ambient == Ambient::plane)
    os << "surface plane n=" << m.n << '\n';
  else
    os << "surface hirzebruch d=" << m.d << " n=" << m.n << '\n';
  for (const auto& [name, coords] : m.classes) {
    os << "class " << name << " =";
    for (Int c : coords) os << ' ' << c;
    os << '\n';
  }
  if (!m.sections.empty()) {
    os << "sections:";
    for (const auto& s : m.sections) os << ' ' << s;
    os << '\n';
  }
  for (const auto& f : m.fibres) {
    os << "fibre " << f.name << ":\n";
    for (const auto& c : f.components) {
      os << "  " << c.multiplicity << ' ' << c.name;
      if (c.self_int) os << " self=" << *c.self_int;
      if (c.genus) os << " genus=" << *c.genus;
      os << '\n';
    }
  }
  if (!m.effective.empty()) {
    os << "effective:";
    for (const auto& s : m.effective) os << ' ' << s;
    os << '\n';
  }
  return os.str();
}

/// A model file turned into library objects.
struct LoadedModel {
  FibrationModel fibration;
  std::vector<NamedClass> curves;  // the effective list
};

/// With check=false the fibre class is not validated, so a verifier can
/// report the broken identity itself.
inline LoadedModel load_model(const ModelFile& mf, bool check = true) {
  const SurfaceModel s = mf.ambient == Ambient::plane ? SurfaceModel::plane(mf.n) : SurfaceModel::hirzebruch(mf.d, mf.n);
  auto cls = [&](const std::string& name) { return s.make(*mf.find_class(name)); };
  if (!mf.find_class("F")) throw ParseError(0, "model has no class named F");
  std::vector<NamedClass> named;
  for (const auto& [name, coords] : mf.classes)
    if (name != "F") named.push_back({name, s.make(coords)});
  std::vector<NamedClass> sections;
  for (const auto& n : mf.sections) sections.push_back({n, cls(n)});
  std::vector<FibreDecomposition> fibres;
  for (const auto& f : mf.fibres) {
    FibreDecomposition dec{f.name, {}};
    for (const auto& c : f.components) dec.components.push_back({c.name, cls(c.name), c.multiplicity, c.self_int, c.genus});
    fibres.push_back(std::move(dec));
  }
  std::vector<NamedClass> curves;
  for (const auto& n : mf.effective) curves.push_back({n, cls(n)});
  if (!check)
    return {FibrationModel::unchecked(s, cls("F"), std::move(sections), std::move(fibres), std::move(named)),
            std::move(curves)};
  return {FibrationModel::checked(s, cls("F"), std::move(sections), std::move(fibres), std::move(named)),
          std::move(curves)};
}

/// Model file for a catalog entry. Named classes are written in catalog order,
/// with F first.
inline ModelFile to_model_file(const CatalogEntry& e) {
  const FibrationModel& fib = e.fibration;
  const SurfaceModel& s = fib.surface();
  ModelFile m;
  m.ambient = s.ambient();
  m.d = s.hirzebruch_degree();
  m.n = s.exceptional_count();
  m.classes.emplace_back("F", fib.fibre_class().coords());
  auto add = [&](const NamedClass& c) {
    if (!m.find_class(c.name)) m.classes.emplace_back(c.name, c.cls.coords());
  };
  for (const auto& c : fib.sections()) add(c);
  for (const auto& c : fib.named_classes()) add(c);
  for (const auto& c : e.curves) add(c);
  for (const auto& c : fib.sections()) m.sections.push_back(c.name);
  for (const auto& f : fib.fibres()) {
    ModelFileFibre mf{f.name, {}};
    for (const auto& c : f.components) mf.components.push_back({c.multiplicity, c.name, c.self_int, c.genus});
    m.fibres.push_back(std::move(mf));
  }
  for (const auto& c : e.curves) m.effective.push_back(c.name);
  return m;
}

}  // namespace ratpencil
