#include "amalgam/catalog.hpp"

#include <cctype>
#include <fstream>
#include <sstream>

#include "amalgam/errors.hpp"

namespace amalgam {

namespace {

// Parses "Family(n)"; returns false if the shape does not match.
bool split_name(const std::string& name, std::string& family, unsigned long& n) {
  auto open = name.find('(');
  if (open == std::string::npos || name.back() != ')') return false;
  family = name.substr(0, open);
  std::string num = name.substr(open + 1, name.size() - open - 2);
  if (num.empty()) return false;
  n = 0;
  for (char c : num) {
    if (!isdigit(static_cast<unsigned char>(c))) return false;
    n = n * 10 + static_cast<unsigned long>(c - '0');
    if (n > 4096) return false;
  }
  return true;
}

Perm rotation(std::size_t n) {
  std::vector<Point> img(n);
  for (std::size_t i = 0; i < n; ++i) img[i] = static_cast<Point>((i + 1) % n);
  return Perm(std::move(img));
}

}  // namespace

bool is_catalog_name(const std::string& name) {
  if (name == "Klein4") return true;
  std::string family;
  unsigned long n = 0;
  if (!split_name(name, family, n)) return false;
  return family == "Sym" || family == "Alt" || family == "Cyclic" ||
         family == "Dihedral";
}

PermGroup catalog_group(const std::string& name) {
  if (name == "Klein4") {
    return PermGroup(4, {parse_cycles("(0 1)(2 3)", 4), parse_cycles("(0 2)(1 3)", 4)});
  }
  std::string family;
  unsigned long n = 0;
  if (!split_name(name, family, n) || !is_catalog_name(name))
    throw parse_error("unknown group name '" + name +
                          "'; expected Sym(n), Alt(n), Cyclic(n), Dihedral(n), "
                          "Klein4, or @file",
                      1, 1);
  if (n == 0) throw parse_error("group degree must be positive", 1, 1);
  std::size_t deg = n;
  if (family == "Sym") {
    if (deg == 1) return PermGroup::trivial(1);
    std::vector<Perm> gens{parse_cycles("(0 1)", deg)};
    if (deg > 2) gens.push_back(rotation(deg));
    return PermGroup(deg, std::move(gens));
  }
  if (family == "Alt") {
    if (deg <= 2) return PermGroup::trivial(deg);
    std::vector<Perm> gens{parse_cycles("(0 1 2)", deg)};
    if (deg > 3) {
      if (deg % 2 == 1) {
        gens.push_back(rotation(deg));
      } else {
        // (1 2 ... n-1), an (n-1)-cycle fixing 0
        std::vector<Point> img(deg);
        img[0] = 0;
        for (std::size_t i = 1; i < deg; ++i)
          img[i] = static_cast<Point>(i == deg - 1 ? 1 : i + 1);
        gens.push_back(Perm(std::move(img)));
      }
    }
    return PermGroup(deg, std::move(gens));
  }
  if (family == "Cyclic") {
    if (deg == 1) return PermGroup::trivial(1);
    return PermGroup(deg, {rotation(deg)});
  }
  // Dihedral
  if (deg < 3)
    throw parse_error("Dihedral(n) requires n >= 3", 1, 1);
  std::vector<Point> refl(deg);
  for (std::size_t i = 0; i < deg; ++i)
    refl[i] = static_cast<Point>((deg - i) % deg);
  return PermGroup(deg, {rotation(deg), Perm(std::move(refl))});
}

PermGroup parse_group_text(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  std::size_t lineno = 0;
  std::size_t degree = 0;
  bool have_degree = false;
  std::vector<Perm> gens;
  while (std::getline(in, line)) {
    ++lineno;
    std::size_t i = 0;
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t')) ++i;
    if (i == line.size() || line[i] == '#') continue;
    if (!have_degree) {
      std::istringstream ls(line);
      std::string kw;
      long n = -1;
      ls >> kw >> n;
      std::string rest;
      if (kw != "degree" || n < 1 || n > 4096 || (ls >> rest))
        throw parse_error("expected header 'degree n'", lineno, i + 1);
      degree = static_cast<std::size_t>(n);
      have_degree = true;
      continue;
    }
    gens.push_back(parse_cycles(line, degree, lineno));
  }
  if (!have_degree)
    throw parse_error("expected header 'degree n'", lineno == 0 ? 1 : lineno, 1);
  return PermGroup(degree, std::move(gens));
}

PermGroup resolve_group(const std::string& arg) {
  if (!arg.empty() && arg[0] == '@') {
    std::string path = arg.substr(1);
    std::ifstream in(path);
    if (!in) throw parse_error("cannot open group file '" + path + "'", 1, 1);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_group_text(ss.str());
  }
  return catalog_group(arg);
}

std::vector<std::pair<std::string, PermGroup>> catalog_transitive_upto(
    std::size_t max_degree, std::uint64_t max_order) {
  std::vector<std::pair<std::string, PermGroup>> out;
  auto consider = [&](const std::string& name) {
    PermGroup g = catalog_group(name);
    if (g.degree() <= max_degree && g.order() <= max_order && g.is_transitive())
      out.emplace_back(name, std::move(g));
  };
  for (std::size_t n = 1; n <= max_degree; ++n) consider("Sym(" + std::to_string(n) + ")");
  for (std::size_t n = 3; n <= max_degree; ++n) consider("Alt(" + std::to_string(n) + ")");
  for (std::size_t n = 2; n <= max_degree; ++n) consider("Cyclic(" + std::to_string(n) + ")");
  for (std::size_t n = 3; n <= max_degree; ++n) consider("Dihedral(" + std::to_string(n) + ")");
  if (max_degree >= 4) consider("Klein4");
  return out;
}

}  // namespace amalgam
