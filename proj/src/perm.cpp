#include "amalgam/perm.hpp"

#include <algorithm>
#include <cctype>
#include <stdexcept>

#include "amalgam/errors.hpp"

namespace amalgam {

Perm::Perm(std::size_t degree) : img_(degree) {
  for (std::size_t i = 0; i < degree; ++i) img_[i] = static_cast<Point>(i);
}

Perm::Perm(std::vector<Point> images) : img_(std::move(images)) {
  std::vector<bool> seen(img_.size(), false);
  for (Point p : img_) {
    if (p >= img_.size() || seen[p])
      throw std::invalid_argument("image sequence is not a permutation");
    seen[p] = true;
  }
}

bool Perm::is_identity() const {
  for (std::size_t i = 0; i < img_.size(); ++i)
    if (img_[i] != i) return false;
  return true;
}

Perm Perm::inverse() const {
  std::vector<Point> inv(img_.size());
  for (std::size_t i = 0; i < img_.size(); ++i) inv[img_[i]] = static_cast<Point>(i);
  Perm r;
  r.img_ = std::move(inv);  // already a bijection
  return r;
}

std::string Perm::cycles() const {
  std::string out;
  std::vector<bool> done(img_.size(), false);
  for (std::size_t start = 0; start < img_.size(); ++start) {
    if (done[start] || img_[start] == start) continue;
    out += '(';
    std::size_t p = start;
    bool first = true;
    while (!done[p]) {
      done[p] = true;
      if (!first) out += ' ';
      out += std::to_string(p);
      first = false;
      p = img_[p];
    }
    out += ')';
  }
  if (out.empty()) out = "()";
  return out;
}

void Perm::encode(std::string& out) const {
  for (Point p : img_) {
    out += static_cast<char>(p & 0xff);
    out += static_cast<char>((p >> 8) & 0xff);
  }
}

std::string Perm::encoded() const {
  std::string s;
  s.reserve(2 * img_.size());
  encode(s);
  return s;
}

Perm compose(const Perm& p, const Perm& q) {
  if (p.degree() != q.degree())
    throw std::invalid_argument("compose: degree mismatch");
  std::vector<Point> img(p.degree());
  for (std::size_t i = 0; i < img.size(); ++i) img[i] = q(p(static_cast<Point>(i)));
  return Perm(std::move(img));
}

Perm conjugate(const Perm& x, const Perm& g) {
  return compose(compose(g.inverse(), x), g);
}

Perm parse_cycles(const std::string& text, std::size_t degree, std::size_t line) {
  std::vector<Point> img(degree);
  for (std::size_t i = 0; i < degree; ++i) img[i] = static_cast<Point>(i);
  std::vector<bool> used(degree, false);

  std::size_t i = 0;
  auto col = [&] { return i + 1; };
  auto skip_ws = [&] {
    while (i < text.size() && (text[i] == ' ' || text[i] == '\t')) ++i;
  };

  skip_ws();
  if (i == text.size()) throw parse_error("expected a cycle expression", line, col());
  bool any = false;
  while (i < text.size()) {
    skip_ws();
    if (i == text.size()) break;
    if (text[i] != '(') throw parse_error("expected '('", line, col());
    ++i;
    std::vector<Point> cyc;
    while (true) {
      skip_ws();
      if (i == text.size()) throw parse_error("unterminated cycle", line, col());
      if (text[i] == ')') {
        ++i;
        break;
      }
      if (!isdigit(static_cast<unsigned char>(text[i])))
        throw parse_error("expected a point or ')'", line, col());
      std::size_t start = i;
      unsigned long v = 0;
      while (i < text.size() && isdigit(static_cast<unsigned char>(text[i]))) {
        v = v * 10 + static_cast<unsigned long>(text[i] - '0');
        if (v > 0xffff) throw parse_error("point out of range", line, start + 1);
        ++i;
      }
      if (v >= degree)
        throw parse_error("point " + std::to_string(v) + " exceeds degree " +
                              std::to_string(degree) + " - 1",
                          line, start + 1);
      if (used[v])
        throw parse_error("point " + std::to_string(v) + " repeated", line, start + 1);
      used[v] = true;
      cyc.push_back(static_cast<Point>(v));
    }
    if (cyc.size() == 1)
      throw parse_error("cycle of length 1 is not allowed; omit fixed points", line, col());
    for (std::size_t k = 0; k < cyc.size(); ++k)
      img[cyc[k]] = cyc[(k + 1) % cyc.size()];
    any = true;
    skip_ws();
  }
  if (!any) throw parse_error("expected a cycle expression", line, col());
  return Perm(std::move(img));
}

}  // namespace amalgam
