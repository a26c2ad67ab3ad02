#pragma once

#include <compare>
#include <cstdint>
#include <string>
#include <vector>

namespace amalgam {

using Point = std::uint16_t;

// Permutation of {0, ..., degree-1}, stored as the image sequence.
// Composition is left-to-right: compose(p, q) maps i to q(p(i)), so that
// the exponent notation x^g used throughout the library reads "apply g last".
class Perm {
public:
  Perm() = default;
  explicit Perm(std::size_t degree);               // identity
  explicit Perm(std::vector<Point> images);        // validates bijectivity

  static Perm identity(std::size_t degree) { return Perm(degree); }

  std::size_t degree() const { return img_.size(); }
  Point operator()(Point p) const { return img_[p]; }
  const std::vector<Point>& images() const { return img_; }

  bool is_identity() const;
  Perm inverse() const;

  bool operator==(const Perm&) const = default;
  // Lexicographic on image sequences; shorter degree compares first.
  std::strong_ordering operator<=>(const Perm&) const = default;

  // Disjoint-cycle form with 0-based points, e.g. "(0 2)(1 3)"; identity is "()".
  std::string cycles() const;

  // Appends a fixed-width little-endian byte encoding of the image sequence.
  void encode(std::string& out) const;
  std::string encoded() const;

private:
  std::vector<Point> img_;
};

Perm compose(const Perm& p, const Perm& q);   // p then q
Perm conjugate(const Perm& x, const Perm& g); // g^-1 x g

// Parses one disjoint-cycle expression such as "(0 1 2 3)" or "(0 1)(2 3)";
// "()" denotes the identity.  Points must be < degree and distinct within the
// expression.  line/col_base locate the expression for error reporting.
Perm parse_cycles(const std::string& text, std::size_t degree, std::size_t line = 1);

}  // namespace amalgam
