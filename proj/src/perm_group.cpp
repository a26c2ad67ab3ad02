#include "amalgam/perm_group.hpp"

#include <algorithm>
#include <deque>
#include <stdexcept>
#include <unordered_set>

#include "amalgam/errors.hpp"

namespace amalgam {

PermGroup::PermGroup(std::size_t degree, std::vector<Perm> gens)
    : degree_(degree), gens_(std::move(gens)) {
  if (degree == 0) throw std::invalid_argument("degree must be at least 1");
  for (const Perm& g : gens_)
    if (g.degree() != degree_)
      throw std::invalid_argument("generator degree mismatch");
}

void PermGroup::rebuild_level(std::size_t l) const {
  // The group stabilizing the bases above level l is generated by every strong
  // generator first constrained at level l *or deeper*: those fix the earlier
  // bases but may still move points inside this level's orbit.
  Level& L = levels_[l];
  L.orbit.assign(1, L.base);
  L.where.assign(degree_, -1);
  L.where[L.base] = 0;
  L.transversal.assign(1, Perm::identity(degree_));
  for (std::size_t k = 0; k < L.orbit.size(); ++k) {
    for (std::size_t j = l; j < levels_.size(); ++j) {
      for (const Perm& s : levels_[j].gens) {
        Point p = s(L.orbit[k]);
        if (L.where[p] < 0) {
          L.where[p] = static_cast<int>(L.orbit.size());
          L.orbit.push_back(p);
          L.transversal.push_back(compose(L.transversal[k], s));
        }
      }
    }
  }
}

std::size_t PermGroup::sift(Perm& g, std::size_t start) const {
  std::size_t l = start;
  while (l < levels_.size() && !g.is_identity()) {
    const Level& L = levels_[l];
    Point p = g(L.base);
    if (L.where[p] < 0) return l;
    g = compose(g, L.transversal[L.where[p]].inverse());
    ++l;
  }
  return levels_.size();
}

void PermGroup::build_chain(const std::vector<Point>& prescribed) const {
  levels_.clear();
  // Work queue of (element, first level whose base it might move).  An entry
  // (g, l) promises that g fixes the bases of all levels above l, so sifting
  // may start there.
  std::deque<std::pair<Perm, std::size_t>> pending;
  for (const Perm& g : gens_) pending.emplace_back(g, 0);

  auto enqueue_schreier = [&](std::size_t l) {
    // Schreier generators for the stabilizer of this level's base; each fixes
    // the bases of levels 0..l, so sifting them may start at level l + 1.
    const Level& L = levels_[l];
    for (std::size_t k = 0; k < L.orbit.size(); ++k) {
      for (std::size_t j = l; j < levels_.size(); ++j) {
        for (const Perm& s : levels_[j].gens) {
          Point ps = s(L.orbit[k]);
          pending.emplace_back(compose(compose(L.transversal[k], s),
                                       L.transversal[L.where[ps]].inverse()),
                               l + 1);
        }
      }
    }
  };

  while (!pending.empty()) {
    auto [g, start] = std::move(pending.front());
    pending.pop_front();
    std::size_t l = sift(g, start);
    if (g.is_identity()) continue;
    if (l == levels_.size()) {
      Point base;
      if (l < prescribed.size()) {
        base = prescribed[l];  // may be fixed by g; the retry below moves on
      } else {
        base = 0;
        while (g(base) == base) ++base;
      }
      levels_.push_back(Level{base, {}, {}, {}, {}});
      rebuild_level(l);
      pending.emplace_front(std::move(g), l);
      continue;
    }
    levels_[l].gens.push_back(std::move(g));
    // The new generator enters the generating sets of every level up to l, so
    // their orbits may grow and all their Schreier generators need re-sifting.
    for (std::size_t i = l + 1; i-- > 0;) rebuild_level(i);
    for (std::size_t i = 0; i <= l; ++i) enqueue_schreier(i);
  }
  chain_built_ = true;
}

void PermGroup::ensure_chain() const {
  if (!chain_built_) build_chain({});
}

std::uint64_t PermGroup::order() const {
  ensure_chain();
  std::uint64_t n = 1;
  for (const Level& L : levels_) n *= L.orbit.size();
  return n;
}

bool PermGroup::contains(const Perm& p) const {
  if (p.degree() != degree_) throw std::invalid_argument("degree mismatch");
  ensure_chain();
  Perm g = p;
  sift(g);
  return g.is_identity();
}

bool PermGroup::is_transitive() const {
  return orbits().size() == 1;
}

bool PermGroup::is_semiregular() const {
  std::uint64_t n = order();
  for (const auto& o : orbits())
    if (o.size() != n) return false;
  return true;
}

std::vector<std::vector<Point>> PermGroup::orbits() const {
  std::vector<std::vector<Point>> out;
  std::vector<bool> seen(degree_, false);
  for (Point start = 0; start < degree_; ++start) {
    if (seen[start]) continue;
    std::vector<Point> orbit{start};
    seen[start] = true;
    for (std::size_t k = 0; k < orbit.size(); ++k) {
      for (const Perm& s : gens_) {
        Point p = s(orbit[k]);
        if (!seen[p]) {
          seen[p] = true;
          orbit.push_back(p);
        }
      }
    }
    std::sort(orbit.begin(), orbit.end());
    out.push_back(std::move(orbit));
  }
  return out;
}

PermGroup PermGroup::point_stabilizer(Point p) const {
  if (p >= degree_) throw std::invalid_argument("point exceeds degree");
  PermGroup tmp(degree_, gens_);
  tmp.build_chain({p});
  std::vector<Perm> stab_gens;
  for (std::size_t l = 1; l < tmp.levels_.size(); ++l)
    for (const Perm& s : tmp.levels_[l].gens) stab_gens.push_back(s);
  return PermGroup(degree_, std::move(stab_gens));
}

const std::vector<Perm>& PermGroup::elements(std::uint64_t cap) const {
  if (!elements_.empty()) {
    if (elements_.size() > cap)
      throw cap_exceeded("group order exceeds cap", cap);
    return elements_;
  }
  std::vector<Perm> elts{Perm::identity(degree_)};
  std::unordered_set<std::string> seen{elts[0].encoded()};
  for (std::size_t k = 0; k < elts.size(); ++k) {
    for (const Perm& s : gens_) {
      Perm y = compose(elts[k], s);
      if (seen.insert(y.encoded()).second) {
        if (elts.size() + 1 > cap)
          throw cap_exceeded("group order exceeds cap", cap);
        elts.push_back(std::move(y));
      }
    }
  }
  elements_ = std::move(elts);
  return elements_;
}

PermGroup normal_closure(const PermGroup& g, const std::vector<Perm>& seeds) {
  for (const Perm& s : seeds)
    if (!g.contains(s))
      throw std::invalid_argument("normal_closure: seed lies outside the group");
  std::vector<Perm> closure;
  std::unordered_set<std::string> seen;
  for (const Perm& s : seeds) {
    if (s.is_identity()) continue;
    if (seen.insert(s.encoded()).second) closure.push_back(s);
  }
  for (std::size_t k = 0; k < closure.size(); ++k) {
    for (const Perm& t : g.generators()) {
      Perm c = conjugate(closure[k], t);
      if (seen.insert(c.encoded()).second) closure.push_back(std::move(c));
    }
  }
  return PermGroup(g.degree(), std::move(closure));
}

BlockPartition BlockPartition::from_cells(std::size_t degree,
                                          std::vector<std::vector<Point>> cells) {
  BlockPartition p;
  p.cell_of.assign(degree, 0);
  std::vector<bool> seen(degree, false);
  for (auto& c : cells) {
    if (c.empty()) throw std::invalid_argument("empty cell");
    std::sort(c.begin(), c.end());
    for (Point pt : c) {
      if (pt >= degree || seen[pt])
        throw std::invalid_argument("cells do not partition the point set");
      seen[pt] = true;
    }
  }
  for (bool b : seen)
    if (!b) throw std::invalid_argument("cells do not partition the point set");
  std::sort(cells.begin(), cells.end(),
            [](const auto& a, const auto& b) { return a[0] < b[0]; });
  for (std::size_t i = 0; i < cells.size(); ++i)
    for (Point pt : cells[i]) p.cell_of[pt] = static_cast<Point>(i);
  p.cells = std::move(cells);
  return p;
}

Perm induced_cell_perm(const Perm& g, const BlockPartition& p) {
  std::vector<Point> img(p.cells.size());
  for (std::size_t c = 0; c < p.cells.size(); ++c)
    img[c] = p.cell_of[g(p.cells[c][0])];
  return Perm(std::move(img));  // throws if cells are not permuted
}

BlockAction kernel_on_blocks(const PermGroup& g, BlockPartition partition,
                             std::uint64_t cap) {
  std::vector<Perm> images;
  for (const Perm& s : g.generators()) {
    for (const auto& cell : partition.cells) {
      Point target = partition.cell_of[s(cell[0])];
      for (Point pt : cell)
        if (partition.cell_of[s(pt)] != target)
          throw std::invalid_argument("partition is not invariant under the group");
    }
    images.push_back(induced_cell_perm(s, partition));
  }
  PermGroup induced(partition.cells.size(), std::move(images));
  std::vector<Perm> kernel_gens;
  for (const Perm& x : g.elements(cap))
    if (induced_cell_perm(x, partition).is_identity() && !x.is_identity())
      kernel_gens.push_back(x);
  PermGroup kernel(g.degree(), std::move(kernel_gens));
  return BlockAction{std::move(partition), std::move(induced), std::move(kernel)};
}

SemiprimitivityVerdict is_semiprimitive(const PermGroup& g, std::uint64_t cap) {
  if (!g.is_transitive())
    throw hypothesis_error("semiprimitivity is defined for transitive groups only");
  PermGroup stab = g.point_stabilizer(0);
  for (const Perm& h : stab.elements(cap)) {
    if (h.is_identity()) continue;
    PermGroup n = normal_closure(g, {h});
    if (n.orbits().size() > 1) {
      // n contains h, which fixes 0, so n is not semiregular either.
      return SemiprimitivityVerdict{false, std::move(n)};
    }
  }
  return SemiprimitivityVerdict{true, std::nullopt};
}

namespace {

struct IsoSearch {
  const PermGroup& g;
  const PermGroup& h;
  std::size_t n;
  std::vector<std::size_t> g_orbit_size, h_orbit_size;
  std::vector<std::uint64_t> g_stab, h_stab;
  std::vector<Point> image;
  std::vector<bool> used;

  bool leaf_ok() {
    Perm sigma{std::vector<Point>(image)};
    Perm sigma_inv = sigma.inverse();
    for (const Perm& s : g.generators())
      if (!h.contains(compose(compose(sigma_inv, s), sigma))) return false;
    return true;
  }

  bool extend(std::size_t i, Perm& out) {
    if (i == n) {
      if (!leaf_ok()) return false;
      out = Perm(std::vector<Point>(image));
      return true;
    }
    for (Point j = 0; j < n; ++j) {
      if (used[j]) continue;
      if (g_orbit_size[i] != h_orbit_size[j]) continue;
      if (g_stab[i] != h_stab[j]) continue;
      image[i] = j;
      used[j] = true;
      if (extend(i + 1, out)) return true;
      used[j] = false;
    }
    return false;
  }
};

}  // namespace

std::optional<Perm> perm_isomorphic(const PermGroup& g, const PermGroup& h,
                                    std::size_t max_degree) {
  if (g.degree() != h.degree())
    throw std::invalid_argument("perm_isomorphic: degree mismatch");
  if (g.degree() > max_degree)
    throw cap_exceeded("perm_isomorphic: degree exceeds search cap", max_degree);
  if (g.order() != h.order()) return std::nullopt;

  std::size_t n = g.degree();
  IsoSearch s{g, h, n, {}, {}, {}, {}, {}, {}};
  s.g_orbit_size.assign(n, 0);
  s.h_orbit_size.assign(n, 0);
  for (const auto& o : g.orbits())
    for (Point p : o) s.g_orbit_size[p] = o.size();
  for (const auto& o : h.orbits())
    for (Point p : o) s.h_orbit_size[p] = o.size();
  for (Point p = 0; p < n; ++p) {
    s.g_stab.push_back(g.point_stabilizer(p).order());
    s.h_stab.push_back(h.point_stabilizer(p).order());
  }
  s.image.assign(n, 0);
  s.used.assign(n, false);
  Perm out;
  if (s.extend(0, out)) return out;
  return std::nullopt;
}

}  // namespace amalgam
