#include "amalgam/tree.hpp"

#include <algorithm>
#include <deque>
#include <string>
#include <utility>
#include <vector>

namespace amalgam {

namespace {

Amalgam<SemiCtx> checked(Amalgam<SemiCtx> am) {
  if (am.rank() != 2)
    throw hypothesis_error("the tree explorer needs a rank-2 amalgam");
  return am;
}

std::string show(std::uint64_t v) { return std::to_string(v); }

}  // namespace

TreeBall::TreeBall(Amalgam<SemiCtx> am, std::size_t radius,
                   std::uint64_t vertex_cap)
    : arith_(checked(std::move(am))), radius_(radius) {
  auto add_vertex = [&](TreeVertex v, std::size_t d) {
    if (vertices_.size() >= vertex_cap)
      throw cap_exceeded("ball vertex count exceeds cap", vertex_cap);
    index_.emplace(vertex_key(v), vertices_.size());
    vertices_.push_back(std::move(v));
    depths_.push_back(d);
    neighbors_.emplace_back();
    return vertices_.size() - 1;
  };
  add_vertex(TreeVertex{1, {}}, 0);
  add_vertex(TreeVertex{2, {}}, 0);
  edges_.emplace_back(0, 1);
  neighbors_[0].push_back(1);
  neighbors_[1].push_back(0);
  spheres_.push_back({0, 1});
  for (std::size_t d = 0; d < radius_; ++d) {
    std::vector<std::size_t> next;
    for (std::size_t v : spheres_[d]) {
      const int t = vertices_[v].type;
      for (std::uint32_t j = 1; j < arith_.degree(t); ++j) {
        TreeVertex child{3 - t, vertices_[v].word};
        child.word.push_back(j);
        const std::size_t c = add_vertex(std::move(child), d + 1);
        neighbors_[v].push_back(c);
        neighbors_[c].push_back(v);
        edges_.emplace_back(v, c);
        next.push_back(c);
      }
    }
    spheres_.push_back(std::move(next));
  }
}

std::string TreeBall::vertex_key(const TreeVertex& v) const {
  std::string key;
  key += static_cast<char>(v.type);
  for (std::uint32_t w : v.word)
    for (int shift = 0; shift < 32; shift += 8)
      key += static_cast<char>((w >> shift) & 0xff);
  return key;
}

std::size_t TreeBall::index_of(const TreeVertex& v) const {
  auto it = index_.find(vertex_key(v));
  if (it == index_.end()) throw std::out_of_range("vertex outside the ball");
  return it->second;
}

// Side of step k (0-based) on the path to a vertex: the final step leaves a
// vertex of the opposite type, and sides alternate back toward the root.
int TreeBall::step_side(int type, std::size_t wordlen, std::size_t k) const {
  return (wordlen - 1 - k) % 2 == 0 ? 3 - type : type;
}

TreeVertex TreeBall::image(const TreeVertex& v,
                           const std::vector<Element>& word) const {
  Arith::NormalForm nf;
  const std::size_t d = v.word.size();
  for (std::size_t i = 0; i < d; ++i) {
    const std::size_t k = d - 1 - i;  // product order is reversed step order
    nf.letters.push_back({step_side(v.type, d, k), v.word[k]});
  }
  for (const Element& x : word) nf = arith_.fold(std::move(nf), x);
  // Canonical coset word: the head and a leading letter of the vertex's own
  // side are absorbed by the coset; alternation rules out a second absorption.
  std::size_t first = 0;
  if (!nf.letters.empty() && nf.letters.front().side == v.type) first = 1;
  TreeVertex out{v.type, {}};
  for (std::size_t i = nf.letters.size(); i-- > first;)
    out.word.push_back(nf.letters[i].index);
  return out;
}

std::size_t TreeBall::image_index(std::size_t v,
                                  const std::vector<Element>& word) const {
  return index_of(image(vertices_[v], word));
}

std::vector<TreeBall::Element> TreeBall::conjugating_word(
    std::size_t v, const Element& p) const {
  const SemiCtx& cx = arith_.amalgam().borel.ctx();
  const TreeVertex& tv = vertices_[v];
  const std::size_t d = tv.word.size();
  std::vector<Element> w;
  for (std::size_t k = 0; k < d; ++k)
    w.push_back(cx.inverse(arith_.rep(step_side(tv.type, d, k), tv.word[k])));
  w.push_back(p);
  for (std::size_t k = d; k-- > 0;)
    w.push_back(arith_.rep(step_side(tv.type, d, k), tv.word[k]));
  return w;
}

PermGroup TreeBall::local_action(std::size_t v) const {
  if (!is_interior(v))
    throw hypothesis_error("local action needs an interior vertex");
  const int t = vertices_[v].type;
  const auto& nbrs = neighbors_[v];
  std::vector<Perm> gens;
  for (const Element& p : arith_.amalgam().groups[t - 1].generators()) {
    const std::vector<Element> w = conjugating_word(v, p);
    std::vector<Point> img(nbrs.size());
    for (std::size_t j = 0; j < nbrs.size(); ++j) {
      const std::size_t target = image_index(nbrs[j], w);
      const auto pos = std::find(nbrs.begin(), nbrs.end(), target);
      if (pos == nbrs.end())
        throw std::logic_error("stabilizer action left the neighbor list");
      img[j] = static_cast<Point>(pos - nbrs.begin());
    }
    gens.push_back(Perm(std::move(img)));
  }
  return PermGroup(nbrs.size(), std::move(gens));
}

RootEdgeReport TreeBall::root_edge_stabilizer_action() const {
  const auto& am = arith_.amalgam();
  RootEdgeReport report;
  report.borel_order = am.borel.order();
  report.stabilizer_is_borel = true;

  // Elements of either group fix their own root automatically; the ones that
  // also fix the other root form the edge stabilizer, which must be exactly
  // the embedded Borel subgroup: same count, and every Borel element fixes.
  for (int s = 1; s <= 2; ++s) {
    const std::size_t far_root = s == 1 ? 1 : 0;
    std::uint64_t fixing = 0;
    for (const Element& p : am.groups[s - 1].elements())
      if (image(vertices_[far_root], {p}) == vertices_[far_root]) ++fixing;
    if (fixing != report.borel_order) report.stabilizer_is_borel = false;
    for (const Element& b : am.borel.elements())
      if (image(vertices_[far_root], {am.embeddings[s - 1](b)}) !=
          vertices_[far_root])
        report.stabilizer_is_borel = false;
  }

  std::vector<Element> bgens;
  for (const Element& b : am.borel.generators())
    bgens.push_back(am.embeddings[0](b));
  for (const auto& sphere : spheres_) {
    std::vector<std::size_t> sizes;
    std::vector<char> done(sphere.size(), 0);
    for (std::size_t i = 0; i < sphere.size(); ++i) {
      if (done[i]) continue;
      std::size_t count = 0;
      std::deque<std::size_t> queue{i};
      done[i] = 1;
      while (!queue.empty()) {
        const std::size_t at = queue.front();
        queue.pop_front();
        ++count;
        for (const Element& g : bgens) {
          const std::size_t to = image_index(sphere[at], {g});
          const auto it = std::find(sphere.begin(), sphere.end(), to);
          const std::size_t local = it - sphere.begin();
          if (!done[local]) {
            done[local] = 1;
            queue.push_back(local);
          }
        }
      }
      sizes.push_back(count);
    }
    report.sphere_orbit_sizes.push_back(std::move(sizes));
  }
  return report;
}

std::string TreeBall::to_dot() const {
  std::string out = "graph ball {\n  node [fontsize=10];\n";
  for (std::size_t i = 0; i < vertices_.size(); ++i) {
    std::string label = "t" + std::to_string(vertices_[i].type) + ":";
    for (std::size_t k = 0; k < vertices_[i].word.size(); ++k) {
      if (k) label += ".";
      label += std::to_string(vertices_[i].word[k]);
    }
    out += "  v" + std::to_string(i) + " [label=\"" + label + "\", shape=" +
           (vertices_[i].type == 1 ? "circle" : "box") + "];\n";
  }
  for (std::size_t e = 0; e < edges_.size(); ++e) {
    out += "  v" + std::to_string(edges_[e].first) + " -- v" +
           std::to_string(edges_[e].second);
    if (e == 0) out += " [penwidth=2.5, color=crimson]";  // the root edge
    out += ";\n";
  }
  out += "}\n";
  return out;
}

std::vector<NamedCheck> verify_tree(const TreeBall& ball) {
  CheckSink sink;
  const auto& am = ball.arith().amalgam();
  const std::size_t n = ball.vertices().size();
  const std::size_t d1 = ball.arith().degree(1);
  const std::size_t d2 = ball.arith().degree(2);

  sink.guarded("ball_is_a_tree", [&] {
    if (ball.edges().size() != n - 1) {
      sink.fail("ball_is_a_tree", show(ball.edges().size()) + " edges on " +
                                      show(n) + " vertices");
      return;
    }
    std::vector<char> seen(n, 0);
    std::deque<std::size_t> queue{0};
    seen[0] = 1;
    std::size_t reached = 0;
    while (!queue.empty()) {
      const std::size_t v = queue.front();
      queue.pop_front();
      ++reached;
      for (std::size_t u : ball.neighbors(v))
        if (!seen[u]) {
          seen[u] = 1;
          queue.push_back(u);
        }
    }
    if (reached != n)
      sink.fail("ball_is_a_tree", "only " + show(reached) + " of " + show(n) +
                                      " vertices reachable");
    else
      sink.pass("ball_is_a_tree",
                show(n) + " vertices, " + show(ball.edges().size()) + " edges");
  });

  sink.guarded("interior_degrees_are_bi_regular", [&] {
    for (std::size_t v = 0; v < n; ++v) {
      const std::size_t want =
          ball.is_interior(v) ? (ball.vertices()[v].type == 1 ? d1 : d2) : 1;
      if (ball.neighbors(v).size() != want) {
        sink.fail("interior_degrees_are_bi_regular",
                  "vertex " + show(v) + " has degree " +
                      show(ball.neighbors(v).size()) + ", expected " + show(want));
        return;
      }
    }
    sink.pass("interior_degrees_are_bi_regular",
              "valencies " + show(d1) + " and " + show(d2));
  });

  sink.guarded("sphere_sizes_match_closed_form", [&] {
    std::string detail;
    std::uint64_t a = 1, b = 1;  // branch counts below each root
    for (std::size_t k = 0; k <= ball.radius(); ++k) {
      std::uint64_t expected;
      if (k == 0) {
        expected = 2;
      } else {
        a *= (k % 2 == 1 ? d1 : d2) - 1;
        b *= (k % 2 == 1 ? d2 : d1) - 1;
        expected = a + b;
      }
      if (!detail.empty()) detail += "+";
      detail += show(ball.sphere(k).size());
      if (ball.sphere(k).size() != expected) {
        sink.fail("sphere_sizes_match_closed_form",
                  "sphere " + show(k) + " has " + show(ball.sphere(k).size()) +
                      " vertices, expected " + show(expected));
        return;
      }
    }
    sink.pass("sphere_sizes_match_closed_form", detail);
  });

  sink.guarded("root_actions_equal_coset_images", [&] {
    if (ball.radius() == 0) {
      sink.skip("root_actions_equal_coset_images", "radius 0");
      return;
    }
    for (int t = 1; t <= 2; ++t) {
      const PermGroup got = ball.local_action(t - 1);
      const PermGroup& want = ball.arith().coset_image(t);
      if (got.degree() != want.degree() ||
          got.generators() != want.generators()) {
        sink.fail("root_actions_equal_coset_images",
                  "type " + show(t) + " root action differs");
        return;
      }
    }
    sink.pass("root_actions_equal_coset_images",
              "degrees " + show(d1) + " and " + show(d2));
  });

  sink.guarded("interior_actions_match_root_type", [&] {
    if (ball.radius() == 0) {
      sink.skip("interior_actions_match_root_type", "radius 0");
      return;
    }
    const PermGroup roots[2] = {ball.local_action(0), ball.local_action(1)};
    std::size_t checked = 0;
    for (std::size_t v = 2; v < n; ++v) {
      if (!ball.is_interior(v)) continue;
      const PermGroup act = ball.local_action(v);
      if (!perm_isomorphic(act, roots[ball.vertices()[v].type - 1])) {
        sink.fail("interior_actions_match_root_type",
                  "vertex " + show(v) + " is not isomorphic to its root");
        return;
      }
      ++checked;
    }
    sink.pass("interior_actions_match_root_type",
              show(checked) + " interior vertices beyond the roots");
  });

  sink.guarded("root_edge_stabilizer_is_borel", [&] {
    const RootEdgeReport report = ball.root_edge_stabilizer_action();
    if (report.stabilizer_is_borel)
      sink.pass("root_edge_stabilizer_is_borel",
                "|B|=" + show(report.borel_order));
    else
      sink.fail("root_edge_stabilizer_is_borel",
                "fixing sets differ from the Borel subgroup");
  });

  sink.guarded("borel_orbits_on_root_neighbors_match_stabilizer_orbits", [&] {
    if (ball.radius() == 0) {
      sink.skip("borel_orbits_on_root_neighbors_match_stabilizer_orbits",
                "radius 0");
      return;
    }
    std::vector<TreeBall::Element> bgens;
    for (const auto& b : am.borel.generators())
      bgens.push_back(am.embeddings[0](b));
    for (int t = 1; t <= 2; ++t) {
      const auto& nbrs = ball.neighbors(t - 1);
      // Orbit partition of neighbor positions under the Borel generators.
      std::vector<Perm> pos_perms;
      for (const auto& g : bgens) {
        std::vector<Point> img(nbrs.size());
        for (std::size_t j = 0; j < nbrs.size(); ++j) {
          const std::size_t to = ball.image_index(nbrs[j], {g});
          const auto it = std::find(nbrs.begin(), nbrs.end(), to);
          img[j] = static_cast<Point>(it - nbrs.begin());
        }
        pos_perms.push_back(Perm(std::move(img)));
      }
      auto tree_side = PermGroup(nbrs.size(), std::move(pos_perms)).orbits();
      auto image_side =
          ball.arith().coset_image(t).point_stabilizer(0).orbits();
      auto canon = [](std::vector<std::vector<Point>> o) {
        for (auto& x : o) std::sort(x.begin(), x.end());
        std::sort(o.begin(), o.end());
        return o;
      };
      if (canon(tree_side) != canon(image_side)) {
        sink.fail("borel_orbits_on_root_neighbors_match_stabilizer_orbits",
                  "type " + show(t) + " partitions differ");
        return;
      }
    }
    sink.pass("borel_orbits_on_root_neighbors_match_stabilizer_orbits",
              "both root neighbor sets");
  });

  return sink.out;
}

}  // namespace amalgam
