#include "amalgam/witness.hpp"

#include <algorithm>
#include <stdexcept>

#include "amalgam/errors.hpp"

namespace amalgam {

std::optional<WitnessData> find_witness(const PermGroup& l, std::uint64_t cap) {
  SemiprimitivityVerdict verdict = is_semiprimitive(l, cap);
  if (verdict.semiprimitive) return std::nullopt;

  BlockPartition cells =
      BlockPartition::from_cells(l.degree(), verdict.witness->orbits());
  BlockAction ba = kernel_on_blocks(l, std::move(cells), cap);
  PermGroup k = std::move(ba.kernel);

  // The kernel contains the witness, so some point has nontrivial stabilizer.
  std::optional<Point> lambda;
  for (Point p = 0; p < l.degree(); ++p) {
    if (k.point_stabilizer(p).order() >= 2) {
      lambda = p;
      break;
    }
  }
  if (!lambda) throw std::logic_error("witness kernel is semiregular");

  Point delta = ba.partition.cell_of[*lambda];
  PermGroup s_delta = ba.induced.point_stabilizer(delta);
  PermGroup l_lambda = l.point_stabilizer(*lambda);
  PermGroup k_lambda = k.point_stabilizer(*lambda);

  // The cell stabilizer is covered by the point stabilizer because K is
  // transitive on the cell; confirm rather than assume.
  std::vector<Perm> image_gens;
  for (const Perm& g : l_lambda.generators())
    image_gens.push_back(induced_cell_perm(g, ba.partition));
  PermGroup image(ba.partition.cells.size(), std::move(image_gens));
  if (image.order() != s_delta.order())
    throw std::logic_error("point stabilizer does not cover the cell stabilizer");

  return WitnessData{l,
                     std::move(k),
                     std::move(ba.partition),
                     std::move(ba.induced),
                     *lambda,
                     delta,
                     std::move(l_lambda),
                     std::move(k_lambda),
                     std::move(s_delta)};
}

std::uint32_t TransversalTau::tau_index(const Perm& s) const {
  auto it = coset_of.find(s.encoded());
  if (it == coset_of.end())
    throw std::invalid_argument("tau: element outside the group");
  return it->second;
}

TransversalTau build_transversal_tau(const PermGroup& s, const PermGroup& s_delta,
                                     std::uint64_t cap) {
  const std::vector<Perm>& all = s.elements(cap);
  const std::vector<Perm>& stab = s_delta.elements(cap);
  for (const Perm& d : stab)
    if (!s.contains(d))
      throw std::invalid_argument("transversal: subgroup lies outside the group");

  // Lexicographically least element of each right coset S_delta * x.
  std::unordered_map<std::string, Perm> least;  // enc(rep) stays keyed per element
  std::unordered_map<std::string, std::string> coset_key;  // enc(x) -> enc of least
  for (const Perm& x : all) {
    Perm best = x;
    for (const Perm& d : stab) {
      Perm y = compose(d, x);
      if (y < best) best = y;
    }
    std::string bkey = best.encoded();
    coset_key.emplace(x.encoded(), bkey);
    least.emplace(std::move(bkey), std::move(best));
  }

  std::vector<Perm> reps;
  reps.reserve(least.size());
  for (auto& [key, rep] : least) reps.push_back(rep);
  std::sort(reps.begin(), reps.end());

  TransversalTau t;
  std::unordered_map<std::string, std::uint32_t> rep_index;
  for (std::uint32_t i = 0; i < reps.size(); ++i)
    rep_index.emplace(reps[i].encoded(), i);
  for (auto& [xkey, bkey] : coset_key) t.coset_of.emplace(xkey, rep_index.at(bkey));
  t.reps = std::move(reps);
  return t;
}

const Perm& SectionEpsilon::eps(const Perm& s) const {
  auto it = pre.find(s.encoded());
  if (it == pre.end())
    throw std::invalid_argument("eps: element outside the cell stabilizer");
  return it->second;
}

SectionEpsilon build_section_epsilon(const WitnessData& w, std::uint64_t cap) {
  SectionEpsilon e;
  const std::vector<Perm>& lam = w.L_lambda.elements(cap);
  for (const Perm& s : w.S_delta.elements(cap)) {
    bool found = false;
    for (const Perm& g : lam) {
      if (w.pi(g) == s) {
        e.pre.emplace(s.encoded(), g);
        found = true;
        break;
      }
    }
    if (!found)
      throw std::logic_error("section: cell stabilizer element with no preimage");
  }
  return e;
}

}  // namespace amalgam
