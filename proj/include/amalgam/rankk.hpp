#pragma once

// Rank-k amalgams for k >= 3 nontrivial transitive local groups, the first of
// which is not regular.  Two of the local groups act on a shared window set
// through a pair of interleaved faithful actions; the Borel subgroup carries a
// window-indexed power of the first group's point stabilizer, which makes its
// order grow without bound as the window length increases.

#include <cstdint>
#include <memory>
#include <string>
#include <unordered_map>
#include <vector>

#include "amalgam/checks.hpp"
#include "amalgam/group_spec.hpp"
#include "amalgam/perm.hpp"
#include "amalgam/perm_group.hpp"

namespace amalgam {

// Two faithful actions on the window set Omega = Delta x Lambda x Z_ell,
// where Delta and Lambda are the point sets of the two groups.  The point
// (d, l, i) is identified with the flat index (d*m3 + l)*ell + i, and the
// distinguished point omega0 is (delta0, lambda0, 0).  The first group moves
// the Delta coordinate; the second group's plain action moves the Lambda
// coordinate and its working action is the plain one conjugated by a shift
// that advances the window coordinate on the base fiber (delta0, lambda0, *).
// The conjugation is what makes the join of the two actions transitive.
struct InterleavedAction {
  PermGroup first;   // acts on Delta, degree m2
  PermGroup second;  // acts on Lambda, degree m3
  std::size_t delta0;
  std::size_t lambda0;
  std::size_t ell;

  std::size_t m2() const { return first.degree(); }
  std::size_t m3() const { return second.degree(); }
  std::size_t size() const { return m2() * m3() * ell; }
  std::size_t index(std::size_t d, std::size_t l, std::size_t i) const {
    return (d * m3() + l) * ell + i;
  }
  std::size_t omega0() const { return index(delta0, lambda0, 0); }

  // Advances i by one (mod ell) on the base fiber, fixes every other point.
  Perm shift() const;

  Perm act_first(const Perm& h) const;         // (d,l,i) -> (d^h, l, i)
  Perm act_second_plain(const Perm& k) const;  // (d,l,i) -> (d, l^k, i)
  Perm act_second(const Perm& k) const;        // plain action conjugated by shift()
};

// Validates the hypotheses (both groups transitive on at least two points,
// positive window length) and assembles the action data.
InterleavedAction interleave(const PermGroup& first, const PermGroup& second,
                             std::size_t delta0, std::size_t lambda0,
                             std::size_t ell);

// Machine verification of the interleaving properties: both actions faithful,
// the point stabilizer of omega0 in each image equals the image of the base
// point stabilizer, each full image commutes with the other image's stabilizer
// with trivial intersections, and the join of the two images is transitive.
std::vector<NamedCheck> verify_interleaved(const InterleavedAction& ia,
                                           ExecMode mode = ExecMode::kSerial,
                                           std::uint64_t cap = kDefaultCap);

// One element of the ambient group  L1 x (U x| J) x L4 x ... x Lk  where
// U is the window-indexed direct power of V = (L1)_0 and J <= Sym(Omega) is
// the join of the two interleaved images.  The u table stores V-elements by
// their position in the canonical V enumeration; j is the actual permutation
// of the window set (the two factors of each split part intersect trivially,
// so the product permutation determines them).
struct RankKElt {
  Perm l1;
  std::vector<std::uint16_t> u;
  Perm j;
  std::vector<Perm> tail;  // factors 4..k

  bool operator==(const RankKElt&) const = default;
};

// Shared tables and arithmetic for one rank-k instance: the reordered local
// groups, their point stabilizers, the interleaved window action, and the
// V value table.
class RankKCore {
public:
  // locals must already be reordered so that locals[0] is not regular; all
  // must be nontrivial and transitive.  Throws cap_exceeded if the first
  // group's point stabilizer overflows the 16-bit value table.
  RankKCore(std::vector<PermGroup> locals, std::size_t ell, std::uint64_t cap);

  std::size_t rank() const { return locals_.size(); }
  const std::vector<PermGroup>& locals() const { return locals_; }
  const PermGroup& local(std::size_t i) const { return locals_[i]; }
  const PermGroup& stabilizer(std::size_t i) const { return stabs_[i]; }
  const InterleavedAction& window() const { return om_; }
  const std::vector<Perm>& v_elements() const { return v_; }

  RankKElt kid() const;
  RankKElt kmul(const RankKElt& a, const RankKElt& b) const;
  RankKElt kinv(const RankKElt& a) const;
  std::string kenc(const RankKElt& a) const;

  // Value-table position of a stabilizer element; throws hypothesis_error if
  // the permutation is not in V.
  std::uint16_t v_index(const Perm& v) const;

  // Planted elements: everything identity except the named component.
  RankKElt plant_value(std::size_t w, const Perm& v) const;
  RankKElt with_l1(const Perm& g) const;
  RankKElt with_j(const Perm& jp) const;
  RankKElt with_tail(std::size_t i, const Perm& g) const;  // i >= 3, 0-based

  // Embedding of the Borel subgroup into P1: the u-coordinate at omega0 moves
  // into the l1 slot through the inclusion V <= L1; everything else is kept.
  RankKElt iota1(const RankKElt& b) const;

  std::uint64_t predicted_u() const;        // |V|^|Omega|
  std::uint64_t predicted_u_prime() const;  // |V|^(|Omega|-1)
  std::uint64_t predicted_b() const;
  std::uint64_t predicted_p(std::size_t i) const;
  std::uint64_t predicted_core(std::size_t i) const;
  // The closing growth bound |V|^(ell * m2 * m3); equals predicted_u().
  std::uint64_t borel_lower_bound() const;

private:
  std::uint16_t vmul(std::uint16_t i, std::uint16_t j) const;

  std::vector<PermGroup> locals_;
  std::vector<PermGroup> stabs_;  // (L_i)_0 per local
  InterleavedAction om_;

  std::vector<Perm> v_;  // V = (L1)_0, canonical enumeration, identity first
  std::unordered_map<std::string, std::uint16_t> v_idx_;
  std::vector<std::uint16_t> v_mul_;  // Cayley table; empty if V is too large
  std::vector<std::uint16_t> v_inv_;
};

struct RankKCtx {
  std::shared_ptr<const RankKCore> core;
  using Element = RankKElt;
  Element multiply(const Element& a, const Element& b) const { return core->kmul(a, b); }
  Element inverse(const Element& a) const { return core->kinv(a); }
  Element identity() const { return core->kid(); }
  std::string encode(const Element& a) const { return core->kenc(a); }
};

struct RankKInstance {
  std::shared_ptr<const RankKCore> core;
  // Position of each (possibly reordered) local group in the caller's input,
  // 0-based: source_positions[0] is where the non-regular lead group came from.
  std::vector<std::size_t> source_positions;
  GroupSpec<RankKCtx> U;        // window power of V
  GroupSpec<RankKCtx> U_prime;  // coordinates away from omega0 only
  Amalgam<RankKCtx> amalgam;    // P_1..P_k over the Borel subgroup
};

// Builds the instance.  Throws hypothesis_error if fewer than three groups
// are given, any is trivial or intransitive, the window length is zero, or
// every group is regular (in which case any faithful amalgam over them has a
// trivial Borel subgroup and the construction does not apply).  The first
// non-regular group in input order is moved to the front; the move is
// recorded in source_positions.
RankKInstance build_rankk(std::vector<PermGroup> locals, std::size_t ell,
                          std::uint64_t cap = kDefaultCap);

// Cores of the Borel subgroup in each P_i, as element lists in the Borel's
// canonical enumeration order.
std::vector<std::vector<RankKElt>> compute_cores(const RankKInstance& inst,
                                                 std::uint64_t cap = kDefaultCap);

std::vector<NamedCheck> verify_rankk(const RankKInstance& inst, VerifyLevel level,
                                     ExecMode mode = ExecMode::kSerial,
                                     std::uint64_t cap = kDefaultCap);

}  // namespace amalgam
