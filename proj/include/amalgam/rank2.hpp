#pragma once

#include <memory>

#include "amalgam/checks.hpp"
#include "amalgam/group_spec.hpp"
#include "amalgam/witness.hpp"

namespace amalgam {

// Coordinate bookkeeping for the function part: the index set
// Omega = {(y, z) : 0 <= y < m2, 0 <= z < ell} is identified with {0..m-1},
// m = ell*m2, window-major: index = z*m2 + y.  The right-hand group R permutes
// the y coordinate, so its orbits are the ell consecutive blocks of size m2;
// the extended action on {0..m} fixes the extra point m.
//
// The block layout is load-bearing for faithfulness: every orbit minimum
// except 0 is a block start z*m2, whose two predecessors z*m2-1 and z*m2-2
// fall in the previous block and hence share an R-orbit.  The cancellation
// argument that kills a common normal subgroup walks down through Omega via
// exactly that step, and fails for ell >= 2 under the y-major layout (the
// dihedral/cyclic amalgam then acquires a genuine common normal subgroup
// supported on a single window position).
struct OmegaIndex {
  std::size_t m2 = 0, ell = 0, m = 0;

  OmegaIndex() = default;
  OmegaIndex(std::size_t m2_, std::size_t ell_) : m2(m2_), ell(ell_), m(m2_ * ell_) {}

  std::size_t index(std::size_t y, std::size_t z) const { return z * m2 + y; }
  std::size_t act(const Perm& r, std::size_t i) const {
    return index(r(static_cast<Point>(i % m2)), i / m2);
  }
  std::size_t act_ext(const Perm& r, std::size_t i) const {
    return i == m ? m : act(r, i);
  }
};

// Element of the function-twisted group: g in L together with
// f : {1..m} x cells -> L_lambda.  f-values are stored as indices into the
// canonical L_lambda element table; row i holds f_{i+1}.
struct WreathElt {
  Perm g;
  std::vector<std::uint16_t> f;

  bool operator==(const WreathElt&) const = default;
};

// Element of one of the semidirect products P1 = A x| R1, P2 = C x| R,
// B = C x| R1, multiplied as (a1, r1)(a2, r2) = (a1 * a2^(r1^-1), r1 r2)
// with the re-indexing action below.
struct Rank2Element {
  WreathElt a;
  Perm r;

  bool operator==(const Rank2Element&) const = default;
};

// Shared immutable tables for one instance of the two-group construction.
class Rank2Core {
public:
  Rank2Core(WitnessData w, TransversalTau tau, SectionEpsilon eps, PermGroup r,
            std::size_t ell, std::uint64_t cap);

  const WitnessData& witness() const { return w_; }
  const TransversalTau& transversal() const { return tau_; }
  const SectionEpsilon& section() const { return eps_; }
  const PermGroup& R() const { return r_; }
  const PermGroup& R1() const { return r1_; }
  const OmegaIndex& omega() const { return om_; }
  std::size_t n_cells() const { return n_cells_; }
  const std::vector<Perm>& lambda_elements() const { return lam_; }

  WreathElt wid() const;
  WreathElt wmul(const WreathElt& a, const WreathElt& b) const;
  WreathElt winv(const WreathElt& a) const;
  std::string wenc(const WreathElt& a) const;

  // Re-indexing action of r on a tuple: both the g-row (indices {0..m}, the
  // left part g sitting at index 0, the extra index m fixed) and the f-rows
  // (indices {0..m-1}) are pulled back along r.  When r moves index 0 the
  // left part must lie in L_lambda, i.e. the element must belong to C.
  WreathElt reindex(const WreathElt& a, const Perm& r) const;

  // Defining membership test: g in L and, for every row i and every
  // transversal rep x, pi(f_i(delta^x)) == tau(x pi(g)^-1) pi(g) tau(x)^-1.
  bool membership_A(const WreathElt& a) const;

  // Canonical section lift of g in L: constant rows built from the section
  // applied to the defining right-hand side; phi(lift(g)) == g.
  WreathElt lift(const Perm& g) const;

  // Generators of the subgroup M: one nontrivial K_lambda generator planted
  // at each (row, cell) position.
  std::vector<WreathElt> m_gens() const;

  Perm phi(const WreathElt& a) const { return a.g; }

  // Right-hand side of the membership identity, computed in S; pg is the
  // cell permutation of the left part and pg_inv its inverse.
  Perm defining_rhs(const Perm& pg, const Perm& pg_inv, const Perm& x) const;

  std::uint64_t predicted_M() const;  // |K_lambda|^(cells * m), saturating

  // L_lambda index helpers used by the verification suites.
  std::uint16_t lambda_index(const Perm& g) const;
  bool lambda_value_in_K(std::uint16_t idx) const { return lam_in_k_[idx]; }

private:
  friend struct WreathCtx;
  friend struct SemiCtx;

  Perm cell_perm(const Perm& g) const { return w_.pi(g); }
  std::uint16_t lmul(std::uint16_t i, std::uint16_t j) const;

  WitnessData w_;
  TransversalTau tau_;
  SectionEpsilon eps_;
  PermGroup r_;
  PermGroup r1_;
  OmegaIndex om_;
  std::size_t n_cells_;

  std::vector<Perm> lam_;                                   // L_lambda table
  std::unordered_map<std::string, std::uint16_t> lam_idx_;
  std::vector<std::uint16_t> lam_mul_;                      // empty if too large
  std::vector<std::uint16_t> lam_inv_;
  std::vector<Perm> lam_pi_;                                // pi per table entry
  std::vector<bool> lam_in_k_;                              // K_lambda membership
};

struct WreathCtx {
  std::shared_ptr<const Rank2Core> core;
  using Element = WreathElt;
  Element multiply(const Element& a, const Element& b) const { return core->wmul(a, b); }
  Element inverse(const Element& a) const { return core->winv(a); }
  Element identity() const { return core->wid(); }
  std::string encode(const Element& a) const { return core->wenc(a); }
};

struct SemiCtx {
  std::shared_ptr<const Rank2Core> core;
  using Element = Rank2Element;
  Element multiply(const Element& p, const Element& q) const {
    return {core->wmul(p.a, core->reindex(q.a, p.r.inverse())), compose(p.r, q.r)};
  }
  Element inverse(const Element& p) const {
    return {core->reindex(core->winv(p.a), p.r), p.r.inverse()};
  }
  Element identity() const { return {core->wid(), Perm::identity(core->R().degree())}; }
  std::string encode(const Element& p) const { return core->wenc(p.a) + p.r.encoded(); }
};

struct Rank2Instance {
  std::shared_ptr<const Rank2Core> core;
  GroupSpec<WreathCtx> A, C, M;
  GroupSpec<SemiCtx> P1, P2, B;
  Amalgam<SemiCtx> amalgam;
};

// Builds the full instance from a transitive non-semiprimitive L and a
// nontrivial transitive R.  Hypothesis violations throw hypothesis_error;
// enumeration is lazy, so the cap only binds once group elements are needed.
Rank2Instance build_rank2(const PermGroup& L, const PermGroup& R, std::size_t ell,
                          std::uint64_t cap = kDefaultCap);

// Verification suite; every verdict is named after the property it checks.
std::vector<NamedCheck> verify_rank2(const Rank2Instance& inst, VerifyLevel level,
                                     ExecMode mode, std::uint64_t cap = kDefaultCap);

}  // namespace amalgam
