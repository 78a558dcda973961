#ifndef SYMTA_ANALYSIS_HPP
#define SYMTA_ANALYSIS_HPP

#include <optional>
#include <string>

#include "symta/srtg.hpp"
#include "symta/sta.hpp"
#include "symta/stt.hpp"

namespace symta {

/// dom(M) as a grammar over subsets of M's states, built lazily from {q0}:
/// a subset derives a(xi_1,...,xi_l) exactly when every member state can
/// transform it.
Srtg domain_srtg(const Stt& m);

/// M^{-1}(L(A)) = dom(M ; identity_stt(A)); the composition guarantee holds
/// because the identity transducer is linear and nondeleting.
Srtg backward_apply(const Stt& m, const Sta& a);

/// M(L(G)) for simple and linear M: the product grammar with image guards.
/// Throws capability_error naming the offending rule when M is not simple
/// or not linear.
Srtg forward_apply_slin(const Stt& m, const Srtg& g);

/// range(M) = M(T_U^(k)), for simple and linear M.
Srtg range_slin(const Stt& m);

enum class TypeCheckMethod { forward_slin, backward };

struct TypeCheckReport {
  bool holds = false;
  // forward mode: an output tree in M(L_in)\L_out;
  // inverse mode: an input tree in M^{-1}(L_out)\L_in.
  std::optional<TreePtr> counterexample;
  TypeCheckMethod method = TypeCheckMethod::backward;
};

/// Forward mode decides M(L_in) subset-of L_out (requires simple+linear M);
/// inverse mode decides M^{-1}(L_out) subset-of L_in.
TypeCheckReport typecheck(const Stt& m, const Sta& l_in, const Sta& l_out, bool inverse);

} // namespace symta

#endif
