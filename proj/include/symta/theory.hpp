#ifndef SYMTA_THEORY_HPP
#define SYMTA_THEORY_HPP

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "symta/errors.hpp"
#include "symta/label.hpp"

namespace symta {

/// One concrete effective label structure (U, Phi). Two families are
/// provided: the integers with congruence/interval atoms, and a finite
/// symbol universe with subset atoms. Both support predicate image.
class Theory {
public:
  enum class Kind { integers, finite };

  static Theory integers() { return Theory(Kind::integers, {}); }
  static Theory finite(std::set<std::string> universe) {
    return Theory(Kind::finite, std::move(universe));
  }

  Kind kind() const { return kind_; }
  bool is_integers() const { return kind_ == Kind::integers; }
  bool is_finite() const { return kind_ == Kind::finite; }

  /// Predicate image f([[phi]]) is computable in both families.
  bool has_image() const { return true; }

  const std::set<std::string>& universe() const { return universe_; }

  bool contains(const Label& a) const {
    if (is_integers()) return a.is_int();
    return a.is_sym() && universe_.count(a.sym()) > 0;
  }

  /// Throws domain_error if the label is outside the universe.
  void check_label(const Label& a) const;

  friend bool operator==(const Theory& x, const Theory& y) {
    return x.kind_ == y.kind_ && x.universe_ == y.universe_;
  }
  friend bool operator!=(const Theory& x, const Theory& y) { return !(x == y); }

  std::string str() const;

private:
  Theory(Kind k, std::set<std::string> u) : kind_(k), universe_(std::move(u)) {}
  Kind kind_;
  std::set<std::string> universe_;
};

// ---------------------------------------------------------------------------
// Predicates: the Boolean closure of the theory atoms.
// Integer atoms: congruence n = s (mod m) and inclusive ranges with open
// sides. Finite atoms: membership in an explicit symbol set. Atoms of the
// wrong kind evaluate to false rather than failing, so predicates over mixed
// universes (used by variable tree automata) stay total.
// ---------------------------------------------------------------------------

class Predicate {
public:
  enum class Op { top, bottom, cong, range, in_set, neg, conj, disj };

  Predicate() : node_(top().node_) {}

  static Predicate top();
  static Predicate bottom();
  /// n = s (mod m); requires m >= 1.
  static Predicate cong(std::int64_t m, std::int64_t s);
  /// multiples of d; requires d >= 1.
  static Predicate div(std::int64_t d) { return cong(d, 0); }
  /// lo <= n <= hi, either side may be absent.
  static Predicate range(std::optional<std::int64_t> lo, std::optional<std::int64_t> hi);
  static Predicate eq(std::int64_t c) { return range(c, c); }
  static Predicate in_set(std::set<std::string> syms);
  static Predicate in_label(const Label& a);

  // Light simplification only (units and double negation); everything else
  // is left to the satisfiability procedure.
  static Predicate negate(const Predicate& p);
  static Predicate conj(const Predicate& p, const Predicate& q);
  static Predicate disj(const Predicate& p, const Predicate& q);
  static Predicate conj_all(const std::vector<Predicate>& ps);
  static Predicate disj_all(const std::vector<Predicate>& ps);

  Op op() const;
  bool is_top() const { return op() == Op::top; }
  bool is_bottom() const { return op() == Op::bottom; }

  /// Canonical textual form; doubles as the structural identity key.
  const std::string& key() const;

  friend bool operator==(const Predicate& p, const Predicate& q) {
    return p.node_ == q.node_ || p.key() == q.key();
  }
  friend bool operator!=(const Predicate& p, const Predicate& q) { return !(p == q); }
  friend bool operator<(const Predicate& p, const Predicate& q) { return p.key() < q.key(); }

  struct Node;
  const Node& node() const { return *node_; }

private:
  explicit Predicate(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
  std::shared_ptr<const Node> node_;
};

bool eval_pred(const Predicate& phi, const Label& a);

/// Decides emptiness of [[phi]] within the theory; returns a witness label
/// when nonempty. The witness is the smallest-magnitude label of the scan
/// window, ties broken toward the nonnegative one.
std::optional<Label> satisfiable(const Theory& th, const Predicate& phi);

/// The integer scan window [m - L, M + L] used by satisfiable: L is the lcm
/// of all congruence moduli in phi, m/M the least/greatest interval endpoint
/// (defaulting to -4L/+4L). Definable sets are L-periodic outside [m, M], so
/// the window decides emptiness.
std::pair<std::int64_t, std::int64_t> sat_scan_window(const Predicate& phi);

/// Draws a satisfying label with the given generator, or nullopt when empty.
std::optional<Label> sample_label(const Theory& th, const Predicate& phi, std::mt19937& rng);

/// All labels of a finite theory satisfying phi.
std::vector<Label> finite_extent(const Theory& th, const Predicate& phi);

struct Minterm {
  Predicate pred;
  std::vector<bool> signs; // sign of guards[i] in this minterm
};

/// All satisfiable full sign-assignment conjunctions over the guard list.
/// The result partitions the universe.
std::vector<Minterm> minterms_signed(const Theory& th, const std::vector<Predicate>& guards);
std::vector<Predicate> minterms(const Theory& th, const std::vector<Predicate>& guards);

// ---------------------------------------------------------------------------
// Unary partial label functions, closed under composition, predicate
// preimage, and predicate image:
//   - affine maps n -> (p n + q)/r over the integers, restricted to an
//     explicit congruence domain (composition needs the restriction to stay
//     pointwise-exact),
//   - constants with an integer-side domain restriction,
//   - explicit partial maps out of a finite universe.
// ---------------------------------------------------------------------------

/// Congruence-class domain restriction for integer-input functions.
struct Dom {
  enum class K { all, cong, empty };
  K k = K::all;
  std::int64_t m = 1, s = 0;

  static Dom all() { return {}; }
  static Dom empty() { return {K::empty, 1, 0}; }
  static Dom residue(std::int64_t m, std::int64_t s);

  friend bool operator==(const Dom& a, const Dom& b) {
    if (a.k != b.k) return false;
    if (a.k != K::cong) return true;
    return a.m == b.m && a.s == b.s;
  }
};

/// Intersection of two congruence-class domains (CRT).
Dom dom_intersect(const Dom& a, const Dom& b);
/// Solutions of p*n = c (mod m) as a domain.
Dom solve_congruence(std::int64_t p, std::int64_t c, std::int64_t m);
Predicate dom_pred(const Dom& d);

class FnTerm {
public:
  struct Affine {
    std::int64_t p = 1, q = 0, r = 1; // n -> (p n + q)/r, defined iff r | p n + q
    Dom dom;
  };
  struct Const {
    Label value;
    Dom dom; // integer-input restriction
  };
  struct Map {
    std::map<std::string, Label> entries; // finite-input partial map
  };

  FnTerm() : FnTerm(identity_int()) {}

  static FnTerm identity_int() { return FnTerm(Affine{1, 0, 1, Dom::all()}); }
  static FnTerm identity(const Theory& th);
  static FnTerm affine(std::int64_t p, std::int64_t q, std::int64_t r,
                       Dom dom = Dom::all());
  /// Constant function over an integer input universe.
  static FnTerm constant(const Label& v, Dom dom = Dom::all());
  /// Constant function over a finite input universe.
  static FnTerm constant_finite(const Theory& in_th, const Label& v);
  static FnTerm map(std::map<std::string, Label> entries) { return FnTerm(Map{std::move(entries)}); }
  /// Nowhere-defined integer-input function.
  static FnTerm never() { return FnTerm(Const{Label(std::int64_t{0}), Dom::empty()}); }

  bool is_affine() const { return std::holds_alternative<Affine>(form_); }
  bool is_const() const { return std::holds_alternative<Const>(form_); }
  bool is_map() const { return std::holds_alternative<Map>(form_); }
  const Affine& affine_form() const { return std::get<Affine>(form_); }
  const Const& const_form() const { return std::get<Const>(form_); }
  const Map& map_form() const { return std::get<Map>(form_); }

  /// True when the function is the identity of the given theory.
  bool is_identity(const Theory& th) const;
  /// The constant value when the function is constant on its whole input
  /// theory (used by the alphabetic checks).
  std::optional<Label> constant_value(const Theory& in_th) const;

  const std::string& key() const;
  friend bool operator==(const FnTerm& f, const FnTerm& g) { return f.key() == g.key(); }
  friend bool operator!=(const FnTerm& f, const FnTerm& g) { return !(f == g); }

private:
  explicit FnTerm(std::variant<Affine, Const, Map> f) : form_(std::move(f)) {}
  std::variant<Affine, Const, Map> form_;
  mutable std::string key_;
};

std::optional<Label> apply_fn(const FnTerm& f, const Label& a);

/// a -> g(f(a)); undefinedness propagates (Const does not absorb an
/// undefined left factor).
FnTerm compose_fn(const FnTerm& f, const FnTerm& g);

/// [[result]] = { a : f defined at a and psi(f(a)) }, over f's input theory.
Predicate preimage(const FnTerm& f, const Predicate& psi);

/// [[result]] = f([[phi]] restricted to f's domain); in_th is the input
/// theory (needed to decide emptiness for constant functions).
Predicate image(const Theory& in_th, const FnTerm& f, const Predicate& phi);

/// Validates that f maps in_th into out_th; throws type_error otherwise.
void check_fn(const FnTerm& f, const Theory& in_th, const Theory& out_th);

} // namespace symta

#endif
