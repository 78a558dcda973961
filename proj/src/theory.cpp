#include "symta/theory.hpp"

#include <algorithm>
#include <cassert>
#include <numeric>
#include <sstream>

namespace symta {

namespace {

// Window sizes beyond this indicate runaway moduli from repeated
// composition; the procedure refuses instead of thrashing.
constexpr std::int64_t kMaxWindow = 40'000'000;
constexpr std::int64_t kDefaultSpan = 4; // K0 in the window rule

std::int64_t checked_mul(std::int64_t a, std::int64_t b) {
  std::int64_t out = 0;
  if (__builtin_mul_overflow(a, b, &out))
    throw capability_error("integer overflow while combining moduli");
  return out;
}

std::int64_t lcm64(std::int64_t a, std::int64_t b) {
  std::int64_t g = std::gcd(a, b);
  return checked_mul(a / g, b);
}

std::int64_t mod_norm(std::int64_t x, std::int64_t m) {
  std::int64_t r = x % m;
  return r < 0 ? r + m : r;
}

// Extended gcd: returns g and x with p*x = g (mod m), for p,m >= 0.
std::int64_t inverse_mod(std::int64_t p, std::int64_t m) {
  std::int64_t r0 = m, r1 = p, x0 = 0, x1 = 1;
  while (r1 != 0) {
    std::int64_t q = r0 / r1;
    std::int64_t r2 = r0 - q * r1;
    std::int64_t x2 = x0 - q * x1;
    r0 = r1; r1 = r2; x0 = x1; x1 = x2;
  }
  return mod_norm(x0, m);
}

std::int64_t floor_div(std::int64_t a, std::int64_t b) {
  std::int64_t q = a / b, r = a % b;
  return (r != 0 && ((r < 0) != (b < 0))) ? q - 1 : q;
}

std::int64_t ceil_div(std::int64_t a, std::int64_t b) {
  return -floor_div(-a, b);
}

} // namespace

void Theory::check_label(const Label& a) const {
  if (!contains(a))
    throw domain_error("label " + a.str() + " is not in the universe " + str());
}

std::string Theory::str() const {
  if (is_integers()) return "int";
  std::string out = "(finite";
  for (const auto& s : universe_) out += " " + s;
  return out + ")";
}

// ---------------------------------------------------------------------------
// Predicate nodes
// ---------------------------------------------------------------------------

struct Predicate::Node {
  Op op = Op::top;
  // cong
  std::int64_t m = 1, s = 0;
  // range
  std::optional<std::int64_t> lo, hi;
  // in_set
  std::set<std::string> syms;
  // children
  std::shared_ptr<const Node> a, b;
  mutable std::string key;
};

namespace {

using PredNode = Predicate::Node;
using PredPtr = std::shared_ptr<const PredNode>;

PredPtr make_node(PredNode n) { return std::make_shared<const PredNode>(std::move(n)); }

const PredPtr& top_node() {
  static const PredPtr n = [] { PredNode t; t.op = Predicate::Op::top; return make_node(std::move(t)); }();
  return n;
}
const PredPtr& bottom_node() {
  static const PredPtr n = [] { PredNode t; t.op = Predicate::Op::bottom; return make_node(std::move(t)); }();
  return n;
}

void render(const PredNode& n, std::string& out) {
  switch (n.op) {
    case Predicate::Op::top: out += "true"; return;
    case Predicate::Op::bottom: out += "false"; return;
    case Predicate::Op::cong:
      if (n.s == 0) {
        out += "(div " + std::to_string(n.m) + ")";
      } else {
        out += "(cong " + std::to_string(n.m) + " " + std::to_string(n.s) + ")";
      }
      return;
    case Predicate::Op::range:
      if (n.lo && n.hi && *n.lo == *n.hi) {
        out += "(eq " + std::to_string(*n.lo) + ")";
      } else {
        out += "(range ";
        out += n.lo ? std::to_string(*n.lo) : "_";
        out += " ";
        out += n.hi ? std::to_string(*n.hi) : "_";
        out += ")";
      }
      return;
    case Predicate::Op::in_set: {
      out += "(in";
      for (const auto& s : n.syms) out += " " + s;
      out += ")";
      return;
    }
    case Predicate::Op::neg:
      out += "(not ";
      render(*n.a, out);
      out += ")";
      return;
    case Predicate::Op::conj:
    case Predicate::Op::disj:
      out += n.op == Predicate::Op::conj ? "(and " : "(or ";
      render(*n.a, out);
      out += " ";
      render(*n.b, out);
      out += ")";
      return;
  }
}

} // namespace

Predicate Predicate::top() { return Predicate(top_node()); }
Predicate Predicate::bottom() { return Predicate(bottom_node()); }

Predicate Predicate::cong(std::int64_t m, std::int64_t s) {
  if (m < 1) throw format_error("congruence modulus must be >= 1");
  if (m == 1) return top();
  PredNode n;
  n.op = Op::cong;
  n.m = m;
  n.s = mod_norm(s, m);
  return Predicate(make_node(std::move(n)));
}

Predicate Predicate::range(std::optional<std::int64_t> lo, std::optional<std::int64_t> hi) {
  if (lo && hi && *lo > *hi) return bottom();
  if (!lo && !hi) return top();
  PredNode n;
  n.op = Op::range;
  n.lo = lo;
  n.hi = hi;
  return Predicate(make_node(std::move(n)));
}

Predicate Predicate::in_set(std::set<std::string> syms) {
  if (syms.empty()) return bottom();
  PredNode n;
  n.op = Op::in_set;
  n.syms = std::move(syms);
  return Predicate(make_node(std::move(n)));
}

Predicate Predicate::in_label(const Label& a) {
  if (a.is_sym()) return in_set({a.sym()});
  return eq(a.num());
}

Predicate Predicate::negate(const Predicate& p) {
  switch (p.op()) {
    case Op::top: return bottom();
    case Op::bottom: return top();
    case Op::neg: return Predicate(p.node_->a);
    default: {
      PredNode n;
  n.op = Op::neg;
      n.a = p.node_;
      return Predicate(make_node(std::move(n)));
    }
  }
}

Predicate Predicate::conj(const Predicate& p, const Predicate& q) {
  if (p.is_bottom() || q.is_bottom()) return bottom();
  if (p.is_top()) return q;
  if (q.is_top()) return p;
  PredNode n;
  n.op = Op::conj;
  n.a = p.node_;
  n.b = q.node_;
  return Predicate(make_node(std::move(n)));
}

Predicate Predicate::disj(const Predicate& p, const Predicate& q) {
  if (p.is_top() || q.is_top()) return top();
  if (p.is_bottom()) return q;
  if (q.is_bottom()) return p;
  PredNode n;
  n.op = Op::disj;
  n.a = p.node_;
  n.b = q.node_;
  return Predicate(make_node(std::move(n)));
}

Predicate Predicate::conj_all(const std::vector<Predicate>& ps) {
  Predicate out = top();
  for (const auto& p : ps) out = conj(out, p);
  return out;
}

Predicate Predicate::disj_all(const std::vector<Predicate>& ps) {
  Predicate out = bottom();
  for (const auto& p : ps) out = disj(out, p);
  return out;
}

Predicate::Op Predicate::op() const { return node_->op; }

const std::string& Predicate::key() const {
  if (node_->key.empty()) render(*node_, node_->key);
  return node_->key;
}

namespace {

bool eval_node(const PredNode& n, const Label& a) {
  switch (n.op) {
    case Predicate::Op::top: return true;
    case Predicate::Op::bottom: return false;
    case Predicate::Op::cong: return a.is_int() && mod_norm(a.num(), n.m) == n.s;
    case Predicate::Op::range:
      if (!a.is_int()) return false;
      if (n.lo && a.num() < *n.lo) return false;
      if (n.hi && a.num() > *n.hi) return false;
      return true;
    case Predicate::Op::in_set: return a.is_sym() && n.syms.count(a.sym()) > 0;
    case Predicate::Op::neg: return !eval_node(*n.a, a);
    case Predicate::Op::conj: return eval_node(*n.a, a) && eval_node(*n.b, a);
    case Predicate::Op::disj: return eval_node(*n.a, a) || eval_node(*n.b, a);
  }
  return false;
}

// Collects the data the scan window is built from.
struct WindowInfo {
  std::int64_t lcm = 1;
  std::optional<std::int64_t> min_ep, max_ep;
};

void collect_window(const PredNode& n, WindowInfo& w) {
  switch (n.op) {
    case Predicate::Op::cong:
      w.lcm = lcm64(w.lcm, n.m);
      return;
    case Predicate::Op::range: {
      for (const auto& ep : {n.lo, n.hi}) {
        if (!ep) continue;
        if (!w.min_ep || *ep < *w.min_ep) w.min_ep = *ep;
        if (!w.max_ep || *ep > *w.max_ep) w.max_ep = *ep;
      }
      return;
    }
    case Predicate::Op::neg: collect_window(*n.a, w); return;
    case Predicate::Op::conj:
    case Predicate::Op::disj:
      collect_window(*n.a, w);
      collect_window(*n.b, w);
      return;
    default: return;
  }
}

// Every set definable from the atoms is L-periodic outside the mentioned
// endpoints, so [m - L, M + L] is a complete scan window for emptiness.
std::pair<std::int64_t, std::int64_t> scan_window(const Predicate& phi) {
  WindowInfo w;
  collect_window(phi.node(), w);
  std::int64_t L = w.lcm;
  std::int64_t lo = w.min_ep ? *w.min_ep : -checked_mul(L, kDefaultSpan);
  std::int64_t hi = w.max_ep ? *w.max_ep : checked_mul(L, kDefaultSpan);
  lo -= L;
  hi += L;
  if (hi - lo > kMaxWindow)
    throw capability_error("satisfiability scan window too large (lcm " +
                           std::to_string(L) + ")");
  return {lo, hi};
}

} // namespace

bool eval_pred(const Predicate& phi, const Label& a) {
  return eval_node(phi.node(), a);
}

std::pair<std::int64_t, std::int64_t> sat_scan_window(const Predicate& phi) {
  return scan_window(phi);
}

std::optional<Label> satisfiable(const Theory& th, const Predicate& phi) {
  if (th.is_finite()) {
    for (const auto& s : th.universe()) {
      Label a(s);
      if (eval_node(phi.node(), a)) return a;
    }
    return std::nullopt;
  }
  auto [lo, hi] = scan_window(phi);
  std::int64_t span = std::max(std::llabs(lo), std::llabs(hi));
  for (std::int64_t d = 0; d <= span; ++d) {
    if (d >= lo && d <= hi) {
      Label a(d);
      if (eval_node(phi.node(), a)) return a;
    }
    if (d > 0 && -d >= lo && -d <= hi) {
      Label a(-d);
      if (eval_node(phi.node(), a)) return a;
    }
  }
  return std::nullopt;
}

std::optional<Label> sample_label(const Theory& th, const Predicate& phi, std::mt19937& rng) {
  if (th.is_finite()) {
    std::vector<Label> hits = finite_extent(th, phi);
    if (hits.empty()) return std::nullopt;
    std::uniform_int_distribution<std::size_t> pick(0, hits.size() - 1);
    return hits[pick(rng)];
  }
  auto [lo, hi] = scan_window(phi);
  std::uniform_int_distribution<std::int64_t> pick(lo, hi);
  for (int attempt = 0; attempt < 128; ++attempt) {
    Label a(pick(rng));
    if (eval_node(phi.node(), a)) return a;
  }
  return satisfiable(th, phi);
}

std::vector<Label> finite_extent(const Theory& th, const Predicate& phi) {
  if (!th.is_finite()) throw type_error("finite_extent needs a finite theory");
  std::vector<Label> out;
  for (const auto& s : th.universe()) {
    Label a(s);
    if (eval_node(phi.node(), a)) out.push_back(a);
  }
  return out;
}

std::vector<Minterm> minterms_signed(const Theory& th, const std::vector<Predicate>& guards) {
  std::vector<Minterm> out;
  std::vector<bool> signs(guards.size(), false);
  // Depth-first over sign vectors, pruning unsatisfiable prefixes.
  auto rec = [&](auto&& self, std::size_t i, const Predicate& acc) -> void {
    if (!satisfiable(th, acc)) return;
    if (i == guards.size()) {
      out.push_back({acc, signs});
      return;
    }
    signs[i] = true;
    self(self, i + 1, Predicate::conj(acc, guards[i]));
    signs[i] = false;
    self(self, i + 1, Predicate::conj(acc, Predicate::negate(guards[i])));
  };
  rec(rec, 0, Predicate::top());
  return out;
}

std::vector<Predicate> minterms(const Theory& th, const std::vector<Predicate>& guards) {
  std::vector<Predicate> out;
  for (auto& mt : minterms_signed(th, guards)) out.push_back(mt.pred);
  return out;
}

// ---------------------------------------------------------------------------
// Domains
// ---------------------------------------------------------------------------

Dom Dom::residue(std::int64_t m, std::int64_t s) {
  if (m < 1) throw format_error("domain modulus must be >= 1");
  if (m == 1) return all();
  return {K::cong, m, mod_norm(s, m)};
}

Dom solve_congruence(std::int64_t p, std::int64_t c, std::int64_t m) {
  if (m < 1) throw format_error("congruence modulus must be >= 1");
  std::int64_t pm = mod_norm(p, m), cm = mod_norm(c, m);
  std::int64_t g = pm == 0 ? m : std::gcd(pm, m);
  if (cm % g != 0) return Dom::empty();
  if (pm == 0) return Dom::all(); // 0 = c (mod m) holds for all n when g | c
  std::int64_t m2 = m / g;
  std::int64_t inv = inverse_mod(pm / g, m2);
  std::int64_t s = mod_norm((cm / g) % m2 * inv, m2);
  return Dom::residue(m2, s);
}

Dom dom_intersect(const Dom& a, const Dom& b) {
  if (a.k == Dom::K::empty || b.k == Dom::K::empty) return Dom::empty();
  if (a.k == Dom::K::all) return b;
  if (b.k == Dom::K::all) return a;
  std::int64_t g = std::gcd(a.m, b.m);
  if (mod_norm(a.s - b.s, g) != 0) return Dom::empty();
  std::int64_t l = lcm64(a.m, b.m);
  // x = a.s (mod a.m), x = b.s (mod b.m): step from a.s by multiples of a.m.
  Dom t = solve_congruence(a.m, b.s - a.s, b.m);
  assert(t.k != Dom::K::empty);
  std::int64_t step = t.k == Dom::K::all ? 0 : t.s;
  std::int64_t x = (std::int64_t)(((__int128)a.m * step + a.s) % l);
  return Dom::residue(l, mod_norm(x, l));
}

Predicate dom_pred(const Dom& d) {
  switch (d.k) {
    case Dom::K::all: return Predicate::top();
    case Dom::K::empty: return Predicate::bottom();
    case Dom::K::cong: return Predicate::cong(d.m, d.s);
  }
  return Predicate::top();
}

namespace {

bool dom_holds(const Dom& d, std::int64_t n) {
  switch (d.k) {
    case Dom::K::all: return true;
    case Dom::K::empty: return false;
    case Dom::K::cong: return mod_norm(n, d.m) == d.s;
  }
  return false;
}

} // namespace

// ---------------------------------------------------------------------------
// Function terms
// ---------------------------------------------------------------------------

FnTerm FnTerm::identity(const Theory& th) {
  if (th.is_integers()) return identity_int();
  std::map<std::string, Label> entries;
  for (const auto& s : th.universe()) entries.emplace(s, Label(s));
  return map(std::move(entries));
}

FnTerm FnTerm::affine(std::int64_t p, std::int64_t q, std::int64_t r, Dom dom) {
  if (r < 1) throw format_error("affine divisor must be >= 1");
  return FnTerm(Affine{p, q, r, dom});
}

FnTerm FnTerm::constant(const Label& v, Dom dom) {
  if (v.is_int()) return FnTerm(Affine{0, v.num(), 1, dom});
  return FnTerm(Const{v, dom});
}

FnTerm FnTerm::constant_finite(const Theory& in_th, const Label& v) {
  std::map<std::string, Label> entries;
  for (const auto& s : in_th.universe()) entries.emplace(s, v);
  return map(std::move(entries));
}

bool FnTerm::is_identity(const Theory& th) const {
  if (th.is_integers()) {
    if (!is_affine()) return false;
    const Affine& f = affine_form();
    return f.p == 1 && f.q == 0 && f.r == 1 && f.dom.k == Dom::K::all;
  }
  if (!is_map()) return false;
  const auto& entries = map_form().entries;
  if (entries.size() != th.universe().size()) return false;
  for (const auto& [k, v] : entries)
    if (!v.is_sym() || v.sym() != k || !th.universe().count(k)) return false;
  return true;
}

std::optional<Label> FnTerm::constant_value(const Theory& in_th) const {
  if (is_affine()) {
    const Affine& f = affine_form();
    if (f.p == 0 && f.r == 1 && f.dom.k == Dom::K::all) return Label(f.q);
    return std::nullopt;
  }
  if (is_const()) {
    const Const& f = const_form();
    if (f.dom.k == Dom::K::all) return f.value;
    return std::nullopt;
  }
  const auto& entries = map_form().entries;
  if (in_th.is_finite()) {
    std::optional<Label> v;
    for (const auto& s : in_th.universe()) {
      auto it = entries.find(s);
      if (it == entries.end()) return std::nullopt;
      if (v && !(*v == it->second)) return std::nullopt;
      v = it->second;
    }
    return v;
  }
  return std::nullopt;
}

const std::string& FnTerm::key() const {
  if (!key_.empty()) return key_;
  std::string out;
  auto dom_suffix = [](const Dom& d) -> std::string {
    switch (d.k) {
      case Dom::K::all: return "";
      case Dom::K::cong: return " " + std::to_string(d.m) + " " + std::to_string(d.s);
      case Dom::K::empty: return " never";
    }
    return "";
  };
  if (is_affine()) {
    const Affine& f = affine_form();
    if (f.dom.k == Dom::K::empty) {
      out = "never";
    } else if (f.p == 1 && f.q == 0 && f.r == 1 && f.dom.k == Dom::K::all) {
      out = "id";
    } else if (f.p == 0 && f.r == 1) {
      out = "(const " + std::to_string(f.q) + dom_suffix(f.dom) + ")";
    } else {
      out = "(affine " + std::to_string(f.p) + " " + std::to_string(f.q) + " " +
            std::to_string(f.r) + dom_suffix(f.dom) + ")";
    }
  } else if (is_const()) {
    const Const& f = const_form();
    if (f.dom.k == Dom::K::empty) {
      out = "never";
    } else {
      out = "(const " + f.value.str() + dom_suffix(f.dom) + ")";
    }
  } else {
    out = "(map";
    for (const auto& [k, v] : map_form().entries) out += " (" + k + " " + v.str() + ")";
    out += ")";
  }
  key_ = out;
  return key_;
}

std::optional<Label> apply_fn(const FnTerm& f, const Label& a) {
  if (f.is_map()) {
    if (!a.is_sym()) return std::nullopt;
    auto it = f.map_form().entries.find(a.sym());
    if (it == f.map_form().entries.end()) return std::nullopt;
    return it->second;
  }
  if (!a.is_int()) return std::nullopt;
  std::int64_t n = a.num();
  if (f.is_const()) {
    if (!dom_holds(f.const_form().dom, n)) return std::nullopt;
    return f.const_form().value;
  }
  const FnTerm::Affine& aff = f.affine_form();
  if (!dom_holds(aff.dom, n)) return std::nullopt;
  std::int64_t t = aff.p * n + aff.q;
  if (t % aff.r != 0) return std::nullopt;
  return Label(t / aff.r);
}

namespace {

// Domain on which an affine form is defined: its declared domain restricted
// by r | p n + q.
Dom affine_def_dom(const FnTerm::Affine& f) {
  return dom_intersect(f.dom, solve_congruence(f.p, -f.q, f.r));
}

// Pulls a codomain congruence-class restriction back through an affine map:
// { n : f defined at n and f(n) = s (mod m) }.
Dom affine_pull_dom(const FnTerm::Affine& f, const Dom& d) {
  switch (d.k) {
    case Dom::K::all: return affine_def_dom(f);
    case Dom::K::empty: return Dom::empty();
    case Dom::K::cong: {
      // (p n + q)/r = s (mod m)  <=>  p n + q = r s (mod r m); implies r | p n + q.
      Dom sol = solve_congruence(f.p, checked_mul(f.r, d.s) - f.q, checked_mul(f.r, d.m));
      return dom_intersect(f.dom, sol);
    }
  }
  return Dom::empty();
}

} // namespace

FnTerm compose_fn(const FnTerm& f, const FnTerm& g) {
  // Finite-input left factor: compose pointwise.
  if (f.is_map()) {
    std::map<std::string, Label> out;
    for (const auto& [k, v] : f.map_form().entries) {
      if (auto w = apply_fn(g, v)) out.emplace(k, *w);
    }
    return FnTerm::map(std::move(out));
  }
  // Constant left factor: evaluate g once, keep f's domain.
  if (f.is_const()) {
    const FnTerm::Const& c = f.const_form();
    if (c.dom.k == Dom::K::empty) return FnTerm::never();
    auto w = apply_fn(g, c.value);
    if (!w) return FnTerm::constant(Label(std::int64_t{0}), Dom::empty());
    return FnTerm::constant(*w, c.dom);
  }
  const FnTerm::Affine& a = f.affine_form();
  if (a.p == 0) {
    // Constant-valued affine: same treatment as Const.
    if (a.q % a.r != 0) return FnTerm::never();
    Dom d = affine_def_dom(a);
    if (d.k == Dom::K::empty) return FnTerm::never();
    auto w = apply_fn(g, Label(a.q / a.r));
    if (!w) return FnTerm::constant(Label(std::int64_t{0}), Dom::empty());
    return FnTerm::constant(*w, d);
  }
  if (g.is_map()) throw type_error("cannot feed an integer-valued function into a finite map");
  if (g.is_const()) {
    const FnTerm::Const& c = g.const_form();
    Dom d = affine_pull_dom(a, c.dom);
    if (d.k == Dom::K::empty) return FnTerm::never();
    return FnTerm::constant(c.value, d);
  }
  const FnTerm::Affine& b = g.affine_form();
  Dom d = affine_pull_dom(a, b.dom);
  if (d.k == Dom::K::empty) return FnTerm::never();
  // (p2(p1 n + q1)/r1 + q2)/r2 = (p2 p1 n + p2 q1 + q2 r1)/(r1 r2); the fold
  // is exact on d because d forces r1 | p1 n + q1.
  std::int64_t p = checked_mul(b.p, a.p);
  std::int64_t q = checked_mul(b.p, a.q) + checked_mul(b.q, a.r);
  std::int64_t r = checked_mul(a.r, b.r);
  return FnTerm::affine(p, q, r, d);
}

namespace {

// Pure preimage of one integer atom under an affine map, valid on the
// definedness domain (which the caller conjoins separately).
Predicate affine_pre_node(const FnTerm::Affine& f, const PredNode& n) {
  switch (n.op) {
    case Predicate::Op::top: return Predicate::top();
    case Predicate::Op::bottom: return Predicate::bottom();
    case Predicate::Op::in_set: return Predicate::bottom(); // affine output is never a symbol
    case Predicate::Op::cong:
      return dom_pred(solve_congruence(f.p, checked_mul(f.r, n.s) - f.q,
                                       checked_mul(f.r, n.m)));
    case Predicate::Op::range: {
      if (f.p == 0) {
        // Value is q/r wherever defined; definedness is handled outside.
        if (f.q % f.r != 0) return Predicate::top();
        std::int64_t c = f.q / f.r;
        bool ok = (!n.lo || c >= *n.lo) && (!n.hi || c <= *n.hi);
        return ok ? Predicate::top() : Predicate::bottom();
      }
      // r lo <= p n + q <= r hi, divided by p with direction flips.
      std::optional<std::int64_t> lo, hi;
      if (f.p > 0) {
        if (n.lo) lo = ceil_div(checked_mul(f.r, *n.lo) - f.q, f.p);
        if (n.hi) hi = floor_div(checked_mul(f.r, *n.hi) - f.q, f.p);
      } else {
        if (n.hi) lo = ceil_div(checked_mul(f.r, *n.hi) - f.q, f.p);
        if (n.lo) hi = floor_div(checked_mul(f.r, *n.lo) - f.q, f.p);
      }
      return Predicate::range(lo, hi);
    }
    case Predicate::Op::neg:
      return Predicate::negate(affine_pre_node(f, *n.a));
    case Predicate::Op::conj:
      return Predicate::conj(affine_pre_node(f, *n.a), affine_pre_node(f, *n.b));
    case Predicate::Op::disj:
      return Predicate::disj(affine_pre_node(f, *n.a), affine_pre_node(f, *n.b));
  }
  return Predicate::bottom();
}

} // namespace

Predicate preimage(const FnTerm& f, const Predicate& psi) {
  if (f.is_map()) {
    std::set<std::string> hits;
    for (const auto& [k, v] : f.map_form().entries)
      if (eval_pred(psi, v)) hits.insert(k);
    return Predicate::in_set(std::move(hits));
  }
  if (f.is_const()) {
    const FnTerm::Const& c = f.const_form();
    if (c.dom.k == Dom::K::empty) return Predicate::bottom();
    return eval_pred(psi, c.value) ? dom_pred(c.dom) : Predicate::bottom();
  }
  const FnTerm::Affine& a = f.affine_form();
  Predicate def = dom_pred(affine_def_dom(a));
  return Predicate::conj(def, affine_pre_node(a, psi.node()));
}

Predicate image(const Theory& in_th, const FnTerm& f, const Predicate& phi) {
  if (!in_th.has_image())
    throw capability_error("theory does not support predicate image");
  if (f.is_map()) {
    std::set<std::string> syms;
    std::vector<Predicate> nums;
    for (const auto& [k, v] : f.map_form().entries) {
      if (!eval_pred(phi, Label(k))) continue;
      if (v.is_sym()) {
        syms.insert(v.sym());
      } else {
        nums.push_back(Predicate::eq(v.num()));
      }
    }
    return Predicate::disj(Predicate::in_set(std::move(syms)), Predicate::disj_all(nums));
  }
  if (f.is_const()) {
    const FnTerm::Const& c = f.const_form();
    Predicate gate = Predicate::conj(phi, dom_pred(c.dom));
    if (!satisfiable(in_th, gate)) return Predicate::bottom();
    return Predicate::in_label(c.value);
  }
  const FnTerm::Affine& a = f.affine_form();
  Predicate restricted = Predicate::conj(phi, dom_pred(a.dom));
  if (a.p == 0) {
    if (a.q % a.r != 0) return Predicate::bottom(); // nowhere defined
    Predicate gate = restricted; // definedness r | q holds everywhere here
    if (!satisfiable(in_th, gate)) return Predicate::bottom();
    return Predicate::eq(a.q / a.r);
  }
  // b is in the image iff the inverse map h(b) = (r b - q)/p is defined at b
  // and h(b) satisfies phi (definedness of f at h(b) is automatic).
  FnTerm h = a.p > 0 ? FnTerm::affine(a.r, -a.q, a.p)
                     : FnTerm::affine(-a.r, a.q, -a.p);
  return preimage(h, restricted);
}

void check_fn(const FnTerm& f, const Theory& in_th, const Theory& out_th) {
  if (f.is_map()) {
    if (!in_th.is_finite())
      throw type_error("map function over a non-finite input theory");
    for (const auto& [k, v] : f.map_form().entries) {
      if (!in_th.universe().count(k))
        throw type_error("map key " + k + " outside the input universe");
      if (!out_th.contains(v))
        throw type_error("map value " + v.str() + " outside the output universe");
    }
    return;
  }
  if (!in_th.is_integers())
    throw type_error("affine/const function over a non-integer input theory");
  if (f.is_const()) {
    if (!out_th.contains(f.const_form().value) && f.const_form().dom.k != Dom::K::empty)
      throw type_error("constant " + f.const_form().value.str() + " outside the output universe");
    return;
  }
  const FnTerm::Affine& a = f.affine_form();
  if (!out_th.is_integers()) {
    // Integer-valued output into a finite universe is only legal when the
    // function is nowhere defined.
    if (!(a.dom.k == Dom::K::empty))
      throw type_error("integer-valued function into a finite output universe");
  }
}

} // namespace symta
