#pragma once

// Universe levels: syntax, well-formedness, the count/adjust/flatten
// normalization procedure, and universe-level substitutions.

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace delam {

// Internal invariant violations. These indicate a kernel bug, not user error.
struct KernelError : std::logic_error {
  explicit KernelError(const std::string& what) : std::logic_error(what) {}
};

// Universe-level expressions. Variables are de Bruijn indices into the
// ambient universe context, innermost (most recently bound) = 0.
// Omega never occurs under Succ or Lub; it only shows up while checking
// universe-polymorphic functions.
class Level {
 public:
  enum class Kind { Zero, Omega, Var, Succ, Lub };

  Level() : Level(zero()) {}

  static Level zero() { return Level(std::make_shared<Node>(Node{Kind::Zero, 0, nullptr, nullptr})); }
  static Level omega() { return Level(std::make_shared<Node>(Node{Kind::Omega, 0, nullptr, nullptr})); }
  static Level var(int index) {
    if (index < 0) throw KernelError("Level::var: negative index");
    return Level(std::make_shared<Node>(Node{Kind::Var, index, nullptr, nullptr}));
  }
  static Level succ(Level l) {
    if (l.is_omega()) throw KernelError("Level::succ: omega under succ");
    return Level(std::make_shared<Node>(Node{Kind::Succ, 0, l.node_, nullptr}));
  }
  static Level lub(Level a, Level b) {
    if (a.is_omega() || b.is_omega()) throw KernelError("Level::lub: omega under lub");
    return Level(std::make_shared<Node>(Node{Kind::Lub, 0, a.node_, b.node_}));
  }
  // The numeral n, i.e. n-fold succ of zero.
  static Level constant(std::uint64_t n) { return plus(n, zero()); }
  static Level plus(std::uint64_t n, Level l) {
    for (std::uint64_t i = 0; i < n; ++i) l = succ(std::move(l));
    return l;
  }

  Kind kind() const { return node_->kind; }
  bool is_omega() const { return kind() == Kind::Omega; }
  bool is_zero() const { return kind() == Kind::Zero; }
  int var_index() const { return node_->index; }
  Level arg() const { return Level(node_->a); }  // Succ payload
  Level lhs() const { return Level(node_->a); }  // Lub left
  Level rhs() const { return Level(node_->b); }  // Lub right

  friend bool operator==(const Level& a, const Level& b) {
    if (a.node_ == b.node_) return true;
    if (a.kind() != b.kind()) return false;
    switch (a.kind()) {
      case Kind::Zero:
      case Kind::Omega: return true;
      case Kind::Var: return a.var_index() == b.var_index();
      case Kind::Succ: return a.arg() == b.arg();
      case Kind::Lub: return a.lhs() == b.lhs() && a.rhs() == b.rhs();
    }
    return false;
  }
  friend bool operator!=(const Level& a, const Level& b) { return !(a == b); }

 private:
  struct Node {
    Kind kind;
    int index;
    std::shared_ptr<const Node> a, b;
  };
  explicit Level(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
  std::shared_ptr<const Node> node_;
};

// Universe context: an ordered list of variable names. Binding is positional;
// names[0] is the outermost variable, so Var(i) refers to
// names[size()-1-i]. Names are for display only and need not be distinct.
struct UnivCtx {
  std::vector<std::string> names;

  UnivCtx() = default;
  explicit UnivCtx(std::vector<std::string> ns) : names(std::move(ns)) {}
  std::size_t size() const { return names.size(); }
  UnivCtx extended(std::size_t n) const {
    UnivCtx r = *this;
    for (std::size_t i = 0; i < n; ++i) r.names.push_back("#l" + std::to_string(r.names.size()));
    return r;
  }
};

// Canonical map representation of a level: the constant part (if kept) plus
// the succ-count per variable. Two maps are equal iff their canonical key
// sequences (constant first, then variables by ascending index) agree.
struct LevelMap {
  std::optional<std::uint64_t> constant;
  std::map<int, std::uint64_t> vars;

  friend bool operator==(const LevelMap&, const LevelMap&) = default;
};

// Substitution for universe levels. entries[i] is the image of Var(i), so
// the vector is positional over the source context, innermost first.
struct UnivSubst {
  std::vector<Level> entries;

  UnivSubst() = default;
  explicit UnivSubst(std::vector<Level> es) : entries(std::move(es)) {}
  std::size_t size() const { return entries.size(); }
};

inline bool wf_level(const UnivCtx& ctx, const Level& l) {
  switch (l.kind()) {
    case Level::Kind::Zero: return true;
    case Level::Kind::Omega: return false;
    case Level::Kind::Var: return l.var_index() >= 0 && static_cast<std::size_t>(l.var_index()) < ctx.size();
    case Level::Kind::Succ: return wf_level(ctx, l.arg());
    case Level::Kind::Lub: return wf_level(ctx, l.lhs()) && wf_level(ctx, l.rhs());
  }
  return false;
}

namespace detail {
inline LevelMap merge_max(LevelMap a, const LevelMap& b) {
  if (b.constant) {
    a.constant = a.constant ? std::max(*a.constant, *b.constant) : *b.constant;
  }
  for (const auto& [v, n] : b.vars) {
    auto it = a.vars.find(v);
    if (it == a.vars.end()) a.vars.emplace(v, n);
    else it->second = std::max(it->second, n);
  }
  return a;
}
}  // namespace detail

// Counts removable succs per variable and for the constant part.
// count always populates the constant key; adjust may drop it.
inline LevelMap count(const Level& l) {
  switch (l.kind()) {
    case Level::Kind::Zero: return LevelMap{0, {}};
    case Level::Kind::Var: return LevelMap{0, {{l.var_index(), 0}}};
    case Level::Kind::Succ: {
      LevelMap m = count(l.arg());
      *m.constant += 1;
      for (auto& [v, n] : m.vars) n += 1;
      return m;
    }
    case Level::Kind::Lub: return detail::merge_max(count(l.lhs()), count(l.rhs()));
    case Level::Kind::Omega: throw KernelError("count: omega has no map representation");
  }
  throw KernelError("count: unreachable");
}

// Drops the constant entry when some variable entry dominates it.
inline LevelMap adjust(LevelMap m) {
  if (!m.constant || m.vars.empty()) return m;
  std::uint64_t max_var = 0;
  for (const auto& [v, n] : m.vars) max_var = std::max(max_var, n);
  if (*m.constant <= max_var) m.constant.reset();
  return m;
}

// Unique readback of a map: the constant (as a numeral) first, then n + var
// entries following the order of the universe context, all lubs
// right-associated. A zero offset renders as the bare variable.
inline Level flatten(const UnivCtx& ctx, const LevelMap& m) {
  (void)ctx;  // the order of ctx is descending de Bruijn index
  if (!m.constant && m.vars.empty()) throw KernelError("flatten: empty map");
  std::vector<Level> parts;
  if (m.constant) parts.push_back(Level::constant(*m.constant));
  for (auto it = m.vars.rbegin(); it != m.vars.rend(); ++it)
    parts.push_back(Level::plus(it->second, Level::var(it->first)));
  Level acc = parts.back();
  for (std::size_t i = parts.size() - 1; i-- > 0;) acc = Level::lub(parts[i], acc);
  return acc;
}

inline Level normalize(const UnivCtx& ctx, const Level& l) {
  if (l.is_omega()) throw KernelError("normalize: omega is not a well-formed level");
  return flatten(ctx, adjust(count(l)));
}

// Decides the equational theory. Omega is equivalent only to itself.
inline bool level_equiv(const UnivCtx& ctx, const Level& a, const Level& b) {
  (void)ctx;
  if (a.is_omega() || b.is_omega()) return a.is_omega() && b.is_omega();
  return adjust(count(a)) == adjust(count(b));
}

// l <= l'  iff  l' ~ l \/ l'
inline bool level_leq(const UnivCtx& ctx, const Level& a, const Level& b) {
  if (a.is_omega() || b.is_omega()) throw KernelError("level_leq: omega does not participate in the order");
  return level_equiv(ctx, b, Level::lub(a, b));
}

// l < l'  iff  l' ~ (1 + l) \/ l'
inline bool level_lt(const UnivCtx& ctx, const Level& a, const Level& b) {
  if (a.is_omega() || b.is_omega()) throw KernelError("level_lt: omega does not participate in the order");
  return level_equiv(ctx, b, Level::lub(Level::succ(a), b));
}

// Shifts variables >= cutoff by amount.
inline Level ushift_level(const Level& l, int amount, int cutoff = 0) {
  if (amount == 0) return l;
  switch (l.kind()) {
    case Level::Kind::Zero:
    case Level::Kind::Omega: return l;
    case Level::Kind::Var:
      return l.var_index() < cutoff ? l : Level::var(l.var_index() + amount);
    case Level::Kind::Succ: return Level::succ(ushift_level(l.arg(), amount, cutoff));
    case Level::Kind::Lub:
      return Level::lub(ushift_level(l.lhs(), amount, cutoff), ushift_level(l.rhs(), amount, cutoff));
  }
  throw KernelError("ushift_level: unreachable");
}

inline Level usubst_apply(const Level& l, const UnivSubst& phi) {
  switch (l.kind()) {
    case Level::Kind::Zero: return l;
    case Level::Kind::Omega: return l;
    case Level::Kind::Var: {
      std::size_t i = static_cast<std::size_t>(l.var_index());
      if (i >= phi.entries.size()) throw KernelError("usubst_apply: variable out of range of substitution");
      return phi.entries[i];
    }
    case Level::Kind::Succ: return Level::succ(usubst_apply(l.arg(), phi));
    case Level::Kind::Lub:
      return Level::lub(usubst_apply(l.lhs(), phi), usubst_apply(l.rhs(), phi));
  }
  throw KernelError("usubst_apply: unreachable");
}

// l[a][b] = l[compose(a, b)]
inline UnivSubst usubst_compose(const UnivSubst& a, const UnivSubst& b) {
  UnivSubst r;
  r.entries.reserve(a.entries.size());
  for (const Level& l : a.entries) r.entries.push_back(usubst_apply(l, b));
  return r;
}

inline UnivSubst usubst_id(std::size_t n) {
  UnivSubst r;
  r.entries.reserve(n);
  for (std::size_t i = 0; i < n; ++i) r.entries.push_back(Level::var(static_cast<int>(i)));
  return r;
}

inline UnivSubst usubst_id(const UnivCtx& ctx) { return usubst_id(ctx.size()); }

inline bool wf_usubst(const UnivCtx& target, const UnivSubst& phi, const UnivCtx& source) {
  if (phi.entries.size() != source.size()) return false;
  for (const Level& l : phi.entries)
    if (!wf_level(target, l)) return false;
  return true;
}

// Lifting under n fresh binders: the new variables map to themselves and the
// old entries are shifted past them.
inline UnivSubst usubst_lift(const UnivSubst& phi, std::size_t n) {
  if (n == 0) return phi;
  UnivSubst r;
  r.entries.reserve(phi.entries.size() + n);
  for (std::size_t i = 0; i < n; ++i) r.entries.push_back(Level::var(static_cast<int>(i)));
  for (const Level& l : phi.entries) r.entries.push_back(ushift_level(l, static_cast<int>(n)));
  return r;
}

// Renders a level against a context of display names; used by diagnostics
// and the level-norm command.
inline std::string show_level(const UnivCtx& ctx, const Level& l, bool parens = false) {
  switch (l.kind()) {
    case Level::Kind::Omega: return "omega";
    case Level::Kind::Zero: return "0";
    case Level::Kind::Var: {
      std::size_t i = static_cast<std::size_t>(l.var_index());
      if (i < ctx.size()) return ctx.names[ctx.size() - 1 - i];
      return "?l" + std::to_string(i);
    }
    case Level::Kind::Succ: {
      std::uint64_t n = 0;
      Level cur = l;
      while (cur.kind() == Level::Kind::Succ) {
        ++n;
        cur = cur.arg();
      }
      if (cur.is_zero()) return std::to_string(n);
      std::string s = std::to_string(n) + "+" + show_level(ctx, cur, true);
      return parens ? "(" + s + ")" : s;
    }
    case Level::Kind::Lub: {
      std::string s = show_level(ctx, l.lhs(), true) + " \\/ " + show_level(ctx, l.rhs(), true);
      return parens ? "(" + s + ")" : s;
    }
  }
  return "?";
}

}  // namespace delam
