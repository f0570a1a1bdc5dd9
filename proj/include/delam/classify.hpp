#pragma once

// Weak-head classification of types and terms: weak head normal, neutral, or
// reducible. The buckets mirror the single-step reduction relation, so a
// well-formed subject is reducible exactly when a step applies.

#include "delam/syntax.hpp"

namespace delam {

enum class Form { Whnf, Neutral, Reducible };

inline Form classify_type_whnf(const Type& t);
inline Form classify_term_whnf(const Term& t);

// Heads a type-code recursor can dispatch on.
inline bool dispatchable_type_code(const Type& t) {
  return t.is<TyNat>() || t.is<TyPi>() || t.is<TyTy>() || t.is<TyEl>();
}

// Heads a term-code recursor can dispatch on.
inline bool dispatchable_term_code(const Term& t) {
  return t.is<TmVar>() || t.is<TmNat>() || t.is<TmPi>() || t.is<TmTy>() || t.is<TmZero>() ||
         t.is<TmSucc>() || t.is<TmElimNat>() || t.is<TmLam>() || t.is<TmApp>();
}

inline Form classify_type_whnf(const Type& t) {
  return std::visit(
      overloaded{[&](const TyGlobal&) { return Form::Neutral; },
                 [&](const TyEl& x) {
                   switch (classify_term_whnf(x.code)) {
                     case Form::Neutral: return Form::Neutral;
                     case Form::Reducible: return Form::Reducible;
                     case Form::Whnf: return Form::Reducible;  // code heads decode
                   }
                   return Form::Reducible;
                 },
                 [&](const auto&) { return Form::Whnf; }},
      t.node().v);
}

namespace detail {

// Shared shape of all one-hole eliminators: neutral head blocks, reducible
// head reduces, anything else is a redex (or stuck garbage on ill-typed
// input).
inline Form classify_elim_head(const Term& head) {
  switch (classify_term_whnf(head)) {
    case Form::Neutral: return Form::Neutral;
    default: return Form::Reducible;
  }
}

}  // namespace detail

inline Form classify_term_whnf(const Term& t) {
  return std::visit(
      overloaded{
          [&](const TmVar&) { return Form::Neutral; },
          [&](const TmGlobal&) { return Form::Neutral; },
          [&](const TmElimNat& x) { return detail::classify_elim_head(x.scrut); },
          [&](const TmApp& x) { return detail::classify_elim_head(x.fn); },
          [&](const TmUApp& x) { return detail::classify_elim_head(x.fn); },
          [&](const TmCtxApp& x) { return detail::classify_elim_head(x.fn); },
          [&](const TmTyApp& x) { return detail::classify_elim_head(x.fn); },
          [&](const TmLetBoxTy& x) { return detail::classify_elim_head(x.scrut); },
          [&](const TmLetBoxTm& x) { return detail::classify_elim_head(x.scrut); },
          [&](const TmElimTyp& x) {
            if (const auto* b = x.scrut.as<TmBoxTy>())
              return b->body.is<TyGlobal>() ? Form::Neutral : Form::Reducible;
            return detail::classify_elim_head(x.scrut);
          },
          [&](const TmElimTrm& x) {
            if (classify_type_whnf(x.index_type) == Form::Reducible) return Form::Reducible;
            if (const auto* b = x.scrut.as<TmBoxTm>())
              return b->body.is<TmGlobal>() ? Form::Neutral : Form::Reducible;
            return detail::classify_elim_head(x.scrut);
          },
          [&](const auto&) { return Form::Whnf; }},
      t.node().v);
}

}  // namespace delam
