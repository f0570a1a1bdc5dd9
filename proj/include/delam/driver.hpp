#pragma once

// Whole-file checking: the universe and global contexts, then every
// definition against its declared type at its declared layer.

#include <optional>

#include "delam/parser.hpp"
#include "delam/typing.hpp"

namespace delam {

inline void check_file(const SourceFile& f, Fuel fuel = {}) {
  check_gctx(f.uctx, f.gctx, fuel);
  for (const Definition& d : f.defs) {
    TypingEnv e{f.uctx, f.gctx, LocalCtx{}, d.layer, fuel, {d.name}};
    // omega is admitted only here, for universe-polymorphic definitions
    if (!d.level.is_omega()) typing_detail::require_wf_level(e, d.level, "def");
    Level l = infer_type(e.with_layer(typeof_layer(d.layer)), d.type);
    typing_detail::require_level_eq(e, l, d.level, "def");
    check_term(e, d.term, d.type, d.level);
  }
}

inline const Definition* find_def(const SourceFile& f, const std::string& name) {
  for (const Definition& d : f.defs)
    if (d.name == name) return &d;
  return nullptr;
}

}  // namespace delam
