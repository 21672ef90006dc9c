#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace permsym {

enum class StateKind { mixed, dicke };

inline std::string_view to_string(StateKind k) { return k == StateKind::mixed ? "mixed" : "dicke"; }

inline StateKind parse_state_kind(std::string_view s)
{
  if (s == "mixed") return StateKind::mixed;
  if (s == "dicke") return StateKind::dicke;
  throw std::invalid_argument("unknown state kind '" + std::string(s) + "' (expected mixed or dicke)");
}

}  // namespace permsym
